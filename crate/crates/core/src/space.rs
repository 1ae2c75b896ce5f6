//! Finite search spaces with optional neighborhood and distance structure.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// How points of a space map onto candidate solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    /// Bitstrings of the given width; point `i` is `i` written in binary with
    /// variable 0 as the most significant bit (the "natural" order).
    Bits(u32),
    /// Canonical tours over the given number of cities.
    Permutation(usize),
}

/// A finite indexed point set `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpace<S> {
    size: usize,
    encoding: Option<Encoding>,
    neighbors: Option<Vec<Vec<usize>>>,
    distance: Option<Vec<Vec<S>>>,
}

pub const MAX_BITS: u32 = 24;

impl<S: Scalar> SearchSpace<S> {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidSpace("size must be at least 1".into()));
        }
        Ok(Self {
            size,
            encoding: None,
            neighbors: None,
            distance: None,
        })
    }

    /// Bitstrings of width `n` with the bit-flip neighborhood and Hamming distance.
    pub fn bitstrings(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_BITS {
            return Err(Error::InvalidSpace(format!(
                "bit width must be in 1..={MAX_BITS}, got {n}"
            )));
        }
        let size = 1usize << n;
        let neighbors = (0..size)
            .map(|x| {
                let mut adj: Vec<usize> = (0..n).map(|b| x ^ (1 << b)).collect();
                adj.sort_unstable();
                adj
            })
            .collect();
        let distance = (0..size)
            .map(|x| {
                (0..size)
                    .map(|y| S::int(i64::from((x ^ y).count_ones())))
                    .collect()
            })
            .collect();
        Ok(Self {
            size,
            encoding: Some(Encoding::Bits(n)),
            neighbors: Some(neighbors),
            distance: Some(distance),
        })
    }

    pub fn with_encoding(mut self, encoding: Encoding) -> Result<Self> {
        let expected = match encoding {
            Encoding::Bits(n) if n == 0 || n > MAX_BITS => {
                return Err(Error::InvalidSpace(format!("bit width {n} out of range")))
            }
            Encoding::Bits(n) => Some(1usize << n),
            Encoding::Permutation(_) => None,
        };
        if let Some(expected) = expected {
            if expected != self.size {
                return Err(Error::LengthMismatch {
                    expected,
                    found: self.size,
                });
            }
        }
        self.encoding = Some(encoding);
        Ok(self)
    }

    /// Installs an undirected neighborhood from an edge list.
    pub fn with_edges(self, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); self.size];
        for &(a, b) in edges {
            self.check_point(a)?;
            self.check_point(b)?;
            adj[a].push(b);
            adj[b].push(a);
        }
        self.with_adjacency(adj)
    }

    /// Installs a neighborhood from adjacency lists, which must already be
    /// symmetric and free of self-loops.
    pub fn with_adjacency(mut self, mut adj: Vec<Vec<usize>>) -> Result<Self> {
        if adj.len() != self.size {
            return Err(Error::LengthMismatch {
                expected: self.size,
                found: adj.len(),
            });
        }
        for (x, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            for &y in list.iter() {
                self.check_point(y)?;
                if y == x {
                    return Err(Error::InvalidSpace(format!("self-loop at point {x}")));
                }
            }
        }
        for (x, list) in adj.iter().enumerate() {
            for &y in list {
                if adj[y].binary_search(&x).is_err() {
                    return Err(Error::InvalidSpace(format!(
                        "neighborhood not symmetric: {x} -> {y} without {y} -> {x}"
                    )));
                }
            }
        }
        self.neighbors = Some(adj);
        Ok(self)
    }

    /// Installs a distance matrix. Zero diagonal and symmetry are always
    /// checked; the triangle inequality only when `check_triangle` is set.
    pub fn with_distance(mut self, matrix: Vec<Vec<S>>, check_triangle: bool) -> Result<Self> {
        if matrix.len() != self.size {
            return Err(Error::LengthMismatch {
                expected: self.size,
                found: matrix.len(),
            });
        }
        for (x, row) in matrix.iter().enumerate() {
            if row.len() != self.size {
                return Err(Error::LengthMismatch {
                    expected: self.size,
                    found: row.len(),
                });
            }
            if !row[x].is_zero() {
                return Err(Error::InvalidSpace(format!("d({x},{x}) is not zero")));
            }
            for (y, d) in row.iter().enumerate() {
                if d.is_negative() {
                    return Err(Error::InvalidSpace(format!("d({x},{y}) is negative")));
                }
                if *d != matrix[y][x] {
                    return Err(Error::InvalidSpace(format!("d({x},{y}) != d({y},{x})")));
                }
            }
        }
        if check_triangle {
            for x in 0..self.size {
                for y in 0..self.size {
                    for z in 0..self.size {
                        if matrix[x][z] > matrix[x][y].clone() + matrix[y][z].clone() {
                            return Err(Error::InvalidSpace(format!(
                                "triangle inequality fails for ({x},{y},{z})"
                            )));
                        }
                    }
                }
            }
        }
        self.distance = Some(matrix);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn encoding(&self) -> Option<Encoding> {
        self.encoding
    }

    pub fn bit_width(&self) -> Option<u32> {
        match self.encoding {
            Some(Encoding::Bits(n)) => Some(n),
            _ => None,
        }
    }

    pub fn has_neighborhood(&self) -> bool {
        self.neighbors.is_some()
    }

    /// Neighbors of `x` in ascending index order.
    pub fn neighbors(&self, x: usize) -> Option<&[usize]> {
        self.neighbors.as_ref().map(|adj| adj[x].as_slice())
    }

    pub(crate) fn adjacency(&self) -> Result<&[Vec<usize>]> {
        self.neighbors.as_deref().ok_or(Error::MissingNeighborhood)
    }

    pub fn distance(&self, x: usize, y: usize) -> Option<&S> {
        self.distance.as_ref().map(|d| &d[x][y])
    }

    pub(crate) fn distances(&self) -> Result<&[Vec<S>]> {
        self.distance.as_deref().ok_or(Error::MissingDistance)
    }

    pub(crate) fn check_point(&self, x: usize) -> Result<()> {
        if x < self.size {
            Ok(())
        } else {
            Err(Error::InvalidSpace(format!(
                "point {x} outside space of size {}",
                self.size
            )))
        }
    }
}

/// Value of variable `var` (0 = most significant) in point `x` of a width-`n` space.
pub fn bit(x: usize, var: u32, n: u32) -> bool {
    (x >> (n - 1 - var)) & 1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    type Space = SearchSpace<Rational64>;

    #[test]
    fn bitstring_space_shape() {
        let s = Space::bitstrings(3).unwrap();
        assert_eq!(s.size(), 8);
        assert_eq!(s.neighbors(0).unwrap(), &[1, 2, 4]);
        assert_eq!(s.neighbors(7).unwrap(), &[3, 5, 6]);
        assert_eq!(s.distance(0, 7), Some(&Rational64::int(3)));
        assert!(bit(4, 0, 3) && !bit(4, 2, 3));
    }

    #[test]
    fn rejects_empty_space() {
        assert!(Space::new(0).is_err());
        assert!(Space::bitstrings(0).is_err());
    }

    #[test]
    fn edges_are_symmetrized_and_validated() {
        let s = Space::new(3).unwrap().with_edges(&[(0, 1), (1, 2)]).unwrap();
        assert_eq!(s.neighbors(1).unwrap(), &[0, 2]);
        assert!(Space::new(3).unwrap().with_edges(&[(0, 3)]).is_err());
        assert!(Space::new(3).unwrap().with_edges(&[(1, 1)]).is_err());
        let asym = vec![vec![1], vec![], vec![]];
        assert!(Space::new(3).unwrap().with_adjacency(asym).is_err());
    }

    #[test]
    fn distance_checks() {
        let r = Rational64::int;
        let bad_diag = vec![vec![r(1), r(1)], vec![r(1), r(0)]];
        assert!(Space::new(2).unwrap().with_distance(bad_diag, false).is_err());
        let asym = vec![vec![r(0), r(1)], vec![r(2), r(0)]];
        assert!(Space::new(2).unwrap().with_distance(asym, false).is_err());
        let no_triangle = vec![
            vec![r(0), r(1), r(5)],
            vec![r(1), r(0), r(1)],
            vec![r(5), r(1), r(0)],
        ];
        assert!(Space::new(3)
            .unwrap()
            .with_distance(no_triangle.clone(), false)
            .is_ok());
        assert!(Space::new(3).unwrap().with_distance(no_triangle, true).is_err());
    }
}
