use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{solve, solve_nonnegative, Solution};
use crate::scalar::Scalar;
use crate::space::{Encoding, SearchSpace};
use crate::table::{Orientation, ValueTable};

use super::Realizability;

/// Largest city count for which every tour is enumerated.
const MAX_ENUMERATED_CITIES: usize = 10;

/// Symmetric travelling-salesman costs with a zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TspInstance<S> {
    costs: Vec<Vec<S>>,
}

impl<S: Scalar> TspInstance<S> {
    pub fn new(costs: Vec<Vec<S>>) -> Result<Self> {
        let n = costs.len();
        if n < 3 {
            return Err(Error::InvalidInstance("need at least three cities".into()));
        }
        for (i, row) in costs.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            if !row[i].is_zero() {
                return Err(Error::InvalidInstance(format!("cost from city {i} to itself is {}", row[i])));
            }
            for j in 0..i {
                if row[j] != costs[j][i] {
                    return Err(Error::InvalidInstance(format!("costs {i}-{j} and {j}-{i} differ")));
                }
            }
        }
        Ok(Self { costs })
    }

    pub fn from_integers(costs: &[Vec<i64>]) -> Result<Self> {
        Self::new(costs.iter().map(|r| r.iter().map(|&v| S::int(v)).collect()).collect())
    }

    pub fn cities(&self) -> usize {
        self.costs.len()
    }

    pub fn cost(&self, i: usize, j: usize) -> &S {
        &self.costs[i][j]
    }

    pub fn costs(&self) -> &[Vec<S>] {
        &self.costs
    }
}

/// A cyclic tour in canonical form: city 0 first, and the neighbor after
/// it smaller than the one before it, so rotations and reflections of the
/// same cycle compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tour(Vec<usize>);

impl Tour {
    pub fn new(order: &[usize]) -> Result<Self> {
        let n = order.len();
        if n < 3 {
            return Err(Error::InvalidTour("need at least three cities".into()));
        }
        let mut seen = vec![false; n];
        for &c in order {
            if c >= n || std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidTour(format!("{order:?} is not a permutation of 0..{n}")));
            }
        }
        Ok(Self::canonical(order))
    }

    fn canonical(order: &[usize]) -> Self {
        let start = order.iter().position(|&c| c == 0).expect("permutation contains 0");
        let mut t: Vec<usize> = order[start..].iter().chain(&order[..start]).copied().collect();
        if t[1] > t[t.len() - 1] {
            t[1..].reverse();
        }
        Self(t)
    }

    pub fn cities(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Undirected edges `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.0.len();
        (0..n).map(move |k| {
            let (a, b) = (self.0[k], self.0[(k + 1) % n]);
            (a.min(b), a.max(b))
        })
    }
}

impl fmt::Display for Tour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", labels.join(" "))
    }
}

/// Cyclic sum of consecutive costs along `order`.
pub fn tour_length<S: Scalar>(inst: &TspInstance<S>, order: &[usize]) -> Result<S> {
    if order.len() != inst.cities() {
        return Err(Error::InvalidTour(format!(
            "tour visits {} cities, instance has {}",
            order.len(),
            inst.cities()
        )));
    }
    let tour = Tour::new(order)?;
    Ok(tour.edges().fold(S::zero(), |acc, (i, j)| acc + inst.cost(i, j).clone()))
}

/// Every distinct tour reached by reversing one contiguous segment.
pub fn two_opt_neighbors(tour: &Tour) -> Result<Vec<Tour>> {
    two_opt_neighbors_within(tour, tour.len())
}

/// Segment reversals whose shorter side (segment or its complement) has at
/// most `max_span` cities. `max_span = 2` gives the exchanges of two
/// adjacent cities.
pub fn two_opt_neighbors_within(tour: &Tour, max_span: usize) -> Result<Vec<Tour>> {
    let n = tour.len();
    if n < 4 {
        return Err(Error::InvalidTour(format!("2-opt needs at least four cities, got {n}")));
    }
    let mut out = BTreeSet::new();
    for i in 1..n {
        for j in i + 1..n {
            let seg = j - i + 1;
            let span = seg.min(n - seg);
            if span < 2 || span > max_span {
                continue;
            }
            let mut t = tour.0.clone();
            t[i..=j].reverse();
            let t = Tour::canonical(&t);
            if &t != tour {
                out.insert(t);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// All `(n - 1)! / 2` canonical tours in lexicographic order.
pub fn all_tours(cities: usize) -> Result<Vec<Tour>> {
    if cities < 3 {
        return Err(Error::InvalidTour("need at least three cities".into()));
    }
    if cities > MAX_ENUMERATED_CITIES {
        return Err(Error::EnumerationTooLarge {
            what: "tours",
            count: format!("({cities}-1)!/2"),
            cap: MAX_ENUMERATED_CITIES as u64,
        });
    }
    let mut rest: Vec<usize> = (1..cities).collect();
    let mut out = Vec::new();
    loop {
        if rest[0] < rest[rest.len() - 1] {
            out.push(Tour(std::iter::once(0).chain(rest.iter().copied()).collect()));
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// The tour search space with the full 2-opt neighborhood. Point `k` is
/// `tours[k]`.
pub fn tour_space<S: Scalar>(cities: usize) -> Result<(Vec<Tour>, SearchSpace<S>)> {
    let tours = all_tours(cities)?;
    let adjacency = if cities >= 4 {
        tours
            .iter()
            .map(|t| {
                Ok(two_opt_neighbors(t)?
                    .iter()
                    .map(|nb| tours.binary_search(nb).expect("canonical tours are enumerated"))
                    .collect())
            })
            .collect::<Result<Vec<Vec<usize>>>>()?
    } else {
        vec![Vec::new(); tours.len()]
    };
    let space = SearchSpace::new(tours.len())?
        .with_encoding(Encoding::Permutation(cities))?
        .with_adjacency(adjacency)?;
    Ok((tours, space))
}

/// Tour lengths as a table to minimize.
pub fn tour_table<S: Scalar>(inst: &TspInstance<S>, tours: &[Tour]) -> Result<ValueTable<S>> {
    let values = tours
        .iter()
        .map(|t| tour_length(inst, t.cities()))
        .collect::<Result<Vec<_>>>()?;
    ValueTable::new(values, Orientation::Minimize)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TourConstraint<S> {
    pub tour: Tour,
    pub length: S,
}

/// Decides whether some symmetric cost matrix gives every constrained tour
/// its target length. Costs are unknowns, one per unordered city pair, and
/// may be negative unless `nonnegative` is set. An unrealizable system
/// comes with one multiplier per constraint: the combination cancels every
/// cost (or, with `nonnegative`, makes every coefficient nonpositive) while
/// the targets combine to a nonzero (positive) value.
pub fn tsp_realizable<S: Scalar>(
    cities: usize,
    constraints: &[TourConstraint<S>],
    nonnegative: bool,
) -> Result<Realizability<TspInstance<S>, Vec<S>>> {
    if constraints.is_empty() {
        return Err(Error::InvalidInstance("no tour constraints".into()));
    }
    if let Some(c) = constraints.iter().find(|c| c.tour.len() != cities) {
        return Err(Error::InvalidTour(format!("{} does not visit {cities} cities", c.tour)));
    }
    let pairs: Vec<(usize, usize)> = (0..cities).flat_map(|i| (i + 1..cities).map(move |j| (i, j))).collect();
    let rows: Vec<Vec<S>> = constraints
        .iter()
        .map(|c| {
            let mut row = vec![S::zero(); pairs.len()];
            for e in c.tour.edges() {
                let k = pairs.binary_search(&e).expect("edge is a city pair");
                row[k] = row[k].clone() + S::one();
            }
            row
        })
        .collect();
    let rhs: Vec<S> = constraints.iter().map(|c| c.length.clone()).collect();
    let solution = if nonnegative {
        solve_nonnegative(&rows, &rhs, pairs.len())?
    } else {
        solve(&rows, &rhs, pairs.len())?
    };
    Ok(match solution {
        Solution::Consistent(x) => {
            let mut costs = vec![vec![S::zero(); cities]; cities];
            for (&(i, j), v) in pairs.iter().zip(x) {
                costs[i][j] = v.clone();
                costs[j][i] = v;
            }
            Realizability::Realizable(TspInstance::new(costs)?)
        }
        Solution::Inconsistent(y) => Realizability::Unrealizable(y),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    type R = Rational64;

    fn tour(labels: &str) -> Tour {
        let order: Vec<usize> = labels.bytes().map(|b| (b - b'1') as usize).collect();
        Tour::new(&order).unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(tour("234561"), tour("123456"));
        assert_eq!(tour("165432"), tour("123456"));
        assert_eq!(tour("123456").cities(), &[0, 1, 2, 3, 4, 5]);
        assert!(Tour::new(&[0, 1, 1]).is_err());
        assert!(Tour::new(&[0, 1]).is_err());
    }

    #[test]
    fn neighbor_counts() {
        let t = tour("123456");
        let all = two_opt_neighbors(&t).unwrap();
        assert_eq!(all.len(), 9);
        let adjacent = two_opt_neighbors_within(&t, 2).unwrap();
        assert_eq!(adjacent.len(), 6);
        assert!(adjacent.contains(&tour("123465")));
        let four = two_opt_neighbors(&tour("1234")).unwrap();
        assert_eq!(four.len(), 2);
        assert!(two_opt_neighbors(&Tour::new(&[0, 1, 2]).unwrap()).is_err());
    }

    #[test]
    fn tour_enumeration() {
        assert_eq!(all_tours(3).unwrap().len(), 1);
        assert_eq!(all_tours(5).unwrap().len(), 12);
        assert_eq!(all_tours(6).unwrap().len(), 60);
        let (tours, space) = tour_space::<R>(5).unwrap();
        assert_eq!(space.size(), tours.len());
        assert!((0..space.size()).all(|x| space.neighbors(x).unwrap().len() == 5));
    }

    #[test]
    fn instance_validation() {
        assert!(TspInstance::<R>::from_integers(&[vec![0, 1, 2], vec![1, 0, 3], vec![2, 4, 0]]).is_err());
        assert!(TspInstance::<R>::from_integers(&[vec![1, 1, 2], vec![1, 0, 3], vec![2, 3, 0]]).is_err());
        let inst = TspInstance::<R>::from_integers(&[vec![0, 1, 2], vec![1, 0, 3], vec![2, 3, 0]]).unwrap();
        assert_eq!(tour_length(&inst, &[2, 0, 1]).unwrap(), R::int(6));
        assert!(tour_length(&inst, &[0, 1]).is_err());
    }

    #[test]
    fn single_constraint_is_underdetermined() {
        let c = TourConstraint { tour: tour("123456"), length: R::int(6) };
        let r = tsp_realizable(6, std::slice::from_ref(&c), false).unwrap();
        let inst = r.witness().unwrap();
        assert_eq!(tour_length(inst, c.tour.cities()).unwrap(), R::int(6));
    }

    fn ring() -> TspInstance<R> {
        TspInstance::from_integers(&[
            vec![0, 1, 2, 9, 2, 1],
            vec![1, 0, 1, 2, 9, 2],
            vec![2, 1, 0, 1, 2, 9],
            vec![9, 2, 1, 0, 1, 2],
            vec![2, 9, 2, 1, 0, 1],
            vec![1, 2, 9, 2, 1, 0],
        ])
        .unwrap()
    }

    #[test]
    fn ring_lengths() {
        let inst = ring();
        for (t, len) in [("123456", 6), ("142536", 32), ("123465", 8)] {
            assert_eq!(tour_length(&inst, tour(t).cities()).unwrap(), R::int(len), "{t}");
        }
    }

    /// The best ring tour at the worst length with its six adjacent-exchange
    /// neighbors at 8.
    fn swapped_system() -> Vec<TourConstraint<R>> {
        let best = tour("123456");
        let mut cs = vec![TourConstraint { tour: best.clone(), length: R::int(32) }];
        for nb in two_opt_neighbors_within(&best, 2).unwrap() {
            cs.push(TourConstraint { tour: nb, length: R::int(8) });
        }
        cs
    }

    #[test]
    fn swapped_system_needs_negative_costs() {
        let cs = swapped_system();
        assert_eq!(cs.len(), 7);
        let free = tsp_realizable(6, &cs, false).unwrap();
        let m = free.witness().expect("seven equations in fifteen unknowns are consistent");
        for c in &cs {
            assert_eq!(tour_length(m, c.tour.cities()).unwrap(), c.length);
        }
        assert!(m.costs().iter().flatten().any(|c| c < &R::int(0)));

        let y = tsp_realizable(6, &cs, true).unwrap();
        let y = y.certificate().expect("no nonnegative costs fit");
        // Each neighbor keeps four edges of the best tour and adds two chords,
        // so the neighbor lengths sum to 4 * 32 plus twice the chord costs.
        let combined = y.iter().zip(&cs).fold(R::int(0), |acc, (yi, c)| acc + yi * c.length);
        assert!(combined > R::int(0));
    }

    #[test]
    fn nonnegativity_can_refute() {
        // The first and third tours cover every edge, so zero lengths with
        // nonnegative costs force the second tour to zero as well.
        let a = tour("1234");
        let b = tour("1243");
        let constraints = vec![
            TourConstraint { tour: a.clone(), length: R::int(0) },
            TourConstraint { tour: b.clone(), length: R::int(5) },
            TourConstraint { tour: tour("1324"), length: R::int(0) },
        ];
        assert!(tsp_realizable(4, &constraints, false).unwrap().is_realizable());
        assert!(!tsp_realizable(4, &constraints, true).unwrap().is_realizable());
    }
}
