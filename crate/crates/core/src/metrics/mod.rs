//! Landscape structure measures whose presence across a set of functions
//! rules out closure under permutation, plus the trap and penalty
//! constructions.
//!
//! Everything is exact except fitness-distance correlation, which needs a
//! square root and is reported as `f64`.

mod crossover;
mod fdc;
mod transform;

pub use crossover::{crossover_locality, CrossoverOperator, CrossoverTable, FirstParent, UniformMask};
pub use fdc::{fdc, OptimumTies, FDC_TOLERANCE};
pub use transform::{penalty_composite, trap_transform};

use std::collections::BTreeSet;

use crate::enumeration::FunctionSet;
use crate::error::{Error, Result};
use crate::scalar::{mean, Scalar};
use crate::space::SearchSpace;
use crate::table::ValueTable;

/// A pair of expectations or maxima with the verdict `left < right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison<S> {
    pub left: S,
    pub right: S,
    pub holds: bool,
}

impl<S: Scalar> Comparison<S> {
    fn strict(left: S, right: S) -> Self {
        let holds = left < right;
        Self { left, right, holds }
    }
}

fn abs_diff<S: Scalar>(a: &S, b: &S) -> S {
    (a.clone() - b.clone()).abs()
}

fn checked_adjacency<'a, S: Scalar>(space: &'a SearchSpace<S>, f: &ValueTable<S>) -> Result<&'a [Vec<usize>]> {
    f.check_space(space)?;
    let adj = space.adjacency()?;
    if let Some(x) = adj.iter().position(Vec::is_empty) {
        return Err(Error::IsolatedPoint(x));
    }
    Ok(adj)
}

/// Mean `|f(x) - f(y)|` over ordered pairs with `x != y`.
pub fn random_pair_expectation<S: Scalar>(f: &ValueTable<S>) -> Result<S> {
    let v = f.values();
    if v.len() < 2 {
        return Err(Error::InvalidSpace("need at least two points for pairs".into()));
    }
    let diffs = (0..v.len()).flat_map(|x| {
        (0..v.len())
            .filter(move |&y| y != x)
            .map(move |y| abs_diff(&v[x], &v[y]))
    });
    Ok(mean(diffs).expect("at least two points"))
}

/// Neighbor expectation over all ordered `(x, neighbor)` pairs against the
/// random-pair baseline (pairs with `x = y` excluded).
pub fn locality<S: Scalar>(space: &SearchSpace<S>, f: &ValueTable<S>) -> Result<Comparison<S>> {
    locality_steps(space, f, 1)
}

/// Locality through `k` neighbor steps: the left side averages over every
/// walk of length `k`, so `k = 2` measures `f(N(N(x)))` (walks may return).
pub fn locality_steps<S: Scalar>(space: &SearchSpace<S>, f: &ValueTable<S>, k: usize) -> Result<Comparison<S>> {
    if k == 0 {
        return Err(Error::ZeroBudget);
    }
    let adj = checked_adjacency(space, f)?;
    // walks[x][y] = number of k-step walks from x to y.
    let n = space.size();
    let mut total = S::zero();
    let mut walks_total: u128 = 0;
    for x in 0..n {
        let mut counts = vec![0u128; n];
        counts[x] = 1;
        for _ in 0..k {
            let mut next = vec![0u128; n];
            for (u, &c) in counts.iter().enumerate() {
                if c > 0 {
                    for &w in &adj[u] {
                        next[w] += c;
                    }
                }
            }
            counts = next;
        }
        for (y, &c) in counts.iter().enumerate() {
            if c > 0 {
                walks_total += c;
                total = total + abs_diff(f.value(x), f.value(y)) * S::count(c as usize);
            }
        }
    }
    let left = total / S::count(walks_total as usize);
    Ok(Comparison::strict(left, random_pair_expectation(f)?))
}

/// Largest neighbor difference against the global value range. `holds`
/// means no maximal steepness (the function is discrete-Lipschitz).
pub fn steepness<S: Scalar>(space: &SearchSpace<S>, f: &ValueTable<S>) -> Result<Comparison<S>> {
    let adj = checked_adjacency(space, f)?;
    let neighbor_max = adj
        .iter()
        .enumerate()
        .flat_map(|(x, ns)| ns.iter().map(move |&y| abs_diff(f.value(x), f.value(y))))
        .max()
        .expect("every point has a neighbor");
    let values = f.values();
    let range = values.iter().max().expect("non-empty").clone() - values.iter().min().expect("non-empty").clone();
    Ok(Comparison::strict(neighbor_max, range))
}

/// Points with no strictly better neighbor under the table's orientation.
pub fn count_local_optima<S: Scalar>(space: &SearchSpace<S>, f: &ValueTable<S>) -> Result<usize> {
    f.check_space(space)?;
    let adj = space.adjacency()?;
    Ok((0..space.size())
        .filter(|&x| !adj[x].iter().any(|&y| f.better(f.value(y), f.value(x))))
        .count())
}

/// The distinct local-optima counts achieved across a set. A count missing
/// here that some function on the space can achieve shows the set is not
/// closed under permutation.
pub fn local_optima_counts<S: Scalar>(space: &SearchSpace<S>, fs: &FunctionSet<S>) -> Result<BTreeSet<usize>> {
    fs.members()
        .iter()
        .map(|f| count_local_optima(space, f))
        .collect()
}

/// Simplified modularity: the fraction of bit positions whose toggle
/// `f(x | bit) - f(x)` never changes sign across the other bits' contexts.
pub fn modularity_score<S: Scalar>(space: &SearchSpace<S>, f: &ValueTable<S>) -> Result<S> {
    f.check_space(space)?;
    let n = space.bit_width().ok_or(Error::NonPositional)?;
    let consistent = (0..n)
        .filter(|&b| {
            let mask = 1usize << b;
            let deltas: Vec<S> = (0..space.size())
                .filter(|x| x & mask == 0)
                .map(|x| f.value(x | mask).clone() - f.value(x).clone())
                .collect();
            deltas.iter().all(|d| !d.is_negative()) || deltas.iter().all(|d| !d.is_positive())
        })
        .count();
    Ok(S::count(consistent) / S::count(n as usize))
}

/// All structure measures for one function on a bitstring-style space.
/// Measures whose prerequisites are missing are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport<S> {
    pub locality: Comparison<S>,
    pub steepness: Comparison<S>,
    pub fdc: Option<f64>,
    pub local_optima: usize,
    pub modularity: Option<S>,
}

pub fn structure_report<S: Scalar>(space: &SearchSpace<S>, f: &ValueTable<S>) -> Result<StructureReport<S>> {
    Ok(StructureReport {
        locality: locality(space, f)?,
        steepness: steepness(space, f)?,
        fdc: fdc(space, f, OptimumTies::Reject).ok(),
        local_optima: count_local_optima(space, f)?,
        modularity: modularity_score(space, f).ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Orientation;
    use num_rational::Rational64;

    type R = Rational64;

    fn bits(n: u32) -> SearchSpace<R> {
        SearchSpace::bitstrings(n).unwrap()
    }

    #[test]
    fn onemax_locality() {
        let f = ValueTable::onemax(4).unwrap();
        let c = locality(&bits(4), &f).unwrap();
        assert_eq!(c.left, R::int(1));
        assert_eq!(c.right, R::new(7, 6));
        assert!(c.holds);
    }

    #[test]
    fn constant_fails_every_strict_verdict() {
        let space = bits(3);
        let f = ValueTable::from_integers(&[2; 8], Orientation::Maximize).unwrap();
        let zero = Comparison { left: R::int(0), right: R::int(0), holds: false };
        assert_eq!(locality(&space, &f).unwrap(), zero);
        assert_eq!(steepness(&space, &f).unwrap(), zero);
        assert_eq!(crossover_locality(&space, &f, &FirstParent).unwrap(), zero);
        assert_eq!(count_local_optima(&space, &f).unwrap(), 8);
        assert_eq!(modularity_score(&space, &f).unwrap(), R::int(1));
    }

    #[test]
    fn locality_requires_neighbors() {
        let f = ValueTable::from_integers(&[0, 1, 2], Orientation::Maximize).unwrap();
        let bare = SearchSpace::<R>::new(3).unwrap();
        assert_eq!(locality(&bare, &f), Err(Error::MissingNeighborhood));
        let path = SearchSpace::new(3).unwrap().with_edges(&[(0, 1)]).unwrap();
        assert_eq!(locality(&path, &f), Err(Error::IsolatedPoint(2)));
        assert_eq!(count_local_optima(&bare, &f), Err(Error::MissingNeighborhood));
    }

    #[test]
    fn two_step_locality_on_a_path() {
        // Path 0-1-2 with f = (0, 1, 2): 2-walks are 0-1-0, 0-1-2, 1-0-1, 1-2-1, 2-1-0, 2-1-2.
        let space = SearchSpace::<R>::new(3).unwrap().with_edges(&[(0, 1), (1, 2)]).unwrap();
        let f = ValueTable::from_integers(&[0, 1, 2], Orientation::Maximize).unwrap();
        let c = locality_steps(&space, &f, 2).unwrap();
        assert_eq!(c.left, R::new(4, 6));
        assert_eq!(locality_steps(&space, &f, 1).unwrap(), locality(&space, &f).unwrap());
    }

    #[test]
    fn onemax_steepness_and_optima() {
        let f = ValueTable::onemax(4).unwrap();
        let c = steepness(&bits(4), &f).unwrap();
        assert_eq!((c.left, c.right, c.holds), (R::int(1), R::int(4), true));
        assert_eq!(count_local_optima(&bits(4), &f).unwrap(), 1);
    }

    #[test]
    fn modularity_extremes() {
        assert_eq!(modularity_score(&bits(3), &ValueTable::onemax(3).unwrap()).unwrap(), R::int(1));
        assert_eq!(modularity_score(&bits(3), &ValueTable::parity(3).unwrap()).unwrap(), R::int(0));
        let f = ValueTable::<R>::from_integers(&[0, 1, 2, 3], Orientation::Maximize).unwrap();
        assert_eq!(modularity_score(&SearchSpace::new(4).unwrap(), &f), Err(Error::NonPositional));
    }

    #[test]
    fn local_optima_census_over_a_set() {
        let space = bits(2);
        let fs = FunctionSet::new(
            4,
            [
                ValueTable::onemax(2).unwrap(),
                ValueTable::from_integers(&[1, 0, 0, 1], Orientation::Maximize).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(local_optima_counts(&space, &fs).unwrap(), BTreeSet::from([1, 2]));
    }

    #[test]
    fn structure_report_for_onemax() {
        let rep = structure_report(&bits(4), &ValueTable::onemax(4).unwrap()).unwrap();
        assert!(rep.locality.holds && rep.steepness.holds);
        assert!((rep.fdc.unwrap() + 1.0).abs() < FDC_TOLERANCE);
        assert_eq!(rep.local_optima, 1);
        assert_eq!(rep.modularity, Some(R::int(1)));
    }
}
