use crate::error::{Error, Result};
use crate::scalar::{mean, Scalar};
use crate::space::SearchSpace;
use crate::table::ValueTable;

use super::{abs_diff, random_pair_expectation, Comparison};

/// A crossover returning one offspring. Randomized operators list every
/// equally likely outcome; deterministic ones return exactly one.
pub trait CrossoverOperator {
    fn offspring(&self, x: usize, y: usize) -> Vec<usize>;
}

/// `C(x, y) = x`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FirstParent;

impl CrossoverOperator for FirstParent {
    fn offspring(&self, x: usize, _y: usize) -> Vec<usize> {
        vec![x]
    }
}

/// Uniform crossover on bitstrings of a given width: every mask equally
/// likely, masked bits taken from the second parent.
#[derive(Debug, Clone, Copy)]
pub struct UniformMask {
    pub bits: u32,
}

impl CrossoverOperator for UniformMask {
    fn offspring(&self, x: usize, y: usize) -> Vec<usize> {
        (0..1usize << self.bits)
            .map(|mask| (x & !mask) | (y & mask))
            .collect()
    }
}

/// An explicit `table[x][y]` offspring map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossoverTable {
    table: Vec<Vec<usize>>,
}

impl CrossoverTable {
    pub fn new(table: Vec<Vec<usize>>) -> Self {
        Self { table }
    }
}

impl CrossoverOperator for CrossoverTable {
    fn offspring(&self, x: usize, y: usize) -> Vec<usize> {
        vec![self.table[x][y]]
    }
}

/// Expected `|f(x) - f(C(x, y))|` against the random-pair baseline; both
/// sides range over ordered pairs with `x != y`.
pub fn crossover_locality<S: Scalar, C: CrossoverOperator + ?Sized>(
    space: &SearchSpace<S>,
    f: &ValueTable<S>,
    cx: &C,
) -> Result<Comparison<S>> {
    f.check_space(space)?;
    let n = space.size();
    let mut per_pair = Vec::with_capacity(n * n.saturating_sub(1));
    for x in 0..n {
        for y in (0..n).filter(|&y| y != x) {
            let children = cx.offspring(x, y);
            if let Some(&bad) = children.iter().find(|&&c| c >= n) {
                return Err(Error::CrossoverOutOfRange { x, y, offspring: bad });
            }
            let diffs = children.iter().map(|&c| abs_diff(f.value(x), f.value(c)));
            per_pair.push(mean(diffs).ok_or_else(|| {
                Error::InvalidInstance(format!("crossover of {x} and {y} has no offspring"))
            })?);
        }
    }
    let left = mean(per_pair).ok_or_else(|| Error::InvalidSpace("need at least two points".into()))?;
    Ok(Comparison::strict(left, random_pair_expectation(f)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Orientation;
    use num_rational::Rational64;

    type R = Rational64;

    #[test]
    fn first_parent_has_zero_disruption() {
        let space = SearchSpace::<R>::bitstrings(3).unwrap();
        let f = ValueTable::parity(3).unwrap();
        let c = crossover_locality(&space, &f, &FirstParent).unwrap();
        assert_eq!(c.left, R::int(0));
        assert!(c.holds);
    }

    #[test]
    fn out_of_range_offspring() {
        let space = SearchSpace::<R>::new(2).unwrap();
        let f = ValueTable::from_integers(&[0, 1], Orientation::Maximize).unwrap();
        let bad = CrossoverTable::new(vec![vec![0, 5], vec![1, 1]]);
        assert_eq!(
            crossover_locality(&space, &f, &bad),
            Err(Error::CrossoverOutOfRange { x: 0, y: 1, offspring: 5 })
        );
    }
}
