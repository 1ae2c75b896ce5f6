//! Objective functions as explicit value tables.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::SearchSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Orientation {
    #[default]
    Maximize,
    Minimize,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Maximize => Orientation::Minimize,
            Orientation::Minimize => Orientation::Maximize,
        }
    }

    /// Orders `a` against `b` so that `Greater` means "a is better".
    pub fn compare<S: Ord>(self, a: &S, b: &S) -> Ordering {
        match self {
            Orientation::Maximize => a.cmp(b),
            Orientation::Minimize => b.cmp(a),
        }
    }

    pub fn better<S: Ord>(self, a: &S, b: &S) -> bool {
        self.compare(a, b) == Ordering::Greater
    }
}

/// One exact value per point of a search space.
///
/// Tables order lexicographically by value sequence, which is the canonical
/// order used by every enumeration and report.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValueTable<S> {
    values: Vec<S>,
    orientation: Orientation,
}

impl<S: Scalar> ValueTable<S> {
    pub fn new(values: Vec<S>, orientation: Orientation) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidTable("a table needs at least one value".into()));
        }
        Ok(Self { values, orientation })
    }

    pub fn maximize(values: Vec<S>) -> Result<Self> {
        Self::new(values, Orientation::Maximize)
    }

    pub fn from_integers(values: &[i64], orientation: Orientation) -> Result<Self> {
        Self::new(values.iter().map(|&v| S::int(v)).collect(), orientation)
    }

    /// `f(x) = Σ x_i` on bitstrings of width `n`.
    pub fn onemax(n: u32) -> Result<Self> {
        Self::from_bits(n, |x| i64::from(x.count_ones()))
    }

    /// Count of zero bits.
    pub fn zeromax(n: u32) -> Result<Self> {
        Self::from_bits(n, |x| i64::from(n - x.count_ones()))
    }

    /// 1 when an odd number of bits is set.
    pub fn parity(n: u32) -> Result<Self> {
        Self::from_bits(n, |x| i64::from(x.count_ones() % 2))
    }

    fn from_bits(n: u32, f: impl Fn(usize) -> i64) -> Result<Self> {
        if n == 0 || n > crate::space::MAX_BITS {
            return Err(Error::InvalidTable(format!("bit width {n} out of range")));
        }
        Self::maximize((0..1usize << n).map(|x| S::int(f(x))).collect())
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, x: usize) -> &S {
        &self.values[x]
    }

    pub fn check_space(&self, space: &SearchSpace<S>) -> Result<()> {
        if self.len() == space.size() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: space.size(),
                found: self.len(),
            })
        }
    }

    pub fn better(&self, a: &S, b: &S) -> bool {
        self.orientation.better(a, b)
    }

    /// The best value under this table's orientation.
    pub fn best_value(&self) -> &S {
        self.values
            .iter()
            .max_by(|a, b| self.orientation.compare(*a, *b))
            .expect("tables are non-empty")
    }

    pub fn worst_value(&self) -> &S {
        self.values
            .iter()
            .min_by(|a, b| self.orientation.compare(*a, *b))
            .expect("tables are non-empty")
    }

    /// All points attaining the best value, ascending.
    pub fn optima(&self) -> Vec<usize> {
        let best = self.best_value();
        self.points_with(best)
    }

    pub fn pessima(&self) -> Vec<usize> {
        let worst = self.worst_value();
        self.points_with(worst)
    }

    fn points_with(&self, v: &S) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.values[x] == *v).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|v| *v == self.values[0])
    }

    /// The same table with values at `a` and `b` exchanged.
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        out.values.swap(a, b);
        out
    }

    /// Pointwise negation with the orientation kept.
    pub fn negated(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| -v.clone()).collect(),
            orientation: self.orientation,
        }
    }

    pub fn signature(&self) -> CupSignature<S> {
        let mut values = self.values.clone();
        values.sort();
        CupSignature(values)
    }
}

/// The sorted multiset of a table's values; two tables lie in the same
/// permutation class exactly when their signatures agree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CupSignature<S>(Vec<S>);

impl<S: Scalar> CupSignature<S> {
    pub fn values(&self) -> &[S] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Distinct values with their multiplicities, ascending.
    pub fn multiplicities(&self) -> Vec<(S, usize)> {
        let mut out: Vec<(S, usize)> = Vec::new();
        for v in &self.0 {
            match out.last_mut() {
                Some((last, count)) if last == v => *count += 1,
                _ => out.push((v.clone(), 1)),
            }
        }
        out
    }

    /// Number of distinct tables with this signature (a multinomial
    /// coefficient), saturating at `u128::MAX`.
    pub fn class_size(&self) -> u128 {
        let mut size: u128 = 1;
        let mut placed: u128 = 0;
        // Product of binomials C(placed + k, k), each exact at every step.
        for (_, k) in self.multiplicities() {
            for i in 1..=k as u128 {
                placed += 1;
                size = match size.checked_mul(placed) {
                    Some(v) => v / i,
                    None => return u128::MAX,
                };
            }
        }
        size
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    type Table = ValueTable<Rational64>;

    fn ints(t: &Table) -> Vec<i64> {
        t.values().iter().map(|v| v.as_integer().unwrap()).collect()
    }

    #[test]
    fn generators() {
        assert_eq!(ints(&Table::onemax(2).unwrap()), vec![0, 1, 1, 2]);
        assert_eq!(ints(&Table::zeromax(2).unwrap()), vec![2, 1, 1, 0]);
        assert_eq!(ints(&Table::parity(3).unwrap()), vec![0, 1, 1, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn orientation_aware_extrema() {
        let t = Table::from_integers(&[2, 0, 5, 5], Orientation::Maximize).unwrap();
        assert_eq!(t.optima(), vec![2, 3]);
        assert_eq!(t.pessima(), vec![1]);
        let m = t.clone().with_orientation(Orientation::Minimize);
        assert_eq!(m.optima(), vec![1]);
        assert!(m.better(&Rational64::int(0), &Rational64::int(2)));
    }

    #[test]
    fn signatures_and_class_sizes() {
        let t = Table::onemax(2).unwrap();
        let sig = t.signature();
        assert_eq!(sig.values(), Table::from_integers(&[0, 1, 1, 2], Orientation::Maximize).unwrap().values());
        assert_eq!(sig.class_size(), 12);
        let inj = Table::from_integers(&[2, 0, 1], Orientation::Maximize).unwrap();
        assert_eq!(inj.signature().class_size(), 6);
        let c = Table::from_integers(&[0, 0, 0], Orientation::Maximize).unwrap();
        assert_eq!(c.signature().class_size(), 1);
        assert_eq!(Table::from_integers(&[0, 0, 1], Orientation::Maximize).unwrap().signature().class_size(), 3);
    }

    #[test]
    fn class_size_saturates() {
        let big = Table::new((0..40).map(Rational64::int).collect(), Orientation::Maximize).unwrap();
        assert_eq!(big.signature().class_size(), u128::MAX);
    }

    #[test]
    fn rejects_empty() {
        assert!(Table::maximize(vec![]).is_err());
    }
}
