//! Exhaustive generation of functions, permutation classes and policies.
//!
//! Every generator refuses, rather than samples, when the object count
//! exceeds the enumerator's cap. Outputs are in canonical order: tables
//! lexicographic by value sequence, policies by root choice and then by
//! their child subtrees.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{CupWitness, Error, Result};
use crate::policy::{normalize_codomain, Policy, PolicyNode};
use crate::scalar::Scalar;
use crate::table::{CupSignature, Orientation, ValueTable};

pub const DEFAULT_CAP: u64 = 1_000_000;

/// A deduplicated, canonically ordered set of tables on a common space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionSet<S> {
    size: usize,
    members: Vec<ValueTable<S>>,
}

impl<S: Scalar> FunctionSet<S> {
    /// Tables sharing a value sequence are collapsed to the first in order.
    pub fn new(size: usize, members: impl IntoIterator<Item = ValueTable<S>>) -> Result<Self> {
        let mut members: Vec<ValueTable<S>> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|m| m.len() != size) {
            return Err(Error::LengthMismatch {
                expected: size,
                found: bad.len(),
            });
        }
        members.sort();
        members.dedup_by(|a, b| a.values() == b.values());
        Ok(Self { size, members })
    }

    pub fn singleton(f: ValueTable<S>) -> Self {
        Self {
            size: f.len(),
            members: vec![f],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn members(&self) -> &[ValueTable<S>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_values(&self, values: &[S]) -> bool {
        self.members
            .binary_search_by(|m| m.values().cmp(values))
            .is_ok()
    }

    /// Every value taken by some member, ascending and distinct.
    pub fn value_range(&self) -> Vec<S> {
        let mut out: Vec<S> = self
            .members
            .iter()
            .flat_map(|m| m.values().iter().cloned())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Outcome of a closure-under-permutation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CupCheck {
    pub closed: bool,
    pub witness: Option<CupWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumerator {
    cap: u64,
}

impl Default for Enumerator {
    fn default() -> Self {
        Self { cap: DEFAULT_CAP }
    }
}

impl Enumerator {
    pub fn new(cap: u64) -> Self {
        Self { cap }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    fn admit(&self, what: &'static str, count: Option<u128>) -> Result<()> {
        match count {
            Some(c) if c <= u128::from(self.cap) => Ok(()),
            Some(c) => Err(Error::EnumerationTooLarge {
                what,
                count: c.to_string(),
                cap: self.cap,
            }),
            None => Err(Error::EnumerationTooLarge {
                what,
                count: "more than 2^128".into(),
                cap: self.cap,
            }),
        }
    }

    /// All `|codomain|^size` tables, lexicographic by value sequence.
    pub fn functions<S: Scalar>(
        &self,
        size: usize,
        codomain: &[S],
        orientation: Orientation,
    ) -> Result<FunctionSet<S>> {
        let codomain = normalize_codomain(codomain.to_vec())?;
        if size == 0 {
            return Err(Error::InvalidSpace("size must be at least 1".into()));
        }
        let k = codomain.len() as u128;
        let count = u32::try_from(size).ok().and_then(|s| k.checked_pow(s));
        self.admit("functions", count)?;

        let mut digits = vec![0usize; size];
        let mut members = Vec::with_capacity(count.unwrap_or(0) as usize);
        loop {
            let values = digits.iter().map(|&d| codomain[d].clone()).collect();
            members.push(ValueTable::new(values, orientation)?);
            // Odometer with the last position fastest keeps lexicographic order.
            let mut pos = size;
            loop {
                if pos == 0 {
                    return Ok(FunctionSet { size, members });
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < codomain.len() {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    /// Every distinct table sharing `f`'s value multiset.
    pub fn cup_class<S: Scalar>(&self, f: &ValueTable<S>) -> Result<FunctionSet<S>> {
        let signature = f.signature();
        let size = signature.class_size();
        self.admit("class members", (size != u128::MAX).then_some(size))?;
        let mut values = signature.values().to_vec();
        let mut members = Vec::with_capacity(size as usize);
        loop {
            members.push(ValueTable::new(values.clone(), f.orientation())?);
            if !next_permutation(&mut values) {
                break;
            }
        }
        Ok(FunctionSet {
            size: f.len(),
            members,
        })
    }

    /// Every exhaustive deterministic non-repeating policy on `size` points
    /// branching over `codomain`, each exactly once.
    pub fn policies<S: Scalar>(&self, size: usize, codomain: &[S]) -> Result<Vec<Policy<S>>> {
        let codomain = normalize_codomain(codomain.to_vec())?;
        if size == 0 {
            return Err(Error::InvalidSpace("size must be at least 1".into()));
        }
        if size > 64 {
            return Err(Error::EnumerationTooLarge {
                what: "policies",
                count: "more than 2^128".into(),
                cap: self.cap,
            });
        }
        self.admit("policies", policy_count(size, codomain.len()))?;
        let full: u64 = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
        let mut memo = HashMap::new();
        let roots = subtrees(full, codomain.len(), &mut memo);
        Ok(roots
            .iter()
            .map(|root| Policy::from_parts(size, codomain.clone(), root.clone()))
            .collect())
    }
}

/// `C(s) = s * C(s-1)^k` with `C(0) = C(1) = 1`; `None` on overflow.
pub fn policy_count(size: usize, arity: usize) -> Option<u128> {
    let mut count: u128 = 1;
    for s in 2..=size {
        let power = count.checked_pow(u32::try_from(arity).ok()?)?;
        count = power.checked_mul(s as u128)?;
    }
    Some(count)
}

type Forest = Arc<Vec<Arc<PolicyNode>>>;

fn subtrees(remaining: u64, arity: usize, memo: &mut HashMap<u64, Forest>) -> Forest {
    if let Some(hit) = memo.get(&remaining) {
        return hit.clone();
    }
    let mut out = Vec::new();
    for point in (0..64).filter(|b| remaining & (1u64 << b) != 0) {
        let rest = remaining & !(1u64 << point);
        if rest == 0 {
            out.push(Arc::new(PolicyNode::leaf(point)));
            continue;
        }
        let children = subtrees(rest, arity, memo);
        // Cartesian power: one subtree per codomain value, first value slowest.
        let mut idx = vec![0usize; arity];
        loop {
            let picked = idx.iter().map(|&i| children[i].clone()).collect();
            out.push(Arc::new(PolicyNode::branch(point, picked)));
            let mut pos = arity;
            let done = loop {
                if pos == 0 {
                    break true;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < children.len() {
                    break false;
                }
                idx[pos] = 0;
            };
            if done {
                break;
            }
        }
    }
    let forest = Arc::new(out);
    memo.insert(remaining, forest.clone());
    forest
}

/// Rearranges into the next lexicographic permutation; false after the last.
fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn cup_signature<S: Scalar>(f: &ValueTable<S>) -> CupSignature<S> {
    f.signature()
}

/// Groups a set by signature, ordered by signature.
pub fn partition_cup<S: Scalar>(fs: &FunctionSet<S>) -> Vec<FunctionSet<S>> {
    let mut groups: BTreeMap<CupSignature<S>, Vec<ValueTable<S>>> = BTreeMap::new();
    for m in fs.members() {
        groups.entry(m.signature()).or_default().push(m.clone());
    }
    groups
        .into_values()
        .map(|members| FunctionSet {
            size: fs.size(),
            members,
        })
        .collect()
}

/// True iff, for every signature present, every table of that signature is
/// present. Otherwise the witness is the first member (canonical order) and
/// the first transposition leaving the set, trying the widest value gaps first.
pub fn is_cup<S: Scalar>(fs: &FunctionSet<S>) -> CupCheck {
    let mut counts: BTreeMap<CupSignature<S>, u128> = BTreeMap::new();
    for m in fs.members() {
        *counts.entry(m.signature()).or_default() += 1;
    }
    let incomplete: Vec<&CupSignature<S>> = counts
        .iter()
        .filter(|(sig, &n)| n != sig.class_size())
        .map(|(sig, _)| sig)
        .collect();
    if incomplete.is_empty() {
        return CupCheck {
            closed: true,
            witness: None,
        };
    }
    for (index, member) in fs.members().iter().enumerate() {
        if !incomplete.contains(&&member.signature()) {
            continue;
        }
        if let Some(swap) = escaping_swap(fs, member) {
            return CupCheck {
                closed: false,
                witness: Some(CupWitness {
                    member: index,
                    swap,
                }),
            };
        }
    }
    unreachable!("an incomplete class always has a member with an escaping transposition")
}

fn escaping_swap<S: Scalar>(fs: &FunctionSet<S>, member: &ValueTable<S>) -> Option<(usize, usize)> {
    let v = member.values();
    let mut pairs: Vec<(usize, usize)> = (0..v.len())
        .flat_map(|i| (i + 1..v.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| v[i] != v[j])
        .collect();
    pairs.sort_by(|&(a, b), &(c, d)| {
        let gap_ab = (v[a].clone() - v[b].clone()).abs();
        let gap_cd = (v[c].clone() - v[d].clone()).abs();
        gap_cd.cmp(&gap_ab).then((a, b).cmp(&(c, d)))
    });
    pairs
        .into_iter()
        .find(|&(i, j)| !fs.contains_values(member.swapped(i, j).values()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn r(v: i64) -> Rational64 {
        Rational64::int(v)
    }

    fn ints(values: &[i64]) -> ValueTable<Rational64> {
        ValueTable::from_integers(values, Orientation::Maximize).unwrap()
    }

    #[test]
    fn function_counts() {
        let e = Enumerator::default();
        assert_eq!(e.functions(3, &[r(0), r(1)], Orientation::Maximize).unwrap().len(), 8);
        assert_eq!(e.functions(2, &[r(0), r(1), r(2)], Orientation::Maximize).unwrap().len(), 9);
        assert_eq!(e.functions(4, &[r(0), r(1)], Orientation::Maximize).unwrap().len(), 16);
    }

    #[test]
    fn functions_are_lexicographic() {
        let fs = Enumerator::default()
            .functions(2, &[r(1), r(0)], Orientation::Maximize)
            .unwrap();
        let seqs: Vec<_> = fs.members().iter().map(|m| m.values().to_vec()).collect();
        assert_eq!(
            seqs,
            vec![vec![r(0), r(0)], vec![r(0), r(1)], vec![r(1), r(0)], vec![r(1), r(1)]]
        );
    }

    #[test]
    fn cap_refusal_reports_count() {
        let e = Enumerator::new(100);
        let err = e.functions(7, &[r(0), r(1)], Orientation::Maximize).unwrap_err();
        assert_eq!(
            err,
            Error::EnumerationTooLarge {
                what: "functions",
                count: "128".into(),
                cap: 100
            }
        );
        let err = e.policies(4, &[r(0), r(1)]).unwrap_err();
        assert!(matches!(err, Error::EnumerationTooLarge { ref count, .. } if count == "576"));
    }

    #[test]
    fn signatures() {
        assert_eq!(cup_signature(&ints(&[0, 1, 1, 2])).values(), ints(&[0, 1, 1, 2]).values());
        assert_eq!(cup_signature(&ints(&[0, 0, 0])).values(), ints(&[0, 0, 0]).values());
        let table1 = ints(&[0, 0, 1, 1, 1, 1, 1, 1]);
        assert_eq!(cup_signature(&table1).values(), table1.values());
    }

    #[test]
    fn class_sizes() {
        let e = Enumerator::default();
        assert_eq!(e.cup_class(&ints(&[2, 0, 1])).unwrap().len(), 6);
        assert_eq!(e.cup_class(&ints(&[5, 5, 5])).unwrap().len(), 1);
        let c = e.cup_class(&ints(&[1, 0, 0])).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.contains_values(ints(&[1, 0, 0]).values()));
    }

    #[test]
    fn partitions() {
        let e = Enumerator::default();
        let all2 = e.functions(2, &[r(0), r(1)], Orientation::Maximize).unwrap();
        let sizes: Vec<_> = partition_cup(&all2).iter().map(FunctionSet::len).collect();
        assert_eq!(sizes, vec![1, 2, 1]);
        let class = e.cup_class(&ints(&[0, 1, 2])).unwrap();
        assert_eq!(partition_cup(&class).len(), 1);
        let all3 = e.functions(3, &[r(0), r(1)], Orientation::Maximize).unwrap();
        let sizes: Vec<_> = partition_cup(&all3).iter().map(FunctionSet::len).collect();
        assert_eq!(sizes, vec![1, 3, 3, 1]);
    }

    #[test]
    fn cup_checks() {
        let e = Enumerator::default();
        assert!(is_cup(&e.cup_class(&ints(&[0, 1, 2])).unwrap()).closed);

        let onemax: ValueTable<Rational64> = ValueTable::onemax(3).unwrap();
        let single = FunctionSet::singleton(onemax);
        let check = is_cup(&single);
        assert!(!check.closed);
        assert_eq!(check.witness, Some(CupWitness { member: 0, swap: (0, 7) }));
    }

    #[test]
    fn policy_counts_match_recurrence() {
        let e = Enumerator::default();
        assert_eq!(e.policies(2, &[r(0), r(1)]).unwrap().len(), 2);
        assert_eq!(e.policies(2, &[r(0), r(1), r(2)]).unwrap().len(), 2);
        assert_eq!(e.policies(3, &[r(0), r(1)]).unwrap().len(), 12);
        assert_eq!(e.policies(3, &[r(0), r(1), r(2)]).unwrap().len(), 24);
        assert_eq!(policy_count(4, 3), Some(55_296));
        assert_eq!(policy_count(1, 5), Some(1));
    }

    #[test]
    fn policies_are_distinct_and_exhaustive() {
        let ps = Enumerator::default().policies(3, &[r(0), r(1)]).unwrap();
        for p in &ps {
            assert!(p.is_exhaustive());
        }
        let unique: std::collections::HashSet<_> = ps.iter().collect();
        assert_eq!(unique.len(), ps.len());
    }

    #[test]
    fn next_permutation_enumerates_multiset() {
        let mut v = vec![0, 0, 1];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
    }
}
