//! Exhaustive checks of the no-free-lunch identities.
//!
//! Every average is an exact rational and "equal" means `==`. Per-policy
//! work runs on the rayon pool; results keep the canonical policy order
//! whatever the worker count.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::enumeration::{is_cup, Enumerator, FunctionSet};
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::policy::{BlackBox, Policy};
use crate::scalar::{mean, Scalar};
use crate::space::SearchSpace;
use crate::table::{CupSignature, Orientation, ValueTable};

/// A probability distribution over tables with exact weights summing to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemDistribution<S> {
    entries: Vec<(ValueTable<S>, S)>,
}

impl<S: Scalar> ProblemDistribution<S> {
    /// Weights of repeated value sequences are merged.
    pub fn new(entries: impl IntoIterator<Item = (ValueTable<S>, S)>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<S>, (ValueTable<S>, S)> = BTreeMap::new();
        let mut size = None;
        for (table, weight) in entries {
            if weight.is_negative() {
                return Err(Error::NegativeWeight(weight.to_string()));
            }
            match size {
                None => size = Some(table.len()),
                Some(s) if s != table.len() => {
                    return Err(Error::LengthMismatch {
                        expected: s,
                        found: table.len(),
                    })
                }
                Some(_) => {}
            }
            merged
                .entry(table.values().to_vec())
                .and_modify(|(_, w)| *w = w.clone() + weight.clone())
                .or_insert((table, weight));
        }
        if merged.is_empty() {
            return Err(Error::EmptySet);
        }
        let total = merged.values().fold(S::zero(), |acc, (_, w)| acc + w.clone());
        if !total.is_one() {
            return Err(Error::Unnormalized {
                total: total.to_string(),
            });
        }
        Ok(Self {
            entries: merged.into_values().collect(),
        })
    }

    pub fn uniform(fs: &FunctionSet<S>) -> Result<Self> {
        if fs.is_empty() {
            return Err(Error::EmptySet);
        }
        let w = S::one() / S::count(fs.len());
        Ok(Self {
            entries: fs.members().iter().map(|m| (m.clone(), w.clone())).collect(),
        })
    }

    pub fn entries(&self) -> &[(ValueTable<S>, S)] {
        &self.entries
    }

    /// Entries with strictly positive weight.
    pub fn support(&self) -> impl Iterator<Item = &(ValueTable<S>, S)> {
        self.entries.iter().filter(|(_, w)| w.is_positive())
    }

    pub fn value_range(&self) -> Vec<S> {
        let mut out: Vec<S> = self
            .support()
            .flat_map(|(t, _)| t.values().iter().cloned())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Constant on every permutation class the support meets (classes the
    /// support misses carry weight zero throughout and are uniform).
    pub fn is_block_uniform(&self) -> bool {
        let mut classes: BTreeMap<CupSignature<S>, Vec<&S>> = BTreeMap::new();
        for (t, w) in self.support() {
            classes.entry(t.signature()).or_default().push(w);
        }
        classes.iter().all(|(sig, weights)| {
            weights.len() as u128 == sig.class_size() && weights.iter().all(|w| *w == weights[0])
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Claim {
    Nfl,
    Snfl,
    Nunfl,
}

impl Claim {
    pub fn name(self) -> &'static str {
        match self {
            Claim::Nfl => "nfl",
            Claim::Snfl => "snfl",
            Claim::Nunfl => "nunfl",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Verified,
    Refuted,
}

/// Two policies, by canonical index, whose averages differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerformanceWitness<S> {
    pub first: usize,
    pub second: usize,
    pub first_average: S,
    pub second_average: S,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport<S> {
    claim: Claim,
    averages: Vec<S>,
    witness: Option<PerformanceWitness<S>>,
}

impl<S: Scalar> VerificationReport<S> {
    /// Refuted iff some average differs from the first; the witness pairs
    /// policy 0 with the first policy that differs.
    pub fn from_averages(claim: Claim, averages: Vec<S>) -> Self {
        let witness = averages
            .iter()
            .position(|a| *a != averages[0])
            .map(|i| PerformanceWitness {
                first: 0,
                second: i,
                first_average: averages[0].clone(),
                second_average: averages[i].clone(),
            });
        Self {
            claim,
            averages,
            witness,
        }
    }

    pub fn claim(&self) -> Claim {
        self.claim
    }

    pub fn averages(&self) -> &[S] {
        &self.averages
    }

    pub fn verdict(&self) -> Verdict {
        if self.witness.is_some() {
            Verdict::Refuted
        } else {
            Verdict::Verified
        }
    }

    pub fn witness(&self) -> Option<&PerformanceWitness<S>> {
        self.witness.as_ref()
    }

    /// The shared average when verified.
    pub fn common_average(&self) -> Option<&S> {
        match self.verdict() {
            Verdict::Verified => self.averages.first(),
            Verdict::Refuted => None,
        }
    }
}

/// Exact expectation of `measure` over a distribution.
pub fn average_performance<S: Scalar, A: BlackBox<S> + ?Sized>(
    space: &SearchSpace<S>,
    dist: &ProblemDistribution<S>,
    algorithm: &A,
    measure: &Measure,
) -> Result<S> {
    let mut total = S::zero();
    for (f, w) in dist.support() {
        let trace = algorithm.run(space, f, measure.horizon())?;
        total = total + w.clone() * measure.apply(&trace, f.orientation())?;
    }
    Ok(total)
}

/// Uniform average over a function set.
pub fn average_over_set<S: Scalar, A: BlackBox<S> + ?Sized>(
    space: &SearchSpace<S>,
    fs: &FunctionSet<S>,
    algorithm: &A,
    measure: &Measure,
) -> Result<S> {
    average_performance(space, &ProblemDistribution::uniform(fs)?, algorithm, measure)
}

/// Uniform mixture of a deterministic family (e.g. one algorithm over seeds).
pub fn family_average<S: Scalar, A: BlackBox<S>>(
    space: &SearchSpace<S>,
    dist: &ProblemDistribution<S>,
    family: &[A],
    measure: &Measure,
) -> Result<S> {
    if family.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    let scores = family
        .par_iter()
        .map(|a| average_performance(space, dist, a, measure))
        .collect::<Result<Vec<S>>>()?;
    Ok(mean(scores).expect("non-empty family"))
}

fn policy_averages<S: Scalar>(
    space: &SearchSpace<S>,
    dist: &ProblemDistribution<S>,
    policies: &[Policy<S>],
    measure: &Measure,
) -> Result<Vec<S>> {
    policies
        .par_iter()
        .map(|p| average_performance(space, dist, p, measure))
        .collect()
}

/// Averages every enumerated policy over every function with values in `codomain`.
pub fn verify_nfl<S: Scalar>(
    space: &SearchSpace<S>,
    codomain: &[S],
    measure: &Measure,
    enumerator: &Enumerator,
) -> Result<VerificationReport<S>> {
    let fs = enumerator.functions(space.size(), codomain, Orientation::Maximize)?;
    let policies = enumerator.policies(space.size(), codomain)?;
    let dist = ProblemDistribution::uniform(&fs)?;
    let averages = policy_averages(space, &dist, &policies, measure)?;
    Ok(VerificationReport::from_averages(Claim::Nfl, averages))
}

pub fn verify_snfl<S: Scalar>(
    space: &SearchSpace<S>,
    cup: &FunctionSet<S>,
    measure: &Measure,
    enumerator: &Enumerator,
) -> Result<VerificationReport<S>> {
    require_cup(cup)?;
    let policies = enumerator.policies(space.size(), &cup.value_range())?;
    let dist = ProblemDistribution::uniform(cup)?;
    let averages = policy_averages(space, &dist, &policies, measure)?;
    Ok(VerificationReport::from_averages(Claim::Snfl, averages))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NunflReport<S> {
    pub block_uniform: bool,
    pub report: VerificationReport<S>,
}

/// Checks block-uniformity, then compares every policy's weighted average.
/// On a non-block-uniform distribution a refuted report is evidence for the
/// "only if" direction; a verified one means no enumerated pair differs.
pub fn verify_nunfl<S: Scalar>(
    space: &SearchSpace<S>,
    dist: &ProblemDistribution<S>,
    measure: &Measure,
    enumerator: &Enumerator,
) -> Result<NunflReport<S>> {
    let policies = enumerator.policies(space.size(), &dist.value_range())?;
    let averages = policy_averages(space, dist, &policies, measure)?;
    Ok(NunflReport {
        block_uniform: dist.is_block_uniform(),
        report: VerificationReport::from_averages(Claim::Nunfl, averages),
    })
}

fn require_cup<S: Scalar>(fs: &FunctionSet<S>) -> Result<()> {
    if fs.is_empty() {
        return Err(Error::EmptySet);
    }
    match is_cup(fs).witness {
        None => Ok(()),
        Some(w) => Err(Error::NotCup(w)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceMultisetReport<S> {
    pub equal: bool,
    /// Sorted full-length value sequences, one multiset per policy.
    pub multisets: Vec<Vec<Vec<S>>>,
    /// First policy whose multiset differs from policy 0's.
    pub mismatch: Option<usize>,
}

pub fn trace_multiset_equal<S: Scalar>(
    space: &SearchSpace<S>,
    cup: &FunctionSet<S>,
    policies: &[Policy<S>],
) -> Result<TraceMultisetReport<S>> {
    require_cup(cup)?;
    let multisets = policies
        .par_iter()
        .map(|p| {
            let mut seqs = cup
                .members()
                .iter()
                .map(|f| Ok(p.run(space, f, space.size())?.values()))
                .collect::<Result<Vec<_>>>()?;
            seqs.sort();
            Ok(seqs)
        })
        .collect::<Result<Vec<_>>>()?;
    let mismatch = multisets.iter().position(|m| *m != multisets[0]);
    Ok(TraceMultisetReport {
        equal: mismatch.is_none(),
        multisets,
        mismatch,
    })
}

/// Builds `f2` such that `a2` on `f2` observes the same first `m` values as
/// `a1` on `f1`. Points `a2` does not reach within `m` steps receive the
/// rest of `f1`'s value multiset, ascending, in ascending point order.
pub fn focus_pair<S: Scalar>(
    space: &SearchSpace<S>,
    a1: &Policy<S>,
    a2: &Policy<S>,
    f1: &ValueTable<S>,
    m: usize,
) -> Result<ValueTable<S>> {
    let target = a1.run(space, f1, m)?.values();
    let mut assigned: Vec<Option<S>> = vec![None; space.size()];
    let mut node = a2.root();
    for (step, value) in target.iter().enumerate() {
        assigned[node.point()] = Some(value.clone());
        let branch = a2.codomain_index(value)?;
        if step + 1 < target.len() {
            node = node
                .children()
                .get(branch)
                .ok_or(Error::PolicyExhausted { depth: step + 1 })?;
        }
    }
    let mut leftover = f1.values().to_vec();
    leftover.sort();
    for v in &target {
        let at = leftover.binary_search(v).expect("trace values come from f1");
        leftover.remove(at);
    }
    let mut rest = leftover.into_iter();
    let values = assigned
        .into_iter()
        .map(|slot| slot.unwrap_or_else(|| rest.next().expect("one value per point")))
        .collect();
    let f2 = ValueTable::new(values, f1.orientation())?;
    debug_assert_eq!(a2.run(space, &f2, m)?.values(), target);
    Ok(f2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport<S> {
    pub average_a: S,
    pub average_b: S,
    /// `average_a - average_b`.
    pub difference: S,
}

/// Compares two algorithm families, each averaged uniformly over its
/// members, on a set that must not be closed under permutation. A zero
/// difference is a legitimate outcome.
pub fn demonstrate_gap<S: Scalar, A: BlackBox<S>, B: BlackBox<S>>(
    space: &SearchSpace<S>,
    fs: &FunctionSet<S>,
    a: &[A],
    b: &[B],
    measure: &Measure,
) -> Result<GapReport<S>> {
    if fs.is_empty() {
        return Err(Error::EmptySet);
    }
    if is_cup(fs).closed {
        return Err(Error::IsCup);
    }
    let dist = ProblemDistribution::uniform(fs)?;
    let average_a = family_average(space, &dist, a, measure)?;
    let average_b = family_average(space, &dist, b, measure)?;
    Ok(GapReport {
        difference: average_a.clone() - average_b.clone(),
        average_a,
        average_b,
    })
}
