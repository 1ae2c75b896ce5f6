//! Concrete non-repeating search algorithms used as demonstration subjects.
//!
//! Randomness comes from a seed that fixes a visiting order over all points:
//! random search walks that order, and local search restarts at the first
//! still-unvisited point of it. Two seed forms exist:
//!
//! * [`Seed::Lcg`] shuffles with a 64-bit linear congruential generator
//!   (multiplier `6364136223846793005`, increment `1442695040888963407`,
//!   bound via the high 32 bits times `n`, shifted right 32).
//! * [`Seed::Permutation`] decodes the seed in the factorial number system.
//!   Ranks `0..n!` cover every order exactly once, so averaging over
//!   [`exhaustive_seeds`] yields the algorithm's exact expected performance.
//!
//! Every objective query, neighbor probes included, consumes one step of
//! budget. Already-visited points are memoized and cost nothing.

use crate::enumeration::Enumerator;
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::policy::BlackBox;
use crate::scalar::{mean, Scalar};
use crate::space::SearchSpace;
use crate::table::ValueTable;
use crate::trace::TraceRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmKind {
    RandomSearch,
    /// Steepest ascent: probe every unvisited neighbor, move to the best
    /// strictly improving one (lowest index on ties), restart at a local optimum.
    BestFirst,
    /// Best-first on the negated objective.
    WorstFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Seed {
    Lcg(u64),
    Permutation(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeededAlgorithm {
    pub kind: AlgorithmKind,
    pub seed: Seed,
}

/// Knuth's MMIX linear congruential generator.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6_364_136_223_846_793_005;
    pub const INCREMENT: u64 = 1_442_695_040_888_963_407;

    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    /// An index in `0..n`; `n` must be below 2^32.
    pub fn below(&mut self, n: usize) -> usize {
        let high = self.next_u64() >> 32;
        ((high * n as u64) >> 32) as usize
    }
}

impl Seed {
    /// The visiting order this seed fixes over `0..size`.
    pub fn order(self, size: usize) -> Vec<usize> {
        match self {
            Seed::Lcg(s) => {
                let mut rng = Lcg::new(s);
                let mut order: Vec<usize> = (0..size).collect();
                for i in 0..size.saturating_sub(1) {
                    let j = i + rng.below(size - i);
                    order.swap(i, j);
                }
                order
            }
            Seed::Permutation(mut rank) => {
                let mut remaining: Vec<usize> = (0..size).collect();
                let mut order = Vec::with_capacity(size);
                for radix in (1..=size).rev() {
                    let digit = (rank % radix as u64) as usize;
                    rank /= radix as u64;
                    order.push(remaining.remove(digit));
                }
                order
            }
        }
    }
}

/// Permutation seeds `0..size!`, one per visiting order.
pub fn exhaustive_seeds(size: usize, enumerator: &Enumerator) -> Result<Vec<Seed>> {
    let count = (1..=size as u128).try_fold(1u128, |acc, k| acc.checked_mul(k));
    match count {
        Some(c) if c <= u128::from(enumerator.cap()) => {
            Ok((0..c as u64).map(Seed::Permutation).collect())
        }
        other => Err(Error::EnumerationTooLarge {
            what: "seeds",
            count: other.map_or_else(|| "more than 2^128".into(), |c| c.to_string()),
            cap: enumerator.cap(),
        }),
    }
}

impl SeededAlgorithm {
    pub fn new(kind: AlgorithmKind, seed: Seed) -> Self {
        Self { kind, seed }
    }

    /// One member per seed.
    pub fn family(kind: AlgorithmKind, seeds: &[Seed]) -> Vec<Self> {
        seeds.iter().map(|&seed| Self { kind, seed }).collect()
    }

    pub fn run_on<S: Scalar>(
        &self,
        space: &SearchSpace<S>,
        f: &ValueTable<S>,
        m: usize,
    ) -> Result<TraceRecord<S>> {
        f.check_space(space)?;
        let mut trace = TraceRecord::with_budget(m, space.size())?;
        let order = self.seed.order(space.size());
        match self.kind {
            AlgorithmKind::RandomSearch => {
                for &x in &order[..m] {
                    trace.push(x, f.value(x).clone());
                }
            }
            AlgorithmKind::BestFirst | AlgorithmKind::WorstFirst => {
                let direction = if self.kind == AlgorithmKind::BestFirst {
                    f.orientation()
                } else {
                    f.orientation().flipped()
                };
                local_search(space, f, direction, &order, &mut trace)?;
            }
        }
        Ok(trace)
    }
}

fn local_search<S: Scalar>(
    space: &SearchSpace<S>,
    f: &ValueTable<S>,
    direction: crate::table::Orientation,
    order: &[usize],
    trace: &mut TraceRecord<S>,
) -> Result<()> {
    let adjacency = space.adjacency()?;
    let mut visited = vec![false; space.size()];
    let mut cursor = 0;
    let mut current: Option<usize> = None;
    let evaluate = |x: usize, trace: &mut TraceRecord<S>, visited: &mut [bool]| {
        visited[x] = true;
        trace.push(x, f.value(x).clone());
    };
    while !trace.is_complete() {
        let Some(c) = current else {
            while visited[order[cursor]] {
                cursor += 1;
            }
            let start = order[cursor];
            evaluate(start, trace, &mut visited);
            current = Some(start);
            continue;
        };
        for &y in &adjacency[c] {
            if trace.is_complete() {
                return Ok(());
            }
            if !visited[y] {
                evaluate(y, trace, &mut visited);
            }
        }
        let mut next: Option<usize> = None;
        for &y in &adjacency[c] {
            let improves = direction.better(f.value(y), f.value(c));
            let beats_next = next.is_none_or(|n| direction.better(f.value(y), f.value(n)));
            if improves && beats_next {
                next = Some(y);
            }
        }
        current = next;
    }
    Ok(())
}

impl<S: Scalar> BlackBox<S> for SeededAlgorithm {
    fn run(&self, space: &SearchSpace<S>, f: &ValueTable<S>, m: usize) -> Result<TraceRecord<S>> {
        self.run_on(space, f, m)
    }
}

/// Exact mean of `measure` over the seeded family of `kind`.
pub fn seed_average<S: Scalar>(
    kind: AlgorithmKind,
    space: &SearchSpace<S>,
    f: &ValueTable<S>,
    measure: &Measure,
    seeds: &[Seed],
) -> Result<S> {
    if seeds.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    let scores = seeds
        .iter()
        .map(|&seed| {
            let trace = SeededAlgorithm { kind, seed }.run_on(space, f, measure.horizon())?;
            measure.apply(&trace, f.orientation())
        })
        .collect::<Result<Vec<S>>>()?;
    Ok(mean(scores).expect("non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    use num_rational::Rational64;

    type R = Rational64;

    fn onemax3() -> (SearchSpace<R>, ValueTable<R>) {
        (SearchSpace::bitstrings(3).unwrap(), ValueTable::onemax(3).unwrap())
    }

    #[test]
    fn lcg_is_reproducible() {
        let mut a = Lcg::new(42);
        let mut b = Lcg::new(42);
        let xs: Vec<u64> = (0..5).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..5).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_eq!(Lcg::new(0).next_u64(), Lcg::INCREMENT);
    }

    #[test]
    fn orders_are_permutations() {
        for seed in [Seed::Lcg(1), Seed::Lcg(u64::MAX), Seed::Permutation(17)] {
            let mut order = seed.order(8);
            order.sort_unstable();
            assert_eq!(order, (0..8).collect::<Vec<_>>());
        }
    }

    #[test]
    fn permutation_seeds_biject() {
        let seeds = exhaustive_seeds(4, &Enumerator::default()).unwrap();
        let orders: HashSet<Vec<usize>> = seeds.iter().map(|s| s.order(4)).collect();
        assert_eq!(orders.len(), 24);
        assert_eq!(Seed::Permutation(0).order(4), vec![0, 1, 2, 3]);
        assert!(exhaustive_seeds(12, &Enumerator::default()).is_err());
    }

    #[test]
    fn best_first_from_zero_reaches_optimum() {
        let (space, f) = onemax3();
        let alg = SeededAlgorithm::new(AlgorithmKind::BestFirst, Seed::Permutation(0));
        let trace = alg.run_on(&space, &f, 8).unwrap();
        assert_eq!(trace.points()[0], 0);
        let mut best = R::int(-1);
        let mut bests = Vec::new();
        for v in trace.values() {
            best = best.max(v);
            bests.push(best);
        }
        assert!(bests.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(*bests.last().unwrap(), R::int(3));
        // 000, its neighbors 001 010 100, then steepest move to 001 and its fresh neighbors.
        assert_eq!(&trace.points()[..6], &[0, 1, 2, 4, 3, 5]);
    }

    #[test]
    fn random_search_full_budget_is_permutation() {
        let (space, f) = onemax3();
        for s in 0..20 {
            let trace = SeededAlgorithm::new(AlgorithmKind::RandomSearch, Seed::Lcg(s))
                .run_on(&space, &f, 8)
                .unwrap();
            let mut got = trace.values();
            got.sort();
            assert_eq!(got, f.signature().values());
        }
    }

    #[test]
    fn worst_first_mirrors_best_first() {
        let (space, f) = onemax3();
        let neg = f.negated();
        for s in 0..40 {
            for seed in [Seed::Lcg(s), Seed::Permutation(s * 997)] {
                let worst = SeededAlgorithm::new(AlgorithmKind::WorstFirst, seed)
                    .run_on(&space, &f, 8)
                    .unwrap();
                let best = SeededAlgorithm::new(AlgorithmKind::BestFirst, seed)
                    .run_on(&space, &neg, 8)
                    .unwrap();
                assert_eq!(worst.points(), best.points());
                let negated: Vec<R> = best.values().into_iter().map(|v| -v).collect();
                assert_eq!(worst.values(), negated);
            }
        }
    }

    #[test]
    fn local_search_needs_neighborhood() {
        let space = SearchSpace::<R>::new(4).unwrap();
        let f = ValueTable::from_integers(&[0, 1, 2, 3], Default::default()).unwrap();
        let alg = SeededAlgorithm::new(AlgorithmKind::BestFirst, Seed::Lcg(0));
        assert_eq!(alg.run_on(&space, &f, 2), Err(Error::MissingNeighborhood));
        let rs = SeededAlgorithm::new(AlgorithmKind::RandomSearch, Seed::Lcg(0));
        assert!(rs.run_on(&space, &f, 4).is_ok());
        assert_eq!(rs.run_on(&space, &f, 5), Err(Error::BudgetExceeded { budget: 5, size: 4 }));
    }

    #[test]
    fn seed_average_constant_and_full_budget() {
        let space = SearchSpace::<R>::bitstrings(3).unwrap();
        let c = ValueTable::from_integers(&[4; 8], Default::default()).unwrap();
        let seeds: Vec<Seed> = (0..10).map(Seed::Lcg).collect();
        let m = Measure::best_so_far(3).unwrap();
        for kind in [AlgorithmKind::RandomSearch, AlgorithmKind::BestFirst, AlgorithmKind::WorstFirst] {
            assert_eq!(seed_average(kind, &space, &c, &m, &seeds).unwrap(), R::int(4));
        }
        let (space, f) = onemax3();
        let all = exhaustive_seeds(8, &Enumerator::default()).unwrap();
        let full = Measure::best_so_far(8).unwrap();
        assert_eq!(
            seed_average(AlgorithmKind::RandomSearch, &space, &f, &full, &all).unwrap(),
            R::int(3)
        );
        assert_eq!(
            seed_average(AlgorithmKind::RandomSearch, &space, &f, &full, &[]),
            Err(Error::EmptySeedSet)
        );
    }

    /// Expected maximum of a uniform `k`-subset of a multiset, by counting
    /// subsets whose maximum stays below each threshold.
    fn hypergeometric_expected_max(multiset: &[i64], k: usize) -> R {
        fn choose(n: usize, k: usize) -> i64 {
            if k > n {
                return 0;
            }
            (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
        }
        let total = choose(multiset.len(), k);
        let mut distinct = multiset.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let below = |v: i64| choose(multiset.iter().filter(|&&x| x < v).count(), k);
        let at_most = |v: i64| choose(multiset.iter().filter(|&&x| x <= v).count(), k);
        distinct
            .iter()
            .map(|&v| R::new(v * (at_most(v) - below(v)), total))
            .sum()
    }

    #[test]
    fn random_search_average_matches_hypergeometric_oracle() {
        let (space, f) = onemax3();
        let all = exhaustive_seeds(8, &Enumerator::default()).unwrap();
        let m = Measure::best_so_far(4).unwrap();
        let got = seed_average(AlgorithmKind::RandomSearch, &space, &f, &m, &all).unwrap();
        let oracle = hypergeometric_expected_max(&[0, 1, 1, 1, 2, 2, 2, 3], 4);
        assert_eq!(got, oracle);
        assert_eq!(oracle, R::new(87, 35));
    }
}
