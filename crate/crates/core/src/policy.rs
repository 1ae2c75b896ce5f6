//! Deterministic non-repeating black-box algorithms as decision trees.
//!
//! A [`Policy`] picks its first point unconditionally, then branches on the
//! observed value. Each node has one child per value of a declared finite
//! codomain, and no root-to-leaf path visits a point twice. Subtrees are
//! reference counted so exhaustive enumerations can share them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::SearchSpace;
use crate::table::ValueTable;
use crate::trace::TraceRecord;

/// Anything that maps `(space, f, m)` deterministically to a trace using
/// only the values it observes.
pub trait BlackBox<S: Scalar>: Send + Sync {
    fn run(&self, space: &SearchSpace<S>, f: &ValueTable<S>, m: usize) -> Result<TraceRecord<S>>;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolicyNode {
    point: usize,
    children: Vec<Arc<PolicyNode>>,
}

impl PolicyNode {
    pub fn leaf(point: usize) -> Self {
        Self {
            point,
            children: Vec::new(),
        }
    }

    /// A node whose `i`-th child is followed after observing the `i`-th
    /// codomain value.
    pub fn branch(point: usize, children: Vec<Arc<PolicyNode>>) -> Self {
        Self { point, children }
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn children(&self) -> &[Arc<PolicyNode>] {
        &self.children
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Policy<S> {
    size: usize,
    codomain: Vec<S>,
    root: Arc<PolicyNode>,
}

impl<S: Scalar> Policy<S> {
    /// Validates and wraps a tree. The codomain is sorted; duplicates are rejected.
    pub fn new(size: usize, codomain: Vec<S>, root: Arc<PolicyNode>) -> Result<Self> {
        let codomain = normalize_codomain(codomain)?;
        let policy = Self {
            size,
            codomain,
            root,
        };
        let mut path = vec![false; size];
        policy.validate(&policy.root, &mut path)?;
        Ok(policy)
    }

    pub(crate) fn from_parts(size: usize, codomain: Vec<S>, root: Arc<PolicyNode>) -> Self {
        Self {
            size,
            codomain,
            root,
        }
    }

    fn validate(&self, node: &PolicyNode, path: &mut [bool]) -> Result<()> {
        if node.point >= self.size {
            return Err(Error::InvalidPolicy(format!(
                "point {} outside space of size {}",
                node.point, self.size
            )));
        }
        if path[node.point] {
            return Err(Error::InvalidPolicy(format!("point {} repeats on a path", node.point)));
        }
        if !node.children.is_empty() && node.children.len() != self.codomain.len() {
            return Err(Error::InvalidPolicy(format!(
                "node at point {} has {} children for a codomain of {}",
                node.point,
                node.children.len(),
                self.codomain.len()
            )));
        }
        path[node.point] = true;
        for child in &node.children {
            self.validate(child, path)?;
        }
        path[node.point] = false;
        Ok(())
    }

    /// Builds the exhaustive tree induced by a decision rule over partial traces.
    pub fn from_rule(
        size: usize,
        codomain: Vec<S>,
        rule: impl Fn(&[(usize, S)]) -> usize,
    ) -> Result<Self> {
        let codomain = normalize_codomain(codomain)?;
        if size == 0 {
            return Err(Error::InvalidSpace("size must be at least 1".into()));
        }
        let mut history = Vec::with_capacity(size);
        let root = build_from_rule(size, &codomain, &rule, &mut history)?;
        Ok(Self::from_parts(size, codomain, root))
    }

    /// Visits points `0, 1, 2, ...` regardless of observations.
    pub fn ascending(size: usize, codomain: Vec<S>) -> Result<Self> {
        Self::from_rule(size, codomain, |h| h.len())
    }

    /// Visits points `size-1, size-2, ...` regardless of observations.
    pub fn descending(size: usize, codomain: Vec<S>) -> Result<Self> {
        Self::from_rule(size, codomain, move |h| size - 1 - h.len())
    }

    /// A uniformly branching random exhaustive policy; `pick(n)` must
    /// return an index in `0..n`.
    pub fn random(size: usize, codomain: Vec<S>, mut pick: impl FnMut(usize) -> usize) -> Result<Self> {
        let codomain = normalize_codomain(codomain)?;
        if size == 0 {
            return Err(Error::InvalidSpace("size must be at least 1".into()));
        }
        let mut remaining: Vec<usize> = (0..size).collect();
        let root = build_random(&mut remaining, codomain.len(), &mut pick);
        Ok(Self::from_parts(size, codomain, root))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn codomain(&self) -> &[S] {
        &self.codomain
    }

    pub fn root(&self) -> &PolicyNode {
        &self.root
    }

    pub fn root_choice(&self) -> usize {
        self.root.point
    }

    /// True when every root-to-leaf path visits all points.
    pub fn is_exhaustive(&self) -> bool {
        fn full(node: &PolicyNode, depth: usize, size: usize) -> bool {
            if node.children.is_empty() {
                depth == size
            } else {
                node.children.iter().all(|c| full(c, depth + 1, size))
            }
        }
        full(&self.root, 1, self.size)
    }

    pub fn codomain_index(&self, value: &S) -> Result<usize> {
        self.codomain
            .binary_search(value)
            .map_err(|_| Error::CodomainMismatch {
                value: value.to_string(),
            })
    }

    /// Descends the tree along observed values for `m` steps.
    pub fn run_on(&self, space: &SearchSpace<S>, f: &ValueTable<S>, m: usize) -> Result<TraceRecord<S>> {
        f.check_space(space)?;
        if self.size != space.size() {
            return Err(Error::LengthMismatch {
                expected: space.size(),
                found: self.size,
            });
        }
        let mut trace = TraceRecord::with_budget(m, space.size())?;
        let mut node = &*self.root;
        loop {
            let value = f.value(node.point).clone();
            let branch = self.codomain_index(&value)?;
            trace.push(node.point, value);
            if trace.is_complete() {
                return Ok(trace);
            }
            node = node
                .children
                .get(branch)
                .ok_or(Error::PolicyExhausted { depth: trace.len() })?;
        }
    }
}

impl<S: Scalar> BlackBox<S> for Policy<S> {
    fn run(&self, space: &SearchSpace<S>, f: &ValueTable<S>, m: usize) -> Result<TraceRecord<S>> {
        self.run_on(space, f, m)
    }
}

pub(crate) fn normalize_codomain<S: Scalar>(mut codomain: Vec<S>) -> Result<Vec<S>> {
    if codomain.is_empty() {
        return Err(Error::InvalidPolicy("empty codomain".into()));
    }
    codomain.sort();
    if codomain.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidPolicy("duplicate codomain value".into()));
    }
    Ok(codomain)
}

fn build_from_rule<S: Scalar>(
    size: usize,
    codomain: &[S],
    rule: &impl Fn(&[(usize, S)]) -> usize,
    history: &mut Vec<(usize, S)>,
) -> Result<Arc<PolicyNode>> {
    let point = rule(history);
    if point >= size || history.iter().any(|(p, _)| *p == point) {
        return Err(Error::InvalidPolicy(format!(
            "rule chose point {point} after visiting {:?}",
            history.iter().map(|(p, _)| *p).collect::<Vec<_>>()
        )));
    }
    if history.len() + 1 == size {
        return Ok(Arc::new(PolicyNode::leaf(point)));
    }
    let mut children = Vec::with_capacity(codomain.len());
    for value in codomain {
        history.push((point, value.clone()));
        children.push(build_from_rule(size, codomain, rule, history)?);
        history.pop();
    }
    Ok(Arc::new(PolicyNode::branch(point, children)))
}

fn build_random(
    remaining: &mut Vec<usize>,
    arity: usize,
    pick: &mut impl FnMut(usize) -> usize,
) -> Arc<PolicyNode> {
    let i = pick(remaining.len()) % remaining.len();
    let point = remaining.swap_remove(i);
    let node = if remaining.is_empty() {
        PolicyNode::leaf(point)
    } else {
        let children = (0..arity).map(|_| build_random(remaining, arity, pick)).collect();
        PolicyNode::branch(point, children)
    };
    remaining.push(point);
    let last = remaining.len() - 1;
    remaining.swap(i, last);
    Arc::new(node)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Orientation;
    use num_rational::Rational64;

    fn r(v: i64) -> Rational64 {
        Rational64::int(v)
    }

    fn onemax2() -> (SearchSpace<Rational64>, ValueTable<Rational64>) {
        (SearchSpace::bitstrings(2).unwrap(), ValueTable::onemax(2).unwrap())
    }

    #[test]
    fn index_zero_then_three() {
        let (space, f) = onemax2();
        // 0 first, then always 3, then the rest ascending.
        let policy = Policy::from_rule(4, vec![r(0), r(1), r(2)], |h| match h.len() {
            0 => 0,
            1 => 3,
            2 => 1,
            _ => 2,
        })
        .unwrap();
        let trace = policy.run(&space, &f, 2).unwrap();
        assert_eq!(trace.steps(), &[(0, r(0)), (3, r(2))]);
    }

    #[test]
    fn single_step_trace() {
        let (space, f) = onemax2();
        let policy = Policy::descending(4, vec![r(0), r(1), r(2)]).unwrap();
        let trace = policy.run(&space, &f, 1).unwrap();
        assert_eq!(trace.steps(), &[(3, r(2))]);
    }

    #[test]
    fn codomain_mismatch_and_budget() {
        let (space, f) = onemax2();
        let policy = Policy::ascending(4, vec![r(0), r(1)]).unwrap();
        assert_eq!(
            policy.run(&space, &f, 4),
            Err(Error::CodomainMismatch { value: "2".into() })
        );
        assert_eq!(
            policy.run(&space, &f, 5),
            Err(Error::BudgetExceeded { budget: 5, size: 4 })
        );
    }

    #[test]
    fn validation_rejects_repeats_and_bad_arity() {
        let leaf = Arc::new(PolicyNode::leaf(0));
        let bad = Arc::new(PolicyNode::branch(0, vec![leaf.clone(), leaf.clone()]));
        assert!(matches!(
            Policy::new(2, vec![r(0), r(1)], bad),
            Err(Error::InvalidPolicy(_))
        ));
        let one = Arc::new(PolicyNode::branch(1, vec![leaf]));
        assert!(matches!(
            Policy::new(2, vec![r(0), r(1)], one),
            Err(Error::InvalidPolicy(_))
        ));
        assert!(Policy::<Rational64>::ascending(3, vec![r(0), r(0)]).is_err());
    }

    #[test]
    fn partial_tree_runs_out() {
        let space = SearchSpace::new(3).unwrap();
        let f = ValueTable::from_integers(&[0, 1, 0], Orientation::Maximize).unwrap();
        let policy = Policy::new(3, vec![r(0), r(1)], Arc::new(PolicyNode::leaf(2))).unwrap();
        assert!(!policy.is_exhaustive());
        assert_eq!(policy.run(&space, &f, 2), Err(Error::PolicyExhausted { depth: 1 }));
    }

    #[test]
    fn random_policies_are_exhaustive() {
        let mut state = 7usize;
        let policy = Policy::random(4, vec![r(0), r(1), r(2)], |n| {
            state = state.wrapping_mul(31).wrapping_add(11);
            state % n
        })
        .unwrap();
        assert!(policy.is_exhaustive());
        let revalidated = Policy::new(4, policy.codomain().to_vec(), Arc::new(policy.root().clone()));
        assert!(revalidated.is_ok());
    }
}
