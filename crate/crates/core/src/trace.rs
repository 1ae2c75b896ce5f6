use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The `(point, observed value)` history of a non-repeating run.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TraceRecord<S> {
    steps: Vec<(usize, S)>,
    budget: usize,
}

impl<S: Scalar> TraceRecord<S> {
    /// An empty trace for a run of `budget` steps on a space of `size` points.
    pub fn with_budget(budget: usize, size: usize) -> Result<Self> {
        if budget == 0 {
            return Err(Error::ZeroBudget);
        }
        if budget > size {
            return Err(Error::BudgetExceeded { budget, size });
        }
        Ok(Self {
            steps: Vec::with_capacity(budget),
            budget,
        })
    }

    /// Appends a step. Panics on a repeated point or when the budget is spent;
    /// both are programming errors in the algorithm producing the trace.
    pub fn push(&mut self, point: usize, value: S) {
        assert!(!self.is_complete(), "trace budget of {} exhausted", self.budget);
        assert!(!self.visited(point), "point {point} visited twice");
        self.steps.push((point, value));
    }

    pub fn visited(&self, point: usize) -> bool {
        self.steps.iter().any(|(p, _)| *p == point)
    }

    pub fn is_complete(&self) -> bool {
        self.steps.len() == self.budget
    }

    pub fn steps(&self) -> &[(usize, S)] {
        &self.steps
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn points(&self) -> Vec<usize> {
        self.steps.iter().map(|(p, _)| *p).collect()
    }

    pub fn values(&self) -> Vec<S> {
        self.steps.iter().map(|(_, v)| v.clone()).collect()
    }

    /// The first `m` steps.
    pub fn prefix(&self, m: usize) -> Self {
        let m = m.min(self.steps.len());
        Self {
            steps: self.steps[..m].to_vec(),
            budget: m.max(1),
        }
    }
}
