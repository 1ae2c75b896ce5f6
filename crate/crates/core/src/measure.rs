//! Performance measures: scalar functionals of a trace's value sequence.

use crate::error::{Error, Result};
use crate::scalar::{mean, Scalar};
use crate::table::Orientation;
use crate::trace::TraceRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    /// Best value observed, under the table's orientation.
    BestSoFar,
    /// Arithmetic mean of the observed values.
    MeanOfTrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Measure {
    kind: MeasureKind,
    horizon: usize,
}

impl Measure {
    pub fn new(kind: MeasureKind, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::ZeroBudget);
        }
        Ok(Self { kind, horizon })
    }

    pub fn best_so_far(horizon: usize) -> Result<Self> {
        Self::new(MeasureKind::BestSoFar, horizon)
    }

    pub fn mean_of_trace(horizon: usize) -> Result<Self> {
        Self::new(MeasureKind::MeanOfTrace, horizon)
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Evaluates the measure on the first `horizon` steps of `trace`.
    pub fn apply<S: Scalar>(&self, trace: &TraceRecord<S>, orientation: Orientation) -> Result<S> {
        let steps = &trace.steps()[..self.horizon.min(trace.len())];
        if steps.is_empty() {
            return Err(Error::EmptyTrace);
        }
        let values = steps.iter().map(|(_, v)| v);
        Ok(match self.kind {
            MeasureKind::BestSoFar => values
                .max_by(|a, b| orientation.compare(*a, *b))
                .cloned()
                .expect("non-empty"),
            MeasureKind::MeanOfTrace => mean(values.cloned()).expect("non-empty"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn trace(values: &[i64]) -> TraceRecord<Rational64> {
        let mut t = TraceRecord::with_budget(values.len(), values.len()).unwrap();
        for (p, v) in values.iter().enumerate() {
            t.push(p, Rational64::int(*v));
        }
        t
    }

    #[test]
    fn best_and_mean() {
        let t = trace(&[0, 2, 1]);
        let r = Rational64::int;
        assert_eq!(Measure::best_so_far(3).unwrap().apply(&t, Orientation::Maximize), Ok(r(2)));
        assert_eq!(Measure::best_so_far(3).unwrap().apply(&t, Orientation::Minimize), Ok(r(0)));
        assert_eq!(Measure::mean_of_trace(3).unwrap().apply(&t, Orientation::Maximize), Ok(r(1)));
        assert_eq!(Measure::best_so_far(2).unwrap().apply(&t, Orientation::Maximize), Ok(r(2)));
        assert_eq!(Measure::mean_of_trace(2).unwrap().apply(&t, Orientation::Maximize), Ok(r(1)));
    }

    #[test]
    fn horizon_equals_prefix() {
        let t = trace(&[3, 1, 4, 1]);
        for h in 1..=4 {
            for m in [Measure::best_so_far(h).unwrap(), Measure::mean_of_trace(h).unwrap()] {
                let full = m.apply(&t, Orientation::Maximize).unwrap();
                let unbounded = Measure::new(m.kind(), 4).unwrap();
                assert_eq!(full, unbounded.apply(&t.prefix(h), Orientation::Maximize).unwrap());
            }
        }
    }

    #[test]
    fn empty_trace_errors() {
        let t = TraceRecord::<Rational64>::with_budget(1, 1).unwrap();
        assert_eq!(
            Measure::best_so_far(1).unwrap().apply(&t, Orientation::Maximize),
            Err(Error::EmptyTrace)
        );
        assert_eq!(Measure::new(MeasureKind::BestSoFar, 0), Err(Error::ZeroBudget));
    }
}
