use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::SearchSpace;
use crate::table::ValueTable;

pub const FDC_TOLERANCE: f64 = 1e-9;

/// How to measure distance when several points share the best value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OptimumTies {
    #[default]
    Reject,
    /// Distance to the closest global optimum.
    Closest,
}

/// Pearson correlation between distance to the global optimum and `f(x)`,
/// over every point including the optimum. Moments are accumulated exactly;
/// only the final normalization is floating point.
pub fn fdc<S: Scalar>(space: &SearchSpace<S>, f: &ValueTable<S>, ties: OptimumTies) -> Result<f64> {
    f.check_space(space)?;
    let dist = space.distances()?;
    let optima = f.optima();
    if optima.len() > 1 && ties == OptimumTies::Reject {
        return Err(Error::TiedExtremum("optimum"));
    }
    let d: Vec<S> = (0..space.size())
        .map(|x| {
            optima
                .iter()
                .map(|&o| dist[x][o].clone())
                .min()
                .expect("at least one optimum")
        })
        .collect();
    let n = S::count(space.size());
    let mean_d = d.iter().cloned().fold(S::zero(), |a, b| a + b) / n.clone();
    let mean_f = f.values().iter().cloned().fold(S::zero(), |a, b| a + b) / n;
    let mut cov = S::zero();
    let mut var_d = S::zero();
    let mut var_f = S::zero();
    for (di, fi) in d.iter().zip(f.values()) {
        let dd = di.clone() - mean_d.clone();
        let df = fi.clone() - mean_f.clone();
        cov = cov + dd.clone() * df.clone();
        var_d = var_d + dd.clone() * dd;
        var_f = var_f + df.clone() * df;
    }
    if var_d.is_zero() {
        return Err(Error::ZeroVariance("distance"));
    }
    if var_f.is_zero() {
        return Err(Error::ZeroVariance("objective"));
    }
    let r = cov.approx() / (var_d.approx() * var_f.approx()).sqrt();
    Ok(r.clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::trap_transform;
    use crate::table::Orientation;
    use num_rational::Rational64;

    type R = Rational64;

    #[test]
    fn linear_in_distance_is_minus_one() {
        let space = SearchSpace::<R>::bitstrings(4).unwrap();
        let onemax = ValueTable::onemax(4).unwrap();
        assert!((fdc(&space, &onemax, OptimumTies::Reject).unwrap() + 1.0).abs() < FDC_TOLERANCE);
        let zeromax = ValueTable::zeromax(4).unwrap();
        assert!((fdc(&space, &zeromax, OptimumTies::Reject).unwrap() + 1.0).abs() < FDC_TOLERANCE);
    }

    #[test]
    fn trap_shifts_correlation_upward() {
        let space = SearchSpace::<R>::bitstrings(3).unwrap();
        let f = ValueTable::onemax(3).unwrap();
        let base = fdc(&space, &f, OptimumTies::Reject).unwrap();
        let trapped = fdc(&space, &trap_transform(&f).unwrap(), OptimumTies::Reject).unwrap();
        // cov = -3 and both variances are 6 over the eight points.
        assert!((trapped + 0.5).abs() < FDC_TOLERANCE);
        assert!(trapped > base);
    }

    #[test]
    fn ties_and_degenerate_inputs() {
        let space = SearchSpace::<R>::bitstrings(2).unwrap();
        let tied = ValueTable::from_integers(&[0, 1, 1, 0], Orientation::Maximize).unwrap();
        assert_eq!(fdc(&space, &tied, OptimumTies::Reject), Err(Error::TiedExtremum("optimum")));
        let r = fdc(&space, &tied, OptimumTies::Closest).unwrap();
        assert!((r + 1.0).abs() < FDC_TOLERANCE);
        let constant = ValueTable::from_integers(&[1, 1, 1, 1], Orientation::Maximize).unwrap();
        assert_eq!(fdc(&space, &constant, OptimumTies::Closest), Err(Error::ZeroVariance("distance")));
        let bare = SearchSpace::<R>::new(4).unwrap();
        assert_eq!(fdc(&bare, &ValueTable::onemax(2).unwrap(), OptimumTies::Reject), Err(Error::MissingDistance));
    }
}
