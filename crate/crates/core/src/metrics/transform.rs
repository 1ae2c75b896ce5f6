use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::table::ValueTable;

/// Swaps the values of the unique global optimum and the unique global
/// pessimum. The result has the same value multiset, and applying the
/// transform twice restores `f`.
pub fn trap_transform<S: Scalar>(f: &ValueTable<S>) -> Result<ValueTable<S>> {
    let optima = f.optima();
    if optima.len() != 1 {
        return Err(Error::TiedExtremum("optimum"));
    }
    let pessima = f.pessima();
    if pessima.len() != 1 {
        return Err(Error::TiedExtremum("pessimum"));
    }
    Ok(f.swapped(optima[0], pessima[0]))
}

/// Pointwise `f - lambda * g`. `g` must take at least two distinct values.
pub fn penalty_composite<S: Scalar>(f: &ValueTable<S>, g: &ValueTable<S>, lambda: &S) -> Result<ValueTable<S>> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch {
            expected: f.len(),
            found: g.len(),
        });
    }
    if g.is_constant() {
        return Err(Error::ConstantPenalty);
    }
    let values = f
        .values()
        .iter()
        .zip(g.values())
        .map(|(fv, gv)| fv.clone() - lambda.clone() * gv.clone())
        .collect();
    ValueTable::new(values, f.orientation())
}
