use crate::error::{Error, Result};
use crate::linalg::{affine_solutions, solve, Solution};
use crate::scalar::Scalar;
use crate::space::bit;
use crate::table::ValueTable;

use super::{Exhaustion, Realizability};

/// Largest number of fitness cases for which every target is tried.
const MAX_CASES: usize = 24;

/// Outputs of a Boolean function on every input case, in natural order
/// (input 0 is the most significant bit of the case index).
pub fn truth_table(inputs: u32, f: impl Fn(&[bool]) -> bool) -> Vec<bool> {
    (0..1usize << inputs)
        .map(|case| {
            let args: Vec<bool> = (0..inputs).map(|i| bit(case, i, inputs)).collect();
            f(&args)
        })
        .collect()
}

/// Number of cases on which each program agrees with the target.
pub fn boolgp_objective(programs: &[Vec<bool>], target: &[bool]) -> Result<Vec<usize>> {
    programs
        .iter()
        .map(|p| {
            if p.len() != target.len() {
                return Err(Error::LengthMismatch {
                    expected: target.len(),
                    found: p.len(),
                });
            }
            Ok(p.iter().zip(target).filter(|(a, b)| a == b).count())
        })
        .collect()
}

/// Tries every target semantics in natural order and returns the first that
/// gives each program its required score.
pub fn boolgp_realizable(programs: &[Vec<bool>], scores: &[usize]) -> Result<Realizability<Vec<bool>>> {
    let Some(cases) = programs.first().map(Vec::len) else {
        return Err(Error::InvalidInstance("no programs".into()));
    };
    if scores.len() != programs.len() {
        return Err(Error::LengthMismatch {
            expected: programs.len(),
            found: scores.len(),
        });
    }
    if let Some(p) = programs.iter().find(|p| p.len() != cases) {
        return Err(Error::LengthMismatch { expected: cases, found: p.len() });
    }
    if let Some(&s) = scores.iter().find(|&&s| s > cases) {
        return Err(Error::InvalidInstance(format!("score {s} exceeds {cases} cases")));
    }
    if cases > MAX_CASES {
        return Err(Error::EnumerationTooLarge {
            what: "target semantics",
            count: format!("2^{cases}"),
            cap: 1 << MAX_CASES,
        });
    }
    let width = cases as u32;
    let total = 1u128 << cases;
    for code in 0..1usize << cases {
        let target: Vec<bool> = (0..width).map(|i| bit(code, i, width)).collect();
        if boolgp_objective(programs, &target)? == scores {
            return Ok(Realizability::Realizable(target));
        }
    }
    Ok(Realizability::Unrealizable(Exhaustion {
        examined: total,
        search_space: total,
    }))
}

/// `|p - t|²` for each program semantics `p`.
pub fn squared_distances<S: Scalar>(programs: &[Vec<S>], target: &[S]) -> Result<Vec<S>> {
    programs
        .iter()
        .map(|p| {
            if p.len() != target.len() {
                return Err(Error::DimensionMismatch {
                    expected: target.len(),
                    found: p.len(),
                });
            }
            Ok(p.iter()
                .zip(target)
                .fold(S::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()) * (a.clone() - b.clone())))
        })
        .collect()
}

/// Result of intersecting spheres given by centers and squared radii.
///
/// The pairwise differences of the sphere equations cut out an affine set;
/// on it, the squared distance to the first center ranges over
/// `[range_min, range_max]` (`range_max = None` when unbounded). The spheres
/// meet exactly when the first squared radius lies in that range. Both are
/// `None` when the affine set is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereIntersection<S> {
    pub intersect: bool,
    /// A rational common point, when one was found.
    pub witness: Option<Vec<S>>,
    pub range_min: Option<S>,
    pub range_max: Option<S>,
}

pub fn spheres_intersect<S: Scalar>(centers: &[Vec<S>], squared_radii: &[S]) -> Result<SphereIntersection<S>> {
    let Some(first) = centers.first() else {
        return Err(Error::InvalidInstance("no spheres".into()));
    };
    let dim = first.len();
    if squared_radii.len() != centers.len() {
        return Err(Error::LengthMismatch {
            expected: centers.len(),
            found: squared_radii.len(),
        });
    }
    if let Some(c) = centers.iter().find(|c| c.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: c.len() });
    }
    if let Some(r) = squared_radii.iter().find(|r| r.is_negative()) {
        return Err(Error::InvalidInstance(format!("negative squared radius {r}")));
    }
    let norm = |v: &[S]| v.iter().fold(S::zero(), |acc, x| acc + x.clone() * x.clone());
    let two = S::int(2);
    // 2 (p_i - p_0) · t = |p_i|² - |p_0|² - r_i² + r_0²
    let rows: Vec<Vec<S>> = centers[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| two.clone() * (a.clone() - b.clone())).collect())
        .collect();
    let rhs: Vec<S> = centers[1..]
        .iter()
        .zip(&squared_radii[1..])
        .map(|(p, r)| norm(p) - norm(first) - r.clone() + squared_radii[0].clone())
        .collect();
    let Ok(set) = affine_solutions(&rows, &rhs, dim)? else {
        return Ok(SphereIntersection {
            intersect: false,
            witness: None,
            range_min: None,
            range_max: None,
        });
    };
    // Closest point of the affine set to the first center.
    let closest = if set.null_basis.is_empty() {
        set.particular.clone()
    } else {
        let k = set.null_basis.len();
        let gram: Vec<Vec<S>> = (0..k)
            .map(|a| (0..k).map(|b| dot(&set.null_basis[a], &set.null_basis[b])).collect())
            .collect();
        let offset: Vec<S> = first.iter().zip(&set.particular).map(|(a, b)| a.clone() - b.clone()).collect();
        let proj: Vec<S> = set.null_basis.iter().map(|v| dot(v, &offset)).collect();
        let Solution::Consistent(z) = solve(&gram, &proj, k)? else {
            unreachable!("kernel basis vectors are independent");
        };
        let mut t = set.particular.clone();
        for (v, zi) in set.null_basis.iter().zip(&z) {
            for (tj, vj) in t.iter_mut().zip(v) {
                *tj = tj.clone() + zi.clone() * vj.clone();
            }
        }
        t
    };
    let gap: Vec<S> = closest.iter().zip(first).map(|(a, b)| a.clone() - b.clone()).collect();
    let min = norm(&gap);
    let max = set.null_basis.is_empty().then(|| min.clone());
    let target = &squared_radii[0];
    let intersect = &min <= target && max.as_ref().is_none_or(|m| target <= m);
    let witness = if !intersect {
        None
    } else if &min == target {
        Some(closest)
    } else {
        // Move along a kernel direction, which is orthogonal to `gap`.
        set.null_basis.iter().find_map(|v| {
            let step = ((target.clone() - min.clone()) / norm(v)).sqrt_exact()?;
            Some(closest.iter().zip(v).map(|(c, vj)| c.clone() + step.clone() * vj.clone()).collect())
        })
    };
    Ok(SphereIntersection {
        intersect,
        witness,
        range_min: Some(min),
        range_max: max,
    })
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemanticsVerdict {
    Consistent,
    /// Two points in the same semantic class carry different values.
    NotRegression { first: usize, second: usize },
}

/// Checks that points declared semantically equivalent share a value, as
/// any objective computed from semantics must.
pub fn duplicated_semantics_check<S: Scalar>(classes: &[Vec<usize>], table: &ValueTable<S>) -> Result<SemanticsVerdict> {
    for class in classes {
        if let Some(&x) = class.iter().find(|&&x| x >= table.len()) {
            return Err(Error::InvalidInstance(format!("point {x} outside table of length {}", table.len())));
        }
        if let Some((&a, rest)) = class.split_first() {
            if let Some(&b) = rest.iter().find(|&&b| table.value(b) != table.value(a)) {
                return Ok(SemanticsVerdict::NotRegression { first: a, second: b });
            }
        }
    }
    Ok(SemanticsVerdict::Consistent)
}
