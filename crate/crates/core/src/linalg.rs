//! Exact linear systems over an ordered field: consistency with an
//! inconsistency certificate, the affine solution set, and feasibility
//! with nonnegative unknowns via phase-one simplex.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Outcome of deciding `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution<S> {
    /// Some `x` with `A x = b`.
    Consistent(Vec<S>),
    /// Row multipliers `y` with `yᵀA = 0` and `yᵀb ≠ 0`. For the
    /// nonnegative variant, `yᵀA ≤ 0` and `yᵀb > 0` instead.
    Inconsistent(Vec<S>),
}

impl<S> Solution<S> {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Solution::Consistent(_))
    }
}

/// `{particular + N z}`; the columns of `null_basis` span the kernel of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSet<S> {
    pub particular: Vec<S>,
    pub null_basis: Vec<Vec<S>>,
}

fn check_shape<S>(a: &[Vec<S>], b: &[S], cols: usize) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    if let Some(row) = a.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch {
            expected: cols,
            found: row.len(),
        });
    }
    Ok(())
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// `Aᵀ y`.
pub fn transpose_apply<S: Scalar>(a: &[Vec<S>], y: &[S], cols: usize) -> Vec<S> {
    (0..cols)
        .map(|j| a.iter().zip(y).fold(S::zero(), |acc, (row, yi)| acc + row[j].clone() * yi.clone()))
        .collect()
}

/// `A x`.
pub fn apply<S: Scalar>(a: &[Vec<S>], x: &[S]) -> Vec<S> {
    a.iter().map(|row| dot(row, x)).collect()
}

/// Reduced row echelon form of `[A | b]`, tracking how each reduced row is
/// combined from the original rows.
struct Reduced<S> {
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    multipliers: Vec<Vec<S>>,
    pivots: Vec<usize>,
}

fn reduce<S: Scalar>(a: &[Vec<S>], b: &[S], cols: usize) -> Reduced<S> {
    let m = a.len();
    let mut rows = a.to_vec();
    let mut rhs = b.to_vec();
    let mut multipliers: Vec<Vec<S>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        rhs.swap(r, p);
        multipliers.swap(r, p);
        let inv = S::one() / rows[r][c].clone();
        for v in rows[r].iter_mut().chain(multipliers[r].iter_mut()) {
            *v = v.clone() * inv.clone();
        }
        rhs[r] = rhs[r].clone() * inv;
        for i in (0..m).filter(|&i| i != r) {
            let factor = rows[i][c].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..cols {
                rows[i][j] = rows[i][j].clone() - factor.clone() * rows[r][j].clone();
            }
            for j in 0..m {
                multipliers[i][j] = multipliers[i][j].clone() - factor.clone() * multipliers[r][j].clone();
            }
            rhs[i] = rhs[i].clone() - factor * rhs[r].clone();
        }
        pivots.push(c);
        r += 1;
    }
    Reduced {
        rows,
        rhs,
        multipliers,
        pivots,
    }
}

/// Decides `A x = b` by Gauss-Jordan elimination. The returned solution
/// sets every free unknown to zero.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S], cols: usize) -> Result<Solution<S>> {
    Ok(match affine_solutions(a, b, cols)? {
        Ok(set) => Solution::Consistent(set.particular),
        Err(y) => Solution::Inconsistent(y),
    })
}

/// The full solution set of `A x = b`, or inconsistency multipliers.
pub fn affine_solutions<S: Scalar>(a: &[Vec<S>], b: &[S], cols: usize) -> Result<Result<AffineSet<S>, Vec<S>>> {
    check_shape(a, b, cols)?;
    let red = reduce(a, b, cols);
    let rank = red.pivots.len();
    if let Some(i) = (rank..a.len()).find(|&i| !red.rhs[i].is_zero()) {
        return Ok(Err(red.multipliers[i].clone()));
    }
    let mut particular = vec![S::zero(); cols];
    for (i, &c) in red.pivots.iter().enumerate() {
        particular[c] = red.rhs[i].clone();
    }
    let null_basis = (0..cols)
        .filter(|c| !red.pivots.contains(c))
        .map(|free| {
            let mut v = vec![S::zero(); cols];
            v[free] = S::one();
            for (i, &c) in red.pivots.iter().enumerate() {
                v[c] = -red.rows[i][free].clone();
            }
            v
        })
        .collect();
    Ok(Ok(AffineSet {
        particular,
        null_basis,
    }))
}

/// Decides `A x = b, x ≥ 0` by phase-one simplex with Bland's rule. An
/// infeasible system yields Farkas multipliers `y` with `yᵀA ≤ 0` and
/// `yᵀb > 0`.
pub fn solve_nonnegative<S: Scalar>(a: &[Vec<S>], b: &[S], cols: usize) -> Result<Solution<S>> {
    check_shape(a, b, cols)?;
    let m = a.len();
    // Flip rows so the right-hand side is nonnegative; remember the signs
    // to map multipliers back.
    let signs: Vec<S> = b.iter().map(|v| if v.is_negative() { -S::one() } else { S::one() }).collect();
    let width = cols + m;
    // Tableau rows: [A' | I | b'].
    let mut tab: Vec<Vec<S>> = (0..m)
        .map(|i| {
            let mut row: Vec<S> = a[i].iter().map(|v| v.clone() * signs[i].clone()).collect();
            row.extend((0..m).map(|j| if i == j { S::one() } else { S::zero() }));
            row.push(b[i].clone() * signs[i].clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (cols..width).collect();
    // Reduced costs for minimizing the sum of artificials.
    let reduced_costs = |tab: &Vec<Vec<S>>, basis: &Vec<usize>| -> Vec<S> {
        (0..=width)
            .map(|j| {
                let cj = if (cols..width).contains(&j) { S::one() } else { S::zero() };
                let cb: S = (0..m).fold(S::zero(), |acc, i| {
                    if basis[i] >= cols {
                        acc + tab[i][j].clone()
                    } else {
                        acc
                    }
                });
                if j == width {
                    cb
                } else {
                    cj - cb
                }
            })
            .collect()
    };
    loop {
        let rc = reduced_costs(&tab, &basis);
        let Some(enter) = (0..width).find(|&j| rc[j].is_negative()) else {
            break;
        };
        let leave = (0..m)
            .filter(|&i| tab[i][enter].is_positive())
            .min_by(|&i, &k| {
                let ri = tab[i][width].clone() / tab[i][enter].clone();
                let rk = tab[k][width].clone() / tab[k][enter].clone();
                ri.cmp(&rk).then(basis[i].cmp(&basis[k]))
            })
            .expect("phase one is bounded below by zero");
        let inv = S::one() / tab[leave][enter].clone();
        for v in tab[leave].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in (0..m).filter(|&i| i != leave) {
            let factor = tab[i][enter].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..=width {
                tab[i][j] = tab[i][j].clone() - factor.clone() * tab[leave][j].clone();
            }
        }
        basis[leave] = enter;
    }
    let rc = reduced_costs(&tab, &basis);
    if rc[width].is_zero() {
        let mut x = vec![S::zero(); cols];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < cols {
                x[bv] = tab[i][width].clone();
            }
        }
        return Ok(Solution::Consistent(x));
    }
    // Reduced cost of artificial i is 1 - y_i.
    let y = (0..m)
        .map(|i| (S::one() - rc[cols + i].clone()) * signs[i].clone())
        .collect();
    Ok(Solution::Inconsistent(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;
    use num_traits::{Signed, Zero};

    type R = Rational64;

    fn m(rows: &[&[i64]]) -> Vec<Vec<R>> {
        rows.iter().map(|r| r.iter().map(|&v| R::int(v)).collect()).collect()
    }

    fn v(xs: &[i64]) -> Vec<R> {
        xs.iter().map(|&x| R::int(x)).collect()
    }

    #[test]
    fn unique_solution() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(solve(&a, &v(&[4, 2]), 2).unwrap(), Solution::Consistent(v(&[3, 1])));
    }

    #[test]
    fn inconsistency_certificate() {
        let a = m(&[&[1, 1], &[2, 2], &[1, 0]]);
        let b = v(&[1, 3, 0]);
        let Solution::Inconsistent(y) = solve(&a, &b, 2).unwrap() else {
            panic!("expected inconsistency");
        };
        assert!(transpose_apply(&a, &y, 2).iter().all(|c| c.is_zero()));
        assert!(!dot(&y, &b).is_zero());
    }

    #[test]
    fn underdetermined_kernel() {
        let a = m(&[&[1, 1, 1]]);
        let set = affine_solutions(&a, &v(&[3]), 3).unwrap().unwrap();
        assert_eq!(apply(&a, &set.particular), v(&[3]));
        assert_eq!(set.null_basis.len(), 2);
        for n in &set.null_basis {
            assert_eq!(apply(&a, n), v(&[0]));
        }
    }

    #[test]
    fn nonnegative_feasibility() {
        let a = m(&[&[1, 1]]);
        let Solution::Consistent(x) = solve_nonnegative(&a, &v(&[2]), 2).unwrap() else {
            panic!("feasible");
        };
        assert_eq!(apply(&a, &x), v(&[2]));
        assert!(x.iter().all(|c| !c.is_negative()));

        let b = v(&[-1]);
        assert!(solve(&a, &b, 2).unwrap().is_consistent());
        let Solution::Inconsistent(y) = solve_nonnegative(&a, &b, 2).unwrap() else {
            panic!("infeasible with x >= 0");
        };
        assert!(transpose_apply(&a, &y, 2).iter().all(|c| !c.is_positive()));
        assert!(dot(&y, &b).is_positive());
    }

    #[test]
    fn shape_errors() {
        let a = m(&[&[1, 1]]);
        assert!(matches!(solve(&a, &v(&[1, 2]), 2), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(solve(&a, &v(&[1]), 3), Err(Error::DimensionMismatch { .. })));
    }
}
