use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{bit, MAX_BITS};
use crate::table::{Orientation, ValueTable};

use super::{Exhaustion, Realizability};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Self { var, negated: false }
    }

    pub fn neg(var: u32) -> Self {
        Self { var, negated: true }
    }

    /// Parses a 1-based signed literal: `3` is the third variable, `-3` its negation.
    pub fn from_signed(lit: i64) -> Result<Self> {
        if lit == 0 {
            return Err(Error::InvalidInstance("literal 0 is not allowed".into()));
        }
        let var = u32::try_from(lit.unsigned_abs() - 1)
            .map_err(|_| Error::InvalidInstance(format!("literal {lit} is out of range")))?;
        Ok(Self { var, negated: lit < 0 })
    }

    pub fn satisfied_by(self, x: usize, n: u32) -> bool {
        bit(x, self.var, n) != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

/// A disjunction of two literals on distinct variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause(Literal, Literal);

impl Clause {
    pub fn new(a: Literal, b: Literal) -> Result<Self> {
        if a.var == b.var {
            return Err(Error::InvalidInstance(format!("clause ({a} | {b}) repeats a variable")));
        }
        Ok(if a <= b { Self(a, b) } else { Self(b, a) })
    }

    pub fn literals(&self) -> (Literal, Literal) {
        (self.0, self.1)
    }

    pub fn satisfied_by(&self, x: usize, n: u32) -> bool {
        self.0.satisfied_by(x, n) || self.1.satisfied_by(x, n)
    }

    /// All `4 * C(n, 2)` distinct clauses, ordered by variables then polarity.
    pub fn all(n: u32) -> Vec<Clause> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for (ni, nj) in [(false, false), (false, true), (true, false), (true, true)] {
                    out.push(Clause(Literal { var: i, negated: ni }, Literal { var: j, negated: nj }));
                }
            }
        }
        out
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {})", self.0, self.1)
    }
}

/// A multiset of 2-clauses over `vars` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Max2SatInstance {
    vars: u32,
    clauses: Vec<Clause>,
}

impl Max2SatInstance {
    pub fn new(vars: u32, mut clauses: Vec<Clause>) -> Result<Self> {
        if let Some(c) = clauses.iter().find(|c| c.1.var >= vars) {
            return Err(Error::InvalidInstance(format!("clause {c} uses a variable outside 0..{vars}")));
        }
        clauses.sort();
        Ok(Self { vars, clauses })
    }

    /// Builds from 1-based signed literal pairs, e.g. `[[1, 2]]` for `(x0 | x1)`.
    pub fn from_signed(vars: u32, clauses: &[[i64; 2]]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|&[a, b]| Clause::new(Literal::from_signed(a)?, Literal::from_signed(b)?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vars, clauses)
    }

    pub fn vars(&self) -> u32 {
        self.vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Number of satisfied clauses, counting multiplicity.
    pub fn satisfied(&self, x: usize) -> usize {
        self.clauses.iter().filter(|c| c.satisfied_by(x, self.vars)).count()
    }
}

/// The objective table over all `2^n` assignments in natural order
/// (variable 0 is the most significant bit). Maximized.
pub fn max2sat_table<S: Scalar>(inst: &Max2SatInstance) -> Result<ValueTable<S>> {
    if inst.vars > MAX_BITS {
        return Err(Error::EnumerationTooLarge {
            what: "assignments",
            count: format!("2^{}", inst.vars),
            cap: 1 << MAX_BITS,
        });
    }
    let values = (0..1usize << inst.vars).map(|x| S::count(inst.satisfied(x))).collect();
    ValueTable::new(values, Orientation::Maximize)
}

struct Search<'a> {
    target: &'a [usize],
    sat: Vec<Vec<usize>>,
    // capacity[d][x] = clauses with index >= d satisfied at x.
    capacity: Vec<Vec<usize>>,
    bound: usize,
    weights: Vec<u128>,
    counts: Vec<usize>,
    chosen: Vec<usize>,
    examined: u128,
}

impl Search<'_> {
    fn dfs(&mut self, depth: usize) -> bool {
        let feasible = self.counts.iter().zip(self.target).enumerate().all(|(x, (&c, &t))| {
            c <= t && c + self.bound * self.capacity[depth][x] >= t
        });
        if !feasible {
            self.examined += self.weights[depth];
            return false;
        }
        if depth == self.sat.len() {
            return true;
        }
        for mult in 0..=self.bound {
            self.chosen[depth] = mult;
            if self.dfs(depth + 1) {
                return true;
            }
            for &x in &self.sat[depth] {
                self.counts[x] += 1;
            }
        }
        for &x in &self.sat[depth] {
            self.counts[x] -= self.bound + 1;
        }
        self.chosen[depth] = 0;
        false
    }
}

/// Searches clause multisets, with each of the `4 * C(n, 2)` clauses used at
/// most `max(table)` times, for a formula whose table equals `table`. Every
/// 2-clause is satisfied somewhere, so the bound loses nothing.
pub fn max2sat_realizable<S: Scalar>(
    table: &ValueTable<S>,
    vars: u32,
) -> Result<Realizability<Max2SatInstance>> {
    if vars > MAX_BITS || table.len() != 1usize << vars {
        return Err(Error::LengthMismatch {
            expected: 1usize.checked_shl(vars).unwrap_or(usize::MAX),
            found: table.len(),
        });
    }
    let target = table
        .values()
        .iter()
        .map(|v| {
            v.as_integer()
                .and_then(|i| usize::try_from(i).ok())
                .ok_or_else(|| Error::InvalidTable(format!("value {v} is not a nonnegative integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    let clauses = Clause::all(vars);
    let points = target.len();
    let bound = target.iter().copied().max().unwrap_or(0);
    let sat: Vec<Vec<usize>> = clauses
        .iter()
        .map(|c| (0..points).filter(|&x| c.satisfied_by(x, vars)).collect())
        .collect();
    let mut capacity = vec![vec![0usize; points]; clauses.len() + 1];
    for d in (0..clauses.len()).rev() {
        capacity[d] = capacity[d + 1].clone();
        for &x in &sat[d] {
            capacity[d][x] += 1;
        }
    }
    let base = bound as u128 + 1;
    let weights: Vec<u128> = (0..=clauses.len())
        .map(|d| base.checked_pow((clauses.len() - d) as u32).unwrap_or(u128::MAX))
        .collect();
    let mut search = Search {
        target: &target,
        sat,
        capacity,
        bound,
        weights,
        counts: vec![0; points],
        chosen: vec![0; clauses.len()],
        examined: 0,
    };
    if search.dfs(0) {
        let found = clauses
            .iter()
            .zip(&search.chosen)
            .flat_map(|(c, &m)| std::iter::repeat_n(*c, m))
            .collect();
        return Ok(Realizability::Realizable(Max2SatInstance::new(vars, found)?));
    }
    Ok(Realizability::Unrealizable(Exhaustion {
        examined: search.examined,
        search_space: search.weights[0],
    }))
}
