//! Exact linear programming over rationals.
//!
//! A dense two-phase simplex with Bland's rule. Problems in this crate are
//! tiny (a handful of rows, tens of columns), so the priorities are exact
//! arithmetic, determinism and guaranteed termination, not sparsity.

use crate::scalar::Scalar;

/// Relation of a constraint row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

/// A single constraint `coeffs · x REL rhs` over nonnegative variables.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Scalar>,
    pub rel: Rel,
    pub rhs: Scalar,
}

impl Constraint {
    pub fn new(coeffs: Vec<Scalar>, rel: Rel, rhs: Scalar) -> Self {
        Constraint { coeffs, rel, rhs }
    }
}

/// Outcome of `solve_min`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Scalar, solution: Vec<Scalar> },
    Infeasible,
    Unbounded,
}

pub(crate) struct Tableau {
    /// `rows × (cols + 1)`; last column is the rhs.
    pub(crate) rows: Vec<Vec<Scalar>>,
    /// objective row (reduced costs), length `cols + 1`; last entry is `-z`.
    pub(crate) obj: Vec<Scalar>,
    pub(crate) basis: Vec<usize>,
    pub(crate) cols: usize,
}

impl Tableau {
    pub(crate) fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col].clone();
        debug_assert!(!piv.is_zero());
        let inv = piv.recip().expect("pivot element is nonzero");
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let factor = other[col].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, p) in other.iter_mut().zip(pivot_row.iter()) {
                if !p.is_zero() {
                    *v = &*v - &(&factor * p);
                }
            }
        }
        let factor = self.obj[col].clone();
        if !factor.is_zero() {
            for (v, p) in self.obj.iter_mut().zip(pivot_row.iter()) {
                if !p.is_zero() {
                    *v = &*v - &(&factor * p);
                }
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: entering = least column with negative reduced cost,
    /// leaving = least ratio, ties broken by least basis variable.
    /// Returns false when optimal, or Err(()) when unbounded.
    fn iterate(&mut self) -> Result<bool, ()> {
        let entering = (0..self.cols).find(|&j| self.obj[j].is_negative());
        let entering = match entering {
            Some(j) => j,
            None => return Ok(false),
        };
        let mut leave: Option<(usize, Scalar)> = None;
        for r in 0..self.rows.len() {
            let a = &self.rows[r][entering];
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rows[r][self.cols] / a;
            let better = match &leave {
                None => true,
                Some((lr, lratio)) => {
                    ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                }
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        match leave {
            Some((r, _)) => {
                self.pivot(r, entering);
                Ok(true)
            }
            None => Err(()),
        }
    }

    pub(crate) fn run(&mut self) -> Result<(), ()> {
        while self.iterate()? {}
        Ok(())
    }

    pub(crate) fn solution(&self, n: usize) -> Vec<Scalar> {
        let mut x = vec![Scalar::zero(); n];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.rows[r][self.cols].clone();
            }
        }
        x
    }
}

/// Minimize `objective · x` subject to `constraints`, `x ≥ 0`.
///
/// Deterministic: identical inputs produce identical pivot sequences and
/// identical optimal vertices.
pub fn solve_min(objective: &[Scalar], constraints: &[Constraint]) -> LpOutcome {
    let n = objective.len();
    let m = constraints.len();
    for c in constraints {
        assert_eq!(c.coeffs.len(), n, "constraint arity mismatch");
    }

    // Normalize rhs ≥ 0, count slack and artificial columns.
    let mut rels = Vec::with_capacity(m);
    let mut body = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for c in constraints {
        if c.rhs.is_negative() {
            body.push(c.coeffs.iter().map(|v| -v).collect::<Vec<_>>());
            rhs.push(-&c.rhs);
            rels.push(match c.rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            });
        } else {
            body.push(c.coeffs.clone());
            rhs.push(c.rhs.clone());
            rels.push(c.rel);
        }
    }
    let n_slack = rels.iter().filter(|r| **r != Rel::Eq).count();
    let n_art = rels.iter().filter(|r| **r != Rel::Le).count();
    let cols = n + n_slack + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack_at = n;
    let mut art_at = n + n_slack;
    for r in 0..m {
        let mut row = vec![Scalar::zero(); cols + 1];
        row[..n].clone_from_slice(&body[r]);
        row[cols] = rhs[r].clone();
        match rels[r] {
            Rel::Le => {
                row[slack_at] = Scalar::one();
                basis.push(slack_at);
                slack_at += 1;
            }
            Rel::Ge => {
                row[slack_at] = -Scalar::one();
                slack_at += 1;
                row[art_at] = Scalar::one();
                basis.push(art_at);
                art_at += 1;
            }
            Rel::Eq => {
                row[art_at] = Scalar::one();
                basis.push(art_at);
                art_at += 1;
            }
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        obj: vec![Scalar::zero(); cols + 1],
        basis,
        cols,
    };

    // Phase 1: minimize the sum of artificials. Reduced costs start as
    // c_j - sum of rows where an artificial is basic.
    if n_art > 0 {
        for j in n + n_slack..cols {
            t.obj[j] = Scalar::one();
        }
        let basic_art: Vec<usize> = (0..m).filter(|&r| t.basis[r] >= n + n_slack).collect();
        for &r in &basic_art {
            let row = t.rows[r].clone();
            for (v, p) in t.obj.iter_mut().zip(row.iter()) {
                if !p.is_zero() {
                    *v = &*v - p;
                }
            }
        }
        if t.run().is_err() {
            unreachable!("phase 1 objective is bounded below by zero");
        }
        // -z sits in the last objective entry.
        if (-&t.obj[cols]).is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining artificials out of the basis.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= n + n_slack {
                match (0..n + n_slack).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => t.pivot(r, j),
                    None => {
                        // Redundant row: every structural coefficient is zero.
                        t.rows.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        // Blank out artificial columns so phase 2 never re-enters them.
        for row in t.rows.iter_mut() {
            for j in n + n_slack..cols {
                row[j] = Scalar::zero();
            }
        }
    }

    // Phase 2: reduced costs for the real objective.
    let mut obj = vec![Scalar::zero(); cols + 1];
    obj[..n].clone_from_slice(objective);
    for (r, &b) in t.basis.iter().enumerate() {
        let cb = if b < n { objective[b].clone() } else { Scalar::zero() };
        if cb.is_zero() {
            continue;
        }
        let row = t.rows[r].clone();
        for (v, p) in obj.iter_mut().zip(row.iter()) {
            if !p.is_zero() {
                *v = &*v - &(&cb * p);
            }
        }
    }
    t.obj = obj;
    if t.run().is_err() {
        return LpOutcome::Unbounded;
    }

    let solution = t.solution(n);
    let value = objective
        .iter()
        .zip(solution.iter())
        .fold(Scalar::zero(), |acc, (c, x)| acc + c * x);
    LpOutcome::Optimal { value, solution }
}
