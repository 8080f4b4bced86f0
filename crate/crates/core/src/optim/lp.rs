//! Dense two-phase simplex.
//!
//! Problems are tiny (tens of columns), so the full tableau is kept and
//! every pivot touches every entry. The entering column is the most negative
//! reduced cost, falling back to Bland's rule after a run of degenerate
//! pivots. In the ratio test near-ties go to the largest pivot, then to the
//! lowest-index basic variable. Everything is deterministic.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("problem is infeasible")]
    Infeasible,
    #[error("problem is unbounded")]
    Unbounded,
    #[error("pivot limit reached")]
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `minimize objective . x` subject to the constraints, with `x_j >= 0`
/// unless `free[j]`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub free: Vec<bool>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram { objective, constraints: Vec::new(), free: vec![false; n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_free(&mut self, j: usize) {
        self.free[j] = true;
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        assert_eq!(coeffs.len(), self.num_vars());
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

const MAX_PIVOTS: usize = 50_000;
const PIVOT_REL: f64 = 1e-8;
// consecutive degenerate pivots before switching to Bland's rule
const BLAND_AFTER: usize = 20;

struct Tableau {
    rows: usize,
    cols: usize,
    // (rows + 1) x (cols + 1); last row is the reduced-cost row, last column the rhs
    t: Vec<f64>,
    basis: Vec<usize>,
    active_row: Vec<bool>,
    pivots: usize,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let p = self.t[pr * w + pc];
        for c in 0..w {
            self.t[pr * w + c] /= p;
        }
        self.t[pr * w + pc] = 1.0;
        for r in 0..=self.rows {
            if r == pr {
                continue;
            }
            let f = self.t[r * w + pc];
            if f == 0.0 {
                continue;
            }
            for c in 0..w {
                self.t[r * w + c] -= f * self.t[pr * w + c];
            }
            self.t[r * w + pc] = 0.0;
        }
        self.basis[pr] = pc;
        self.pivots += 1;
    }

    /// Loads cost vector `cost` (length `cols`) as reduced costs w.r.t. the
    /// current basis.
    fn load_costs(&mut self, cost: &[f64]) {
        let w = self.cols + 1;
        let base = self.rows * w;
        for c in 0..self.cols {
            self.t[base + c] = cost[c];
        }
        self.t[base + self.cols] = 0.0;
        for r in 0..self.rows {
            if !self.active_row[r] {
                continue;
            }
            let cb = cost[self.basis[r]];
            if cb == 0.0 {
                continue;
            }
            for c in 0..w {
                self.t[base + c] -= cb * self.t[r * w + c];
            }
        }
    }

    /// Runs simplex iterations on the current cost row; columns with
    /// `allowed[c] == false` never enter.
    fn optimize(&mut self, allowed: &[bool], tol: f64, bounded: bool) -> Result<(), LpError> {
        let mut allowed = allowed.to_vec();
        let mut degenerate_run = 0;
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(LpError::IterationLimit);
            }
            let improving = |c: usize| allowed[c] && self.at(self.rows, c) < -tol;
            let entering = if degenerate_run < BLAND_AFTER {
                (0..self.cols)
                    .filter(|&c| improving(c))
                    .min_by(|&a, &b| self.at(self.rows, a).total_cmp(&self.at(self.rows, b)).then(a.cmp(&b)))
            } else {
                (0..self.cols).find(|&c| improving(c))
            };
            let Some(pc) = entering else {
                return Ok(());
            };
            // pivots tiny relative to the column are treated as zero
            let col_max = (0..self.rows)
                .filter(|&r| self.active_row[r])
                .map(|r| self.at(r, pc).abs())
                .fold(0.0, f64::max);
            let piv_tol = tol.max(PIVOT_REL * col_max);
            let mut min_ratio = f64::INFINITY;
            for r in 0..self.rows {
                if self.active_row[r] && self.at(r, pc) > piv_tol {
                    min_ratio = min_ratio.min(self.rhs(r).max(0.0) / self.at(r, pc));
                }
            }
            if min_ratio == f64::INFINITY {
                if bounded {
                    // a rounding-level reduced cost on a bounded objective
                    allowed[pc] = false;
                    continue;
                }
                return Err(LpError::Unbounded);
            }
            // among near-minimal ratios take the largest pivot, then the lowest basic index
            let slack = 1e-12 * (1.0 + min_ratio.abs());
            let mut best: Option<usize> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if !self.active_row[r] || a <= piv_tol || self.rhs(r).max(0.0) / a > min_ratio + slack {
                    continue;
                }
                best = match best {
                    Some(br) if a < self.at(br, pc) || (a == self.at(br, pc) && self.basis[r] > self.basis[br]) => Some(br),
                    _ => Some(r),
                };
            }
            let pr = best.expect("a row attains the minimum ratio");
            degenerate_run = if min_ratio == 0.0 { degenerate_run + 1 } else { 0 };
            self.pivot(pr, pc);
        }
    }
}

/// Solves the LP to optimality. `tol` is the reduced-cost / pivot threshold
/// (default callers use 1e-10).
pub fn lp_solve(lp: &LinearProgram, tol: f64) -> Result<LpSolution, LpError> {
    let nv = lp.num_vars();
    let m = lp.constraints.len();

    // column layout: structural (free vars split into +/-), slacks, artificials
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(nv);
    let mut ncols = 0;
    for j in 0..nv {
        if lp.free[j] {
            col_of.push((ncols, Some(ncols + 1)));
            ncols += 2;
        } else {
            col_of.push((ncols, None));
            ncols += 1;
        }
    }
    let n_struct = ncols;
    let n_slack = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    let art0 = n_struct + n_slack;
    let cols = art0 + m;
    let w = cols + 1;

    let mut t = vec![0.0; (m + 1) * w];
    let mut slack = n_struct;
    for (r, con) in lp.constraints.iter().enumerate() {
        let sign = if con.rhs < 0.0 { -1.0 } else { 1.0 };
        for j in 0..nv {
            let a = con.coeffs[j] * sign;
            let (p, neg) = col_of[j];
            t[r * w + p] = a;
            if let Some(q) = neg {
                t[r * w + q] = -a;
            }
        }
        match con.relation {
            Relation::Le => {
                t[r * w + slack] = sign;
                slack += 1;
            }
            Relation::Ge => {
                t[r * w + slack] = -sign;
                slack += 1;
            }
            Relation::Eq => {}
        }
        t[r * w + art0 + r] = 1.0;
        t[r * w + cols] = con.rhs * sign;
    }

    let mut tab = Tableau {
        rows: m,
        cols,
        t,
        basis: (art0..art0 + m).collect(),
        active_row: vec![true; m],
        pivots: 0,
    };

    // phase 1
    let mut cost1 = vec![0.0; cols];
    for c in cost1.iter_mut().skip(art0) {
        *c = 1.0;
    }
    tab.load_costs(&cost1);
    let all = vec![true; cols];
    tab.optimize(&all, tol, true)?;
    let infeas = -tab.at(m, cols);
    let rhs_scale = lp.constraints.iter().map(|c| c.rhs.abs()).fold(1.0, f64::max);
    if infeas > 1e-9 * rhs_scale {
        return Err(LpError::Infeasible);
    }

    // drive artificials out of the basis; drop redundant rows
    for r in 0..m {
        if tab.basis[r] < art0 {
            continue;
        }
        let pc = (0..art0).find(|&c| tab.at(r, c).abs() > 1e-9);
        match pc {
            Some(c) => tab.pivot(r, c),
            None => tab.active_row[r] = false,
        }
    }

    // phase 2
    let mut cost2 = vec![0.0; cols];
    for j in 0..nv {
        let (p, neg) = col_of[j];
        cost2[p] = lp.objective[j];
        if let Some(q) = neg {
            cost2[q] = -lp.objective[j];
        }
    }
    tab.load_costs(&cost2);
    let mut allowed = vec![true; cols];
    for a in allowed.iter_mut().skip(art0) {
        *a = false;
    }
    tab.optimize(&allowed, tol, false)?;

    let mut col_val = vec![0.0; cols];
    for r in 0..m {
        if tab.active_row[r] {
            col_val[tab.basis[r]] = tab.rhs(r);
        }
    }
    let x: Vec<f64> = col_of
        .iter()
        .map(|&(p, neg)| col_val[p] - neg.map_or(0.0, |q| col_val[q]))
        .collect();
    let objective = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
    Ok(LpSolution { x, objective, pivots: tab.pivots })
}
