//! Dense two-phase simplex for small LPs, plus Gaussian elimination.
//!
//! Problem sizes here are a few hundred rows and columns at most, so a full
//! tableau is fine. Bland's rule prevents cycling on the heavily degenerate
//! ski rental programs. After phase 2 the basic solution is recomputed from
//! the original data with a partial-pivoting solve, which removes most of the
//! rounding error accumulated by tableau updates.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Constraint feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-8;
/// Smallest magnitude accepted as a pivot.
pub const PIVOT_TOL: f64 = 1e-9;

/// minimize `objective · z` subject to `A z <= u`, `E z = v`, `lower <= z <= upper`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub ineq_rows: Vec<Vec<f64>>,
    pub ineq_rhs: Vec<f64>,
    pub eq_rows: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
    pub var_lower: Vec<f64>,
    pub var_upper: Option<Vec<f64>>,
}

impl LinearProgram {
    /// New program with all variables bounded below by zero.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            var_lower: vec![0.0; n],
            ..Default::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds `row · z <= rhs`.
    pub fn leq(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.ineq_rows.push(row);
        self.ineq_rhs.push(rhs);
        self
    }

    /// Adds `row · z >= rhs`.
    pub fn geq(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.leq(row.into_iter().map(|a| -a).collect(), -rhs)
    }

    /// Adds `row · z == rhs`.
    pub fn eq(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.eq_rows.push(row);
        self.eq_rhs.push(rhs);
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if n == 0 {
            return Err(Error::Empty("LP objective"));
        }
        if self.ineq_rows.len() != self.ineq_rhs.len() || self.eq_rows.len() != self.eq_rhs.len() {
            return Err(Error::DimensionMismatch("row count vs rhs length"));
        }
        if self.ineq_rows.iter().chain(&self.eq_rows).any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("row length vs number of variables"));
        }
        if self.var_lower.len() != n || self.var_upper.as_ref().is_some_and(|u| u.len() != n) {
            return Err(Error::DimensionMismatch("variable bounds length"));
        }
        let finite = self
            .objective
            .iter()
            .chain(self.ineq_rows.iter().flatten())
            .chain(self.eq_rows.iter().flatten())
            .chain(&self.ineq_rhs)
            .chain(&self.eq_rhs)
            .chain(&self.var_lower)
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::out_of_range("LP data", f64::NAN, "finite values"));
        }
        Ok(())
    }

    /// Largest violation of any constraint or bound at `z`.
    pub fn max_violation(&self, z: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (row, &u) in self.ineq_rows.iter().zip(&self.ineq_rhs) {
            worst = worst.max(dot(row, z) - u);
        }
        for (row, &v) in self.eq_rows.iter().zip(&self.eq_rhs) {
            worst = worst.max((dot(row, z) - v).abs());
        }
        for (j, &zj) in z.iter().enumerate() {
            worst = worst.max(self.var_lower[j] - zj);
            if let Some(upper) = &self.var_upper {
                worst = worst.max(zj - upper[j]);
            }
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Empty unless `status` is `Optimal`.
    pub values: Vec<f64>,
    pub objective_value: f64,
}

impl LpSolution {
    fn failed(status: LpStatus) -> Self {
        LpSolution {
            status,
            values: Vec::new(),
            objective_value: f64::NAN,
        }
    }

    /// Values of an optimal solution, or the corresponding error.
    pub fn into_optimal(self) -> Result<(Vec<f64>, f64)> {
        match self.status {
            LpStatus::Optimal => Ok((self.values, self.objective_value)),
            LpStatus::Infeasible => Err(Error::Infeasible),
            LpStatus::Unbounded => Err(Error::Unbounded),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Copy, PartialEq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau {
    /// m rows of `ncols + 1` entries; the last entry is the right-hand side.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    kinds: Vec<ColKind>,
}

impl Tableau {
    fn ncols(&self) -> usize {
        self.kinds.len()
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [f64]) {
        let width = self.ncols() + 1;
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for k in 0..width {
                    row[k] -= f * pivot_row[k];
                }
                row[c] = 0.0;
            }
        }
        let f = obj[c];
        if f != 0.0 {
            for k in 0..width {
                obj[k] -= f * pivot_row[k];
            }
            obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule on reduced-cost row `obj` (last entry is `-z`).
    /// Columns for which `allowed` is false never enter.
    fn optimize(&mut self, obj: &mut [f64], allowed: impl Fn(ColKind) -> bool) -> LpStatus {
        let n = self.ncols();
        // Bland's rule terminates, this bound only guards against pathologies.
        let max_iter = 50_000 + 100 * n * self.rows.len();
        for _ in 0..max_iter {
            let entering = (0..n).find(|&j| allowed(self.kinds[j]) && obj[j] < -PIVOT_TOL);
            let Some(c) = entering else {
                return LpStatus::Optimal;
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[c];
                if a > PIVOT_TOL {
                    let ratio = row[n] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-12
                                || (ratio <= lr + 1e-12 && self.basis[i] < self.basis[li])
                            {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return LpStatus::Unbounded,
                Some((r, _)) => self.pivot(r, c, obj),
            }
        }
        LpStatus::Unbounded
    }
}

/// Solves `lp` with the two-phase simplex method.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let n = lp.num_vars();

    // Shift z = lower + w so that w >= 0; upper bounds become rows.
    let lower = &lp.var_lower;
    let mut rows: Vec<(Vec<f64>, f64, bool)> = Vec::new(); // (coeffs, rhs, is_equality)
    for (row, &u) in lp.ineq_rows.iter().zip(&lp.ineq_rhs) {
        rows.push((row.clone(), u - dot(row, lower), false));
    }
    if let Some(upper) = &lp.var_upper {
        for j in 0..n {
            if upper[j].is_finite() {
                let mut row = vec![0.0; n];
                row[j] = 1.0;
                rows.push((row, upper[j] - lower[j], false));
            }
        }
    }
    for (row, &v) in lp.eq_rows.iter().zip(&lp.eq_rhs) {
        rows.push((row.clone(), v - dot(row, lower), true));
    }
    let m = rows.len();

    // Column layout: structural | one slack per inequality row | artificials.
    let n_slack = rows.iter().filter(|r| !r.2).count();
    let mut kinds = vec![ColKind::Structural; n];
    kinds.extend(core::iter::repeat(ColKind::Slack).take(n_slack));
    let mut n_art = 0;
    let mut needs_art = vec![false; m];
    for (i, (_, rhs, is_eq)) in rows.iter().enumerate() {
        // A <= row with non-negative rhs starts with its slack basic.
        if *is_eq || *rhs < 0.0 {
            needs_art[i] = true;
            n_art += 1;
        }
    }
    kinds.extend(core::iter::repeat(ColKind::Artificial).take(n_art));
    let ncols = kinds.len();

    let mut tab_rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack_col = n;
    let mut art_col = n + n_slack;
    for (i, (coeffs, rhs, is_eq)) in rows.iter().enumerate() {
        let mut t = vec![0.0; ncols + 1];
        t[..n].copy_from_slice(coeffs);
        let mut slack_here = None;
        if !is_eq {
            t[slack_col] = 1.0;
            slack_here = Some(slack_col);
            slack_col += 1;
        }
        t[ncols] = *rhs;
        if *rhs < 0.0 {
            for v in t.iter_mut() {
                *v = -*v;
            }
        }
        if needs_art[i] {
            t[art_col] = 1.0;
            basis.push(art_col);
            art_col += 1;
        } else {
            basis.push(slack_here.expect("inequality row has a slack"));
        }
        tab_rows.push(t);
    }
    let mut tab = Tableau {
        rows: tab_rows,
        basis,
        kinds,
    };

    // Phase 1: minimize the sum of artificials.
    if n_art > 0 {
        let mut obj = vec![0.0; ncols + 1];
        for j in (n + n_slack)..ncols {
            obj[j] = 1.0;
        }
        for (i, &bv) in tab.basis.iter().enumerate() {
            if tab.kinds[bv] == ColKind::Artificial {
                for k in 0..=ncols {
                    obj[k] -= tab.rows[i][k];
                }
            }
        }
        tab.optimize(&mut obj, |_| true);
        let scale = 1.0 + rows.iter().map(|r| r.1.abs()).fold(0.0, f64::max);
        let infeasibility = -obj[ncols];
        if infeasibility > FEAS_TOL * scale {
            return Ok(LpSolution::failed(LpStatus::Infeasible));
        }
        // Drive remaining artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.kinds[tab.basis[i]] == ColKind::Artificial {
                let c = (0..ncols).find(|&j| {
                    tab.kinds[j] != ColKind::Artificial && tab.rows[i][j].abs() > PIVOT_TOL
                });
                match c {
                    Some(c) => {
                        tab.pivot(i, c, &mut obj);
                        i += 1;
                    }
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    // Phase 2.
    let mut obj = vec![0.0; ncols + 1];
    obj[..n].copy_from_slice(&lp.objective);
    for (i, &bv) in tab.basis.iter().enumerate() {
        let f = obj[bv];
        if f != 0.0 {
            for k in 0..=ncols {
                obj[k] -= f * tab.rows[i][k];
            }
        }
    }
    let status = tab.optimize(&mut obj, |k| k != ColKind::Artificial);
    if status == LpStatus::Unbounded {
        return Ok(LpSolution::failed(LpStatus::Unbounded));
    }

    let mut w = vec![0.0; ncols];
    for (i, &bv) in tab.basis.iter().enumerate() {
        w[bv] = tab.rows[i][ncols];
    }
    refine_basic_solution(&rows, n, &tab.basis, &mut w);

    let values: Vec<f64> = (0..n).map(|j| lower[j] + w[j]).collect();
    let objective_value = dot(&lp.objective, &values);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        values,
        objective_value,
    })
}

/// Recomputes basic variables from the untransformed rows. Keeps the tableau
/// values when the basis matrix cannot be formed or the solve is singular.
fn refine_basic_solution(rows: &[(Vec<f64>, f64, bool)], n: usize, basis: &[usize], w: &mut [f64]) {
    // Structural and slack columns of the original (un-negated) rows; artificials are zero.
    let m = rows.len();
    if basis.len() != m {
        return;
    }
    let mut slack_of_row = vec![None; m];
    let mut next = n;
    for (i, r) in rows.iter().enumerate() {
        if !r.2 {
            slack_of_row[i] = Some(next);
            next += 1;
        }
    }
    if basis.iter().any(|&c| c >= next) {
        return;
    }
    let mut a = vec![vec![0.0; m]; m];
    for (k, &c) in basis.iter().enumerate() {
        for (i, r) in rows.iter().enumerate() {
            a[i][k] = if c < n {
                r.0[c]
            } else if slack_of_row[i] == Some(c) {
                1.0
            } else {
                0.0
            };
        }
    }
    let rhs: Vec<f64> = rows.iter().map(|r| r.1).collect();
    if let Ok(xb) = solve_linear_system(&a, &rhs) {
        for (k, &c) in basis.iter().enumerate() {
            w[c] = xb[k].max(0.0);
        }
    }
}

/// Solves the square system `a x = rhs` by Gaussian elimination with partial
/// pivoting followed by one step of iterative refinement.
pub fn solve_linear_system(a: &[Vec<f64>], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = a.len();
    if n == 0 {
        return Err(Error::Empty("linear system"));
    }
    if rhs.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("square matrix and rhs"));
    }
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let lu = lu_factor(a, scale)?;
    let mut x = lu_solve(&lu, rhs);
    let residual: Vec<f64> = (0..n).map(|i| rhs[i] - dot(&a[i], &x)).collect();
    let correction = lu_solve(&lu, &residual);
    for (xi, ci) in x.iter_mut().zip(correction) {
        *xi += ci;
    }
    Ok(x)
}

struct Lu {
    lu: Vec<Vec<f64>>,
    perm: Vec<usize>,
}

fn lu_factor(a: &[Vec<f64>], scale: f64) -> Result<Lu> {
    let n = a.len();
    let mut lu: Vec<Vec<f64>> = a.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| lu[i][k].abs().total_cmp(&lu[j][k].abs()))
            .expect("non-empty range");
        if lu[p][k].abs() <= 1e-14 * scale {
            return Err(Error::Singular);
        }
        lu.swap(k, p);
        perm.swap(k, p);
        for i in (k + 1)..n {
            let f = lu[i][k] / lu[k][k];
            lu[i][k] = f;
            if f != 0.0 {
                for j in (k + 1)..n {
                    lu[i][j] -= f * lu[k][j];
                }
            }
        }
    }
    Ok(Lu { lu, perm })
}

fn lu_solve(f: &Lu, rhs: &[f64]) -> Vec<f64> {
    let n = f.lu.len();
    let mut y: Vec<f64> = f.perm.iter().map(|&p| rhs[p]).collect();
    for i in 0..n {
        for j in 0..i {
            y[i] -= f.lu[i][j] * y[j];
        }
    }
    for i in (0..n).rev() {
        for j in (i + 1)..n {
            y[i] -= f.lu[i][j] * y[j];
        }
        y[i] /= f.lu[i][i];
    }
    y
}
