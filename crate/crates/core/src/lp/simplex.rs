//! Dense two-phase primal simplex with Bland's rule.

use indexmap::IndexMap;

use super::{LpModel, LpSolution, LpSolver, LpStatus, Sense, Var};
use crate::error::{Error, Result};

/// Reference solver for the small programs built by elicitation and ROR.
#[derive(Debug, Clone, Copy)]
pub struct DenseSimplex {
    /// Pivot and reduced-cost tolerance.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for DenseSimplex {
    fn default() -> Self {
        Self { tolerance: 1e-9, max_iterations: 100_000 }
    }
}

/// How a model variable maps onto non-negative tableau columns.
#[derive(Debug, Clone, Copy)]
enum Column {
    /// `x = lower + y`.
    Shift { col: usize, lower: f64 },
    /// `x = upper − y`.
    Flip { col: usize, upper: f64 },
    /// `x = y⁺ − y⁻`.
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
    tol: f64,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        self.rhs[r] /= p;
        self.rows[r][c] = 1.0;
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r]);
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c];
            if f == 0.0 {
                continue;
            }
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                *v -= f * pv;
                if v.abs() < 1e-13 {
                    *v = 0.0;
                }
            }
            self.rows[i][c] = 0.0;
            self.rhs[i] -= f * pivot_rhs;
            if self.rhs[i].abs() < 1e-13 {
                self.rhs[i] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · y` over columns where `allowed` holds.
    fn optimize(&mut self, cost: &[f64], allowed: &dyn Fn(usize) -> bool, max_iter: usize) -> Result<Outcome> {
        // reduced costs d_j = c_j − c_B B⁻¹ A_j, updated with each pivot
        let mut reduced: Vec<f64> = cost.to_vec();
        for (&b, row) in self.basis.iter().zip(&self.rows) {
            if cost[b] != 0.0 {
                for (d, a) in reduced.iter_mut().zip(row) {
                    *d -= cost[b] * a;
                }
            }
        }
        for _ in 0..max_iter {
            // Bland: lowest index with a positive reduced cost enters
            let Some(c) = (0..self.width).find(|&j| reduced[j] > self.tol && allowed(j)) else {
                return Ok(Outcome::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][c];
                if a > self.tol {
                    let ratio = self.rhs[r] / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - 1e-12 || (ratio <= lratio + 1e-12 && self.basis[r] < self.basis[lr]) {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(Outcome::Unbounded);
            };
            self.pivot(r, c);
            let f = reduced[c];
            for (d, a) in reduced.iter_mut().zip(&self.rows[r]) {
                *d -= f * a;
            }
            reduced[c] = 0.0;
        }
        Err(Error::Solver(format!("no convergence within {max_iter} pivots")))
    }

    fn value(&self, col: usize) -> f64 {
        self.basis.iter().position(|&b| b == col).map_or(0.0, |r| self.rhs[r])
    }
}

impl LpSolver for DenseSimplex {
    fn solve(&self, model: &LpModel) -> Result<LpSolution> {
        model.validate()?;
        let tol = self.tolerance;

        let mut columns = IndexMap::new();
        let mut width = 0;
        let mut bound_rows: Vec<(usize, f64)> = Vec::new();
        for (v, b) in model.variables() {
            let col = match (b.lower, b.upper) {
                (Some(lower), upper) => {
                    if let Some(u) = upper {
                        bound_rows.push((width, u - lower));
                    }
                    width += 1;
                    Column::Shift { col: width - 1, lower }
                }
                (None, Some(upper)) => {
                    width += 1;
                    Column::Flip { col: width - 1, upper }
                }
                (None, None) => {
                    width += 2;
                    Column::Split { pos: width - 2, neg: width - 1 }
                }
            };
            columns.insert(v.clone(), col);
        }
        let structural = width;

        // rows over structural columns, then normalized to rhs >= 0
        let mut dense: Vec<(Vec<f64>, Sense, f64)> = Vec::new();
        for c in model.constraints() {
            let mut row = vec![0.0; structural];
            let mut rhs = c.rhs;
            for (v, coef) in c.expr.terms() {
                match columns[v] {
                    Column::Shift { col, lower } => {
                        row[col] += coef;
                        rhs -= coef * lower;
                    }
                    Column::Flip { col, upper } => {
                        row[col] -= coef;
                        rhs -= coef * upper;
                    }
                    Column::Split { pos, neg } => {
                        row[pos] += coef;
                        row[neg] -= coef;
                    }
                }
            }
            dense.push((row, c.sense, rhs));
        }
        for &(col, span) in &bound_rows {
            let mut row = vec![0.0; structural];
            row[col] = 1.0;
            dense.push((row, Sense::Le, span));
        }
        for (row, sense, rhs) in dense.iter_mut() {
            // a zero right-hand side needs no artificial once written as <=
            if *rhs < 0.0 || (*rhs == 0.0 && *sense == Sense::Ge) {
                row.iter_mut().for_each(|v| *v = -*v);
                *rhs = -*rhs;
                *sense = match sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
            }
        }

        let slacks = dense.iter().filter(|(_, s, _)| *s != Sense::Eq).count();
        let artificials = dense.iter().filter(|(_, s, _)| *s != Sense::Le).count();
        let first_art = structural + slacks;
        let total = first_art + artificials;
        let mut t = Tableau { rows: Vec::new(), rhs: Vec::new(), basis: Vec::new(), width: total, tol };
        let (mut next_slack, mut next_art) = (structural, first_art);
        for (row, sense, rhs) in dense {
            let mut full = row;
            full.resize(total, 0.0);
            match sense {
                Sense::Le => {
                    full[next_slack] = 1.0;
                    t.basis.push(next_slack);
                    next_slack += 1;
                }
                Sense::Ge => {
                    full[next_slack] = -1.0;
                    full[next_art] = 1.0;
                    t.basis.push(next_art);
                    next_slack += 1;
                    next_art += 1;
                }
                Sense::Eq => {
                    full[next_art] = 1.0;
                    t.basis.push(next_art);
                    next_art += 1;
                }
            }
            t.rows.push(full);
            t.rhs.push(rhs);
        }

        if artificials > 0 {
            let cost: Vec<f64> = (0..total).map(|j| if j >= first_art { -1.0 } else { 0.0 }).collect();
            t.optimize(&cost, &|_| true, self.max_iterations)?;
            let residual: f64 = t.basis.iter().zip(&t.rhs).filter(|(&b, _)| b >= first_art).map(|(_, r)| *r).sum();
            let scale = 1.0 + t.rhs.iter().fold(0.0f64, |m, r| m.max(r.abs()));
            if residual > tol * scale {
                return Ok(LpSolution::infeasible());
            }
            // drive zero-level artificials out of the basis; drop redundant rows
            let mut r = 0;
            while r < t.rows.len() {
                if t.basis[r] >= first_art {
                    match (0..first_art).find(|&j| t.rows[r][j].abs() > tol) {
                        Some(c) => {
                            t.pivot(r, c);
                            r += 1;
                        }
                        None => {
                            t.rows.remove(r);
                            t.rhs.remove(r);
                            t.basis.remove(r);
                        }
                    }
                } else {
                    r += 1;
                }
            }
        }

        let mut cost = vec![0.0; total];
        match columns[model.objective()] {
            Column::Shift { col, .. } => cost[col] = 1.0,
            Column::Flip { col, .. } => cost[col] = -1.0,
            Column::Split { pos, neg } => {
                cost[pos] = 1.0;
                cost[neg] = -1.0;
            }
        }
        let outcome = t.optimize(&cost, &|j| j < first_art, self.max_iterations)?;
        if let Outcome::Unbounded = outcome {
            return Ok(LpSolution { status: LpStatus::Unbounded, objective_value: None, assignment: IndexMap::new() });
        }

        let assignment: IndexMap<Var, f64> = columns
            .iter()
            .map(|(v, col)| {
                let x = match *col {
                    Column::Shift { col, lower } => lower + t.value(col),
                    Column::Flip { col, upper } => upper - t.value(col),
                    Column::Split { pos, neg } => t.value(pos) - t.value(neg),
                };
                (v.clone(), x)
            })
            .collect();
        let objective_value = assignment[model.objective()];
        Ok(LpSolution { status: LpStatus::Optimal, objective_value: Some(objective_value), assignment })
    }
}
