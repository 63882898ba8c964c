//! Linear programs over the bicapacity coefficients: model representation,
//! a solver seam and the max-ε feasibility test.

mod simplex;

use std::collections::BTreeMap;
use std::fmt;

use indexmap::IndexMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use simplex::DenseSimplex;

/// Default threshold above which an optimal ε counts as strictly positive.
pub const DEFAULT_EPS_THRESHOLD: f64 = 1e-6;
/// Constraint residual tolerated in an optimal solution.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-7;

/// An LP variable. Under the symmetry rows the positive and negative
/// halves of `a_j` and `a_jk` share one variable each.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// `a_j = a_j⁺ = a_j⁻`.
    Weight(usize),
    /// `a_jk = a_jk⁺ = a_jk⁻`, stored with `j < k`.
    Interaction(usize, usize),
    /// `a⁺_{j|k}`.
    OppPlus(usize, usize),
    /// `a⁻_{j|k}`.
    OppMinus(usize, usize),
    Epsilon,
    Aux(String),
}

impl Var {
    pub fn interaction(j: usize, k: usize) -> Var {
        if j < k {
            Var::Interaction(j, k)
        } else {
            Var::Interaction(k, j)
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Weight(j) => write!(f, "a_{}", j + 1),
            Var::Interaction(j, k) => write!(f, "a_{},{}", j + 1, k + 1),
            Var::OppPlus(j, k) => write!(f, "a+_{}|{}", j + 1, k + 1),
            Var::OppMinus(j, k) => write!(f, "a-_{}|{}", j + 1, k + 1),
            Var::Epsilon => write!(f, "eps"),
            Var::Aux(tag) => write!(f, "{tag}"),
        }
    }
}

impl Serialize for Var {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl Bounds {
    pub const FREE: Bounds = Bounds { lower: None, upper: None };
    pub const NON_NEGATIVE: Bounds = Bounds { lower: Some(0.0), upper: None };
    pub const NON_POSITIVE: Bounds = Bounds { lower: None, upper: Some(0.0) };

    pub fn fixed(v: f64) -> Bounds {
        Bounds { lower: Some(v), upper: Some(v) }
    }

    pub fn between(lower: f64, upper: f64) -> Bounds {
        Bounds { lower: Some(lower), upper: Some(upper) }
    }

    pub fn at_most(upper: f64) -> Bounds {
        Bounds { lower: None, upper: Some(upper) }
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        self.lower.is_none_or(|l| v >= l - tol) && self.upper.is_none_or(|u| v <= u + tol)
    }
}

/// A linear form with one coefficient per variable.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinExpr {
    terms: BTreeMap<Var, f64>,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        let mut e = Self::new();
        e.add(v, 1.0);
        e
    }

    pub fn add(&mut self, v: Var, coef: f64) -> &mut Self {
        *self.terms.entry(v).or_insert(0.0) += coef;
        self
    }

    pub fn add_scaled(&mut self, other: &LinExpr, scale: f64) -> &mut Self {
        for (v, c) in &other.terms {
            self.add(v.clone(), c * scale);
        }
        self
    }

    pub fn with(mut self, v: Var, coef: f64) -> Self {
        self.add(v, coef);
        self
    }

    pub fn scaled(&self, scale: f64) -> LinExpr {
        let mut e = LinExpr::new();
        e.add_scaled(self, scale);
        e
    }

    /// `self − other`.
    pub fn minus(&self, other: &LinExpr) -> LinExpr {
        let mut e = self.clone();
        e.add_scaled(other, -1.0);
        e
    }

    pub fn coefficient(&self, v: &Var) -> f64 {
        self.terms.get(v).copied().unwrap_or(0.0)
    }

    /// Non-zero terms in variable order.
    pub fn terms(&self) -> impl Iterator<Item = (&Var, f64)> {
        self.terms.iter().filter(|(_, c)| **c != 0.0).map(|(v, c)| (v, *c))
    }

    pub fn evaluate(&self, value: impl Fn(&Var) -> f64) -> f64 {
        self.terms().map(|(v, c)| c * value(v)).sum()
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in self.terms() {
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if c.abs() == 1.0 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{} {v}", c.abs())?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub expr: LinExpr,
    pub sense: Sense,
    pub rhs: f64,
    /// Which statement or structural condition produced the row.
    pub label: String,
}

impl LinearConstraint {
    pub fn new(expr: LinExpr, sense: Sense, rhs: f64, label: impl Into<String>) -> Self {
        Self { expr, sense, rhs, label: label.into() }
    }

    /// Amount by which `values` violates the row (0 when satisfied).
    pub fn violation(&self, value: impl Fn(&Var) -> f64) -> f64 {
        let lhs = self.expr.evaluate(value);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

impl fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} {} {}", self.label, self.expr, self.sense, self.rhs)
    }
}

/// Maximize one variable subject to linear rows and variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    variables: IndexMap<Var, Bounds>,
    constraints: Vec<LinearConstraint>,
    objective: Var,
}

impl LpModel {
    pub fn new(objective: Var, bounds: Bounds) -> Self {
        let mut variables = IndexMap::new();
        variables.insert(objective.clone(), bounds);
        Self { variables, constraints: Vec::new(), objective }
    }

    /// Declares a variable, or replaces its bounds if already present.
    pub fn set_bounds(&mut self, v: Var, bounds: Bounds) -> &mut Self {
        self.variables.insert(v, bounds);
        self
    }

    pub fn bounds(&self, v: &Var) -> Option<Bounds> {
        self.variables.get(v).copied()
    }

    pub fn add_constraint(&mut self, c: LinearConstraint) -> &mut Self {
        self.constraints.push(c);
        self
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = LinearConstraint>) -> &mut Self {
        self.constraints.extend(cs);
        self
    }

    pub fn variables(&self) -> &IndexMap<Var, Bounds> {
        &self.variables
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &Var {
        &self.objective
    }

    pub fn validate(&self) -> Result<()> {
        for (v, b) in &self.variables {
            let finite = |x: Option<f64>| x.is_none_or(|x| x.is_finite());
            if !finite(b.lower) || !finite(b.upper) {
                return Err(Error::MalformedModel(format!("non-finite bound on {v}")));
            }
            if let (Some(l), Some(u)) = (b.lower, b.upper) {
                if l > u {
                    return Err(Error::MalformedModel(format!("empty bounds [{l}, {u}] on {v}")));
                }
            }
        }
        for c in &self.constraints {
            if !c.rhs.is_finite() {
                return Err(Error::MalformedModel(format!("non-finite right-hand side in {c}")));
            }
            for (v, coef) in c.expr.terms() {
                if !coef.is_finite() {
                    return Err(Error::MalformedModel(format!("non-finite coefficient in {c}")));
                }
                if !self.variables.contains_key(v) {
                    return Err(Error::MalformedModel(format!("undeclared variable {v} in {c}")));
                }
            }
        }
        Ok(())
    }

    /// Largest row or bound violation of an assignment.
    pub fn max_violation(&self, value: impl Fn(&Var) -> f64) -> f64 {
        let rows = self.constraints.iter().map(|c| c.violation(&value));
        let bounds = self.variables.iter().map(|(v, b)| {
            let x = value(v);
            let below = b.lower.map_or(0.0, |l| (l - x).max(0.0));
            let above = b.upper.map_or(0.0, |u| (x - u).max(0.0));
            below.max(above)
        });
        rows.chain(bounds).fold(0.0, f64::max)
    }
}

impl fmt::Display for LpModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "maximize {}", self.objective)?;
        writeln!(f, "subject to")?;
        for c in &self.constraints {
            writeln!(f, "  {c}")?;
        }
        writeln!(f, "bounds")?;
        for (v, b) in &self.variables {
            match (b.lower, b.upper) {
                (None, None) => writeln!(f, "  {v} free")?,
                (Some(l), None) => writeln!(f, "  {v} >= {l}")?,
                (None, Some(u)) => writeln!(f, "  {v} <= {u}")?,
                (Some(l), Some(u)) => writeln!(f, "  {l} <= {v} <= {u}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal objective, present only when `status` is `Optimal`.
    pub objective_value: Option<f64>,
    #[serde(serialize_with = "serialize_assignment")]
    pub assignment: IndexMap<Var, f64>,
}

fn serialize_assignment<S: Serializer>(a: &IndexMap<Var, f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(a.iter().map(|(k, v)| (k.to_string(), v)))
}

impl LpSolution {
    pub fn infeasible() -> Self {
        Self { status: LpStatus::Infeasible, objective_value: None, assignment: IndexMap::new() }
    }

    pub fn value(&self, v: &Var) -> f64 {
        self.assignment.get(v).copied().unwrap_or(0.0)
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Anything able to maximize the objective variable of an [`LpModel`].
pub trait LpSolver: Sync {
    fn solve(&self, model: &LpModel) -> Result<LpSolution>;
}

/// Solves with the reference dense simplex.
pub fn solve(model: &LpModel) -> Result<LpSolution> {
    DenseSimplex::default().solve(model)
}

/// True iff the model is feasible and its optimum exceeds `eps_threshold`.
pub fn check_feasible_positive(model: &LpModel, eps_threshold: f64) -> Result<bool> {
    let sol = solve(model)?;
    Ok(is_strictly_positive(&sol, eps_threshold))
}

pub fn is_strictly_positive(sol: &LpSolution, eps_threshold: f64) -> bool {
    match (sol.status, sol.objective_value) {
        (LpStatus::Optimal, Some(v)) => v > eps_threshold,
        (LpStatus::Unbounded, _) => true,
        _ => false,
    }
}
