//! Preference statements, their translation into linear constraints on the
//! bicapacity coefficients, and the level-by-level constructive procedure.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bicapacity::{coalitions_without, ordered_pairs, pairs, TwoAdditiveBicapacity, MAX_ENUMERATED_CRITERIA};
use crate::choquet::{choquet_terms, Coefficient};
use crate::error::{Error, Result};
use crate::lp::{
    is_strictly_positive, Bounds, DenseSimplex, LinExpr, LinearConstraint, LpModel, LpSolution, LpSolver, LpStatus,
    Sense, Var, DEFAULT_EPS_THRESHOLD,
};
use crate::model::{bipolar_preference_matrix, DecisionProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractionKind {
    Synergy,
    Redundancy,
    None,
}

/// Which side of an opposition coefficient the statement varies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OpposingPower {
    /// Against `holder`, criterion `stronger` opposes more than `weaker`:
    /// `a⁺_{holder|stronger} < a⁺_{holder|weaker}`.
    VaryOpponent { holder: String, stronger: String, weaker: String },
    /// `opponent` weakens `stronger` more than it weakens `weaker`:
    /// `a⁺_{stronger|opponent} < a⁺_{weaker|opponent}`.
    VaryHolder { opponent: String, stronger: String, weaker: String },
}

/// A statement by the decision maker. Alternatives and criteria are
/// referred to by id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PreferenceStatement {
    /// `a` is preferred to `b` when compared directly.
    LocalPreference {
        a: String,
        b: String,
    },
    LocalIndifference {
        a: String,
        b: String,
    },
    P1Preference {
        a: String,
        b: String,
    },
    P1Indifference {
        a: String,
        b: String,
    },
    P2Preference {
        a: String,
        b: String,
    },
    P2Indifference {
        a: String,
        b: String,
    },
    /// The preference of `a` over `b` is stronger than that of `c` over `d`.
    IntensityPreference {
        a: String,
        b: String,
        c: String,
        d: String,
    },
    IntensityIndifference {
        a: String,
        b: String,
        c: String,
        d: String,
    },
    CriterionMoreImportant {
        j: String,
        k: String,
    },
    CriterionEquallyImportant {
        j: String,
        k: String,
    },
    InteractionSign {
        j: String,
        k: String,
        sign: InteractionKind,
    },
    /// `|a_first| > |a_second|`; both pairs need a declared sign.
    InteractionStronger {
        first: [String; 2],
        second: [String; 2],
    },
    InteractionEqual {
        first: [String; 2],
        second: [String; 2],
    },
    OpposingPowerGreater(OpposingPower),
}

impl PreferenceStatement {
    pub fn type_name(&self) -> &'static str {
        match self {
            Self::LocalPreference { .. } => "local_preference",
            Self::LocalIndifference { .. } => "local_indifference",
            Self::P1Preference { .. } => "p1_preference",
            Self::P1Indifference { .. } => "p1_indifference",
            Self::P2Preference { .. } => "p2_preference",
            Self::P2Indifference { .. } => "p2_indifference",
            Self::IntensityPreference { .. } => "intensity_preference",
            Self::IntensityIndifference { .. } => "intensity_indifference",
            Self::CriterionMoreImportant { .. } => "criterion_more_important",
            Self::CriterionEquallyImportant { .. } => "criterion_equally_important",
            Self::InteractionSign { .. } => "interaction_sign",
            Self::InteractionStronger { .. } => "interaction_stronger",
            Self::InteractionEqual { .. } => "interaction_equal",
            Self::OpposingPowerGreater(_) => "opposing_power_greater",
        }
    }
}

impl fmt::Display for PreferenceStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LocalPreference { a, b } => write!(f, "{a} P_local {b}"),
            Self::LocalIndifference { a, b } => write!(f, "{a} I_local {b}"),
            Self::P1Preference { a, b } => write!(f, "{a} P_I {b}"),
            Self::P1Indifference { a, b } => write!(f, "{a} I_I {b}"),
            Self::P2Preference { a, b } => write!(f, "{a} P_II {b}"),
            Self::P2Indifference { a, b } => write!(f, "{a} I_II {b}"),
            Self::IntensityPreference { a, b, c, d } => write!(f, "({a},{b}) > ({c},{d})"),
            Self::IntensityIndifference { a, b, c, d } => write!(f, "({a},{b}) ~ ({c},{d})"),
            Self::CriterionMoreImportant { j, k } => write!(f, "{j} more important than {k}"),
            Self::CriterionEquallyImportant { j, k } => write!(f, "{j} as important as {k}"),
            Self::InteractionSign { j, k, sign } => write!(f, "{j},{k} {sign:?}"),
            Self::InteractionStronger { first, second } => {
                write!(f, "|{},{}| > |{},{}|", first[0], first[1], second[0], second[1])
            }
            Self::InteractionEqual { first, second } => {
                write!(f, "|{},{}| = |{},{}|", first[0], first[1], second[0], second[1])
            }
            Self::OpposingPowerGreater(OpposingPower::VaryOpponent { holder, stronger, weaker }) => {
                write!(f, "against {holder}: {stronger} opposes more than {weaker}")
            }
            Self::OpposingPowerGreater(OpposingPower::VaryHolder { opponent, stronger, weaker }) => {
                write!(f, "{opponent} weakens {stronger} more than {weaker}")
            }
        }
    }
}

pub fn parse_statements(json: &str) -> Result<Vec<PreferenceStatement>> {
    Ok(serde_json::from_str(json)?)
}

/// Model complexity levels, simplest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelLevel {
    /// Additive weights only.
    Classical,
    /// Interactions between criteria, no opposition terms.
    SymmetricChoquet,
    /// Full 2-additive bipolar model under the symmetry rows.
    Bipolar,
    Inconsistent,
}

impl ModelLevel {
    pub const SOLVABLE: [ModelLevel; 3] = [ModelLevel::Classical, ModelLevel::SymmetricChoquet, ModelLevel::Bipolar];
}

fn coefficient_var(c: Coefficient) -> Var {
    match c {
        Coefficient::APlus(j) | Coefficient::AMinus(j) => Var::Weight(j),
        Coefficient::PairPlus(j, k) | Coefficient::PairMinus(j, k) => Var::interaction(j, k),
        Coefficient::OppPlus(j, k) => Var::OppPlus(j, k),
        Coefficient::OppMinus(j, k) => Var::OppMinus(j, k),
    }
}

/// Pairwise integrals and flows as linear forms in the LP variables.
#[derive(Debug, Clone)]
pub struct Linearization {
    m: usize,
    plus: Vec<LinExpr>,
    minus: Vec<LinExpr>,
}

impl Linearization {
    pub fn new(problem: &DecisionProblem) -> Self {
        let pb = bipolar_preference_matrix(problem);
        let m = pb.m();
        let mut plus = Vec::with_capacity(m * m);
        let mut minus = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                let terms = choquet_terms(pb.get(a, b));
                let collect = |ts: &[(Coefficient, f64)]| {
                    let mut e = LinExpr::new();
                    for &(c, v) in ts {
                        e.add(coefficient_var(c), v);
                    }
                    e
                };
                plus.push(collect(&terms.positive));
                minus.push(collect(&terms.negative));
            }
        }
        Self { m, plus, minus }
    }

    pub fn ch_plus(&self, a: usize, b: usize) -> &LinExpr {
        &self.plus[a * self.m + b]
    }

    pub fn ch_minus(&self, a: usize, b: usize) -> &LinExpr {
        &self.minus[a * self.m + b]
    }

    /// `Ch^B(P^B(a, b))`.
    pub fn ch(&self, a: usize, b: usize) -> LinExpr {
        self.ch_plus(a, b).minus(self.ch_minus(a, b))
    }

    fn flow(&self, a: usize, part: impl Fn(usize, usize) -> LinExpr) -> LinExpr {
        let mut e = LinExpr::new();
        let scale = 1.0 / (self.m as f64 - 1.0);
        for b in (0..self.m).filter(|&b| b != a) {
            e.add_scaled(&part(a, b), scale);
        }
        e
    }

    pub fn flow_plus(&self, a: usize) -> LinExpr {
        self.flow(a, |a, b| self.ch_plus(a, b).clone())
    }

    pub fn flow_minus(&self, a: usize) -> LinExpr {
        self.flow(a, |a, b| self.ch_minus(a, b).clone())
    }

    pub fn flow_net(&self, a: usize) -> LinExpr {
        self.flow(a, |a, b| self.ch(a, b))
    }
}

/// `lhs − rhs ≥ ε`.
fn exceeds(lhs: &LinExpr, rhs: &LinExpr, label: &str) -> LinearConstraint {
    let expr = lhs.minus(rhs).with(Var::Epsilon, -1.0);
    LinearConstraint::new(expr, Sense::Ge, 0.0, label)
}

/// `lhs − rhs ≥ 0`.
fn at_least(lhs: &LinExpr, rhs: &LinExpr, label: &str) -> LinearConstraint {
    LinearConstraint::new(lhs.minus(rhs), Sense::Ge, 0.0, label)
}

fn equal(lhs: &LinExpr, rhs: &LinExpr, label: &str) -> LinearConstraint {
    LinearConstraint::new(lhs.minus(rhs), Sense::Eq, 0.0, label)
}

/// Statements of a set together with the problem they refer to.
struct Translator<'a> {
    problem: &'a DecisionProblem,
    lin: &'a Linearization,
    signs: HashMap<(usize, usize), InteractionKind>,
}

impl<'a> Translator<'a> {
    fn new(problem: &'a DecisionProblem, lin: &'a Linearization, statements: &[PreferenceStatement]) -> Result<Self> {
        let mut signs = HashMap::new();
        for s in statements {
            if let PreferenceStatement::InteractionSign { j, k, sign } = s {
                let key = Self::pair_key(problem, j, k)?;
                signs.entry(key).or_insert(*sign);
            }
        }
        Ok(Self { problem, lin, signs })
    }

    fn pair_key(problem: &DecisionProblem, j: &str, k: &str) -> Result<(usize, usize)> {
        let (j, k) = (problem.criterion_index(j)?, problem.criterion_index(k)?);
        if j == k {
            return Err(Error::Config(format!(
                "interaction needs two distinct criteria, got `{}` twice",
                problem.criteria()[j].id
            )));
        }
        Ok((j.min(k), j.max(k)))
    }

    fn alt(&self, id: &str) -> Result<usize> {
        self.problem.alternative_index(id)
    }

    fn pair(&self, a: &str, b: &str) -> Result<(usize, usize)> {
        let (a, b) = (self.alt(a)?, self.alt(b)?);
        if a == b {
            return Err(Error::Config(format!("statement compares `{}` with itself", self.problem.alternatives()[a])));
        }
        Ok((a, b))
    }

    fn criterion(&self, id: &str) -> Result<usize> {
        self.problem.criterion_index(id)
    }

    fn distinct_criteria(&self, ids: &[&str]) -> Result<Vec<usize>> {
        let idx = ids.iter().map(|id| self.criterion(id)).collect::<Result<Vec<_>>>()?;
        for (i, a) in idx.iter().enumerate() {
            if idx[..i].contains(a) {
                return Err(Error::Config(format!("criterion `{}` repeated in statement", ids[i])));
            }
        }
        Ok(idx)
    }

    fn declared_sign(&self, pair: &[String; 2]) -> Result<((usize, usize), InteractionKind)> {
        let key = Self::pair_key(self.problem, &pair[0], &pair[1])?;
        match self.signs.get(&key) {
            Some(InteractionKind::None) | None => Err(Error::Linearization(format!(
                "compare interaction strengths only after declaring the pair {{{}, {}}} a synergy or a redundancy",
                pair[0], pair[1]
            ))),
            Some(sign) => Ok((key, *sign)),
        }
    }

    fn rows(&self, s: &PreferenceStatement, label: &str) -> Result<Vec<LinearConstraint>> {
        use PreferenceStatement as S;
        let lin = self.lin;
        let zero = LinExpr::new();
        Ok(match s {
            S::LocalPreference { a, b } => {
                let (a, b) = self.pair(a, b)?;
                vec![exceeds(&lin.ch(a, b), &zero, label)]
            }
            S::LocalIndifference { a, b } => {
                let (a, b) = self.pair(a, b)?;
                vec![equal(&lin.ch(a, b), &zero, label)]
            }
            S::P1Preference { a, b } => {
                let (a, b) = self.pair(a, b)?;
                vec![
                    at_least(&lin.flow_plus(a), &lin.flow_plus(b), label),
                    at_least(&lin.flow_minus(b), &lin.flow_minus(a), label),
                    exceeds(&lin.flow_net(a), &lin.flow_net(b), label),
                ]
            }
            S::P1Indifference { a, b } => {
                let (a, b) = self.pair(a, b)?;
                vec![
                    equal(&lin.flow_plus(a), &lin.flow_plus(b), label),
                    equal(&lin.flow_minus(a), &lin.flow_minus(b), label),
                ]
            }
            S::P2Preference { a, b } => {
                let (a, b) = self.pair(a, b)?;
                vec![exceeds(&lin.flow_net(a), &lin.flow_net(b), label)]
            }
            S::P2Indifference { a, b } => {
                let (a, b) = self.pair(a, b)?;
                vec![equal(&lin.flow_net(a), &lin.flow_net(b), label)]
            }
            S::IntensityPreference { a, b, c, d } => {
                let ((a, b), (c, d)) = (self.pair(a, b)?, self.pair(c, d)?);
                vec![exceeds(&lin.ch(a, b), &lin.ch(c, d), label)]
            }
            S::IntensityIndifference { a, b, c, d } => {
                let ((a, b), (c, d)) = (self.pair(a, b)?, self.pair(c, d)?);
                vec![equal(&lin.ch(a, b), &lin.ch(c, d), label)]
            }
            S::CriterionMoreImportant { j, k } => {
                let idx = self.distinct_criteria(&[j, k])?;
                vec![exceeds(&LinExpr::var(Var::Weight(idx[0])), &LinExpr::var(Var::Weight(idx[1])), label)]
            }
            S::CriterionEquallyImportant { j, k } => {
                let idx = self.distinct_criteria(&[j, k])?;
                vec![equal(&LinExpr::var(Var::Weight(idx[0])), &LinExpr::var(Var::Weight(idx[1])), label)]
            }
            S::InteractionSign { j, k, sign } => {
                let (j, k) = Self::pair_key(self.problem, j, k)?;
                let v = LinExpr::var(Var::Interaction(j, k));
                match sign {
                    InteractionKind::Synergy => vec![exceeds(&v, &zero, label)],
                    InteractionKind::Redundancy => vec![exceeds(&zero, &v, label)],
                    InteractionKind::None => vec![equal(&v, &zero, label)],
                }
            }
            S::InteractionStronger { first, second } => {
                let ((p, sp), (q, sq)) = (self.declared_sign(first)?, self.declared_sign(second)?);
                let (x, y) = (Var::Interaction(p.0, p.1), Var::Interaction(q.0, q.1));
                // |x| written with the declared sign of each pair
                let abs = |v: Var, s: InteractionKind| {
                    LinExpr::var(v).scaled(if s == InteractionKind::Synergy { 1.0 } else { -1.0 })
                };
                vec![exceeds(&abs(x, sp), &abs(y, sq), label)]
            }
            S::InteractionEqual { first, second } => {
                let ((p, sp), (q, sq)) = (self.declared_sign(first)?, self.declared_sign(second)?);
                let x = LinExpr::var(Var::Interaction(p.0, p.1));
                let y = LinExpr::var(Var::Interaction(q.0, q.1));
                let y = if sp == sq { y } else { y.scaled(-1.0) };
                vec![equal(&x, &y, label)]
            }
            S::OpposingPowerGreater(OpposingPower::VaryOpponent { holder, stronger, weaker }) => {
                let idx = self.distinct_criteria(&[holder, stronger, weaker])?;
                let (j, k, h) = (idx[0], idx[1], idx[2]);
                vec![exceeds(&LinExpr::var(Var::OppPlus(j, h)), &LinExpr::var(Var::OppPlus(j, k)), label)]
            }
            S::OpposingPowerGreater(OpposingPower::VaryHolder { opponent, stronger, weaker }) => {
                let idx = self.distinct_criteria(&[opponent, stronger, weaker])?;
                let (k, j, h) = (idx[0], idx[1], idx[2]);
                vec![exceeds(&LinExpr::var(Var::OppPlus(h, k)), &LinExpr::var(Var::OppPlus(j, k)), label)]
            }
        })
    }
}

fn statement_label(index: usize, s: &PreferenceStatement) -> String {
    format!("statement {}: {}", index + 1, s.type_name())
}

/// Rows for the statement at `index` of `statements`; pair signs are looked
/// up across the whole set.
pub fn statement_to_constraints(
    problem: &DecisionProblem,
    statements: &[PreferenceStatement],
    index: usize,
) -> Result<Vec<LinearConstraint>> {
    let lin = Linearization::new(problem);
    let tr = Translator::new(problem, &lin, statements)?;
    let s = statements.get(index).ok_or_else(|| Error::Config(format!("no statement {index}")))?;
    tr.rows(s, &statement_label(index, s))
}

/// Variable bounds, symmetry, boundary and monotonicity rows with the pins
/// of `level`.
pub fn structural_model(n: usize, level: ModelLevel) -> Result<LpModel> {
    if n > MAX_ENUMERATED_CRITERIA {
        return Err(Error::Capacity { what: "elicitation", n, max: MAX_ENUMERATED_CRITERIA });
    }
    if level == ModelLevel::Inconsistent {
        return Err(Error::Config("no model for the inconsistent level".into()));
    }
    let mut model = LpModel::new(Var::Epsilon, Bounds::at_most(1.0));
    let pin_pairs = level == ModelLevel::Classical;
    let pin_opp = level != ModelLevel::Bipolar;
    for j in 0..n {
        model.set_bounds(Var::Weight(j), Bounds::NON_NEGATIVE);
    }
    for (j, k) in pairs(n) {
        model.set_bounds(Var::Interaction(j, k), if pin_pairs { Bounds::fixed(0.0) } else { Bounds::FREE });
    }
    for (j, k) in ordered_pairs(n) {
        let b = if pin_opp { Bounds::fixed(0.0) } else { Bounds::NON_POSITIVE };
        model.set_bounds(Var::OppPlus(j, k), b).set_bounds(Var::OppMinus(j, k), b);
    }
    for (j, k) in ordered_pairs(n) {
        let row = LinExpr::var(Var::OppPlus(j, k)).with(Var::OppMinus(k, j), -1.0);
        model.add_constraint(LinearConstraint::new(row, Sense::Eq, 0.0, "symmetry"));
    }
    let mut total = LinExpr::new();
    for j in 0..n {
        total.add(Var::Weight(j), 1.0);
    }
    for (j, k) in pairs(n) {
        total.add(Var::Interaction(j, k), 1.0);
    }
    model.add_constraint(LinearConstraint::new(total, Sense::Eq, 1.0, "boundary"));
    for j in 0..n {
        for cd in coalitions_without(n, j) {
            let mut plus = LinExpr::var(Var::Weight(j));
            let mut minus = LinExpr::var(Var::Weight(j));
            for k in (0..n).filter(|&k| k != j) {
                if cd.contains_positive(k) {
                    plus.add(Var::interaction(j, k), 1.0);
                    minus.add(Var::OppMinus(k, j), 1.0);
                } else if cd.contains_negative(k) {
                    plus.add(Var::OppPlus(j, k), 1.0);
                    minus.add(Var::interaction(j, k), 1.0);
                }
            }
            model.add_constraint(LinearConstraint::new(plus, Sense::Ge, 0.0, format!("monotonicity+ {} {cd}", j + 1)));
            model.add_constraint(LinearConstraint::new(minus, Sense::Ge, 0.0, format!("monotonicity- {} {cd}", j + 1)));
        }
    }
    Ok(model)
}

/// A problem, a statement set, and the rows each statement contributes.
#[derive(Debug, Clone)]
pub struct PreferenceModel {
    problem: DecisionProblem,
    statements: Vec<PreferenceStatement>,
    lin: Linearization,
    rows: Vec<Vec<LinearConstraint>>,
}

impl PreferenceModel {
    pub fn new(problem: &DecisionProblem, statements: &[PreferenceStatement]) -> Result<Self> {
        if problem.m() < 2 {
            return Err(Error::Config("elicitation needs at least two alternatives".into()));
        }
        if problem.n() > MAX_ENUMERATED_CRITERIA {
            return Err(Error::Capacity { what: "elicitation", n: problem.n(), max: MAX_ENUMERATED_CRITERIA });
        }
        let lin = Linearization::new(problem);
        let tr = Translator::new(problem, &lin, statements)?;
        let rows = statements
            .iter()
            .enumerate()
            .map(|(i, s)| tr.rows(s, &statement_label(i, s)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { problem: problem.clone(), statements: statements.to_vec(), lin, rows })
    }

    pub fn problem(&self) -> &DecisionProblem {
        &self.problem
    }

    pub fn statements(&self) -> &[PreferenceStatement] {
        &self.statements
    }

    pub fn linearization(&self) -> &Linearization {
        &self.lin
    }

    pub fn statement_rows(&self) -> &[Vec<LinearConstraint>] {
        &self.rows
    }

    /// Structural rows for `level` plus every statement row.
    pub fn model(&self, level: ModelLevel) -> Result<LpModel> {
        self.model_without(level, &[])
    }

    /// As [`Self::model`], skipping the statements at `skip`.
    pub fn model_without(&self, level: ModelLevel, skip: &[usize]) -> Result<LpModel> {
        let mut model = structural_model(self.problem.n(), level)?;
        for (i, rows) in self.rows.iter().enumerate() {
            if !skip.contains(&i) {
                model.extend(rows.iter().cloned());
            }
        }
        Ok(model)
    }
}

/// Reads a bicapacity off an LP assignment over the shared variables.
pub fn parameters_from_solution(n: usize, sol: &LpSolution) -> TwoAdditiveBicapacity {
    let clean = |v: f64| if v.abs() < 1e-12 { 0.0 } else { v };
    let mut b = TwoAdditiveBicapacity::zero(n);
    for j in 0..n {
        let w = clean(sol.value(&Var::Weight(j)));
        b.set_a_plus(j, w).set_a_minus(j, w);
    }
    for (j, k) in pairs(n) {
        let v = clean(sol.value(&Var::Interaction(j, k)));
        b.set_pair_plus(j, k, v).set_pair_minus(j, k, v);
    }
    for (j, k) in ordered_pairs(n) {
        b.set_opp_plus(j, k, clean(sol.value(&Var::OppPlus(j, k))));
        b.set_opp_minus(j, k, clean(sol.value(&Var::OppMinus(j, k))));
    }
    b
}

/// Value of each LP variable under a bicapacity with shared halves.
pub fn variable_value(b: &TwoAdditiveBicapacity, epsilon: f64) -> impl Fn(&Var) -> f64 + '_ {
    move |v| match *v {
        Var::Weight(j) => b.a_plus(j),
        Var::Interaction(j, k) => b.pair_plus(j, k),
        Var::OppPlus(j, k) => b.opp_plus(j, k),
        Var::OppMinus(j, k) => b.opp_minus(j, k),
        Var::Epsilon => epsilon,
        Var::Aux(_) => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElicitationOptions {
    pub eps_threshold: f64,
}

impl Default for ElicitationOptions {
    fn default() -> Self {
        Self { eps_threshold: DEFAULT_EPS_THRESHOLD }
    }
}

/// Outcome of one level of the procedure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelStep {
    pub level: ModelLevel,
    pub status: LpStatus,
    pub epsilon: Option<f64>,
    pub passed: bool,
}

/// Statements implicated when no level is consistent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfeasibilityHint {
    /// A minimal subset of statements that is inconsistent on its own
    /// (0-based indices).
    pub conflict: Vec<usize>,
    /// Statements whose sole removal restores consistency.
    pub single_removals: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElicitationResult {
    pub level: ModelLevel,
    /// Optimal ε at the returned level, or at the most general one.
    pub epsilon: Option<f64>,
    pub parameters: Option<TwoAdditiveBicapacity>,
    pub step_trace: Vec<LevelStep>,
    pub infeasibility_hint: Option<InfeasibilityHint>,
}

fn passes(model: &LpModel, solver: &dyn LpSolver, threshold: f64) -> Result<(LpSolution, bool)> {
    let sol = solver.solve(model)?;
    let ok = is_strictly_positive(&sol, threshold);
    Ok((sol, ok))
}

/// Tries the classical, symmetric Choquet and bipolar models in turn and
/// returns the first whose optimal ε is strictly positive.
pub fn constructive_elicitation(
    problem: &DecisionProblem,
    statements: &[PreferenceStatement],
    options: ElicitationOptions,
) -> Result<ElicitationResult> {
    constructive_elicitation_with(&DenseSimplex::default(), problem, statements, options)
}

pub fn constructive_elicitation_with(
    solver: &dyn LpSolver,
    problem: &DecisionProblem,
    statements: &[PreferenceStatement],
    options: ElicitationOptions,
) -> Result<ElicitationResult> {
    let pm = PreferenceModel::new(problem, statements)?;
    let threshold = options.eps_threshold;
    let mut trace = Vec::new();
    for level in ModelLevel::SOLVABLE {
        let (sol, ok) = passes(&pm.model(level)?, solver, threshold)?;
        trace.push(LevelStep { level, status: sol.status, epsilon: sol.objective_value, passed: ok });
        if ok {
            return Ok(ElicitationResult {
                level,
                epsilon: sol.objective_value,
                parameters: Some(parameters_from_solution(problem.n(), &sol)),
                step_trace: trace,
                infeasibility_hint: None,
            });
        }
    }
    let epsilon = trace.last().and_then(|s| s.epsilon);
    Ok(ElicitationResult {
        level: ModelLevel::Inconsistent,
        epsilon,
        parameters: None,
        step_trace: trace,
        infeasibility_hint: Some(infeasibility_hint(&pm, solver, threshold)?),
    })
}

fn infeasibility_hint(pm: &PreferenceModel, solver: &dyn LpSolver, threshold: f64) -> Result<InfeasibilityHint> {
    let all: Vec<usize> = (0..pm.statements.len()).collect();
    let consistent_without = |skip: &[usize]| -> Result<bool> {
        Ok(passes(&pm.model_without(ModelLevel::Bipolar, skip)?, solver, threshold)?.1)
    };
    let mut single_removals = Vec::new();
    for &i in &all {
        if consistent_without(&[i])? {
            single_removals.push(i);
        }
    }
    // deletion filter: drop each statement unless the rest becomes consistent
    let mut skip: Vec<usize> = Vec::new();
    for &i in &all {
        skip.push(i);
        if consistent_without(&skip)? {
            skip.pop();
        }
    }
    let conflict = all.into_iter().filter(|i| !skip.contains(i)).collect();
    Ok(InfeasibilityHint { conflict, single_removals })
}
