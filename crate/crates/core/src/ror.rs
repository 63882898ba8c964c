//! Robust ordinal regression: necessary and possible weak preference over
//! every bicapacity compatible with the statements.

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::choquet::Level;
use crate::elicitation::{ModelLevel, PreferenceModel, PreferenceStatement};
use crate::error::{Error, Result};
use crate::lp::{
    is_strictly_positive, DenseSimplex, LinExpr, LinearConstraint, LpModel, LpSolver, Sense, Var, DEFAULT_EPS_THRESHOLD,
};
use crate::model::DecisionProblem;

/// Scale of the switch variables that relax one half of the PROMETHEE I
/// negation; flow differences lie in `[−2, 2]`.
const BIG_M: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Necessary,
    Possible,
}

impl RelationKind {
    pub const ALL: [RelationKind; 2] = [RelationKind::Necessary, RelationKind::Possible];

    pub fn name(&self) -> &'static str {
        match self {
            RelationKind::Necessary => "necessary",
            RelationKind::Possible => "possible",
        }
    }
}

/// Optima closer to zero than this multiple of the threshold are flagged.
pub const BORDERLINE_FACTOR: f64 = 10.0;

pub fn is_borderline(epsilon: f64, threshold: f64) -> bool {
    epsilon.abs() <= BORDERLINE_FACTOR * threshold
}

/// Result of one pairwise check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellCheck {
    pub holds: bool,
    /// Best optimal ε over the programs solved; `None` when all were infeasible.
    pub epsilon: Option<f64>,
    /// The optimum lies within `BORDERLINE_FACTOR × threshold` of zero.
    pub borderline: bool,
}

/// One relation at one level; diagonal cells are false by convention.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationMatrix {
    pub kind: RelationKind,
    pub level: Level,
    pub cells: Vec<Vec<bool>>,
    pub epsilon: Vec<Vec<Option<f64>>>,
}

impl RelationMatrix {
    pub fn key(&self) -> String {
        matrix_key(self.kind, self.level)
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        self.cells[a][b]
    }

    pub fn count(&self) -> usize {
        self.cells.iter().flatten().filter(|c| **c).count()
    }
}

pub fn matrix_key(kind: RelationKind, level: Level) -> String {
    format!("{}_{}", kind.name(), level.short_name())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RorOptions {
    pub eps_threshold: f64,
}

impl Default for RorOptions {
    fn default() -> Self {
        Self { eps_threshold: DEFAULT_EPS_THRESHOLD }
    }
}

/// The compatible set defined by a problem and a statement set.
pub struct RorContext<'s> {
    pm: PreferenceModel,
    base: LpModel,
    threshold: f64,
    solver: &'s dyn LpSolver,
}

static DEFAULT_SOLVER: DenseSimplex = DenseSimplex { tolerance: 1e-9, max_iterations: 100_000 };

impl RorContext<'static> {
    pub fn new(problem: &DecisionProblem, statements: &[PreferenceStatement], options: RorOptions) -> Result<Self> {
        Self::with_solver(&DEFAULT_SOLVER, problem, statements, options)
    }
}

impl<'s> RorContext<'s> {
    /// Fails with [`Error::EmptyCompatibleSet`] unless the full bipolar
    /// model has a strictly positive ε.
    pub fn with_solver(
        solver: &'s dyn LpSolver,
        problem: &DecisionProblem,
        statements: &[PreferenceStatement],
        options: RorOptions,
    ) -> Result<Self> {
        let pm = PreferenceModel::new(problem, statements)?;
        let base = pm.model(ModelLevel::Bipolar)?;
        if !is_strictly_positive(&solver.solve(&base)?, options.eps_threshold) {
            return Err(Error::EmptyCompatibleSet);
        }
        Ok(Self { pm, base, threshold: options.eps_threshold, solver })
    }

    pub fn preference_model(&self) -> &PreferenceModel {
        &self.pm
    }

    fn pair(&self, a: usize, b: usize) -> Result<()> {
        let m = self.pm.problem().m();
        for i in [a, b] {
            if i >= m {
                return Err(Error::IndexOutOfRange { index: i, n: m });
            }
        }
        if a == b {
            return Err(Error::Config("weak preference of an alternative over itself is not checked".into()));
        }
        Ok(())
    }

    fn solve_with(&self, rows: Vec<LinearConstraint>) -> Result<Option<f64>> {
        let mut model = self.base.clone();
        model.extend(rows);
        let sol = self.solver.solve(&model)?;
        Ok(if sol.is_optimal() {
            sol.objective_value
        } else if sol.status == crate::lp::LpStatus::Unbounded {
            Some(f64::INFINITY)
        } else {
            None
        })
    }

    /// Whether `a` weakly outranks `b` for every compatible bicapacity.
    pub fn necessary(&self, a: usize, b: usize, level: Level) -> Result<CellCheck> {
        self.pair(a, b)?;
        let lin = self.pm.linearization();
        let label = format!("negation {} {}", level.short_name(), self.ids(a, b));
        // lhs + ε ≤ rhs
        let row =
            |lhs: LinExpr, rhs: f64| LinearConstraint::new(lhs.with(Var::Epsilon, 1.0), Sense::Le, rhs, label.clone());
        let branches: Vec<Vec<LinearConstraint>> = match level {
            Level::Local => vec![vec![row(lin.ch(a, b), 0.0)]],
            Level::Promethee2 => vec![vec![row(lin.flow_net(a).minus(&lin.flow_net(b)), 0.0)]],
            Level::Promethee1 => [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)]
                .iter()
                .map(|&(m1, m2)| {
                    vec![
                        row(lin.flow_plus(a).minus(&lin.flow_plus(b)), BIG_M * m1),
                        row(lin.flow_minus(b).minus(&lin.flow_minus(a)), BIG_M * m2),
                    ]
                })
                .collect(),
        };
        let mut best: Option<f64> = None;
        for rows in branches {
            if let Some(e) = self.solve_with(rows)? {
                best = Some(best.map_or(e, |b: f64| b.max(e)));
            }
        }
        let holds = best.is_none_or(|e| e <= self.threshold);
        Ok(CellCheck { holds, epsilon: best, borderline: self.borderline(best) })
    }

    /// Whether `a` weakly outranks `b` for at least one compatible bicapacity.
    pub fn possible(&self, a: usize, b: usize, level: Level) -> Result<CellCheck> {
        self.pair(a, b)?;
        let lin = self.pm.linearization();
        let label = format!("affirmation {} {}", level.short_name(), self.ids(a, b));
        let row = |e: LinExpr| LinearConstraint::new(e, Sense::Ge, 0.0, label.clone());
        let rows = match level {
            Level::Local => vec![row(lin.ch(a, b))],
            Level::Promethee2 => vec![row(lin.flow_net(a).minus(&lin.flow_net(b)))],
            Level::Promethee1 => {
                vec![row(lin.flow_plus(a).minus(&lin.flow_plus(b))), row(lin.flow_minus(b).minus(&lin.flow_minus(a)))]
            }
        };
        let best = self.solve_with(rows)?;
        let holds = best.is_some_and(|e| e > self.threshold);
        Ok(CellCheck { holds, epsilon: best, borderline: self.borderline(best) })
    }

    pub fn check(&self, kind: RelationKind, a: usize, b: usize, level: Level) -> Result<CellCheck> {
        match kind {
            RelationKind::Necessary => self.necessary(a, b, level),
            RelationKind::Possible => self.possible(a, b, level),
        }
    }

    fn borderline(&self, eps: Option<f64>) -> bool {
        eps.is_some_and(|e| is_borderline(e, self.threshold))
    }

    fn ids(&self, a: usize, b: usize) -> String {
        let alts = self.pm.problem().alternatives();
        format!("{},{}", alts[a], alts[b])
    }

    /// All six matrices; pairwise programs run in parallel.
    pub fn matrices(&self) -> Result<Vec<RelationMatrix>> {
        let m = self.pm.problem().m();
        let mut jobs = Vec::new();
        for kind in RelationKind::ALL {
            for level in Level::ALL {
                for a in 0..m {
                    for b in (0..m).filter(|&b| b != a) {
                        jobs.push((kind, level, a, b));
                    }
                }
            }
        }
        let results: Vec<CellCheck> =
            jobs.par_iter().map(|&(kind, level, a, b)| self.check(kind, a, b, level)).collect::<Result<_>>()?;
        let mut out: Vec<RelationMatrix> = Vec::new();
        for kind in RelationKind::ALL {
            for level in Level::ALL {
                out.push(RelationMatrix {
                    kind,
                    level,
                    cells: vec![vec![false; m]; m],
                    epsilon: vec![vec![None; m]; m],
                });
            }
        }
        for (&(kind, level, a, b), r) in jobs.iter().zip(results) {
            let mat = out.iter_mut().find(|x| x.kind == kind && x.level == level).expect("matrix exists");
            mat.cells[a][b] = r.holds;
            mat.epsilon[a][b] = r.epsilon;
        }
        Ok(out)
    }
}

/// Cells that changed between two snapshots, per level.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SnapshotDiff {
    pub gained_necessary: IndexMap<String, Vec<[String; 2]>>,
    pub lost_possible: IndexMap<String, Vec<[String; 2]>>,
    /// Changes against the expected direction; empty when statements were
    /// only added.
    pub lost_necessary: IndexMap<String, Vec<[String; 2]>>,
    pub gained_possible: IndexMap<String, Vec<[String; 2]>>,
}

impl SnapshotDiff {
    pub fn contains_gained_necessary(&self, level: Level, a: &str, b: &str) -> bool {
        contains(&self.gained_necessary, level, a, b)
    }

    pub fn contains_lost_possible(&self, level: Level, a: &str, b: &str) -> bool {
        contains(&self.lost_possible, level, a, b)
    }
}

fn contains(map: &IndexMap<String, Vec<[String; 2]>>, level: Level, a: &str, b: &str) -> bool {
    map.get(level.short_name()).is_some_and(|cells| cells.iter().any(|[x, y]| x == a && y == b))
}

/// A cell whose optimum landed within the threshold band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorderlineCell {
    pub matrix: String,
    pub a: String,
    pub b: String,
    pub epsilon: f64,
}

/// Necessary and possible relations after one iteration of statements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SnapshotJson", try_from = "SnapshotJson")]
pub struct RorSnapshot {
    pub iteration: usize,
    pub alternatives: Vec<String>,
    pub statements: Vec<PreferenceStatement>,
    pub eps_threshold: f64,
    pub matrices: Vec<RelationMatrix>,
    pub diff: Option<SnapshotDiff>,
}

impl RorSnapshot {
    pub fn matrix(&self, kind: RelationKind, level: Level) -> &RelationMatrix {
        self.matrices.iter().find(|m| m.kind == kind && m.level == level).expect("snapshots hold all six matrices")
    }

    pub fn get(&self, kind: RelationKind, level: Level, a: usize, b: usize) -> bool {
        self.matrix(kind, level).get(a, b)
    }

    pub fn borderline_cells(&self) -> Vec<BorderlineCell> {
        let mut out = Vec::new();
        for mat in &self.matrices {
            for (a, row) in mat.epsilon.iter().enumerate() {
                for (b, e) in row.iter().enumerate() {
                    if let Some(e) = *e {
                        if is_borderline(e, self.eps_threshold) {
                            out.push(BorderlineCell {
                                matrix: mat.key(),
                                a: self.alternatives[a].clone(),
                                b: self.alternatives[b].clone(),
                                epsilon: e,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

/// Computes the snapshot for `statements` and, if given, its diff against
/// `previous`.
pub fn ror_snapshot(
    problem: &DecisionProblem,
    statements: &[PreferenceStatement],
    iteration: usize,
    previous: Option<&RorSnapshot>,
    options: RorOptions,
) -> Result<RorSnapshot> {
    let ctx = RorContext::new(problem, statements, options)?;
    let matrices = ctx.matrices()?;
    let mut snap = RorSnapshot {
        iteration,
        alternatives: problem.alternatives().to_vec(),
        statements: statements.to_vec(),
        eps_threshold: options.eps_threshold,
        matrices,
        diff: None,
    };
    if let Some(prev) = previous {
        snap.diff = Some(diff_snapshots(prev, &snap)?);
    }
    Ok(snap)
}

pub fn diff_snapshots(previous: &RorSnapshot, current: &RorSnapshot) -> Result<SnapshotDiff> {
    if previous.alternatives != current.alternatives {
        return Err(Error::Config("snapshots refer to different alternatives".into()));
    }
    let ids = &current.alternatives;
    let m = ids.len();
    let mut diff = SnapshotDiff::default();
    for level in Level::ALL {
        let key = level.short_name().to_string();
        let cells = |kind, was: bool, now: bool| -> Vec<[String; 2]> {
            let (p, c) = (previous.matrix(kind, level), current.matrix(kind, level));
            let mut out = Vec::new();
            for a in 0..m {
                for b in 0..m {
                    if p.get(a, b) == was && c.get(a, b) == now {
                        out.push([ids[a].clone(), ids[b].clone()]);
                    }
                }
            }
            out
        };
        let gained_n = cells(RelationKind::Necessary, false, true);
        let lost_n = cells(RelationKind::Necessary, true, false);
        let lost_p = cells(RelationKind::Possible, true, false);
        let gained_p = cells(RelationKind::Possible, false, true);
        diff.gained_necessary.insert(key.clone(), gained_n);
        diff.lost_necessary.insert(key.clone(), lost_n);
        diff.lost_possible.insert(key.clone(), lost_p);
        diff.gained_possible.insert(key, gained_p);
    }
    Ok(diff)
}

#[derive(Serialize, Deserialize)]
struct SnapshotJson {
    iteration: usize,
    alternatives: Vec<String>,
    statements: Vec<PreferenceStatement>,
    eps_threshold: f64,
    diagonal: String,
    matrices: IndexMap<String, Vec<Vec<u8>>>,
    epsilon: IndexMap<String, Vec<Vec<Option<f64>>>>,
    borderline: Vec<BorderlineCell>,
    diff: Option<SnapshotDiff>,
}

impl From<RorSnapshot> for SnapshotJson {
    fn from(s: RorSnapshot) -> Self {
        let borderline = s.borderline_cells();
        Self {
            iteration: s.iteration,
            alternatives: s.alternatives,
            statements: s.statements,
            eps_threshold: s.eps_threshold,
            diagonal: "false by convention".into(),
            matrices: s
                .matrices
                .iter()
                .map(|m| (m.key(), m.cells.iter().map(|r| r.iter().map(|&c| u8::from(c)).collect()).collect()))
                .collect(),
            epsilon: s.matrices.iter().map(|m| (m.key(), m.epsilon.clone())).collect(),
            borderline,
            diff: s.diff,
        }
    }
}

impl TryFrom<SnapshotJson> for RorSnapshot {
    type Error = String;

    fn try_from(j: SnapshotJson) -> std::result::Result<Self, String> {
        let m = j.alternatives.len();
        let mut matrices = Vec::new();
        for kind in RelationKind::ALL {
            for level in Level::ALL {
                let key = matrix_key(kind, level);
                let cells = j.matrices.get(&key).ok_or_else(|| format!("missing matrix {key}"))?;
                if cells.len() != m || cells.iter().any(|r| r.len() != m) {
                    return Err(format!("matrix {key} is not {m}x{m}"));
                }
                let epsilon = j.epsilon.get(&key).cloned().unwrap_or_else(|| vec![vec![None; m]; m]);
                matrices.push(RelationMatrix {
                    kind,
                    level,
                    cells: cells.iter().map(|r| r.iter().map(|&c| c != 0).collect()).collect(),
                    epsilon,
                });
            }
        }
        Ok(Self {
            iteration: j.iteration,
            alternatives: j.alternatives,
            statements: j.statements,
            eps_threshold: j.eps_threshold,
            matrices,
            diff: j.diff,
        })
    }
}
