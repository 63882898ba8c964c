//! Bipolar Choquet integrals, bipolar and classical PROMETHEE flows and the
//! preference structures derived from them.

use std::cmp::Ordering;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bicapacity::{Bicapacity, SignedCoalition, TwoAdditiveBicapacity};
use crate::error::{Error, Result};
use crate::model::{bipolar_preference_matrix, BipolarPreferenceMatrix, DecisionProblem};

/// Flow differences within this band count as ties in preference structures.
pub const INDIFFERENCE_BAND: f64 = 1e-9;

/// Value of a bipolar Choquet integral and its two halves.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ChoquetValue {
    pub net: f64,
    pub positive: f64,
    pub negative: f64,
}

/// A profile sorted by absolute value, with the level sets used by the
/// ordered-sum form of the integral.
#[derive(Debug, Clone)]
pub struct OrderedProfile {
    x: Vec<f64>,
    order: Vec<usize>,
    first_nonzero: usize,
}

impl OrderedProfile {
    pub fn new(x: &[f64]) -> Result<Self> {
        check_profile(x)?;
        let mut order: Vec<usize> = (0..x.len()).collect();
        // stable sort: ties keep index order
        order.sort_by(|&i, &j| x[i].abs().total_cmp(&x[j].abs()));
        let first_nonzero = order.iter().take_while(|&&i| x[i] == 0.0).count();
        Ok(Self { x: x.to_vec(), order, first_nonzero })
    }

    pub fn values(&self) -> &[f64] {
        &self.x
    }

    /// Criterion indices in non-decreasing order of `|x|`.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Criteria with a non-zero value.
    pub fn support(&self) -> &[usize] {
        &self.order[self.first_nonzero..]
    }

    /// `(C_(i), D_(i))` for the position `i` of the ordering.
    pub fn level_set(&self, position: usize) -> SignedCoalition {
        let Some(&at) = self.order.get(position) else {
            return SignedCoalition::EMPTY;
        };
        let t = self.x[at].abs();
        let (mut c, mut d) = (0u32, 0u32);
        for &i in self.support() {
            if self.x[i] >= t {
                c |= 1 << i;
            } else if -self.x[i] >= t {
                d |= 1 << i;
            }
        }
        SignedCoalition::from_masks(c, d).expect("level sets are disjoint")
    }

    /// `(|x_(i)|, (C_(i), D_(i)), (C_(i+1), D_(i+1)))` over the support.
    pub fn steps(&self) -> impl Iterator<Item = (f64, SignedCoalition, SignedCoalition)> + '_ {
        (self.first_nonzero..self.order.len())
            .map(move |i| (self.x[self.order[i]].abs(), self.level_set(i), self.level_set(i + 1)))
    }
}

fn check_profile(x: &[f64]) -> Result<()> {
    if x.len() > 32 {
        return Err(Error::Capacity { what: "profile length", n: x.len(), max: 32 });
    }
    for (j, v) in x.iter().enumerate() {
        if !v.is_finite() || v.abs() > 1.0 + 1e-12 {
            return Err(Error::Config(format!("profile component {} = {v} lies outside [-1, 1]", j + 1)));
        }
    }
    Ok(())
}

fn check_dimension(x: &[f64], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::Dimension { expected: n, got: x.len() });
    }
    Ok(())
}

/// The ordered-sum form over any bicapacity.
pub fn choquet_general<B: Bicapacity + ?Sized>(x: &[f64], g: &B) -> Result<ChoquetValue> {
    check_dimension(x, g.n())?;
    let profile = OrderedProfile::new(x)?;
    let mut v = ChoquetValue::default();
    for (t, here, next) in profile.steps() {
        v.positive += t * (g.mu_plus(here) - g.mu_plus(next));
        v.negative += t * (g.mu_minus(here) - g.mu_minus(next));
        v.net += t * (g.mu_hat(here) - g.mu_hat(next));
    }
    Ok(v)
}

/// The closed form for 2-additive decomposable bicapacities.
pub fn choquet_2additive(x: &[f64], b: &TwoAdditiveBicapacity) -> Result<ChoquetValue> {
    check_dimension(x, b.n())?;
    check_profile(x)?;
    Ok(choquet_2additive_unchecked(x, b))
}

pub(crate) fn choquet_2additive_unchecked(x: &[f64], b: &TwoAdditiveBicapacity) -> ChoquetValue {
    let (mut positive, mut negative) = (0.0, 0.0);
    for (j, &xj) in x.iter().enumerate() {
        if xj > 0.0 {
            positive += b.a_plus(j) * xj;
            for (k, &xk) in x.iter().enumerate() {
                if k > j && xk > 0.0 {
                    positive += b.pair_plus(j, k) * xj.min(xk);
                } else if xk < 0.0 {
                    let m = xj.min(-xk);
                    positive += b.opp_plus(j, k) * m;
                    negative += b.opp_minus(j, k) * m;
                }
            }
        } else if xj < 0.0 {
            negative += b.a_minus(j) * -xj;
            for (k, &xk) in x.iter().enumerate().skip(j + 1) {
                if xk < 0.0 {
                    negative += b.pair_minus(j, k) * (-xj).min(-xk);
                }
            }
        }
    }
    ChoquetValue { net: positive - negative, positive, negative }
}

/// A coefficient of the 2-additive decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "family", content = "index", rename_all = "snake_case")]
pub enum Coefficient {
    APlus(usize),
    AMinus(usize),
    /// Unordered pair, stored with `j < k`.
    PairPlus(usize, usize),
    PairMinus(usize, usize),
    /// `j` in favour, `k` against.
    OppPlus(usize, usize),
    OppMinus(usize, usize),
}

impl Coefficient {
    pub fn value(&self, b: &TwoAdditiveBicapacity) -> f64 {
        match *self {
            Coefficient::APlus(j) => b.a_plus(j),
            Coefficient::AMinus(j) => b.a_minus(j),
            Coefficient::PairPlus(j, k) => b.pair_plus(j, k),
            Coefficient::PairMinus(j, k) => b.pair_minus(j, k),
            Coefficient::OppPlus(j, k) => b.opp_plus(j, k),
            Coefficient::OppMinus(j, k) => b.opp_minus(j, k),
        }
    }
}

/// The integral of a fixed profile as linear forms in the coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChoquetTerms {
    pub positive: Vec<(Coefficient, f64)>,
    pub negative: Vec<(Coefficient, f64)>,
}

impl ChoquetTerms {
    pub fn evaluate(&self, b: &TwoAdditiveBicapacity) -> ChoquetValue {
        let sum = |terms: &[(Coefficient, f64)]| terms.iter().map(|(c, v)| c.value(b) * v).sum::<f64>();
        let (positive, negative) = (sum(&self.positive), sum(&self.negative));
        ChoquetValue { net: positive - negative, positive, negative }
    }
}

/// Expands the closed form for `x` into coefficient/multiplier pairs.
pub fn choquet_terms(x: &[f64]) -> ChoquetTerms {
    let mut t = ChoquetTerms::default();
    for (j, &xj) in x.iter().enumerate() {
        if xj > 0.0 {
            t.positive.push((Coefficient::APlus(j), xj));
            for (k, &xk) in x.iter().enumerate() {
                if k > j && xk > 0.0 {
                    t.positive.push((Coefficient::PairPlus(j, k), xj.min(xk)));
                } else if xk < 0.0 {
                    let m = xj.min(-xk);
                    t.positive.push((Coefficient::OppPlus(j, k), m));
                    t.negative.push((Coefficient::OppMinus(j, k), m));
                }
            }
        } else if xj < 0.0 {
            t.negative.push((Coefficient::AMinus(j), -xj));
            for (k, &xk) in x.iter().enumerate().skip(j + 1) {
                if xk < 0.0 {
                    t.negative.push((Coefficient::PairMinus(j, k), (-xj).min(-xk)));
                }
            }
        }
    }
    t
}

/// Positive, negative and net flow of one alternative.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FlowTriple {
    #[serde(rename = "phi_plus")]
    pub positive: f64,
    #[serde(rename = "phi_minus")]
    pub negative: f64,
    #[serde(rename = "phi_net")]
    pub net: f64,
}

/// Flows keyed by alternative id, in problem order.
pub type Flows = IndexMap<String, FlowTriple>;

/// Pairwise integrals `Ch^B(P^B(a, b))`, row-major, diagonal zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseChoquet {
    m: usize,
    values: Vec<ChoquetValue>,
}

impl PairwiseChoquet {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, a: usize, b: usize) -> ChoquetValue {
        self.values[a * self.m + b]
    }
}

fn check_problem(problem: &DecisionProblem, n: usize) -> Result<()> {
    if problem.m() < 2 {
        return Err(Error::Config(format!("flows need at least two alternatives, got {}", problem.m())));
    }
    if problem.n() != n {
        return Err(Error::Dimension { expected: problem.n(), got: n });
    }
    Ok(())
}

pub fn pairwise_choquet(problem: &DecisionProblem, b: &TwoAdditiveBicapacity) -> Result<PairwiseChoquet> {
    check_problem(problem, b.n())?;
    Ok(pairwise_from_matrix(&bipolar_preference_matrix(problem), b))
}

pub fn pairwise_from_matrix(pb: &BipolarPreferenceMatrix, b: &TwoAdditiveBicapacity) -> PairwiseChoquet {
    let m = pb.m();
    let values = (0..m * m)
        .into_par_iter()
        .map(|i| {
            let (a, c) = (i / m, i % m);
            if a == c {
                ChoquetValue::default()
            } else {
                choquet_2additive_unchecked(pb.get(a, c), b)
            }
        })
        .collect();
    PairwiseChoquet { m, values }
}

/// Averages pairwise integrals into flows.
pub fn flows_from_pairwise(problem: &DecisionProblem, pairwise: &PairwiseChoquet) -> Flows {
    let m = pairwise.m();
    let scale = 1.0 / (m as f64 - 1.0);
    problem
        .alternatives()
        .iter()
        .enumerate()
        .map(|(a, id)| {
            let (mut positive, mut negative, mut net) = (0.0, 0.0, 0.0);
            for c in (0..m).filter(|&c| c != a) {
                let v = pairwise.get(a, c);
                positive += v.positive;
                negative += v.negative;
                net += v.net;
            }
            let triple = FlowTriple { positive: positive * scale, negative: negative * scale, net: net * scale };
            (id.clone(), triple)
        })
        .collect()
}

pub fn bipolar_flows(problem: &DecisionProblem, b: &TwoAdditiveBicapacity) -> Result<Flows> {
    let pairwise = pairwise_choquet(problem, b)?;
    Ok(flows_from_pairwise(problem, &pairwise))
}

fn check_weights(weights: &[f64], n: usize) -> Result<()> {
    check_dimension(weights, n)?;
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::Config(format!("weights must be non-negative, got {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Config(format!("weights must sum to 1, got {total}")));
    }
    Ok(())
}

/// Classical PROMETHEE flows for a weighted sum of preference functions.
pub fn classical_flows(problem: &DecisionProblem, weights: &[f64]) -> Result<Flows> {
    check_problem(problem, weights.len())?;
    check_weights(weights, problem.n())?;
    let m = problem.m();
    let pi: Vec<f64> = (0..m * m)
        .map(|i| {
            let (a, b) = (i / m, i % m);
            if a == b {
                return 0.0;
            }
            let p = problem.partial_preferences(a, b);
            p.iter().zip(weights).map(|(p, w)| p * w).sum()
        })
        .collect();
    let scale = 1.0 / (m as f64 - 1.0);
    Ok(problem
        .alternatives()
        .iter()
        .enumerate()
        .map(|(a, id)| {
            let positive = (0..m).map(|b| pi[a * m + b]).sum::<f64>() * scale;
            let negative = (0..m).map(|b| pi[b * m + a]).sum::<f64>() * scale;
            let triple = FlowTriple { positive, negative, net: positive - negative };
            (id.clone(), triple)
        })
        .collect())
}

/// Exploitation level of a preference structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// Pairwise comparison through `Ch^B(P^B(a, b))`.
    Local,
    /// Partial order from positive and negative flows.
    Promethee1,
    /// Complete order from net flows.
    Promethee2,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Local, Level::Promethee1, Level::Promethee2];

    pub fn short_name(&self) -> &'static str {
        match self {
            Level::Local => "local",
            Level::Promethee1 => "promethee1",
            Level::Promethee2 => "promethee2",
        }
    }
}

/// Relation of the row alternative to the column alternative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Preferred,
    /// The column alternative is preferred to the row alternative.
    Dispreferred,
    Indifferent,
    Incomparable,
}

impl Relation {
    pub fn symbol(&self) -> &'static str {
        match self {
            Relation::Preferred => "P",
            Relation::Dispreferred => "-",
            Relation::Indifferent => "I",
            Relation::Incomparable => "R",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutrankingStructure {
    pub level: Level,
    pub alternatives: Vec<String>,
    relations: Vec<Relation>,
}

impl OutrankingStructure {
    pub fn get(&self, a: usize, b: usize) -> Relation {
        self.relations[a * self.alternatives.len() + b]
    }

    /// Rows of relation symbols.
    pub fn symbol_matrix(&self) -> Vec<Vec<&'static str>> {
        let m = self.alternatives.len();
        (0..m).map(|a| (0..m).map(|b| self.get(a, b).symbol()).collect()).collect()
    }
}

fn compare_banded(x: f64, y: f64) -> Ordering {
    if x > y + INDIFFERENCE_BAND {
        Ordering::Greater
    } else if x < y - INDIFFERENCE_BAND {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

fn promethee1_relation(a: &FlowTriple, b: &FlowTriple) -> Relation {
    let plus = compare_banded(a.positive, b.positive);
    let minus = compare_banded(a.negative, b.negative);
    let net = compare_banded(a.net, b.net);
    if plus == Ordering::Equal && minus == Ordering::Equal {
        Relation::Indifferent
    } else if plus != Ordering::Less && minus != Ordering::Greater && net == Ordering::Greater {
        Relation::Preferred
    } else if plus != Ordering::Greater && minus != Ordering::Less && net == Ordering::Less {
        Relation::Dispreferred
    } else {
        Relation::Incomparable
    }
}

fn sign_relation(v: f64) -> Relation {
    match compare_banded(v, 0.0) {
        Ordering::Greater => Relation::Preferred,
        Ordering::Less => Relation::Dispreferred,
        Ordering::Equal => Relation::Indifferent,
    }
}

/// PROMETHEE I or II structure from flows. Use [`local_structure`] for the
/// pairwise level.
pub fn outranking_structure(flows: &Flows, level: Level) -> Result<OutrankingStructure> {
    let triples: Vec<&FlowTriple> = flows.values().collect();
    let m = triples.len();
    let relation = |a: usize, b: usize| -> Relation {
        if a == b {
            return Relation::Indifferent;
        }
        match level {
            Level::Promethee1 => promethee1_relation(triples[a], triples[b]),
            Level::Promethee2 => sign_relation(triples[a].net - triples[b].net),
            Level::Local => unreachable!(),
        }
    };
    if level == Level::Local {
        return Err(Error::Config("the local structure is built from pairwise integrals, not flows".into()));
    }
    Ok(OutrankingStructure {
        level,
        alternatives: flows.keys().cloned().collect(),
        relations: (0..m * m).map(|i| relation(i / m, i % m)).collect(),
    })
}

/// Local structure: the row alternative is preferred when `Ch^B(P^B(a, b)) > 0`.
pub fn local_structure(problem: &DecisionProblem, pairwise: &PairwiseChoquet) -> OutrankingStructure {
    let m = pairwise.m();
    OutrankingStructure {
        level: Level::Local,
        alternatives: problem.alternatives().to_vec(),
        relations: (0..m * m)
            .map(|i| if i / m == i % m { Relation::Indifferent } else { sign_relation(pairwise.get(i / m, i % m).net) })
            .collect(),
    }
}

/// Alternatives grouped by net flow, best first; exact ties share a group.
pub fn promethee2_ranking(flows: &Flows) -> Vec<Vec<String>> {
    let mut entries: Vec<(&String, f64)> = flows.iter().map(|(id, f)| (id, f.net)).collect();
    entries.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut groups: Vec<(f64, Vec<String>)> = Vec::new();
    for (id, net) in entries {
        match groups.last_mut() {
            Some((v, group)) if *v == net => group.push(id.clone()),
            _ => groups.push((net, vec![id.clone()])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// Complete and partial rankings derived from one set of flows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingReport {
    pub flows: Flows,
    pub promethee2: Vec<Vec<String>>,
    pub alternatives: Vec<String>,
    /// Row alternative versus column alternative: P, I, R, or `-` when the
    /// column alternative is preferred.
    pub promethee1: Vec<Vec<&'static str>>,
}

pub fn ranking_report(flows: &Flows) -> RankingReport {
    let p1 = outranking_structure(flows, Level::Promethee1).expect("flow-based level");
    RankingReport {
        flows: flows.clone(),
        promethee2: promethee2_ranking(flows),
        alternatives: p1.alternatives.clone(),
        promethee1: p1.symbol_matrix(),
    }
}
