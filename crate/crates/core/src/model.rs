//! Decision problems, partial preference degrees and bipolar preference vectors.

use std::collections::HashSet;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Gain,
    Cost,
}

/// Shape of the per-criterion preference function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// Zero up to `q`, linear between `q` and `p`, one from `p` on.
    #[default]
    Linear,
    /// 0/1 step at any strictly positive difference.
    Usual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionSpec {
    pub id: String,
    #[serde(default)]
    pub direction: Direction,
    #[serde(default)]
    pub q: f64,
    #[serde(default)]
    pub p: f64,
    #[serde(default)]
    pub shape: Shape,
}

impl CriterionSpec {
    pub fn linear(id: impl Into<String>, q: f64, p: f64) -> Self {
        Self { id: id.into(), direction: Direction::Gain, q, p, shape: Shape::Linear }
    }

    pub fn usual(id: impl Into<String>) -> Self {
        Self { id: id.into(), direction: Direction::Gain, q: 0.0, p: 0.0, shape: Shape::Usual }
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Shape::Linear = self.shape {
            if !(self.q.is_finite() && self.p.is_finite()) {
                return Err(Error::Config(format!("criterion `{}`: thresholds must be finite", self.id)));
            }
            if self.q < 0.0 {
                return Err(Error::Config(format!(
                    "criterion `{}`: indifference threshold q = {} is negative",
                    self.id, self.q
                )));
            }
            if self.p <= self.q {
                return Err(Error::Config(format!(
                    "criterion `{}`: preference threshold p = {} must exceed q = {}",
                    self.id, self.p, self.q
                )));
            }
        }
        Ok(())
    }

    /// Signed advantage of `ga` over `gb` on this criterion, oriented so that
    /// larger is better.
    pub fn difference(&self, ga: f64, gb: f64) -> f64 {
        match self.direction {
            Direction::Gain => ga - gb,
            Direction::Cost => gb - ga,
        }
    }
}

/// Partial preference degree `P_j` for an already oriented difference `d`.
pub fn partial_preference(d: f64, spec: &CriterionSpec) -> Result<f64> {
    spec.validate()?;
    Ok(partial_preference_unchecked(d, spec))
}

fn partial_preference_unchecked(d: f64, spec: &CriterionSpec) -> f64 {
    match spec.shape {
        Shape::Usual => {
            if d > 0.0 {
                1.0
            } else {
                0.0
            }
        }
        Shape::Linear => {
            if d <= spec.q {
                0.0
            } else if d >= spec.p {
                1.0
            } else {
                ((d - spec.q) / (spec.p - spec.q)).clamp(0.0, 1.0)
            }
        }
    }
}

#[derive(Deserialize)]
struct RawProblem {
    criteria: Vec<CriterionSpec>,
    alternatives: Vec<String>,
    evaluations: Vec<Vec<f64>>,
}

/// The immutable input of every computation: criteria, alternatives and the
/// performance table (row = alternative, column = criterion).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProblem")]
pub struct DecisionProblem {
    criteria: Vec<CriterionSpec>,
    alternatives: Vec<String>,
    evaluations: Vec<Vec<f64>>,
}

impl TryFrom<RawProblem> for DecisionProblem {
    type Error = Error;

    fn try_from(raw: RawProblem) -> Result<Self> {
        DecisionProblem::new(raw.criteria, raw.alternatives, raw.evaluations)
    }
}

impl DecisionProblem {
    pub fn new(criteria: Vec<CriterionSpec>, alternatives: Vec<String>, evaluations: Vec<Vec<f64>>) -> Result<Self> {
        if criteria.is_empty() {
            return Err(Error::Config("at least one criterion is required".into()));
        }
        if alternatives.len() < 2 {
            return Err(Error::Config(format!("at least two alternatives are required, got {}", alternatives.len())));
        }
        let mut seen = HashSet::new();
        for c in &criteria {
            c.validate()?;
            if !seen.insert(c.id.as_str()) {
                return Err(Error::Config(format!("duplicate criterion id `{}`", c.id)));
            }
        }
        let mut seen = HashSet::new();
        for a in &alternatives {
            if !seen.insert(a.as_str()) {
                return Err(Error::Config(format!("duplicate alternative id `{a}`")));
            }
        }
        if evaluations.len() != alternatives.len() {
            return Err(Error::Config(format!(
                "evaluations have {} rows for {} alternatives",
                evaluations.len(),
                alternatives.len()
            )));
        }
        for (row, a) in evaluations.iter().zip(&alternatives) {
            if row.len() != criteria.len() {
                return Err(Error::Config(format!(
                    "alternative `{a}` has {} evaluations for {} criteria",
                    row.len(),
                    criteria.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::Config(format!("alternative `{a}` has a non-finite evaluation {v}")));
            }
        }
        Ok(Self { criteria, alternatives, evaluations })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Reads a CSV performance table (header = criterion ids, first column =
    /// alternative ids) and attaches criterion metadata looked up by id.
    pub fn from_csv<R: Read>(reader: R, criteria: &[CriterionSpec]) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() < 2 {
            return Err(Error::Parse("CSV header needs an alternative column and at least one criterion".into()));
        }
        let ordered = headers
            .iter()
            .skip(1)
            .map(|id| {
                criteria
                    .iter()
                    .find(|c| c.id == id)
                    .cloned()
                    .ok_or_else(|| Error::Lookup { kind: "criterion", id: id.to_string() })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut alternatives = Vec::new();
        let mut evaluations = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let mut fields = record.iter();
            let id = fields.next().ok_or_else(|| Error::Parse("empty CSV row".into()))?;
            alternatives.push(id.to_string());
            let row = fields
                .map(|f| f.parse::<f64>().map_err(|e| Error::Parse(format!("alternative `{id}`: `{f}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            evaluations.push(row);
        }
        Self::new(ordered, alternatives, evaluations)
    }

    pub fn criteria(&self) -> &[CriterionSpec] {
        &self.criteria
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn evaluations(&self) -> &[Vec<f64>] {
        &self.evaluations
    }

    /// Number of alternatives.
    pub fn m(&self) -> usize {
        self.alternatives.len()
    }

    /// Number of criteria.
    pub fn n(&self) -> usize {
        self.criteria.len()
    }

    pub fn alternative_index(&self, id: &str) -> Result<usize> {
        self.alternatives
            .iter()
            .position(|a| a == id)
            .ok_or_else(|| Error::Lookup { kind: "alternative", id: id.to_string() })
    }

    pub fn criterion_index(&self, id: &str) -> Result<usize> {
        self.criteria
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::Lookup { kind: "criterion", id: id.to_string() })
    }

    /// `P_j(a, b)` for every criterion, by alternative index.
    pub fn partial_preferences(&self, a: usize, b: usize) -> Vec<f64> {
        self.criteria
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let d = c.difference(self.evaluations[a][j], self.evaluations[b][j]);
                partial_preference_unchecked(d, c)
            })
            .collect()
    }

    fn bipolar_by_index(&self, a: usize, b: usize) -> Vec<f64> {
        let forward = self.partial_preferences(a, b);
        let backward = self.partial_preferences(b, a);
        forward.iter().zip(&backward).map(|(f, r)| f - r).collect()
    }
}

/// `P^B(a, b)` for two alternatives given by id.
pub fn bipolar_preference_vector(problem: &DecisionProblem, a: &str, b: &str) -> Result<Vec<f64>> {
    let ia = problem.alternative_index(a)?;
    let ib = problem.alternative_index(b)?;
    Ok(problem.bipolar_by_index(ia, ib))
}

/// `P^B(a, b)` for every ordered pair, stored flat as `m * m * n` values.
#[derive(Debug, Clone, PartialEq)]
pub struct BipolarPreferenceMatrix {
    m: usize,
    n: usize,
    values: Vec<f64>,
}

impl BipolarPreferenceMatrix {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> &[f64] {
        let start = (a * self.m + b) * self.n;
        &self.values[start..start + self.n]
    }
}

pub fn bipolar_preference_matrix(problem: &DecisionProblem) -> BipolarPreferenceMatrix {
    let (m, n) = (problem.m(), problem.n());
    let mut values = vec![0.0; m * m * n];
    for a in 0..m {
        for b in (a + 1)..m {
            let v = problem.bipolar_by_index(a, b);
            let ab = (a * m + b) * n;
            let ba = (b * m + a) * n;
            for j in 0..n {
                values[ab + j] = v[j];
                // exact antisymmetry, including the sign of zero
                values[ba + j] = if v[j] == 0.0 { 0.0 } else { -v[j] };
            }
        }
    }
    BipolarPreferenceMatrix { m, n, values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::students;
    use proptest::prelude::*;

    #[test]
    fn partial_preference_examples() {
        let spec = CriterionSpec::linear("g", 0.0, 4.0);
        assert_eq!(partial_preference(1.0, &spec).unwrap(), 0.25);
        assert_eq!(partial_preference(0.0, &spec).unwrap(), 0.0);
        assert_eq!(partial_preference(5.0, &spec).unwrap(), 1.0);
        assert_eq!(partial_preference(0.0, &CriterionSpec::usual("u")).unwrap(), 0.0);
        assert_eq!(partial_preference(1e-9, &CriterionSpec::usual("u")).unwrap(), 1.0);
    }

    #[test]
    fn threshold_boundary_is_zero() {
        let spec = CriterionSpec::linear("g", 1.0, 3.0);
        assert_eq!(partial_preference(1.0, &spec).unwrap(), 0.0);
        assert_eq!(partial_preference(2.0, &spec).unwrap(), 0.5);
        assert_eq!(partial_preference(3.0, &spec).unwrap(), 1.0);
    }

    #[test]
    fn rejects_degenerate_linear_spec() {
        let spec = CriterionSpec::linear("g", 2.0, 2.0);
        assert!(matches!(partial_preference(1.0, &spec), Err(Error::Config(_))));
        let spec = CriterionSpec::linear("g", -1.0, 2.0);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn student_vectors() {
        let p = students();
        assert_eq!(bipolar_preference_vector(&p, "s1", "s2").unwrap(), vec![0.25, 0.75, -0.5]);
        assert_eq!(bipolar_preference_vector(&p, "s3", "s4").unwrap(), vec![0.25, 0.5, -0.25]);
        assert_eq!(bipolar_preference_vector(&p, "s7", "s8").unwrap(), vec![0.5, 0.5, -0.25]);
        assert_eq!(bipolar_preference_vector(&p, "s5", "s5").unwrap(), vec![0.0; 3]);
        assert!(matches!(bipolar_preference_vector(&p, "s1", "s9"), Err(Error::Lookup { .. })));
    }

    #[test]
    fn matrix_matches_vectors() {
        let p = students();
        let pb = bipolar_preference_matrix(&p);
        assert_eq!(pb.get(0, 1), &[0.25, 0.75, -0.5]);
        assert_eq!(pb.get(6, 7), &[0.5, 0.5, -0.25]);
        for a in 0..p.m() {
            assert!(pb.get(a, a).iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn equal_rows_give_zero_matrix() {
        let p = DecisionProblem::new(
            vec![CriterionSpec::linear("g", 0.0, 1.0), CriterionSpec::usual("h")],
            vec!["a".into(), "b".into()],
            vec![vec![3.0, 1.0], vec![3.0, 1.0]],
        )
        .unwrap();
        let pb = bipolar_preference_matrix(&p);
        assert!(pb.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn cost_criteria_flip_the_difference() {
        let p = DecisionProblem::new(
            vec![CriterionSpec::linear("price", 0.0, 10.0).with_direction(Direction::Cost)],
            vec!["cheap".into(), "dear".into()],
            vec![vec![10.0], vec![15.0]],
        )
        .unwrap();
        assert_eq!(bipolar_preference_vector(&p, "cheap", "dear").unwrap(), vec![0.5]);
    }

    #[test]
    fn problem_validation() {
        let c = vec![CriterionSpec::linear("g", 0.0, 1.0)];
        let dup = DecisionProblem::new(c.clone(), vec!["a".into(), "a".into()], vec![vec![1.0], vec![2.0]]);
        assert!(dup.is_err());
        let ragged = DecisionProblem::new(c.clone(), vec!["a".into(), "b".into()], vec![vec![1.0], vec![]]);
        assert!(ragged.is_err());
        let nan = DecisionProblem::new(c.clone(), vec!["a".into(), "b".into()], vec![vec![1.0], vec![f64::NAN]]);
        assert!(nan.is_err());
        let single = DecisionProblem::new(c, vec!["a".into()], vec![vec![1.0]]);
        assert!(single.is_err());
    }

    #[test]
    fn json_and_csv_inputs() {
        let json = r#"{
            "criteria": [{"id": "g", "direction": "gain", "q": 0, "p": 2, "shape": "linear"},
                         {"id": "h", "shape": "usual"}],
            "alternatives": ["a", "b"],
            "evaluations": [[1, 0], [2, 1]]
        }"#;
        let p = DecisionProblem::from_json_str(json).unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(bipolar_preference_vector(&p, "b", "a").unwrap(), vec![0.5, 1.0]);

        let csv = "student,h,g\na,0,1\nb,1,2\n";
        let q = DecisionProblem::from_csv(csv.as_bytes(), p.criteria()).unwrap();
        assert_eq!(q.criteria()[0].id, "h");
        assert_eq!(bipolar_preference_vector(&q, "b", "a").unwrap(), vec![1.0, 0.5]);

        let bad = r#"{"criteria": [{"id": "g", "q": 1, "p": 1}], "alternatives": ["a","b"], "evaluations": [[1],[2]]}"#;
        assert!(DecisionProblem::from_json_str(bad).is_err());
    }

    fn arb_spec() -> impl Strategy<Value = CriterionSpec> {
        prop_oneof![
            (0.0..5.0f64, 0.01..5.0f64).prop_map(|(q, w)| CriterionSpec::linear("g", q, q + w)),
            Just(CriterionSpec::usual("g")),
        ]
    }

    proptest! {
        #[test]
        fn partial_preference_is_monotone_and_bounded(spec in arb_spec(), d1 in -20.0..20.0f64, d2 in -20.0..20.0f64) {
            let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            let (plo, phi) = (partial_preference(lo, &spec).unwrap(), partial_preference(hi, &spec).unwrap());
            prop_assert!(plo <= phi);
            prop_assert!((0.0..=1.0).contains(&plo) && (0.0..=1.0).contains(&phi));
        }

        #[test]
        fn bipolar_matrix_is_antisymmetric(rows in proptest::collection::vec(proptest::collection::vec(-10.0..10.0f64, 3), 2..6)) {
            let m = rows.len();
            let criteria = vec![
                CriterionSpec::linear("a", 0.0, 2.0),
                CriterionSpec::linear("b", 0.5, 3.0).with_direction(Direction::Cost),
                CriterionSpec::usual("c"),
            ];
            let p = DecisionProblem::new(criteria, (0..m).map(|i| i.to_string()).collect(), rows).unwrap();
            let pb = bipolar_preference_matrix(&p);
            for a in 0..m {
                for b in 0..m {
                    let f = p.partial_preferences(a, b);
                    let r = p.partial_preferences(b, a);
                    for j in 0..3 {
                        prop_assert_eq!(pb.get(a, b)[j], -pb.get(b, a)[j]);
                        prop_assert!(f[j] == 0.0 || r[j] == 0.0);
                        prop_assert!((-1.0..=1.0).contains(&pb.get(a, b)[j]));
                    }
                }
            }
        }
    }
}
