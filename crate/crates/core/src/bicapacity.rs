//! Bicapacities on signed coalitions: explicit tables and the 2-additive
//! decomposition, with boundary, monotonicity and symmetry checks.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest criterion count for which monotonicity is enumerated exactly.
pub const MAX_ENUMERATED_CRITERIA: usize = 8;
/// Largest criterion count for which a full `3^n` table is materialized.
pub const MAX_TABLE_CRITERIA: usize = 12;

/// Default absolute tolerance for boundary and sign checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A pair `(C, D)` of disjoint criterion sets, stored as bitmasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SignedCoalition {
    positive: u32,
    negative: u32,
}

impl SignedCoalition {
    pub const EMPTY: SignedCoalition = SignedCoalition { positive: 0, negative: 0 };

    pub fn from_masks(positive: u32, negative: u32) -> Result<Self> {
        if positive & negative != 0 {
            return Err(Error::Config(format!(
                "signed coalition is not disjoint: C = {positive:#b}, D = {negative:#b}"
            )));
        }
        Ok(Self { positive, negative })
    }

    pub fn new(positive: &[usize], negative: &[usize]) -> Result<Self> {
        let mask = |s: &[usize]| -> Result<u32> {
            s.iter().try_fold(0u32, |acc, &j| {
                if j >= 32 {
                    Err(Error::IndexOutOfRange { index: j, n: 32 })
                } else {
                    Ok(acc | (1 << j))
                }
            })
        };
        Self::from_masks(mask(positive)?, mask(negative)?)
    }

    /// `(J, ∅)` for `n` criteria.
    pub fn all_positive(n: usize) -> Self {
        Self { positive: full_mask(n), negative: 0 }
    }

    /// `(∅, J)` for `n` criteria.
    pub fn all_negative(n: usize) -> Self {
        Self { positive: 0, negative: full_mask(n) }
    }

    pub fn positive_mask(&self) -> u32 {
        self.positive
    }

    pub fn negative_mask(&self) -> u32 {
        self.negative
    }

    pub fn contains_positive(&self, j: usize) -> bool {
        self.positive >> j & 1 == 1
    }

    pub fn contains_negative(&self, j: usize) -> bool {
        self.negative >> j & 1 == 1
    }

    /// `(D, C)`.
    pub fn swapped(&self) -> Self {
        Self { positive: self.negative, negative: self.positive }
    }

    fn check(&self, n: usize) -> Result<()> {
        let used = self.positive | self.negative;
        if n < 32 && used >> n != 0 {
            let index = 31 - used.leading_zeros() as usize;
            return Err(Error::IndexOutOfRange { index, n });
        }
        Ok(())
    }

    /// Ternary code used to index `3^n` tables: digit 1 = in C, 2 = in D.
    fn code(&self, n: usize) -> usize {
        let mut code = 0;
        for j in (0..n).rev() {
            code *= 3;
            if self.contains_positive(j) {
                code += 1;
            } else if self.contains_negative(j) {
                code += 2;
            }
        }
        code
    }

    fn from_code(mut code: usize, n: usize) -> Self {
        let mut s = Self::EMPTY;
        for j in 0..n {
            match code % 3 {
                1 => s.positive |= 1 << j,
                2 => s.negative |= 1 << j,
                _ => {}
            }
            code /= 3;
        }
        s
    }

    /// Every signed coalition over `n` criteria, in table order.
    pub fn all(n: usize) -> impl Iterator<Item = SignedCoalition> {
        (0..3usize.pow(n as u32)).map(move |c| Self::from_code(c, n))
    }
}

impl fmt::Display for SignedCoalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |mask: u32| {
            (0..32).filter(|j| mask >> j & 1 == 1).map(|j| (j + 1).to_string()).collect::<Vec<_>>().join(",")
        };
        write!(f, "({{{}}}, {{{}}})", list(self.positive), list(self.negative))
    }
}

fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Anything that assigns `μ⁺` and `μ⁻` to signed coalitions.
pub trait Bicapacity {
    fn n(&self) -> usize;
    fn mu_plus(&self, cd: SignedCoalition) -> f64;
    fn mu_minus(&self, cd: SignedCoalition) -> f64;

    /// `μ̂(C, D) = μ⁺(C, D) − μ⁻(C, D)`.
    fn mu_hat(&self, cd: SignedCoalition) -> f64 {
        self.mu_plus(cd) - self.mu_minus(cd)
    }
}

/// A bicapacity given by its full `μ⁺` / `μ⁻` tables over all `3^n` signed
/// coalitions. Only used as a reference point for the 2-additive form.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralBicapacity {
    n: usize,
    plus: Vec<f64>,
    minus: Vec<f64>,
}

impl GeneralBicapacity {
    pub fn from_fn(
        n: usize,
        mut plus: impl FnMut(SignedCoalition) -> f64,
        mut minus: impl FnMut(SignedCoalition) -> f64,
    ) -> Result<Self> {
        if n > MAX_TABLE_CRITERIA {
            return Err(Error::Capacity { what: "bicapacity tables", n, max: MAX_TABLE_CRITERIA });
        }
        let plus = SignedCoalition::all(n).map(&mut plus).collect();
        let minus = SignedCoalition::all(n).map(&mut minus).collect();
        Ok(Self { n, plus, minus })
    }

    pub fn table_len(&self) -> usize {
        self.plus.len()
    }

    /// Boundary conditions on `μ⁺`/`μ⁻` and single-element monotonicity
    /// steps, checked over the whole table.
    pub fn violations(&self, tol: f64) -> Vec<String> {
        let n = self.n;
        let mut out = Vec::new();
        if (self.mu_plus(SignedCoalition::all_positive(n)) - 1.0).abs() > tol {
            out.push("mu+(J, {}) != 1".to_string());
        }
        if (self.mu_minus(SignedCoalition::all_negative(n)) - 1.0).abs() > tol {
            out.push("mu-({}, J) != 1".to_string());
        }
        for cd in SignedCoalition::all(n) {
            if cd.positive == 0 && self.mu_plus(cd).abs() > tol {
                out.push(format!("mu+{cd} != 0"));
            }
            if cd.negative == 0 && self.mu_minus(cd).abs() > tol {
                out.push(format!("mu-{cd} != 0"));
            }
            for j in 0..n {
                if cd.contains_positive(j) || cd.contains_negative(j) {
                    continue;
                }
                let add_c = SignedCoalition { positive: cd.positive | 1 << j, negative: cd.negative };
                let add_d = SignedCoalition { positive: cd.positive, negative: cd.negative | 1 << j };
                if self.mu_plus(cd) > self.mu_plus(add_c) + tol {
                    out.push(format!("mu+ decreases from {cd} to {add_c}"));
                }
                if self.mu_plus(cd) + tol < self.mu_plus(add_d) {
                    out.push(format!("mu+ increases from {cd} to {add_d}"));
                }
                if self.mu_minus(cd) > self.mu_minus(add_d) + tol {
                    out.push(format!("mu- decreases from {cd} to {add_d}"));
                }
                if self.mu_minus(cd) + tol < self.mu_minus(add_c) {
                    out.push(format!("mu- increases from {cd} to {add_c}"));
                }
            }
        }
        out
    }
}

impl Bicapacity for GeneralBicapacity {
    fn n(&self) -> usize {
        self.n
    }

    fn mu_plus(&self, cd: SignedCoalition) -> f64 {
        self.plus[cd.code(self.n)]
    }

    fn mu_minus(&self, cd: SignedCoalition) -> f64 {
        self.minus[cd.code(self.n)]
    }
}

/// Index of the unordered pair `{j, k}` among the `n(n−1)/2` pairs.
pub fn pair_index(n: usize, j: usize, k: usize) -> usize {
    let (j, k) = if j < k { (j, k) } else { (k, j) };
    debug_assert!(j != k && k < n);
    j * n - j * (j + 1) / 2 + (k - j - 1)
}

/// All unordered pairs `(j, k)`, `j < k`, in `pair_index` order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |j| ((j + 1)..n).map(move |k| (j, k)))
}

/// All ordered pairs `(j, k)`, `j ≠ k`.
pub fn ordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |j| (0..n).filter(move |&k| k != j).map(move |k| (j, k)))
}

/// A 2-additive decomposable bicapacity.
///
/// `a_plus[j]` is the power of criterion `j` on its own in favour, `pair_plus`
/// holds the synergy (> 0) or redundancy (< 0) of two criteria in favour and
/// `opp_plus[(j, k)]` (always ≤ 0) the weakening of `j` in favour by `k`
/// against. The `minus` families mirror these for the reasons against.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoAdditiveBicapacity {
    n: usize,
    a_plus: Vec<f64>,
    a_minus: Vec<f64>,
    pair_plus: Vec<f64>,
    pair_minus: Vec<f64>,
    opp_plus: Vec<f64>,
    opp_minus: Vec<f64>,
}

impl TwoAdditiveBicapacity {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            a_plus: vec![0.0; n],
            a_minus: vec![0.0; n],
            pair_plus: vec![0.0; n * n.saturating_sub(1) / 2],
            pair_minus: vec![0.0; n * n.saturating_sub(1) / 2],
            opp_plus: vec![0.0; n * n],
            opp_minus: vec![0.0; n * n],
        }
    }

    /// No interactions, `a_j⁺ = a_j⁻ = w_j`.
    pub fn additive(weights: &[f64]) -> Self {
        let mut b = Self::zero(weights.len());
        b.a_plus.copy_from_slice(weights);
        b.a_minus.copy_from_slice(weights);
        b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a_plus(&self, j: usize) -> f64 {
        self.a_plus[j]
    }

    pub fn a_minus(&self, j: usize) -> f64 {
        self.a_minus[j]
    }

    pub fn pair_plus(&self, j: usize, k: usize) -> f64 {
        self.pair_plus[pair_index(self.n, j, k)]
    }

    pub fn pair_minus(&self, j: usize, k: usize) -> f64 {
        self.pair_minus[pair_index(self.n, j, k)]
    }

    /// `a⁺_{j|k}`: `j` in favour, `k` against.
    pub fn opp_plus(&self, j: usize, k: usize) -> f64 {
        self.opp_plus[j * self.n + k]
    }

    /// `a⁻_{j|k}`: `j` in favour, `k` against.
    pub fn opp_minus(&self, j: usize, k: usize) -> f64 {
        self.opp_minus[j * self.n + k]
    }

    pub fn set_a_plus(&mut self, j: usize, v: f64) -> &mut Self {
        self.a_plus[j] = v;
        self
    }

    pub fn set_a_minus(&mut self, j: usize, v: f64) -> &mut Self {
        self.a_minus[j] = v;
        self
    }

    pub fn set_pair_plus(&mut self, j: usize, k: usize, v: f64) -> &mut Self {
        let i = pair_index(self.n, j, k);
        self.pair_plus[i] = v;
        self
    }

    pub fn set_pair_minus(&mut self, j: usize, k: usize, v: f64) -> &mut Self {
        let i = pair_index(self.n, j, k);
        self.pair_minus[i] = v;
        self
    }

    pub fn set_opp_plus(&mut self, j: usize, k: usize, v: f64) -> &mut Self {
        assert_ne!(j, k, "opposition coefficients need distinct criteria");
        self.opp_plus[j * self.n + k] = v;
        self
    }

    pub fn set_opp_minus(&mut self, j: usize, k: usize, v: f64) -> &mut Self {
        assert_ne!(j, k, "opposition coefficients need distinct criteria");
        self.opp_minus[j * self.n + k] = v;
        self
    }

    /// Sets both halves of each coefficient family so that
    /// `μ⁺(C, D) = μ⁻(D, C)` holds: `a⁻ = a⁺`, `a⁻_{k|j} = a⁺_{j|k}`.
    pub fn mirror_plus_into_minus(&mut self) -> &mut Self {
        self.a_minus.clone_from(&self.a_plus);
        self.pair_minus.clone_from(&self.pair_plus);
        for (j, k) in ordered_pairs(self.n) {
            self.opp_minus[k * self.n + j] = self.opp_plus[j * self.n + k];
        }
        self
    }

    /// True when every pair and opposition coefficient is zero.
    pub fn is_additive(&self, tol: f64) -> bool {
        self.pair_plus
            .iter()
            .chain(&self.pair_minus)
            .chain(&self.opp_plus)
            .chain(&self.opp_minus)
            .all(|v| v.abs() <= tol)
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let s = |v: &Vec<f64>| v.iter().map(|x| x * factor).collect();
        Self {
            n: self.n,
            a_plus: s(&self.a_plus),
            a_minus: s(&self.a_minus),
            pair_plus: s(&self.pair_plus),
            pair_minus: s(&self.pair_minus),
            opp_plus: s(&self.opp_plus),
            opp_minus: s(&self.opp_minus),
        }
    }

    fn plus_unchecked(&self, cd: SignedCoalition) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for j in (0..n).filter(|&j| cd.contains_positive(j)) {
            total += self.a_plus[j];
            for k in (j + 1..n).filter(|&k| cd.contains_positive(k)) {
                total += self.pair_plus(j, k);
            }
            for k in (0..n).filter(|&k| cd.contains_negative(k)) {
                total += self.opp_plus(j, k);
            }
        }
        total
    }

    fn minus_unchecked(&self, cd: SignedCoalition) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for j in (0..n).filter(|&j| cd.contains_negative(j)) {
            total += self.a_minus[j];
            for k in (j + 1..n).filter(|&k| cd.contains_negative(k)) {
                total += self.pair_minus(j, k);
            }
        }
        for j in (0..n).filter(|&j| cd.contains_positive(j)) {
            for k in (0..n).filter(|&k| cd.contains_negative(k)) {
                total += self.opp_minus(j, k);
            }
        }
        total
    }
}

impl Bicapacity for TwoAdditiveBicapacity {
    fn n(&self) -> usize {
        self.n
    }

    fn mu_plus(&self, cd: SignedCoalition) -> f64 {
        self.plus_unchecked(cd)
    }

    fn mu_minus(&self, cd: SignedCoalition) -> f64 {
        self.minus_unchecked(cd)
    }
}

pub fn eval_mu_plus(b: &TwoAdditiveBicapacity, cd: SignedCoalition) -> Result<f64> {
    cd.check(b.n)?;
    Ok(b.plus_unchecked(cd))
}

pub fn eval_mu_minus(b: &TwoAdditiveBicapacity, cd: SignedCoalition) -> Result<f64> {
    cd.check(b.n)?;
    Ok(b.minus_unchecked(cd))
}

/// `μ̂(C, D)` for either representation.
pub fn eval_bicapacity<B: Bicapacity + ?Sized>(b: &B, cd: SignedCoalition) -> Result<f64> {
    cd.check(b.n())?;
    Ok(b.mu_hat(cd))
}

/// Materializes the full tables of a 2-additive bicapacity.
pub fn to_general(b: &TwoAdditiveBicapacity) -> Result<GeneralBicapacity> {
    GeneralBicapacity::from_fn(b.n, |cd| b.plus_unchecked(cd), |cd| b.minus_unchecked(cd))
}

/// Which constraint a [`Violation`] refers to.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolatedConstraint {
    /// `a_j⁺ ≥ 0` / `a_j⁻ ≥ 0`.
    WeightSign { j: usize, positive_part: bool },
    /// `a⁺_{j|k} ≤ 0` / `a⁻_{j|k} ≤ 0`.
    OppositionSign { j: usize, k: usize, positive_part: bool },
    /// `μ⁺(J, ∅) = 1` / `μ⁻(∅, J) = 1`.
    Boundary { positive_part: bool },
    /// `a_j⁺ + Σ_{k∈C} a⁺_jk + Σ_{k∈D} a⁺_{j|k} ≥ 0`.
    MonotonicityPlus { j: usize, c: Vec<usize>, d: Vec<usize> },
    /// `a_j⁻ + Σ_{k∈D} a⁻_jk + Σ_{k∈C} a⁻_{k|j} ≥ 0`.
    MonotonicityMinus { j: usize, c: Vec<usize>, d: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub constraint: ViolatedConstraint,
    /// Value of the constrained expression (or deviation for equalities).
    pub value: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |positive: bool| if positive { '+' } else { '-' };
        let set = |s: &[usize]| s.iter().map(|j| (j + 1).to_string()).collect::<Vec<_>>().join(",");
        match &self.constraint {
            ViolatedConstraint::WeightSign { j, positive_part } => {
                write!(f, "a{}_{} = {} is negative", side(*positive_part), j + 1, self.value)
            }
            ViolatedConstraint::OppositionSign { j, k, positive_part } => {
                write!(f, "a{}_{}|{} = {} is positive", side(*positive_part), j + 1, k + 1, self.value)
            }
            ViolatedConstraint::Boundary { positive_part } => {
                write!(f, "boundary of mu{} off by {}", side(*positive_part), self.value)
            }
            ViolatedConstraint::MonotonicityPlus { j, c, d } | ViolatedConstraint::MonotonicityMinus { j, c, d } => {
                let part = matches!(self.constraint, ViolatedConstraint::MonotonicityPlus { .. });
                write!(
                    f,
                    "mu{} not monotone in criterion {} at ({{{}}}, {{{}}}): {}",
                    side(part),
                    j + 1,
                    set(c),
                    set(d),
                    self.value
                )
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn mask_to_vec(mask: u32) -> Vec<usize> {
    (0..32).filter(|j| mask >> j & 1 == 1).collect()
}

/// Every disjoint `(C, D)` over the criteria other than `j`.
pub(crate) fn coalitions_without(n: usize, j: usize) -> impl Iterator<Item = SignedCoalition> {
    let others: Vec<usize> = (0..n).filter(|&k| k != j).collect();
    let count = 3usize.pow(others.len() as u32);
    (0..count).map(move |mut code| {
        let mut s = SignedCoalition::EMPTY;
        for &k in &others {
            match code % 3 {
                1 => s.positive |= 1 << k,
                2 => s.negative |= 1 << k,
                _ => {}
            }
            code /= 3;
        }
        s
    })
}

/// Checks sign, boundary and monotonicity conditions 1) and 3) on the
/// coefficients. Conditions 2) and 4) follow from the opposition signs.
pub fn validate(b: &TwoAdditiveBicapacity, tol: f64) -> Result<ValidationReport> {
    let n = b.n;
    if n > MAX_ENUMERATED_CRITERIA {
        return Err(Error::Capacity { what: "monotonicity enumeration", n, max: MAX_ENUMERATED_CRITERIA });
    }
    if tol < 0.0 {
        return Err(Error::Config(format!("negative tolerance {tol}")));
    }
    let mut violations = Vec::new();
    let mut push = |constraint, value| violations.push(Violation { constraint, value });

    for j in 0..n {
        for (positive_part, v) in [(true, b.a_plus[j]), (false, b.a_minus[j])] {
            if v < -tol {
                push(ViolatedConstraint::WeightSign { j, positive_part }, v);
            }
        }
    }
    for (j, k) in ordered_pairs(n) {
        for (positive_part, v) in [(true, b.opp_plus(j, k)), (false, b.opp_minus(j, k))] {
            if v > tol {
                push(ViolatedConstraint::OppositionSign { j, k, positive_part }, v);
            }
        }
    }
    let total_plus = b.plus_unchecked(SignedCoalition::all_positive(n));
    if (total_plus - 1.0).abs() > tol {
        push(ViolatedConstraint::Boundary { positive_part: true }, total_plus - 1.0);
    }
    let total_minus = b.minus_unchecked(SignedCoalition::all_negative(n));
    if (total_minus - 1.0).abs() > tol {
        push(ViolatedConstraint::Boundary { positive_part: false }, total_minus - 1.0);
    }

    for j in 0..n {
        for cd in coalitions_without(n, j) {
            let mut plus = b.a_plus[j];
            let mut minus = b.a_minus[j];
            for k in (0..n).filter(|&k| k != j) {
                if cd.contains_positive(k) {
                    plus += b.pair_plus(j, k);
                    minus += b.opp_minus(k, j);
                } else if cd.contains_negative(k) {
                    plus += b.opp_plus(j, k);
                    minus += b.pair_minus(j, k);
                }
            }
            let (c, d) = (mask_to_vec(cd.positive), mask_to_vec(cd.negative));
            if plus < -tol {
                push(ViolatedConstraint::MonotonicityPlus { j, c: c.clone(), d: d.clone() }, plus);
            }
            if minus < -tol {
                push(ViolatedConstraint::MonotonicityMinus { j, c, d }, minus);
            }
        }
    }
    Ok(ValidationReport { violations })
}

/// Symmetry level of a 2-additive bicapacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryClass {
    None,
    /// `μ̂(C, D) = −μ̂(D, C)` for every signed coalition.
    BipolarSymmetric,
    /// `μ⁺(C, D) = μ⁻(D, C)` for every signed coalition.
    StrongSymmetric,
}

pub fn symmetry_class(b: &TwoAdditiveBicapacity, tol: f64) -> SymmetryClass {
    let n = b.n;
    let close = |x: f64, y: f64| (x - y).abs() <= tol;
    let shared = (0..n).all(|j| close(b.a_plus[j], b.a_minus[j]))
        && pairs(n).all(|(j, k)| close(b.pair_plus(j, k), b.pair_minus(j, k)));
    if !shared {
        return SymmetryClass::None;
    }
    if ordered_pairs(n).all(|(j, k)| close(b.opp_plus(j, k), b.opp_minus(k, j))) {
        return SymmetryClass::StrongSymmetric;
    }
    if ordered_pairs(n).all(|(j, k)| close(b.opp_plus(j, k) - b.opp_minus(j, k), b.opp_minus(k, j) - b.opp_plus(k, j)))
    {
        return SymmetryClass::BipolarSymmetric;
    }
    SymmetryClass::None
}

#[derive(Serialize, Deserialize)]
struct BicapacityJson {
    n: usize,
    #[serde(default)]
    a_plus: Vec<f64>,
    #[serde(default)]
    a_minus: Vec<f64>,
    #[serde(default)]
    pair_plus: BTreeMap<String, f64>,
    #[serde(default)]
    pair_minus: BTreeMap<String, f64>,
    #[serde(default)]
    opp_plus: BTreeMap<String, f64>,
    #[serde(default)]
    opp_minus: BTreeMap<String, f64>,
}

fn parse_key(key: &str, sep: char, n: usize) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("bad coefficient key `{key}`, expected `j{sep}k` (1-based)"));
    let (a, b) = key.split_once(sep).ok_or_else(bad)?;
    let j: usize = a.trim().parse().map_err(|_| bad())?;
    let k: usize = b.trim().parse().map_err(|_| bad())?;
    if j == 0 || k == 0 || j == k {
        return Err(bad());
    }
    for idx in [j, k] {
        if idx > n {
            return Err(Error::IndexOutOfRange { index: idx - 1, n });
        }
    }
    Ok((j - 1, k - 1))
}

impl TryFrom<BicapacityJson> for TwoAdditiveBicapacity {
    type Error = Error;

    fn try_from(raw: BicapacityJson) -> Result<Self> {
        let n = raw.n;
        if n == 0 {
            return Err(Error::Config("bicapacity needs at least one criterion".into()));
        }
        let mut b = Self::zero(n);
        for (src, dst) in [(&raw.a_plus, &mut b.a_plus), (&raw.a_minus, &mut b.a_minus)] {
            match src.len() {
                0 => {}
                len if len == n => dst.copy_from_slice(src),
                len => return Err(Error::Dimension { expected: n, got: len }),
            }
        }
        for (key, v) in &raw.pair_plus {
            let (j, k) = parse_key(key, ',', n)?;
            b.set_pair_plus(j, k, *v);
        }
        for (key, v) in &raw.pair_minus {
            let (j, k) = parse_key(key, ',', n)?;
            b.set_pair_minus(j, k, *v);
        }
        for (key, v) in &raw.opp_plus {
            let (j, k) = parse_key(key, '|', n)?;
            b.set_opp_plus(j, k, *v);
        }
        for (key, v) in &raw.opp_minus {
            let (j, k) = parse_key(key, '|', n)?;
            b.set_opp_minus(j, k, *v);
        }
        Ok(b)
    }
}

impl From<&TwoAdditiveBicapacity> for BicapacityJson {
    fn from(b: &TwoAdditiveBicapacity) -> Self {
        let n = b.n;
        let pair_key = |j: usize, k: usize| format!("{},{}", j + 1, k + 1);
        let opp_key = |j: usize, k: usize| format!("{}|{}", j + 1, k + 1);
        Self {
            n,
            a_plus: b.a_plus.clone(),
            a_minus: b.a_minus.clone(),
            pair_plus: pairs(n).map(|(j, k)| (pair_key(j, k), b.pair_plus(j, k))).collect(),
            pair_minus: pairs(n).map(|(j, k)| (pair_key(j, k), b.pair_minus(j, k))).collect(),
            opp_plus: ordered_pairs(n).map(|(j, k)| (opp_key(j, k), b.opp_plus(j, k))).collect(),
            opp_minus: ordered_pairs(n).map(|(j, k)| (opp_key(j, k), b.opp_minus(j, k))).collect(),
        }
    }
}

impl Serialize for TwoAdditiveBicapacity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BicapacityJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TwoAdditiveBicapacity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BicapacityJson::deserialize(d)?;
        Self::try_from(raw).map_err(serde::de::Error::custom)
    }
}
