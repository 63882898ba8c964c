//! Fixtures and random generators shared by unit tests.

use rand::Rng;

use crate::bicapacity::Bicapacity;
use crate::bicapacity::{ordered_pairs, pairs, validate, SignedCoalition, TwoAdditiveBicapacity};
use crate::model::{CriterionSpec, DecisionProblem};

/// The eight students rated on Mathematics, Physics and Literature.
pub fn students() -> DecisionProblem {
    let criteria = ["M", "Ph", "L"].iter().map(|id| CriterionSpec::linear(*id, 0.0, 4.0)).collect();
    let rows = [
        [16.0, 16.0, 16.0],
        [15.0, 13.0, 18.0],
        [19.0, 18.0, 14.0],
        [18.0, 16.0, 15.0],
        [15.0, 16.0, 17.0],
        [13.0, 13.0, 19.0],
        [17.0, 19.0, 15.0],
        [15.0, 17.0, 16.0],
    ];
    DecisionProblem::new(
        criteria,
        (1..=8).map(|i| format!("s{i}")).collect(),
        rows.iter().map(|r| r.to_vec()).collect(),
    )
    .unwrap()
}

/// Rescales both halves to meet the boundary conditions; `None` if the
/// result is degenerate or not monotone.
pub fn normalize(mut b: TwoAdditiveBicapacity) -> Option<TwoAdditiveBicapacity> {
    let n = b.n();
    let tp = b.mu_plus(SignedCoalition::all_positive(n));
    let tm = b.mu_minus(SignedCoalition::all_negative(n));
    if tp <= 0.1 || tm <= 0.1 {
        return None;
    }
    for j in 0..n {
        let (p, m) = (b.a_plus(j), b.a_minus(j));
        b.set_a_plus(j, p / tp).set_a_minus(j, m / tm);
    }
    for (j, k) in pairs(n) {
        let (p, m) = (b.pair_plus(j, k), b.pair_minus(j, k));
        b.set_pair_plus(j, k, p / tp).set_pair_minus(j, k, m / tm);
    }
    for (j, k) in ordered_pairs(n) {
        let (p, m) = (b.opp_plus(j, k), b.opp_minus(j, k));
        b.set_opp_plus(j, k, p / tp).set_opp_minus(j, k, m / tm);
    }
    validate(&b, 1e-12).ok()?.is_valid().then_some(b)
}

/// A random valid 2-additive bicapacity with interaction magnitudes up to
/// `spread` before rescaling. Interactions are shrunk just enough to keep
/// every monotonicity condition, sometimes exactly to the boundary.
pub fn random_valid<R: Rng>(rng: &mut R, n: usize, spread: f64) -> TwoAdditiveBicapacity {
    loop {
        let mut b = TwoAdditiveBicapacity::zero(n);
        for j in 0..n {
            b.set_a_plus(j, rng.gen_range(0.05..1.0));
            b.set_a_minus(j, rng.gen_range(0.05..1.0));
        }
        for (j, k) in pairs(n) {
            b.set_pair_plus(j, k, rng.gen_range(-spread..spread));
            b.set_pair_minus(j, k, rng.gen_range(-spread..spread));
        }
        for (j, k) in ordered_pairs(n) {
            b.set_opp_plus(j, k, rng.gen_range(-spread..=0.0));
            b.set_opp_minus(j, k, rng.gen_range(-spread..=0.0));
        }
        // worst case of conditions 1) and 3) over all (C, D)
        let mut shrink_plus = 1.0f64;
        let mut shrink_minus = 1.0f64;
        for j in 0..n {
            let (mut worst_plus, mut worst_minus) = (0.0, 0.0);
            for k in (0..n).filter(|&k| k != j) {
                worst_plus += b.pair_plus(j, k).min(b.opp_plus(j, k)).min(0.0);
                worst_minus += b.pair_minus(j, k).min(b.opp_minus(k, j)).min(0.0);
            }
            if worst_plus < 0.0 {
                shrink_plus = shrink_plus.min(b.a_plus(j) / -worst_plus);
            }
            if worst_minus < 0.0 {
                shrink_minus = shrink_minus.min(b.a_minus(j) / -worst_minus);
            }
        }
        let u = if rng.gen_bool(0.2) { 1.0 } else { rng.gen_range(0.0..1.0) };
        let (fp, fm) = (u * shrink_plus.min(1.0), u * shrink_minus.min(1.0));
        for (j, k) in pairs(n) {
            let (p, m) = (b.pair_plus(j, k), b.pair_minus(j, k));
            b.set_pair_plus(j, k, p * fp).set_pair_minus(j, k, m * fm);
        }
        for (j, k) in ordered_pairs(n) {
            let (p, m) = (b.opp_plus(j, k), b.opp_minus(j, k));
            b.set_opp_plus(j, k, p * fp).set_opp_minus(j, k, m * fm);
        }
        if let Some(b) = normalize(b) {
            return b;
        }
    }
}

/// A random valid instance satisfying `μ⁺(C, D) = μ⁻(D, C)`.
pub fn random_strong_symmetric<R: Rng>(rng: &mut R, n: usize, spread: f64) -> TwoAdditiveBicapacity {
    let mut b = random_valid(rng, n, spread);
    b.mirror_plus_into_minus();
    b
}

/// A random valid instance with `a⁺ = a⁻`, shared pair terms and
/// `a⁺_{j|k} − a⁻_{j|k} = a⁻_{k|j} − a⁺_{k|j}` but, generically, not strong.
pub fn random_bipolar_symmetric<R: Rng>(rng: &mut R, n: usize, spread: f64) -> TwoAdditiveBicapacity {
    let base = random_strong_symmetric(rng, n, spread);
    let mut scale = spread;
    loop {
        let mut b = base.clone();
        // shifting both a⁺_{j|k} and a⁻_{j|k} by t keeps the differences
        for (j, k) in ordered_pairs(n) {
            let t = rng.gen_range(-scale..=0.0);
            let (p, m) = (b.opp_plus(j, k), b.opp_minus(j, k));
            b.set_opp_plus(j, k, p + t).set_opp_minus(j, k, m + t);
        }
        if validate(&b, 1e-12).unwrap().is_valid() {
            return b;
        }
        scale /= 2.0;
    }
}

/// A random profile in `[-1, 1]^n`, with some exact zeros and ties.
pub fn random_profile<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| match rng.gen_range(0..8) {
            0 => 0.0,
            1 => 0.5,
            2 => -0.5,
            _ => rng.gen_range(-1.0..=1.0),
        })
        .collect()
}

/// A random problem with integer-valued evaluations so that ties occur.
pub fn random_problem<R: Rng>(rng: &mut R, m: usize, n: usize) -> DecisionProblem {
    let criteria = (0..n)
        .map(|j| {
            let q = rng.gen_range(0.0..2.0);
            CriterionSpec::linear(format!("g{j}"), q, q + rng.gen_range(0.5..4.0))
        })
        .collect();
    let evaluations = (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..10) as f64).collect()).collect();
    DecisionProblem::new(criteria, (0..m).map(|i| format!("a{i}")).collect(), evaluations).unwrap()
}
