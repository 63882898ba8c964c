//! Benchmark fixtures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use biprom_core::{CriterionSpec, DecisionProblem, PreferenceStatement, TwoAdditiveBicapacity};

/// Eight students rated on three subjects.
pub fn students() -> DecisionProblem {
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
        ["M", "Ph", "L"].iter().map(|id| CriterionSpec::linear(*id, 0.0, 4.0)).collect(),
        (1..=8).map(|i| format!("s{i}")).collect(),
        rows.iter().map(|r| r.to_vec()).collect(),
    )
    .expect("valid fixture")
}

pub fn student_statements() -> Vec<PreferenceStatement> {
    let s = |x: &str| x.to_string();
    vec![
        PreferenceStatement::IntensityPreference { a: s("s1"), b: s("s2"), c: s("s3"), d: s("s4") },
        PreferenceStatement::IntensityPreference { a: s("s7"), b: s("s8"), c: s("s5"), d: s("s6") },
        PreferenceStatement::LocalPreference { a: s("s2"), b: s("s6") },
        PreferenceStatement::LocalPreference { a: s("s8"), b: s("s1") },
    ]
}

/// `m` alternatives on `n` linear criteria with integer scores.
pub fn random_problem(seed: u64, m: usize, n: usize) -> DecisionProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let criteria = (0..n).map(|j| CriterionSpec::linear(format!("g{j}"), 0.5, 3.0)).collect();
    let evaluations = (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..10) as f64).collect()).collect();
    DecisionProblem::new(criteria, (0..m).map(|i| format!("a{i}")).collect(), evaluations).expect("valid fixture")
}

/// A monotone instance with mild synergies and opposition terms.
pub fn sample_bicapacity(n: usize) -> TwoAdditiveBicapacity {
    let mut b = TwoAdditiveBicapacity::additive(&vec![1.0 / n as f64; n]);
    let t = 0.2 / (n * n) as f64;
    for j in 0..n {
        for k in (j + 1)..n {
            b.set_pair_plus(j, k, t).set_pair_minus(j, k, t);
        }
    }
    // opposition terms cancel the synergies on the boundary
    for j in 0..n {
        for k in (0..n).filter(|&k| k != j) {
            b.set_opp_plus(j, k, -t / 2.0).set_opp_minus(j, k, -t / 2.0);
        }
    }
    let scale = 1.0 / (1.0 + t * (n * (n - 1) / 2) as f64);
    b.scaled(scale)
}

/// Profiles in `[-1, 1]^n`.
pub fn random_profiles(seed: u64, count: usize, n: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use biprom_core::bicapacity::validate;

    #[test]
    fn fixtures_are_valid() {
        for n in 2..=6 {
            assert!(validate(&sample_bicapacity(n), 1e-9).unwrap().is_valid(), "n = {n}");
        }
        assert_eq!(students().m(), 8);
        assert_eq!(random_problem(1, 20, 4).n(), 4);
    }
}
