//! Seeded Monte-Carlo sampler for random constructions: draws uniformly
//! random objects, verifies each one exhaustively, and reports the success
//! fraction. Per-trial generators are derived from the master seed and the
//! trial index, so results do not depend on how trials are sharded.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Result;
use crate::expander::DimExpander;
use crate::gf::Field;
use crate::seeded::{CondenserClaim, RankMode, Rat, SeededCondenser};
use crate::twosource::{BilinearCondenser, TwoSourceClaim};
use crate::verify::{random_matrix, verify_expander, verify_seeded, verify_two_source, VerifyOptions};

/// The kinds of random objects the sampler can draw.
#[derive(Clone, Debug)]
pub enum RandomKind {
    /// a uniformly random n x m matrix; success = rank <= r
    MatrixRankAtMost { n: usize, m: usize, r: usize },
    /// `count` random t x n maps; success = passes (r, eps) lossy
    /// verification in the given mode
    LossyCollection { n: usize, t: usize, count: usize, r: usize, eps: Rat, mode: RankMode },
    /// d random n x n maps; success = passes (eps, alpha) expansion
    DimExpander { n: usize, d: usize, eps: Rat, alpha: Rat },
    /// a random t x nm bilinear map; success = passes (r, s, eps)
    /// verification (exact ranks)
    TwoSource { n: usize, m: usize, t: usize, r: usize, s: usize, eps: Rat },
}

impl RandomKind {
    pub fn describe(&self) -> String {
        match self {
            RandomKind::MatrixRankAtMost { n, m, r } => format!("matrix-rank(n={n}, m={m}, r<={r})"),
            RandomKind::LossyCollection { n, t, count, r, eps, mode } => {
                format!("lossy(n={n}, t={t}, count={count}, r={r}, eps={eps}, mode={})", mode.as_str())
            }
            RandomKind::DimExpander { n, d, eps, alpha } => {
                format!("dim-expander(n={n}, d={d}, eps={eps}, alpha={alpha})")
            }
            RandomKind::TwoSource { n, m, t, r, s, eps } => {
                format!("two-source(n={n}, m={m}, t={t}, r={r}, s={s}, eps={eps})")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct FrequencyReport {
    pub kind: String,
    pub field: String,
    pub seed: u64,
    pub trials: u64,
    pub successes: u64,
}

impl FrequencyReport {
    pub fn frequency(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    pub fn render_text(&self) -> String {
        format!(
            "montecarlo kind={} field={} seed={} trials={} successes={} frequency={:.6}",
            self.kind,
            self.field,
            self.seed,
            self.trials,
            self.successes,
            self.frequency()
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind,
            "field": self.field,
            "seed": self.seed,
            "trials": self.trials,
            "successes": self.successes,
            "frequency": self.frequency(),
        })
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Runs `trials` seeded trials of the requested kind; deterministic given
/// the seed and independent of trial sharding.
pub fn montecarlo(field: &Field, kind: &RandomKind, seed: u64, trials: u64) -> Result<FrequencyReport> {
    let opts = VerifyOptions { jobs: 1, ..VerifyOptions::default() };
    let mut successes = 0u64;
    for i in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(i)));
        if trial(field, kind, &mut rng, &opts)? {
            successes += 1;
        }
    }
    Ok(FrequencyReport {
        kind: kind.describe(),
        field: format!("{field:?}"),
        seed,
        trials,
        successes,
    })
}

fn trial(field: &Field, kind: &RandomKind, rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<bool> {
    match kind {
        RandomKind::MatrixRankAtMost { n, m, r } => {
            Ok(random_matrix(field, *n, *m, rng).rank() <= *r)
        }
        RandomKind::LossyCollection { n, t, count, r, eps, mode } => {
            let matrices = (0..*count).map(|_| random_matrix(field, *t, *n, rng)).collect();
            let c = SeededCondenser {
                field: field.clone(),
                n: *n,
                t: *t,
                matrices,
                claim: CondenserClaim::Lossy { r: *r, eps: *eps, mode: *mode },
            };
            Ok(verify_seeded(&c, opts)?.pass)
        }
        RandomKind::DimExpander { n, d, eps, alpha } => {
            let maps = (0..*d).map(|_| random_matrix(field, *n, *n, rng)).collect();
            let x = DimExpander { field: field.clone(), n: *n, maps, eps: *eps, alpha: *alpha };
            Ok(verify_expander(&x, opts)?.pass)
        }
        RandomKind::TwoSource { n, m, t, r, s, eps } => {
            let b = BilinearCondenser {
                field: field.clone(),
                n: *n,
                m: *m,
                t: *t,
                e: random_matrix(field, *t, n * m, rng),
                claims: vec![TwoSourceClaim {
                    r: *r,
                    s: *s,
                    eps: *eps,
                    rmode: RankMode::Eq,
                    smode: RankMode::Eq,
                }],
            };
            Ok(verify_two_source(&b, opts)?.pass)
        }
    }
}

/// Exact probability that a uniformly random n x n matrix over F_q is
/// singular, as (numerator, denominator) of 1 - prod (q^n - q^i)/q^{n^2}.
pub fn exact_singular_probability(q: u64, n: usize) -> (u128, u128) {
    let qn = (q as u128).pow(n as u32);
    let mut invertible: u128 = 1;
    for i in 0..n {
        invertible *= qn - (q as u128).pow(i as u32);
    }
    let total = (q as u128).pow((n * n) as u32);
    (total - invertible, total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_singular_count_f2_4x4() {
        let (num, den) = exact_singular_probability(2, 4);
        assert_eq!(den, 65536);
        assert_eq!(den - num, 20160); // 15*14*12*8 invertible matrices
    }

    #[test]
    fn zero_trials_gives_empty_report() {
        let f2 = Field::new(2, 1).unwrap();
        let r = montecarlo(&f2, &RandomKind::MatrixRankAtMost { n: 4, m: 4, r: 3 }, 1, 0).unwrap();
        assert_eq!(r.trials, 0);
        assert_eq!(r.successes, 0);
    }

    #[test]
    fn deterministic_given_seed() {
        let f2 = Field::new(2, 1).unwrap();
        let kind = RandomKind::MatrixRankAtMost { n: 3, m: 3, r: 2 };
        let a = montecarlo(&f2, &kind, 42, 500).unwrap();
        let b = montecarlo(&f2, &kind, 42, 500).unwrap();
        assert_eq!(a.successes, b.successes);
    }

    #[test]
    fn rank_deficiency_frequency_tracks_exact_value() {
        let f2 = Field::new(2, 1).unwrap();
        let kind = RandomKind::MatrixRankAtMost { n: 4, m: 4, r: 3 };
        let trials = 20_000u64;
        let report = montecarlo(&f2, &kind, 7, trials).unwrap();
        let (num, den) = exact_singular_probability(2, 4);
        let p = num as f64 / den as f64;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!(
            (report.frequency() - p).abs() < 5.0 * se,
            "frequency {} vs exact {} (5se = {})",
            report.frequency(),
            p,
            5.0 * se
        );
    }
}
