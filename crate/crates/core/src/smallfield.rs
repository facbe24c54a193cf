//! Simulating large-field constructions over a small base field: the
//! coordinate-expansion map phi applied per entry lifts matrices over
//! F_{q^k} to matrices over F_q while composing with base-field
//! multiplication and never decreasing rank, so condenser claims carry over
//! unchanged (strong-ness included).

use crate::error::{Error, Result};
use crate::linalg::FMatrix;
use crate::seeded::{Rat, SeededCondenser};

/// Lifts a t x n matrix over F_{q^k} to a kt x n matrix over F_q: each
/// extension entry becomes its k-long coefficient column.
pub fn phi_lift_matrix(e: &FMatrix) -> Result<FMatrix> {
    let ext = e.field();
    if ext.is_prime_field() {
        return Err(Error::NotAnExtension);
    }
    let base = ext.base_field();
    let k = ext.k() as usize;
    let mut out = FMatrix::zeros(&base, k * e.rows(), e.cols());
    for i in 0..e.rows() {
        for j in 0..e.cols() {
            let coeffs = ext.phi(e.get(i, j))?;
            for (c, &coeff) in coeffs.iter().enumerate() {
                out.set(i * k + c, j, coeff);
            }
        }
    }
    Ok(out)
}

/// Lifts every matrix of a condenser over F_{q^k} to the base field; the
/// claim is carried over verbatim.
pub fn lift_condenser(c: &SeededCondenser) -> Result<SeededCondenser> {
    if c.field.is_prime_field() {
        return Err(Error::NotAnExtension);
    }
    let matrices: Result<Vec<FMatrix>> = c.matrices.iter().map(phi_lift_matrix).collect();
    Ok(SeededCondenser {
        field: c.field.base_field(),
        n: c.n,
        t: c.t * c.field.k() as usize,
        matrices: matrices?,
        claim: c.claim.clone(),
    })
}

/// Smallest k with q^k >= x.
pub fn ceil_log(q: u64, x: u128) -> u32 {
    let mut k = 0u32;
    let mut pow = 1u128;
    while pow < x {
        pow *= q as u128;
        k += 1;
    }
    k
}

/// Extension degree used when lifting the explicit lossy condenser:
/// k = ceil(log_q(t n^2 + 1)).
pub fn lossy_lift_degree(q: u64, t: usize, n: usize) -> u32 {
    ceil_log(q, (t as u128) * (n as u128) * (n as u128) + 1)
}

/// Parameter report for the small-field expander instantiation.
#[derive(Clone, Debug, PartialEq)]
pub struct SmallFieldParams {
    pub k: u32,
    pub condenser_size: usize,
    pub degree: usize,
    pub claim_eps: Rat,
    pub claim_alpha: Rat,
}

/// Small-field expander parameters: with k = ceil(log_q(d^2 n^3 + 1)),
/// condenser size ceil(dk / (delta (1 - eps d k))) and degree d times that;
/// claim (eps, (1-delta)d). Requires eps*d*k < 1.
pub fn small_field_expander_params(
    q: u64,
    n: usize,
    d: usize,
    eps: Rat,
    delta: Rat,
) -> Result<SmallFieldParams> {
    if delta <= Rat::new(0, 1) || delta > Rat::new(1, 1) {
        return Err(Error::InvalidParams(format!("need 0 < delta <= 1, got {delta}")));
    }
    let k = ceil_log(q, (d as u128).pow(2) * (n as u128).pow(3) + 1);
    let dk = Rat::new((d as i64) * (k as i64), 1);
    let eps_dk = eps * dk;
    if eps_dk >= Rat::new(1, 1) {
        return Err(Error::InvalidParams(format!(
            "need eps*d*k < 1, got {eps_dk} (k = {k})"
        )));
    }
    let size = crate::seeded::rat_ceil(dk / (delta * (Rat::new(1, 1) - eps_dk))) as usize;
    Ok(SmallFieldParams {
        k,
        condenser_size: size,
        degree: d * size,
        claim_eps: eps,
        claim_alpha: (Rat::new(1, 1) - delta) * Rat::new(d as i64, 1),
    })
}
