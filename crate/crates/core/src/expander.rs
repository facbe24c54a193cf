//! Dimension expanders built by tensoring into F^{nd} followed by a lossy
//! rank condenser back to F^n, plus the parameter calculators for the
//! gamma = 0 and gamma > 0 instantiations and the route through two-source
//! condensers.

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::FMatrix;
use crate::seeded::{rat_ceil, CondenserClaim, RankMode, Rat, SeededCondenser};
use crate::twosource::BilinearCondenser;

/// A degree-d' collection of n x n maps claiming (eps, alpha)-expansion:
/// every subspace of dimension at most eps*n expands to alpha times its
/// dimension under the span of the images.
#[derive(Clone, Debug)]
pub struct DimExpander {
    pub field: Field,
    pub n: usize,
    pub maps: Vec<FMatrix>,
    pub eps: Rat,
    pub alpha: Rat,
}

impl DimExpander {
    pub fn degree(&self) -> usize {
        self.maps.len()
    }

    pub fn describe(&self) -> String {
        format!("dim-expander(eps={}, alpha={})", self.eps, self.alpha)
    }
}

/// The d block-embedding maps T_i: F^n -> F^{nd}; T_i places F^n into block
/// i, i.e. T_i e_a = e_{(i-1)n + a} under the fixed index convention.
pub fn tensor_maps(field: &Field, n: usize, d: usize) -> Vec<FMatrix> {
    (0..d)
        .map(|block| {
            let mut t = FMatrix::zeros(field, n * d, n);
            for a in 0..n {
                t.set(block * n + a, a, crate::gf::FElem::ONE);
            }
            t
        })
        .collect()
}

/// Composes the tensor stage with a lossy condenser: A = { E T_i }. The
/// condenser must be claimed lossy(<= rc, delta) with input dimension n*d and
/// output dimension n; the expander claims (r/n, (1-gamma)(1-delta)d) where r
/// is the largest rank with ceil((1-gamma) r d) <= rc.
pub fn tensor_then_condense(c: &SeededCondenser, d: usize, gamma: Rat) -> Result<DimExpander> {
    let (rc, delta) = match &c.claim {
        CondenserClaim::Lossy { r, eps, mode: RankMode::Le } => (*r, *eps),
        CondenserClaim::Lossy { mode: RankMode::Eq, .. } => {
            return Err(Error::ClaimKind(
                "tensor-then-condense needs the <= guarantee, got an eq-mode lossy claim".into(),
            ))
        }
        other => {
            return Err(Error::ClaimKind(format!(
                "tensor-then-condense needs a lossy claim, got {}",
                other.describe()
            )))
        }
    };
    if d < 1 {
        return Err(Error::InvalidParams("d must be >= 1".into()));
    }
    if gamma < Rat::new(0, 1) || gamma >= Rat::new(1, 1) {
        return Err(Error::InvalidParams(format!("need 0 <= gamma < 1, got {gamma}")));
    }
    let n = c.t;
    if c.n != n * d {
        return Err(Error::Dimension(format!(
            "condenser maps F^{} -> F^{}, expected input {} = n*d",
            c.n,
            c.t,
            n * d
        )));
    }
    let one_minus_gamma = Rat::new(1, 1) - gamma;
    let mut r = 0usize;
    while rat_ceil(one_minus_gamma * Rat::new(((r + 1) * d) as i64, 1)) <= rc as i64 {
        r += 1;
    }
    if r == 0 {
        return Err(Error::InvalidParams(format!(
            "condenser rank bound {rc} is too small for degree {d} at gamma={gamma}"
        )));
    }
    let blocks = tensor_maps(&c.field, n, d);
    let mut maps = Vec::with_capacity(d * c.matrices.len());
    for e in &c.matrices {
        for t in &blocks {
            maps.push(e.mul(t));
        }
    }
    let alpha = one_minus_gamma * (Rat::new(1, 1) - delta) * Rat::new(d as i64, 1);
    Ok(DimExpander {
        field: c.field.clone(),
        n,
        maps,
        eps: Rat::new(r as i64, n as i64),
        alpha,
    })
}

/// Parameter report for the expander instantiations.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpanderParams {
    pub d: usize,
    pub gamma: Rat,
    pub delta: Rat,
    pub condenser_size: usize,
    pub degree: usize,
    pub claim_eps: Rat,
    pub claim_alpha: Rat,
}

/// gamma = 0 instantiation: condenser size ceil(d / (delta (1 - eps d))),
/// degree d times that, claim (eps, (1-delta)d). Requires eps*d < 1.
pub fn expander_params_gamma0(d: usize, eps: Rat, delta: Rat) -> Result<ExpanderParams> {
    if delta <= Rat::new(0, 1) || delta > Rat::new(1, 1) {
        return Err(Error::InvalidParams(format!("need 0 < delta <= 1, got {delta}")));
    }
    let eps_d = eps * Rat::new(d as i64, 1);
    if eps_d >= Rat::new(1, 1) {
        return Err(Error::InvalidParams(format!("need eps*d < 1, got {eps_d}")));
    }
    let size = rat_ceil(Rat::new(d as i64, 1) / (delta * (Rat::new(1, 1) - eps_d))) as usize;
    Ok(ExpanderParams {
        d,
        gamma: Rat::new(0, 1),
        delta,
        condenser_size: size,
        degree: d * size,
        claim_eps: eps,
        claim_alpha: (Rat::new(1, 1) - delta) * Rat::new(d as i64, 1),
    })
}

/// General instantiation for 0 < eps <= eta < 1: picks d = ceil((1+eta)/(2
/// eps)), gamma solving (1-gamma) eps d = (1+eta)/2, delta = (1-eta)/(1+eta);
/// degree d * ceil(2(1+eta)d/(1-eta)^2); claim (eps, eta/eps).
pub fn expander_params_general(eps: Rat, eta: Rat) -> Result<ExpanderParams> {
    let zero = Rat::new(0, 1);
    let one = Rat::new(1, 1);
    if eps <= zero || eps > eta || eta >= one {
        return Err(Error::InvalidParams(format!("need 0 < eps <= eta < 1, got eps={eps}, eta={eta}")));
    }
    let d = rat_ceil((one + eta) / (Rat::new(2, 1) * eps)) as usize;
    let half_target = (one + eta) / Rat::new(2, 1);
    let gamma = one - half_target / (eps * Rat::new(d as i64, 1));
    let delta = (one - eta) / (one + eta);
    let size = rat_ceil(
        Rat::new(2, 1) * (one + eta) * Rat::new(d as i64, 1) / ((one - eta) * (one - eta)),
    ) as usize;
    let params = ExpanderParams {
        d,
        gamma,
        delta,
        condenser_size: size,
        degree: d * size,
        claim_eps: eps,
        claim_alpha: eta / eps,
    };
    // the three defining equations force (1-gamma)(1-delta) eps d = eta
    debug_assert_eq!(
        (one - params.gamma) * (one - params.delta) * eps * Rat::new(d as i64, 1),
        eta
    );
    Ok(params)
}

/// Builds a dimension expander from a bilinear (<= r, m, eps)-two-source
/// condenser: A_i is the matrix of v -> f(v, e_i), rows padded with zeros
/// from t to n. Degree m, claim (r/n, (1-eps)m).
pub fn expander_from_two_source(b: &BilinearCondenser) -> Result<DimExpander> {
    let claim = b
        .claims
        .first()
        .ok_or_else(|| Error::ClaimKind("condenser carries no claim".into()))?;
    if claim.s != b.m {
        return Err(Error::ClaimKind(format!(
            "need a (<= r, m, eps) claim with full second source, got s={} for m={}",
            claim.s, b.m
        )));
    }
    if b.t > b.n {
        return Err(Error::Dimension(format!(
            "need t <= n to pad the maps square, got t={} > n={}",
            b.t, b.n
        )));
    }
    let f = &b.field;
    let mut maps = Vec::with_capacity(b.m);
    for i in 0..b.m {
        // row k of A_i is v -> (E_k)_{., i} dotted with v, i.e. column i of
        // the k-th slice
        let mut a = FMatrix::zeros(f, b.n, b.n);
        for k in 0..b.t {
            let slice = b.slice(k);
            for j in 0..b.n {
                a.set(k, j, slice.get(j, i));
            }
        }
        maps.push(a);
    }
    Ok(DimExpander {
        field: f.clone(),
        n: b.n,
        maps,
        eps: Rat::new(claim.r as i64, b.n as i64),
        alpha: (Rat::new(1, 1) - claim.eps) * Rat::new(b.m as i64, 1),
    })
}
