//! Seeded rank condensers and subspace designs from the folded Wronskian,
//! plus the duality conversions between the two views.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::gf::{FElem, Field};
use crate::linalg::FMatrix;

pub type Rat = Ratio<i64>;

/// Rational ceiling as a usize (values are small by construction).
pub fn rat_ceil(r: Rat) -> i64 {
    r.ceil().to_integer()
}

pub fn rat_floor(r: Rat) -> i64 {
    r.floor().to_integer()
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum RankMode {
    /// the property is claimed for sources of rank exactly r
    Eq,
    /// the property is claimed for every rank 1..=r
    Le,
}

impl RankMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RankMode::Eq => "eq",
            RankMode::Le => "le",
        }
    }
}

/// The combinatorial property a [`SeededCondenser`] claims.
#[derive(Clone, PartialEq, Debug)]
pub enum CondenserClaim {
    /// for every rank-r M, at most floor(L) maps drop its rank
    WeakLossless { r: usize, l: Rat },
    /// for every rank-r M, the rank deficiencies summed over all maps are at
    /// most floor(L)
    StrongLossless { r: usize, l: Rat },
    /// some map keeps a (1-eps) fraction of the rank, for rank exactly r
    /// (Eq) or every rank up to r (Le)
    Lossy { r: usize, eps: Rat, mode: RankMode },
}

impl CondenserClaim {
    pub fn r(&self) -> usize {
        match self {
            CondenserClaim::WeakLossless { r, .. }
            | CondenserClaim::StrongLossless { r, .. }
            | CondenserClaim::Lossy { r, .. } => *r,
        }
    }

    pub fn is_lossless(&self) -> bool {
        !matches!(self, CondenserClaim::Lossy { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            CondenserClaim::WeakLossless { r, l } => format!("weak-lossless(r={r}, L={l})"),
            CondenserClaim::StrongLossless { r, l } => format!("strong-lossless(r={r}, L={l})"),
            CondenserClaim::Lossy { r, eps, mode } => {
                format!("lossy(r={r}, eps={eps}, mode={})", mode.as_str())
            }
        }
    }
}

/// An ordered collection of t x n matrices with a claimed condensing
/// property. Immutable after construction.
#[derive(Clone, Debug)]
pub struct SeededCondenser {
    pub field: Field,
    pub n: usize,
    pub t: usize,
    pub matrices: Vec<FMatrix>,
    pub claim: CondenserClaim,
}

/// A collection of subspaces of F^n (RREF bases) with a claimed design
/// property, the dual view of a lossless condenser.
#[derive(Clone, Debug)]
pub struct SubspaceDesign {
    pub field: Field,
    pub n: usize,
    pub subspaces: Vec<FMatrix>,
    /// true for strong (sum of intersection dimensions), false for weak
    /// (count of nontrivial intersections)
    pub strong: bool,
    pub r: usize,
    pub l: Rat,
}

impl SubspaceDesign {
    pub fn describe(&self) -> String {
        let kind = if self.strong { "strong" } else { "weak" };
        format!("{kind}-design(r={}, L={})", self.r, self.l)
    }
}

/// The folded Wronskian matrix: entry (i, j) = (omega^i * alpha)^j for
/// i in 0..t, j in 0..n. Requires omega of multiplicative order >= n and a
/// nonzero evaluation point.
pub fn folded_wronskian(field: &Field, omega: FElem, t: usize, n: usize, alpha: FElem) -> Result<FMatrix> {
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    if field.element_order(omega)? < n as u64 {
        return Err(Error::OrderUnavailable { required: n as u64, q: field.q() });
    }
    let mut m = FMatrix::zeros(field, t, n);
    let mut point = alpha;
    for i in 0..t {
        let mut acc = field.one();
        for j in 0..n {
            m.set(i, j, acc);
            if j + 1 < n {
                acc = field.mul(acc, point);
            }
        }
        if i + 1 < t {
            point = field.mul(point, omega);
        }
    }
    Ok(m)
}

/// Strong lossless condenser over a large field: the folded Wronskian
/// evaluated at floor((q-1)/t) powers of omega^t, for a generator omega.
/// Claims strong (r, r(n-r)/(t-r+1)).
pub fn lossless_collection(field: &Field, n: usize, t: usize, r: usize) -> Result<SeededCondenser> {
    let q = field.q();
    if q <= n as u64 {
        return Err(Error::InvalidParams(format!("need q > n, got q={q}, n={n}")));
    }
    if r < 1 || t < r {
        return Err(Error::InvalidParams(format!("need t >= r >= 1, got t={t}, r={r}")));
    }
    let omega = field.find_element_of_order(q - 1)?;
    let count = ((q - 1) / t as u64) as usize;
    let step = field.pow(omega, t as u64);
    let mut matrices = Vec::with_capacity(count);
    let mut alpha = field.one();
    for j in 0..count {
        matrices.push(folded_wronskian(field, omega, t, n, alpha)?);
        if j + 1 < count {
            alpha = field.mul(alpha, step);
        }
    }
    let l = Rat::new((r * (n - r)) as i64, (t - r + 1) as i64);
    Ok(SeededCondenser {
        field: field.clone(),
        n,
        t,
        matrices,
        claim: CondenserClaim::StrongLossless { r, l },
    })
}

/// Number of functional (non-padding) matrices in a lossy collection:
/// min{ceil(n/(eps(t-r+1))), n^2}.
pub fn lossy_functional_count(n: usize, t: usize, r: usize, eps: Rat) -> Result<usize> {
    if r < 1 || t < r {
        return Err(Error::InvalidParams(format!("need t >= r >= 1, got t={t}, r={r}")));
    }
    if eps <= Rat::new(0, 1) || eps >= Rat::new(1, 1) {
        return Err(Error::InvalidParams(format!("need 0 < eps < 1, got {eps}")));
    }
    let cap = Rat::new(n as i64, 1) / (eps * Rat::new((t - r + 1) as i64, 1));
    Ok((rat_ceil(cap) as usize).min(n * n))
}

/// Lossy condenser: the folded Wronskian at min{ceil(n/(eps(t-r+1))), n^2}
/// powers of omega^t, padded with zero matrices to `size`. Claims
/// lossy(<= r, eps).
///
/// Evaluation points are guaranteed distinct when an element of order
/// t*min{N, n^2} exists; when the field cannot host that order but still has
/// an element of order >= n, a maximal-order element is used and points may
/// repeat (the claim is for the verifier to confirm either way).
pub fn lossy_collection(
    field: &Field,
    n: usize,
    t: usize,
    r: usize,
    eps: Rat,
    size: usize,
) -> Result<SeededCondenser> {
    let functional = lossy_functional_count(n, t, r, eps)?;
    let q = field.q();
    if q - 1 < n as u64 {
        return Err(Error::OrderUnavailable { required: n as u64, q });
    }
    if size < functional {
        return Err(Error::InvalidParams(format!(
            "size {size} below required count {functional}"
        )));
    }
    let ideal_order = (t * functional) as u64;
    let omega = field.find_element_of_order(ideal_order.min(q - 1))?;
    let step = field.pow(omega, t as u64);
    let mut matrices = Vec::with_capacity(size);
    let mut alpha = field.one();
    for j in 0..functional {
        matrices.push(folded_wronskian(field, omega, t, n, alpha)?);
        if j + 1 < functional {
            alpha = field.mul(alpha, step);
        }
    }
    matrices.resize(size, FMatrix::zeros(field, t, n));
    Ok(SeededCondenser {
        field: field.clone(),
        n,
        t,
        matrices,
        claim: CondenserClaim::Lossy { r, eps, mode: RankMode::Le },
    })
}

/// Dual view: H_i is the orthogonal complement of the row span of E_i, and
/// the design claim mirrors the condenser claim. Only stated for lossless
/// claims.
pub fn design_from_condenser(c: &SeededCondenser) -> Result<SubspaceDesign> {
    let (strong, r, l) = match &c.claim {
        CondenserClaim::WeakLossless { r, l } => (false, *r, *l),
        CondenserClaim::StrongLossless { r, l } => (true, *r, *l),
        CondenserClaim::Lossy { .. } => {
            return Err(Error::ClaimKind("duality is stated only for lossless claims".into()))
        }
    };
    let subspaces = c
        .matrices
        .iter()
        .map(|e| e.complement_of_row_span())
        .collect();
    Ok(SubspaceDesign { field: c.field.clone(), n: c.n, subspaces, strong, r, l })
}

/// Converse direction: E_i rows span the complement of H_i, padded with zero
/// rows to t.
pub fn condenser_from_design(d: &SubspaceDesign, t: usize) -> Result<SeededCondenser> {
    let mut matrices = Vec::with_capacity(d.subspaces.len());
    for h in &d.subspaces {
        let comp = h.complement_of_row_span();
        if comp.rows() > t {
            return Err(Error::Dimension(format!(
                "complement has {} rows, does not fit t={t}",
                comp.rows()
            )));
        }
        let pad = FMatrix::zeros(&d.field, t - comp.rows(), d.n);
        matrices.push(if pad.rows() == 0 { comp } else { comp.vstack(&pad) });
    }
    let claim = if d.strong {
        CondenserClaim::StrongLossless { r: d.r, l: d.l }
    } else {
        CondenserClaim::WeakLossless { r: d.r, l: d.l }
    };
    Ok(SeededCondenser { field: d.field.clone(), n: d.n, t, matrices, claim })
}
