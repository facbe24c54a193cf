//! Bilinear two-source rank condensers and rank-metric codes.
//!
//! Lossless condensers come from condense-then-tensor (optionally pruned) or
//! from rank-metric codes via the kernel/parity-check equivalence; lossy ones
//! from the outer folded-Wronskian reduction composed with a brute-force
//! inner condenser. The slice convention matches [`crate::linalg`]: row k of
//! the t x nm matrix E reshapes row-major to the slice E_k in F^{n x m}.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{FElem, Field};
use crate::linalg::FMatrix;
use crate::seeded::{rat_ceil, RankMode, Rat};

/// One claimed condensing property of a bilinear map: sources of rank r and
/// s (exactly, or up to, per mode) produce output of rank at least
/// (1-eps) r s.
#[derive(Clone, PartialEq, Debug)]
pub struct TwoSourceClaim {
    pub r: usize,
    pub s: usize,
    pub eps: Rat,
    pub rmode: RankMode,
    pub smode: RankMode,
}

impl TwoSourceClaim {
    pub fn lossless(r: usize, s: usize) -> TwoSourceClaim {
        TwoSourceClaim { r, s, eps: Rat::new(0, 1), rmode: RankMode::Le, smode: RankMode::Le }
    }

    pub fn describe(&self) -> String {
        format!(
            "two-source(r={}{}, s={}{}, eps={})",
            self.r,
            if self.rmode == RankMode::Le { "<=" } else { "" },
            self.s,
            if self.smode == RankMode::Le { "<=" } else { "" },
            self.eps
        )
    }
}

/// A bilinear condenser f(v, w) = E (v (x) w), stored as the t x (n*m)
/// matrix E together with its claimed properties (the first claim is
/// primary).
#[derive(Clone, Debug)]
pub struct BilinearCondenser {
    pub field: Field,
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub e: FMatrix,
    pub claims: Vec<TwoSourceClaim>,
}

impl BilinearCondenser {
    /// The k-th slice E_k in F^{n x m}: row k of E under the fixed reshape.
    pub fn slice(&self, k: usize) -> FMatrix {
        FMatrix::from_fn(&self.field, self.n, self.m, |a, b| self.e.get(k, a * self.m + b))
    }

    /// f(v, w) coordinate-wise: the i-th output is v^tr E_i w.
    pub fn eval(&self, v: &[FElem], w: &[FElem]) -> Result<Vec<FElem>> {
        if v.len() != self.n || w.len() != self.m {
            return Err(Error::Dimension(format!(
                "expected vectors of lengths {} and {}, got {} and {}",
                self.n,
                self.m,
                v.len(),
                w.len()
            )));
        }
        let f = &self.field;
        let mut out = Vec::with_capacity(self.t);
        for k in 0..self.t {
            let mut acc = FElem::ZERO;
            for (a, &va) in v.iter().enumerate() {
                if va.is_zero() {
                    continue;
                }
                for (b, &wb) in w.iter().enumerate() {
                    acc = f.add(acc, f.mul(f.mul(va, self.e.get(k, a * self.m + b)), wb));
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// The same map computed as E * (v (x) w); the two routes agree.
    pub fn eval_via_tensor(&self, v: &[FElem], w: &[FElem]) -> Result<Vec<FElem>> {
        if v.len() != self.n || w.len() != self.m {
            return Err(Error::Dimension("vector length mismatch".into()));
        }
        let f = &self.field;
        let vm = FMatrix::from_fn(f, self.n, 1, |i, _| v[i]);
        let wm = FMatrix::from_fn(f, self.m, 1, |i, _| w[i]);
        let prod = self.e.mul(&vm.tensor(&wm)?);
        Ok((0..self.t).map(|k| prod.get(k, 0)).collect())
    }

    pub fn describe(&self) -> String {
        let claim = self
            .claims
            .first()
            .map(|c| c.describe())
            .unwrap_or_else(|| "no claim".into());
        format!("bilinear n={} m={} t={} {}", self.n, self.m, self.t, claim)
    }
}

/// A basis of a linear subspace of F^{n x m} with a claimed minimum rank
/// distance. The zero code carries distance min(n, m) + 1 by convention.
#[derive(Clone, Debug)]
pub struct RankMetricCode {
    pub field: Field,
    pub n: usize,
    pub m: usize,
    pub basis: Vec<FMatrix>,
    pub dist: usize,
}

impl RankMetricCode {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Canonicalizes the basis: RREF of the flattened span. Keeps span
    /// equality decidable by matrix comparison.
    fn canonicalize(field: &Field, n: usize, m: usize, raw: Vec<FMatrix>, dist: usize) -> RankMetricCode {
        let dim = raw.len();
        let mut stacked = FMatrix::zeros(field, dim, n * m);
        for (i, cw) in raw.iter().enumerate() {
            for a in 0..n {
                for b in 0..m {
                    stacked.set(i, a * m + b, cw.get(a, b));
                }
            }
        }
        let rref = stacked.row_basis();
        assert_eq!(rref.rows(), dim, "code basis must be linearly independent");
        let basis = (0..dim)
            .map(|i| FMatrix::from_fn(field, n, m, |a, b| rref.get(i, a * m + b)))
            .collect();
        RankMetricCode { field: field.clone(), n, m, basis, dist }
    }

    /// Flattened dim x nm matrix whose rows span the code.
    pub fn span_matrix(&self) -> FMatrix {
        let mut stacked = FMatrix::zeros(&self.field, self.dim(), self.n * self.m);
        for (i, cw) in self.basis.iter().enumerate() {
            for a in 0..self.n {
                for b in 0..self.m {
                    stacked.set(i, a * self.m + b, cw.get(a, b));
                }
            }
        }
        stacked
    }
}

/// Standard inner product of matrices as vectors; equals tr(M^tr N).
pub fn matrix_inner_product(a: &FMatrix, b: &FMatrix) -> FElem {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    let f = a.field();
    let mut acc = FElem::ZERO;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            acc = f.add(acc, f.mul(a.get(i, j), b.get(i, j)));
        }
    }
    acc
}

/// The t >= m - eps*s output lower bound every bilinear (1, s, eps)
/// condenser must satisfy.
pub fn output_lower_bound(m: usize, s: usize, eps: Rat) -> Rat {
    Rat::new(m as i64, 1) - eps * Rat::new(s as i64, 1)
}

/// Roth's algebraically-closed-field bound t >= r(2n - r); a report line
/// only, never testable over finite fields.
pub fn algebraically_closed_bound(n: usize, r: usize) -> usize {
    r * (2 * n - r)
}

/// Lossless condenser by condensing each source with a folded Wronskian and
/// tensoring: rows indexed by (i, j, alpha) for i in 0..r, j in 0..s, alpha
/// over r(n-r)+s(m-s)+1 evaluation points; the row at coefficient (a, b) is
/// (omega^i alpha)^a (omega^j alpha)^b. Output size rs(r(n-r)+s(m-s)+1).
pub fn condense_tensor_lossless(
    field: &Field,
    n: usize,
    m: usize,
    r: usize,
    s: usize,
) -> Result<BilinearCondenser> {
    check_source_params(n, m, r, s)?;
    let omega = field.find_element_of_order(n.max(m) as u64)?;
    let points = r * (n - r) + s * (m - s) + 1;
    if (field.q() - 1) < points as u64 {
        return Err(Error::InvalidParams(format!(
            "need {points} distinct nonzero evaluation points, field has {}",
            field.q() - 1
        )));
    }
    let t = r * s * points;
    let mut e = FMatrix::zeros(field, t, n * m);
    let mut row = 0;
    for i in 0..r {
        for j in 0..s {
            for alpha_idx in 1..=points as u64 {
                let alpha = field.elem(alpha_idx);
                let x = field.mul(field.pow(omega, i as u64), alpha);
                let y = field.mul(field.pow(omega, j as u64), alpha);
                fill_evaluation_row(field, &mut e, row, n, m, x, y);
                row += 1;
            }
        }
    }
    Ok(BilinearCondenser {
        field: field.clone(),
        n,
        m,
        t,
        e,
        claims: vec![TwoSourceClaim::lossless(r, s)],
    })
}

/// Pruned lossless condenser: rows indexed by (k, beta) for -r < k < s and
/// beta over the first n+m-1 nonzero field elements; the row at (a, b) is
/// beta^{a+b} omega^{kb}. Output size (r+s-1)(n+m-1).
pub fn pruned_lossless(
    field: &Field,
    n: usize,
    m: usize,
    r: usize,
    s: usize,
) -> Result<BilinearCondenser> {
    check_source_params(n, m, r, s)?;
    let omega = field.find_element_of_order(n.max(m) as u64)?;
    let points = n + m - 1;
    if (field.q() - 1) < points as u64 {
        return Err(Error::InvalidParams(format!(
            "need {points} distinct nonzero evaluation points, field has {}",
            field.q() - 1
        )));
    }
    let omega_inv = field.inv(omega)?;
    let t = (r + s - 1) * points;
    let mut e = FMatrix::zeros(field, t, n * m);
    let mut row = 0;
    for k in -(r as i64 - 1)..=(s as i64 - 1) {
        let omega_k = if k >= 0 {
            field.pow(omega, k as u64)
        } else {
            field.pow(omega_inv, (-k) as u64)
        };
        for beta_idx in 1..=points as u64 {
            let beta = field.elem(beta_idx);
            let y = field.mul(omega_k, beta);
            fill_evaluation_row(field, &mut e, row, n, m, beta, y);
            row += 1;
        }
    }
    Ok(BilinearCondenser {
        field: field.clone(),
        n,
        m,
        t,
        e,
        claims: vec![TwoSourceClaim::lossless(r, s)],
    })
}

/// One evaluation row: entry at column a*m+b is x^a y^b.
fn fill_evaluation_row(field: &Field, e: &mut FMatrix, row: usize, n: usize, m: usize, x: FElem, y: FElem) {
    let mut xa = field.one();
    for a in 0..n {
        let mut val = xa;
        for b in 0..m {
            e.set(row, a * m + b, val);
            if b + 1 < m {
                val = field.mul(val, y);
            }
        }
        if a + 1 < n {
            xa = field.mul(xa, x);
        }
    }
}

fn check_source_params(n: usize, m: usize, r: usize, s: usize) -> Result<()> {
    if r < 1 || r > n || s < 1 || s > m {
        return Err(Error::InvalidParams(format!(
            "need n >= r >= 1 and m >= s >= 1, got n={n} r={r} m={m} s={s}"
        )));
    }
    Ok(())
}

/// Gabidulin code in F_q^{n x m}: maps x -> beta x^{q^i} for i <= m-r-1,
/// expressed in the polynomial basis of F_{q^m}, restricted (for n < m) to
/// the subcode whose last m-n rows vanish and embedded as n x m. Dimension
/// m(n-r), claimed distance r+1.
pub fn gabidulin_code(q: u64, m: usize, n: usize, r: usize) -> Result<RankMetricCode> {
    if !(m >= n && n >= r) {
        return Err(Error::InvalidParams(format!("need m >= n >= r >= 0, got m={m} n={n} r={r}")));
    }
    if m < 1 {
        return Err(Error::InvalidParams("need m >= 1".into()));
    }
    let base = Field::new(q, 1)?;
    let ext = Field::new(q, m as u32)?;
    if r == n {
        return Ok(RankMetricCode { field: base, n, m, basis: Vec::new(), dist: n.min(m) + 1 });
    }
    let z = ext.elem(q); // the polynomial-basis generator
    // full m x m code: maps x -> z^c x^{q^i} for 0 <= i <= m-r-1, 0 <= c < m
    let mut full_basis = Vec::with_capacity((m - r) * m);
    for i in 0..=(m - 1 - r) {
        let qi = (q as u128).pow(i as u32) as u64;
        for c in 0..m {
            let beta = ext.pow(z, c as u64);
            let mut mat = FMatrix::zeros(&base, m, m);
            for j in 0..m {
                let basis_elt = ext.pow(z, j as u64);
                let image = ext.mul(beta, ext.pow(basis_elt, qi));
                for (row, &coeff) in ext.phi(image)?.iter().enumerate() {
                    mat.set(row, j, coeff);
                }
            }
            full_basis.push(mat);
        }
    }
    let raw = if n == m {
        full_basis
    } else {
        restrict_last_rows_zero(&base, &full_basis, m, m, m - n)?
    };
    let truncated: Vec<FMatrix> = raw
        .into_iter()
        .map(|cw| FMatrix::from_fn(&base, n, m, |a, b| cw.get(a, b)))
        .collect();
    let code = RankMetricCode::canonicalize(&base, n, m, truncated, r + 1);
    assert_eq!(code.dim(), m * (n - r), "Gabidulin dimension must be m(n-r)");
    Ok(code)
}

/// Basis of the subspace of span{basis} whose last `zero_rows` rows vanish.
fn restrict_last_rows_zero(
    field: &Field,
    basis: &[FMatrix],
    rows: usize,
    cols: usize,
    zero_rows: usize,
) -> Result<Vec<FMatrix>> {
    let constraints = zero_rows * cols;
    let mut c = FMatrix::zeros(field, constraints, basis.len());
    for (l, mat) in basis.iter().enumerate() {
        let mut idx = 0;
        for a in rows - zero_rows..rows {
            for b in 0..cols {
                c.set(idx, l, mat.get(a, b));
                idx += 1;
            }
        }
    }
    let kernel = c.kernel();
    let mut out = Vec::with_capacity(kernel.cols());
    for col in 0..kernel.cols() {
        let mut cw = FMatrix::zeros(field, rows, cols);
        for (l, mat) in basis.iter().enumerate() {
            let coeff = kernel.get(l, col);
            if coeff.is_zero() {
                continue;
            }
            cw = cw.add(&mat.scale(coeff));
        }
        out.push(cw);
    }
    Ok(out)
}

/// Roth code in F^{n x m}: every anti-diagonal is constrained to the kernel
/// of the r-row Vandermonde matrix over the first (diagonal length) field
/// elements. Dimension (n-r)(m-r), claimed distance r+1. Requires |F| >= n.
pub fn roth_code(field: &Field, n: usize, m: usize, r: usize) -> Result<RankMetricCode> {
    if !(m >= n && n >= r) {
        return Err(Error::InvalidParams(format!("need m >= n >= r >= 0, got m={m} n={n} r={r}")));
    }
    if n < 1 {
        return Err(Error::InvalidParams("need n >= 1".into()));
    }
    if (field.q() as usize) < n {
        return Err(Error::InvalidParams(format!(
            "Roth code needs |F| >= n, got q={} < n={n}",
            field.q()
        )));
    }
    let mut raw = Vec::new();
    for k in 0..n + m - 1 {
        let i_lo = k.saturating_sub(m - 1);
        let i_hi = k.min(n - 1);
        let positions: Vec<(usize, usize)> = (i_lo..=i_hi).map(|i| (i, k - i)).collect();
        let len = positions.len();
        if len <= r {
            continue; // C_len = {0} on short diagonals
        }
        // r-row Vandermonde parity matrix over the first `len` field elements
        let vand = FMatrix::from_fn(field, r, len, |i, j| field.pow(field.elem(j as u64), i as u64));
        let kernel = vand.kernel();
        debug_assert_eq!(kernel.cols(), len - r);
        for col in 0..kernel.cols() {
            let mut cw = FMatrix::zeros(field, n, m);
            for (idx, &(a, b)) in positions.iter().enumerate() {
                cw.set(a, b, kernel.get(idx, col));
            }
            raw.push(cw);
        }
    }
    let code = RankMetricCode::canonicalize(field, n, m, raw, r + 1);
    assert_eq!(code.dim(), (n - r) * (m - r), "Roth dimension must be (n-r)(m-r)");
    Ok(code)
}

/// Parity-check view: the rows of E are a basis of the dual space of the
/// code, so E is a bilinear lossless (d, m, 0)- and (n, d, 0)-condenser for
/// d = distance - 1. Rejects distance-1 codes (degenerate claim).
pub fn code_to_condenser(c: &RankMetricCode) -> Result<BilinearCondenser> {
    let d = c.dist.checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| {
        Error::ClaimKind("distance below 2 yields a degenerate condenser claim".into())
    })?;
    let span = c.span_matrix();
    let e = span.kernel().transpose().rref();
    let t = c.n * c.m - c.dim();
    debug_assert_eq!(e.rows(), t);
    Ok(BilinearCondenser {
        field: c.field.clone(),
        n: c.n,
        m: c.m,
        t,
        e,
        claims: vec![
            TwoSourceClaim::lossless(d.min(c.n), c.m),
            TwoSourceClaim::lossless(c.n, d.min(c.m)),
        ],
    })
}

/// Kernel view: the matrices in ker E form a linear rank-metric code with
/// distance min(r, s) + 1. Rejects lossy inputs.
pub fn condenser_to_code(b: &BilinearCondenser) -> Result<RankMetricCode> {
    let claim = b
        .claims
        .first()
        .ok_or_else(|| Error::ClaimKind("condenser carries no claim".into()))?;
    if claim.eps != Rat::new(0, 1) {
        return Err(Error::ClaimKind("code equivalence is stated for lossless claims".into()));
    }
    let r = claim.r.min(claim.s);
    let kernel = b.e.kernel();
    let dist = if kernel.cols() == 0 { b.n.min(b.m) + 1 } else { r + 1 };
    let raw: Vec<FMatrix> = (0..kernel.cols())
        .map(|col| FMatrix::from_fn(&b.field, b.n, b.m, |a, bb| kernel.get(a * b.m + bb, col)))
        .collect();
    Ok(RankMetricCode::canonicalize(&b.field, b.n, b.m, raw, dist))
}

/// Exact minimum rank over all nonzero codewords by full enumeration; the
/// zero code returns min(n, m) + 1 by convention. Errors when q^dim exceeds
/// the budget.
pub fn min_rank_distance(c: &RankMetricCode, budget: u128) -> Result<usize> {
    let q = c.field.q();
    let dim = c.dim();
    if dim == 0 {
        return Ok(c.n.min(c.m) + 1);
    }
    let total = (q as u128)
        .checked_pow(dim as u32)
        .filter(|&t| t <= budget)
        .ok_or(Error::Budget { need: (q as u128).saturating_pow(dim as u32), budget })?;
    let f = &c.field;
    let mut best = c.n.min(c.m) + 1;
    let mut coeffs = vec![0u64; dim];
    for idx in 1..total {
        // odometer step
        let mut pos = 0;
        loop {
            coeffs[pos] += 1;
            if coeffs[pos] < q {
                break;
            }
            coeffs[pos] = 0;
            pos += 1;
        }
        let _ = idx;
        let mut cw = FMatrix::zeros(f, c.n, c.m);
        for (l, &coef) in coeffs.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            cw = cw.add(&c.basis[l].scale(f.elem(coef)));
        }
        best = best.min(cw.rank());
        if best == 1 {
            break; // rank cannot drop further
        }
    }
    Ok(best)
}

/// Lossy outer-inner composition: stacks inner * (Wr_t(alpha) (x)
/// Wr_t(alpha)) over |S| = ceil(2n/(eps(t-r+1))) powers of omega^t. The
/// inner condenser must claim (ceil((1-eps)r), ceil((1-eps)r), eps) on
/// F^t x F^t. Claims (r, r, 1-(1-eps)^3).
pub fn lossy_outer_inner(
    field: &Field,
    n: usize,
    r: usize,
    eps: Rat,
    inner: &BilinearCondenser,
) -> Result<BilinearCondenser> {
    if eps <= Rat::new(0, 1) || eps >= Rat::new(1, 1) {
        return Err(Error::InvalidParams(format!("need 0 < eps < 1, got {eps}")));
    }
    let t = inner.n;
    if inner.m != t {
        return Err(Error::Dimension("inner condenser must act on F^t x F^t".into()));
    }
    if t < r || r < 1 {
        return Err(Error::InvalidParams(format!("need t >= r >= 1, got t={t} r={r}")));
    }
    let needed_rank = rat_ceil((Rat::new(1, 1) - eps) * Rat::new(r as i64, 1)) as usize;
    let claim_ok = inner
        .claims
        .iter()
        .any(|cl| cl.r == needed_rank && cl.s == needed_rank && cl.eps == eps);
    if !claim_ok {
        return Err(Error::ClaimKind(format!(
            "inner condenser must claim ({needed_rank}, {needed_rank}, {eps})"
        )));
    }
    let s_len = rat_ceil(Rat::new(2 * n as i64, 1) / (eps * Rat::new((t - r + 1) as i64, 1))) as usize;
    let omega = field.find_element_of_order((t * s_len) as u64)?;
    let step = field.pow(omega, t as u64);
    let mut blocks: Vec<FMatrix> = Vec::with_capacity(s_len);
    let mut alpha = field.one();
    for j in 0..s_len {
        let w = crate::seeded::folded_wronskian(field, omega, t, n, alpha)?;
        let ww = w.tensor(&w)?;
        blocks.push(inner.e.mul(&ww));
        if j + 1 < s_len {
            alpha = field.mul(alpha, step);
        }
    }
    let mut e = blocks[0].clone();
    for b in &blocks[1..] {
        e = e.vstack(b);
    }
    let one = Rat::new(1, 1);
    let keep = one - eps;
    let out_eps = one - keep * keep * keep;
    Ok(BilinearCondenser {
        field: field.clone(),
        n,
        m: n,
        t: e.rows(),
        e,
        claims: vec![TwoSourceClaim { r, s: r, eps: out_eps, rmode: RankMode::Eq, smode: RankMode::Eq }],
    })
}

/// Seeded random search for a bilinear (r, s, eps)-condenser in
/// F^{t_out x t^2}: samples uniformly, verifies exhaustively, returns the
/// first hit or None once the trial budget runs out.
pub fn inner_condenser_search(
    field: &Field,
    t: usize,
    t_out: usize,
    r: usize,
    s: usize,
    eps: Rat,
    seed: u64,
    budget: u64,
) -> Result<Option<BilinearCondenser>> {
    check_source_params(t, t, r, s)?;
    let needed = rat_ceil((Rat::new(1, 1) - eps) * Rat::new((r * s) as i64, 1));
    if t_out == 0 && needed >= 1 {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = field.q();
    for _ in 0..budget {
        let e = FMatrix::from_fn(field, t_out, t * t, |_, _| field.elem(rng.gen_range(0..q)));
        let candidate = BilinearCondenser {
            field: field.clone(),
            n: t,
            m: t,
            t: t_out,
            e,
            claims: vec![TwoSourceClaim { r, s, eps, rmode: RankMode::Eq, smode: RankMode::Eq }],
        };
        let report = crate::verify::verify_two_source(&candidate, &crate::verify::VerifyOptions::default())?;
        if report.pass {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}
