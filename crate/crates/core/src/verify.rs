//! Ground-truth brute-force verifiers for every claimed property.
//!
//! Exhaustive runs enumerate canonical RREF subspace representatives, shard
//! the enumeration range across worker threads, and combine shard results by
//! max statistic (ties broken by the smaller enumeration index), so reports
//! are identical for every shard count. Sampled mode is opt-in and stamps the
//! seed into the report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expander::DimExpander;
use crate::gf::Field;
use crate::linalg::{count_subspaces, FMatrix, SubspaceIter};
use crate::seeded::{rat_ceil, rat_floor, CondenserClaim, RankMode, Rat, SeededCondenser, SubspaceDesign};
use crate::twosource::{min_rank_distance, BilinearCondenser, RankMetricCode, TwoSourceClaim};

/// Default exhaustive work budget (enumerated subspaces / pairs).
pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { seed: u64, count: u64 },
}

impl VerifyMode {
    fn describe(self) -> String {
        match self {
            VerifyMode::Exhaustive => "exhaustive".into(),
            VerifyMode::Sampled { seed, count } => format!("sampled(seed={seed},count={count})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub mode: VerifyMode,
    pub budget: u128,
    pub jobs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        let jobs = std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1).min(8);
        VerifyOptions { mode: VerifyMode::Exhaustive, budget: DEFAULT_BUDGET, jobs }
    }
}

impl VerifyOptions {
    pub fn exhaustive() -> Self {
        VerifyOptions::default()
    }

    pub fn sampled(seed: u64, count: u64) -> Self {
        VerifyOptions { mode: VerifyMode::Sampled { seed, count }, ..VerifyOptions::default() }
    }
}

/// A concrete object witnessing the worst statistic (for failed runs it
/// re-checks as failing in isolation).
#[derive(Clone, Debug)]
pub struct Witness {
    pub label: String,
    pub matrices: Vec<FMatrix>,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub object: String,
    pub property: String,
    pub mode: String,
    pub worst: i64,
    pub threshold: i64,
    pub pass: bool,
    pub witness: Option<Witness>,
}

impl VerifyReport {
    pub fn to_json(&self) -> Value {
        let witness = self.witness.as_ref().map(|w| {
            json!({
                "label": w.label,
                "matrices": w.matrices.iter().map(|m| m.row_strings()).collect::<Vec<_>>(),
            })
        });
        json!({
            "property": self.property,
            "object": self.object,
            "mode": self.mode,
            "worst": self.worst,
            "threshold": self.threshold,
            "pass": self.pass,
            "witness": witness,
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "property={} mode={} worst={} threshold={} pass={}",
            self.property, self.mode, self.worst, self.threshold, self.pass
        );
        if let Some(w) = &self.witness {
            out.push_str(&format!("\nwitness: {}", w.label));
            for m in &w.matrices {
                for row in m.row_strings() {
                    out.push_str(&format!("\n  [{row}]"));
                }
            }
        }
        out
    }
}

/// Uniformly random RREF basis of an r-dimensional subspace of F^n.
pub fn random_subspace(field: &Field, n: usize, r: usize, rng: &mut impl Rng) -> FMatrix {
    loop {
        let m = random_matrix(field, r, n, rng);
        if m.rank() == r {
            return m.rref();
        }
    }
}

pub fn random_matrix(field: &Field, rows: usize, cols: usize, rng: &mut impl Rng) -> FMatrix {
    let q = field.q();
    FMatrix::from_fn(field, rows, cols, |_, _| field.elem(rng.gen_range(0..q)))
}

/// Outcome of scanning one enumeration: the worst statistic, the enumeration
/// index where it was first attained, and that witness.
struct ScanOutcome {
    worst: i64,
    index: u128,
    witness: Option<Witness>,
}

impl ScanOutcome {
    fn empty() -> ScanOutcome {
        ScanOutcome { worst: i64::MIN, index: u128::MAX, witness: None }
    }

    fn absorb(&mut self, other: ScanOutcome) {
        if other.worst > self.worst || (other.worst == self.worst && other.index < self.index) {
            *self = other;
        }
    }
}

/// Sharded exhaustive max-scan over the canonical subspace enumeration.
/// `stat` maps each RREF basis to (statistic, optional second witness
/// matrix).
fn scan_subspaces<F>(field: &Field, n: usize, r: usize, jobs: usize, label: &str, stat: F) -> ScanOutcome
where
    F: Fn(&FMatrix) -> (i64, Option<FMatrix>) + Sync,
{
    let total = count_subspaces(field, n, r).unwrap_or(0);
    if total == 0 {
        return ScanOutcome::empty();
    }
    let jobs = jobs.max(1).min(usize::try_from(total).unwrap_or(usize::MAX).max(1));
    let chunk = total / jobs as u128;
    let results: Vec<ScanOutcome> = std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(jobs);
        for shard in 0..jobs {
            let start = shard as u128 * chunk;
            let end = if shard + 1 == jobs { total } else { start + chunk };
            let statf = &stat;
            handles.push(scope.spawn(move || {
                let mut local = ScanOutcome::empty();
                let mut index = start;
                for basis in SubspaceIter::range(field, n, r, start, end) {
                    let (value, extra) = statf(&basis);
                    if value > local.worst {
                        let mut mats = vec![basis];
                        if let Some(extra) = extra {
                            mats.push(extra);
                        }
                        local = ScanOutcome {
                            worst: value,
                            index,
                            witness: Some(Witness { label: label.to_string(), matrices: mats }),
                        };
                    }
                    index += 1;
                }
                local
            }));
        }
        handles.into_iter().map(|h| h.join().expect("verifier shard panicked")).collect()
    });
    let mut combined = ScanOutcome::empty();
    for r in results {
        combined.absorb(r);
    }
    combined
}

/// Sampled max-scan: `count` random subspaces, single-threaded, seed-stamped.
fn sample_subspaces<F>(
    field: &Field,
    n: usize,
    r: usize,
    seed: u64,
    count: u64,
    label: &str,
    stat: F,
) -> ScanOutcome
where
    F: Fn(&FMatrix) -> (i64, Option<FMatrix>),
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ScanOutcome::empty();
    for i in 0..count {
        let basis = random_subspace(field, n, r, &mut rng);
        let (value, extra) = stat(&basis);
        if value > out.worst {
            let mut mats = vec![basis];
            if let Some(extra) = extra {
                mats.push(extra);
            }
            out = ScanOutcome {
                worst: value,
                index: i as u128,
                witness: Some(Witness { label: label.to_string(), matrices: mats }),
            };
        }
    }
    out
}

fn budget_check(need: u128, opts: &VerifyOptions) -> Result<()> {
    if matches!(opts.mode, VerifyMode::Exhaustive) && need > opts.budget {
        return Err(Error::Budget { need, budget: opts.budget });
    }
    Ok(())
}

fn run_dims<F>(
    field: &Field,
    n: usize,
    dims: &[usize],
    opts: &VerifyOptions,
    label: &str,
    stat_for_dim: F,
) -> ScanOutcome
where
    F: Fn(usize) -> Box<dyn Fn(&FMatrix) -> (i64, Option<FMatrix>) + Sync + Send>,
{
    let mut outcome = ScanOutcome::empty();
    for &s in dims {
        let stat = stat_for_dim(s);
        let dim_outcome = match opts.mode {
            VerifyMode::Exhaustive => scan_subspaces(field, n, s, opts.jobs, label, &*stat),
            VerifyMode::Sampled { seed, count } => {
                sample_subspaces(field, n, s, seed.wrapping_add(s as u64), count, label, &*stat)
            }
        };
        // dims are checked in order; earlier dims win ties
        if dim_outcome.worst > outcome.worst {
            outcome = dim_outcome;
        }
    }
    outcome
}

/// Verifies a seeded condenser claim against the definitions: weak counts
/// rank-dropping maps, strong sums rank deficiencies (pass iff <= floor(L)),
/// lossy requires some map to reach ceil((1-eps)s) for every checked
/// dimension s (pass iff the worst shortfall is 0).
pub fn verify_seeded(c: &SeededCondenser, opts: &VerifyOptions) -> Result<VerifyReport> {
    let object = format!("seeded-condenser n={} t={} count={}", c.n, c.t, c.matrices.len());
    let (dims, threshold): (Vec<usize>, i64) = match &c.claim {
        CondenserClaim::WeakLossless { r, l } | CondenserClaim::StrongLossless { r, l } => {
            (vec![*r], rat_floor(*l))
        }
        CondenserClaim::Lossy { r, mode, .. } => (
            match mode {
                RankMode::Le => (1..=*r).collect(),
                RankMode::Eq => vec![*r],
            },
            0,
        ),
    };
    let mut need: u128 = 0;
    for &s in &dims {
        need = need.saturating_add(count_subspaces(&c.field, c.n, s)?);
    }
    budget_check(need, opts)?;

    let claim = c.claim.clone();
    let matrices = &c.matrices;
    let outcome = run_dims(&c.field, c.n, &dims, opts, "subspace basis (RREF rows)", |s| {
        let claim = claim.clone();
        let mats: Vec<FMatrix> = matrices.clone();
        Box::new(move |basis: &FMatrix| {
            let m = basis.transpose();
            let stat = match &claim {
                CondenserClaim::WeakLossless { .. } => {
                    mats.iter().filter(|e| e.mul(&m).rank() < s).count() as i64
                }
                CondenserClaim::StrongLossless { .. } => {
                    mats.iter().map(|e| (s - e.mul(&m).rank()) as i64).sum()
                }
                CondenserClaim::Lossy { eps, .. } => {
                    let need_rank = rat_ceil((Rat::new(1, 1) - *eps) * Rat::new(s as i64, 1));
                    let mut best = 0i64;
                    for e in &mats {
                        best = best.max(e.mul(&m).rank() as i64);
                        if best >= need_rank {
                            break;
                        }
                    }
                    (need_rank - best).max(0)
                }
            };
            (stat, None)
        })
    });

    finish_report(object, c.claim.describe(), opts, outcome, threshold)
}

/// Verifies a subspace design: intersection dimensions computed as
/// dim H + dim V - rank([H; V]).
pub fn verify_design(d: &SubspaceDesign, opts: &VerifyOptions) -> Result<VerifyReport> {
    let object = format!("subspace-design n={} count={}", d.n, d.subspaces.len());
    let threshold = rat_floor(d.l);
    let need = count_subspaces(&d.field, d.n, d.r)?;
    budget_check(need, opts)?;

    let strong = d.strong;
    let subspaces = d.subspaces.clone();
    let outcome = run_dims(&d.field, d.n, &[d.r], opts, "subspace basis (RREF rows)", |_s| {
        let subspaces = subspaces.clone();
        Box::new(move |basis: &FMatrix| {
            let mut stat = 0i64;
            for h in &subspaces {
                let inter = if h.rows() == 0 {
                    0
                } else {
                    h.rows() + basis.rows() - h.vstack(basis).rank()
                };
                stat += if strong { inter as i64 } else { i64::from(inter > 0) };
            }
            (stat, None)
        })
    });

    finish_report(object, d.describe(), opts, outcome, threshold)
}

/// Verifies dimension expansion: every subspace of dimension 1..=floor(eps n)
/// must satisfy dim sum A_i(V) >= ceil(alpha * dim V).
pub fn verify_expander(x: &DimExpander, opts: &VerifyOptions) -> Result<VerifyReport> {
    let object = format!("dim-expander n={} degree={}", x.n, x.degree());
    let max_dim = rat_floor(x.eps * Rat::new(x.n as i64, 1)).max(0) as usize;
    let dims: Vec<usize> = (1..=max_dim).collect();
    let mut need: u128 = 0;
    for &s in &dims {
        need = need.saturating_add(count_subspaces(&x.field, x.n, s)?);
    }
    budget_check(need, opts)?;

    let alpha = x.alpha;
    let maps = x.maps.clone();
    let outcome = run_dims(&x.field, x.n, &dims, opts, "subspace basis (RREF rows)", |s| {
        let maps = maps.clone();
        Box::new(move |basis: &FMatrix| {
            let need_rank = rat_ceil(alpha * Rat::new(s as i64, 1));
            let m = basis.transpose();
            let mut stacked: Option<FMatrix> = None;
            let mut achieved = 0i64;
            for a in &maps {
                let image = a.mul(&m);
                stacked = Some(match stacked {
                    None => image,
                    Some(prev) => prev.hstack(&image),
                });
                achieved = stacked.as_ref().unwrap().rank() as i64;
                if achieved >= need_rank {
                    break;
                }
            }
            ((need_rank - achieved).max(0), None)
        })
    });

    finish_report(object, x.describe(), opts, outcome, 0)
}

/// Verifies the primary claim of a bilinear condenser.
pub fn verify_two_source(b: &BilinearCondenser, opts: &VerifyOptions) -> Result<VerifyReport> {
    let claim = b
        .claims
        .first()
        .ok_or_else(|| Error::ClaimKind("condenser carries no claim".into()))?
        .clone();
    verify_two_source_claim(b, &claim, opts)
}

/// Verifies an explicit claim against a bilinear condenser: every canonical
/// pair (A, B) of the claimed ranks (and all smaller ranks in <= modes) must
/// give rank E(A (x) B) >= ceil((1-eps) ra sb).
pub fn verify_two_source_claim(
    b: &BilinearCondenser,
    claim: &TwoSourceClaim,
    opts: &VerifyOptions,
) -> Result<VerifyReport> {
    let object = format!("bilinear-condenser n={} m={} t={}", b.n, b.m, b.t);
    let r_dims: Vec<usize> = match claim.rmode {
        RankMode::Le => (1..=claim.r).collect(),
        RankMode::Eq => vec![claim.r],
    };
    let s_dims: Vec<usize> = match claim.smode {
        RankMode::Le => (1..=claim.s).collect(),
        RankMode::Eq => vec![claim.s],
    };
    let mut need: u128 = 0;
    for &ra in &r_dims {
        for &sb in &s_dims {
            let pairs = count_subspaces(&b.field, b.n, ra)?
                .saturating_mul(count_subspaces(&b.field, b.m, sb)?);
            need = need.saturating_add(pairs);
        }
    }
    budget_check(need, opts)?;

    let mut outcome = ScanOutcome::empty();
    for &ra in &r_dims {
        for &sb in &s_dims {
            let need_rank = rat_ceil((Rat::new(1, 1) - claim.eps) * Rat::new((ra * sb) as i64, 1));
            let e = &b.e;
            let field = b.field.clone();
            let m = b.m;
            let stat = move |a_basis: &FMatrix| -> (i64, Option<FMatrix>) {
                let a_mat = a_basis.transpose();
                let mut worst = i64::MIN;
                let mut worst_b: Option<FMatrix> = None;
                for b_basis in SubspaceIter::new(&field, m, sb) {
                    let b_mat = b_basis.transpose();
                    let tensor = a_mat.tensor(&b_mat).expect("same field");
                    let rank = e.mul(&tensor).rank() as i64;
                    let shortfall = (need_rank - rank).max(0);
                    if shortfall > worst {
                        worst = shortfall;
                        worst_b = Some(b_basis);
                    }
                }
                (worst.max(0), worst_b)
            };
            let pair_outcome = match opts.mode {
                VerifyMode::Exhaustive => {
                    scan_subspaces(&b.field, b.n, ra, opts.jobs, "pair (A basis; B basis)", stat)
                }
                VerifyMode::Sampled { seed, count } => sample_subspaces(
                    &b.field,
                    b.n,
                    ra,
                    seed.wrapping_add((ra * 31 + sb) as u64),
                    count,
                    "pair (A basis; B basis)",
                    stat,
                ),
            };
            outcome.absorb(pair_outcome);
        }
    }

    finish_report(object, claim.describe(), opts, outcome, 0)
}

/// Verifies a rank-metric code's claimed distance by exact minimum-rank
/// enumeration.
pub fn verify_code(c: &RankMetricCode, opts: &VerifyOptions) -> Result<VerifyReport> {
    let object = format!("rank-metric-code n={} m={} dim={}", c.n, c.m, c.dim());
    let actual = min_rank_distance(c, opts.budget)?;
    let worst = (c.dist as i64 - actual as i64).max(0);
    let witness = if worst > 0 {
        find_codeword_of_rank(c, actual).map(|cw| Witness {
            label: format!("codeword of rank {actual}"),
            matrices: vec![cw],
        })
    } else {
        None
    };
    Ok(VerifyReport {
        object,
        property: format!("min-rank-distance >= {}", c.dist),
        mode: VerifyMode::Exhaustive.describe(),
        worst,
        threshold: 0,
        pass: worst == 0,
        witness,
    })
}

fn find_codeword_of_rank(c: &RankMetricCode, target: usize) -> Option<FMatrix> {
    let q = c.field.q();
    let dim = c.dim();
    let total = (q as u128).checked_pow(dim as u32)?;
    let mut coeffs = vec![0u64; dim];
    for _ in 1..total {
        let mut pos = 0;
        loop {
            coeffs[pos] += 1;
            if coeffs[pos] < q {
                break;
            }
            coeffs[pos] = 0;
            pos += 1;
        }
        let mut cw = FMatrix::zeros(&c.field, c.n, c.m);
        for (l, &coef) in coeffs.iter().enumerate() {
            if coef != 0 {
                cw = cw.add(&c.basis[l].scale(c.field.elem(coef)));
            }
        }
        if cw.rank() == target {
            return Some(cw);
        }
    }
    None
}

fn finish_report(
    object: String,
    property: String,
    opts: &VerifyOptions,
    outcome: ScanOutcome,
    threshold: i64,
) -> Result<VerifyReport> {
    let worst = if outcome.worst == i64::MIN { 0 } else { outcome.worst };
    let pass = worst <= threshold;
    Ok(VerifyReport {
        object,
        property,
        mode: opts.mode.describe(),
        worst,
        threshold,
        pass,
        witness: if pass { None } else { outcome.witness },
    })
}

/// The separation family: a brute-force-found (2, 1/2)-lossy condenser on
/// F^3 composed with the projection F^4 -> F^3. It passes (3, 2/3)
/// verification and fails (1, delta) for every delta < 1, and the only
/// failing line is the projection kernel (the two found maps are kept until
/// their kernels intersect trivially, so nothing inside F^3 is missed by
/// both).
pub fn separation_family(field: &Field) -> Result<SeededCondenser> {
    let q = field.q();
    let total = q.pow(6);
    let passes = |e: &FMatrix| {
        // exhaustive (2, 1/2)-lossy check over all dim-2 subspaces of F^3
        SubspaceIter::new(field, 3, 2).all(|basis| e.mul(&basis.transpose()).rank() >= 1)
    };
    let mut first: Option<FMatrix> = None;
    let mut second: Option<FMatrix> = None;
    for idx in 0..total {
        let e = FMatrix::from_fn(field, 2, 3, |i, j| {
            field.elem(idx / q.pow((i * 3 + j) as u32) % q)
        });
        if !passes(&e) {
            continue;
        }
        match &first {
            None => first = Some(e),
            Some(f) => {
                let joint = f.vstack(&e);
                if joint.kernel().cols() == 0 {
                    second = Some(e);
                    break;
                }
            }
        }
    }
    let (ea, eb) = match (first, second) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidParams("no (2,1/2)-lossy pair on F^3 exists".into())),
    };
    // projection F^4 -> F^3 onto the first three coordinates
    let mut p = FMatrix::zeros(field, 3, 4);
    for i in 0..3 {
        p.set(i, i, crate::gf::FElem::ONE);
    }
    Ok(SeededCondenser {
        field: field.clone(),
        n: 4,
        t: 2,
        matrices: vec![ea.mul(&p), eb.mul(&p)],
        claim: CondenserClaim::Lossy { r: 3, eps: Rat::new(2, 3), mode: RankMode::Eq },
    })
}
