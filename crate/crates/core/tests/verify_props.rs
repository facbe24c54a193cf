//! Verifier-level properties: witness soundness, report determinism across
//! modes, file/memory report agreement, and Monte-Carlo behaviour at the
//! existential threshold.

use rankforge_core::bounds::bound_dim_expander;
use rankforge_core::expander::DimExpander;
use rankforge_core::io;
use rankforge_core::montecarlo::{montecarlo, RandomKind};
use rankforge_core::seeded::{lossless_collection, lossy_collection, CondenserClaim, RankMode, Rat};
use rankforge_core::twosource::{BilinearCondenser, TwoSourceClaim};
use rankforge_core::verify::{
    verify_expander, verify_seeded, verify_two_source, VerifyOptions,
};
use rankforge_core::{FMatrix, Field, SeededCondenser};

#[test]
fn lossy_fail_witness_rechecks_as_failing() {
    let f3 = Field::new(3, 1).unwrap();
    // one rank-1 map cannot condense every line of F^3
    let e = FMatrix::from_rows(&f3, &[&[1, 0, 0], &[0, 0, 0]]);
    let c = SeededCondenser {
        field: f3.clone(),
        n: 3,
        t: 2,
        matrices: vec![e.clone()],
        claim: CondenserClaim::Lossy { r: 1, eps: Rat::new(1, 2), mode: RankMode::Eq },
    };
    let report = verify_seeded(&c, &VerifyOptions::default()).unwrap();
    assert!(!report.pass);
    let witness = report.witness.unwrap();
    let basis = &witness.matrices[0];
    // recheck in isolation: the single map drops the witness to rank 0 < 1
    assert_eq!(e.mul(&basis.transpose()).rank(), 0);
}

#[test]
fn expander_fail_witness_rechecks_as_failing() {
    let f3 = Field::new(3, 1).unwrap();
    let maps = vec![FMatrix::zeros(&f3, 3, 3), FMatrix::identity(&f3, 3)];
    let x = DimExpander { field: f3.clone(), n: 3, maps: maps.clone(), eps: Rat::new(1, 3), alpha: Rat::new(2, 1) };
    let report = verify_expander(&x, &VerifyOptions::default()).unwrap();
    assert!(!report.pass);
    let witness = report.witness.unwrap();
    let basis = witness.matrices[0].transpose();
    let stacked = maps[0].mul(&basis).hstack(&maps[1].mul(&basis));
    assert!(stacked.rank() < 2, "witness must re-check as failing");
}

#[test]
fn two_source_fail_witness_rechecks_as_failing() {
    let f2 = Field::new(2, 1).unwrap();
    let b = BilinearCondenser {
        field: f2.clone(),
        n: 2,
        m: 2,
        t: 1,
        e: FMatrix::from_rows(&f2, &[&[1, 0, 0, 0]]),
        claims: vec![TwoSourceClaim { r: 1, s: 1, eps: Rat::new(0, 1), rmode: RankMode::Eq, smode: RankMode::Eq }],
    };
    let report = verify_two_source(&b, &VerifyOptions::default()).unwrap();
    assert!(!report.pass);
    let witness = report.witness.unwrap();
    assert_eq!(witness.matrices.len(), 2);
    let a = witness.matrices[0].transpose();
    let bb = witness.matrices[1].transpose();
    let rank = b.e.mul(&a.tensor(&bb).unwrap()).rank();
    assert_eq!(rank, 0, "witness pair must re-check as failing");
}

#[test]
fn file_and_memory_reports_agree_bit_for_bit() {
    let f13 = Field::new(13, 1).unwrap();
    let c = lossless_collection(&f13, 5, 3, 2).unwrap();
    let opts = VerifyOptions::default();
    let mem = verify_seeded(&c, &opts).unwrap();
    let text = io::collection_to_string(&c);
    let back = io::collection_from_string(&text).unwrap();
    let file = verify_seeded(&back, &opts).unwrap();
    assert_eq!(mem.render_text(), file.render_text());
    assert_eq!(mem.to_json(), file.to_json());
}

#[test]
fn lossy_vs_strong_view_of_the_same_collection() {
    // a lossy claim with eps = "all deficiencies allowed" on the strong
    // collection must also pass: every subspace keeps ceil((1-eps)s) rank
    let f17 = Field::new(17, 1).unwrap();
    let c = lossy_collection(&f17, 5, 3, 2, Rat::new(1, 2), 5).unwrap();
    for jobs in [1usize, 4] {
        let opts = VerifyOptions { jobs, ..VerifyOptions::default() };
        let report = verify_seeded(&c, &opts).unwrap();
        assert!(report.pass);
    }
}

#[test]
fn montecarlo_expander_succeeds_at_the_existential_threshold() {
    // at the threshold degree from the existential bound, random collections
    // expand with visibly positive frequency (tiny q, n)
    let bound = bound_dim_expander(4, Rat::new(2, 1), Rat::new(1, 4)).unwrap();
    assert_eq!(bound.min_integer, 5);
    let f4 = Field::new(2, 2).unwrap();
    let kind = RandomKind::DimExpander {
        n: 4,
        d: bound.min_integer as usize,
        eps: Rat::new(1, 4),
        alpha: Rat::new(2, 1),
    };
    let report = montecarlo(&f4, &kind, 99, 40).unwrap();
    assert!(report.successes > 0, "existence at the threshold must be observable");
}

#[test]
fn montecarlo_lossy_kind_runs() {
    let f4 = Field::new(2, 2).unwrap();
    let kind = RandomKind::LossyCollection {
        n: 4,
        t: 3,
        count: 4,
        r: 2,
        eps: Rat::new(1, 2),
        mode: RankMode::Le,
    };
    let report = montecarlo(&f4, &kind, 5, 30).unwrap();
    assert!(report.successes > 0);
}

#[test]
fn montecarlo_two_source_kind_at_existential_size() {
    // at t comfortably above the existential bound, random bilinear maps
    // condense with positive frequency
    let f3 = Field::new(3, 1).unwrap();
    let kind = RandomKind::TwoSource { n: 3, m: 3, t: 8, r: 1, s: 1, eps: Rat::new(0, 1) };
    let report = montecarlo(&f3, &kind, 17, 30).unwrap();
    assert!(report.successes > 0);
}
