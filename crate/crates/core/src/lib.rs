//! Exact pseudorandom linear algebra over finite fields: seeded
//! lossless/lossy rank condensers, subspace designs, dimension expanders,
//! two-source rank condensers, and rank-metric codes, each paired with a
//! brute-force verifier of its defining property at desk scale, plus
//! calculators for the existential parameter bounds.

pub mod bounds;
pub mod error;
pub mod expander;
pub mod gf;
pub mod io;
pub mod linalg;
pub mod montecarlo;
pub mod poly;
pub mod seeded;
pub mod smallfield;
pub mod twosource;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{FElem, Field};
pub use linalg::{count_subspaces, FMatrix, SubspaceIter};
pub use seeded::{CondenserClaim, RankMode, Rat, SeededCondenser, SubspaceDesign};
