//! Symbolic-numeric toolkit for the third-order generalized Lame equation
//!
//! ```text
//!     y''' - (alpha wp(z) + B) y' + beta wp'(z) y = 0
//! ```
//!
//! on the torus C/(Z + tau Z), with `alpha = n^2 + 3nl + 3l^2 + 2n + 3l` and
//! `beta = (l-1)(n+l)(n+2l+2)/2` determined by integer indices `(n, l)`.
//!
//! The crate has two layers that check each other:
//!
//! * exact layer: polynomials in the accessory parameter `B` over `Q[g2, g3]`
//!   produced by finite recursions (apparent-singularity polynomials, even
//!   elliptic solutions, spectral polynomials of the symmetric square);
//! * numeric layer: Weierstrass functions from theta series, root finding,
//!   and monodromy of the equation computed by integrating the companion
//!   system around the two fundamental cycles.

pub mod cli;
pub mod elliptic;
pub mod linalg;
pub mod monodromy;
pub mod recurrence;
pub mod roots;
pub mod sympoly;
pub mod verify;

use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure modes of the numeric
/// kernels; exact-arithmetic routines only fail on violated preconditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate lattice: {0}")]
    DegenerateLattice(String),

    #[error("evaluation point within {dist:.3e} of a singular point (z = {z})")]
    PoleProximity { z: Complex64, dist: f64 },

    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    #[error("regime error: {0}")]
    Regime(String),

    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    #[error("B = {b} is not an apparent value (residual {residual:.3e})")]
    NotApparent { b: Complex64, residual: f64 },

    #[error("case degeneracy: {0}")]
    CaseDegeneracy(String),

    #[error("nonzero remainder in exact division: {0}")]
    NonzeroRemainder(String),

    #[error("step size underflow at z = {z} (h = {h:.3e})")]
    StepUnderflow { z: Complex64, h: f64 },

    #[error("tolerance not met: {0}")]
    ToleranceNotMet(String),

    #[error("path blocked: {0}")]
    PathBlocked(String),

    #[error("bad input: {0}")]
    BadInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use elliptic::{lattice_data, LatticeData};
pub use monodromy::{classify, monodromy_pair, Classification, MonodromyReport};
pub use recurrence::{problem_params, ProblemParams};
pub use roots::{find_roots, RootReport};
pub use sympoly::{NumPoly, WeightedPoly};
