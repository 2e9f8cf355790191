//! Projection parametrizations, third intersection points, the `Ψ` builder,
//! its verification, dominance and slicing, and restriction of scalars.

mod dominance;
mod projection;
mod psi;
mod verify;
mod weil;

use alloc::string::String;

pub use dominance::{
    dominance_rank, slice_to_dim, RankCertificate, SliceResult, EXHAUSTIVE_SAMPLE_LIMIT,
    SLICE_RETRIES,
};
pub use projection::{projection_param, third_point, third_point_projective, ProjParam};
pub use psi::{
    build_psi, psi_var_index, psi_variables, LineCertificate, PsiMap, PsiTrace, TraceIdentities,
};
pub use verify::{
    verify_psi, Certificate, VerifyMethod, VerifyMode, EXPANSION_TERM_LIMIT, MODULAR_PRIMES,
};
pub use weil::{weil_restrict, weil_variables, MultiplicationTable};

use crate::algebra::AlgebraError;
use crate::cubic::CubicError;
use crate::quadext::QuadExtError;

pub use crate::rng::SAMPLE_BUDGET;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SegreError {
    #[error("base point is not smooth")]
    NotSmooth,
    #[error("hypersurface is a cone")]
    ConeInput,
    #[error("dimension n = {0} is below 2")]
    DimensionTooSmall(usize),
    #[error("tangent direction degenerates: {0}")]
    DegenerateTangentDirection(&'static str),
    #[error("cubic part C(u, 1) vanishes identically")]
    CubicPartVanishes,
    #[error("tangent section is degenerate (q or c vanishes)")]
    DegenerateSection,
    #[error("line is contained in the hypersurface")]
    LineContainedInX,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("point is not on the hypersurface")]
    PointNotOnHypersurface,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("verification failed; residual leading monomial {0}")]
    VerificationFailed(String),
    #[error("no valid sample found within the budget")]
    ExhaustedSamples,
    #[error("map does not have full rank")]
    RankDeficient,
    #[error("no slice kept full rank within {0} attempts")]
    SliceNotFound(usize),
    #[error("inconsistent multiplication table")]
    InconsistentTable,
    #[error(transparent)]
    Cubic(#[from] CubicError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<QuadExtError> for SegreError {
    fn from(e: QuadExtError) -> Self {
        match e {
            QuadExtError::NonInvertible => {
                SegreError::DegenerateTangentDirection("element of the extension is not invertible")
            }
            QuadExtError::Algebra(a) => SegreError::Algebra(a),
            other => SegreError::InternalInconsistency(alloc::format!("{other}")),
        }
    }
}
