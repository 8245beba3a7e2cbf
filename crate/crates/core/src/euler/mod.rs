//! Local Euler factors, Dirichlet coefficients and gamma factors of the
//! L-function attached to an expression and an eigenform.

mod dirichlet;
mod gamma;
mod local;
mod sympoly;

use thiserror::Error;

use crate::char_ring::{CharRingError, SchurDecomposition};
use crate::eigenforms::EigenformError;
use crate::rep_expr::RepExprError;

pub use dirichlet::{dirichlet_coefficients, DirichletCoefficients};
pub use gamma::{
    archimedean_shifts, gamma_shifts, shifts_for_unitary_constituents, verify_gamma_identity, GammaShifts,
    GammaVerification, HalfInteger,
};
pub use local::{
    local_factor, tensor_local_factor, verify_local_identity, ConstituentRoute, FactorPlan, IdentityChecker,
    LocalFactor, VerificationOutcome,
};
pub use sympoly::{reduce_symmetric, to_elementary, ElementaryForm, SymPolyAB};

#[derive(Debug, Error)]
pub enum EulerError {
    #[error("polynomial is not symmetric: alpha^{alpha} beta^{beta} has no matching partner")]
    NotSymmetric { alpha: u32, beta: u32 },
    #[error("expression denotes a virtual character: {0}")]
    VirtualCharacter(SchurDecomposition),
    #[error("value too large: {0}")]
    Overflow(String),
    #[error(transparent)]
    CharRing(#[from] CharRingError),
    #[error(transparent)]
    Eigenform(#[from] EigenformError),
}

impl From<RepExprError> for EulerError {
    fn from(e: RepExprError) -> Self {
        match e {
            RepExprError::VirtualCharacter(d) => EulerError::VirtualCharacter(d),
            RepExprError::CharRing(c) => EulerError::CharRing(c),
            RepExprError::Syntax(s) => unreachable!("evaluation never parses: {s}"),
        }
    }
}
