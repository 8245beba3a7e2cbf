//! Exact character-ring decomposition of compositions of symmetric powers of
//! the GL(2) representation attached to a level-1 Hecke eigenform, and
//! prime-by-prime verification of the resulting Euler-product identities.

pub mod char_ring;
pub mod eigenforms;
pub mod euler;
pub mod primes;
pub mod rep_expr;
pub mod report;

pub use char_ring::{Character, Monomial, SchurConstituent, SchurDecomposition};
pub use eigenforms::{EigenformId, QExpansion, SatakeData};
pub use euler::{DirichletCoefficients, GammaShifts, LocalFactor, VerificationOutcome};
pub use rep_expr::{lift, parse, LiftDescriptor, RepExpr};
pub use report::{Normalization, VerificationReport};
