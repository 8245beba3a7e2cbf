//! Serializable reports for decompositions, local verifications, gamma
//! factors and Dirichlet coefficients.
//!
//! Integers of unbounded size are written as decimal strings, rationals as
//! `"a/b"` (or `"a"` when integral).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::char_ring::{decompose, unitary_specialize, SchurDecomposition};
use crate::eigenforms::{cached_qexp, EigenformId};
use crate::euler::{
    dirichlet_coefficients, verify_gamma_identity, EulerError, GammaShifts, IdentityChecker, VerificationOutcome,
};
use crate::primes::primes_up_to;
use crate::rep_expr::{eval_char, LiftDescriptor, RepExpr};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// `alpha beta = 1`; determinant twists are dropped.
    #[default]
    Unitary,
    /// `alpha beta = p^{k-1}`.
    Arithmetic,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Unitary => "unitary",
            Normalization::Arithmetic => "arithmetic",
        })
    }
}

impl FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unitary" => Ok(Normalization::Unitary),
            "arithmetic" => Ok(Normalization::Arithmetic),
            _ => Err(format!("unknown normalization {s:?}; expected unitary or arithmetic")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstituentReport {
    pub sym: u64,
    pub det: i64,
    pub mult: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionReport {
    pub degree: String,
    pub constituents: Vec<ConstituentReport>,
    pub levi_blocks: Vec<u64>,
}

impl DecompositionReport {
    pub fn new(lift: &LiftDescriptor, normalization: Normalization) -> Self {
        let constituents = match normalization {
            Normalization::Arithmetic => lift
                .constituents
                .constituents()
                .iter()
                .map(|c| ConstituentReport {
                    sym: c.a,
                    det: c.b,
                    mult: c.mult.to_string(),
                })
                .collect(),
            Normalization::Unitary => lift
                .unitary_constituents
                .iter()
                .rev()
                .map(|(&n, mult)| ConstituentReport {
                    sym: n,
                    det: 0,
                    mult: mult.to_string(),
                })
                .collect(),
        };
        DecompositionReport {
            degree: lift.total_degree.to_string(),
            constituents,
            levi_blocks: lift.levi_blocks.clone(),
        }
    }

    pub fn from_decomposition(d: &SchurDecomposition, normalization: Normalization) -> Result<Self, EulerError> {
        let lift = LiftDescriptor::from_decomposition(d.clone())?;
        Ok(Self::new(&lift, normalization))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeReport {
    pub p: u64,
    pub pass: bool,
    /// Coefficients of `T^0, ..., T^d` of the tensor-side factor.
    pub lhs: Vec<String>,
    /// Same, for the product over constituents.
    pub rhs: Vec<String>,
}

impl From<&VerificationOutcome> for PrimeReport {
    fn from(o: &VerificationOutcome) -> Self {
        let render = |f: &crate::euler::LocalFactor| f.exact_coefficients().iter().map(|c| c.to_string()).collect();
        PrimeReport {
            p: o.p,
            pass: o.pass,
            lhs: render(&o.lhs),
            rhs: render(&o.rhs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaReport {
    pub complex_shifts: Vec<String>,
    pub real_parities: Vec<u8>,
}

impl From<&GammaShifts> for GammaReport {
    fn from(g: &GammaShifts) -> Self {
        GammaReport {
            complex_shifts: g.complex_pairs.iter().map(|w| w.to_string()).collect(),
            real_parities: g.real_factors.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub expression: String,
    pub weight: u32,
    pub normalization: Normalization,
    pub decomposition: DecompositionReport,
    pub primes: Vec<PrimeReport>,
    pub gamma: GammaReport,
    pub status: Status,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Checks the local identity at every prime `p <= primes_bound` and the gamma
/// identity once. Primes are processed on the current rayon pool; the result
/// is in ascending `p` regardless of the pool size. `elapsed_ms` is left 0.
///
/// With `against`, the constituent side is the decomposition of that
/// expression rather than of `e`, and the reported decomposition is the
/// claimed one.
pub fn verify_expression(
    e: &RepExpr,
    f: EigenformId,
    primes_bound: u64,
    normalization: Normalization,
    against: Option<&RepExpr>,
) -> Result<VerificationReport, EulerError> {
    let checker = match against {
        None => IdentityChecker::new(e)?,
        Some(claim) => IdentityChecker::against(e, decompose(&eval_char(claim)?))?,
    };
    let decomposition = DecompositionReport::from_decomposition(checker.decomposition(), normalization)?;
    let primes = primes_up_to(primes_bound);
    if let Some(&largest) = primes.last() {
        cached_qexp(f, largest as usize + 1)?;
    }
    let outcomes: Vec<PrimeReport> = primes
        .par_iter()
        .map(|&p| checker.check_form(f, p).map(|o| PrimeReport::from(&o)))
        .collect::<Result<_, _>>()?;
    let unitary = unitary_specialize(checker.decomposition());
    let gamma = verify_gamma_identity(e, f, Some(&unitary))?;
    let pass = gamma.pass && outcomes.iter().all(|o| o.pass);
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        expression: e.to_string(),
        weight: f.weight(),
        normalization,
        decomposition,
        primes: outcomes,
        gamma: GammaReport::from(&gamma.canonical),
        status: if pass { Status::Pass } else { Status::Fail },
        elapsed_ms: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecomposeReport {
    pub schema_version: u32,
    pub expression: String,
    pub normalization: Normalization,
    pub decomposition: DecompositionReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaCommandReport {
    pub schema_version: u32,
    pub expression: String,
    pub weight: u32,
    pub degree: String,
    pub gamma: GammaReport,
    pub status: Status,
}

pub fn gamma_report(e: &RepExpr, f: EigenformId) -> Result<GammaCommandReport, EulerError> {
    let g = verify_gamma_identity(e, f, None)?;
    Ok(GammaCommandReport {
        schema_version: SCHEMA_VERSION,
        expression: e.to_string(),
        weight: f.weight(),
        degree: g.degree.to_string(),
        gamma: GammaReport::from(&g.canonical),
        status: if g.pass { Status::Pass } else { Status::Fail },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientRow {
    pub n: u64,
    /// Arithmetic normalization, exact.
    pub value: String,
    pub unitary: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsReport {
    pub schema_version: u32,
    pub expression: String,
    pub weight: u32,
    pub limit: u64,
    pub coefficients: Vec<CoefficientRow>,
}

pub fn coefficients_report(e: &RepExpr, f: EigenformId, limit: u64) -> Result<CoefficientsReport, EulerError> {
    let d = dirichlet_coefficients(e, f, limit)?;
    let coefficients = d
        .values
        .iter()
        .zip(&d.unitary)
        .zip(1u64..)
        .map(|((v, &u), n)| CoefficientRow {
            n,
            value: v.to_string(),
            unitary: u,
        })
        .collect();
    Ok(CoefficientsReport {
        schema_version: SCHEMA_VERSION,
        expression: e.to_string(),
        weight: f.weight(),
        limit: d.bound,
        coefficients,
    })
}
