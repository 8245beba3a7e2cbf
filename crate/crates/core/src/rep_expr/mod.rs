//! Expression language for compositions of symmetric powers, tensor products,
//! isobaric sums, duals and determinant twists of a single `pi`.

mod parser;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::char_ring::{self, CharRingError, Character, SchurDecomposition};

pub use parser::{parse, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RepExpr {
    /// The standard two-dimensional representation attached to the eigenform.
    Pi,
    Sym(u64, Box<RepExpr>),
    Tensor(Box<RepExpr>, Box<RepExpr>),
    IsobaricSum(Box<RepExpr>, Box<RepExpr>),
    Dual(Box<RepExpr>),
    Det(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepExprError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    CharRing(#[from] CharRingError),
    #[error("expression denotes a virtual character: {0}")]
    VirtualCharacter(SchurDecomposition),
}

impl RepExpr {
    pub fn sym(n: u64, inner: RepExpr) -> RepExpr {
        RepExpr::Sym(n, Box::new(inner))
    }

    pub fn tensor(lhs: RepExpr, rhs: RepExpr) -> RepExpr {
        RepExpr::Tensor(Box::new(lhs), Box::new(rhs))
    }

    pub fn isobaric_sum(lhs: RepExpr, rhs: RepExpr) -> RepExpr {
        RepExpr::IsobaricSum(Box::new(lhs), Box::new(rhs))
    }

    pub fn dual(inner: RepExpr) -> RepExpr {
        RepExpr::Dual(Box::new(inner))
    }

    /// `sym^{n_1}(pi) * ... * sym^{n_m}(pi)`, left-associated.
    ///
    /// # Panics
    ///
    /// Panics if `degrees` is empty.
    pub fn tensor_of_sym_powers(degrees: &[u64]) -> RepExpr {
        let mut it = degrees.iter().map(|&n| RepExpr::sym(n, RepExpr::Pi));
        let first = it.next().expect("at least one factor");
        it.fold(first, RepExpr::tensor)
    }

    /// Dimension computed from the shape of the tree alone: `pi` has
    /// dimension 2, `sym^n` of a `d`-dimensional representation has
    /// `C(d + n - 1, n)`, tensor products multiply and sums add.
    pub fn dimension_by_shape(&self) -> BigInt {
        match self {
            RepExpr::Pi => BigInt::from(2),
            RepExpr::Det(_) => BigInt::one(),
            RepExpr::Dual(inner) => inner.dimension_by_shape(),
            RepExpr::Tensor(l, r) => l.dimension_by_shape() * r.dimension_by_shape(),
            RepExpr::IsobaricSum(l, r) => l.dimension_by_shape() + r.dimension_by_shape(),
            RepExpr::Sym(n, inner) => {
                let d = inner.dimension_by_shape();
                // C(d + n - 1, n) = prod_{t=1}^{n} (d + t - 1) / t
                let mut acc = BigInt::one();
                for t in 1..=*n {
                    acc = acc * (&d + BigInt::from(t - 1)) / BigInt::from(t);
                }
                acc
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            RepExpr::IsobaricSum(..) => 0,
            RepExpr::Tensor(..) => 1,
            _ => 2,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            RepExpr::Pi => f.write_str("pi")?,
            RepExpr::Det(b) => write!(f, "det^{b}")?,
            RepExpr::Sym(n, inner) => {
                write!(f, "sym^{n}(")?;
                inner.fmt_prec(f, 0)?;
                f.write_str(")")?;
            }
            RepExpr::Dual(inner) => {
                f.write_str("dual(")?;
                inner.fmt_prec(f, 0)?;
                f.write_str(")")?;
            }
            RepExpr::IsobaricSum(l, r) => {
                l.fmt_prec(f, 0)?;
                f.write_str(" + ")?;
                r.fmt_prec(f, 1)?;
            }
            RepExpr::Tensor(l, r) => {
                l.fmt_prec(f, 1)?;
                f.write_str(" * ")?;
                r.fmt_prec(f, 2)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Canonical rendering; reparses to the same tree.
impl fmt::Display for RepExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl std::str::FromStr for RepExpr {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

pub fn render(e: &RepExpr) -> String {
    e.to_string()
}

pub fn eval_char(e: &RepExpr) -> Result<Character, CharRingError> {
    Ok(match e {
        RepExpr::Pi => char_ring::sym_char(1),
        RepExpr::Det(b) => char_ring::det_twist(&char_ring::sym_char(0), *b),
        RepExpr::Dual(inner) => char_ring::dual(&eval_char(inner)?),
        RepExpr::Sym(n, inner) => char_ring::plethysm_sym(&eval_char(inner)?, *n)?,
        RepExpr::Tensor(l, r) => char_ring::tensor(&eval_char(l)?, &eval_char(r)?),
        RepExpr::IsobaricSum(l, r) => char_ring::direct_sum(&eval_char(l)?, &eval_char(r)?),
    })
}

/// Isobaric data of the lift attached to an expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftDescriptor {
    /// `N` in `GL_N`.
    pub total_degree: BigInt,
    pub constituents: SchurDecomposition,
    /// Levi block sizes `a + 1`, one per unit of multiplicity, largest first.
    pub levi_blocks: Vec<u64>,
    pub unitary_constituents: BTreeMap<u64, BigInt>,
}

impl LiftDescriptor {
    pub fn from_decomposition(d: SchurDecomposition) -> Result<Self, RepExprError> {
        if !d.is_genuine() {
            return Err(RepExprError::VirtualCharacter(d));
        }
        let mut levi_blocks = Vec::new();
        for c in d.constituents() {
            let copies = c.mult.to_usize().expect("multiplicity fits in memory");
            levi_blocks.extend(std::iter::repeat_n(c.dimension(), copies));
        }
        levi_blocks.sort_unstable_by(|a, b| b.cmp(a));
        let unitary_constituents = char_ring::unitary_specialize(&d);
        let total_degree = d.dimension();
        debug_assert!(total_degree.is_positive() || d.constituents().is_empty());
        Ok(LiftDescriptor {
            total_degree,
            constituents: d,
            levi_blocks,
            unitary_constituents,
        })
    }
}

pub fn lift(e: &RepExpr) -> Result<LiftDescriptor, RepExprError> {
    let c = eval_char(e)?;
    LiftDescriptor::from_decomposition(char_ring::decompose(&c))
}
