//! Local Euler factors at unramified primes.
//!
//! A [`LocalFactor`] is the reciprocal Euler factor `prod (1 - mu T)` over the
//! monomial multiset `mu = alpha^i beta^j` of a character, with `T = p^{-s}`.
//! Characters with negative exponents (duals, negative determinant powers)
//! have coefficients in `Z[1/q]`; these are stored as integers in the scaled
//! variable `q^twist T` with `twist <= 0`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use super::sympoly::{to_elementary, ElementaryForm, SymPolyAB};
use super::EulerError;
use crate::char_ring::{self, Character, SchurConstituent, SchurDecomposition};
use crate::eigenforms::{satake, EigenformId, SatakeData};
use crate::rep_expr::{eval_char, RepExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFactor {
    p: u64,
    q: BigInt,
    twist: i64,
    coefficients: Vec<BigInt>,
}

impl LocalFactor {
    /// The constant polynomial 1.
    pub fn one(sd: &SatakeData) -> Self {
        LocalFactor {
            p: sd.p,
            q: sd.q_p.clone(),
            twist: 0,
            coefficients: vec![BigInt::one()],
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Exponent `t <= 0` such that the coefficient of `T^r` is
    /// `scaled_coefficients()[r] * q^{t r}`.
    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn scaled_coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// True when every coefficient in `T` is an integer.
    pub fn is_integral(&self) -> bool {
        self.twist == 0 || self.integer_coefficients().is_some()
    }

    /// Coefficients of `T^0, ..., T^d`.
    pub fn exact_coefficients(&self) -> Vec<BigRational> {
        if self.twist == 0 {
            return self.coefficients.iter().cloned().map(BigRational::from_integer).collect();
        }
        self.coefficients
            .iter()
            .zip(self.denominators())
            .map(|(c, d)| reduced_ratio(c, d))
            .collect()
    }

    /// Integer coefficients in `T`, if the factor is integral.
    pub fn integer_coefficients(&self) -> Option<Vec<BigInt>> {
        if self.twist == 0 {
            return Some(self.coefficients.clone());
        }
        self.coefficients
            .iter()
            .zip(self.denominators())
            .map(|(c, d)| {
                let (quot, rem) = c.div_rem(&d);
                rem.is_zero().then_some(quot)
            })
            .collect()
    }

    /// `q^{-t r}` for `r = 0, ..., d`.
    fn denominators(&self) -> impl Iterator<Item = BigInt> {
        let step: BigInt = Pow::pow(&self.q, self.twist.unsigned_abs());
        std::iter::successors(Some(BigInt::one()), move |s| Some(s * &step))
    }

    /// Same polynomial re-expressed with a smaller twist.
    fn rescaled(&self, twist: i64) -> LocalFactor {
        assert!(twist <= self.twist);
        let step = Pow::pow(&self.q, (self.twist - twist) as u64);
        let mut scale = BigInt::one();
        let coefficients = self
            .coefficients
            .iter()
            .map(|c| {
                let v = c * &scale;
                scale *= &step;
                v
            })
            .collect();
        LocalFactor {
            p: self.p,
            q: self.q.clone(),
            twist,
            coefficients,
        }
    }

    pub fn mul(&self, other: &LocalFactor) -> LocalFactor {
        assert_eq!((self.p, &self.q), (other.p, &other.q), "factors at different primes");
        let twist = self.twist.min(other.twist);
        let (x, y) = (self.rescaled(twist), other.rescaled(twist));
        let mut coefficients = vec![BigInt::zero(); x.coefficients.len() + y.coefficients.len() - 1];
        for (i, a) in x.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coefficients.iter().enumerate() {
                coefficients[i + j] += a * b;
            }
        }
        LocalFactor {
            p: self.p,
            q: self.q.clone(),
            twist,
            coefficients,
        }
    }

    pub fn pow(&self, k: usize) -> LocalFactor {
        let mut acc = LocalFactor {
            p: self.p,
            q: self.q.clone(),
            twist: self.twist,
            coefficients: vec![BigInt::one()],
        };
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Equality as polynomials in `T`, independent of the stored twist.
    pub fn same_polynomial(&self, other: &LocalFactor) -> bool {
        if self.p != other.p || self.coefficients.len() != other.coefficients.len() {
            return false;
        }
        let twist = self.twist.min(other.twist);
        self.rescaled(twist).coefficients == other.rescaled(twist).coefficients
    }
}

impl fmt::Display for LocalFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, c) in self.exact_coefficients().iter().enumerate() {
            if r > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let c = c.abs();
            match r {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*T")?,
                _ => write!(f, "{c}*T^{r}")?,
            }
        }
        Ok(())
    }
}

/// `c / d` in lowest terms for `d > 0`; the gcd runs on `d`-sized operands.
fn reduced_ratio(c: &BigInt, d: BigInt) -> BigRational {
    let g = d.gcd(&c.mod_floor(&d));
    if g.is_one() {
        BigRational::new_raw(c.clone(), d)
    } else {
        BigRational::new_raw(c / &g, d / g)
    }
}

fn exponent(x: i64) -> u32 {
    u32::try_from(x).expect("monomial exponent exceeds u32")
}

/// The factor `prod (1 - mu T)` of a genuine character, reduced once to the
/// elementary basis so that it can be evaluated at many primes.
#[derive(Debug, Clone)]
pub struct FactorPlan {
    twist: i64,
    forms: Vec<ElementaryForm>,
}

impl FactorPlan {
    pub fn for_character(c: &Character) -> Result<Self, EulerError> {
        let d = char_ring::decompose(c);
        if !d.is_genuine() {
            return Err(EulerError::VirtualCharacter(d));
        }
        let twist = c.min_exponent().unwrap_or(0).min(0);
        let shifted = char_ring::det_twist(c, -twist);
        let monomials = shifted
            .monomial_multiset()
            .expect("genuine characters have nonnegative monomial multiplicities");

        let mut coeffs: Vec<BTreeMap<(u32, u32), BigInt>> = vec![BTreeMap::new(); monomials.len() + 1];
        coeffs[0].insert((0, 0), BigInt::one());
        for (done, mono) in monomials.iter().enumerate() {
            let (i, j) = (exponent(mono.i), exponent(mono.j));
            // multiply by (1 - mu T): c_r -= mu * c_{r-1}, highest r first
            for r in (1..=done + 1).rev() {
                let (lo, hi) = coeffs.split_at_mut(r);
                let src = &lo[r - 1];
                let dst = &mut hi[0];
                for ((u, v), c) in src {
                    let key = (u + i, v + j);
                    let entry = dst.entry(key).or_default();
                    *entry -= c;
                    if entry.is_zero() {
                        dst.remove(&key);
                    }
                }
            }
        }
        let forms = coeffs
            .into_iter()
            .map(|terms| to_elementary(&SymPolyAB::from_map_unchecked(terms)))
            .collect();
        Ok(FactorPlan { twist, forms })
    }

    pub fn degree(&self) -> usize {
        self.forms.len() - 1
    }

    pub fn evaluate(&self, sd: &SatakeData) -> LocalFactor {
        LocalFactor {
            p: sd.p,
            q: sd.q_p.clone(),
            twist: self.twist,
            coefficients: self.forms.iter().map(|f| f.evaluate(&sd.a_p, &sd.q_p)).collect(),
        }
    }
}

/// Elementary symmetric functions `e_r(alpha^a, alpha^{a-1} beta, ..., beta^a)`
/// from the Gaussian binomial identity
/// `prod_{t=0}^{a} (1 + x^{a-t} y^t T) = sum_r x^{ar} u^{r(r-1)/2} [a+1, r]_u T^r`
/// with `u = y / x`.
fn sym_power_elementary(a: u64) -> Vec<ElementaryForm> {
    let n = usize::try_from(a + 1).expect("degree fits usize");
    // gauss[r] = [m, r]_u as coefficient vectors, built row by row in m
    let mut gauss: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for m in 1..=n {
        let mut next: Vec<Vec<BigInt>> = Vec::with_capacity(m + 1);
        for r in 0..=m {
            // [m, r] = [m-1, r-1] + u^r [m-1, r]
            let mut poly = vec![BigInt::zero(); r * (m - r) + 1];
            if r >= 1 {
                for (k, c) in gauss[r - 1].iter().enumerate() {
                    poly[k] += c;
                }
            }
            if r < m {
                for (k, c) in gauss[r].iter().enumerate() {
                    poly[k + r] += c;
                }
            }
            next.push(poly);
        }
        gauss = next;
    }
    let a32 = u32::try_from(a).expect("degree fits u32");
    gauss
        .iter()
        .enumerate()
        .map(|(r, poly)| {
            let r = r as u32;
            let base = r * (r.saturating_sub(1)) / 2;
            let terms = poly.iter().enumerate().map(|(m, c)| {
                let y = base + m as u32;
                ((a32 * r - y, y), c.clone())
            });
            let s = SymPolyAB::new(terms).expect("Gaussian binomials are palindromic");
            to_elementary(&s)
        })
        .collect()
}

/// Factor of `sym^a det^b` from precomputed elementary forms of `sym^a`.
fn constituent_factor(forms: &[ElementaryForm], b: i64, sd: &SatakeData) -> LocalFactor {
    let twist = b.min(0);
    let step = if b > 0 { Pow::pow(&sd.q_p, b as u64) } else { BigInt::one() };
    let mut scale = BigInt::one();
    let coefficients = forms
        .iter()
        .enumerate()
        .map(|(r, f)| {
            let e = f.evaluate(&sd.a_p, &sd.q_p) * &scale;
            scale *= &step;
            if r % 2 == 1 {
                -e
            } else {
                e
            }
        })
        .collect();
    LocalFactor {
        p: sd.p,
        q: sd.q_p.clone(),
        twist,
        coefficients,
    }
}

/// `prod_constituents L_p(sym^a det^b)^{mult}`, each factor expanded on its own.
#[derive(Debug, Clone)]
pub struct ConstituentRoute {
    constituents: Vec<SchurConstituent>,
    sym_forms: BTreeMap<u64, Vec<ElementaryForm>>,
}

impl ConstituentRoute {
    pub fn new(d: &SchurDecomposition) -> Result<Self, EulerError> {
        if !d.is_genuine() {
            return Err(EulerError::VirtualCharacter(d.clone()));
        }
        let mut sym_forms = BTreeMap::new();
        for c in d.constituents() {
            sym_forms.entry(c.a).or_insert_with(|| sym_power_elementary(c.a));
        }
        Ok(ConstituentRoute {
            constituents: d.constituents().to_vec(),
            sym_forms,
        })
    }

    pub fn evaluate(&self, sd: &SatakeData) -> LocalFactor {
        let mut acc = LocalFactor::one(sd);
        for c in &self.constituents {
            let single = constituent_factor(&self.sym_forms[&c.a], c.b, sd);
            let copies = c.mult.to_usize().expect("multiplicity fits usize");
            acc = acc.mul(&single.pow(copies));
        }
        acc
    }
}

pub fn local_factor(c: &Character, sd: &SatakeData) -> Result<LocalFactor, EulerError> {
    Ok(FactorPlan::for_character(c)?.evaluate(sd))
}

pub fn tensor_local_factor(e: &RepExpr, sd: &SatakeData) -> Result<LocalFactor, EulerError> {
    local_factor(&eval_char(e)?, sd)
}

/// Result of comparing the two routes at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationOutcome {
    pub p: u64,
    pub pass: bool,
    pub lhs: LocalFactor,
    pub rhs: LocalFactor,
}

/// Precomputed data for checking one expression at many primes.
#[derive(Debug, Clone)]
pub struct IdentityChecker {
    character: Character,
    decomposition: SchurDecomposition,
    lhs: FactorPlan,
    rhs: ConstituentRoute,
}

impl IdentityChecker {
    pub fn new(e: &RepExpr) -> Result<Self, EulerError> {
        let character = eval_char(e)?;
        let decomposition = char_ring::decompose(&character);
        let lhs = FactorPlan::for_character(&character)?;
        let rhs = ConstituentRoute::new(&decomposition)?;
        Ok(IdentityChecker {
            character,
            decomposition,
            lhs,
            rhs,
        })
    }

    /// Checks `e` against a claimed isobaric decomposition instead of its own.
    pub fn against(e: &RepExpr, claimed: SchurDecomposition) -> Result<Self, EulerError> {
        let character = eval_char(e)?;
        let lhs = FactorPlan::for_character(&character)?;
        let rhs = ConstituentRoute::new(&claimed)?;
        Ok(IdentityChecker {
            character,
            decomposition: claimed,
            lhs,
            rhs,
        })
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    pub fn decomposition(&self) -> &SchurDecomposition {
        &self.decomposition
    }

    pub fn check(&self, sd: &SatakeData) -> VerificationOutcome {
        let lhs = self.lhs.evaluate(sd);
        let rhs = self.rhs.evaluate(sd);
        VerificationOutcome {
            p: sd.p,
            pass: lhs.same_polynomial(&rhs),
            lhs,
            rhs,
        }
    }

    pub fn check_form(&self, f: EigenformId, p: u64) -> Result<VerificationOutcome, EulerError> {
        Ok(self.check(&satake(f, p)?))
    }
}

pub fn verify_local_identity(e: &RepExpr, f: EigenformId, p: u64) -> Result<VerificationOutcome, EulerError> {
    let sd = satake(f, p)?;
    Ok(IdentityChecker::new(e)?.check(&sd))
}
