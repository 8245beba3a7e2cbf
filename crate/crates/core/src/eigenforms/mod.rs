//! Level-1 cusp eigenforms of weights 12, 16, 18, 20, 22 and 26.
//!
//! Each of these weights has a one-dimensional cusp space, spanned by
//! `Delta * E` for a monomial `E` in the Eisenstein series `E_4`, `E_6`, so
//! the normalized q-expansion is the Hecke eigenform and its coefficients
//! are the Hecke eigenvalues.

mod disk;
pub mod series;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use thiserror::Error;

use crate::primes::is_prime;
use series::mul_truncated;

pub use disk::{cache_file_name, load_cached, store_cached};

/// Largest precision computed on request.
pub const MAX_PRECISION: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum EigenformError {
    #[error("no one-dimensional level-1 cusp space in weight {0}; expected one of 12, 16, 18, 20, 22, 26")]
    UnsupportedWeight(u32),
    #[error("Eisenstein series E_{0} is not provided; expected weight 4 or 6")]
    UnsupportedEisenstein(u32),
    #[error("precision {precision} is out of range (minimum {min}, maximum {MAX_PRECISION})")]
    Precision { precision: usize, min: usize },
    #[error("coefficient {index} of E_4^3 - E_6^2 is not divisible by 1728")]
    InexactDivision { index: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("Hecke index must be positive")]
    ZeroIndex,
    #[error("malformed q-expansion file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A level-1 normalized cusp eigenform, identified by its weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EigenformId(u32);

impl EigenformId {
    pub const WEIGHTS: [u32; 6] = [12, 16, 18, 20, 22, 26];

    pub fn new(weight: u32) -> Result<Self, EigenformError> {
        if Self::WEIGHTS.contains(&weight) {
            Ok(EigenformId(weight))
        } else {
            Err(EigenformError::UnsupportedWeight(weight))
        }
    }

    pub fn all() -> impl Iterator<Item = EigenformId> {
        Self::WEIGHTS.into_iter().map(EigenformId)
    }

    pub fn weight(self) -> u32 {
        self.0
    }
}

impl fmt::Display for EigenformId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "weight {}", self.0)
    }
}

/// Truncated q-expansion: `coefficients[n]` is the coefficient of `q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    coefficients: Vec<BigInt>,
}

impl QExpansion {
    pub fn new(coefficients: Vec<BigInt>) -> Self {
        QExpansion { coefficients }
    }

    pub fn precision(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn coefficient(&self, n: usize) -> Option<&BigInt> {
        self.coefficients.get(n)
    }

    pub fn truncated(&self, precision: usize) -> QExpansion {
        QExpansion::new(self.coefficients[..precision.min(self.precision())].to_vec())
    }

    fn mul(&self, other: &QExpansion) -> QExpansion {
        let len = self.precision().min(other.precision());
        QExpansion::new(mul_truncated(&self.coefficients, &other.coefficients, len))
    }
}

/// `sigma_r(n)` for `0 <= n < len` (with `sigma_r(0) = 0`).
fn divisor_power_sums(r: u32, len: usize) -> Vec<BigInt> {
    let mut sums = vec![0u128; len];
    for d in 1..len {
        let power = (d as u128).pow(r);
        for m in (d..len).step_by(d) {
            sums[m] += power;
        }
    }
    sums.into_iter().map(BigInt::from).collect()
}

/// `E_4 = 1 + 240 sum sigma_3(n) q^n` or `E_6 = 1 - 504 sum sigma_5(n) q^n`.
pub fn eisenstein(k: u32, precision: usize) -> Result<QExpansion, EigenformError> {
    let (r, scale) = match k {
        4 => (3, 240),
        6 => (5, -504),
        _ => return Err(EigenformError::UnsupportedEisenstein(k)),
    };
    if precision == 0 || precision > MAX_PRECISION {
        return Err(EigenformError::Precision { precision, min: 1 });
    }
    let mut coefficients = divisor_power_sums(r, precision);
    for c in coefficients.iter_mut().skip(1) {
        *c *= scale;
    }
    coefficients[0] = BigInt::one();
    Ok(QExpansion::new(coefficients))
}

/// `Delta = (E_4^3 - E_6^2) / 1728`.
fn delta(e4_cubed: &QExpansion, e6_squared: &QExpansion) -> Result<QExpansion, EigenformError> {
    let divisor = BigInt::from(1728);
    let mut coefficients = Vec::with_capacity(e4_cubed.precision());
    for (index, (x, y)) in e4_cubed.coefficients.iter().zip(&e6_squared.coefficients).enumerate() {
        let (quotient, rem) = (x - y).div_rem(&divisor);
        if !rem.is_zero() {
            return Err(EigenformError::InexactDivision { index });
        }
        coefficients.push(quotient);
    }
    Ok(QExpansion::new(coefficients))
}

/// Eisenstein monomials `E_4^a E_6^b` at a fixed precision, shared between
/// the forms of a batch.
struct EisensteinMonomials {
    products: HashMap<(u32, u32), QExpansion>,
}

impl EisensteinMonomials {
    fn new(precision: usize) -> Result<Self, EigenformError> {
        let mut products = HashMap::new();
        products.insert((0, 0), QExpansion::new(vec![BigInt::one(); 1]).padded(precision));
        products.insert((1, 0), eisenstein(4, precision)?);
        products.insert((0, 1), eisenstein(6, precision)?);
        Ok(EisensteinMonomials { products })
    }

    fn get(&mut self, a: u32, b: u32) -> &QExpansion {
        if !self.products.contains_key(&(a, b)) {
            let product = if a > 0 {
                let base = self.get(a - 1, b).clone();
                base.mul(&self.products[&(1, 0)])
            } else {
                let base = self.get(a, b - 1).clone();
                base.mul(&self.products[&(0, 1)])
            };
            self.products.insert((a, b), product);
        }
        &self.products[&(a, b)]
    }
}

impl QExpansion {
    fn padded(mut self, precision: usize) -> QExpansion {
        self.coefficients.resize(precision, BigInt::zero());
        self
    }
}

/// `(a, b)` with `f = Delta * E_4^a * E_6^b`.
fn eisenstein_cofactor(f: EigenformId) -> (u32, u32) {
    match f.weight() {
        12 => (0, 0),
        16 => (1, 0),
        18 => (0, 1),
        20 => (2, 0),
        22 => (1, 1),
        26 => (2, 1),
        w => unreachable!("EigenformId admits weight {w}"),
    }
}

/// Normalized q-expansions of several eigenforms, computed from scratch with
/// the Eisenstein products shared between them.
pub fn eigenform_qexps(forms: &[EigenformId], precision: usize) -> Result<Vec<QExpansion>, EigenformError> {
    if !(2..=MAX_PRECISION).contains(&precision) {
        return Err(EigenformError::Precision { precision, min: 2 });
    }
    let mut ring = EisensteinMonomials::new(precision)?;
    let e4_cubed = ring.get(3, 0).clone();
    let delta = delta(&e4_cubed, ring.get(0, 2))?;
    forms
        .iter()
        .map(|&f| {
            let form = match eisenstein_cofactor(f) {
                (0, 0) => delta.clone(),
                (a, b) => delta.mul(ring.get(a, b)),
            };
            debug_assert!(form.coefficients[0].is_zero() && form.coefficients[1].is_one());
            Ok(form)
        })
        .collect()
}

/// Normalized q-expansion of the eigenform, computed from scratch.
pub fn eigenform_qexp(f: EigenformId, precision: usize) -> Result<QExpansion, EigenformError> {
    Ok(eigenform_qexps(&[f], precision)?.pop().expect("one form requested"))
}

type Cache = Mutex<HashMap<EigenformId, Arc<QExpansion>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Memoized q-expansion with at least `precision` coefficients.
///
/// The cache keeps the longest expansion computed so far for each form;
/// requests that outgrow it recompute at twice the cached length or more.
pub fn cached_qexp(f: EigenformId, precision: usize) -> Result<Arc<QExpansion>, EigenformError> {
    let current = cache().lock().expect("cache poisoned").get(&f).cloned();
    if let Some(q) = &current {
        if q.precision() >= precision {
            return Ok(Arc::clone(q));
        }
    }
    let target = current
        .map_or(precision, |q| precision.max(2 * q.precision()))
        .clamp(64, MAX_PRECISION)
        .max(precision);
    let fresh = Arc::new(eigenform_qexp(f, target)?);
    let mut guard = cache().lock().expect("cache poisoned");
    let entry = guard.entry(f).or_insert_with(|| Arc::clone(&fresh));
    if entry.precision() < fresh.precision() {
        *entry = Arc::clone(&fresh);
    }
    Ok(Arc::clone(entry))
}

/// Fills the cache for several forms at once, sharing the Eisenstein work.
pub fn warm_cache(forms: &[EigenformId], precision: usize) -> Result<(), EigenformError> {
    let missing: Vec<EigenformId> = {
        let guard = cache().lock().expect("cache poisoned");
        forms
            .iter()
            .copied()
            .filter(|f| guard.get(f).is_none_or(|q| q.precision() < precision))
            .collect()
    };
    if missing.is_empty() {
        return Ok(());
    }
    let fresh = eigenform_qexps(&missing, precision)?;
    let mut guard = cache().lock().expect("cache poisoned");
    for (f, q) in missing.into_iter().zip(fresh) {
        let entry = guard.entry(f).or_insert_with(|| Arc::new(q.clone()));
        if entry.precision() < q.precision() {
            *entry = Arc::new(q);
        }
    }
    Ok(())
}

/// Hecke eigenvalue `a(n)`, the n-th q-coefficient.
pub fn hecke_a(f: EigenformId, n: u64) -> Result<BigInt, EigenformError> {
    if n == 0 {
        return Err(EigenformError::ZeroIndex);
    }
    let index = usize::try_from(n).map_err(|_| EigenformError::Precision {
        precision: usize::MAX,
        min: 2,
    })?;
    let q = cached_qexp(f, index + 1)?;
    Ok(q.coefficients[index].clone())
}

/// Local data at an unramified prime: `alpha + beta = a_p`, `alpha beta = q_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatakeData {
    pub weight: u32,
    pub p: u64,
    pub a_p: BigInt,
    pub q_p: BigInt,
}

impl SatakeData {
    /// `a_p / p^{(k-1)/2}`.
    pub fn unitary_eigenvalue(&self) -> f64 {
        let a = self.a_p.to_f64().expect("finite");
        a / (self.p as f64).powf((self.weight as f64 - 1.0) / 2.0)
    }

    /// `a_p^2 <= 4 q_p`.
    pub fn satisfies_ramanujan(&self) -> bool {
        &self.a_p * &self.a_p <= BigInt::from(4) * &self.q_p
    }
}

pub fn satake(f: EigenformId, p: u64) -> Result<SatakeData, EigenformError> {
    if !is_prime(p) {
        return Err(EigenformError::NotPrime(p));
    }
    Ok(SatakeData {
        weight: f.weight(),
        p,
        a_p: hecke_a(f, p)?,
        q_p: Pow::pow(BigInt::from(p), f.weight() - 1),
    })
}
