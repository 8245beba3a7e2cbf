use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rayon::prelude::*;

use super::local::FactorPlan;
use super::EulerError;
use crate::char_ring::Character;
use crate::eigenforms::{cached_qexp, satake, EigenformId};
use crate::primes::{primes_up_to, smallest_prime_factors};
use crate::rep_expr::{eval_char, RepExpr};

/// Coefficients `v(n)`, `1 <= n <= bound`, of `L(s) = sum v(n) n^{-s}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCoefficients {
    pub form: EigenformId,
    pub expression: RepExpr,
    pub bound: u64,
    /// Arithmetic normalization; `values[n - 1] = v(n)`.
    pub values: Vec<BigRational>,
    /// Unitary normalization, `values` with `alpha beta = 1`.
    pub unitary: Vec<f64>,
}

impl DirichletCoefficients {
    pub fn value(&self, n: u64) -> Option<&BigRational> {
        self.values.get(usize::try_from(n).ok()?.checked_sub(1)?)
    }

    pub fn unitary_value(&self, n: u64) -> Option<f64> {
        self.unitary.get(usize::try_from(n).ok()?.checked_sub(1)?).copied()
    }
}

/// `1 / (1 + c_1 T + ... + c_d T^d)` to `depth + 1` terms. Requires `c_0 = 1`.
fn invert_exact(c: &[BigInt], depth: usize) -> Vec<BigInt> {
    debug_assert!(c[0].is_one());
    let mut b = vec![BigInt::one()];
    for r in 1..=depth {
        let mut acc = BigInt::zero();
        for i in 1..=r.min(c.len() - 1) {
            acc -= &c[i] * &b[r - i];
        }
        b.push(acc);
    }
    b
}

fn invert_float(c: &[f64], depth: usize) -> Vec<f64> {
    let mut b = vec![1.0];
    for r in 1..=depth {
        let acc: f64 = (1..=r.min(c.len() - 1)).map(|i| -c[i] * b[r - i]).sum();
        b.push(acc);
    }
    b
}

/// `prod (1 - z^{i-j} T)` over the monomials of `c`, where `z = e^{i theta}`
/// is the unitary Satake parameter. The result is real.
fn unitary_factor(monomials: &[(i64, u64)], lambda: f64) -> Vec<f64> {
    let cos = (lambda / 2.0).clamp(-1.0, 1.0);
    let theta = cos.acos();
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for &(w, mult) in monomials {
        let mu = Complex64::from_polar(1.0, theta * w as f64);
        for _ in 0..mult {
            poly.push(Complex64::zero());
            for r in (1..poly.len()).rev() {
                let prev = poly[r - 1];
                poly[r] -= mu * prev;
            }
        }
    }
    poly.into_iter().map(|z| z.re).collect()
}

fn unitary_weights(c: &Character) -> Vec<(i64, u64)> {
    c.terms()
        .map(|(m, mult)| (m.i - m.j, mult.to_u64().expect("genuine multiplicity")))
        .collect()
}

/// Prime-power values `v(p^r)` for `r = 0..=depth`.
struct PrimePowers {
    exact: Vec<BigRational>,
    unitary: Vec<f64>,
}

pub fn dirichlet_coefficients(e: &RepExpr, f: EigenformId, bound: u64) -> Result<DirichletCoefficients, EulerError> {
    let bound = bound.max(1);
    let n_max = usize::try_from(bound).expect("bound fits usize");
    let c = eval_char(e)?;
    let plan = FactorPlan::for_character(&c)?;
    let weights = unitary_weights(&c);

    let primes = primes_up_to(bound);
    // fill the expansion cache once instead of from every worker
    cached_qexp(f, n_max + 1)?;
    let per_prime: Vec<PrimePowers> = primes
        .par_iter()
        .map(|&p| -> Result<PrimePowers, EulerError> {
            let mut depth = 0usize;
            let mut pp = 1u64;
            while let Some(next) = pp.checked_mul(p).filter(|&x| x <= bound) {
                pp = next;
                depth += 1;
            }
            let sd = satake(f, p)?;
            let factor = plan.evaluate(&sd);
            let inv = invert_exact(factor.scaled_coefficients(), depth);
            let step = Pow::pow(&sd.q_p, factor.twist().unsigned_abs());
            let mut scale = BigInt::one();
            let exact = inv
                .into_iter()
                .map(|b| {
                    let v = BigRational::new(b, scale.clone());
                    scale *= &step;
                    v
                })
                .collect();
            let uf = unitary_factor(&weights, sd.unitary_eigenvalue());
            let unitary = invert_float(&uf, depth);
            Ok(PrimePowers { exact, unitary })
        })
        .collect::<Result<_, _>>()?;

    let mut values = vec![BigRational::zero(); n_max];
    let mut unitary = vec![0.0; n_max];
    values[0] = BigRational::one();
    unitary[0] = 1.0;
    let prime_index: std::collections::HashMap<usize, usize> =
        primes.iter().enumerate().map(|(i, &p)| (p as usize, i)).collect();
    let spf = smallest_prime_factors(n_max);
    for n in 2..=n_max {
        let p = spf[n];
        let mut m = n;
        let mut r = 0;
        while m % p == 0 {
            m /= p;
            r += 1;
        }
        let pp = &per_prime[prime_index[&p]];
        values[n - 1] = &pp.exact[r] * &values[m - 1];
        unitary[n - 1] = pp.unitary[r] * unitary[m - 1];
    }
    Ok(DirichletCoefficients {
        form: f,
        expression: e.clone(),
        bound,
        values,
        unitary,
    })
}
