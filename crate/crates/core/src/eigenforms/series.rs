//! Exact truncated products of integer power series.
//!
//! Coefficients are reduced modulo a set of 31-bit primes, convolved with
//! 128-bit accumulators and lifted back with Garner's algorithm. The prime
//! set is sized from a bit-length bound on the result, so the lift is exact.

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::primes::{is_prime, pow_mod};

/// Each modulus exceeds `2^MODULUS_BITS`.
const MODULUS_BITS: u64 = 30;
const MAX_MODULI: usize = 256;

fn moduli() -> &'static [u64] {
    static MODULI: OnceLock<Vec<u64>> = OnceLock::new();
    MODULI.get_or_init(|| {
        let mut out = Vec::with_capacity(MAX_MODULI);
        let mut candidate = (1u64 << 31) - 1;
        while out.len() < MAX_MODULI {
            if is_prime(candidate) {
                out.push(candidate);
            }
            candidate -= 2;
        }
        out
    })
}

fn max_bits(xs: &[BigInt]) -> u64 {
    xs.iter().map(|x| x.bits()).max().unwrap_or(0)
}

fn reduce(xs: &[BigInt], p: u64) -> Vec<u64> {
    let big_p = BigInt::from(p);
    xs.iter()
        .map(|x| {
            let r = x % &big_p;
            let r = if r.sign() == Sign::Minus { r + &big_p } else { r };
            r.to_u64().expect("residue below modulus")
        })
        .collect()
}

/// Dot product of residues below `2^31`; four products fit in a `u64`.
fn dot_mod(x: &[u64], y: &[u64], p: u128) -> u64 {
    let mut acc: u128 = 0;
    let mut xs = x.chunks_exact(4);
    let mut ys = y.chunks_exact(4);
    for (u, v) in xs.by_ref().zip(ys.by_ref()) {
        acc += (u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]) as u128;
    }
    for (u, v) in xs.remainder().iter().zip(ys.remainder()) {
        acc += (u * v) as u128;
    }
    (acc % p) as u64
}

fn convolve_mod(a: &[u64], b: &[u64], len: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; len];
    // b reversed, so that sum_i a[i] b[k - i] is a forward dot product
    let rev: Vec<u64> = b.iter().rev().copied().collect();
    let top = b.len() - 1;
    for (k, slot) in out.iter_mut().enumerate() {
        let lo = k.saturating_sub(top);
        let hi = k.min(a.len() - 1);
        if lo > hi {
            continue;
        }
        // b[k - i] = rev[top - k + i]
        let start = top + lo - k;
        *slot = dot_mod(&a[lo..=hi], &rev[start..start + hi - lo + 1], p as u128);
    }
    out
}

/// Product of two integer series truncated to `len` coefficients.
pub fn mul_truncated(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() || len == 0 {
        return vec![BigInt::zero(); len];
    }
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    let terms = a.len().min(b.len()) as u64;
    // |c_k| <= terms * max|a| * max|b|; one extra bit for the sign.
    let bound_bits = max_bits(a) + max_bits(b) + (64 - terms.leading_zeros() as u64) + 1;
    let count = (bound_bits / MODULUS_BITS + 1) as usize;
    assert!(count <= MAX_MODULI, "series product exceeds {} bits", MAX_MODULI as u64 * MODULUS_BITS);
    let ps = &moduli()[..count];

    let residues: Vec<Vec<u64>> = ps
        .par_iter()
        .map(|&p| convolve_mod(&reduce(a, p), &reduce(b, p), len, p))
        .collect();
    crt_lift(&residues, ps, len)
}

/// Garner reconstruction into the symmetric range `(-M/2, M/2]`.
fn crt_lift(residues: &[Vec<u64>], ps: &[u64], len: usize) -> Vec<BigInt> {
    let n = ps.len();
    // inv[i][j] = p_j^{-1} mod p_i for j < i
    let inv: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..i).map(|j| pow_mod(ps[j] % ps[i], ps[i] - 2, ps[i])).collect())
        .collect();
    let modulus: BigInt = ps.iter().map(|&p| BigInt::from(p)).product();
    let half = &modulus >> 1;

    (0..len)
        .into_par_iter()
        .map(|k| {
            let mut digits = vec![0u64; n];
            for i in 0..n {
                let p = ps[i];
                let mut x = residues[i][k];
                for j in 0..i {
                    let diff = (x + p - digits[j] % p) % p;
                    x = ((diff as u128 * inv[i][j] as u128) % p as u128) as u64;
                }
                digits[i] = x;
            }
            let mut value = BigInt::zero();
            for i in (0..n).rev() {
                value = value * ps[i] + digits[i];
            }
            if value > half {
                value -= &modulus;
            }
            value
        })
        .collect()
}
