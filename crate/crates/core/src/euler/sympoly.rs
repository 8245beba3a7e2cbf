//! Symmetric polynomials in the Satake pair and their reduction to the
//! elementary basis `e1 = alpha + beta`, `e2 = alpha * beta`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::EulerError;

/// Integer polynomial in `alpha`, `beta`, symmetric under their exchange.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymPolyAB {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl SymPolyAB {
    /// Builds `sum c * alpha^u * beta^v`; fails unless the result is symmetric.
    pub fn new<I, C>(terms: I) -> Result<Self, EulerError>
    where
        I: IntoIterator<Item = ((u32, u32), C)>,
        C: Into<BigInt>,
    {
        let mut map: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for (exp, c) in terms {
            *map.entry(exp).or_default() += c.into();
        }
        map.retain(|_, c| !c.is_zero());
        for ((u, v), c) in &map {
            if map.get(&(*v, *u)) != Some(c) {
                return Err(EulerError::NotSymmetric { alpha: *u, beta: *v });
            }
        }
        Ok(SymPolyAB { terms: map })
    }

    pub(crate) fn from_map_unchecked(terms: BTreeMap<(u32, u32), BigInt>) -> Self {
        debug_assert!(terms.iter().all(|((u, v), c)| terms.get(&(*v, *u)) == Some(c)));
        SymPolyAB { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Integer polynomial in `e1`, `e2`: `sum c * e1^i * e2^j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ElementaryForm {
    /// Keyed by `(j, i)` so evaluation can run Horner in `e2` then `e1`.
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl ElementaryForm {
    pub fn coefficient(&self, e1_power: u32, e2_power: u32) -> BigInt {
        self.terms.get(&(e2_power, e1_power)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at `e1 = a`, `e2 = q`, by nested Horner evaluation.
    pub fn evaluate(&self, a: &BigInt, q: &BigInt) -> BigInt {
        let mut rows: BTreeMap<u32, Vec<(u32, &BigInt)>> = BTreeMap::new();
        for ((j, i), c) in &self.terms {
            rows.entry(*j).or_default().push((*i, c));
        }
        let mut acc = BigInt::zero();
        let mut prev_j: Option<u32> = None;
        for (j, row) in rows.iter().rev() {
            if let Some(pj) = prev_j {
                acc *= pow(q, pj - j);
            }
            acc += horner(row, a);
            prev_j = Some(*j);
        }
        if let Some(pj) = prev_j {
            acc *= pow(q, pj);
        }
        acc
    }
}

fn pow(x: &BigInt, e: u32) -> BigInt {
    num_traits::Pow::pow(x, e)
}

/// `sum c_i a^i` for a row sorted by ascending `i`.
fn horner(row: &[(u32, &BigInt)], a: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    let mut prev: Option<u32> = None;
    for (i, c) in row.iter().rev() {
        if let Some(pi) = prev {
            acc *= pow(a, pi - i);
        }
        acc += *c;
        prev = Some(*i);
    }
    if let Some(pi) = prev {
        acc *= pow(a, pi);
    }
    acc
}

struct Binomials {
    rows: HashMap<u32, Vec<BigInt>>,
}

impl Binomials {
    fn row(&mut self, n: u32) -> &[BigInt] {
        self.rows.entry(n).or_insert_with(|| {
            let mut row = Vec::with_capacity(n as usize + 1);
            let mut c = BigInt::one();
            row.push(c.clone());
            for k in 1..=n {
                c = c * BigInt::from(n - k + 1) / BigInt::from(k);
                row.push(c.clone());
            }
            row
        })
    }
}

/// Rewrites a symmetric polynomial in the elementary basis.
///
/// Only the dominant half `u >= v` of the support is tracked: repeatedly take
/// the largest remaining `alpha^u beta^v` and subtract the matching multiple
/// of `e1^{u-v} e2^v`, whose leading monomial it is.
pub fn to_elementary(s: &SymPolyAB) -> ElementaryForm {
    let mut rest: BTreeMap<(u32, u32), BigInt> = s
        .terms
        .iter()
        .filter(|((u, v), _)| u >= v)
        .map(|(e, c)| (*e, c.clone()))
        .collect();
    let mut binomials = Binomials { rows: HashMap::new() };
    let mut out = BTreeMap::new();
    while let Some((&(u, v), c)) = rest.iter().next_back() {
        let c = c.clone();
        let n = u - v;
        // e1^n e2^v = sum_t C(n, t) alpha^{v+t} beta^{v+n-t}; dominant for 2t >= n
        let row = binomials.row(n);
        for t in n.div_ceil(2)..=n {
            let key = (v + t, v + n - t);
            let entry = rest.entry(key).or_default();
            *entry -= &c * &row[t as usize];
            if entry.is_zero() {
                rest.remove(&key);
            }
        }
        out.insert((v, n), c);
    }
    ElementaryForm { terms: out }
}

/// Evaluates a symmetric polynomial at the Satake pair with `alpha + beta = a`
/// and `alpha * beta = q`.
pub fn reduce_symmetric(s: &SymPolyAB, a: &BigInt, q: &BigInt) -> BigInt {
    to_elementary(s).evaluate(a, q)
}
