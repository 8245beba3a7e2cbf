//! Character ring of GL(2, C).
//!
//! A [`Character`] is a symmetric Laurent polynomial in two variables `x`, `y`
//! (standing for the Satake pair) with integer multiplicities. Genuine
//! representations have nonnegative Schur multiplicities; virtual ones are
//! allowed everywhere except [`plethysm_sym`], where the caller is expected to
//! pass a genuine input.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharRingError {
    #[error("character is not symmetric: multiplicity of x^{i} y^{j} differs from x^{j} y^{i}")]
    NotSymmetric { i: i64, j: i64 },
    #[error("symmetric power {degree} produced a non-integral multiplicity")]
    NonIntegralPlethysm { degree: u64 },
}

/// The monomial `x^i y^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub i: i64,
    pub j: i64,
}

impl Monomial {
    pub const fn new(i: i64, j: i64) -> Self {
        Monomial { i, j }
    }

    pub const fn swapped(self) -> Self {
        Monomial { i: self.j, j: self.i }
    }

    fn mul(self, other: Monomial) -> Monomial {
        Monomial {
            i: self.i.checked_add(other.i).expect("exponent overflow"),
            j: self.j.checked_add(other.j).expect("exponent overflow"),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} y^{}", self.i, self.j)
    }
}

/// A finitely supported, symmetric multiplicity function on monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Character {
    support: BTreeMap<Monomial, BigInt>,
}

impl Character {
    pub fn zero() -> Self {
        Character::default()
    }

    /// Builds a character from `(monomial, multiplicity)` pairs. Repeated
    /// monomials accumulate; zero totals are dropped.
    pub fn from_terms<I, M>(terms: I) -> Result<Self, CharRingError>
    where
        I: IntoIterator<Item = (Monomial, M)>,
        M: Into<BigInt>,
    {
        let mut support = BTreeMap::new();
        for (m, mult) in terms {
            add_to(&mut support, m, mult.into());
        }
        let c = Character { support };
        c.check_symmetric()?;
        Ok(c)
    }

    fn from_support_unchecked(support: BTreeMap<Monomial, BigInt>) -> Self {
        let c = Character { support };
        debug_assert!(c.check_symmetric().is_ok());
        c
    }

    fn check_symmetric(&self) -> Result<(), CharRingError> {
        for (m, mult) in &self.support {
            if m.i < m.j {
                continue;
            }
            if self.support.get(&m.swapped()) != Some(mult) {
                return Err(CharRingError::NotSymmetric { i: m.i, j: m.j });
            }
        }
        for m in self.support.keys() {
            if m.i < m.j && !self.support.contains_key(&m.swapped()) {
                return Err(CharRingError::NotSymmetric { i: m.i, j: m.j });
            }
        }
        Ok(())
    }

    pub fn multiplicity(&self, m: Monomial) -> BigInt {
        self.support.get(&m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> + '_ {
        self.support.iter().map(|(m, c)| (*m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Smallest exponent of `x` (equivalently of `y`) in the support.
    pub fn min_exponent(&self) -> Option<i64> {
        self.support.keys().map(|m| m.i.min(m.j)).min()
    }

    /// True when every Schur multiplicity is nonnegative.
    pub fn is_genuine(&self) -> bool {
        decompose(self).is_genuine()
    }

    /// The monomial multiset with multiplicities expanded, in monomial order.
    /// Returns `None` if some multiplicity is negative or does not fit `usize`.
    pub fn monomial_multiset(&self) -> Option<Vec<Monomial>> {
        let mut out = Vec::new();
        for (m, mult) in &self.support {
            if mult.is_negative() {
                return None;
            }
            let k: usize = mult.try_into().ok()?;
            out.extend(std::iter::repeat_n(*m, k));
        }
        Some(out)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.support.iter().rev().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}*{}", c, m)?;
        }
        Ok(())
    }
}

fn add_to(support: &mut BTreeMap<Monomial, BigInt>, m: Monomial, mult: BigInt) {
    if mult.is_zero() {
        return;
    }
    let entry = support.entry(m).or_default();
    *entry += mult;
    if entry.is_zero() {
        support.remove(&m);
    }
}

/// Character of `sym^n`: `sum_{i+j=n} x^i y^j`.
pub fn sym_char(n: u64) -> Character {
    let n = i64::try_from(n).expect("symmetric power degree exceeds i64");
    let support = (0..=n)
        .map(|i| (Monomial::new(i, n - i), BigInt::one()))
        .collect();
    Character::from_support_unchecked(support)
}

pub fn tensor(c1: &Character, c2: &Character) -> Character {
    let mut support = BTreeMap::new();
    for (m1, a) in &c1.support {
        for (m2, b) in &c2.support {
            add_to(&mut support, m1.mul(*m2), a * b);
        }
    }
    Character::from_support_unchecked(support)
}

pub fn direct_sum(c1: &Character, c2: &Character) -> Character {
    let mut support = c1.support.clone();
    for (m, b) in &c2.support {
        add_to(&mut support, *m, b.clone());
    }
    Character::from_support_unchecked(support)
}

fn scale(c: &Character, k: &BigInt) -> Character {
    if k.is_zero() {
        return Character::zero();
    }
    let support = c.support.iter().map(|(m, v)| (*m, v * k)).collect();
    Character::from_support_unchecked(support)
}

pub fn dual(c: &Character) -> Character {
    let support = c
        .support
        .iter()
        .map(|(m, v)| (Monomial::new(-m.i, -m.j), v.clone()))
        .collect();
    Character::from_support_unchecked(support)
}

/// Multiplies by `det^b = (xy)^b`.
pub fn det_twist(c: &Character, b: i64) -> Character {
    let shift = Monomial::new(b, b);
    let support = c
        .support
        .iter()
        .map(|(m, v)| (m.mul(shift), v.clone()))
        .collect();
    Character::from_support_unchecked(support)
}

/// Adams operation `psi^r`: `x^i y^j -> x^{ri} y^{rj}`.
pub fn adams(c: &Character, r: u64) -> Character {
    assert!(r >= 1, "Adams operation index must be positive");
    let r = i64::try_from(r).expect("Adams index exceeds i64");
    let support = c
        .support
        .iter()
        .map(|(m, v)| {
            let m = Monomial::new(
                m.i.checked_mul(r).expect("exponent overflow"),
                m.j.checked_mul(r).expect("exponent overflow"),
            );
            (m, v.clone())
        })
        .collect();
    Character::from_support_unchecked(support)
}

/// Character of `Sym^m(V)` where `V` has character `c`.
///
/// Uses the Newton recursion `m h_m = sum_{r=1}^{m} psi^r(c) h_{m-r}`; the
/// right-hand side must be divisible by `m` coefficient-wise.
pub fn plethysm_sym(c: &Character, m: u64) -> Result<Character, CharRingError> {
    let mut h: Vec<Character> = Vec::with_capacity(m as usize + 1);
    h.push(sym_char(0));
    let power_sums: Vec<Character> = (1..=m).map(|r| adams(c, r)).collect();
    for k in 1..=m {
        let mut acc = Character::zero();
        for r in 1..=k {
            let term = tensor(&power_sums[(r - 1) as usize], &h[(k - r) as usize]);
            acc = direct_sum(&acc, &term);
        }
        let divisor = BigInt::from(k);
        let mut support = BTreeMap::new();
        for (mono, v) in acc.support {
            let (q, rem) = v.div_rem(&divisor);
            if !rem.is_zero() {
                return Err(CharRingError::NonIntegralPlethysm { degree: k });
            }
            support.insert(mono, q);
        }
        h.push(Character::from_support_unchecked(support));
    }
    Ok(h.pop().expect("h_0 is always present"))
}

/// Evaluation at `x = y = 1`.
pub fn dimension(c: &Character) -> BigInt {
    c.support.values().sum()
}

/// One Schur basis element `mult * sym^a * det^b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SchurConstituent {
    pub a: u64,
    pub b: i64,
    pub mult: BigInt,
}

impl SchurConstituent {
    pub fn dimension(&self) -> u64 {
        self.a + 1
    }

    pub fn character(&self) -> Character {
        scale(&det_twist(&sym_char(self.a), self.b), &self.mult)
    }
}

/// Signed Schur expansion of a character, sorted by `(a desc, b desc)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct SchurDecomposition {
    constituents: Vec<SchurConstituent>,
}

impl SchurDecomposition {
    /// Builds a decomposition from arbitrary constituents, merging repeated
    /// `(a, b)` pairs and dropping zero multiplicities.
    pub fn from_constituents<I: IntoIterator<Item = SchurConstituent>>(items: I) -> Self {
        let mut merged: BTreeMap<(u64, i64), BigInt> = BTreeMap::new();
        for c in items {
            *merged.entry((c.a, c.b)).or_default() += c.mult;
        }
        let constituents = merged
            .into_iter()
            .rev()
            .filter(|(_, m)| !m.is_zero())
            .map(|((a, b), mult)| SchurConstituent { a, b, mult })
            .collect();
        SchurDecomposition { constituents }
    }

    pub fn constituents(&self) -> &[SchurConstituent] {
        &self.constituents
    }

    pub fn is_genuine(&self) -> bool {
        self.constituents.iter().all(|c| c.mult.is_positive())
    }

    pub fn character(&self) -> Character {
        self.constituents
            .iter()
            .fold(Character::zero(), |acc, c| direct_sum(&acc, &c.character()))
    }

    pub fn dimension(&self) -> BigInt {
        self.constituents
            .iter()
            .map(|c| BigInt::from(c.dimension()) * &c.mult)
            .sum()
    }
}

impl fmt::Display for SchurDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.constituents.is_empty() {
            return f.write_str("0");
        }
        for (n, c) in self.constituents.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if !c.mult.is_one() {
                write!(f, "{}*", c.mult)?;
            }
            write!(f, "sym^{}", c.a)?;
            if c.b != 0 {
                write!(f, "*det^{}", c.b)?;
            }
        }
        Ok(())
    }
}

/// Greedy leading-term Schur expansion.
///
/// The lexicographically largest remaining monomial `x^u y^v` with `u >= v`
/// is the leading term of `sym^{u-v} det^v`; subtracting that multiple keeps
/// the remainder symmetric and strictly lowers the leading term.
pub fn decompose(c: &Character) -> SchurDecomposition {
    let mut rest = c.support.clone();
    let mut out = Vec::new();
    while let Some((&lead, mult)) = rest.iter().next_back() {
        debug_assert!(lead.i >= lead.j, "leading monomial outside dominant chamber");
        let mult = mult.clone();
        let a = (lead.i - lead.j) as u64;
        let b = lead.j;
        for t in 0..=(a as i64) {
            let m = Monomial::new(b + a as i64 - t, b + t);
            add_to(&mut rest, m, -mult.clone());
        }
        out.push(SchurConstituent { a, b, mult });
    }
    SchurDecomposition::from_constituents(out)
}

/// Sym-degree multiset with determinant twists dropped (`xy = 1`).
pub fn unitary_specialize(d: &SchurDecomposition) -> BTreeMap<u64, BigInt> {
    let mut out: BTreeMap<u64, BigInt> = BTreeMap::new();
    for c in d.constituents() {
        *out.entry(c.a).or_default() += &c.mult;
    }
    out.retain(|_, m| !m.is_zero());
    out
}
