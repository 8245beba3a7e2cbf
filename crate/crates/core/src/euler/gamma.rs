//! Archimedean gamma-factor bookkeeping for completed L-functions.
//!
//! The shifts are read off two ways. The canonical route applies a fixed rule
//! to each unitary constituent `sym^n`: shifts `(n - 2j)(k - 1)/2` for
//! `0 <= j < floor((n + 1)/2)` give `Gamma_C(s + w)` factors, and for even `n`
//! one `Gamma_R(s + eps)` with `eps = (n/2)(k - 1) mod 2`. The archimedean
//! route works on the Weil-group parameter directly: `C^*` weights come from
//! the undecomposed character, and the sign of `j` on the weight-zero space
//! comes from the trace of `j` tracked through the expression tree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::EulerError;
use crate::char_ring::dimension;
use crate::eigenforms::EigenformId;
use crate::rep_expr::{eval_char, lift, RepExpr};

/// A nonnegative half-integer, stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInteger(u64);

impl HalfInteger {
    pub fn from_doubled(twice: u64) -> Self {
        HalfInteger(twice)
    }

    pub fn doubled(self) -> u64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

/// Renders as `"11"` or `"11/2"`.
impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `prod Gamma_C(s + w) * prod Gamma_R(s + eps)`, both as sorted multisets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GammaShifts {
    pub complex_pairs: Vec<HalfInteger>,
    pub real_factors: Vec<u8>,
}

impl GammaShifts {
    fn normalized(mut self) -> Self {
        self.complex_pairs.sort_unstable_by(|a, b| b.cmp(a));
        self.real_factors.sort_unstable();
        self
    }

    /// `2 |complex_pairs| + |real_factors|`.
    pub fn degree(&self) -> u64 {
        2 * self.complex_pairs.len() as u64 + self.real_factors.len() as u64
    }
}

fn copies(mult: &BigInt) -> Result<usize, EulerError> {
    mult.to_usize().ok_or_else(|| EulerError::Overflow(format!("multiplicity {mult}")))
}

/// Per-constituent rule over a unitary multiset `{n: mult}`.
pub fn shifts_for_unitary_constituents(
    constituents: &BTreeMap<u64, BigInt>,
    weight: u32,
) -> Result<GammaShifts, EulerError> {
    let k1 = u64::from(weight) - 1;
    let mut out = GammaShifts::default();
    for (&n, mult) in constituents {
        let m = copies(mult)?;
        for j in 0..n.div_ceil(2) {
            let w = HalfInteger::from_doubled((n - 2 * j) * k1);
            out.complex_pairs.extend(std::iter::repeat_n(w, m));
        }
        if n % 2 == 0 {
            let eps = ((n / 2) * k1 % 2) as u8;
            out.real_factors.extend(std::iter::repeat_n(eps, m));
        }
    }
    Ok(out.normalized())
}

pub fn gamma_shifts(e: &RepExpr, f: EigenformId) -> Result<GammaShifts, EulerError> {
    let l = lift(e)?;
    shifts_for_unitary_constituents(&l.unitary_constituents, f.weight())
}

/// Multiset of eigenvalues of `j` in `{1, i, -1, -i}`, as counts indexed by
/// the power of `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct JSpectrum([BigInt; 4]);

impl JSpectrum {
    fn single(power: usize) -> Self {
        let mut c: [BigInt; 4] = Default::default();
        c[power % 4] = BigInt::one();
        JSpectrum(c)
    }

    fn zero() -> Self {
        JSpectrum(Default::default())
    }

    fn add(&self, other: &JSpectrum) -> JSpectrum {
        JSpectrum(std::array::from_fn(|k| &self.0[k] + &other.0[k]))
    }

    fn mul(&self, other: &JSpectrum) -> JSpectrum {
        let mut out = JSpectrum::zero();
        for a in 0..4 {
            for b in 0..4 {
                out.0[(a + b) % 4] += &self.0[a] * &other.0[b];
            }
        }
        out
    }

    fn inverse_eigenvalues(&self) -> JSpectrum {
        JSpectrum(std::array::from_fn(|k| self.0[(4 - k) % 4].clone()))
    }

    /// Complete homogeneous symmetric function `h_n` of the eigenvalues:
    /// the coefficient of `u^n` in `prod_lambda (1 - lambda u)^{-count}`.
    fn sym(&self, n: u64) -> Result<JSpectrum, EulerError> {
        let n = usize::try_from(n).map_err(|_| EulerError::Overflow(format!("degree {n}")))?;
        let mut series: Vec<JSpectrum> = vec![JSpectrum::single(0)];
        series.resize(n + 1, JSpectrum::zero());
        for (power, count) in self.0.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            // (1 - lambda u)^{-c} = sum_r binom(c + r - 1, r) lambda^r u^r, any integer c
            let mut factor: Vec<JSpectrum> = Vec::with_capacity(n + 1);
            let mut binom = BigInt::one();
            for r in 0..=n {
                if r > 0 {
                    binom = binom * (count + BigInt::from(r - 1)) / BigInt::from(r);
                }
                let mut term = JSpectrum::zero();
                term.0[(power * r) % 4] = binom.clone();
                factor.push(term);
            }
            let mut next = vec![JSpectrum::zero(); n + 1];
            for (i, a) in series.iter().enumerate() {
                for (r, b) in factor.iter().enumerate().take(n + 1 - i) {
                    next[i + r] = next[i + r].add(&a.mul(b));
                }
            }
            series = next;
        }
        Ok(series.pop().expect("nonempty"))
    }

    /// Trace `sum lambda`; must be real.
    fn trace(&self) -> BigInt {
        debug_assert_eq!(self.0[1], self.0[3], "j-trace must be real");
        &self.0[0] - &self.0[2]
    }
}

/// Spectrum of `j` on the archimedean parameter of `e` for even weight `k`.
///
/// `pi_inf` has parameter `Ind(z^{k-1})`, on which `j` has matrix
/// `[[0, (-1)^{k-1}], [1, 0]]`: eigenvalues `+-i` for odd `k - 1` and
/// determinant `(-1)^k`.
fn j_spectrum(e: &RepExpr, weight: u32) -> Result<JSpectrum, EulerError> {
    Ok(match e {
        RepExpr::Pi => {
            if (weight - 1) % 2 == 1 {
                JSpectrum::single(1).add(&JSpectrum::single(3))
            } else {
                JSpectrum::single(0).add(&JSpectrum::single(2))
            }
        }
        RepExpr::Det(b) => {
            let odd = weight % 2 == 1 && b.rem_euclid(2) == 1;
            JSpectrum::single(if odd { 2 } else { 0 })
        }
        RepExpr::Dual(inner) => j_spectrum(inner, weight)?.inverse_eigenvalues(),
        RepExpr::Tensor(l, r) => j_spectrum(l, weight)?.mul(&j_spectrum(r, weight)?),
        RepExpr::IsobaricSum(l, r) => j_spectrum(l, weight)?.add(&j_spectrum(r, weight)?),
        RepExpr::Sym(n, inner) => j_spectrum(inner, weight)?.sym(*n)?,
    })
}

/// Shifts from the Weil-group parameter, without the Schur decomposition.
pub fn archimedean_shifts(e: &RepExpr, f: EigenformId) -> Result<GammaShifts, EulerError> {
    let c = eval_char(e)?;
    let k1 = u64::from(f.weight()) - 1;
    let mut out = GammaShifts::default();
    let mut weight_zero = BigInt::zero();
    for (m, mult) in c.terms() {
        if mult.is_negative() {
            return Err(EulerError::VirtualCharacter(crate::char_ring::decompose(&c)));
        }
        let t = m.i - m.j;
        if t > 0 {
            let w = HalfInteger::from_doubled(t as u64 * k1);
            out.complex_pairs.extend(std::iter::repeat_n(w, copies(mult)?));
        } else if t == 0 {
            weight_zero += mult;
        }
    }
    let trace = j_spectrum(e, f.weight())?.trace();
    let two = BigInt::from(2);
    let trivial: BigInt = (&weight_zero + &trace) / &two;
    let sign: BigInt = (&weight_zero - &trace) / &two;
    if trivial.is_negative() || sign.is_negative() || (&trivial + &sign) != weight_zero {
        return Err(EulerError::VirtualCharacter(crate::char_ring::decompose(&c)));
    }
    out.real_factors.extend(std::iter::repeat_n(0, copies(&trivial)?));
    out.real_factors.extend(std::iter::repeat_n(1, copies(&sign)?));
    Ok(out.normalized())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaVerification {
    pub pass: bool,
    pub degree: BigInt,
    pub canonical: GammaShifts,
    pub archimedean: GammaShifts,
    pub expected: Option<GammaShifts>,
}

/// Compares the canonical and archimedean routes, and optionally the shifts
/// of a caller-supplied unitary decomposition; also checks
/// `2 |complex| + |real| = dimension`.
pub fn verify_gamma_identity(
    e: &RepExpr,
    f: EigenformId,
    expected: Option<&BTreeMap<u64, BigInt>>,
) -> Result<GammaVerification, EulerError> {
    let canonical = gamma_shifts(e, f)?;
    let archimedean = archimedean_shifts(e, f)?;
    let expected = expected
        .map(|u| shifts_for_unitary_constituents(u, f.weight()))
        .transpose()?;
    let degree = dimension(&eval_char(e)?);
    let pass = canonical == archimedean
        && expected.as_ref().is_none_or(|x| *x == canonical)
        && BigInt::from(canonical.degree()) == degree;
    Ok(GammaVerification {
        pass,
        degree,
        canonical,
        archimedean,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep_expr::parse;

    fn w12() -> EigenformId {
        EigenformId::new(12).unwrap()
    }

    fn shifts(g: &GammaShifts) -> (Vec<String>, Vec<u8>) {
        (g.complex_pairs.iter().map(|w| w.to_string()).collect(), g.real_factors.clone())
    }

    #[test]
    fn examples() {
        let g = gamma_shifts(&RepExpr::Pi, w12()).unwrap();
        assert_eq!(shifts(&g), (vec!["11/2".to_string()], vec![]));
        let g = gamma_shifts(&parse("sym^2(pi)").unwrap(), w12()).unwrap();
        assert_eq!(shifts(&g), (vec!["11".to_string()], vec![1]));
        let g = gamma_shifts(&parse("pi*pi").unwrap(), w12()).unwrap();
        assert_eq!(shifts(&g), (vec!["11".to_string()], vec![0, 1]));
        let g = gamma_shifts(&parse("sym^0(pi)").unwrap(), w12()).unwrap();
        assert_eq!(shifts(&g), (vec![], vec![0]));
        let g = gamma_shifts(&parse("sym^2(pi)*sym^3(pi)").unwrap(), w12()).unwrap();
        assert_eq!(g.complex_pairs.len(), 6);
        assert_eq!(g.degree(), 12);
    }

    #[test]
    fn routes_agree() {
        for src in [
            "pi",
            "sym^2(pi)",
            "sym^4(pi)",
            "pi*pi",
            "sym^2(pi)*sym^3(pi)",
            "sym^2(sym^2(pi))",
            "sym^3(pi*pi)",
            "dual(pi)*pi + det^-3",
            "sym^2(pi + det)",
        ] {
            for f in EigenformId::all() {
                let v = verify_gamma_identity(&parse(src).unwrap(), f, None).unwrap();
                assert!(v.pass, "{src} at {f}: {:?}", v);
            }
        }
    }

    #[test]
    fn expected_decomposition_checked() {
        let e = parse("sym^2(pi)*sym^3(pi)").unwrap();
        let good = BTreeMap::from([(5, BigInt::one()), (3, BigInt::one()), (1, BigInt::one())]);
        assert!(verify_gamma_identity(&e, w12(), Some(&good)).unwrap().pass);
        let bad = BTreeMap::from([(5, BigInt::one()), (4, BigInt::one()), (0, BigInt::one())]);
        assert!(!verify_gamma_identity(&e, w12(), Some(&bad)).unwrap().pass);
    }

    #[test]
    fn j_spectrum_of_symmetric_powers() {
        // h_n(i, -i) = 1, 0, -1, 0, 1, ... gives eps = (n/2) mod 2 for even n
        let pi = j_spectrum(&RepExpr::Pi, 12).unwrap();
        let traces: Vec<i64> = (0..8).map(|n| pi.sym(n).unwrap().trace().to_i64().unwrap()).collect();
        assert_eq!(traces, vec![1, 0, -1, 0, 1, 0, -1, 0]);
    }

    #[test]
    fn half_integer_rendering() {
        assert_eq!(HalfInteger::from_doubled(11).to_string(), "11/2");
        assert_eq!(HalfInteger::from_doubled(22).to_string(), "11");
        assert_eq!(HalfInteger::from_doubled(0).to_string(), "0");
    }
}
