//! Factorization of `SL₂(ℤ[1/m])` matrices into words in `A`, `B`, `U_m`
//! and their rewriting into the two generators `x ↦ A`, `y ↦ Q_m`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::abelian::{AbelianElement, AbelianQuotient};
use crate::error::{Error, Result};
use crate::exact::{MFraction, Mat2M};
use crate::fp::{format_word, generators, make_hm, Substitution, Word};
use crate::matgroups::Assignment;

const A: usize = 0;
const B: usize = 1;
const U: usize = 2;

/// A word over `{A, B, U}` that evaluates to a known matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbuWord {
    pub m: u64,
    pub word: Word,
}

/// A word over `{x, y}` that evaluates to a known matrix under `φ_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XyWord {
    pub m: u64,
    pub word: Word,
}

impl fmt::Display for AbuWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(&self.word, &generators(&["A", "B", "U"])))
    }
}

impl fmt::Display for XyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(&self.word, &generators(&["x", "y"])))
    }
}

/// One round of column reduction: `B`, then `E₂₁(quotient)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EuclidStep {
    pub quotient: String,
    /// Norm of the (2,1) entry before the step.
    #[serde(serialize_with = "ser_bigint")]
    pub norm_before: BigInt,
    /// `None` once the entry is zero.
    #[serde(serialize_with = "ser_opt_bigint")]
    pub norm_after: Option<BigInt>,
}

impl EuclidStep {
    pub fn decreases(&self) -> bool {
        self.norm_after.as_ref().is_none_or(|n| *n < self.norm_before)
    }
}

fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_opt_bigint<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub word: AbuWord,
    pub steps: Vec<EuclidStep>,
}

fn m_exponent(m: u64) -> Result<i64> {
    i64::try_from(m).map_err(|_| Error::ExponentOverflow)
}

fn conj_u(j: i64, e: i64) -> Word {
    Word::from_syllables([(U, j), (A, e), (U, -j)])
}

/// `E₂₁(t) = U^j A^e U^-j` with `e·m^{-2j} = t`; parameters too large for
/// one exponent are split into base-`m²` digits.
fn e21_word(t: &MFraction) -> Result<Word> {
    if t.is_zero() {
        return Ok(Word::identity());
    }
    let m = t.m();
    let k = i64::from(t.exponent());
    let j = (k + 1) / 2;
    let e = if m == 1 {
        t.numerator().clone()
    } else {
        t.numerator() * BigInt::from(m).pow((2 * j - k) as u32)
    };
    if let Some(e) = e.to_i64() {
        return Ok(conj_u(j, e));
    }
    if m == 1 {
        return Err(Error::ExponentOverflow);
    }
    let base = BigInt::from(m) * m;
    let neg = e.is_negative();
    let mut rest = e.abs();
    let mut out = Word::identity();
    let mut i = 0i64;
    while !rest.is_zero() {
        let (q, d) = rest.div_rem(&base);
        let d = d.to_i64().expect("digit below m²");
        if d != 0 {
            out = out.concat(&conj_u(j - i, if neg { -d } else { d }));
        }
        rest = q;
        i += 1;
    }
    Ok(out)
}

/// `E₁₂(s) = B·E₂₁(−s)·B⁻¹`.
fn e12_word(s: &MFraction) -> Result<Word> {
    Ok(Word::gen(B).concat(&e21_word(&-s.clone())?).concat(&Word::power_of(B, -1)))
}

/// `±m^k` as `(negative, k)`.
fn as_m_power(u: &MFraction) -> Option<(bool, i64)> {
    let m = u.m();
    let n = u.numerator().abs();
    if n.is_one() {
        return Some((u.is_negative(), -i64::from(u.exponent())));
    }
    if m == 1 || u.exponent() != 0 {
        return None;
    }
    let mut k = 0i64;
    let mut rest = n;
    let mb = BigInt::from(m);
    while !rest.is_one() {
        let (q, r) = rest.div_rem(&mb);
        if !r.is_zero() {
            return None;
        }
        rest = q;
        k += 1;
    }
    Some((u.is_negative(), k))
}

/// `diag(u, u⁻¹)` for a unit `u`.
fn diag_word(u: &MFraction) -> Result<Word> {
    if let Some((neg, k)) = as_m_power(u) {
        let mut w = if neg { Word::power_of(B, 2) } else { Word::identity() };
        if u.m() > 1 {
            w = w.concat(&Word::power_of(U, k));
        }
        return Ok(w);
    }
    // (0, u; −u⁻¹, 0) = E₁₂(u)·E₂₁(−u⁻¹)·E₁₂(u), then multiply by B⁻¹.
    let inv = u.unit_inverse().expect("diagonal of a triangular unimodular matrix");
    let w = e12_word(u)?.concat(&e21_word(&-inv)?).concat(&e12_word(u)?);
    Ok(w.concat(&Word::power_of(B, -1)))
}

/// Writes `mat` as a word in `A`, `B`, `U_m` by Euclidean reduction of its
/// first column, then handles the remaining upper-triangular matrix.
pub fn decompose_to_abu(mat: &Mat2M) -> Result<Decomposition> {
    if !mat.is_unimodular() {
        return Err(Error::NotUnimodular(mat.to_string()));
    }
    let m = mat.m();
    let b = crate::exact::mat_b(m);
    let mut cur = mat.clone();
    let mut prefix = Word::identity();
    let mut steps = Vec::new();
    while !cur.c().is_zero() {
        if cur.a().is_one() && cur.b().is_zero() {
            // Already E₂₁(c).
            prefix = prefix.concat(&e21_word(cur.c())?);
            cur = Mat2M::identity(m);
            break;
        }
        let norm_before = cur.c().euclidean_norm()?.value().clone();
        let (q, _) = cur.a().div_rem_euclid(cur.c())?;
        cur = &(&Mat2M::lower(q.clone()) * &b) * &cur;
        let norm_after = if cur.c().is_zero() {
            None
        } else {
            Some(cur.c().euclidean_norm()?.value().clone())
        };
        steps.push(EuclidStep {
            quotient: q.to_string(),
            norm_before,
            norm_after,
        });
        prefix = prefix.concat(&Word::power_of(B, -1)).concat(&e21_word(&-q)?);
    }
    // cur = (u, t; 0, u⁻¹) = diag(u, u⁻¹)·E₁₂(t·u⁻¹)
    let u = cur.a().clone();
    let u_inv = cur.d().clone();
    let t = cur.b().clone();
    let tail = diag_word(&u)?.concat(&e12_word(&(&t * &u_inv))?);
    let word = prefix.concat(&tail);

    let check = Assignment::abu(m)?.evaluate(&word)?;
    assert_eq!(&check, mat, "decomposition failed to reproduce its input");
    Ok(Decomposition {
        word: AbuWord { m, word },
        steps,
    })
}

/// `A ↦ x`, `B ↦ x⁻¹y⁻ᵐx⁻¹`, `U ↦ x yᵐ x y⁻¹ x⁻ᵐ y⁻¹`.
pub fn abu_to_xy_substitution(m: u64) -> Result<Substitution> {
    let me = m_exponent(m)?;
    let (x, y) = (0, 1);
    let mut s = Substitution::new(generators(&["A", "B", "U"]), generators(&["x", "y"]));
    s.set(A, Word::gen(x))?;
    s.set(B, Word::from_syllables([(x, -1), (y, -me), (x, -1)]))?;
    s.set(U, Word::from_syllables([(x, 1), (y, me), (x, 1), (y, -1), (x, -me), (y, -1)]))?;
    Ok(s)
}

pub fn rewrite_abu_to_xy(w: &AbuWord) -> Result<XyWord> {
    let word = abu_to_xy_substitution(w.m)?.apply(&w.word)?;
    Ok(XyWord { m: w.m, word })
}

/// `mat ↦` its class in the abelianization of `H_m`.
#[derive(Clone, Debug)]
pub struct AbelianizationMap {
    m: u64,
    quotient: AbelianQuotient,
}

impl AbelianizationMap {
    pub fn new(m: u64) -> Result<Self> {
        Ok(AbelianizationMap {
            m,
            quotient: AbelianQuotient::new(&make_hm(m)?),
        })
    }

    pub fn quotient(&self) -> &AbelianQuotient {
        &self.quotient
    }

    /// Class of an `{x, y}` word.
    pub fn class_of_word(&self, w: &XyWord) -> AbelianElement {
        let v: Vec<BigInt> = w.word.exponent_sums(2).into_iter().map(BigInt::from).collect();
        self.quotient.class_of(&v)
    }

    pub fn image(&self, mat: &Mat2M) -> Result<AbelianElement> {
        if mat.m() != self.m {
            return Err(Error::RingMismatch(mat.m(), self.m));
        }
        let d = decompose_to_abu(mat)?;
        Ok(self.class_of_word(&rewrite_abu_to_xy(&d.word)?))
    }
}

pub fn abelianization_image(mat: &Mat2M) -> Result<AbelianElement> {
    AbelianizationMap::new(mat.m())?.image(mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{mat_a, mat_b, mat_q, mat_u};

    fn roundtrip(mat: &Mat2M) -> Decomposition {
        let d = decompose_to_abu(mat).unwrap();
        assert!(d.steps.iter().all(EuclidStep::decreases));
        let xy = rewrite_abu_to_xy(&d.word).unwrap();
        assert_eq!(&Assignment::phi(mat.m()).unwrap().evaluate(&xy.word).unwrap(), mat);
        d
    }

    #[test]
    fn trivial_cases() {
        let d = roundtrip(&Mat2M::identity(2));
        assert!(d.word.word.is_identity());
        assert_eq!(d.word.to_string(), "1");
        assert_eq!(roundtrip(&mat_a(2)).word.to_string(), "A");
        for m in [1, 2, 3, 6] {
            roundtrip(&mat_b(m));
            roundtrip(&mat_u(m));
            roundtrip(&mat_q(m));
        }
    }

    #[test]
    fn lemma_element() {
        for m in 1..=10 {
            let target = Mat2M::new(
                MFraction::zero(m),
                -MFraction::new(1, 1, m).unwrap(),
                MFraction::int(m, m),
                MFraction::zero(m),
            )
            .unwrap();
            roundtrip(&target);
        }
    }

    #[test]
    fn composite_units() {
        // 2 is a unit of ℤ[1/6] but not a power of 6.
        let m = 6;
        let two = MFraction::int(2, m);
        let half = two.unit_inverse().unwrap();
        roundtrip(&Mat2M::diag(two.clone(), half.clone()).unwrap());
        roundtrip(&Mat2M::diag(-half, -two).unwrap());
        roundtrip(&Mat2M::diag(MFraction::int(-1, m), MFraction::int(-1, m)).unwrap());
    }

    #[test]
    fn large_parameters() {
        let m = 3;
        let t = MFraction::new(BigInt::from(10).pow(30) + 1, 5, m).unwrap();
        roundtrip(&Mat2M::lower(t.clone()));
        roundtrip(&Mat2M::upper(-t));
        let huge = MFraction::int(BigInt::from(10).pow(30), 1);
        assert_eq!(decompose_to_abu(&Mat2M::lower(huge)), Err(Error::ExponentOverflow));
    }

    #[test]
    fn rejects_singular() {
        assert!(matches!(
            decompose_to_abu(&Mat2M::from_ints([[2, 0], [0, 1]], 3)),
            Err(Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn rewrite_examples() {
        let b = AbuWord { m: 3, word: Word::gen(B) };
        assert_eq!(rewrite_abu_to_xy(&b).unwrap().to_string(), "x^-1*y^-3*x^-1");
        let u = AbuWord { m: 2, word: Word::gen(U) };
        assert_eq!(rewrite_abu_to_xy(&u).unwrap().to_string(), "x*y^2*x*y^-1*x^-2*y^-1");
        let e = AbuWord { m: 2, word: Word::identity() };
        assert!(rewrite_abu_to_xy(&e).unwrap().word.is_identity());
    }

    #[test]
    fn abelianization_classes() {
        let map = AbelianizationMap::new(1).unwrap();
        assert!(map.image(&Mat2M::identity(1)).unwrap().is_zero());
        let a = map.image(&mat_a(1)).unwrap();
        assert_eq!(a.torsion.len(), 1);
        // A generates ℤ/12.
        let k = a.torsion[0].clone();
        assert!(k.gcd(&BigInt::from(12)).is_one());
        for m in [6, 12, 30] {
            let map = AbelianizationMap::new(m).unwrap();
            assert!(map.image(&mat_a(m)).unwrap().is_zero());
            assert!(map.image(&mat_u(m)).unwrap().is_zero());
        }
        assert!(matches!(map.image(&mat_a(2)), Err(Error::RingMismatch(2, 1))));
    }
}
