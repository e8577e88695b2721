use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::text::{Cursor, ParseError, ParseErrorKind};

/// An element `numerator / m^exponent` of the ring ℤ[1/m].
///
/// Always stored in canonical form: either the exponent is zero or `m`
/// does not divide the numerator. Canonical forms are unique, so the
/// derived equality is value equality.
///
/// Arithmetic operators panic when the operands carry different `m`;
/// use the `checked_*` methods when that cannot be ruled out statically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MFraction {
    num: BigInt,
    exp: u32,
    m: u64,
}

/// The prime-to-`m` part of a numerator: the Euclidean norm of ℤ[1/m].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EuclideanNorm(BigInt);

impl EuclideanNorm {
    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl fmt::Display for EuclideanNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub(crate) fn m_pow(m: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(m), k as usize)
}

/// Strips every factor shared with `m` from `|n|` by repeated gcd division.
pub(crate) fn prime_to_m_part(n: &BigInt, m: u64) -> BigInt {
    let mut n = n.abs();
    let m = BigInt::from(m);
    loop {
        let g = n.gcd(&m);
        if g.is_one() || g.is_zero() {
            return n;
        }
        n /= g;
    }
}

impl MFraction {
    /// Canonical form of `numerator / m^exponent`.
    pub fn new(numerator: impl Into<BigInt>, exponent: u32, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroM);
        }
        Ok(Self::canonical(numerator.into(), exponent, m))
    }

    /// The integer `n` viewed in ℤ[1/m]. Panics if `m == 0`.
    pub fn int(n: impl Into<BigInt>, m: u64) -> Self {
        assert!(m >= 1, "m must be at least 1");
        Self::canonical(n.into(), 0, m)
    }

    pub fn zero(m: u64) -> Self {
        Self::int(0, m)
    }

    pub fn one(m: u64) -> Self {
        Self::int(1, m)
    }

    /// `m^k` for any integer `k`.
    pub fn m_power(k: i64, m: u64) -> Self {
        Self::one(m).scale_m(k)
    }

    fn canonical(mut num: BigInt, mut exp: u32, m: u64) -> Self {
        if m == 1 || num.is_zero() {
            return MFraction {
                num,
                exp: 0,
                m,
            };
        }
        let mb = BigInt::from(m);
        while exp > 0 {
            let (q, r) = num.div_rem(&mb);
            if !r.is_zero() {
                break;
            }
            num = q;
            exp -= 1;
        }
        MFraction { num, exp, m }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0 && self.num.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn is_negative(&self) -> bool {
        self.num.sign() == Sign::Minus
    }

    /// Denominator `m^exponent` as an integer.
    pub fn denominator(&self) -> BigInt {
        m_pow(self.m, self.exp)
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.m, other.m))
        }
    }

    fn unchecked_add(&self, other: &Self) -> Self {
        let k = self.exp.max(other.exp);
        let a = &self.num * m_pow(self.m, k - self.exp);
        let b = &other.num * m_pow(self.m, k - other.exp);
        Self::canonical(a + b, k, self.m)
    }

    fn unchecked_mul(&self, other: &Self) -> Self {
        Self::canonical(&self.num * &other.num, self.exp + other.exp, self.m)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.unchecked_add(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.unchecked_add(&-other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.unchecked_mul(other))
    }

    /// Multiplies by `m^j` (`j` may be negative).
    pub fn scale_m(&self, j: i64) -> Self {
        if self.m == 1 || self.is_zero() {
            return self.clone();
        }
        if j >= 0 {
            let j = u32::try_from(j).expect("m-power shift fits in u32");
            if j <= self.exp {
                Self::canonical(self.num.clone(), self.exp - j, self.m)
            } else {
                Self::canonical(&self.num * m_pow(self.m, j - self.exp), 0, self.m)
            }
        } else {
            let j = u32::try_from(-j).expect("m-power shift fits in u32");
            Self::canonical(self.num.clone(), self.exp + j, self.m)
        }
    }

    /// Norm `N(x)`: `|numerator|` with all factors shared with `m` removed.
    pub fn euclidean_norm(&self) -> Result<EuclideanNorm> {
        if self.is_zero() {
            return Err(Error::ZeroNorm);
        }
        Ok(EuclideanNorm(prime_to_m_part(&self.num, self.m)))
    }

    /// Units of ℤ[1/m] are exactly the elements of norm 1.
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && prime_to_m_part(&self.num, self.m).is_one()
    }

    /// Multiplicative inverse, when `self` is a unit.
    pub fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        // |num| divides some power of m; find it.
        let abs = self.num.abs();
        let mut t = 0u32;
        let mut mt = BigInt::one();
        while !(&mt % &abs).is_zero() {
            mt *= self.m;
            t += 1;
        }
        let mut inv = Self::canonical(mt / &abs, t, self.m).scale_m(i64::from(self.exp));
        if self.is_negative() {
            inv = -inv;
        }
        Some(inv)
    }

    /// Division with remainder: `self = q·divisor + ρ`, where `ρ = 0` or
    /// `N(ρ) < N(divisor)`.
    ///
    /// Both operands are scaled by `m^K` to integers `a`, `b`; `b` is split
    /// as `b'·g` with `b'` its prime-to-`m` part and `g` a unit, and the
    /// truncated integer remainder of `a` by `b'` is scaled back.
    pub fn div_rem_euclid(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.same_ring(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.m;
        if self.is_zero() {
            return Ok((Self::zero(m), Self::zero(m)));
        }
        let k = self.exp.max(divisor.exp);
        let a = &self.num * m_pow(m, k - self.exp);
        let b = &divisor.num * m_pow(m, k - divisor.exp);
        let b_prime = prime_to_m_part(&b, m);
        let g = Self::canonical(&b / &b_prime, 0, m);
        let (q_int, r_int) = a.div_rem(&b_prime);
        let g_inv = g.unit_inverse().expect("cofactor of the prime-to-m part is a unit");
        let q = Self::canonical(q_int, 0, m).unchecked_mul(&g_inv);
        let rho = Self::canonical(r_int, k, m);
        Ok((q, rho))
    }

    /// Parses `int` or `int/int`; the denominator must divide a power of `m`.
    pub fn parse(text: &str, m: u64) -> std::result::Result<Self, ParseError> {
        let mut cur = Cursor::new(text, 1, 0);
        let v = Self::parse_cursor(&mut cur, m)?;
        cur.expect_end()?;
        Ok(v)
    }

    pub(crate) fn parse_cursor(cur: &mut Cursor<'_>, m: u64) -> std::result::Result<Self, ParseError> {
        if m == 0 {
            return Err(cur.error(ParseErrorKind::Invalid("m must be at least 1".into())));
        }
        let num = cur.bigint()?;
        if cur.peek() != Some('/') {
            return Ok(Self::int(num, m));
        }
        cur.bump();
        let den_pos = cur.pos();
        let den = cur.bigint()?;
        Self::from_ratio(num, den.clone(), m)
            .ok_or_else(|| cur.error_at(den_pos, ParseErrorKind::BadDenominator(den.to_string())))
    }

    /// `num / den` as an element of ℤ[1/m], if it is one.
    pub fn from_ratio(num: BigInt, den: BigInt, m: u64) -> Option<Self> {
        if den.is_zero() || m == 0 {
            return None;
        }
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        let (num, den) = if g.is_zero() { (num, den) } else { (num / &g, den / &g) };
        if den.is_one() {
            return Some(Self::int(num, m));
        }
        if m == 1 {
            return None;
        }
        // den | m^k for some k <= log2(den) + 1 iff every prime of den divides m.
        let bound = den.bits() as u32 + 1;
        let mut mk = BigInt::one();
        for k in 0..=bound {
            if (&mk % &den).is_zero() {
                return Some(Self::canonical(num * (mk / &den), k, m));
            }
            mk *= m;
        }
        None
    }
}

impl fmt::Display for MFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.denominator())
        }
    }
}

impl Neg for &MFraction {
    type Output = MFraction;
    fn neg(self) -> MFraction {
        MFraction {
            num: -&self.num,
            exp: self.exp,
            m: self.m,
        }
    }
}

impl Neg for MFraction {
    type Output = MFraction;
    fn neg(self) -> MFraction {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&MFraction> for &MFraction {
            type Output = MFraction;
            fn $method(self, rhs: &MFraction) -> MFraction {
                self.$checked(rhs).expect("MFraction operands from different rings")
            }
        }
        impl $tr<MFraction> for MFraction {
            type Output = MFraction;
            fn $method(self, rhs: MFraction) -> MFraction {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&MFraction> for MFraction {
            type Output = MFraction;
            fn $method(self, rhs: &MFraction) -> MFraction {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn mf(n: i64, e: u32, m: u64) -> MFraction {
        MFraction::new(n, e, m).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let x = mf(2, 2, 4);
        assert_eq!((x.numerator().clone(), x.exponent()), (BigInt::from(2), 2));
        let x = mf(8, 2, 4);
        assert_eq!((x.numerator().clone(), x.exponent()), (BigInt::from(2), 1));
        let x = mf(6, 0, 5);
        assert_eq!((x.numerator().clone(), x.exponent()), (BigInt::from(6), 0));
        assert_eq!(mf(7, 9, 1).exponent(), 0);
        assert_eq!(MFraction::new(1, 0, 0), Err(Error::ZeroM));
    }

    #[test]
    fn ring_examples() {
        let m = 7;
        assert!((mf(1, 1, m) + mf(-1, 1, m)).is_zero());
        assert_eq!(mf(1, 1, 2) * mf(1, 1, 2), mf(1, 2, 2));
        let two = mf(3, 1, 2) + mf(1, 1, 2);
        assert_eq!(two, MFraction::int(2, 2));
        assert_eq!(two.exponent(), 0);
        assert_eq!(mf(1, 0, 2).checked_add(&mf(1, 0, 3)), Err(Error::RingMismatch(2, 3)));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(MFraction::int(12, 2).euclidean_norm().unwrap().value(), &BigInt::from(3));
        assert!(mf(1, 3, 2).euclidean_norm().unwrap().is_one());
        assert_eq!(MFraction::int(45, 6).euclidean_norm().unwrap().value(), &BigInt::from(5));
        assert_eq!(MFraction::zero(6).euclidean_norm(), Err(Error::ZeroNorm));
    }

    #[test]
    fn divmod_examples() {
        let (q, r) = MFraction::int(7, 2).div_rem_euclid(&MFraction::int(2, 2)).unwrap();
        assert_eq!(q, mf(7, 1, 2));
        assert!(r.is_zero());
        let (q, r) = MFraction::int(7, 2).div_rem_euclid(&MFraction::int(3, 2)).unwrap();
        assert_eq!(q, MFraction::int(2, 2));
        assert_eq!(r, MFraction::int(1, 2));
        let (q, r) = MFraction::zero(5).div_rem_euclid(&MFraction::int(3, 5)).unwrap();
        assert!(q.is_zero() && r.is_zero());
        assert_eq!(
            MFraction::int(1, 5).div_rem_euclid(&MFraction::zero(5)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn unit_inverse_handles_composite_m() {
        // 2 is a unit of Z[1/6] even though it is not a power of 6.
        let two = MFraction::int(2, 6);
        let inv = two.unit_inverse().unwrap();
        assert!((inv * &two).is_one());
        let u = mf(-4, 3, 6);
        assert!((u.unit_inverse().unwrap() * u).is_one());
        assert!(MFraction::int(5, 6).unit_inverse().is_none());
    }

    #[test]
    fn parse_fractions() {
        assert_eq!(MFraction::parse("-1/2", 2).unwrap(), -mf(1, 1, 2));
        assert_eq!(MFraction::parse("1/8", 4).unwrap(), mf(2, 2, 4));
        assert_eq!(MFraction::parse(" 6/3 ", 5).unwrap(), MFraction::int(2, 5));
        let err = MFraction::parse("1/3", 2).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::BadDenominator(_)));
        assert_eq!(err.column, 3);
        assert!(MFraction::parse("1/0", 2).is_err());
        assert!(MFraction::parse("abc", 2).is_err());
    }

    #[test]
    fn display_round_trips() {
        for x in [mf(-3, 2, 10), mf(5, 0, 3), mf(2, 2, 4)] {
            assert_eq!(MFraction::parse(&x.to_string(), x.m()).unwrap(), x);
        }
    }
}
