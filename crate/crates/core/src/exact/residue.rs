use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::mat2::Mat2M;
use super::mfraction::MFraction;
use crate::error::{Error, Result};

/// A 2×2 matrix over ℤ/rℤ with entries reduced into `[0, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueMat2 {
    e: [u64; 4],
    r: u64,
}

fn mulmod(a: u64, b: u64, r: u64) -> u64 {
    ((a as u128 * b as u128) % r as u128) as u64
}

/// Inverse of `a` modulo `r`, if `gcd(a, r) = 1`.
pub fn mod_inverse(a: u64, r: u64) -> Option<u64> {
    let ext = (a as i128 % r as i128).extended_gcd(&(r as i128));
    if ext.gcd != 1 {
        return None;
    }
    Some(ext.x.rem_euclid(r as i128) as u64)
}

impl ResidueMat2 {
    /// Rejects `r < 2`.
    pub fn new(rows: [[i64; 2]; 2], r: u64) -> Result<Self> {
        if r < 2 {
            return Err(Error::BadModulus(r));
        }
        let red = |v: i64| (v as i128).rem_euclid(r as i128) as u64;
        Ok(ResidueMat2 {
            e: [red(rows[0][0]), red(rows[0][1]), red(rows[1][0]), red(rows[1][1])],
            r,
        })
    }

    pub fn identity(r: u64) -> Result<Self> {
        Self::new([[1, 0], [0, 1]], r)
    }

    pub fn modulus(&self) -> u64 {
        self.r
    }

    pub fn entries(&self) -> [u64; 4] {
        self.e
    }

    pub fn det(&self) -> u64 {
        let [a, b, c, d] = self.e;
        let r = self.r;
        (mulmod(a, d, r) + r - mulmod(b, c, r)) % r
    }

    pub fn is_unimodular(&self) -> bool {
        self.det() == 1 % self.r
    }

    pub fn is_identity(&self) -> bool {
        self.e == [1, 0, 0, 1]
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.r != other.r {
            return Err(Error::BadModulus(other.r));
        }
        let r = self.r;
        let [a, b, c, d] = self.e;
        let [p, q, s, t] = other.e;
        let f = |x: u64, y: u64, z: u64, w: u64| (mulmod(x, y, r) + mulmod(z, w, r)) % r;
        Ok(ResidueMat2 {
            e: [f(a, p, b, s), f(a, q, b, t), f(c, p, d, s), f(c, q, d, t)],
            r,
        })
    }

    /// Inverse of a determinant-1 matrix.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unimodular() {
            return Err(Error::NotUnimodular(format!("{} (mod {})", self.det(), self.r)));
        }
        let [a, b, c, d] = self.e;
        let r = self.r;
        let neg = |x: u64| (r - x) % r;
        Ok(ResidueMat2 { e: [d, neg(b), neg(c), a], r })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { *self };
        let mut acc = Self::identity(self.r)?;
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * sq;
            }
            k >>= 1;
            sq = sq * sq;
        }
        Ok(acc)
    }

    /// Dense index in `[0, r^4)`, used as a set key.
    pub fn code(&self) -> u64 {
        let r = self.r;
        ((self.e[0] * r + self.e[1]) * r + self.e[2]) * r + self.e[3]
    }

    pub fn from_code(code: u64, r: u64) -> Self {
        let d = code % r;
        let c = (code / r) % r;
        let b = (code / (r * r)) % r;
        let a = code / (r * r * r);
        ResidueMat2 { e: [a, b, c, d], r }
    }
}

impl Mul for ResidueMat2 {
    type Output = ResidueMat2;
    fn mul(self, rhs: ResidueMat2) -> ResidueMat2 {
        self.checked_mul(&rhs).expect("residue matrices with different moduli")
    }
}

impl fmt::Display for ResidueMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.e;
        write!(f, "[[{a}, {b}], [{c}, {d}]] mod {}", self.r)
    }
}

/// Image of `x` under ℤ[1/m] → ℤ/rℤ; `m` must be invertible mod `r`.
pub fn reduce_fraction(x: &MFraction, r: u64) -> Result<u64> {
    if r < 2 {
        return Err(Error::BadModulus(r));
    }
    let m = x.m();
    let m_inv = mod_inverse(m % r, r).ok_or(Error::NotCoprime { r, m })?;
    let num = x
        .numerator()
        .mod_floor(&BigInt::from(r))
        .to_u64()
        .expect("residue below r");
    let mut scale = 1 % r;
    let mut base = m_inv;
    let mut k = x.exponent();
    while k > 0 {
        if k & 1 == 1 {
            scale = mulmod(scale, base, r);
        }
        base = mulmod(base, base, r);
        k >>= 1;
    }
    Ok(mulmod(num, scale, r))
}

/// Entrywise reduction of a matrix over ℤ[1/m] modulo `r`.
pub fn reduce_mod_r(mat: &Mat2M, r: u64) -> Result<ResidueMat2> {
    let mut e = [0u64; 4];
    for (slot, x) in e.iter_mut().zip(mat.entries()) {
        *slot = reduce_fraction(x, r)?;
    }
    Ok(ResidueMat2 { e, r })
}
