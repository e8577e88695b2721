use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use super::mfraction::MFraction;
use crate::error::{Error, Result};
use crate::text::{Cursor, ParseError, ParseErrorKind};

/// A 2×2 matrix `(a, b; c, d)` over ℤ[1/m].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Mat2MJson", into = "Mat2MJson")]
pub struct Mat2M {
    e: [MFraction; 4],
    m: u64,
}

impl Mat2M {
    pub fn new(a: MFraction, b: MFraction, c: MFraction, d: MFraction) -> Result<Self> {
        let m = a.m();
        for x in [&b, &c, &d] {
            if x.m() != m {
                return Err(Error::RingMismatch(m, x.m()));
            }
        }
        Ok(Mat2M { e: [a, b, c, d], m })
    }

    pub fn from_ints(rows: [[i64; 2]; 2], m: u64) -> Self {
        let f = |v: i64| MFraction::int(v, m);
        Mat2M {
            e: [f(rows[0][0]), f(rows[0][1]), f(rows[1][0]), f(rows[1][1])],
            m,
        }
    }

    pub fn identity(m: u64) -> Self {
        Self::from_ints([[1, 0], [0, 1]], m)
    }

    /// Elementary lower unitriangular `(1, 0; t, 1)`.
    pub fn lower(t: MFraction) -> Self {
        let m = t.m();
        Mat2M {
            e: [MFraction::one(m), MFraction::zero(m), t, MFraction::one(m)],
            m,
        }
    }

    /// Elementary upper unitriangular `(1, t; 0, 1)`.
    pub fn upper(t: MFraction) -> Self {
        let m = t.m();
        Mat2M {
            e: [MFraction::one(m), t, MFraction::zero(m), MFraction::one(m)],
            m,
        }
    }

    /// `diag(u, v)`.
    pub fn diag(u: MFraction, v: MFraction) -> Result<Self> {
        let m = u.m();
        Self::new(u, MFraction::zero(m), MFraction::zero(m), v)
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn a(&self) -> &MFraction {
        &self.e[0]
    }
    pub fn b(&self) -> &MFraction {
        &self.e[1]
    }
    pub fn c(&self) -> &MFraction {
        &self.e[2]
    }
    pub fn d(&self) -> &MFraction {
        &self.e[3]
    }

    pub fn entries(&self) -> &[MFraction; 4] {
        &self.e
    }

    pub fn det(&self) -> MFraction {
        &self.e[0] * &self.e[3] - &self.e[1] * &self.e[2]
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().is_one()
    }

    pub fn is_identity(&self) -> bool {
        self.e[0].is_one() && self.e[1].is_zero() && self.e[2].is_zero() && self.e[3].is_one()
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::RingMismatch(self.m, other.m));
        }
        let [a, b, c, d] = &self.e;
        let [p, q, r, s] = &other.e;
        Ok(Mat2M {
            e: [a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s],
            m: self.m,
        })
    }

    /// Inverse of a determinant-1 matrix: `(d, -b; -c, a)`.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if !det.is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        let [a, b, c, d] = &self.e;
        Ok(Mat2M {
            e: [d.clone(), -b, -c, a.clone()],
            m: self.m,
        })
    }

    /// `self^e`; negative powers need a unimodular matrix.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        Ok(base.pow_unsigned(e.unsigned_abs()))
    }

    fn pow_unsigned(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.m);
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Parses `[[p, q], [r, s]]` with `int` or `int/int` entries.
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
        let mut entries = Vec::with_capacity(4);
        cur.expect('[')?;
        for row in 0..2 {
            if row == 1 {
                cur.expect(',')?;
            }
            cur.expect('[')?;
            entries.push(MFraction::parse_cursor(cur, m)?);
            cur.expect(',')?;
            entries.push(MFraction::parse_cursor(cur, m)?);
            cur.expect(']')?;
        }
        cur.expect(']')?;
        let [a, b, c, d]: [MFraction; 4] = entries.try_into().expect("four entries");
        Ok(Mat2M { e: [a, b, c, d], m })
    }
}

impl Mul<&Mat2M> for &Mat2M {
    type Output = Mat2M;
    fn mul(self, rhs: &Mat2M) -> Mat2M {
        self.checked_mul(rhs).expect("Mat2M operands from different rings")
    }
}

impl Mul<Mat2M> for Mat2M {
    type Output = Mat2M;
    fn mul(self, rhs: Mat2M) -> Mat2M {
        &self * &rhs
    }
}

impl fmt::Display for Mat2M {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.e;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// JSON form: `{"m": "2", "rows": [["1", "-1/2"], ["0", "1"]]}`. Big
/// integers travel as strings.
#[derive(Serialize, Deserialize)]
struct Mat2MJson {
    m: String,
    rows: [[String; 2]; 2],
}

impl From<Mat2M> for Mat2MJson {
    fn from(x: Mat2M) -> Self {
        let s = |i: usize| x.e[i].to_string();
        Mat2MJson {
            m: x.m.to_string(),
            rows: [[s(0), s(1)], [s(2), s(3)]],
        }
    }
}

impl TryFrom<Mat2MJson> for Mat2M {
    type Error = String;
    fn try_from(j: Mat2MJson) -> std::result::Result<Self, String> {
        let m: u64 = j.m.parse().map_err(|e| format!("bad m `{}`: {e}", j.m))?;
        if m == 0 {
            return Err("m must be at least 1".into());
        }
        let p = |s: &str| MFraction::parse(s, m).map_err(|e| e.to_string());
        Ok(Mat2M {
            e: [p(&j.rows[0][0])?, p(&j.rows[0][1])?, p(&j.rows[1][0])?, p(&j.rows[1][1])?],
            m,
        })
    }
}

/// `A = (1, 0; 1, 1)`.
pub fn mat_a(m: u64) -> Mat2M {
    Mat2M::from_ints([[1, 0], [1, 1]], m)
}

/// `B = (0, 1; -1, 0)`.
pub fn mat_b(m: u64) -> Mat2M {
    Mat2M::from_ints([[0, 1], [-1, 0]], m)
}

/// `Q_m = (1, -1/m; 0, 1)`.
pub fn mat_q(m: u64) -> Mat2M {
    Mat2M::upper(-MFraction::new(1, 1, m).expect("m >= 1"))
}

/// `U_m = diag(m, 1/m)`.
pub fn mat_u(m: u64) -> Mat2M {
    Mat2M::diag(MFraction::int(m, m), MFraction::new(1, 1, m).expect("m >= 1")).expect("same ring")
}
