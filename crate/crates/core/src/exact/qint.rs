//! Fixed-width algebraic integers `a + b·ω` of `Z[√2]` (ω² = 2) or `Z[φ]` (ω² = ω + 1).
//!
//! Reflection matrices of every matrix-mode type have entries here, so group
//! enumeration and per-word products avoid big rationals. All arithmetic is
//! checked and reports [`Error::Overflow`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::quad::{QuadField, QuadScalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QInt {
    pub a: i64,
    pub b: i64,
}

impl QInt {
    pub const ZERO: QInt = QInt { a: 0, b: 0 };
    pub const ONE: QInt = QInt { a: 1, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        QInt { a, b }
    }

    pub const fn int(a: i64) -> Self {
        QInt { a, b: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn add(self, o: QInt) -> Result<QInt> {
        Ok(QInt {
            a: self.a.checked_add(o.a).ok_or(Error::Overflow)?,
            b: self.b.checked_add(o.b).ok_or(Error::Overflow)?,
        })
    }

    pub fn sub(self, o: QInt) -> Result<QInt> {
        Ok(QInt {
            a: self.a.checked_sub(o.a).ok_or(Error::Overflow)?,
            b: self.b.checked_sub(o.b).ok_or(Error::Overflow)?,
        })
    }

    pub fn neg(self) -> Result<QInt> {
        QInt::ZERO.sub(self)
    }

    pub fn mul(self, o: QInt, field: QuadField) -> Result<QInt> {
        let (a, b, c, d) = (self.a as i128, self.b as i128, o.a as i128, o.b as i128);
        let (ra, rb) = match field {
            QuadField::Rational => (a * c, 0),
            QuadField::Sqrt2 => (a * c + 2 * b * d, a * d + b * c),
            QuadField::Sqrt5 => (a * c + b * d, a * d + b * c + b * d),
        };
        Ok(QInt { a: narrow(ra)?, b: narrow(rb)? })
    }

    /// Exact division by a rational integer; fails if the quotient is not integral.
    pub fn div_int(self, k: i64) -> Result<QInt> {
        if k == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.a % k != 0 || self.b % k != 0 {
            return Err(Error::Precondition(format!("{self} not divisible by {k}")));
        }
        Ok(QInt { a: self.a / k, b: self.b / k })
    }

    /// Sign of the real number `a + b·ω`.
    pub fn signum(self, field: QuadField) -> i8 {
        let (a, b) = (self.a as i128, self.b as i128);
        match field {
            QuadField::Rational => a.signum() as i8,
            // a + b√2
            QuadField::Sqrt2 => sign_sum_sqrt(a, b, 2),
            // a + bφ = ((2a + b) + b√5) / 2
            QuadField::Sqrt5 => sign_sum_sqrt(2 * a + b, b, 5),
        }
    }

    pub fn to_scalar(self, field: QuadField) -> QuadScalar {
        let int = |n: i64| BigRational::from_integer(BigInt::from(n));
        match field {
            QuadField::Rational => QuadScalar::from_int(self.a),
            QuadField::Sqrt2 => QuadScalar::new(int(self.a), int(self.b), field).unwrap(),
            QuadField::Sqrt5 => {
                let half_b = BigRational::new(BigInt::from(self.b), BigInt::from(2));
                QuadScalar::new(int(self.a) + &half_b, half_b, field).unwrap()
            }
        }
    }

    /// Inverse of [`QInt::to_scalar`]; fails when `x` is not an algebraic integer
    /// fitting in 64 bits.
    pub fn from_scalar(x: &QuadScalar, field: QuadField) -> Result<QInt> {
        let joined = x.field().join(field)?;
        let p = x.rational_part();
        let q = x.irrational_part();
        let (a, b) = match joined {
            QuadField::Rational => (p.clone(), BigRational::zero()),
            QuadField::Sqrt2 => (p.clone(), q.clone()),
            // p + q√5 = (p − q) + 2q·φ
            QuadField::Sqrt5 => (p - q, q * BigRational::from_integer(BigInt::from(2))),
        };
        let to_i64 = |r: &BigRational| -> Result<i64> {
            if !r.is_integer() {
                return Err(Error::Precondition(format!("{x} is not an algebraic integer")));
            }
            r.to_integer().to_i64().ok_or(Error::Overflow)
        };
        Ok(QInt { a: to_i64(&a)?, b: to_i64(&b)? })
    }
}

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow)
}

/// Sign of `p + q·√d` for integers `p`, `q`.
fn sign_sum_sqrt(p: i128, q: i128, d: i128) -> i8 {
    let (sp, sq) = (p.signum() as i8, q.signum() as i8);
    if sq == 0 {
        return sp;
    }
    if sp == 0 || sp == sq {
        return sq;
    }
    let lhs = p * p;
    let rhs = d * q * q;
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => sp,
        std::cmp::Ordering::Less => sq,
        std::cmp::Ordering::Equal => 0,
    }
}

impl fmt::Display for QInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}{:+}w", self.a, self.b)
        }
    }
}

/// Square matrix over [`QInt`] with a shared field tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZMat {
    pub n: usize,
    pub field: QuadField,
    pub data: Vec<QInt>,
}

impl ZMat {
    pub fn identity(n: usize, field: QuadField) -> Self {
        let mut data = vec![QInt::ZERO; n * n];
        for i in 0..n {
            data[i * n + i] = QInt::ONE;
        }
        ZMat { n, field, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> QInt {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, o: &ZMat) -> Result<ZMat> {
        let n = self.n;
        let mut data = vec![QInt::ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = o.get(k, j);
                    if y.is_zero() {
                        continue;
                    }
                    let cell = &mut data[i * n + j];
                    *cell = cell.add(x.mul(y, self.field)?)?;
                }
            }
        }
        Ok(ZMat { n, field: self.field, data })
    }

    pub fn trace(&self) -> Result<QInt> {
        (0..self.n).try_fold(QInt::ZERO, |acc, i| acc.add(self.get(i, i)))
    }

    pub fn is_identity(&self) -> bool {
        *self == ZMat::identity(self.n, self.field)
    }

    /// Characteristic polynomial `det(λI − M)`, ascending coefficients, by
    /// the Faddeev–LeVerrier recursion. The divisions by `k` are exact
    /// because the coefficients are algebraic integers.
    pub fn char_poly(&self) -> Result<Vec<QInt>> {
        let n = self.n;
        let mut coeffs = vec![QInt::ZERO; n + 1];
        coeffs[n] = QInt::ONE;
        let mut m = ZMat { n, field: self.field, data: vec![QInt::ZERO; n * n] };
        for k in 1..=n {
            // M_k = A·M_{k−1} + c_{n−k+1}·I
            let mut next = self.mul(&m)?;
            let c = coeffs[n - k + 1];
            for i in 0..n {
                next.data[i * n + i] = next.data[i * n + i].add(c)?;
            }
            let t = self.mul(&next)?.trace()?;
            coeffs[n - k] = t.neg()?.div_int(k as i64)?;
            m = next;
        }
        Ok(coeffs)
    }

    pub fn to_rows(&self) -> Vec<Vec<QInt>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}
