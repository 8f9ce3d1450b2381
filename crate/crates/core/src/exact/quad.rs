//! Exact numbers `a + b·√d` with rational `a`, `b` and `d ∈ {1, 2, 5}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The quadratic field a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QuadField {
    Rational,
    Sqrt2,
    Sqrt5,
}

impl QuadField {
    pub fn radicand(self) -> u8 {
        match self {
            QuadField::Rational => 1,
            QuadField::Sqrt2 => 2,
            QuadField::Sqrt5 => 5,
        }
    }

    pub fn from_radicand(d: u8) -> Result<Self> {
        match d {
            1 => Ok(QuadField::Rational),
            2 => Ok(QuadField::Sqrt2),
            5 => Ok(QuadField::Sqrt5),
            other => Err(Error::Format(format!("unsupported radicand {other}"))),
        }
    }

    /// Smallest field containing both; `Rational` embeds into either irrational field.
    pub fn join(self, other: QuadField) -> Result<QuadField> {
        match (self, other) {
            (QuadField::Rational, f) | (f, QuadField::Rational) => Ok(f),
            (f, g) if f == g => Ok(f),
            (f, g) => Err(Error::FieldMismatch(f.radicand(), g.radicand())),
        }
    }
}

/// Exact scalar `a + b·√d`. Kept normalized: `b = 0` forces the `Rational` tag,
/// so equality and hashing are value-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadScalar {
    a: BigRational,
    b: BigRational,
    field: QuadField,
}

impl QuadScalar {
    pub fn new(a: BigRational, b: BigRational, field: QuadField) -> Result<Self> {
        if field == QuadField::Rational && !b.is_zero() {
            return Err(Error::Format("d = 1 requires b = 0".into()));
        }
        Ok(Self::normalized(a, b, field))
    }

    fn normalized(a: BigRational, b: BigRational, field: QuadField) -> Self {
        let field = if b.is_zero() { QuadField::Rational } else { field };
        QuadScalar { a, b, field }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_rational(q: BigRational) -> Self {
        QuadScalar { a: q, b: BigRational::zero(), field: QuadField::Rational }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `√2`.
    pub fn sqrt2() -> Self {
        Self::normalized(BigRational::zero(), BigRational::one(), QuadField::Sqrt2)
    }

    /// The golden ratio φ = (1+√5)/2 = 2cos(π/5).
    pub fn phi() -> Self {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        Self::normalized(half.clone(), half, QuadField::Sqrt5)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Integer value when the scalar is a rational integer.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if self.b.is_zero() && self.a.is_integer() {
            Some(self.a.to_integer())
        } else {
            None
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_bigint().and_then(|n| n.to_i64())
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.field.radicand() as f64).sqrt()
    }

    /// Galois conjugate `a − b√d`.
    pub fn conj(&self) -> Self {
        Self::normalized(self.a.clone(), -self.b.clone(), self.field)
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> BigRational {
        let d = BigRational::from_integer(BigInt::from(self.field.radicand()));
        &self.a * &self.a - d * &self.b * &self.b
    }

    /// Sign of the real number `a + b√d`.
    pub fn signum(&self) -> i8 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with d·b²
        let d = BigRational::from_integer(BigInt::from(self.field.radicand()));
        let lhs = &self.a * &self.a;
        let rhs = d * &self.b * &self.b;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let field = self.field.join(other.field)?;
        Ok(Self::normalized(&self.a + &other.a, &self.b + &other.b, field))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let field = self.field.join(other.field)?;
        Ok(Self::normalized(&self.a - &other.a, &self.b - &other.b, field))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let field = self.field.join(other.field)?;
        if self.b.is_zero() && other.b.is_zero() {
            return Ok(Self::from_rational(&self.a * &other.a));
        }
        let d = BigRational::from_integer(BigInt::from(field.radicand()));
        let a = &self.a * &other.a + d * &self.b * &other.b;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::normalized(a, b, field))
    }

    pub fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::normalized(&self.a / &n, -(&self.b / &n), self.field))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.try_inv()?)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let k = BigRational::from_integer(BigInt::from(k));
        Self::normalized(&self.a * &k, &self.b * &k, self.field)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_json(&self) -> ScalarJson {
        ScalarJson {
            num: self.a.numer().to_string(),
            den: self.a.denom().to_string(),
            irr_num: self.b.numer().to_string(),
            irr_den: self.b.denom().to_string(),
            d: self.field.radicand(),
        }
    }

    pub fn from_json(j: &ScalarJson) -> Result<Self> {
        let parse = |s: &str| -> Result<BigInt> {
            s.parse::<BigInt>().map_err(|e| Error::Format(format!("bad integer {s:?}: {e}")))
        };
        let den = parse(&j.den)?;
        let irr_den = parse(&j.irr_den)?;
        if den.is_zero() || irr_den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let a = BigRational::new(parse(&j.num)?, den);
        let b = BigRational::new(parse(&j.irr_num)?, irr_den);
        Self::new(a, b, QuadField::from_radicand(j.d)?)
    }
}

fn sign(q: &BigRational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Wire form of a scalar; all integers are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub num: String,
    pub den: String,
    pub irr_num: String,
    pub irr_den: String,
    pub d: u8,
}

impl Default for QuadScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for QuadScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

// Operator forms panic on mixed √2/√5 operands. Callers that can see mixed
// fields use the `try_*` methods instead.
macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<'a> $trait<&'a QuadScalar> for &'a QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: &'a QuadScalar) -> QuadScalar {
                self.$try(rhs).expect("mixed quadratic fields")
            }
        }
        impl $trait<QuadScalar> for QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: QuadScalar) -> QuadScalar {
                (&self).$try(&rhs).expect("mixed quadratic fields")
            }
        }
        impl<'a> $trait<&'a QuadScalar> for QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: &'a QuadScalar) -> QuadScalar {
                (&self).$try(rhs).expect("mixed quadratic fields")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar::normalized(-self.a, -self.b, self.field)
    }
}

impl Neg for &QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar::normalized(-self.a.clone(), -self.b.clone(), self.field)
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let d = self.field.radicand();
        let irr = if self.b.is_one() {
            format!("√{d}")
        } else if (-&self.b).is_one() {
            format!("-√{d}")
        } else {
            format!("{}√{d}", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{irr}")
        } else if irr.starts_with('-') {
            write!(f, "{}{irr}", self.a)
        } else {
            write!(f, "{}+{irr}", self.a)
        }
    }
}
