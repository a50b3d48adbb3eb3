//! The coefficient field ℚ(i, √2).
//!
//! Every element is stored as `a + b·i + c·√2 + d·i√2` with rational
//! components. `BigRational` keeps every component in lowest terms, so two
//! equal field elements always have identical representations.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ExactError;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    a: BigRational,
    b: BigRational,
    c: BigRational,
    d: BigRational,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl ExactScalar {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        ExactScalar { a, b, c, d }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn i() -> Self {
        let mut s = Self::zero();
        s.b = BigRational::one();
        s
    }

    pub fn sqrt2() -> Self {
        let mut s = Self::zero();
        s.c = BigRational::one();
        s
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactScalar {
            a: r,
            ..Self::default()
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    /// `2^(half_exp / 2)`, exact because √2 is in the field.
    pub fn pow2_half(half_exp: i64) -> Self {
        let whole = half_exp.div_euclid(2);
        let odd = half_exp.rem_euclid(2) == 1;
        let base = if whole >= 0 {
            BigRational::from_integer(BigInt::from(2).pow(whole as u32))
        } else {
            BigRational::new(BigInt::one(), BigInt::from(2).pow((-whole) as u32))
        };
        if odd {
            ExactScalar {
                c: base,
                ..Self::default()
            }
        } else {
            Self::from_rational(base)
        }
    }

    pub fn components(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.b.is_zero() && self.c.is_zero() && self.d.is_zero()).then_some(&self.a)
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        ExactScalar {
            a: &self.a * r,
            b: &self.b * r,
            c: &self.c * r,
            d: &self.d * r,
        }
    }

    /// Complex conjugation `i ↦ −i`.
    pub fn conj(&self) -> Self {
        ExactScalar {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: -&self.d,
        }
    }

    /// Galois conjugation `√2 ↦ −√2`.
    pub fn conj_sqrt2(&self) -> Self {
        ExactScalar {
            a: self.a.clone(),
            b: self.b.clone(),
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        // x·conj(x) = u + v√2 lies in ℚ(√2); its inverse is (u − v√2)/(u² − 2v²).
        let n = self * &self.conj();
        let (u, v) = (&n.a, &n.c);
        let norm = u * u - rat(2, 1) * v * v;
        let inv_real = ExactScalar {
            a: u / &norm,
            c: -(v / &norm),
            ..Self::default()
        };
        Ok(&self.conj() * &inv_real)
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// A square root, when one exists among `±r`, `±2r`-shaped values with
    /// `r` a rational square. Covers every normalisation constant the free-field
    /// calibration can produce; returns `None` otherwise.
    pub fn sqrt(&self) -> Option<Self> {
        let r = self.as_rational()?;
        if r.is_zero() {
            return Some(Self::zero());
        }
        let (mag, imaginary) = if r.is_negative() {
            (-r, true)
        } else {
            (r.clone(), false)
        };
        let root = if let Some(q) = rational_sqrt(&mag) {
            Self::from_rational(q)
        } else {
            let q = rational_sqrt(&(&mag / rat(2, 1)))?;
            ExactScalar {
                c: q,
                ..Self::default()
            }
        };
        Some(if imaginary { &root * &Self::i() } else { root })
    }

    pub fn to_json(&self) -> ScalarJson {
        ScalarJson {
            a: self.a.to_string(),
            b: self.b.to_string(),
            c: self.c.to_string(),
            d: self.d.to_string(),
        }
    }

    pub fn from_json(j: &ScalarJson) -> Result<Self, ExactError> {
        Ok(ExactScalar {
            a: parse_rational(&j.a)?,
            b: parse_rational(&j.b)?,
            c: parse_rational(&j.c)?,
            d: parse_rational(&j.d)?,
        })
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let bad = || ExactError::Parse(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Canonical JSON form `{"a":"r","b":"r","c":"r","d":"r"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            c: &self.c + &o.c,
            d: &self.d + &o.d,
        }
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            c: &self.c - &o.c,
            d: &self.d - &o.d,
        }
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        // Fast path: most coefficients in practice are rational.
        if let Some(r) = o.as_rational() {
            return self.scale_rational(r);
        }
        if let Some(r) = self.as_rational() {
            return o.scale_rational(r);
        }
        let two = rat(2, 1);
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&o.a, &o.b, &o.c, &o.d);
        // basis {1, i, s, is} with i² = −1, s² = 2
        ExactScalar {
            a: a1 * a2 - b1 * b2 + &two * (c1 * c2 - d1 * d2),
            b: a1 * b2 + b1 * a2 + &two * (c1 * d2 + d1 * c2),
            c: a1 * c2 + c1 * a2 - (b1 * d2 + d1 * b2),
            d: a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        }
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: ExactScalar) -> ExactScalar {
        &self + &o
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: ExactScalar) -> ExactScalar {
        &self - &o
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: ExactScalar) -> ExactScalar {
        &self * &o
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, o: &ExactScalar) {
        self.a += &o.a;
        self.b += &o.b;
        self.c += &o.c;
        self.d += &o.d;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, o: &ExactScalar) {
        self.a -= &o.a;
        self.b -= &o.b;
        self.c -= &o.c;
        self.d -= &o.d;
    }
}

impl From<BigRational> for ExactScalar {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [
            (&self.a, ""),
            (&self.b, "i"),
            (&self.c, "√2"),
            (&self.d, "i√2"),
        ];
        let mut first = true;
        for (r, unit) in parts {
            if r.is_zero() {
                continue;
            }
            let neg = r.is_negative();
            let mag = r.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if unit.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", unit)?;
            } else if mag.numer().is_one() {
                write!(f, "{}/{}", unit, mag.denom())?;
            } else {
                write!(f, "{}{}", mag, unit)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
