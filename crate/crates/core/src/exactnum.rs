//! Exact arithmetic over the rationals and real quadratic fields `Q(sqrt d)`.
//!
//! Every value is immutable and normalized: rationals are in lowest terms
//! with a positive denominator, and a [`QuadExt`] always carries a
//! squarefree radicand `d`, with `d = 0` reserved for the rational subfield.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::real::Real;

/// Arbitrary-precision rational number in lowest terms.
pub type Rational = BigRational;

/// Builds `num / den` as a [`Rational`]. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::domain(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Splits `n = k^2 * d` with `d` squarefree, by trial division.
pub fn factor_square(n: &BigInt) -> Result<(BigUint, BigUint)> {
    if !n.is_positive() {
        return Err(Error::domain(format!("factor_square needs n >= 1, got {n}")));
    }
    let mut rest = n.magnitude().clone();
    let mut k = BigUint::one();
    let mut d = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            k *= p.pow(e / 2);
            if e % 2 == 1 {
                d *= &p;
            }
        }
        p += 1u32;
    }
    d *= rest;
    Ok((k, d))
}

/// Binary64 approximation with a guaranteed absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approx {
    pub value: f64,
    pub error: f64,
}

impl Approx {
    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.error
    }
}

/// Distance from `|x|` to the next larger binary64 value.
pub fn ulp(x: f64) -> f64 {
    let a = x.abs();
    a.next_up() - a
}

fn ldexp(mut x: f64, mut exp: i64) -> f64 {
    while exp > 1000 {
        x *= 2f64.powi(1000);
        exp -= 1000;
    }
    while exp < -1000 {
        x *= 2f64.powi(-1000);
        exp += 1000;
    }
    x * 2f64.powi(exp as i32)
}

fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `a + b*sqrt(d)` with rational `a`, `b` and squarefree `d >= 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: BigUint,
}

/// Field operations accepted by [`qe_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl QuadExt {
    /// Builds `a + b*sqrt(d)`, pulling square factors out of `d`.
    pub fn new(a: Rational, b: Rational, d: impl Into<BigUint>) -> Self {
        let d: BigUint = d.into();
        if d.is_zero() || b.is_zero() {
            return Self::rational(a);
        }
        let (k, d) = factor_square(&BigInt::from(d)).expect("d > 0 checked above");
        let b = b * Rational::from_integer(BigInt::from(k));
        if d.is_one() {
            return Self::rational(a + b);
        }
        QuadExt { a, b, d }
    }

    pub fn rational(a: Rational) -> Self {
        QuadExt { a, b: Rational::zero(), d: BigUint::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `sqrt(n)` for a nonnegative integer `n`, exact.
    pub fn sqrt_of(n: impl Into<BigUint>) -> Self {
        Self::new(Rational::zero(), Rational::one(), n)
    }

    /// Square root of a nonnegative rational `p/q`, as `sqrt(p*q)/q`.
    pub fn sqrt_rational(q: &Rational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::domain(format!("square root of negative rational {q}")));
        }
        if q.is_zero() {
            return Ok(Self::zero());
        }
        let radicand = (q.numer() * q.denom()).to_biguint().expect("positive");
        let coef = Rational::new(BigInt::one(), q.denom().clone());
        Ok(Self::new(Rational::zero(), coef, radicand))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> &BigUint {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// Galois conjugate `a - b*sqrt(d)`.
    pub fn conj(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -self.b.clone(), d: self.d.clone() }
    }

    /// Field norm `a^2 - b^2 d`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * self.d_rational()
    }

    fn d_rational(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.d.clone()))
    }

    fn common_field(&self, other: &Self) -> Result<BigUint> {
        if self.d.is_zero() {
            Ok(other.d.clone())
        } else if other.d.is_zero() || self.d == other.d {
            Ok(self.d.clone())
        } else {
            Err(Error::IncompatibleField(self.d.to_string(), other.d.to_string()))
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        let d = self.common_field(rhs)?;
        Ok(Self::new(&self.a + &rhs.a, &self.b + &rhs.b, d))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&-rhs.clone())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        let d = self.common_field(rhs)?;
        let dq = Rational::from_integer(BigInt::from(d.clone()));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dq;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Ok(Self::new(a, b, d))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.common_field(rhs)?;
        if rhs.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        let n = rhs.norm();
        let num = self.checked_mul(&rhs.conj())?;
        Ok(num.scale(&n.recip()))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(&self.a * q, &self.b * q, self.d.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    /// Exact sign of the real embedding.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: the term of larger magnitude wins
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * self.d_rational();
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    /// Exact comparison of real embeddings.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        Ok(self.checked_sub(other)?.signum())
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Binary64 value with an absolute error bound of at most one ulp.
    pub fn to_f64_bounded(&self) -> Approx {
        if self.b.is_zero() {
            let value = rational_to_f64(&self.a);
            let error = if Rational::from_float(value).as_ref() == Some(&self.a) {
                0.0
            } else {
                ulp(value)
            };
            return Approx { value, error };
        }
        // Fixed-point evaluation: X = floor(a 2^k) +- isqrt(floor(b^2 d 4^k)),
        // |X - x 2^k| <= 2. Double k until X carries at least 62 bits.
        let b2d = &self.b * &self.b * self.d_rational();
        let negative_b = self.b.is_negative();
        let mut k: usize = 64;
        loop {
            let a_scaled = (self.a.numer() << k).div_floor(self.a.denom());
            let r_scaled = (b2d.numer() << (2 * k)).div_floor(b2d.denom());
            let root = r_scaled.sqrt();
            let x = if negative_b { a_scaled - root } else { a_scaled + root };
            if x.bits() >= 62 {
                let mantissa = x.to_f64().unwrap_or(f64::NAN);
                let value = ldexp(mantissa, -(k as i64));
                return Approx { value, error: ulp(value) };
            }
            k *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_f64_bounded().value
    }

    pub fn to_real<T: Real>(&self) -> T {
        T::lit(self.to_f64())
    }
}

/// Exact `x op y` in a common quadratic field.
pub fn qe_arith(x: &QuadExt, y: &QuadExt, op: ArithOp) -> Result<QuadExt> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

pub fn qe_compare(x: &QuadExt, y: &QuadExt) -> Result<Ordering> {
    x.try_cmp(y)
}

pub fn qe_to_float(x: &QuadExt) -> Approx {
    x.to_f64_bounded()
}

impl std::ops::Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a, b: -self.b, d: self.d }
    }
}

impl From<Rational> for QuadExt {
    fn from(q: Rational) -> Self {
        QuadExt::rational(q)
    }
}

impl From<i64> for QuadExt {
    fn from(n: i64) -> Self {
        QuadExt::from_int(n)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let mag = self.b.abs();
        let surd = if mag.is_one() {
            format!("sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", mag, self.d)
        };
        let neg = self.b.is_negative();
        match (self.a.is_zero(), neg) {
            (true, false) => write!(f, "{surd}"),
            (true, true) => write!(f, "-{surd}"),
            (false, false) => write!(f, "{} + {surd}", self.a),
            (false, true) => write!(f, "{} - {surd}", self.a),
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadExt({self})")
    }
}

fn parse_term(term: &str) -> Result<QuadExt> {
    let bad = || Error::Parse(format!("malformed term {term:?}"));
    let Some(pos) = term.find("sqrt(") else {
        return parse_rational(term).map(QuadExt::rational);
    };
    let inner = term[pos + 5..].strip_suffix(')').ok_or_else(bad)?;
    let radicand: BigUint = inner.parse().map_err(|_| bad())?;
    let coef = match term[..pos].strip_suffix('*') {
        Some(c) => parse_rational(c)?,
        None if pos == 0 => Rational::one(),
        None => return Err(bad()),
    };
    Ok(QuadExt::new(Rational::zero(), coef, radicand))
}

impl FromStr for QuadExt {
    type Err = Error;

    /// Accepts sums of terms `q`, `sqrt(n)` and `q*sqrt(n)` joined by `+`/`-`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        let mut total = QuadExt::zero();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..=bytes.len() {
            let at_split = i == bytes.len()
                || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'(' && bytes[i - 1] != b'*');
            if !at_split {
                continue;
            }
            let raw = &compact[start..i];
            let (negate, body) = match raw.as_bytes()[0] {
                b'-' => (true, &raw[1..]),
                b'+' => (false, &raw[1..]),
                _ => (false, raw),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {s:?}")));
            }
            let term = parse_term(body)?;
            let term = if negate { -term } else { term };
            total = total.checked_add(&term)?;
            start = i;
        }
        Ok(total)
    }
}

impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadExt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Integer square root of a nonnegative integer if it is a perfect square.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}
