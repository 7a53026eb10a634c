//! Numeric scalars: `f64` for speed, exact big rationals for certificates.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. The tolerance
//! hooks return zero in exact mode, so the same code path performs exact
//! comparisons with rationals and tolerant comparisons with floats.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Arbitrary-precision fraction.
pub type Rational = BigRational;

/// Arithmetic mode of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Float,
    Rational,
}

impl Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Float => f.write_str("float"),
            Mode::Rational => f.write_str("rational"),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "float" => Ok(Mode::Float),
            "rational" => Ok(Mode::Rational),
            other => Err(format!("unknown mode `{other}` (expected float or rational)")),
        }
    }
}

/// Serialized form of a scalar: rationals travel as `"p/q"` strings,
/// floats as plain JSON numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Exact(String),
    Float(f64),
}

impl Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Num::Exact(s) => f.write_str(s),
            Num::Float(x) => write!(f, "{x}"),
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn from_i64(n: i64) -> Self;

    /// `num / den`; panics on a zero denominator.
    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Converts a float. Rational mode reads the shortest decimal
    /// representation, so `0.3` becomes exactly `3/10`.
    fn from_f64(x: f64) -> Option<Self>;

    /// Parses `"p/q"`, integers and decimals with an optional exponent.
    fn parse(s: &str) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn from_rational(r: &Rational) -> Self;

    fn to_num(&self) -> Num;

    fn from_num(n: &Num) -> Option<Self> {
        match n {
            Num::Exact(s) => Self::parse(s),
            Num::Float(x) => Self::from_f64(*x),
        }
    }

    fn abs(&self) -> Self;

    /// Primal/dual feasibility slack: `1e-9` for floats, zero for rationals.
    fn feasibility_tol() -> Self;

    /// Smallest admissible pivot magnitude: `1e-11` for floats, zero for rationals.
    fn pivot_tol() -> Self;

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }
}

/// `a <= b + tol`.
pub fn le_tol<T: Scalar>(a: &T, b: &T, tol: &T) -> bool {
    a.clone() <= b.clone() + tol.clone()
}

/// `|a - b| <= tol`.
pub fn eq_tol<T: Scalar>(a: &T, b: &T, tol: &T) -> bool {
    (a.clone() - b.clone()).abs() <= *tol
}

pub fn sum<'a, T: Scalar>(xs: impl IntoIterator<Item = &'a T>) -> T {
    xs.into_iter().fold(T::zero(), |acc, x| acc + x.clone())
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: f64 = p.trim().parse().ok()?;
            let q: f64 = q.trim().parse().ok()?;
            if q == 0.0 {
                return None;
            }
            return Some(p / q).filter(|x| x.is_finite());
        }
        s.parse::<f64>().ok().filter(|x| x.is_finite())
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_num(&self) -> Num {
        Num::Float(*self)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn feasibility_tol() -> Self {
        1e-9
    }

    fn pivot_tol() -> Self {
        1e-11
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Rational;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        // `Display` for f64 prints the shortest string that round-trips,
        // without exponent notation.
        parse_decimal(&format!("{x}"))
    }

    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            return Some(BigRational::new(p, q));
        }
        parse_decimal(s)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_num(&self) -> Num {
        Num::Exact(self.to_string())
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn feasibility_tol() -> Self {
        Self::zero()
    }

    fn pivot_tol() -> Self {
        Self::zero()
    }
}

/// Exact value of a decimal literal such as `-12.5e-3`.
fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let mut value = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}
