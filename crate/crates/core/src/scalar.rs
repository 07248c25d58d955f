//! Coordinate scalars.
//!
//! A computation runs entirely in one of two modes: exact rational arithmetic
//! ([`Rational`]) or double precision ([`f64`]). The mode is fixed by the type
//! parameter, so the two can never mix. Every comparison against zero goes
//! through [`Scalar::is_negligible`], which ignores the tolerance in exact mode.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

/// Arithmetic needed by determinant and polynomial kernels. Implemented by the
/// coordinate scalars and by the integer types used inside the exact scans.
pub trait Ring: Clone + Debug + PartialOrd + num_traits::Num + Signed + Send + Sync + 'static {}

impl<T> Ring for T where T: Clone + Debug + PartialOrd + num_traits::Num + Signed + Send + Sync + 'static {}

pub trait Scalar: Ring + Display {
    const MODE: Mode;

    fn from_i64(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Zero test. `tol` is an absolute bound used only in float mode.
    fn is_negligible(&self, tol: f64) -> bool;

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).is_negligible(tol)
    }

    /// Decimal rendering used in reports: `p/q` for rationals, shortest
    /// round-trip form for floats.
    fn to_decimal_string(&self) -> String;

    /// Parses a coordinate given as text (integer, decimal, exponent or `p/q`).
    fn parse_coordinate(s: &str) -> Result<Self>;

    /// Converts distance values into the representation the scan kernels
    /// run on.
    #[doc(hidden)]
    fn lower(values: &[Self]) -> ScanInput;

    #[doc(hidden)]
    fn lift(value: Lifted) -> Self;
}

/// Kernel input: floats as-is, or rationals as integer numerators over one
/// common denominator.
#[doc(hidden)]
pub enum ScanInput {
    Float(Vec<f64>),
    Exact { numerators: Vec<BigInt>, denominator: BigInt },
}

#[doc(hidden)]
pub enum Lifted {
    Float(f64),
    Exact(Rational),
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn to_decimal_string(&self) -> String {
        self.to_string()
    }

    fn parse_coordinate(s: &str) -> Result<Self> {
        parse_rational(s)
    }

    fn lower(values: &[Self]) -> ScanInput {
        let denominator = common_denominator(values);
        let numerators =
            values.iter().map(|v| (v * BigRational::from_integer(denominator.clone())).to_integer()).collect();
        ScanInput::Exact { numerators, denominator }
    }

    fn lift(value: Lifted) -> Self {
        match value {
            Lifted::Exact(r) => r,
            Lifted::Float(v) => rational_from_f64(v).unwrap_or_else(Rational::zero),
        }
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn to_decimal_string(&self) -> String {
        format!("{self:?}")
    }

    fn parse_coordinate(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p: f64 = p.trim().parse().map_err(|_| bad_number(s))?;
            let q: f64 = q.trim().parse().map_err(|_| bad_number(s))?;
            return finite(p / q, s);
        }
        finite(t.parse().map_err(|_| bad_number(s))?, s)
    }

    fn lower(values: &[Self]) -> ScanInput {
        ScanInput::Float(values.to_vec())
    }

    fn lift(value: Lifted) -> Self {
        match value {
            Lifted::Float(v) => v,
            Lifted::Exact(r) => Scalar::to_f64(&r),
        }
    }
}

fn finite(v: f64, s: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Parse(format!("not a finite number: {s:?}")))
    }
}

fn bad_number(s: &str) -> Error {
    Error::Parse(format!("not a number: {s:?}"))
}

const MAX_EXPONENT: i32 = 4096;

/// Exact parse of `[-+]digits[.digits][e[-+]digits]` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p = parse_rational(p)?;
        let q = parse_rational(q)?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(p / q);
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = t[pos + 1..].parse().map_err(|_| bad_number(s))?;
            if e.abs() > MAX_EXPONENT {
                return Err(Error::Parse(format!("exponent out of range in {s:?}")));
            }
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad_number(s));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad_number(s));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt =
        if all_digits.is_empty() { BigInt::zero() } else { all_digits.parse().map_err(|_| bad_number(s))? };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Least common multiple of the denominators; multiplying every value by it
/// yields integers.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub(crate) fn rational_from_f64(v: f64) -> Option<Rational> {
    BigRational::from_float(v)
}
