//! Field elements: exact rationals or binary64, chosen once per run.

use std::fmt::{self, Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator by `num-rational`.
pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Rational,
    Binary64,
}

impl Display for Arithmetic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arithmetic::Rational => f.write_str("rational"),
            Arithmetic::Binary64 => f.write_str("binary64"),
        }
    }
}

impl FromStr for Arithmetic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" | "exact" => Ok(Arithmetic::Rational),
            "binary64" | "f64" | "float" => Ok(Arithmetic::Binary64),
            other => Err(Error::Config(format!("unknown arithmetic `{other}`"))),
        }
    }
}

/// A scalar field closed under the scheme operations.
///
/// The two implementations are [`Rational`] (exact) and `f64`. Generic code
/// never mixes them: the mode is fixed by the type parameter of a run.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    const ARITHMETIC: Arithmetic;

    fn from_int(n: i64) -> Self;

    fn from_ratio(r: Ratio<i64>) -> Self;

    /// Exact for rationals (binary expansion of the double); `None` for
    /// non-finite input.
    fn from_f64(x: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Largest integer not exceeding the value.
    fn floor_int(&self) -> i64;

    /// Exact for rationals, nearest double otherwise.
    fn from_rational(q: &Rational) -> Self;

    /// Parses `p/q`, integers and decimal literals (`-1.25e-3`). Rationals
    /// parse decimals exactly.
    fn parse_literal(s: &str) -> Result<Self>;

    /// JSON form: `"p/q"` strings for rationals, numbers for binary64.
    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Self::parse_literal(s),
            Value::Number(n) => Self::parse_literal(&n.to_string()),
            other => Err(Error::ParseScalar(other.to_string())),
        }
    }

    /// Equality used when trimming arithmetic tails. Exact for rationals; a
    /// relative tolerance of a few ulps for binary64.
    fn tail_eq(&self, other: &Self) -> bool;

    /// `p/q` for rationals, shortest round-trip decimal for binary64.
    fn exact_string(&self) -> String;

    /// Decimal rendering for CSV output.
    fn decimal_string(&self) -> String;
}

impl Scalar for Rational {
    const ARITHMETIC: Arithmetic = Arithmetic::Rational;

    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_ratio(r: Ratio<i64>) -> Self {
        Rational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
    }

    fn from_f64(x: f64) -> Option<Self> {
        Rational::from_float(x)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Ratios of huge integers overflow the direct conversion.
            let shift = self.denom().bits().max(self.numer().bits()) as i64 - 60;
            if shift <= 0 {
                return f64::NAN;
            }
            let n = (self.numer() >> shift as usize).to_f64().unwrap_or(f64::NAN);
            let d = (self.denom() >> shift as usize).to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn floor_int(&self) -> i64 {
        self.floor()
            .to_integer()
            .to_i64()
            .expect("grid coordinate out of i64 range")
    }

    fn parse_literal(s: &str) -> Result<Self> {
        parse_rational(s).ok_or_else(|| Error::ParseScalar(s.to_string()))
    }

    fn to_json(&self) -> Value {
        Value::String(self.exact_string())
    }

    fn tail_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn exact_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn decimal_string(&self) -> String {
        format!("{:.16e}", Scalar::to_f64(self))
    }
}

impl Scalar for f64 {
    const ARITHMETIC: Arithmetic = Arithmetic::Binary64;

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(r: Ratio<i64>) -> Self {
        *r.numer() as f64 / *r.denom() as f64
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_rational(q: &Rational) -> Self {
        Scalar::to_f64(q)
    }

    fn floor_int(&self) -> i64 {
        self.floor() as i64
    }

    fn parse_literal(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p: f64 = p.trim().parse().map_err(|_| Error::ParseScalar(s.to_string()))?;
            let q: f64 = q.trim().parse().map_err(|_| Error::ParseScalar(s.to_string()))?;
            if q == 0.0 {
                return Err(Error::ParseScalar(s.to_string()));
            }
            return Ok(p / q);
        }
        t.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::ParseScalar(s.to_string()))
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn tail_eq(&self, other: &Self) -> bool {
        let scale = 1.0 + self.abs().max(other.abs());
        (self - other).abs() <= 8.0 * f64::EPSILON * scale
    }

    fn exact_string(&self) -> String {
        format!("{self:?}")
    }

    fn decimal_string(&self) -> String {
        format!("{self:?}")
    }
}

/// Exact parse of `p/q`, integer or decimal literals.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = parse_decimal(p.trim())?;
        let q = parse_decimal(q.trim())?;
        if q.is_zero() {
            return None;
        }
        return Some(p / q);
    }
    parse_decimal(t)
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str_radix(if all.is_empty() { "0" } else { &all }, 10).ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

/// Courant number `lambda = V dt / dx`, held as an exact ratio in `(0, 1]`
/// regardless of the arithmetic mode of the run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cfl(Ratio<i64>);

impl Cfl {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::CflOutOfRange(format!("{numer}/{denom}")));
        }
        Self::from_ratio(Ratio::new(numer, denom))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Result<Self> {
        if r <= Ratio::zero() || r > Ratio::one() {
            return Err(Error::CflOutOfRange(r.to_string()));
        }
        Ok(Cfl(r))
    }

    pub fn half() -> Self {
        Cfl(Ratio::new(1, 2))
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn to_scalar<S: Scalar>(&self) -> S {
        S::from_ratio(self.0)
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn is_half(&self) -> bool {
        self.0 == Ratio::new(1, 2)
    }

    /// Three-digit tag used in preset file names: 0.47 -> "047", 1/2 -> "050".
    pub fn file_tag(&self) -> String {
        let hundredths = (self.0 * Ratio::from_integer(100)).round().to_integer();
        format!("{hundredths:03}")
    }
}

impl Display for Cfl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Cfl {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let q = parse_rational(s).ok_or_else(|| Error::ParseScalar(s.to_string()))?;
        let numer = q.numer().to_i64();
        let denom = q.denom().to_i64();
        match (numer, denom) {
            (Some(n), Some(d)) => Cfl::new(n, d),
            _ => Err(Error::CflOutOfRange(s.to_string())),
        }
    }
}

impl Serialize for Cfl {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Cfl {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        let text = match &v {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            other => return Err(serde::de::Error::custom(format!("bad lambda {other}"))),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Smallest and largest elements of a non-empty iterator of partially
/// ordered values.
pub fn min_max<'a, S: Scalar>(values: impl IntoIterator<Item = &'a S>) -> Option<(S, S)> {
    let mut it = values.into_iter();
    let first = it.next()?.clone();
    Some(it.fold((first.clone(), first), |(lo, hi), v| {
        let lo = if *v < lo { v.clone() } else { lo };
        let hi = if *v > hi { v.clone() } else { hi };
        (lo, hi)
    }))
}

pub(crate) fn smaller<S: Scalar>(a: S, b: S) -> S {
    if b < a {
        b
    } else {
        a
    }
}

pub(crate) fn larger<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

/// `2^k` as an exact rational; handy for dyadic checks.
pub fn pow2(k: u32) -> Rational {
    Rational::from_integer(BigInt::one() << k as usize)
}

/// Converts an `i64` ratio to an exact rational.
pub fn ratio_to_rational(r: Ratio<i64>) -> Rational {
    <Rational as Scalar>::from_ratio(r)
}

impl From<Cfl> for Ratio<i64> {
    fn from(c: Cfl) -> Self {
        c.0
    }
}

/// Serde adapter storing a [`Rational`] as a `"p/q"` string (plain JSON
/// numbers are accepted on input and read exactly from their decimal text).
pub mod rational_str {
    use super::*;

    pub fn serialize<Ser: Serializer>(q: &Rational, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        s.serialize_str(&q.exact_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = Value::deserialize(d)?;
        <Rational as Scalar>::from_json(&v).map_err(serde::de::Error::custom)
    }
}
