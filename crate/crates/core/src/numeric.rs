//! Scalars shared by the exact-rational and floating evaluation paths.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Arbitrary-precision rational used by every exact path.
pub type Rational = BigRational;

/// Bit length beyond which an exact numerator or denominator is refused.
pub const MAX_EXACT_BITS: u64 = 1 << 16;

/// Absolute threshold under which a floating quantity counts as a pole.
pub const FLOAT_POLE_TOL: f64 = 1e-12;

/// A finite value, or the formal infinity produced at a pole.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendedValue<T> {
    Finite(T),
    Infinite,
}

impl<T> ExtendedValue<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedValue::Infinite)
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            ExtendedValue::Finite(v) => Some(v),
            ExtendedValue::Infinite => None,
        }
    }

    pub fn into_finite(self) -> Option<T> {
        match self {
            ExtendedValue::Finite(v) => Some(v),
            ExtendedValue::Infinite => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> ExtendedValue<U> {
        match self {
            ExtendedValue::Finite(v) => ExtendedValue::Finite(f(v)),
            ExtendedValue::Infinite => ExtendedValue::Infinite,
        }
    }
}

impl<T: fmt::Display> fmt::Display for ExtendedValue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::Finite(v) => v.fmt(f),
            ExtendedValue::Infinite => f.write_str("inf"),
        }
    }
}

/// Field operations needed by the recurrences, implemented for `f64` and
/// [`Rational`].
pub trait Scalar:
    Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync
{
    /// `false` once an exact value has grown past [`MAX_EXACT_BITS`].
    fn within_capacity(&self) -> bool {
        true
    }

    /// Pole test for denominators: exact zero for rationals, `|x| <=
    /// FLOAT_POLE_TOL` for floats.
    fn is_negligible(&self) -> bool;

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("small integers are representable")
    }
}

impl Scalar for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() <= FLOAT_POLE_TOL
    }
}

impl Scalar for Rational {
    fn within_capacity(&self) -> bool {
        self.numer().bits() <= MAX_EXACT_BITS && self.denom().bits() <= MAX_EXACT_BITS
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

/// Which arithmetic a caller wants for a parameter that is rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Floating,
}

/// A value produced by either arithmetic path.
#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Exact(Rational),
    Float(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(q) => q.as_f64(),
            Number::Float(x) => *x,
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(q) => fmt_rational(q, f),
            Number::Float(x) => write!(f, "{}", format_sig17(*x)),
        }
    }
}

fn fmt_rational(q: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// `p/q` text for a rational, or just `p` when the denominator is one.
pub fn rational_to_string(q: &Rational) -> String {
    struct Show<'a>(&'a Rational);
    impl fmt::Display for Show<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            fmt_rational(self.0, f)
        }
    }
    Show(q).to_string()
}

/// Parses `7`, `-3`, `9/2` or a plain decimal such as `4.25` into an exact
/// rational. Exponent notation is not accepted.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).ok()?;
        let den = BigInt::from_str(den.trim()).ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&digits).ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = Rational::new(numer, denom);
    Some(if negative { -q } else { q })
}

/// Exact comparison `q >= j * (r - sqrt(r^2 - 4r)) / 2` for rational `q`, `r`
/// with `r >= 4`.
pub(crate) fn ge_multiple_of_band_left(q: &Rational, j: u64, r: &Rational) -> bool {
    let j = Rational::from_integer(BigInt::from(j));
    let disc = r * r - Rational::from_integer(BigInt::from(4)) * r;
    let lhs = &j * r - Rational::from_integer(BigInt::from(2)) * q;
    if !lhs.is_positive() {
        return true;
    }
    &lhs * &lhs <= &j * &j * disc
}

/// Integer square root of a nonnegative rational, when it is a perfect square.
pub(crate) fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Formats with 17 significant digits, positional when the exponent is
/// moderate.
pub fn format_sig17(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.0".to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        return format!("{mantissa}e{exp}");
    }
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let point = exp + 1;
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(&digits);
    } else {
        let point = point as usize;
        out.push_str(&digits[..point]);
        out.push('.');
        let frac = &digits[point..];
        out.push_str(if frac.is_empty() { "0" } else { frac });
    }
    // strip trailing zeros but keep one fractional digit
    while out.ends_with('0') && !out.ends_with(".0") {
        out.pop();
    }
    out
}

/// A JSON number carrying 17 significant digits; non-finite values become the
/// strings `"inf"`, `"-inf"` and `"nan"`.
pub fn json_f64(x: f64) -> serde_json::Value {
    if x.is_nan() {
        return serde_json::Value::from("nan");
    }
    if x.is_infinite() {
        return serde_json::Value::from(if x > 0.0 { "inf" } else { "-inf" });
    }
    let number: serde_json::Number = format_sig17(x).parse().expect("valid JSON number literal");
    serde_json::Value::Number(number)
}

/// Serializes a rational as an integer when it is one, otherwise as `"p/q"`.
pub fn serialize_rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    if q.is_integer() {
        if let Some(v) = q.numer().to_i64() {
            return s.serialize_i64(v);
        }
    }
    s.serialize_str(&rational_to_string(q))
}

impl Serialize for Number {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Number::Exact(q) => serialize_rational(q, s),
            Number::Float(x) => json_f64(*x).serialize(s),
        }
    }
}

impl<T: Serialize> Serialize for ExtendedValue<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedValue::Finite(v) => v.serialize(s),
            ExtendedValue::Infinite => s.serialize_str("inf"),
        }
    }
}
