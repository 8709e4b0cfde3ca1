//! Number literals shared by q lists and expression scalars.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use quon_core::Rational;
use serde::{Deserialize, Serialize};

/// Which scalar field a run works over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Exact,
    Float,
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::Exact => "exact",
            BackendKind::Float => "float",
        })
    }
}

impl FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(BackendKind::Exact),
            "float" => Ok(BackendKind::Float),
            _ => Err(format!(
                "unknown backend {:?} (expected \"exact\" or \"float\")",
                s
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid number literal {text:?}: {reason}")]
pub struct LiteralError {
    pub text: String,
    pub reason: &'static str,
}

/// A number as written: `3`, `-1/2`, `0.25`, `1e-3`.
#[derive(Clone, Debug, PartialEq)]
pub enum NumberLiteral {
    Integer(BigInt),
    Fraction(Rational),
    /// Decimal or exponent notation; `exact` is its value as a fraction.
    Decimal {
        exact: Rational,
        value: f64,
    },
}

impl NumberLiteral {
    /// The backend the literal asks for; `None` for plain integers.
    pub fn preferred_backend(&self) -> Option<BackendKind> {
        match self {
            NumberLiteral::Integer(_) => None,
            NumberLiteral::Fraction(_) => Some(BackendKind::Exact),
            NumberLiteral::Decimal { .. } => Some(BackendKind::Float),
        }
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            NumberLiteral::Integer(n) => Rational::from_integer(n.clone()),
            NumberLiteral::Fraction(r) => r.clone(),
            NumberLiteral::Decimal { exact, .. } => exact.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            NumberLiteral::Decimal { value, .. } => *value,
            other => other.to_rational().to_f64().unwrap_or(f64::NAN),
        }
    }
}

fn parse_decimal(text: &str) -> Option<Rational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{}{}", int, frac).parse().ok()?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        r = -r;
    }
    Some(r)
}

impl FromStr for NumberLiteral {
    type Err = LiteralError;

    fn from_str(s: &str) -> Result<Self, LiteralError> {
        let err = |reason| LiteralError {
            text: s.to_string(),
            reason,
        };
        let t = s.trim();
        if t.is_empty() {
            return Err(err("empty"));
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err("bad numerator"))?;
            let d: BigInt = d.trim().parse().map_err(|_| err("bad denominator"))?;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            return Ok(NumberLiteral::Fraction(Rational::new(n, d)));
        }
        if let Ok(n) = t.parse::<BigInt>() {
            return Ok(NumberLiteral::Integer(n));
        }
        let exact = parse_decimal(t).ok_or_else(|| err("not a number"))?;
        let value: f64 = t.parse().map_err(|_| err("not a number"))?;
        Ok(NumberLiteral::Decimal { exact, value })
    }
}

/// `p/q` for exact values, integers without a denominator.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Absolute value at most one.
pub fn within_unit(r: &Rational) -> bool {
    r.abs() <= Rational::from_integer(BigInt::from(1))
}
