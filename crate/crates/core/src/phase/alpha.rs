use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Fractional bits of the fixed-point representation used by the oracle.
pub const FIXED_BITS: u32 = 128;

/// floor(pi * 2^192). These are the leading hex digits of pi.
const PI_HEX_192: &str = "3243F6A8885A308D313198A2E03707344A4093822299F31D0";

const MAX_SIGNIFICANT_DIGITS: usize = 19;
const MAX_DECIMAL_PLACES: u32 = 19;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Source {
    Literal(String),
    SqrtPi,
    SqrtGolden,
}

/// Exact value `num / den` of a decimal literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Decimal {
    pub num: i128,
    pub den: u64,
}

/// Phase multiplier α.
///
/// Either a decimal literal (kept exactly as a rational) or one of the named
/// irrational constants `sqrt_pi` and `sqrt_golden`. Every α also carries an
/// unevaluated double-double value `hi + lo` used by the fast paths.
#[derive(Debug, Clone)]
pub struct Alpha {
    source: Source,
    hi: f64,
    lo: f64,
    exact: Option<Decimal>,
}

impl PartialEq for Alpha {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

impl Alpha {
    /// Parses a decimal literal (`0.5`, `-3`, `1.25e-2`) or a named constant.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        match t {
            "sqrt_pi" => return Ok(Self::sqrt_pi()),
            "sqrt_golden" => return Ok(Self::sqrt_golden()),
            _ => {}
        }
        let exact = parse_decimal(t).map_err(|reason| Error::InvalidAlpha {
            literal: text.to_string(),
            reason,
        })?;
        let fixed = decimal_fixed(exact);
        let (hi, lo) = split_fixed(&fixed);
        Ok(Self {
            source: Source::Literal(t.to_string()),
            hi,
            lo,
            exact: Some(exact),
        })
    }

    /// α given as a double, interpreted as its shortest round-trip decimal.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::InvalidAlpha {
                literal: x.to_string(),
                reason: "not finite".into(),
            });
        }
        Self::parse(&format!("{x:?}"))
    }

    /// √π.
    pub fn sqrt_pi() -> Self {
        static PARTS: OnceLock<(f64, f64)> = OnceLock::new();
        let &(hi, lo) = PARTS.get_or_init(|| split_fixed(&sqrt_pi_fixed()));
        Self {
            source: Source::SqrtPi,
            hi,
            lo,
            exact: None,
        }
    }

    /// √((1+√5)/2).
    pub fn sqrt_golden() -> Self {
        static PARTS: OnceLock<(f64, f64)> = OnceLock::new();
        let &(hi, lo) = PARTS.get_or_init(|| split_fixed(&sqrt_golden_fixed()));
        Self {
            source: Source::SqrtGolden,
            hi,
            lo,
            exact: None,
        }
    }

    /// Nearest double to α.
    pub fn value(&self) -> f64 {
        self.hi
    }

    /// Double-double components, `α ≈ hi + lo` to about 2^-106 relative.
    pub fn hi_lo(&self) -> (f64, f64) {
        (self.hi, self.lo)
    }

    pub fn is_named_constant(&self) -> bool {
        !matches!(self.source, Source::Literal(_))
    }

    pub(crate) fn exact(&self) -> Option<Decimal> {
        self.exact
    }

    /// `floor(α · 2^128)` as a big integer.
    pub fn fixed_point(&self) -> BigInt {
        match &self.source {
            Source::Literal(_) => decimal_fixed(self.exact.expect("literal has exact value")),
            Source::SqrtPi => sqrt_pi_fixed(),
            Source::SqrtGolden => sqrt_golden_fixed(),
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Source::Literal(s) => f.write_str(s),
            Source::SqrtPi => f.write_str("sqrt_pi"),
            Source::SqrtGolden => f.write_str("sqrt_golden"),
        }
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for Alpha {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Alpha {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Alpha::parse(&s).map_err(serde::de::Error::custom)
    }
}

fn parse_decimal(t: &str) -> std::result::Result<Decimal, String> {
    let bytes = t.as_bytes();
    let mut i = 0;
    let negative = match bytes.first() {
        Some(b'-') => {
            i += 1;
            true
        }
        Some(b'+') => {
            i += 1;
            false
        }
        _ => false,
    };

    let int_start = i;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    let int_digits = &t[int_start..i];
    let mut frac_digits = "";
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        frac_digits = &t[frac_start..i];
    }
    if int_digits.is_empty() && frac_digits.is_empty() {
        return Err("expected digits".into());
    }

    let mut exponent: i64 = 0;
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        i += 1;
        let exp_start = i;
        if i < bytes.len() && (bytes[i] == b'-' || bytes[i] == b'+') {
            i += 1;
        }
        let digits_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if digits_start == i || i - digits_start > 4 {
            return Err("malformed exponent".into());
        }
        exponent = t[exp_start..i].parse().map_err(|_| "malformed exponent".to_string())?;
    }
    if i != bytes.len() {
        return Err(format!("unexpected character at byte {i}"));
    }

    let mut digits: String = int_digits.chars().chain(frac_digits.chars()).collect();
    let mut exp10 = exponent - frac_digits.len() as i64;
    let trimmed = digits.trim_start_matches('0');
    if trimmed.is_empty() {
        return Ok(Decimal { num: 0, den: 1 });
    }
    digits = trimmed.to_string();
    while digits.ends_with('0') {
        digits.pop();
        exp10 += 1;
    }
    if digits.len() > MAX_SIGNIFICANT_DIGITS {
        return Err(format!("more than {MAX_SIGNIFICANT_DIGITS} significant digits"));
    }
    let mantissa: u64 = digits.parse().map_err(|_| "mantissa overflow".to_string())?;

    let (num, den) = if exp10 >= 0 {
        let scale = 10u64
            .checked_pow(exp10 as u32)
            .ok_or_else(|| "magnitude too large".to_string())?;
        let num = mantissa
            .checked_mul(scale)
            .ok_or_else(|| "magnitude too large".to_string())?;
        (num, 1)
    } else {
        let places = (-exp10) as u64;
        if places > MAX_DECIMAL_PLACES as u64 {
            return Err("magnitude too small".into());
        }
        (mantissa, 10u64.pow(places as u32))
    };
    let num = if negative { -(num as i128) } else { num as i128 };
    Ok(Decimal { num, den })
}

fn decimal_fixed(d: Decimal) -> BigInt {
    (BigInt::from(d.num) << FIXED_BITS).div_floor(&BigInt::from(d.den))
}

/// Rounds a fixed-point value to `hi + lo`; `hi * 2^128` is an integer for every
/// supported magnitude so the remainder is formed exactly.
fn split_fixed(fixed: &BigInt) -> (f64, f64) {
    let scale = (-(FIXED_BITS as f64)).exp2();
    let hi = fixed.to_f64().unwrap_or(0.0) * scale;
    let hi_int = BigInt::from_f64(hi / scale).unwrap_or_else(BigInt::zero);
    let rem = fixed - hi_int;
    let lo = rem.to_f64().unwrap_or(0.0) * scale;
    (hi, lo)
}

fn pi_fixed_192() -> BigInt {
    BigInt::parse_bytes(PI_HEX_192.as_bytes(), 16).expect("pi digits")
}

/// floor(√π · 2^128), possibly one unit low.
pub(crate) fn sqrt_pi_fixed() -> BigInt {
    (pi_fixed_192() << 64u32).sqrt()
}

/// floor(√φ · 2^128), possibly one unit low.
pub(crate) fn sqrt_golden_fixed() -> BigInt {
    let one = BigInt::one() << 256u32;
    let sqrt5 = (BigInt::from(5) << 512u32).sqrt();
    let phi = (one + sqrt5) >> 1u32;
    phi.sqrt()
}
