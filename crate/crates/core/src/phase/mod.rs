//! Phase sequences ξ_n and their fractional parts.
//!
//! Error budget for the two linear-in-α families over `n <= 2^40`:
//!
//! * `SqrtLinear`: with `k = isqrt(n)` and `f = (n - k²)/(√n + k)`, the value
//!   `α√n = α·k + α·f`. The term `frac(α·k)` is exact for decimal α (integer
//!   arithmetic on the rational) and otherwise comes from an error-free product
//!   `hi·k = p + e` whose reduction `p - floor(p)` is exact. What remains is a
//!   handful of roundings on quantities of size at most `α`, so the absolute
//!   error stays within a few `2^-52 · max(α, 1)`.
//! * `Linear`: same reduction with `n` in place of `k`.
//!
//! `Power` is evaluated directly as `α·n^β`; its absolute error is about
//! `3·2^-52·|ξ_n|`, and indices with `|ξ_n| > 2^20` are refused, which caps the
//! error near `7e-10`.

mod alpha;
mod oracle;

pub use alpha::{Alpha, FIXED_BITS};
pub use oracle::frac_phase_oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{clamp_unit, frac, two_prod};

/// Largest index accepted by the fast paths and the oracle.
pub const MAX_INDEX: u64 = 1 << 40;

/// Largest |ξ_n| accepted for the `Power` family.
pub const POWER_PHASE_LIMIT: f64 = 1_048_576.0; // 2^20

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    /// ξ_n = α√n
    SqrtLinear,
    /// ξ_n = αn
    Linear,
    /// ξ_n = αn^β
    Power,
    /// explicit ξ_1, ξ_2, ...
    Custom,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::SqrtLinear => "SqrtLinear",
            FamilyKind::Linear => "Linear",
            FamilyKind::Power => "Power",
            FamilyKind::Custom => "Custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Family {
    SqrtLinear { alpha: Alpha },
    Linear { alpha: Alpha },
    Power { alpha: Alpha, beta: f64 },
    Custom { values: Vec<f64> },
}

/// A validated phase sequence (ξ_n)_{n≥1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilyRecord", into = "FamilyRecord")]
pub struct PhaseFamily(Family);

#[derive(Serialize, Deserialize)]
struct FamilyRecord {
    kind: FamilyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<Alpha>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    custom_values: Option<Vec<f64>>,
}

impl TryFrom<FamilyRecord> for PhaseFamily {
    type Error = Error;

    fn try_from(r: FamilyRecord) -> Result<Self> {
        let need_alpha = |a: Option<Alpha>| {
            a.ok_or_else(|| Error::InvalidFamily("missing alpha".into()))
        };
        match r.kind {
            FamilyKind::SqrtLinear => PhaseFamily::sqrt_linear(need_alpha(r.alpha)?),
            FamilyKind::Linear => PhaseFamily::linear(need_alpha(r.alpha)?),
            FamilyKind::Power => PhaseFamily::power(
                need_alpha(r.alpha)?,
                r.beta.ok_or_else(|| Error::InvalidFamily("missing beta".into()))?,
            ),
            FamilyKind::Custom => PhaseFamily::custom(
                r.custom_values
                    .ok_or_else(|| Error::InvalidFamily("missing custom_values".into()))?,
            ),
        }
    }
}

impl From<PhaseFamily> for FamilyRecord {
    fn from(f: PhaseFamily) -> Self {
        let kind = f.kind();
        match f.0 {
            Family::SqrtLinear { alpha } | Family::Linear { alpha } => FamilyRecord {
                kind,
                alpha: Some(alpha),
                beta: None,
                custom_values: None,
            },
            Family::Power { alpha, beta } => FamilyRecord {
                kind,
                alpha: Some(alpha),
                beta: Some(beta),
                custom_values: None,
            },
            Family::Custom { values } => FamilyRecord {
                kind,
                alpha: None,
                beta: None,
                custom_values: Some(values),
            },
        }
    }
}

impl PhaseFamily {
    /// ξ_n = α√n with α > 0.
    pub fn sqrt_linear(alpha: Alpha) -> Result<Self> {
        if !(alpha.value() > 0.0) {
            return Err(Error::InvalidFamily(format!("SqrtLinear needs alpha > 0, got {alpha}")));
        }
        Ok(Self(Family::SqrtLinear { alpha }))
    }

    /// ξ_n = αn with α ≠ 0.
    pub fn linear(alpha: Alpha) -> Result<Self> {
        if alpha.value() == 0.0 {
            return Err(Error::InvalidFamily("Linear needs alpha != 0".into()));
        }
        Ok(Self(Family::Linear { alpha }))
    }

    /// ξ_n = αn^β with α ≠ 0 and β > 0 not an integer.
    pub fn power(alpha: Alpha, beta: f64) -> Result<Self> {
        if alpha.value() == 0.0 {
            return Err(Error::InvalidFamily("Power needs alpha != 0".into()));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidFamily(format!("Power needs beta > 0, got {beta}")));
        }
        if beta.fract() == 0.0 {
            return Err(Error::InvalidFamily(format!("Power needs non-integer beta, got {beta}")));
        }
        Ok(Self(Family::Power { alpha, beta }))
    }

    /// Explicit finite phase list; `values[0]` is ξ_1.
    pub fn custom(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidFamily("Custom needs at least one value".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidFamily(format!("Custom value {bad} is not finite")));
        }
        Ok(Self(Family::Custom { values }))
    }

    /// Shorthand for `sqrt_linear(Alpha::parse(literal)?)`.
    pub fn sqrt(literal: &str) -> Result<Self> {
        Self::sqrt_linear(Alpha::parse(literal)?)
    }

    pub fn kind(&self) -> FamilyKind {
        match &self.0 {
            Family::SqrtLinear { .. } => FamilyKind::SqrtLinear,
            Family::Linear { .. } => FamilyKind::Linear,
            Family::Power { .. } => FamilyKind::Power,
            Family::Custom { .. } => FamilyKind::Custom,
        }
    }

    pub fn alpha(&self) -> Option<&Alpha> {
        match &self.0 {
            Family::SqrtLinear { alpha } | Family::Linear { alpha } | Family::Power { alpha, .. } => {
                Some(alpha)
            }
            Family::Custom { .. } => None,
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match &self.0 {
            Family::Power { beta, .. } => Some(*beta),
            _ => None,
        }
    }

    pub fn custom_values(&self) -> Option<&[f64]> {
        match &self.0 {
            Family::Custom { values } => Some(values),
            _ => None,
        }
    }

    /// Largest index this family can evaluate, if bounded by something simpler
    /// than the `Power` magnitude check.
    pub fn index_limit(&self) -> u64 {
        match &self.0 {
            Family::Custom { values } => values.len() as u64,
            _ => MAX_INDEX,
        }
    }

    fn check_index(&self, n: u64) -> Result<()> {
        if n == 0 {
            return Err(Error::ZeroIndex);
        }
        match &self.0 {
            Family::Custom { values } if n > values.len() as u64 => {
                Err(Error::IndexOutOfRange { n, len: values.len() })
            }
            Family::Custom { .. } => Ok(()),
            _ if n > MAX_INDEX => Err(Error::PrecisionRangeExceeded { n, limit: MAX_INDEX }),
            _ => Ok(()),
        }
    }

    /// Checks that every index in `1..=n_max` can be evaluated.
    pub fn check_range(&self, n_max: u64) -> Result<()> {
        self.check_index(n_max)?;
        if let Family::Power { .. } = &self.0 {
            // |ξ_n| is monotone in n, so the last index decides.
            self.power_phase(n_max)?;
        }
        Ok(())
    }

    fn power_phase(&self, n: u64) -> Result<f64> {
        let Family::Power { alpha, beta } = &self.0 else {
            unreachable!()
        };
        let x = alpha.value() * (n as f64).powf(*beta);
        if !(x.abs() <= POWER_PHASE_LIMIT) {
            let limit = (POWER_PHASE_LIMIT / alpha.value().abs()).powf(1.0 / beta).floor() as u64;
            return Err(Error::PrecisionRangeExceeded { n, limit });
        }
        Ok(x)
    }
}

/// Raw phase ξ_n.
pub fn phase(family: &PhaseFamily, n: u64) -> Result<f64> {
    family.check_index(n)?;
    Ok(match &family.0 {
        Family::SqrtLinear { alpha } => {
            let (hi, lo) = alpha.hi_lo();
            let r = (n as f64).sqrt();
            hi.mul_add(r, lo * r)
        }
        Family::Linear { alpha } => {
            let (hi, lo) = alpha.hi_lo();
            let x = n as f64;
            hi.mul_add(x, lo * x)
        }
        Family::Power { .. } => family.power_phase(n)?,
        Family::Custom { values } => values[(n - 1) as usize],
    })
}

/// Fractional part of ξ_n, in `[0, 1)`.
pub fn frac_phase(family: &PhaseFamily, n: u64) -> Result<f64> {
    family.check_index(n)?;
    Ok(match &family.0 {
        Family::SqrtLinear { alpha } => frac_alpha_sqrt(alpha, n),
        Family::Linear { alpha } => {
            let (t, rest) = frac_alpha_times(alpha, n);
            frac(t + rest)
        }
        Family::Power { .. } => frac(family.power_phase(n)?),
        Family::Custom { values } => frac(values[(n - 1) as usize]),
    })
}

/// `frac(α·m)` split as `t + rest` with `t ∈ [0, 1)` and `rest` tiny.
#[inline]
fn frac_alpha_times(alpha: &Alpha, m: u64) -> (f64, f64) {
    if let Some(d) = alpha.exact() {
        let rem = (d.num * m as i128).rem_euclid(d.den as i128);
        (rem as f64 / d.den as f64, 0.0)
    } else {
        let (hi, lo) = alpha.hi_lo();
        let mf = m as f64;
        let (p, e) = two_prod(hi, mf);
        (p - p.floor(), lo.mul_add(mf, e))
    }
}

#[inline]
fn frac_alpha_sqrt(alpha: &Alpha, n: u64) -> f64 {
    let k = n.isqrt();
    let r = n - k * k;
    let (t, rest) = frac_alpha_times(alpha, k);
    if r == 0 {
        return frac(t + rest);
    }
    // √n = k + f with f ∈ (0, 1), free of cancellation
    let f = r as f64 / ((n as f64).sqrt() + k as f64);
    let (hi, lo) = alpha.hi_lo();
    let tail = hi.mul_add(f, lo.mul_add(f, rest));
    let s = t + tail;
    clamp_unit(s - s.floor())
}
