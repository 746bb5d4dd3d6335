use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ceil_sq, SQ_ARG_LIMIT};
use crate::phase::{frac_phase, PhaseFamily};

/// The sector `{z : arg z / 2π ∈ [a, b) + ℤ, c <= |z| < d}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SectorRecord", into = "SectorRecord")]
pub struct SectorSpec {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

#[derive(Serialize, Deserialize)]
struct SectorRecord {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TryFrom<SectorRecord> for SectorSpec {
    type Error = Error;

    fn try_from(r: SectorRecord) -> Result<Self> {
        SectorSpec::new(r.a, r.b, r.c, r.d)
    }
}

impl From<SectorSpec> for SectorRecord {
    fn from(s: SectorSpec) -> Self {
        SectorRecord { a: s.a, b: s.b, c: s.c, d: s.d }
    }
}

impl SectorSpec {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument("sector bounds must be finite".into()));
        }
        if !(0.0..=1.0).contains(&(b - a)) {
            return Err(Error::InvalidArgument(format!(
                "sector needs 0 <= b - a <= 1, got a={a}, b={b}"
            )));
        }
        if !(0.0 <= c && c <= d) {
            return Err(Error::InvalidArgument(format!(
                "sector needs 0 <= c <= d, got c={c}, d={d}"
            )));
        }
        if d > SQ_ARG_LIMIT {
            return Err(Error::InvalidArgument(format!("sector radius {d} too large")));
        }
        Ok(SectorSpec { a, b, c, d })
    }

    /// Full turn, `0 <= |z| < d`.
    pub fn disc(d: f64) -> Result<Self> {
        Self::new(0.0, 1.0, 0.0, d)
    }

    /// Full turn, `c <= |z| < d`.
    pub fn annulus(c: f64, d: f64) -> Result<Self> {
        Self::new(0.0, 1.0, c, d)
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn is_full_turn(&self) -> bool {
        self.b - self.a >= 1.0
    }

    /// Whether a turn fraction `t` (any real) lies in `[a, b) + ℤ`.
    pub fn contains_turn(&self, t: f64) -> bool {
        if self.is_full_turn() {
            return true;
        }
        let shifted = t - self.a;
        shifted - shifted.floor() < self.b - self.a
    }

    /// Indices with `c <= √n < d`, decided on integers: `ceil(c²) <= n < ceil(d²)`.
    pub fn index_range(&self) -> std::ops::Range<u64> {
        ceil_sq(self.c).max(1)..ceil_sq(self.d).max(1)
    }

    /// Membership of a plane point, `c <= |z| <= d` closed (used for sampling).
    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        let r2 = x * x + y * y;
        if r2 < self.c * self.c || r2 > self.d * self.d {
            return false;
        }
        self.is_full_turn() || self.contains_turn(y.atan2(x) / std::f64::consts::TAU)
    }

    /// Measure divided by π: `(b − a)(d² − c²)`.
    pub fn normalized_area(&self) -> f64 {
        (self.b - self.a) * (self.d * self.d - self.c * self.c)
    }
}

/// `#{n : c <= √n < d, frac(ξ_n) ∈ [a, b) + ℤ}`.
pub fn sector_count(family: &PhaseFamily, spec: &SectorSpec) -> Result<u64> {
    let range = spec.index_range();
    if range.is_empty() {
        return Ok(0);
    }
    family.check_range(range.end - 1)?;
    if spec.is_full_turn() {
        return Ok(range.end - range.start);
    }
    const CHUNK: u64 = 1 << 14;
    let chunks: Vec<u64> = (range.start..range.end).step_by(CHUNK as usize).collect();
    chunks
        .into_par_iter()
        .map(|lo| {
            let hi = (lo + CHUNK).min(range.end);
            let mut count = 0u64;
            for n in lo..hi {
                if spec.contains_turn(frac_phase(family, n)?) {
                    count += 1;
                }
            }
            Ok(count)
        })
        .sum()
}

/// Observed count over the count expected at density 1/π.
pub fn density_ratio(family: &PhaseFamily, spec: &SectorSpec) -> Result<f64> {
    let area = spec.normalized_area();
    if !(area > 0.0) {
        return Err(Error::ZeroMeasure);
    }
    Ok(sector_count(family, spec)? as f64 / area)
}
