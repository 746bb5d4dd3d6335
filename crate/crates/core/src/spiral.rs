//! Spiral points z_n and annulus index windows.

use std::f64::consts::TAU;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ceil_sq, floor_sq, SQ_ARG_LIMIT};
use crate::phase::{frac_phase, PhaseFamily};

/// Default number of indices materialized per chunk by [`generate_chunks`].
pub const DEFAULT_CHUNK: u64 = 1 << 16;

/// One point `z_n = √n · e^{2πi ξ_n}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpiralPoint {
    pub n: u64,
    pub radius: f64,
    pub phase_frac: f64,
    pub x: f64,
    pub y: f64,
}

impl SpiralPoint {
    pub fn xy(&self) -> [f64; 2] {
        [self.x, self.y]
    }
}

/// Point with plane coordinates; lets the geometry code accept spiral points
/// and bare coordinate pairs alike.
pub trait Planar {
    fn xy(&self) -> [f64; 2];

    fn radius(&self) -> f64 {
        let [x, y] = self.xy();
        x.hypot(y)
    }

    /// Whether the point lies in the closed disc of radius `r` about 0.
    fn within(&self, r: f64) -> bool {
        let [x, y] = self.xy();
        x * x + y * y <= r * r
    }
}

impl Planar for SpiralPoint {
    #[inline]
    fn xy(&self) -> [f64; 2] {
        [self.x, self.y]
    }

    fn radius(&self) -> f64 {
        self.radius
    }

    /// Decided on the index: `√n <= r` iff `n <= floor(r²)`.
    fn within(&self, r: f64) -> bool {
        r >= 0.0 && (r > SQ_ARG_LIMIT || self.n <= floor_sq(r))
    }
}

impl Planar for [f64; 2] {
    #[inline]
    fn xy(&self) -> [f64; 2] {
        *self
    }
}

/// z_n for one index.
pub fn point(family: &PhaseFamily, n: u64) -> Result<SpiralPoint> {
    let phase_frac = frac_phase(family, n)?;
    Ok(make_point(n, phase_frac))
}

#[inline]
fn make_point(n: u64, phase_frac: f64) -> SpiralPoint {
    let radius = (n as f64).sqrt();
    let (s, c) = (TAU * phase_frac).sin_cos();
    SpiralPoint {
        n,
        radius,
        phase_frac,
        x: radius * c,
        y: radius * s,
    }
}

/// Points z_1..z_{n_max} in index order.
pub fn generate(family: &PhaseFamily, n_max: u64) -> Result<Vec<SpiralPoint>> {
    generate_range(family, 1..n_max + 1)
}

/// Points for an arbitrary index range.
pub fn generate_range(family: &PhaseFamily, indices: Range<u64>) -> Result<Vec<SpiralPoint>> {
    if indices.is_empty() {
        return Ok(Vec::new());
    }
    family.check_range(indices.end - 1)?;
    indices.map(|n| point(family, n)).collect()
}

/// Streams z_1..z_{n_max} in chunks of at most `chunk` points.
pub fn generate_chunks(family: &PhaseFamily, n_max: u64, chunk: u64) -> Result<PointChunks<'_>> {
    if chunk == 0 {
        return Err(Error::InvalidArgument("chunk size must be positive".into()));
    }
    family.check_range(n_max)?;
    Ok(PointChunks {
        family,
        next: 1,
        end: n_max + 1,
        chunk,
    })
}

/// Iterator returned by [`generate_chunks`].
pub struct PointChunks<'a> {
    family: &'a PhaseFamily,
    next: u64,
    end: u64,
    chunk: u64,
}

impl Iterator for PointChunks<'_> {
    type Item = Vec<SpiralPoint>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.end {
            return None;
        }
        let stop = self.end.min(self.next + self.chunk);
        let out = (self.next..stop)
            .map(|n| point(self.family, n).expect("range checked at construction"))
            .collect();
        self.next = stop;
        Some(out)
    }
}

/// `#{n >= 1 : √n <= r}`, i.e. `floor(r²)`, in exact arithmetic.
pub fn disc_count(r: f64) -> u64 {
    floor_sq(r)
}

/// The indices `R² <= n < (R+h)²`, i.e. the points in the annulus `R <= |z| < R+h`.
///
/// The outer radius is the double `R + h`; a window `(R + h, h)` therefore starts
/// exactly where `(R, h)` ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusWindow {
    pub r: f64,
    pub h: f64,
    pub first_index: u64,
    pub count: u64,
}

impl AnnulusWindow {
    pub fn indices(&self) -> Range<u64> {
        self.first_index..self.first_index + self.count
    }

    /// Index one past the last member.
    pub fn end_index(&self) -> u64 {
        self.first_index + self.count
    }

    /// Length `2hR + h²` of the real interval `[R², (R+h)²)`.
    pub fn interval_length(&self) -> f64 {
        2.0 * self.h * self.r + self.h * self.h
    }

    pub fn outer_radius(&self) -> f64 {
        self.r + self.h
    }
}

/// Index window of the annulus with inner radius `r >= 1` and width `h > 0`.
pub fn window(r: f64, h: f64) -> Result<AnnulusWindow> {
    if !(r >= 1.0) || !(h > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "window needs R >= 1 and h > 0, got R={r}, h={h}"
        )));
    }
    let outer = r + h;
    if !(outer <= SQ_ARG_LIMIT) {
        return Err(Error::InvalidArgument(format!("window outer radius {outer} too large")));
    }
    let first_index = ceil_sq(r);
    let end = ceil_sq(outer);
    Ok(AnnulusWindow {
        r,
        h,
        first_index,
        count: end - first_index,
    })
}
