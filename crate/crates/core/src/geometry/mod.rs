//! Packing radius, covering radius and sector densities of planar point sets.

mod covering;
mod packing;
mod sector;

pub use crate::gaps::DeloneReport;
pub use covering::{covering_for_family, covering_radius_estimate, CoveringEstimate, KdTree};
pub use packing::{packing_radius_bruteforce, packing_radius_grid};
pub use sector::{density_ratio, sector_count, SectorSpec};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gaps::window_gaps;
use crate::phase::PhaseFamily;
use crate::spiral::generate_range;

/// Smallest distance between two points of one annulus window, next to the
/// lower bound `2R·sin(π·g)` implied by the window's minimal gap `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSeparation {
    pub r: f64,
    pub h: f64,
    pub count: u64,
    pub min_gap: f64,
    pub min_distance: f64,
    pub bound: f64,
}

/// Two points at radii `>= R` whose angles differ by at least `2πg` are at
/// least `2R·sin(πg)` apart (`g <= 1/2` being a circular distance).
pub fn annulus_separation(family: &PhaseFamily, r: f64, h: f64) -> Result<AnnulusSeparation> {
    let report = window_gaps(family, r, h)?;
    let w = report.window;
    let points = generate_range(family, w.indices())?;
    let min_distance = if points.len() >= 2 {
        packing_radius_bruteforce(&points)?
    } else {
        f64::INFINITY
    };
    let g = report.min_gap.min(0.5);
    Ok(AnnulusSeparation {
        r,
        h,
        count: w.count,
        min_gap: report.min_gap,
        min_distance,
        bound: 2.0 * r * (std::f64::consts::PI * g).sin(),
    })
}
