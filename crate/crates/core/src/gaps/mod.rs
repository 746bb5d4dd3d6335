//! Circular gaps mod 1 inside annulus windows.

mod verdict;

pub use verdict::{
    delone_verdict, window_change_radii, DeloneOptions, DeloneReport, ScaledGapSummary, Verdict,
    WrapLowerCheck,
    WrapUpperCheck,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::phase::{frac_phase, Alpha, FamilyKind, PhaseFamily};
use crate::spiral::{window, AnnulusWindow};

/// Phases spanning less than `1 - ORDER_MARGIN` are treated as ordered mod 1.
const ORDER_MARGIN: f64 = 1e-9;

/// Gaps mod 1 of the phases in one annulus window.
///
/// `gaps` holds δ_1..δ_M; the last entry is the wrap-around gap between the
/// largest and the smallest fractional part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub window: AnnulusWindow,
    pub gaps: Vec<f64>,
    pub min_gap: f64,
    pub scaled_min_gap: f64,
}

impl GapReport {
    pub fn wrap_gap(&self) -> f64 {
        *self.gaps.last().expect("report has at least one gap")
    }
}

/// Circular gaps of values in `[0, 1)`: sorted consecutive differences followed by
/// the wrap gap `ζ_1 + 1 - ζ_M`.
pub fn circular_gaps(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(&bad) = values.iter().find(|v| !(0.0..1.0).contains(*v)) {
        return Err(Error::NotUnitInterval(bad));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(gaps_of_sorted(&sorted))
}

fn gaps_of_sorted(sorted: &[f64]) -> Vec<f64> {
    let mut gaps: Vec<f64> = sorted.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(sorted[0] + 1.0 - sorted[sorted.len() - 1]);
    gaps
}

/// α(√last − √first), the extent of the raw phases of a window, written without
/// cancellation.
fn sqrt_span(alpha: f64, first: u64, last: u64) -> f64 {
    alpha * (last - first) as f64 / ((last as f64).sqrt() + (first as f64).sqrt())
}

/// α / (√(n+1) + √n) = ξ_{n+1} − ξ_n for the square-root family.
#[inline]
pub fn sqrt_consecutive_gap(alpha: f64, n: u64) -> f64 {
    alpha / (((n + 1) as f64).sqrt() + (n as f64).sqrt())
}

fn ordered_sqrt_alpha(family: &PhaseFamily, w: &AnnulusWindow) -> Option<f64> {
    if family.kind() != FamilyKind::SqrtLinear || w.count < 2 {
        return None;
    }
    let alpha = family.alpha().map(Alpha::value)?;
    let span = sqrt_span(alpha, w.first_index, w.end_index() - 1);
    (span < 1.0 - ORDER_MARGIN).then_some(alpha)
}

/// Gap report of the window `R² <= n < (R+h)²`.
///
/// For the square-root family, when the window's phases span less than one
/// turn they are already in circular order; the interior gaps are then taken
/// from `α/(√(n+1)+√n)` in index order and the wrap gap is `1 − Σδ_j` with
/// compensated summation. Other windows sort the fractional parts.
pub fn window_gaps(family: &PhaseFamily, r: f64, h: f64) -> Result<GapReport> {
    let w = window(r, h)?;
    if w.count == 0 {
        return Err(Error::EmptyWindow { r, h });
    }
    family.check_range(w.end_index() - 1)?;
    let gaps = match ordered_sqrt_alpha(family, &w) {
        Some(alpha) => {
            let mut rest = CompensatedSum::new();
            rest.add(1.0);
            let mut gaps: Vec<f64> = (w.first_index..w.end_index() - 1)
                .map(|n| {
                    let d = sqrt_consecutive_gap(alpha, n);
                    rest.add(-d);
                    d
                })
                .collect();
            gaps.push(rest.value());
            gaps
        }
        None => {
            let values = w
                .indices()
                .map(|n| frac_phase(family, n))
                .collect::<Result<Vec<_>>>()?;
            circular_gaps(&values)?
        }
    };
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(GapReport {
        window: w,
        gaps,
        min_gap,
        scaled_min_gap: r * min_gap,
    })
}

/// Minimum and wrap gap of one window without materializing the gap list when
/// the window is ordered (interior gaps of the square-root family decrease in
/// n, so the last one is the smallest).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSummary {
    pub window: AnnulusWindow,
    pub min_gap: f64,
    pub wrap_gap: f64,
}

pub fn window_summary(family: &PhaseFamily, r: f64, h: f64) -> Result<WindowSummary> {
    let w = window(r, h)?;
    if w.count == 0 {
        return Err(Error::EmptyWindow { r, h });
    }
    if w.count == 1 {
        family.check_range(w.first_index)?;
        return Ok(WindowSummary {
            window: w,
            min_gap: 1.0,
            wrap_gap: 1.0,
        });
    }
    if let Some(alpha) = ordered_sqrt_alpha(family, &w) {
        let last = w.end_index() - 1;
        family.check_range(last)?;
        let wrap_gap = 1.0 - sqrt_span(alpha, w.first_index, last);
        let interior = sqrt_consecutive_gap(alpha, last - 1);
        return Ok(WindowSummary {
            window: w,
            min_gap: interior.min(wrap_gap),
            wrap_gap,
        });
    }
    let report = window_gaps(family, r, h)?;
    Ok(WindowSummary {
        window: report.window,
        min_gap: report.min_gap,
        wrap_gap: report.wrap_gap(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub r: f64,
    pub report: GapReport,
    /// Single-point window: its only gap is the full turn, not a gap between
    /// two elements, so it does not enter inf/sup.
    pub excluded: bool,
}

/// Gap reports over a grid of inner radii at fixed width `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapProfile {
    pub family: PhaseFamily,
    pub h: f64,
    pub entries: Vec<ProfileEntry>,
    /// Grid radii whose window held no index.
    pub empty_radii: Vec<f64>,
    /// min of R·g_R^h over entries with M >= 2
    pub inf_scaled: Option<f64>,
    /// max of R·g_R^h over entries with M >= 2
    pub sup_scaled: Option<f64>,
}

pub fn gap_profile(family: &PhaseFamily, h: f64, grid: &[f64]) -> Result<GapProfile> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("R grid is empty".into()));
    }
    if grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidArgument("R grid must be sorted ascending".into()));
    }
    if !(grid[0] >= 1.0) || !(h > 0.0) {
        return Err(Error::InvalidArgument("R grid needs R >= 1 and h > 0".into()));
    }
    let reports = grid
        .par_iter()
        .map(|&r| match window_gaps(family, r, h) {
            Ok(rep) => Ok(Some(rep)),
            Err(Error::EmptyWindow { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;

    let mut entries = Vec::with_capacity(reports.len());
    let mut empty_radii = Vec::new();
    let mut inf: Option<f64> = None;
    let mut sup: Option<f64> = None;
    for (&r, rep) in grid.iter().zip(reports) {
        let Some(report) = rep else {
            empty_radii.push(r);
            continue;
        };
        let excluded = report.window.count <= 1;
        if !excluded {
            let s = report.scaled_min_gap;
            inf = Some(inf.map_or(s, |v| v.min(s)));
            sup = Some(sup.map_or(s, |v| v.max(s)));
        }
        entries.push(ProfileEntry { r, report, excluded });
    }
    Ok(GapProfile {
        family: family.clone(),
        h,
        entries,
        empty_radii,
        inf_scaled: inf,
        sup_scaled: sup,
    })
}
