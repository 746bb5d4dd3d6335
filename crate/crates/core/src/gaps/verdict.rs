//! Delone certificate for the square-root family over bounded radii.
//!
//! The window `[ceil(R²), ceil((R+h)²))` only changes where `R²` or `(R+h)²`
//! crosses an integer, and `R ↦ ceil(R²)` is left-continuous. Taking, for each
//! such crossing, the largest double `R` that still has the old window (plus
//! `R_max`) therefore visits every distinct window of every double
//! `R ∈ [1, R_max]`. The certificate covers those windows, not the continuum
//! of real radii beyond `R_max`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{window_summary, WindowSummary};
use crate::error::{Error, Result};
use crate::geometry::{
    covering_for_family, density_ratio, packing_radius_grid, CoveringEstimate, SectorSpec,
};
use crate::numeric::{ceil_sq, floor_sq, SQ_ARG_LIMIT};
use crate::phase::{FamilyKind, PhaseFamily};
use crate::spiral::generate;

/// Inner radii at which the window of width `h` changes, snapped to the last
/// double before each change, together with `r_max`; sorted and deduplicated.
pub fn window_change_radii(h: f64, r_max: f64) -> Result<Vec<f64>> {
    if !(h > 0.0 && h.is_finite()) || !(r_max >= 1.0) || !(r_max + h <= SQ_ARG_LIMIT) {
        return Err(Error::InvalidArgument(format!(
            "window radii need h > 0 and 1 <= R_max with R_max + h <= 2^26, got h={h}, R_max={r_max}"
        )));
    }
    let mut radii = Vec::new();
    for m in 1..=floor_sq(r_max) {
        radii.push(last_radius_with(m, 0.0));
    }
    for m in ceil_sq(1.0 + h)..=floor_sq(r_max + h) {
        let r = last_radius_with(m, h);
        if (1.0..=r_max).contains(&r) {
            radii.push(r);
        }
    }
    radii.push(r_max);
    radii.sort_unstable_by(f64::total_cmp);
    radii.dedup();
    Ok(radii)
}

/// Largest double `r` with `ceil((r + shift)²) <= m`, evaluated with the same
/// rounded sum `r + shift` that [`crate::spiral::window`] uses.
fn last_radius_with(m: u64, shift: f64) -> f64 {
    let ok = |r: f64| ceil_sq(r + shift) <= m;
    let mut r = (m as f64).sqrt() - shift;
    while !ok(r) {
        r = r.next_down();
    }
    while ok(r.next_up()) {
        r = r.next_up();
    }
    r
}

/// inf/sup of `R·g_R^h` over a set of windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledGapSummary {
    pub h: f64,
    /// windows with at least two points
    pub windows: u64,
    pub single_point_windows: u64,
    pub empty_windows: u64,
    pub inf_scaled: Option<f64>,
    pub inf_at: Option<f64>,
    pub sup_scaled: Option<f64>,
    pub sup_at: Option<f64>,
}

/// `R·δ_M > 1` for every window with `R >= 2 + h/2` (h = 1/(2α)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WrapLowerCheck {
    pub threshold_radius: f64,
    pub windows_checked: u64,
    pub min_scaled_wrap: Option<f64>,
    pub min_at: Option<f64>,
    pub violations: u64,
}

/// Upper bounds on `R·δ_M` for h = 1/α.
///
/// `(α + α⁻¹)/2` follows from `M >= 2hR + h²`, which holds only for some
/// windows; those are checked against it. Using only `M > 2hR + h² − 1`, the
/// bound becomes `(2α + α⁻¹)/2`, checked on every window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WrapUpperCheck {
    pub bound: f64,
    pub deficit_bound: f64,
    pub windows_checked: u64,
    /// windows whose count falls below `2hR + h²`
    pub deficit_windows: u64,
    pub max_scaled_wrap: Option<f64>,
    pub max_at: Option<f64>,
    /// windows with `M >= 2hR + h²` and `R·δ_M >= (α + α⁻¹)/2`
    pub violations: u64,
    /// deficit windows with `R·δ_M >= (α + α⁻¹)/2`
    pub deficit_exceedances: u64,
    /// windows with `R·δ_M >= (2α + α⁻¹)/2`
    pub deficit_bound_violations: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub uniformly_discrete: bool,
    pub relatively_dense: bool,
    pub wrap_lower_ok: bool,
    pub wrap_upper_ok: bool,
    pub delone: bool,
}

/// Outcome of [`delone_verdict`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeloneReport {
    pub family: PhaseFamily,
    pub r_max: f64,
    pub h_lower: f64,
    pub h_upper: f64,
    /// inf of `R·g_R^h` for `h = 1/(2α)`
    pub inf_scaled: Option<f64>,
    /// sup of `R·g_R^h` for `h = 1/α`
    pub sup_scaled: Option<f64>,
    /// `4·min(1/2, inf_scaled)`
    pub separation_bound: f64,
    /// minimum distance among `z_1, …, z_N` with `N = floor(R_max²)`
    pub packing_radius: f64,
    pub packing_points: u64,
    pub covering_radius_est: CoveringEstimate,
    pub density_ratio: f64,
    pub density_sector: SectorSpec,
    pub lower_profile: ScaledGapSummary,
    pub upper_profile: ScaledGapSummary,
    pub wrap_lower: WrapLowerCheck,
    pub wrap_upper: WrapUpperCheck,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeloneOptions {
    /// covering sample spacing
    pub eps: f64,
    /// defaults to the annulus `1 <= r <= min(R_max, 50)`
    pub covering_region: Option<SectorSpec>,
    /// defaults to the half turn `[0, 1/2)` over `R_max/2 <= r < R_max`
    pub density_sector: Option<SectorSpec>,
}

impl Default for DeloneOptions {
    fn default() -> Self {
        DeloneOptions { eps: 0.05, covering_region: None, density_sector: None }
    }
}

fn summaries(family: &PhaseFamily, h: f64, r_max: f64) -> Result<Vec<(f64, Option<WindowSummary>)>> {
    let grid = window_change_radii(h, r_max)?;
    grid.into_par_iter()
        .map(|r| match window_summary(family, r, h) {
            Ok(s) => Ok((r, Some(s))),
            Err(Error::EmptyWindow { .. }) => Ok((r, None)),
            Err(e) => Err(e),
        })
        .collect()
}

fn scaled_summary(h: f64, rows: &[(f64, Option<WindowSummary>)]) -> ScaledGapSummary {
    let mut out = ScaledGapSummary {
        h,
        windows: 0,
        single_point_windows: 0,
        empty_windows: 0,
        inf_scaled: None,
        inf_at: None,
        sup_scaled: None,
        sup_at: None,
    };
    for &(r, s) in rows {
        let Some(s) = s else {
            out.empty_windows += 1;
            continue;
        };
        if s.window.count < 2 {
            out.single_point_windows += 1;
            continue;
        }
        out.windows += 1;
        let v = r * s.min_gap;
        if out.inf_scaled.is_none_or(|m| v < m) {
            out.inf_scaled = Some(v);
            out.inf_at = Some(r);
        }
        if out.sup_scaled.is_none_or(|m| v > m) {
            out.sup_scaled = Some(v);
            out.sup_at = Some(r);
        }
    }
    out
}

fn wrap_lower(h: f64, rows: &[(f64, Option<WindowSummary>)]) -> WrapLowerCheck {
    let threshold_radius = 2.0 + h / 2.0;
    let mut out = WrapLowerCheck {
        threshold_radius,
        windows_checked: 0,
        min_scaled_wrap: None,
        min_at: None,
        violations: 0,
    };
    for &(r, s) in rows {
        let Some(s) = s else { continue };
        if r < threshold_radius {
            continue;
        }
        out.windows_checked += 1;
        let v = r * s.wrap_gap;
        if v <= 1.0 {
            out.violations += 1;
        }
        if out.min_scaled_wrap.is_none_or(|m| v < m) {
            out.min_scaled_wrap = Some(v);
            out.min_at = Some(r);
        }
    }
    out
}

fn wrap_upper(alpha: f64, rows: &[(f64, Option<WindowSummary>)]) -> WrapUpperCheck {
    let mut out = WrapUpperCheck {
        bound: (alpha + 1.0 / alpha) / 2.0,
        deficit_bound: (2.0 * alpha + 1.0 / alpha) / 2.0,
        windows_checked: 0,
        deficit_windows: 0,
        max_scaled_wrap: None,
        max_at: None,
        violations: 0,
        deficit_exceedances: 0,
        deficit_bound_violations: 0,
    };
    for &(r, s) in rows {
        let Some(s) = s else { continue };
        if s.window.count < 2 {
            continue;
        }
        out.windows_checked += 1;
        let v = r * s.wrap_gap;
        let deficit = (s.window.count as f64) < s.window.interval_length();
        if deficit {
            out.deficit_windows += 1;
        }
        if v >= out.bound {
            if deficit {
                out.deficit_exceedances += 1;
            } else {
                out.violations += 1;
            }
        }
        if v >= out.deficit_bound {
            out.deficit_bound_violations += 1;
        }
        if out.max_scaled_wrap.is_none_or(|m| v > m) {
            out.max_scaled_wrap = Some(v);
            out.max_at = Some(r);
        }
    }
    out
}

/// Certifies the Delone property of `ξ_n = α√n` over `1 <= R <= r_max`.
pub fn delone_verdict(family: &PhaseFamily, r_max: f64, options: &DeloneOptions) -> Result<DeloneReport> {
    if family.kind() != FamilyKind::SqrtLinear {
        return Err(Error::InvalidFamily(format!(
            "Delone verdict needs the SqrtLinear family, got {}",
            family.kind().name()
        )));
    }
    if !(r_max >= 4.0 && r_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("R_max must be >= 4, got {r_max}")));
    }
    let alpha = family.alpha().expect("SqrtLinear has alpha").value();
    let h_lower = 1.0 / (2.0 * alpha);
    let h_upper = 1.0 / alpha;
    if !(r_max + h_upper <= SQ_ARG_LIMIT) {
        return Err(Error::InvalidArgument(format!("R_max + 1/α = {} too large", r_max + h_upper)));
    }
    family.check_range(ceil_sq(r_max + h_upper))?;

    let lower_rows = summaries(family, h_lower, r_max)?;
    let upper_rows = summaries(family, h_upper, r_max)?;
    let lower_profile = scaled_summary(h_lower, &lower_rows);
    let upper_profile = scaled_summary(h_upper, &upper_rows);
    let wrap_lower = wrap_lower(h_lower, &lower_rows);
    let wrap_upper = wrap_upper(alpha, &upper_rows);
    drop((lower_rows, upper_rows));

    let points = generate(family, floor_sq(r_max))?;
    let packing_radius = packing_radius_grid(&points, 1.0)?;
    let packing_points = points.len() as u64;
    drop(points);

    let region = match options.covering_region {
        Some(region) => region,
        None => SectorSpec::annulus(1.0, r_max.min(50.0))?,
    };
    let covering = covering_for_family(family, &region, options.eps)?;
    let density_sector = match options.density_sector {
        Some(s) => s,
        None => SectorSpec::new(0.0, 0.5, r_max / 2.0, r_max)?,
    };
    let density = density_ratio(family, &density_sector)?;

    let inf_scaled = lower_profile.inf_scaled;
    let sup_scaled = upper_profile.sup_scaled;
    let separation_bound = 4.0 * inf_scaled.map_or(0.0, |v| v.min(0.5));
    let uniformly_discrete = inf_scaled.is_some_and(|v| v > 0.0) && packing_radius > 0.0;
    let relatively_dense = sup_scaled.is_some_and(f64::is_finite) && covering.estimate.is_finite();
    let wrap_lower_ok = wrap_lower.violations == 0;
    let wrap_upper_ok = wrap_upper.violations == 0 && wrap_upper.deficit_bound_violations == 0;
    let verdict = Verdict {
        uniformly_discrete,
        relatively_dense,
        wrap_lower_ok,
        wrap_upper_ok,
        delone: uniformly_discrete && relatively_dense,
    };
    Ok(DeloneReport {
        family: family.clone(),
        r_max,
        h_lower,
        h_upper,
        inf_scaled,
        sup_scaled,
        separation_bound,
        packing_radius,
        packing_points,
        covering_radius_est: covering,
        density_ratio: density,
        density_sector,
        lower_profile,
        upper_profile,
        wrap_lower,
        wrap_upper,
        verdict,
    })
}
