use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spiral::Planar;

/// Squared distance, evaluated identically by every packing routine so that
/// their results compare bit for bit.
#[inline]
fn dist2(p: [f64; 2], q: [f64; 2]) -> f64 {
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    dx * dx + dy * dy
}

fn check_len<P>(points: &[P]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: points.len() });
    }
    Ok(())
}

/// Minimum pairwise distance by comparing every pair.
pub fn packing_radius_bruteforce<P: Planar + Sync>(points: &[P]) -> Result<f64> {
    check_len(points)?;
    let xy: Vec<[f64; 2]> = points.iter().map(Planar::xy).collect();
    let best = (0..xy.len())
        .into_par_iter()
        .map(|i| {
            let p = xy[i];
            xy[i + 1..].iter().fold(f64::INFINITY, |m, &q| m.min(dist2(p, q)))
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best.sqrt())
}

/// Minimum pairwise distance by bucketing points into square cells.
///
/// Pairs closer than the cell size always sit in neighboring cells, so a pass
/// whose best pair is shorter than the cell size is exact. Otherwise the cell
/// size is reset just above the best distance found (or doubled if no pair
/// shared a neighborhood) and the pass repeats.
pub fn packing_radius_grid<P: Planar + Sync>(points: &[P], cell_size: f64) -> Result<f64> {
    check_len(points)?;
    if !(cell_size > 0.0 && cell_size.is_finite()) {
        return Err(Error::InvalidArgument(format!("cell size must be positive, got {cell_size}")));
    }
    let xy: Vec<[f64; 2]> = points.iter().map(Planar::xy).collect();
    let mut cs = cell_size;
    loop {
        let best = grid_pass(&xy, cs);
        if best == 0.0 {
            return Ok(0.0);
        }
        // a small margin absorbs rounding in the cell assignment x / cs
        if best.is_finite() && best.sqrt() < cs * (1.0 - 1e-9) {
            return Ok(best.sqrt());
        }
        cs = if best.is_finite() { best.sqrt() * 1.001 } else { cs * 2.0 };
    }
}

/// Smallest squared distance among pairs in the same or adjacent cells.
fn grid_pass(xy: &[[f64; 2]], cs: f64) -> f64 {
    let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in xy.iter().enumerate() {
        cells.entry(cell_of(*p, cs)).or_default().push(i);
    }
    let mut keys: Vec<(i64, i64)> = cells.keys().copied().collect();
    keys.sort_unstable();
    // each unordered neighbor pair of cells is visited once
    const FORWARD: [(i64, i64); 4] = [(1, -1), (1, 0), (1, 1), (0, 1)];
    keys.par_iter()
        .map(|&(cx, cy)| {
            let own = &cells[&(cx, cy)];
            let mut best = f64::INFINITY;
            for (k, &i) in own.iter().enumerate() {
                for &j in &own[k + 1..] {
                    best = best.min(dist2(xy[i], xy[j]));
                }
            }
            for (dx, dy) in FORWARD {
                if let Some(other) = cells.get(&(cx + dx, cy + dy)) {
                    for &i in own {
                        for &j in other {
                            best = best.min(dist2(xy[i], xy[j]));
                        }
                    }
                }
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min)
}

#[inline]
fn cell_of(p: [f64; 2], cs: f64) -> (i64, i64) {
    ((p[0] / cs).floor() as i64, (p[1] / cs).floor() as i64)
}
