//! Fine-scale statistics of phases mod 1: rescaled gap histograms and the
//! pair correlation of `√n mod 1`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaps::circular_gaps;
use crate::phase::{frac_phase, PhaseFamily};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapHistogram {
    pub family: PhaseFamily,
    pub n: u64,
    /// ascending; bin `i` holds rescaled gaps in `[e_i, e_{i+1})`, the first
    /// bin also takes values below `e_0` and the last one everything from
    /// `e_{k-1}` upwards
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub min_rescaled: f64,
    pub max_rescaled: f64,
    pub mean_rescaled: f64,
}

/// `count` bins of width `width` starting at 0.
pub fn uniform_edges(width: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| i as f64 * width).collect()
}

/// Histogram of the `N` circular gaps of `frac(ξ_1), …, frac(ξ_N)`, each
/// multiplied by `N` so that the mean gap is 1.
pub fn gap_histogram(family: &PhaseFamily, n: u64, bin_edges: &[f64]) -> Result<GapHistogram> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("gap histogram needs N >= 2, got {n}")));
    }
    if bin_edges.is_empty() || bin_edges.windows(2).any(|w| !(w[0] < w[1])) || !bin_edges[0].is_finite() {
        return Err(Error::InvalidArgument("bin edges must be finite and strictly ascending".into()));
    }
    family.check_range(n)?;
    let values = (1..=n)
        .into_par_iter()
        .map(|k| frac_phase(family, k))
        .collect::<Result<Vec<_>>>()?;
    let scale = n as f64;
    let rescaled: Vec<f64> = circular_gaps(&values)?.into_iter().map(|g| g * scale).collect();

    let mut counts = vec![0u64; bin_edges.len()];
    for &g in &rescaled {
        let i = bin_edges.partition_point(|&e| e <= g).saturating_sub(1);
        counts[i] += 1;
    }
    let min_rescaled = rescaled.iter().copied().fold(f64::INFINITY, f64::min);
    let max_rescaled = rescaled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean_rescaled = rescaled.iter().sum::<f64>() / scale;
    Ok(GapHistogram {
        family: family.clone(),
        n,
        bin_edges: bin_edges.to_vec(),
        counts,
        min_rescaled,
        max_rescaled,
        mean_rescaled,
    })
}

pub const PAIR_CORRELATION_DEFINITION: &str =
    "R2(s) = #{ordered pairs m != n <= N, ||xi_m - xi_n|| <= s/N'} / N', xi_n = sqrt(n) mod 1, ||.|| circular distance";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCorrelationReport {
    pub n: u64,
    /// indices removed from the sample (the perfect squares, unless included)
    pub excluded: u64,
    /// sample size `N' = N − excluded`, also the normalization
    pub n_effective: u64,
    pub s_values: Vec<f64>,
    pub ordered_pairs: Vec<u64>,
    pub statistics: Vec<f64>,
    /// Poisson prediction `2s`
    pub expected: Vec<f64>,
    pub definition: String,
}

/// Sorted fractional parts of `√m`, `m <= n`, optionally skipping squares.
pub fn sqrt_fractions(n: u64, include_squares: bool) -> Result<Vec<f64>> {
    let family = PhaseFamily::sqrt("1")?;
    family.check_range(n)?;
    let root = n.isqrt();
    let mut values = (1..=n)
        .into_par_iter()
        .filter(|&m| include_squares || m.isqrt().pow(2) != m)
        .map(|m| frac_phase(&family, m))
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(include_squares || values.len() as u64 == n - root);
    values.par_sort_unstable_by(f64::total_cmp);
    Ok(values)
}

/// Unordered pairs `i < j` of a sorted sample with circular distance at most `l`.
///
/// Distances are evaluated as `min(d, 1 − d)` with `d = v_j − v_i`, the same
/// operations as [`crate::numeric::circular_distance`]; both `d` and `1 − d`
/// are monotone in `j`, so each point needs two binary searches.
pub fn count_close_pairs(sorted: &[f64], l: f64) -> u64 {
    let len = sorted.len();
    (0..len)
        .into_par_iter()
        .map(|i| {
            let v = sorted[i];
            let tail = &sorted[i + 1..];
            let near = tail.partition_point(|&w| w - v <= l);
            let wrap_from = tail.partition_point(|&w| 1.0 - (w - v) > l);
            (near + tail.len().saturating_sub(near.max(wrap_from))) as u64
        })
        .sum()
}

/// Pair correlation of `√n mod 1` over `n <= N` at the window half-widths `s`.
pub fn pair_correlation(n: u64, s_values: &[f64], include_squares: bool) -> Result<PairCorrelationReport> {
    if n < 100 {
        return Err(Error::InvalidArgument(format!("pair correlation needs N >= 100, got {n}")));
    }
    if let Some(&bad) = s_values.iter().find(|&&s| !(0.0..=n as f64 / 4.0).contains(&s)) {
        return Err(Error::InvalidArgument(format!("s = {bad} outside [0, N/4]")));
    }
    let values = sqrt_fractions(n, include_squares)?;
    let n_eff = values.len() as u64;
    let norm = n_eff as f64;
    let ordered_pairs: Vec<u64> = s_values.iter().map(|&s| 2 * count_close_pairs(&values, s / norm)).collect();
    Ok(PairCorrelationReport {
        n,
        excluded: n - n_eff,
        n_effective: n_eff,
        s_values: s_values.to_vec(),
        statistics: ordered_pairs.iter().map(|&c| c as f64 / norm).collect(),
        expected: s_values.iter().map(|s| 2.0 * s).collect(),
        ordered_pairs,
        definition: PAIR_CORRELATION_DEFINITION.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::circular_distance;
    use crate::phase::Alpha;

    fn brute_pairs(values: &[f64], l: f64) -> u64 {
        let mut c = 0;
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                if circular_distance(values[i], values[j]) <= l {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn histogram_mass_and_mean() {
        let f = PhaseFamily::sqrt("1").unwrap();
        let h = gap_histogram(&f, 5000, &uniform_edges(0.25, 16)).unwrap();
        assert_eq!(h.counts.iter().sum::<u64>(), 5000);
        assert!((h.mean_rescaled - 1.0).abs() < 1e-9);
        assert!(h.min_rescaled >= 0.0 && h.max_rescaled > 1.0);
    }

    #[test]
    fn three_distances_for_linear_family() {
        let f = PhaseFamily::linear(Alpha::parse("0.6180339887").unwrap()).unwrap();
        let h = gap_histogram(&f, 1000, &[0.0]).unwrap();
        let values: Vec<f64> = (1..=1000).map(|n| frac_phase(&f, n).unwrap()).collect();
        let mut gaps = circular_gaps(&values).unwrap();
        gaps.sort_by(f64::total_cmp);
        let mut distinct = vec![gaps[0]];
        for g in gaps {
            if g - distinct.last().unwrap() > 1e-12 {
                distinct.push(g);
            }
        }
        assert!(distinct.len() <= 3, "{distinct:?}");
        assert_eq!(h.counts, vec![1000]);
    }

    #[test]
    fn equally_spaced_custom_values() {
        let n = 64;
        let f = PhaseFamily::custom((0..n).map(|k| k as f64 / n as f64).collect()).unwrap();
        let h = gap_histogram(&f, n as u64, &[0.0, 0.5, 1.5]).unwrap();
        assert!((h.min_rescaled - 1.0).abs() < 1e-12 && (h.max_rescaled - 1.0).abs() < 1e-12);
        assert_eq!(h.counts, vec![0, 64, 0]);
    }

    #[test]
    fn histogram_rejects_bad_input() {
        let f = PhaseFamily::sqrt("1").unwrap();
        assert!(gap_histogram(&f, 1, &[0.0]).is_err());
        assert!(gap_histogram(&f, 10, &[]).is_err());
        assert!(gap_histogram(&f, 10, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn pair_counts_match_bruteforce() {
        for include in [false, true] {
            let values = sqrt_fractions(2000, include).unwrap();
            for l in [0.0, 1e-4, 5e-4, 0.01, 0.2, 0.3] {
                assert_eq!(count_close_pairs(&values, l), brute_pairs(&values, l), "l={l}");
            }
        }
    }

    #[test]
    fn pair_correlation_basics() {
        let rep = pair_correlation(2000, &[0.0, 0.5, 1.0, 2.0], false).unwrap();
        assert_eq!(rep.excluded, 44);
        assert_eq!(rep.n_effective, 1956);
        assert_eq!(rep.statistics[0], 0.0);
        assert!(rep.statistics.windows(2).all(|w| w[0] <= w[1]));
        assert!(rep.ordered_pairs.iter().all(|c| c % 2 == 0));
        assert!(pair_correlation(50, &[1.0], false).is_err());
        assert!(pair_correlation(1000, &[300.0], false).is_err());
        // squares coincide at 0, so they add pairs at distance zero
        let with = pair_correlation(2000, &[0.0], true).unwrap();
        assert_eq!(with.ordered_pairs[0], 44 * 43);
    }
}
