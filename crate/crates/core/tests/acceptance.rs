//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spiral_delone::gaps::{delone_verdict, window_gaps, DeloneOptions};
use spiral_delone::geometry::{
    covering_for_family, covering_radius_estimate, density_ratio, packing_radius_bruteforce,
    packing_radius_grid, sector_count, SectorSpec,
};
use spiral_delone::numeric::circular_distance;
use spiral_delone::phase::{frac_phase, frac_phase_oracle, Alpha, PhaseFamily};
use spiral_delone::render::{count_point_circles, count_rings};
use spiral_delone::spiral::{generate, window, SpiralPoint};
use spiral_delone::stats::{gap_histogram, pair_correlation, uniform_edges};

const ALPHAS: [&str; 4] = ["0.5", "1", "sqrt_pi", "sqrt_golden"];
const SEED: u64 = 0x5EED_2024;

// pinned tolerances
const SUP_SLACK: f64 = 1e-12;
const COVERING_REL_DIFF: f64 = 0.25;
const RAY_COVERING_MIN: f64 = 10.0;
const DENSITY_BAND: (f64, f64) = (0.95, 1.05);
const NEGATIVE_BAND: (f64, f64) = (0.5, 1.5);
const MIN_RESCALED_BELOW: f64 = 0.1;
const MAX_RESCALED_ABOVE: f64 = 3.0;
const PAIR_REL_TOL: f64 = 0.15;
const PRECISION_TOL: f64 = 1e-9;

type Outcome = Result<String, String>;

fn sqrt_family(alpha: &str) -> PhaseFamily {
    PhaseFamily::sqrt(alpha).expect("valid alpha")
}

fn alpha_value(alpha: &str) -> f64 {
    Alpha::parse(alpha).unwrap().value()
}

/// Exact `(floor(x²), ceil(x²))` of a positive double through its integer mantissa.
fn exact_sq_bounds(x: f64) -> (u64, u64) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64 - 1075;
    let mant = (bits & ((1u64 << 52) - 1)) | (1u64 << 52);
    let sq = u128::from(mant) * u128::from(mant);
    let shift = -2 * exp;
    assert!(shift > 0, "test inputs are below 2^26");
    let floor = (sq >> shift) as u64;
    let exact = sq & ((1u128 << shift) - 1) == 0;
    (floor, if exact { floor } else { floor + 1 })
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0;
    for alpha in ALPHAS {
        let f = sqrt_family(alpha);
        for _ in 0..1000 {
            let r: f64 = rng.random_range(1.0..1000.0);
            let got = sector_count(&f, &SectorSpec::disc(r).unwrap()).map_err(|e| e.to_string())?;
            let (floor, _) = exact_sq_bounds(r);
            if got != floor {
                return Err(format!("alpha={alpha} R={r:?}: count {got} != floor(R^2) {floor}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} radii, zero mismatches"))
}

fn criterion_2() -> Outcome {
    let mut windows = 0;
    let mut gaps_checked = 0u64;
    let mut violations = Vec::new();
    for alpha in ALPHAS {
        let f = sqrt_family(alpha);
        let a = alpha_value(alpha);
        let h = 1.0 / a;
        for r in 1..=500u32 {
            let r = f64::from(r);
            let rep = window_gaps(&f, r, h).map_err(|e| e.to_string())?;
            let lo = a / (2.0 * (r + h));
            let hi = a / (2.0 * r);
            // closed-form gaps from the report and gaps between oracle phases
            let oracle: Vec<f64> = rep
                .window
                .indices()
                .map(|n| frac_phase_oracle(&f, n).unwrap())
                .collect();
            let oracle_gaps = oracle.windows(2).map(|w| {
                let d = w[1] - w[0];
                if d < 0.0 {
                    d + 1.0
                } else {
                    d
                }
            });
            let interior = &rep.gaps[..rep.gaps.len() - 1];
            for (g, og) in interior.iter().zip(oracle_gaps) {
                for v in [*g, og] {
                    gaps_checked += 1;
                    if !(lo < v && v <= hi) {
                        violations.push(format!("alpha={alpha} R={r} gap={v:e} not in ({lo:e}, {hi:e}]"));
                    }
                }
            }
            windows += 1;
        }
    }
    if violations.is_empty() {
        Ok(format!("{windows} windows, {gaps_checked} interior gaps (closed form and oracle), zero violations"))
    } else {
        Err(format!("{} violations, first: {}", violations.len(), violations[0]))
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    for _ in 0..10_000 {
        let r: f64 = rng.random_range(1.0..=1e4);
        let h: f64 = 2.0 - rng.random_range(0.0..2.0); // (0, 2]
        let w = window(r, h).map_err(|e| e.to_string())?;
        let exact = exact_sq_bounds(r + h).1 - exact_sq_bounds(r).1;
        if w.count != exact {
            return Err(format!("R={r:?} h={h:?}: count {} != exact {exact}", w.count));
        }
        let len = 2.0 * h * r + h * h;
        if !((w.count as f64 - len).abs() < 1.0) {
            return Err(format!("R={r:?} h={h:?}: M={} vs 2hR+h^2={len}", w.count));
        }
    }
    Ok("10000 (R, h) pairs, counts exact, |M - (2hR+h^2)| < 1 throughout".into())
}

fn criterion_4() -> Outcome {
    let mut lines = Vec::new();
    for alpha in ALPHAS {
        let started = Instant::now();
        let f = sqrt_family(alpha);
        let a = alpha_value(alpha);
        let rep = delone_verdict(&f, 1000.0, &DeloneOptions::default()).map_err(|e| e.to_string())?;
        let inf = rep.inf_scaled.ok_or("no window with two points")?;
        let sup = rep.sup_scaled.ok_or("no window with two points")?;
        if !(inf > 0.0) {
            return Err(format!("alpha={alpha}: inf_scaled = {inf}"));
        }
        if !(sup <= a / 2.0 + SUP_SLACK) {
            return Err(format!("alpha={alpha}: sup_scaled = {sup} > alpha/2"));
        }
        let wl = &rep.wrap_lower;
        if wl.violations != 0 || wl.windows_checked == 0 {
            return Err(format!("alpha={alpha}: R*delta_M <= 1 on {} of {} windows", wl.violations, wl.windows_checked));
        }
        lines.push(format!(
            "alpha={alpha}: inf={inf:.6} sup={sup:.6} min R*delta_M={:.6} over {} windows ({:.1}s)",
            wl.min_scaled_wrap.unwrap(),
            wl.windows_checked,
            started.elapsed().as_secs_f64()
        ));
    }
    Ok(lines.join("; "))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let families = [
        sqrt_family("0.5"),
        sqrt_family("1"),
        sqrt_family("sqrt_pi"),
        sqrt_family("sqrt_golden"),
        PhaseFamily::linear(Alpha::parse("0.6180339887").unwrap()).unwrap(),
        PhaseFamily::power(Alpha::parse("1").unwrap(), 0.75).unwrap(),
        PhaseFamily::custom((0..5000).map(|k| ((k * 7919) % 5003) as f64 / 5003.0).collect()).unwrap(),
    ];
    for config in 0..50 {
        let f = &families[config % families.len()];
        let n_max = rng.random_range(2..=5000u64);
        let keep: f64 = rng.random_range(0.3..=1.0);
        let pts: Vec<SpiralPoint> = generate(f, n_max)
            .map_err(|e| e.to_string())?
            .into_iter()
            .filter(|_| rng.random_bool(keep))
            .collect();
        if pts.len() < 2 {
            continue;
        }
        let cell = rng.random_range(0.05..5.0);
        let brute = packing_radius_bruteforce(&pts).map_err(|e| e.to_string())?;
        let grid = packing_radius_grid(&pts, cell).map_err(|e| e.to_string())?;
        if brute.to_bits() != grid.to_bits() {
            return Err(format!("config {config}: grid {grid:e} != brute {brute:e}"));
        }
    }
    Ok("50 configurations, grid result bit-identical to brute force".into())
}

fn criterion_6() -> Outcome {
    let f = sqrt_family("1");
    let near = covering_for_family(&f, &SectorSpec::annulus(5.0, 50.0).unwrap(), 0.01).map_err(|e| e.to_string())?;
    let far = covering_for_family(&f, &SectorSpec::annulus(5.0, 100.0).unwrap(), 0.01).map_err(|e| e.to_string())?;
    let rel = (near.estimate - far.estimate).abs() / near.estimate.min(far.estimate);
    if !(rel < COVERING_REL_DIFF) {
        return Err(format!("c*(5..50)={} c*(5..100)={} differ by {rel:.3}", near.estimate, far.estimate));
    }
    let ray = PhaseFamily::custom(vec![0.0; 3600]).unwrap();
    let pts = generate(&ray, 3600).map_err(|e| e.to_string())?;
    let ray_est = covering_radius_estimate(&pts, &SectorSpec::annulus(5.0, 50.0).unwrap(), 0.01)
        .map_err(|e| e.to_string())?
        .estimate;
    if !(ray_est >= RAY_COVERING_MIN) {
        return Err(format!("constant phase covering estimate {ray_est} < {RAY_COVERING_MIN}"));
    }
    Ok(format!(
        "c*(5..50)={:.6} c*(5..100)={:.6} (rel diff {rel:.4}); constant phase {ray_est:.3}",
        near.estimate, far.estimate
    ))
}

fn random_sector(rng: &mut ChaCha8Rng) -> SectorSpec {
    let d = rng.random_range(30.0..=200.0);
    let c = rng.random_range(0.0..=d - 30.0);
    let a = rng.random_range(0.0..1.0);
    let width = rng.random_range(0.25..=1.0);
    SectorSpec::new(a, a + width, c, d).unwrap()
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let sectors: Vec<SectorSpec> = (0..20).map(|_| random_sector(&mut rng)).collect();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for alpha in ALPHAS {
        let f = sqrt_family(alpha);
        for s in &sectors {
            let ratio = density_ratio(&f, s).map_err(|e| e.to_string())?;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
            if !(DENSITY_BAND.0..=DENSITY_BAND.1).contains(&ratio) {
                return Err(format!("alpha={alpha} sector {s:?}: ratio {ratio}"));
            }
        }
    }
    let constant = PhaseFamily::custom(vec![0.0; 40_000]).unwrap();
    let outside = sectors
        .iter()
        .filter(|s| {
            let r = density_ratio(&constant, s).unwrap();
            !(NEGATIVE_BAND.0..=NEGATIVE_BAND.1).contains(&r)
        })
        .count();
    if outside == 0 {
        return Err("constant phase family stayed inside [0.5, 1.5] on every sector".into());
    }
    Ok(format!("80 ratios in [{lo:.4}, {hi:.4}]; constant phase outside band on {outside}/20 sectors"))
}

fn criterion_8() -> Outcome {
    let f = sqrt_family("1");
    let hist = gap_histogram(&f, 100_000, &uniform_edges(0.1, 50)).map_err(|e| e.to_string())?;
    if !(hist.min_rescaled < MIN_RESCALED_BELOW && hist.max_rescaled > MAX_RESCALED_ABOVE) {
        return Err(format!("rescaled gaps span [{}, {}]", hist.min_rescaled, hist.max_rescaled));
    }
    let rep = pair_correlation(100_000, &[0.5, 1.0, 2.0], false).map_err(|e| e.to_string())?;
    for (r2, want) in rep.statistics.iter().zip(&rep.expected) {
        if !((r2 - want).abs() <= PAIR_REL_TOL * want) {
            return Err(format!("R2 = {r2} vs Poisson {want}"));
        }
    }
    // brute-force ordered pair count over the non-square indices up to 2000
    let n = 2000u64;
    let values: Vec<f64> = (1..=n)
        .filter(|m| m.isqrt().pow(2) != *m)
        .map(|m| frac_phase(&f, m).unwrap())
        .collect();
    let norm = values.len() as f64;
    let s_values = [0.25, 0.5, 1.0, 2.0, 5.0];
    let fast = pair_correlation(n, &s_values, false).map_err(|e| e.to_string())?;
    for (s, &got) in s_values.iter().zip(&fast.ordered_pairs) {
        let l = s / norm;
        let mut brute = 0u64;
        for (i, x) in values.iter().enumerate() {
            for (j, y) in values.iter().enumerate() {
                if i != j && circular_distance(*x, *y) <= l {
                    brute += 1;
                }
            }
        }
        if brute != got {
            return Err(format!("N=2000 s={s}: sorted count {got} != brute force {brute}"));
        }
    }
    Ok(format!(
        "rescaled gaps in [{:.3e}, {:.2}]; R2(0.5,1,2) = {:.4}, {:.4}, {:.4}; N=2000 counts match brute force at 5 s values",
        hist.min_rescaled, hist.max_rescaled, rep.statistics[0], rep.statistics[1], rep.statistics[2]
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let mut worst = 0.0f64;
    for alpha in ALPHAS {
        let f = sqrt_family(alpha);
        for _ in 0..10_000 {
            let n = rng.random_range(1..=1u64 << 40);
            let fast = frac_phase(&f, n).map_err(|e| e.to_string())?;
            let slow = frac_phase_oracle(&f, n).map_err(|e| e.to_string())?;
            let err = (fast - slow).abs();
            worst = worst.max(err);
            if !(err <= PRECISION_TOL) {
                return Err(format!("alpha={alpha} n={n}: fast {fast} oracle {slow}"));
            }
        }
    }
    Ok(format!("40000 indices, max |fast - oracle| = {worst:.3e}"))
}

fn render(bin: &Path, dir: &Path, alpha: &str, tag: &str) -> Result<String, String> {
    let out = dir.join(format!("{tag}.svg"));
    let status = Command::new(bin)
        .args(["render", "--family", "sqrt", "--alpha", alpha, "--n-max", "40000", "--annuli"])
        .arg("--out")
        .arg(&out)
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("render exited with {status}"));
    }
    std::fs::read_to_string(&out).map_err(|e| e.to_string())
}

fn criterion_10() -> Outcome {
    let bin = Path::new(env!("CARGO_BIN_EXE_spiral-delone"));
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for alpha in ALPHAS {
        let first = render(bin, dir.path(), alpha, &format!("{alpha}-a"))?;
        let second = render(bin, dir.path(), alpha, &format!("{alpha}-b"))?;
        if first != second {
            return Err(format!("alpha={alpha}: SVG differs between runs"));
        }
        let circles = count_point_circles(&first);
        if circles != 40_000 {
            return Err(format!("alpha={alpha}: {circles} point circles"));
        }
        let h = 1.0 / alpha_value(alpha);
        let rings = count_rings(&first);
        let want = ((200.0 - 1.0) / h).ceil() as usize + 1;
        if rings != want {
            return Err(format!("alpha={alpha}: {rings} rings, expected {want}"));
        }
        notes.push(format!("{alpha}: {circles} points, {rings} rings"));
    }
    Ok(format!("byte-identical reruns; {}", notes.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("disc-count law", criterion_1),
        ("gap-bound law", criterion_2),
        ("window-count law", criterion_3),
        ("Delone verdict", criterion_4),
        ("packing oracle equivalence", criterion_5),
        ("covering stability", criterion_6),
        ("density ratio", criterion_7),
        ("fine-scale statistics", criterion_8),
        ("precision", criterion_9),
        ("figure reproduction", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}) [{secs:.1}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}) [{secs:.1}s]: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
