//! Library results against independent oracles and pinned fixtures.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use spiral_delone::gaps::{circular_gaps, gap_profile, window_gaps};
use spiral_delone::geometry::{
    annulus_separation, covering_for_family, covering_radius_estimate, packing_radius_bruteforce,
    packing_radius_grid, KdTree, SectorSpec,
};
use spiral_delone::numeric::circular_distance;
use spiral_delone::phase::{frac_phase_oracle, Alpha, PhaseFamily};
use spiral_delone::spiral::{generate, generate_range, window};
use spiral_delone::stats::{count_close_pairs, sqrt_fractions};

const ALPHAS: [&str; 4] = ["0.5", "1", "sqrt_pi", "sqrt_golden"];

fn family(alpha: &str) -> PhaseFamily {
    PhaseFamily::sqrt(alpha).unwrap()
}

fn alpha_value(alpha: &str) -> f64 {
    Alpha::parse(alpha).unwrap().value()
}

/// Sorts oracle phases of every index in the window and takes circular gaps.
fn oracle_gaps(f: &PhaseFamily, r: f64, h: f64) -> Vec<f64> {
    let w = window(r, h).unwrap();
    let mut values: Vec<f64> = w.indices().map(|n| frac_phase_oracle(f, n).unwrap()).collect();
    values.sort_by(f64::total_cmp);
    let mut gaps: Vec<f64> = values.windows(2).map(|p| p[1] - p[0]).collect();
    gaps.push(values[0] + 1.0 - values[values.len() - 1]);
    gaps
}

#[test]
fn window_gaps_match_sorted_oracle_phases() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for alpha in ALPHAS {
        let f = family(alpha);
        let a = alpha_value(alpha);
        for _ in 0..1000 {
            let r: f64 = rng.random_range(1.0..3000.0);
            let h = 1.0 / a;
            let rep = window_gaps(&f, r, h).unwrap();
            let oracle = oracle_gaps(&f, r, h);
            assert_eq!(rep.gaps.len(), oracle.len());
            let oracle_min = oracle.iter().copied().fold(f64::INFINITY, f64::min);
            assert!((rep.min_gap - oracle_min).abs() < 1e-12, "alpha={alpha} R={r}");
            let total: f64 = rep.gaps.iter().sum();
            assert!((total - 1.0).abs() < 1e-9);
            if rep.window.count >= 2 {
                let lower = a / (2.0 * (r + h));
                assert!(rep.gaps[..rep.gaps.len() - 1].iter().all(|&g| g > lower));
                assert!(rep.min_gap * r > 0.0);
            }
        }
    }
}

#[test]
fn circular_gaps_sum_to_one_and_match_sorted_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let len = rng.random_range(1..300);
        let values: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..1.0)).collect();
        let gaps = circular_gaps(&values).unwrap();
        assert_eq!(gaps.len(), len);
        assert!((gaps.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        for (i, pair) in sorted.windows(2).enumerate() {
            assert_eq!(gaps[i], pair[1] - pair[0]);
        }
    }
}

#[test]
fn separation_against_brute_force_distances() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for alpha in ALPHAS {
        let f = family(alpha);
        for _ in 0..100 {
            let r: f64 = rng.random_range(1.0..200.0);
            let h: f64 = rng.random_range(0.1..2.0);
            let Ok(sep) = annulus_separation(&f, r, h) else { continue };
            let w = window(r, h).unwrap();
            let pts = generate_range(&f, w.indices()).unwrap();
            let mut brute = f64::INFINITY;
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    brute = brute.min((pts[i].x - pts[j].x).hypot(pts[i].y - pts[j].y));
                }
            }
            if pts.len() >= 2 {
                assert!((sep.min_distance - brute).abs() <= 1e-12 * brute);
                assert!(sep.min_distance >= sep.bound - 1e-9, "alpha={alpha} R={r} h={h}");
            }
        }
    }
}

#[test]
fn refining_the_radius_grid_never_raises_the_infimum() {
    for alpha in ALPHAS {
        let f = family(alpha);
        let h = 1.0 / (2.0 * alpha_value(alpha));
        let mut grid: Vec<f64> = (0..=50).map(|k| 2.0 + 4.0 * k as f64).collect();
        let mut prev = gap_profile(&f, h, &grid).unwrap().inf_scaled.unwrap();
        for _ in 0..4 {
            grid = grid
                .windows(2)
                .flat_map(|w| [w[0], 0.5 * (w[0] + w[1])])
                .chain(grid.last().copied())
                .collect();
            let inf = gap_profile(&f, h, &grid).unwrap().inf_scaled.unwrap();
            assert!(inf <= prev, "alpha={alpha}: {inf} > {prev}");
            prev = inf;
        }
    }
}

#[test]
fn kd_tree_matches_linear_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let pts = generate(&family("sqrt_golden"), 3000).unwrap();
    let tree = KdTree::new(&pts);
    for _ in 0..2000 {
        let q = [rng.random_range(-60.0..60.0), rng.random_range(-60.0..60.0)];
        let brute = pts.iter().map(|p| (p.x - q[0]).hypot(p.y - q[1])).fold(f64::INFINITY, f64::min);
        assert!((tree.nearest_distance(q) - brute).abs() <= 1e-12);
    }
}

#[test]
fn covering_estimate_is_sandwiched_by_a_tenfold_finer_lattice() {
    for alpha in ["1", "sqrt_pi"] {
        let f = family(alpha);
        let region = SectorSpec::annulus(5.0, 12.0).unwrap();
        let pts = generate(&f, 18 * 18).unwrap();
        let eps = 0.1;
        let est = covering_radius_estimate(&pts, &region, eps).unwrap();
        assert_eq!(est.slack, eps * std::f64::consts::SQRT_2 / 2.0);

        let tree = KdTree::new(&pts);
        let fine = eps / 10.0;
        let k = (region.d() / fine).ceil() as i64;
        let fine_max = (-k..=k)
            .into_par_iter()
            .map(|i| {
                let x = i as f64 * fine;
                (-k..=k)
                    .map(|j| [x, j as f64 * fine])
                    .filter(|q| region.contains_point(q[0], q[1]))
                    .map(|q| tree.nearest_distance(q))
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max);
        assert!(fine_max >= est.estimate - 1e-12, "alpha={alpha}: fine {fine_max} < est {}", est.estimate);
        assert!(fine_max <= est.estimate + est.slack, "alpha={alpha}: fine {fine_max} > est + slack");
    }
}

#[test]
fn covering_estimate_equals_exhaustive_lattice_maximum() {
    let f = family("sqrt_golden");
    let pts = generate(&f, 400).unwrap();
    let tree = KdTree::new(&pts);
    let region = SectorSpec::new(0.1, 0.6, 3.0, 12.0).unwrap();
    let eps = 0.05;
    let est = covering_radius_estimate(&pts, &region, eps).unwrap();
    let k = (region.d() / eps).ceil() as i64;
    let mut brute = 0.0f64;
    for i in -k..=k {
        for j in -k..=k {
            let (x, y) = (i as f64 * eps, j as f64 * eps);
            if region.contains_point(x, y) {
                brute = brute.max(tree.nearest_distance([x, y]));
            }
        }
    }
    assert_eq!(est.estimate, brute);
}

#[test]
fn close_pair_counts_on_random_subsamples() {
    let all = sqrt_fractions(20_000, false).unwrap();
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let size = rng.random_range(200..1500);
        let mut sample: Vec<f64> = all.choose_multiple(&mut rng, size).copied().collect();
        sample.sort_by(f64::total_cmp);
        for s in [0.1, 0.5, 1.0, 2.0, 10.0] {
            let l = s / size as f64;
            let mut brute = 0u64;
            for i in 0..sample.len() {
                for j in i + 1..sample.len() {
                    if circular_distance(sample[i], sample[j]) <= l {
                        brute += 1;
                    }
                }
            }
            assert_eq!(count_close_pairs(&sample, l), brute, "seed={seed} s={s}");
        }
    }
}

#[test]
fn packing_fixture_for_alpha_one() {
    let pts = generate(&family("1"), 2000).unwrap();
    assert_eq!(packing_radius_bruteforce(&pts).unwrap(), 1.0);
    assert_eq!(packing_radius_grid(&pts, 0.7).unwrap(), 1.0);
}

#[test]
fn packing_for_sqrt_pi_is_independent_of_cell_size() {
    let pts = generate(&family("sqrt_pi"), 100_000).unwrap();
    for cell in [0.5, 1.0, 2.0] {
        let d = packing_radius_grid(&pts, cell).unwrap();
        assert!((d - 0.5641882316264161).abs() < 1e-12, "cell {cell}: {d}");
    }
}

#[test]
fn covering_fixtures_for_alpha_one() {
    let f = family("1");
    let near = covering_for_family(&f, &SectorSpec::annulus(5.0, 50.0).unwrap(), 0.01).unwrap();
    assert!((near.estimate - 1.6419860237727621).abs() < 1e-12);
    assert!(near.outer_margin.unwrap() > 2.0 * near.estimate);
    let far = covering_for_family(&f, &SectorSpec::annulus(5.0, 100.0).unwrap(), 0.01).unwrap();
    assert!((far.estimate - 1.643867535972936).abs() < 1e-12);
}
