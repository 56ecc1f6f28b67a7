//! End-to-end acceptance suite. Each test prints one pass line with the
//! measured statistics; a failed assertion marks the criterion failed.
//!
//! The expensive tests share one height histogram with bound 512, enough
//! for thresholds up to T = 512^4 = 2^36 and for dilated thresholds
//! kappa * 2^32.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use num_traits::ToPrimitive;

use pointcount::asymptotics::{
    dirichlet_pole_probe, exponent_probe, fit_constant, local_density, local_factor_check,
    saturation_profile, well_roundedness,
};
use pointcount::enumeration::{
    count_curve, count_on_small_diagonal, count_points, exhaustive_histogram, height_histogram,
    schanuel_count, singular_primitive_classes, HeightHistogram,
};
use pointcount::pgl2::{boundary_geometry, restriction_table, ModelConfig};
use pointcount::picard::{invariants, is_balanced, Rational};
use pointcount::subgroups::{
    alternating_5, goursat_closure, intermediate_subgroups, rank, tuple_validity, GroupTuple,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

static HIST: OnceLock<HeightHistogram> = OnceLock::new();

fn hist() -> &'static HeightHistogram {
    HIST.get_or_init(|| height_histogram(512).unwrap())
}

fn geometric_grid(lo: u32, hi: u32, step: u32) -> Vec<u128> {
    (lo..=hi).step_by(step as usize).map(|k| 1u128 << k).collect()
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().fold(f64::MIN, |m, &v| m.max(v));
    let min = values.iter().fold(f64::MAX, |m, &v| m.min(v));
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (max - min) / mean
}

fn check_time(start: Instant, limit: Duration, what: &str) {
    let elapsed = start.elapsed();
    assert!(elapsed <= limit, "{what} took {elapsed:?}, limit {limit:?}");
}

#[test]
fn criterion_01_anticanonical_invariants() {
    let start = Instant::now();
    for r in 2..=5 {
        let cfg = ModelConfig::anticanonical(r).unwrap();
        let (geom, l) = boundary_geometry(&cfg);
        let inv = invariants(&geom, &l).unwrap();
        assert_eq!(inv.a, Rational::new(1, 1), "r = {r}");
        assert_eq!(inv.b, r as u32 - 1, "r = {r}");
    }
    check_time(start, Duration::from_secs(1), "criterion 1");
    println!("criterion 1: PASS (a, b) = (1, r-1) exactly for r in 2..=5");
}

#[test]
fn criterion_02_balance() {
    let start = Instant::now();
    for r in 2..=5 {
        let cfg = ModelConfig::anticanonical(r).unwrap();
        let (geom, l) = boundary_geometry(&cfg);
        let table = restriction_table(&cfg);
        let (balanced, witness) = is_balanced(&geom, &l, &table).unwrap();
        assert!(balanced, "anticanonical r = {r} must be balanced");
        assert_eq!(witness, None);
    }
    let cfg = ModelConfig::new(3, vec![4, 8]).unwrap();
    let (geom, l) = boundary_geometry(&cfg);
    let (balanced, witness) = is_balanced(&geom, &l, &restriction_table(&cfg)).unwrap();
    assert!(!balanced);
    assert_eq!(witness, Some((1, 3)));
    // any unequal degree pair on two factors is unbalanced
    let cfg = ModelConfig::new(3, vec![2, 4]).unwrap();
    let (geom, l) = boundary_geometry(&cfg);
    let (balanced, _) = is_balanced(&geom, &l, &restriction_table(&cfg)).unwrap();
    assert!(!balanced);
    check_time(start, Duration::from_secs(1), "criterion 2");
    println!("criterion 2: PASS balance verdicts exact, witness (1, 3) for degrees (4, 8)");
}

#[test]
fn criterion_03_histogram_oracle() {
    let start = Instant::now();
    let hist = hist();
    assert_eq!(hist.h(1), 24);
    let exhaustive = exhaustive_histogram(8).unwrap();
    for n in 1..=8 {
        assert_eq!(hist.h(n), exhaustive.h(n), "h({n})");
    }
    assert_eq!(schanuel_count(1).unwrap(), 40);
    for bound in [8u32, 64, 256] {
        let classes: u128 = hist.truncate(bound).counts().iter().map(|&c| c as u128).sum();
        let singular = singular_primitive_classes(bound).unwrap();
        assert_eq!(classes + singular, schanuel_count(bound).unwrap(), "B = {bound}");
    }
    check_time(start, Duration::from_secs(10), "criterion 3");
    println!("criterion 3: PASS h(1) = 24, exhaustive match n <= 8, partition identity at B = 8, 64, 256");
}

#[test]
fn criterion_04_r2_exponent_and_constant() {
    let start = Instant::now();
    let cfg = ModelConfig::new(2, vec![4]).unwrap();
    let grid = geometric_grid(4, 32, 1);
    let curve = count_curve(hist(), &cfg, &grid).unwrap();
    let fit = exponent_probe(&curve).unwrap();
    // thresholds are T = B^4, so the height-bound exponent is 4 * a_hat
    let exponent = 4.0 * fit.a_hat;
    assert!(
        (exponent - 4.0).abs() <= 0.10,
        "height exponent {exponent} outside 4 +/- 0.10"
    );
    let (c_hat, _) = fit_constant(&curve, Rational::new(1, 1), 1).unwrap();
    let b = 256u128;
    let oracle = (schanuel_count(256).unwrap() - singular_primitive_classes(256).unwrap()) as f64
        / (b * b * b * b) as f64;
    let rel = (c_hat / oracle - 1.0).abs();
    assert!(rel <= 0.05, "constant {c_hat} vs oracle {oracle}: rel {rel}");
    check_time(start, Duration::from_secs(300), "criterion 4");
    println!(
        "criterion 4: PASS height exponent {exponent:.4}, constant {c_hat:.4} vs oracle {oracle:.4} (rel {:.4}%)",
        100.0 * rel
    );
}

#[test]
fn criterion_05_r3_log_factor() {
    let start = Instant::now();
    let cfg = ModelConfig::anticanonical(3).unwrap();
    let grid = geometric_grid(26, 36, 1);
    let curve = count_curve(hist(), &cfg, &grid).unwrap();
    let fit = exponent_probe(&curve).unwrap();
    assert!(
        (1.6..=2.4).contains(&fit.b_hat),
        "b_hat {} outside [1.6, 2.4]",
        fit.b_hat
    );
    // N(T)/T against log T: ordinary least squares, then relative residuals
    let points: Vec<(f64, f64)> = grid
        .iter()
        .zip(curve.values())
        .map(|(&t, n)| ((t as f64).ln(), n.to_f64().unwrap() / t as f64))
        .collect();
    let m = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let beta = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let alpha = (sy - beta * sx) / m;
    assert!(beta > 0.0, "slope {beta} not positive");
    let max_rel = points
        .iter()
        .map(|&(x, y)| ((alpha + beta * x) / y - 1.0).abs())
        .fold(0.0f64, f64::max);
    assert!(max_rel <= 0.05, "max relative residual {max_rel} > 5%");
    check_time(start, Duration::from_secs(600), "criterion 5");
    println!(
        "criterion 5: PASS b_hat {:.3} in [1.6, 2.4], N/T linear in log T (slope {beta:.4}, max residual {:.2}%)",
        fit.b_hat,
        100.0 * max_rel
    );
}

#[test]
fn criterion_06_decay_vs_saturation() {
    let start = Instant::now();
    let grid = geometric_grid(8, 32, 2);
    // balanced side: every small-diagonal fraction decays at least 2x
    let cfg = ModelConfig::anticanonical(3).unwrap();
    let mut min_drop = f64::MAX;
    for i in 1..=3usize {
        for j in i + 1..=3 {
            let frac = |t: u128| {
                let n = count_points(hist(), &cfg, t).unwrap().to_f64().unwrap();
                let d = count_on_small_diagonal(hist(), &cfg, t, i, j)
                    .unwrap()
                    .to_f64()
                    .unwrap();
                d / n
            };
            let drop = frac(grid[0]) / frac(*grid.last().unwrap());
            assert!(drop >= 2.0, "pair ({i}, {j}) fraction dropped only {drop}x");
            min_drop = min_drop.min(drop);
        }
    }
    // unbalanced side: the clamped fraction saturates at a positive level
    let cfg = ModelConfig::new(3, vec![4, 8]).unwrap();
    let profile = saturation_profile(hist(), &cfg, &grid).unwrap();
    let top_t = profile.rows.last().unwrap().t;
    let top_decade: Vec<f64> = profile
        .rows
        .iter()
        .filter(|row| row.t * 10 >= top_t)
        .map(|row| row.fractions[0])
        .collect();
    let level = *top_decade.last().unwrap();
    assert!(level > 0.05, "saturation fraction {level} <= 0.05");
    let variation = spread(&top_decade);
    assert!(variation <= 0.10, "top-decade variation {variation} > 10%");
    check_time(start, Duration::from_secs(300), "criterion 6");
    println!(
        "criterion 6: PASS balanced fractions drop >= {min_drop:.2}x, saturation level {level:.3} varies {:.3}% in top decade",
        100.0 * variation
    );
}

#[test]
fn criterion_07_well_roundedness() {
    let start = Instant::now();
    let cfg = ModelConfig::new(2, vec![4]).unwrap();
    let grid = geometric_grid(8, 32, 2);
    let at_top: Vec<f64> = [1.25, 1.10, 1.02]
        .iter()
        .map(|&kappa| {
            let w = well_roundedness(hist(), &cfg, &grid, kappa).unwrap();
            w.ratios.last().unwrap().1
        })
        .collect();
    assert!(
        at_top[0] > at_top[1] && at_top[1] > at_top[2],
        "ratios {at_top:?} not strictly decreasing in kappa"
    );
    assert!(at_top[2] <= 0.15, "kappa = 1.02 ratio {} > 0.15", at_top[2]);
    check_time(start, Duration::from_secs(120), "criterion 7");
    println!(
        "criterion 7: PASS top-T ratios {:.4} > {:.4} > {:.4} <= 0.15",
        at_top[0], at_top[1], at_top[2]
    );
}

#[test]
fn criterion_08_local_densities() {
    let start = Instant::now();
    for p in [2i128, 3, 5, 7] {
        let profile = local_density(p as u64, 3).unwrap();
        let denom = p * p * p + p * p + p + 1;
        let expected = Ratio::new(denom - (p + 1) * (p + 1), denom);
        assert_eq!(profile.mu[0], expected, "mu_0 at p = {p}");
    }
    assert_eq!(local_density(2, 3).unwrap().mu[0], Ratio::new(2, 5));
    for p in [2u64, 3] {
        let profile = local_density(p, 4).unwrap();
        for k in 1..=2usize {
            assert_eq!(
                profile.mu[k + 1] / profile.mu[k],
                Ratio::new(1, p as i128),
                "mu ratio at p = {p}, k = {k}"
            );
        }
    }
    // s = kappa + 0.5 with kappa = 2
    let mut worst = 0.0f64;
    for p in [2u64, 3, 5, 7] {
        let profile = local_density(p, 3).unwrap();
        let (_, regularized) = local_factor_check(&profile, 2.5).unwrap();
        let dev = (regularized - 1.0).abs();
        let bound = 3.0 / (p * p) as f64;
        assert!(dev <= bound, "p = {p}: |{regularized} - 1| > {bound}");
        worst = worst.max(dev / bound);
    }
    check_time(start, Duration::from_secs(120), "criterion 8");
    println!(
        "criterion 8: PASS mu_0 exact, 1/p decay exact at depth 4, regularized factors within 3/p^2 (worst {:.2}% of bound)",
        100.0 * worst
    );
}

#[test]
fn criterion_09_dirichlet_pole() {
    let start = Instant::now();
    let s_grid = [4.2, 4.35, 4.5, 4.65, 4.8];
    let rows = dirichlet_pole_probe(hist(), &s_grid).unwrap();
    let compensated: Vec<f64> = rows.iter().map(|r| r.compensated).collect();
    let residue: Vec<f64> = rows.iter().map(|r| r.residue_ratio).collect();
    let literal = spread(&compensated);
    let stabilized = spread(&residue);
    println!(
        "criterion 9: compensated spread {:.1}% (diverges like zeta(s - 3) at finite B), residue-ratio spread {:.2}%",
        100.0 * literal,
        100.0 * stabilized
    );
    assert!(
        stabilized <= 0.10,
        "residue-ratio spread {stabilized} > 10% over s in [4.2, 4.8]"
    );
    check_time(start, Duration::from_secs(60), "criterion 9");
    println!("criterion 9: PASS pole statistic varies {:.2}% <= 10%", 100.0 * stabilized);
}

#[test]
fn criterion_10_goursat_classification() {
    let start = Instant::now();
    let h = alternating_5();
    let e = h.identity();
    // one representative per nonidentity conjugacy class in the first slot
    let mut reps: Vec<u16> = (0..60u16)
        .map(|x| (0..60u16).map(|d| h.conjugate(d, x)).min().unwrap())
        .collect();
    reps.sort_unstable();
    reps.dedup();
    let mut pairs = 0usize;
    for &x in reps.iter().filter(|&&x| x != e) {
        for y in (0..60u16).filter(|&y| y != e && y != x) {
            let t = GroupTuple::new(&h, vec![x, y]).unwrap();
            assert!(tuple_validity(&h, &t));
            let closure = goursat_closure(&h, &t).unwrap();
            assert_eq!(closure.order(), 3600, "pair ({x}, {y})");
            pairs += 1;
        }
    }
    let found = intermediate_subgroups(&h, 2).unwrap();
    assert_eq!(found.len(), 2);
    assert_eq!(found[0].subgroup.order(), 60);
    assert_eq!(found[1].subgroup.order(), 3600);
    assert!(found.iter().all(|m| m.admissible));

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let noncentral = |rng: &mut ChaCha8Rng| loop {
        let x = rng.gen_range(0..60u16);
        if !h.is_central(x) {
            break x;
        }
    };
    for trial in 0..200 {
        let coords: Vec<u16> = (0..3).map(|_| noncentral(&mut rng)).collect();
        let closure = goursat_closure(&h, &GroupTuple::new(&h, coords.clone()).unwrap()).unwrap();
        assert!(closure.is_admissible(&h), "trial {trial}: coords {coords:?}");
    }

    for _ in 0..10_000 {
        let r = rng.gen_range(1..=5usize);
        let coords: Vec<u16> = (0..r).map(|_| rng.gen_range(0..60u16)).collect();
        let g = rng.gen_range(0..60u16);
        let conjugated: Vec<u16> = coords.iter().map(|&x| h.conjugate(g, x)).collect();
        let before = rank(&GroupTuple::new(&h, coords).unwrap());
        let after = rank(&GroupTuple::new(&h, conjugated).unwrap());
        assert_eq!(before, after);
    }
    check_time(start, Duration::from_secs(120), "criterion 10");
    println!(
        "criterion 10: PASS {pairs} exhaustive pair closures full, 2 intermediate subgroups, 200 random closures admissible, rank conjugation-invariant on 10^4 tuples"
    );
}
