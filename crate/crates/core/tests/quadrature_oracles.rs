use std::f64::consts::{FRAC_PI_2, PI};

use curvedepth::ensembles::CoefficientScheme;
use curvedepth::kernel::CovKernel;
use curvedepth::quadrature::{
    expected_depth, expected_depth_kac_polar, expected_depth_truncated, kac_1d_root_density_integral, QuadConfig,
};

/// Kac d = 10 expected-depth integral over `r < tan(π/2 - 1e-4)` from
/// `brute_force_kac` on a 4000 x 4000 grid, frozen.
const V10: f64 = 1.757_909_349_875;

/// Radius matching the brute-force cutoff `u < π/2 - 1e-4`.
fn brute_force_radius() -> f64 {
    (FRAC_PI_2 - 1e-4).tan()
}

/// Variance of `k = i + j` under weights `x^{2i} y^{2j}`, `0 <= i, j <= d`,
/// summed term by term in scaled form.
fn kac_variance_by_summation(d: usize, x: f64, y: f64) -> f64 {
    let (u, v) = (x * x, y * y);
    // Scale by the largest term to avoid overflow.
    let lu = if u > 1.0 { d as f64 * u.ln() } else { 0.0 };
    let lv = if v > 1.0 { d as f64 * v.ln() } else { 0.0 };
    let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for i in 0..=d {
        let wi = (i as f64 * u.ln() - lu).exp();
        for j in 0..=d {
            let w = wi * (j as f64 * v.ln() - lv).exp();
            let k = (i + j) as f64;
            s0 += w;
            s1 += k * w;
            s2 += k * k * w;
        }
    }
    let m = s1 / s0;
    (s2 / s0 - m * m).max(0.0)
}

/// Midpoint rule in `(u, θ)` with `r = tan u`, `u < π/2 - 1e-4`, on one
/// quadrant times four.
fn brute_force_kac(d: usize, n: usize) -> f64 {
    let u_max = FRAC_PI_2 - 1e-4;
    let (du, dt) = (u_max / n as f64, FRAC_PI_2 / n as f64);
    let mut total = 0.0;
    for a in 0..n {
        let u = (a as f64 + 0.5) * du;
        let r = u.tan();
        let mut row = 0.0;
        for b in 0..n {
            let t = (b as f64 + 0.5) * dt;
            let (x, y) = (r * t.cos(), r * t.sin());
            row += kac_variance_by_summation(d, x, y).sqrt() / r * (1.0 + r * r);
        }
        total += row;
    }
    4.0 * total * du * dt / (2.0 * PI * PI)
}

#[test]
#[ignore = "brute-force oracle, 16M kernel sums"]
fn recompute_v10() {
    let v = brute_force_kac(10, 4000);
    println!("V10 = {v:.12}");
    assert!((v - V10).abs() < 1e-11);
}

#[test]
fn coarse_brute_force_is_close_to_adaptive() {
    let cfg = QuadConfig::default();
    let k = CovKernel::closed_form(CoefficientScheme::kac_square(2).unwrap()).unwrap();
    let adaptive = expected_depth_truncated(&k, &cfg, brute_force_radius()).unwrap().value;
    let coarse = brute_force_kac(2, 400);
    assert!((coarse - adaptive).abs() < 1e-2, "{coarse} vs {adaptive}");
}

#[test]
fn kac_ten_matches_frozen_brute_force() {
    let cfg = QuadConfig::default();
    let k = CovKernel::closed_form(CoefficientScheme::kac_square(10).unwrap()).unwrap();
    let truncated = expected_depth_truncated(&k, &cfg, brute_force_radius()).unwrap();
    assert!((truncated.value - V10).abs() < 1e-4, "{} vs {V10}", truncated.value);
    // The Kac tail decays like log R / R, so the full integral sits above the
    // truncated one by several 1e-4 and both full formulations agree.
    let generic = expected_depth(&k, &cfg).unwrap();
    let polar = expected_depth_kac_polar(10, &cfg).unwrap();
    assert!(generic.value > truncated.value);
    assert!((generic.value - polar.value).abs() <= generic.err_est + polar.err_est);
}

#[test]
fn formulations_agree_for_small_kac_degrees() {
    let cfg = QuadConfig::default();
    for d in 1..=12 {
        let k = CovKernel::closed_form(CoefficientScheme::kac_square(d).unwrap()).unwrap();
        let a = expected_depth(&k, &cfg).unwrap();
        let b = expected_depth_kac_polar(d, &cfg).unwrap();
        assert!((a.value - b.value).abs() <= a.err_est + b.err_est, "d={d}: {} vs {}", a.value, b.value);
    }
}

#[test]
fn kostlan_is_exact_over_even_and_odd_degrees() {
    let cfg = QuadConfig::default();
    for d in 1..=40 {
        let k = CovKernel::closed_form(CoefficientScheme::kostlan(d).unwrap()).unwrap();
        let r = expected_depth(&k, &cfg).unwrap();
        assert!((r.value - (d as f64).sqrt() / 2.0).abs() <= 1e-8, "d={d}");
        assert_eq!(r.a_d_band, if d % 2 == 0 { 0.0 } else { 0.5 });
    }
}

#[test]
fn series_kostlan_error_shrinks_with_tolerance() {
    let k = CovKernel::series(CoefficientScheme::kostlan(5).unwrap()).unwrap();
    let exact = 5f64.sqrt() / 2.0;
    let mut prev = f64::INFINITY;
    for tol in [1e-3, 5e-4, 2.5e-4, 1.25e-4] {
        let r = expected_depth(&k, &QuadConfig { tol, ..Default::default() }).unwrap();
        let err = (r.value - exact).abs();
        assert!(err <= tol);
        assert!(err <= prev, "tol {tol}: {err} > {prev}");
        prev = err;
    }
}

#[test]
fn truncated_kostlan_matches_arctangent_tail() {
    // Inside r < R the Kostlan integral is (sqrt(d)/π) atan R exactly, so
    // doubling R from 1e3 still moves it by about sqrt(d)/(2πR).
    let cfg = QuadConfig::default();
    let k = CovKernel::closed_form(CoefficientScheme::kostlan(10).unwrap()).unwrap();
    let s = 10f64.sqrt();
    for r_max in [1e3, 2e3, 4e3] {
        let v = expected_depth_truncated(&k, &cfg, r_max).unwrap().value;
        assert!((v - s / PI * r_max.atan()).abs() < 1e-10, "R={r_max}");
    }
    let a = expected_depth_truncated(&k, &cfg, 1e3).unwrap().value;
    let b = expected_depth_truncated(&k, &cfg, 2e3).unwrap().value;
    let tail = s / PI * (2e3f64.atan() - 1e3f64.atan());
    assert!(((b - a) - tail).abs() < 1e-10);
}

#[test]
fn reruns_are_bitwise_identical() {
    let cfg = QuadConfig::default();
    let k = CovKernel::closed_form(CoefficientScheme::kac_square(7).unwrap()).unwrap();
    let a = expected_depth(&k, &cfg).unwrap();
    let b = expected_depth(&k, &cfg).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!((a.panels, a.evaluations), (b.panels, b.evaluations));
    assert!(a.panels > 0);
}

#[test]
fn kac_root_density_degree_one_is_one_half() {
    // (1/π) ∫_0^∞ ds / (1 + s^2) = 1/2.
    let e = kac_1d_root_density_integral(1, &QuadConfig::default()).unwrap();
    assert!((e.value - 0.5).abs() < 1e-9);
}

#[test]
fn kac_root_density_increases_with_degree() {
    let cfg = QuadConfig::default();
    let mut prev = 0.0;
    for d in 1..=50 {
        let v = kac_1d_root_density_integral(d, &cfg).unwrap().value;
        assert!(v > prev, "d={d}");
        prev = v;
    }
}

#[test]
fn kac_full_line_constant_stabilizes() {
    // Twice the half-line integral is the expected real root count of a Kac
    // polynomial, (2/π) log d + C_1 + 2/(dπ) + O(1/d^2).
    let cfg = QuadConfig::default();
    let c = |d: usize| {
        let v = 2.0 * kac_1d_root_density_integral(d, &cfg).unwrap().value;
        v - 2.0 / PI * (d as f64).ln() - 2.0 / (d as f64 * PI)
    };
    let mut prev = f64::INFINITY;
    let mut d = 50;
    while d < 1600 {
        let gap = (c(2 * d) - c(d)).abs();
        assert!(gap < prev, "d={d}: {gap}");
        prev = gap;
        d *= 2;
    }
    assert!((c(1600) - c(800)).abs() < 5e-3);
    assert!((c(1600) - 0.625_735_8).abs() < 1e-5);
}

#[test]
fn kac_growth_stays_in_a_log_band() {
    let cfg = QuadConfig::default();
    let ratios: Vec<f64> = [10usize, 100, 1000]
        .iter()
        .map(|&d| expected_depth_kac_polar(d, &cfg).unwrap().value / (d as f64).ln())
        .collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &r| (l.min(r), h.max(r)));
    assert!(hi / lo < 3.0, "{ratios:?}");
}
