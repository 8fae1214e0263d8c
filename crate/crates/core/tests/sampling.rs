use proptest::prelude::*;

use curvedepth::ensembles::{sample, CoefficientScheme, SampleStream};
use curvedepth::polynomial::PolySample;

/// Two-sided Kolmogorov-Smirnov statistic of `xs` against `cdf`.
fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

#[test]
fn constant_coefficient_moments() {
    let stream = SampleStream::new(2024);
    let n = 100_000u64;
    let (mut s1, mut s2) = (0.0, 0.0);
    for t in 0..n {
        let a = stream.normal(t, 0, 0);
        s1 += a;
        s2 += a * a;
    }
    let mean = s1 / n as f64;
    let var = s2 / n as f64 - mean * mean;
    assert!(mean.abs() < 0.02, "{mean}");
    assert!((0.98..=1.02).contains(&var), "{var}");
}

#[test]
fn coefficients_pass_kolmogorov_smirnov() {
    let stream = SampleStream::new(99);
    // Across trials for one monomial, and across monomials for one trial.
    let by_trial: Vec<f64> = (0..10_000).map(|t| stream.normal(t, 3, 1)).collect();
    let by_monomial: Vec<f64> =
        (0..100).flat_map(|i| (0..100).map(move |j| (i, j))).map(|(i, j)| stream.normal(5, i, j)).collect();
    let critical = 1.628 / (10_000f64).sqrt();
    for xs in [by_trial, by_monomial] {
        let d = ks_statistic(xs, normal_cdf);
        assert!(d < critical, "KS {d} above {critical}");
    }
}

#[test]
fn kostlan_weights_reproduce_the_kernel() {
    let stream = SampleStream::new(5);
    for d in [1usize, 4, 11, 30] {
        let scheme = CoefficientScheme::kostlan(d).unwrap();
        for k in 0..20u64 {
            let x = 2.0 * stream.normal(k, 0, 0);
            let y = 2.0 * stream.normal(k, 1, 0);
            let sum: f64 =
                scheme.support().map(|((j1, j2), c)| c * c * x.powi(2 * j1 as i32) * y.powi(2 * j2 as i32)).sum();
            let want = (1.0 + x * x + y * y).powi(d as i32);
            assert!((sum - want).abs() <= 1e-10 * want, "d={d}");
        }
    }
}

#[test]
fn kac_samples_have_doubled_degree() {
    let scheme = CoefficientScheme::kac_square(6).unwrap();
    let p = sample(&scheme, &SampleStream::new(1), 0);
    assert_eq!(p.degree(), 12);
    assert_eq!(p.terms().count(), 49);
}

fn random_point() -> impl Strategy<Value = [f64; 3]> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_filter_map("near zero", |(a, b, c)| {
        let n = (a * a + b * b + c * c).sqrt();
        (n > 0.1).then(|| [a / n, b / n, c / n])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn odd_degree_parity(seed in any::<u64>(), p in random_point()) {
        let poly = sample(&CoefficientScheme::kostlan(5).unwrap(), &SampleStream::new(seed), 0);
        let f = poly.eval_homogeneous(p);
        let g = poly.eval_homogeneous([-p[0], -p[1], -p[2]]);
        let scale: f64 = poly.terms().map(|(_, c)| c.abs()).sum();
        prop_assert!((f + g).abs() <= 1e-12 * scale);
    }

    #[test]
    fn even_degree_parity(seed in any::<u64>(), p in random_point()) {
        let poly = sample(&CoefficientScheme::kostlan(6).unwrap(), &SampleStream::new(seed), 0);
        let f = poly.eval_homogeneous(p);
        let g = poly.eval_homogeneous([-p[0], -p[1], -p[2]]);
        let scale: f64 = poly.terms().map(|(_, c)| c.abs()).sum();
        prop_assert!((f - g).abs() <= 1e-12 * scale);
    }

    #[test]
    fn euler_identity_on_the_sphere(seed in any::<u64>(), p in random_point(), d in 1usize..9) {
        let poly = sample(&CoefficientScheme::kostlan(d).unwrap(), &SampleStream::new(seed), 0);
        let (f, g) = poly.eval_homogeneous_grad(p);
        let euler = p[0] * g[0] + p[1] * g[1] + p[2] * g[2];
        let scale: f64 = poly.terms().map(|(_, c)| c.abs()).sum::<f64>() * d as f64;
        prop_assert!((euler - d as f64 * f).abs() <= 1e-10 * scale);
        // Central differences with step 1e-6 against the analytic gradient.
        let h = 1e-6;
        for i in 0..3 {
            let mut a = p;
            let mut b = p;
            a[i] += h;
            b[i] -= h;
            let fd = (poly.eval_homogeneous(a) - poly.eval_homogeneous(b)) / (2.0 * h);
            prop_assert!((fd - g[i]).abs() <= 1e-5 * (scale + g[i].abs()), "axis {}: {} vs {}", i, fd, g[i]);
        }
    }

    #[test]
    fn radial_derivative_is_euler_for_monomials(j1 in 0usize..6, j2 in 0usize..6, x in -3.0f64..3.0, y in -3.0f64..3.0) {
        prop_assume!(j1 + j2 > 0);
        let p = PolySample::from_terms(j1 + j2, [((j1, j2), 1.5)], 0).unwrap();
        let e = p.eval_with_radial(x, y);
        prop_assert!((e.t - (j1 + j2) as f64 * e.f).abs() <= 1e-12 * (1.0 + e.t.abs()));
        prop_assert!((e.t - (x * e.fx + y * e.fy)).abs() <= 1e-12 * (1.0 + e.t.abs()));
    }

    #[test]
    fn rotation_commutes_with_evaluation(seed in any::<u64>(), p in random_point(), angle in 0.0f64..std::f64::consts::TAU) {
        let poly = sample(&CoefficientScheme::kostlan(4).unwrap(), &SampleStream::new(seed), 3);
        let r = curvedepth::curvetopo::rotation_about_axis([1.0, 2.0, -0.5], angle).unwrap();
        let rotated = poly.rotated(&r).unwrap();
        let rp: [f64; 3] = std::array::from_fn(|i| r[i][0] * p[0] + r[i][1] * p[1] + r[i][2] * p[2]);
        let scale: f64 = poly.terms().map(|(_, c)| c.abs()).sum();
        prop_assert!((rotated.eval_homogeneous(p) - poly.eval_homogeneous(rp)).abs() <= 1e-11 * scale);
    }
}
