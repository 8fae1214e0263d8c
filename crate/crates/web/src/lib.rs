//! wasm-bindgen exports for the demo page in `www/`.

use wasm_bindgen::prelude::*;

use curvedepth::curvetopo::{assess_sample, extract_loops, SphereMesh};
use curvedepth::ensembles::{sample, CoefficientScheme, SampleStream};
use curvedepth::kernel::{kac_phi, CovKernel};
use curvedepth::quadrature::{expected_depth, expected_depth_kac_polar, QuadConfig};

fn scheme(ensemble: &str, degree: usize) -> Result<CoefficientScheme, String> {
    let s = match ensemble {
        "kostlan" => CoefficientScheme::kostlan(degree),
        "kac" => CoefficientScheme::kac_square(degree),
        _ => return Err(format!("unknown ensemble `{ensemble}`")),
    };
    s.map_err(|e| e.to_string())
}

/// `[s_0, φ_d(s_0), s_1, φ_d(s_1), ...]` on `n` points of `[0, s_max]`.
pub fn phi_curve_points(degree: usize, s_max: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .flat_map(|i| {
            let s = s_max * i as f64 / (n - 1) as f64;
            [s, kac_phi(degree.max(1), s)]
        })
        .collect()
}

/// Integral term of the expected depth, to tolerance `tol`.
pub fn expected_depth_value(ensemble: &str, degree: usize, tol: f64) -> Result<f64, String> {
    let cfg = QuadConfig { tol, ..Default::default() };
    let s = scheme(ensemble, degree)?;
    let r = match ensemble {
        "kac" => expected_depth_kac_polar(degree, &cfg),
        _ => CovKernel::closed_form(s).and_then(|k| expected_depth(&k, &cfg)),
    };
    r.map(|r| r.value).map_err(|e| e.to_string())
}

/// One sampled curve on the sphere, flattened as
/// `[depth, n_loops, (winding, self_antipodal, n_points, x, y, z, ...)*]`.
/// Depth is -1 when the sample was discarded.
pub fn sample_loops_flat(ensemble: &str, degree: usize, seed: u64) -> Result<Vec<f64>, String> {
    let s = scheme(ensemble, degree)?;
    let mesh = SphereMesh::for_degree(s.homogenization_degree()).map_err(|e| e.to_string())?;
    let poly = sample(&s, &SampleStream::new(seed), 0);
    let report = assess_sample(&poly, &mesh);
    let depth = if report.discarded.is_some() { -1.0 } else { report.depth as f64 };
    let mut out = vec![depth, 0.0];
    if let Ok(set) = extract_loops(&poly, &mesh) {
        out[1] = set.loops.len() as f64;
        for l in &set.loops {
            out.extend([l.winding as f64, f64::from(u8::from(l.is_self_antipodal)), l.points.len() as f64]);
            out.extend(l.points.iter().flatten());
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn phi_curve(degree: usize, s_max: f64, n: usize) -> Vec<f64> {
    phi_curve_points(degree, s_max, n)
}

#[wasm_bindgen]
pub fn expected_depth_integral(ensemble: &str, degree: usize, tol: f64) -> Result<f64, JsError> {
    expected_depth_value(ensemble, degree, tol).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sample_loops(ensemble: &str, degree: usize, seed: u64) -> Result<Vec<f64>, JsError> {
    sample_loops_flat(ensemble, degree, seed).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_curve_starts_at_one() {
        let c = phi_curve_points(3, 2.0, 21);
        assert_eq!(c.len(), 42);
        assert_eq!((c[0], c[1]), (0.0, 1.0));
        assert!((c[20] - 1.0).abs() < 1e-15 && (c[21] - 1.25).abs() < 1e-12);
    }

    #[test]
    fn kostlan_integral() {
        assert!((expected_depth_value("kostlan", 16, 1e-8).unwrap() - 2.0).abs() < 1e-8);
        assert!(expected_depth_value("gauss", 4, 1e-8).is_err());
    }

    #[test]
    fn flat_layout_is_consistent() {
        let v = sample_loops_flat("kostlan", 6, 42).unwrap();
        let mut i = 2;
        for _ in 0..v[1] as usize {
            let n = v[i + 2] as usize;
            i += 3 + 3 * n;
        }
        assert_eq!(i, v.len());
        assert!(v[1] > 0.0);
    }
}
