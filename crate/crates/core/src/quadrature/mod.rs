//! Expected-depth integrals.
//!
//! The integral term of the expected depth is
//! `(1 / 2π^2) ∬ integrand(x, y) / (x^2 + y^2) dx dy`. In polar coordinates
//! with `r = tan u` it becomes
//! `(1 / 2π^2) ∫_θ ∫_0^{π/2} g(tan u, θ) (1 + tan^2 u) du dθ` where
//! `g = integrand / r`. Both levels are integrated with adaptive
//! Gauss-Kronrod; the inner level runs once per outer node.

pub mod gk;

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::ensembles::SchemeKind;
use crate::error::{Error, Result};
use crate::kernel::{kac_phi, CovKernel, KernelMode};

pub use gk::{integrate, Estimate};

/// Number of equispaced θ nodes used when the integrand is rotation invariant.
const PERIODIC_NODES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// Absolute tolerance on the reported value.
    pub tol: f64,
    /// Budget on the total number of panels across both levels.
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { tol: 1e-8, max_panels: 1_000_000 }
    }
}

impl QuadConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        if self.max_panels == 0 {
            return Err(Error::invalid("panel budget must be positive"));
        }
        Ok(())
    }
}

/// Integral term of the expected depth, with its error estimate and the
/// half-width of the additive odd-degree band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub err_est: f64,
    /// 0 for even degree, 1/2 for odd: `E[depth] ∈ [value - band, value + band]`.
    pub a_d_band: f64,
    pub degree: usize,
    pub kind: SchemeKind,
    pub panels: usize,
    pub evaluations: usize,
}

pub fn a_d_band(degree: usize) -> f64 {
    if degree.is_multiple_of(2) {
        0.0
    } else {
        0.5
    }
}

/// Raw double integral with its accounting.
#[derive(Debug, Clone, Copy)]
struct Nested {
    value: f64,
    err_est: f64,
    panels: usize,
    evaluations: usize,
}

/// `∫_{θ0}^{θ1} ∫_0^{u_max} h(u, θ) du dθ` with absolute tolerance `tol`.
fn nested_adaptive<H>(h: H, theta: (f64, f64), u_max: f64, tol: f64, max_panels: usize) -> Result<Nested>
where
    H: Fn(f64, f64) -> Result<f64>,
{
    let width = theta.1 - theta.0;
    let inner_tol = 0.5 * tol / width;
    let used = Cell::new(0usize);
    let evals = Cell::new(0usize);
    let worst_inner = Cell::new(0.0f64);
    let outer = integrate(
        |t| {
            let budget = max_panels.saturating_sub(used.get()).max(1);
            let e = integrate(|u| h(u, t), 0.0, u_max, inner_tol, budget)?;
            used.set(used.get() + e.panels);
            evals.set(evals.get() + e.evaluations);
            worst_inner.set(worst_inner.get().max(e.err_est));
            Ok(e.value)
        },
        theta.0,
        theta.1,
        0.5 * tol,
        max_panels,
    )?;
    let panels = used.get() + outer.panels;
    let err_est = outer.err_est + width * worst_inner.get();
    if panels > max_panels {
        return Err(Error::NonConvergence { err_est, tol, panels });
    }
    Ok(Nested { value: outer.value, err_est, panels, evaluations: evals.get() })
}

/// Same as [`nested_adaptive`] for an integrand independent of θ over a
/// full turn: a fixed equispaced rule, exact for constants in θ.
fn nested_periodic<H>(h: H, u_max: f64, tol: f64, max_panels: usize) -> Result<Nested>
where
    H: Fn(f64, f64) -> Result<f64>,
{
    let step = 2.0 * PI / PERIODIC_NODES as f64;
    let inner_tol = tol / (2.0 * PI);
    let (mut value, mut worst, mut panels, mut evaluations) = (0.0, 0.0f64, 0, 0);
    for k in 0..PERIODIC_NODES {
        let t = k as f64 * step;
        let budget = max_panels.saturating_sub(panels).max(1);
        let e = integrate(|u| h(u, t), 0.0, u_max, inner_tol, budget)?;
        value += step * e.value;
        worst = worst.max(e.err_est);
        panels += e.panels;
        evaluations += e.evaluations;
    }
    let err_est = 2.0 * PI * worst;
    if panels > max_panels {
        return Err(Error::NonConvergence { err_est, tol, panels });
    }
    Ok(Nested { value, err_est, panels, evaluations })
}

fn sec2_weighted(kernel: &CovKernel, u: f64, theta: f64) -> Result<f64> {
    let r = u.tan();
    Ok(kernel.radial_integrand(r, theta)? * (1.0 + r * r))
}

/// `(1/2π^2) ∬_{R^2} integrand / (x^2 + y^2)` for any kernel.
pub fn expected_depth(kernel: &CovKernel, cfg: &QuadConfig) -> Result<IntegralResult> {
    expected_depth_within(kernel, cfg, f64::INFINITY)
}

/// [`expected_depth`] restricted to the disc `r < r_max`.
pub fn expected_depth_truncated(kernel: &CovKernel, cfg: &QuadConfig, r_max: f64) -> Result<IntegralResult> {
    if r_max.is_nan() || r_max <= 0.0 {
        return Err(Error::invalid("r_max must be positive"));
    }
    expected_depth_within(kernel, cfg, r_max)
}

fn expected_depth_within(kernel: &CovKernel, cfg: &QuadConfig, r_max: f64) -> Result<IntegralResult> {
    cfg.validate()?;
    let u_max = if r_max.is_finite() { r_max.atan() } else { FRAC_PI_2 };
    let norm = 1.0 / (2.0 * PI * PI);
    let h = |u: f64, t: f64| sec2_weighted(kernel, u, t);
    let (raw, symmetry) = match kernel.mode() {
        KernelMode::ClosedFormKostlan => (nested_periodic(h, u_max, cfg.tol / norm, cfg.max_panels)?, 1.0),
        // α, β, γ only see x^2 and y^2, so one quadrant suffices.
        _ => {
            let sym = 4.0;
            (nested_adaptive(h, (0.0, FRAC_PI_2), u_max, cfg.tol / (norm * sym), cfg.max_panels)?, sym)
        }
    };
    let scheme = kernel.scheme();
    let degree = match scheme.kind() {
        SchemeKind::Custom => scheme.homogenization_degree(),
        _ => scheme.degree(),
    };
    Ok(IntegralResult {
        value: norm * symmetry * raw.value,
        err_est: norm * symmetry * raw.err_est,
        a_d_band: a_d_band(degree),
        degree,
        kind: scheme.kind(),
        panels: raw.panels,
        evaluations: raw.evaluations,
    })
}

/// Kac ensemble via the eighth-plane polar form
/// `(4/π^2) ∫_0^∞ ∫_0^{π/4} sqrt(cos^2 θ φ_d(r cos θ) + sin^2 θ φ_d(r sin θ)) dθ dr`.
pub fn expected_depth_kac_polar(d: usize, cfg: &QuadConfig) -> Result<IntegralResult> {
    cfg.validate()?;
    if d == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    let h = |u: f64, t: f64| {
        let r = u.tan();
        let (s, c) = t.sin_cos();
        let g = (c * c * kac_phi(d, r * c) + s * s * kac_phi(d, r * s)).sqrt();
        Ok(g * (1.0 + r * r))
    };
    let norm = 4.0 / (PI * PI);
    let raw = nested_adaptive(h, (0.0, FRAC_PI_4), FRAC_PI_2, cfg.tol / norm, cfg.max_panels)?;
    Ok(IntegralResult {
        value: norm * raw.value,
        err_est: norm * raw.err_est,
        a_d_band: a_d_band(d),
        degree: d,
        kind: SchemeKind::KacSquare,
        panels: raw.panels,
        evaluations: raw.evaluations,
    })
}

/// `(1/π) ∫_0^∞ sqrt(φ_d(s)) ds`, the expected number of positive real roots
/// of a degree-`d` Kac polynomial. Folded onto `[0, 1]` with
/// `φ_d(1/s) = s^4 φ_d(s)`, which makes the two halves equal.
pub fn kac_1d_root_density_integral(d: usize, cfg: &QuadConfig) -> Result<Estimate> {
    cfg.validate()?;
    if d == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    let scale = 2.0 / PI;
    let e = integrate(|s| Ok(kac_phi(d, s).sqrt()), 0.0, 1.0, cfg.tol / scale, cfg.max_panels)?;
    Ok(Estimate { value: scale * e.value, err_est: scale * e.err_est, ..e })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::CoefficientScheme;

    fn kostlan(d: usize) -> CovKernel {
        CovKernel::closed_form(CoefficientScheme::kostlan(d).unwrap()).unwrap()
    }

    #[test]
    fn kostlan_sixteen_is_two() {
        let r = expected_depth(&kostlan(16), &QuadConfig::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
        assert_eq!(r.a_d_band, 0.0);
    }

    #[test]
    fn kostlan_one_is_half_with_band() {
        let r = expected_depth(&kostlan(1), &QuadConfig::default()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-8);
        assert_eq!(r.a_d_band, 0.5);
    }

    #[test]
    fn series_mode_agrees_with_closed_form_for_kostlan() {
        let cfg = QuadConfig { tol: 1e-7, ..Default::default() };
        let series = CovKernel::series(CoefficientScheme::kostlan(3).unwrap()).unwrap();
        let r = expected_depth(&series, &cfg).unwrap();
        assert!((r.value - 3f64.sqrt() / 2.0).abs() < 1e-7, "{}", r.value);
    }

    #[test]
    fn kac_density_integral_degree_one() {
        let e = kac_1d_root_density_integral(1, &QuadConfig::default()).unwrap();
        assert!((e.value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_config() {
        let bad = QuadConfig { tol: 0.0, ..Default::default() };
        assert!(expected_depth(&kostlan(2), &bad).is_err());
        assert!(expected_depth_kac_polar(0, &QuadConfig::default()).is_err());
    }

    #[test]
    fn tiny_budget_fails_to_converge() {
        let cfg = QuadConfig { tol: 1e-12, max_panels: 5 };
        assert!(matches!(expected_depth_kac_polar(50, &cfg), Err(Error::NonConvergence { .. })));
    }
}
