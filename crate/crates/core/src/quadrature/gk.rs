//! Globally adaptive Gauss-Kronrod (7, 15) integration on a finite interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Outcome of one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err_est: f64,
    pub panels: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn kronrod_panel<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx)?, f(center + dx)?);
        kron += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kron * half;
    let roundoff = 50.0 * f64::EPSILON * abs_sum * half.abs();
    let err = ((kron - gauss) * half).abs().max(roundoff);
    Ok(Panel { a, b, value, err })
}

/// Integrates `f` over `[a, b]` until the summed panel error estimate is at
/// most `abs_tol`. Panels are split at their midpoint in order of largest
/// error. Fails with `NonConvergence` once `max_panels` would be exceeded.
///
/// The error estimate is the raw `|K15 - G7|` difference per panel, which
/// bounds the error of the lower-order rule and is therefore conservative
/// for the reported Kronrod value.
pub fn integrate<F>(mut f: F, a: f64, b: f64, abs_tol: f64, max_panels: usize) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if abs_tol.is_nan() || abs_tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod_panel(&mut f, a, b)?;
    let mut evaluations = 15;
    let mut total_err = first.err;
    heap.push(first);
    // Panels too narrow to split further are frozen here.
    let mut frozen_value = 0.0;
    let mut frozen_err = 0.0;
    let width_floor = 1e-13 * (b - a).abs();

    while total_err > abs_tol {
        let Some(worst) = heap.pop() else { break };
        if (worst.b - worst.a).abs() <= width_floor {
            frozen_value += worst.value;
            frozen_err += worst.err;
            continue;
        }
        if heap.len() + 2 > max_panels {
            heap.push(worst);
            break;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod_panel(&mut f, worst.a, mid)?;
        let right = kronrod_panel(&mut f, mid, worst.b)?;
        evaluations += 30;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        // Recompute the running error now and then to shed drift.
        if evaluations % 3000 == 15 {
            total_err = heap.iter().map(|p| p.err).sum::<f64>() + frozen_err;
        }
    }

    // Sum in interval order so the total does not depend on heap layout.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let n = panels.len();
    let value = panels.iter().map(|p| p.value).sum::<f64>() + frozen_value;
    let err_est = panels.iter().map(|p| p.err).sum::<f64>() + frozen_err;
    if err_est > abs_tol {
        return Err(Error::NonConvergence { err_est, tol: abs_tol, panels: n });
    }
    Ok(Estimate { value, err_est, panels: n, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let e = integrate(|x| Ok(x.powi(6) - 3.0 * x), 0.0, 2.0, 1e-12, 100).unwrap();
        assert!((e.value - (128.0 / 7.0 - 6.0)).abs() < 1e-13);
        assert_eq!(e.panels, 1);
    }

    #[test]
    fn peaked_integrand_converges() {
        // ∫_0^1 1/(1e-4 + (x - 0.3)^2) dx = (atan(0.7/0.01) + atan(0.3/0.01)) / 0.01
        let exact = ((70.0f64).atan() + (30.0f64).atan()) / 0.01;
        let e = integrate(|x| Ok(1.0 / (1e-4 + (x - 0.3) * (x - 0.3))), 0.0, 1.0, 1e-9, 10_000).unwrap();
        assert!((e.value - exact).abs() < 1e-9, "{} vs {exact}", e.value);
        assert!(e.err_est <= 1e-9);
        assert!((e.value - exact).abs() <= e.err_est);
    }

    #[test]
    fn endpoint_singularity() {
        let e = integrate(|x: f64| Ok(x.powf(-0.25)), 0.0, 1.0, 1e-8, 100_000).unwrap();
        assert!((e.value - 4.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn panel_budget_is_enforced() {
        let r = integrate(|x| Ok((1.0 / (x + 1e-12)).sin()), 0.0, 1.0, 1e-14, 20);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn errors_from_the_integrand_propagate() {
        let r = integrate(|x| if x > 0.5 { Err(Error::invalid("boom")) } else { Ok(x) }, 0.0, 1.0, 1e-8, 10);
        assert!(r.is_err());
    }
}
