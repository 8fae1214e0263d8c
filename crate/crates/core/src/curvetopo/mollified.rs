//! Box-mollified counting integral
//! `(1/2π) ∬ η_ε(f) |x f_x + y f_y| dx dy / (x^2 + y^2)` with
//! `η_ε = 1_{[-ε, ε]} / 2ε`.
//!
//! In polar coordinates `x f_x + y f_y = r ∂_r f`, so the integral is the
//! angular mean of `∫ η_ε(f) |∂_r f| dr`, which on each ray equals the total
//! variation of `f` clamped to `[-ε, ε]`, divided by `2ε`. Each ray is sampled
//! at nodes uniform in `atan r` and the clamped total variation is summed
//! exactly over those nodes.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::polynomial::PolySample;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollifierGrid {
    pub r_cut: f64,
    pub n_radial: usize,
    pub n_angular: usize,
}

impl Default for MollifierGrid {
    fn default() -> Self {
        Self { r_cut: 50.0, n_radial: 20_000, n_angular: 720 }
    }
}

pub fn mollified_count(poly: &PolySample, epsilon: f64, grid: &MollifierGrid) -> Result<f64> {
    if poly.degree() % 2 == 1 {
        return Err(Error::invalid("mollified count needs an even degree"));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    if grid.r_cut.is_nan() || grid.r_cut <= 0.0 || grid.n_radial < 2 || grid.n_angular < 1 {
        return Err(Error::invalid("mollifier grid must have r_cut > 0, n_radial >= 2, n_angular >= 1"));
    }
    if poly.eval(0.0, 0.0) == 0.0 {
        return Err(Error::invalid("the curve passes through the origin"));
    }
    let u_cut = grid.r_cut.atan();
    let radii: Vec<f64> = (0..=grid.n_radial).map(|i| (u_cut * i as f64 / grid.n_radial as f64).tan()).collect();
    let mut total = 0.0;
    for k in 0..grid.n_angular {
        let theta = TAU * (k as f64 + 0.5) / grid.n_angular as f64;
        let (s, c) = theta.sin_cos();
        let mut prev = poly.eval(0.0, 0.0).clamp(-epsilon, epsilon);
        let mut tv = 0.0;
        for &r in &radii[1..] {
            let v = poly.eval(r * c, r * s).clamp(-epsilon, epsilon);
            tv += (v - prev).abs();
            prev = v;
        }
        total += tv;
    }
    Ok(total / (2.0 * epsilon * grid.n_angular as f64))
}
