//! Covariance data of the Gaussian pair `(W, T) = (f, x f_x + y f_y)` and the
//! Kac-Rice density `sqrt(det Σ) / α = sqrt((D1 + D2)^2 log K_d)`.
//!
//! With `u = x^2`, `v = y^2` the three covariances are moments of the total
//! degree `k = j1 + j2` under the weights `c_J^2 u^j1 v^j2`:
//! `α = Σ w`, `β = Σ k w`, `γ = Σ k^2 w`. Hence `det Σ / α^2` is the
//! variance of `k`, which is how every evaluator here stays cancellation-free.

use crate::ensembles::{CoefficientScheme, SchemeKind};
use crate::error::{Error, Result};

/// Largest exponent folded back into an unscaled triple.
const MAX_UNSCALED_LOG: f64 = 600.0;

/// Below this radius the series-mode `g = integrand / r` is extrapolated.
const SERIES_R_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMode {
    ClosedFormKostlan,
    ClosedFormKac,
    Series,
}

/// `(α, β, γ)` sharing a scale: the true values are the stored ones times
/// `exp(log_scale)`. `log_scale` is zero unless `α` would overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovTriple {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub log_scale: f64,
}

impl CovTriple {
    fn from_log_moments(log_alpha: f64, mean: f64, second: f64) -> Self {
        if log_alpha < MAX_UNSCALED_LOG {
            let a = log_alpha.exp();
            Self { alpha: a, beta: a * mean, gamma: a * second, log_scale: 0.0 }
        } else {
            Self { alpha: 1.0, beta: mean, gamma: second, log_scale: log_alpha }
        }
    }

    pub fn ln_alpha(&self) -> f64 {
        self.alpha.ln() + self.log_scale
    }

    pub fn beta_over_alpha(&self) -> f64 {
        self.beta / self.alpha
    }

    pub fn gamma_over_alpha(&self) -> f64 {
        self.gamma / self.alpha
    }
}

/// `det Σ = αγ - β^2` in the triple's scaled units (multiply by
/// `exp(2 log_scale)` for the true value). Roundoff negatives above
/// `-1e-12 αγ` are clamped to zero; anything below is an evaluation bug.
pub fn det_sigma(t: &CovTriple, x: f64, y: f64) -> Result<f64> {
    let ag = t.alpha * t.gamma;
    let det = ag - t.beta * t.beta;
    if det >= 0.0 {
        Ok(det)
    } else if det > -1e-12 * ag {
        Ok(0.0)
    } else {
        Err(Error::SingularEvaluation { x, y, detail: format!("det Σ = {det:.3e} with αγ = {ag:.3e}") })
    }
}

#[derive(Debug, Clone)]
pub struct CovKernel {
    scheme: CoefficientScheme,
    mode: KernelMode,
    ln_weight_max: f64,
}

impl CovKernel {
    /// Closed form for Kostlan or Kac; custom tables have none.
    pub fn closed_form(scheme: CoefficientScheme) -> Result<Self> {
        let mode = match scheme.kind() {
            SchemeKind::Kostlan => KernelMode::ClosedFormKostlan,
            SchemeKind::KacSquare => KernelMode::ClosedFormKac,
            SchemeKind::Custom => {
                return Err(Error::invalid("custom schemes only support series mode"));
            }
        };
        Self::new(scheme, mode)
    }

    /// Finite-series evaluation, valid for every scheme.
    pub fn series(scheme: CoefficientScheme) -> Result<Self> {
        Self::new(scheme, KernelMode::Series)
    }

    pub fn new(scheme: CoefficientScheme, mode: KernelMode) -> Result<Self> {
        let ok = match mode {
            KernelMode::ClosedFormKostlan => scheme.kind() == SchemeKind::Kostlan,
            KernelMode::ClosedFormKac => scheme.kind() == SchemeKind::KacSquare,
            KernelMode::Series => true,
        };
        if !ok {
            return Err(Error::invalid(format!("mode {mode:?} does not apply to a {} scheme", scheme.kind())));
        }
        if scheme.weight(0, 0) <= 0.0 {
            return Err(Error::invalid("scheme needs a constant term so that α > 0"));
        }
        let ln_weight_max = scheme.support().map(|(_, c)| 2.0 * c.ln()).fold(f64::NEG_INFINITY, f64::max);
        Ok(Self { scheme, mode, ln_weight_max })
    }

    pub fn scheme(&self) -> &CoefficientScheme {
        &self.scheme
    }

    pub fn mode(&self) -> KernelMode {
        self.mode
    }

    pub fn alpha_beta_gamma(&self, x: f64, y: f64) -> CovTriple {
        let d = self.scheme.degree();
        match self.mode {
            KernelMode::ClosedFormKostlan => {
                let rho = x * x + y * y;
                let df = d as f64;
                let mean = df * rho / (1.0 + rho);
                let second = mean * (1.0 + df * rho) / (1.0 + rho);
                CovTriple::from_log_moments(df * rho.ln_1p(), mean, second)
            }
            KernelMode::ClosedFormKac => {
                let mx = kac_moments(d, x * x);
                let my = kac_moments(d, y * y);
                let mean = mx.mean + my.mean;
                let second = mean * mean + mx.var + my.var;
                CovTriple::from_log_moments(mx.ln_sum + my.ln_sum, mean, second)
            }
            KernelMode::Series => self.series_triple(x, y),
        }
    }

    fn series_triple(&self, x: f64, y: f64) -> CovTriple {
        let (u, v) = (x * x, y * y);
        let deg = self.scheme.homogenization_degree() as f64;
        let (lu, lv) = (u.ln(), v.ln());
        let growth = deg * lu.max(lv).max(0.0);
        if growth + self.ln_weight_max < MAX_UNSCALED_LOG {
            let mut pu = vec![1.0; deg as usize + 1];
            let mut pv = vec![1.0; deg as usize + 1];
            for k in 1..pu.len() {
                pu[k] = pu[k - 1] * u;
                pv[k] = pv[k - 1] * v;
            }
            let (mut a, mut b, mut g) = (0.0, 0.0, 0.0);
            for ((j1, j2), c) in self.scheme.support() {
                let w = c * c * pu[j1] * pv[j2];
                let k = (j1 + j2) as f64;
                a += w;
                b += k * w;
                g += k * k * w;
            }
            CovTriple { alpha: a, beta: b, gamma: g, log_scale: 0.0 }
        } else {
            let log_term = |j1: usize, j2: usize, c: f64| {
                let mut l = 2.0 * c.ln();
                if j1 > 0 {
                    l += j1 as f64 * lu;
                }
                if j2 > 0 {
                    l += j2 as f64 * lv;
                }
                l
            };
            let m = self.scheme.support().map(|((j1, j2), c)| log_term(j1, j2, c)).fold(f64::NEG_INFINITY, f64::max);
            let (mut a, mut b, mut g) = (0.0, 0.0, 0.0);
            for ((j1, j2), c) in self.scheme.support() {
                let w = (log_term(j1, j2, c) - m).exp();
                let k = (j1 + j2) as f64;
                a += w;
                b += k * w;
                g += k * k * w;
            }
            CovTriple { alpha: a, beta: b, gamma: g, log_scale: m }
        }
    }

    /// `sqrt(det Σ) / α`, always nonnegative.
    pub fn integrand(&self, x: f64, y: f64) -> Result<f64> {
        let d = self.scheme.degree();
        match self.mode {
            KernelMode::ClosedFormKostlan => {
                let rho = x * x + y * y;
                Ok((d as f64 * rho).sqrt() / (1.0 + rho))
            }
            KernelMode::ClosedFormKac => Ok((x * x * kac_phi(d, x.abs()) + y * y * kac_phi(d, y.abs())).sqrt()),
            KernelMode::Series => {
                let t = self.alpha_beta_gamma(x, y);
                let det = det_sigma(&t, x, y)?;
                Ok(det.sqrt() / t.alpha)
            }
        }
    }

    /// `integrand(r cos θ, r sin θ) / r`, continuous down to `r = 0`.
    pub fn radial_integrand(&self, r: f64, theta: f64) -> Result<f64> {
        let (s, c) = theta.sin_cos();
        match self.mode {
            KernelMode::ClosedFormKostlan => Ok((self.scheme.degree() as f64).sqrt() / (1.0 + r * r)),
            KernelMode::ClosedFormKac => {
                let d = self.scheme.degree();
                Ok((c * c * kac_phi(d, (r * c).abs()) + s * s * kac_phi(d, (r * s).abs())).sqrt())
            }
            KernelMode::Series => {
                if r >= SERIES_R_FLOOR {
                    Ok(self.integrand(r * c, r * s)? / r)
                } else {
                    let g = |rr: f64| self.integrand(rr * c, rr * s).map(|v| v / rr);
                    let (g1, g2) = (g(SERIES_R_FLOOR)?, g(2.0 * SERIES_R_FLOOR)?);
                    let slope = (g2 - g1) / SERIES_R_FLOOR;
                    Ok((g1 + slope * (r - SERIES_R_FLOOR)).max(0.0))
                }
            }
        }
    }

    /// `(sqrt(det Σ)/α + |β|/α^{3/2}) / (x^2 + y^2)`, the majorant whose
    /// finiteness justifies exchanging limit and expectation.
    pub fn integrability_majorant(&self, x: f64, y: f64) -> Result<f64> {
        let t = self.alpha_beta_gamma(x, y);
        let det = det_sigma(&t, x, y)?;
        let first = det.sqrt() / t.alpha;
        let second = t.beta.abs() / t.alpha.powf(1.5) * (-0.5 * t.log_scale).exp();
        Ok((first + second) / (x * x + y * y))
    }
}

/// Log-sum, mean and variance of the index `i` under weights `u^i`, `i = 0..=d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KacMoments {
    pub ln_sum: f64,
    pub mean: f64,
    pub var: f64,
}

/// Moments of the one-variable Kac factor `A(u) = Σ_{i<=d} u^i` at `u = s^2 >= 0`.
///
/// `var = u φ_d(sqrt u)`. For `u > 1` the map `i -> d - i` reflects onto
/// `1/u`. Within `2/(d+1)` of `u = 1` the geometric-series closed forms
/// cancel catastrophically, so the finite sum is taken directly there.
pub fn kac_moments(d: usize, u: f64) -> KacMoments {
    if u > 1.0 {
        let m = kac_moments(d, 1.0 / u);
        return KacMoments { ln_sum: m.ln_sum + d as f64 * u.ln(), mean: d as f64 - m.mean, var: m.var };
    }
    if u == 0.0 {
        return KacMoments { ln_sum: 0.0, mean: 0.0, var: 0.0 };
    }
    let n = (d + 1) as f64;
    if 1.0 - u < 2.0 / n {
        let (mut a, mut m1) = (0.0, 0.0);
        let mut w = 1.0;
        for i in 0..=d {
            a += w;
            m1 += i as f64 * w;
            w *= u;
        }
        let mean = m1 / a;
        let mut var = 0.0;
        let mut w = 1.0;
        for i in 0..=d {
            let dev = i as f64 - mean;
            var += w * dev * dev;
            w *= u;
        }
        return KacMoments { ln_sum: a.ln(), mean, var: var / a };
    }
    let un = (n * u.ln()).exp();
    let one_m_u = 1.0 - u;
    let one_m_un = -(n * u.ln()).exp_m1();
    KacMoments {
        ln_sum: one_m_un.ln() - one_m_u.ln(),
        mean: u / one_m_u - n * un / one_m_un,
        var: u / (one_m_u * one_m_u) - n * n * un / (one_m_un * one_m_un),
    }
}

/// `φ_d(s) = 1/(s^2-1)^2 - (d+1)^2 s^{2d} / (s^{2d+2}-1)^2` for `s >= 0`,
/// including its removable singularity `φ_d(1) = d(d+2)/12`.
/// `sqrt(φ_d(s)) / π` is the real-root density of a degree-`d` Kac polynomial.
pub fn kac_phi(d: usize, s: f64) -> f64 {
    let s = s.abs();
    if s > 1.0 {
        let t = 1.0 / s;
        let t2 = t * t;
        return kac_phi(d, t) * t2 * t2;
    }
    if s == 0.0 {
        return 1.0;
    }
    let u = s * s;
    let n = (d + 1) as f64;
    if 1.0 - u < 2.0 / n {
        return kac_moments(d, u).var / u;
    }
    let ln_u = u.ln();
    let ud = (d as f64 * ln_u).exp();
    let one_m_u = 1.0 - u;
    let one_m_un = -(n * ln_u).exp_m1();
    1.0 / (one_m_u * one_m_u) - n * n * ud / (one_m_un * one_m_un)
}
