use std::collections::BTreeMap;

use super::depth::{assess_sample, DepthSampleReport};
use super::mesh::SphereMesh;
use crate::ensembles::{sample, CoefficientScheme, SampleStream};
use crate::error::{Error, Result};

pub type Rotation = [[f64; 3]; 3];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MonteCarloConfig {
    pub trials: usize,
    pub seed: u64,
    /// Mesh level; `None` picks the level whose edges are below `0.5 / d`.
    pub subdiv: Option<u32>,
    /// Every sample `F` is replaced by `P -> F(R P)`.
    pub rotation: Option<Rotation>,
    /// Worker count; `None` uses the global pool.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(accepted)`; 0 below two samples.
    pub stderr: f64,
    /// `histogram[k]` counts accepted trials of depth `k`.
    pub histogram: Vec<usize>,
    pub accepted: usize,
    pub discarded: usize,
    pub trials: usize,
    pub subdiv: u32,
    pub discard_reasons: BTreeMap<String, usize>,
}

impl MonteCarloSummary {
    pub fn discard_fraction(&self) -> f64 {
        self.discarded as f64 / self.trials as f64
    }
}

fn run_trials<F>(trials: usize, threads: Option<usize>, f: F) -> Result<Vec<DepthSampleReport>>
where
    F: Fn(u64) -> Result<DepthSampleReport> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let work = || (0..trials as u64).into_par_iter().map(&f).collect::<Result<Vec<_>>>();
        match threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
                .install(work),
            None => work(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        (0..trials as u64).map(f).collect()
    }
}

/// Samples `trials` curves from `scheme` and counts the ovals around
/// `[0:0:1]` in each. Trial `t` always sees the same coefficients, so the
/// summary does not depend on the worker count.
pub fn monte_carlo_depth(scheme: &CoefficientScheme, cfg: &MonteCarloConfig) -> Result<MonteCarloSummary> {
    if cfg.trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if cfg.threads == Some(0) {
        return Err(Error::invalid("thread count must be at least 1"));
    }
    let d = scheme.homogenization_degree();
    let level = cfg.subdiv.unwrap_or_else(|| SphereMesh::level_for_degree(d));
    let mesh = SphereMesh::icosphere(level)?;
    let stream = SampleStream::new(cfg.seed);

    let reports = run_trials(cfg.trials, cfg.threads, |t| {
        let mut poly = sample(scheme, &stream, t);
        if let Some(rot) = &cfg.rotation {
            poly = poly.rotated(rot)?;
        }
        Ok(assess_sample(&poly, &mesh))
    })?;

    let mut histogram = Vec::new();
    let mut discard_reasons = BTreeMap::new();
    let (mut sum, mut accepted) = (0.0, 0usize);
    for r in &reports {
        if let Some(reason) = r.discarded {
            *discard_reasons.entry(reason.to_string()).or_insert(0) += 1;
            continue;
        }
        if histogram.len() <= r.depth {
            histogram.resize(r.depth + 1, 0);
        }
        histogram[r.depth] += 1;
        sum += r.depth as f64;
        accepted += 1;
    }
    let discarded = cfg.trials - accepted;
    if discarded * 10 > cfg.trials {
        return Err(Error::ExcessiveDiscards { discarded, trials: cfg.trials });
    }
    let mean = sum / accepted as f64;
    let stderr = if accepted < 2 {
        0.0
    } else {
        let ss: f64 = histogram.iter().enumerate().map(|(k, &c)| c as f64 * (k as f64 - mean).powi(2)).sum();
        (ss / (accepted - 1) as f64 / accepted as f64).sqrt()
    };
    Ok(MonteCarloSummary {
        mean,
        stderr,
        histogram,
        accepted,
        discarded,
        trials: cfg.trials,
        subdiv: level,
        discard_reasons,
    })
}

/// Rotation by `angle` about the unit vector `axis` (Rodrigues).
pub fn rotation_about_axis(axis: [f64; 3], angle: f64) -> Result<Rotation> {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::invalid("rotation axis must be a nonzero finite vector"));
    }
    let [x, y, z] = axis.map(|c| c / n);
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    Ok([
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ])
}

/// A rotation `R` with `R e_3 = p / |p|`. Composing samples with it moves the
/// base point from `[0:0:1]` to `[p]`.
pub fn rotation_taking_pole_to(p: [f64; 3]) -> Result<Rotation> {
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::invalid("target point must be a nonzero finite vector"));
    }
    let q = p.map(|c| c / n);
    let axis = [-q[1], q[0], 0.0];
    if axis[1].hypot(axis[0]) < 1e-15 {
        return if q[2] > 0.0 {
            rotation_about_axis([1.0, 0.0, 0.0], 0.0)
        } else {
            rotation_about_axis([1.0, 0.0, 0.0], std::f64::consts::PI)
        };
    }
    rotation_about_axis(axis, q[2].clamp(-1.0, 1.0).acos())
}
