use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use curvedepth::curvetopo::{
    extract_loops, mollified_count, monte_carlo_depth, MollifierGrid, MonteCarloConfig, SphereMesh,
};
use curvedepth::ensembles::{sample, CoefficientScheme, SampleStream, SchemeKind};
use curvedepth::kernel::{kac_phi, CovKernel};
use curvedepth::quadrature::{a_d_band, expected_depth, expected_depth_kac_polar, QuadConfig};
use curvedepth::Error;

use crate::args::{ComputeArgs, DensityArgs, Ensemble, Method};
use crate::record::RunRecord;

/// Bad input detected before any computation; exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

impl From<io::Error> for UsageError {
    fn from(e: io::Error) -> Self {
        UsageError(e.to_string())
    }
}

/// A validated degree with its scheme.
pub struct Job {
    pub degree: usize,
    pub scheme: CoefficientScheme,
}

/// Builds one job per degree, rejecting combinations no method accepts.
/// With a custom table and no degrees the table's own degree is used.
pub fn plan(degrees: Option<&[usize]>, args: &ComputeArgs) -> Result<Vec<Job>, UsageError> {
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(UsageError("--tol must be positive".into()));
    }
    if args.max_panels == 0 || args.trials == 0 {
        return Err(UsageError("--max-panels and --trials must be positive".into()));
    }
    if !(args.epsilon > 0.0 && args.epsilon.is_finite()) {
        return Err(UsageError("--epsilon must be positive".into()));
    }
    let degrees: Vec<usize> = match (degrees, &args.ensemble) {
        (Some(ds), _) => ds.to_vec(),
        (None, Ensemble::Custom(_)) => vec![args.ensemble.scheme(0)?.degree()],
        (None, _) => return Err(UsageError("--degree or --degrees is required".into())),
    };
    let mut jobs = Vec::with_capacity(degrees.len());
    for degree in degrees {
        let scheme = args.ensemble.scheme(degree)?;
        if scheme.degree() != degree {
            return Err(UsageError(format!("custom table has degree {}, not {degree}", scheme.degree())));
        }
        match args.method {
            Method::Closedform if scheme.kind() != SchemeKind::Kostlan => {
                return Err(UsageError("closedform applies to the kostlan ensemble only".into()));
            }
            Method::Mollified if scheme.homogenization_degree() % 2 == 1 => {
                return Err(UsageError("mollified needs an even curve degree".into()));
            }
            _ => {}
        }
        jobs.push(Job { degree, scheme });
    }
    Ok(jobs)
}

struct Outcome {
    value: f64,
    err: f64,
    band: f64,
    panels: Option<usize>,
    subdiv: Option<u32>,
    discarded: Option<usize>,
}

fn band_of(scheme: &CoefficientScheme) -> f64 {
    match scheme.kind() {
        SchemeKind::Custom => a_d_band(scheme.homogenization_degree()),
        _ => a_d_band(scheme.degree()),
    }
}

fn compute(scheme: &CoefficientScheme, args: &ComputeArgs) -> curvedepth::Result<Outcome> {
    let quad = QuadConfig { tol: args.tol, max_panels: args.max_panels };
    match args.method {
        Method::Closedform => Ok(Outcome {
            value: (scheme.degree() as f64).sqrt() / 2.0,
            err: 0.0,
            band: band_of(scheme),
            panels: None,
            subdiv: None,
            discarded: None,
        }),
        Method::Kacrice => {
            let r = match scheme.kind() {
                SchemeKind::Kostlan => expected_depth(&CovKernel::closed_form(scheme.clone())?, &quad)?,
                SchemeKind::KacSquare => expected_depth_kac_polar(scheme.degree(), &quad)?,
                SchemeKind::Custom => expected_depth(&CovKernel::series(scheme.clone())?, &quad)?,
            };
            Ok(Outcome {
                value: r.value,
                err: r.err_est,
                band: r.a_d_band,
                panels: Some(r.panels),
                subdiv: None,
                discarded: None,
            })
        }
        Method::Montecarlo => {
            let cfg =
                MonteCarloConfig { trials: args.trials, seed: args.seed, subdiv: args.subdiv, ..Default::default() };
            let s = monte_carlo_depth(scheme, &cfg)?;
            Ok(Outcome {
                value: s.mean,
                err: s.stderr,
                band: band_of(scheme),
                panels: None,
                subdiv: Some(s.subdiv),
                discarded: Some(s.discarded),
            })
        }
        Method::Mollified => {
            let stream = SampleStream::new(args.seed);
            let grid = MollifierGrid::default();
            let values = (0..args.trials as u64)
                .into_par_iter()
                .map(|t| mollified_count(&sample(scheme, &stream, t), args.epsilon, &grid))
                .collect::<curvedepth::Result<Vec<f64>>>()?;
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let var =
                if values.len() > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
            Ok(Outcome {
                value: mean,
                err: (var / n).sqrt(),
                band: band_of(scheme),
                panels: None,
                subdiv: None,
                discarded: None,
            })
        }
    }
}

pub fn run_job(command: &str, job: &Job, args: &ComputeArgs) -> RunRecord {
    let start = Instant::now();
    let result = compute(&job.scheme, args);
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let m = args.method;
    let quad = m == Method::Kacrice;
    let mut rec = RunRecord {
        command: command.into(),
        ensemble: args.ensemble.to_string(),
        degree: job.degree,
        method: m.name().into(),
        status: "ok".into(),
        value: None,
        err_or_stderr: None,
        a_d_band: band_of(&job.scheme),
        trials: m.is_sampled().then_some(args.trials),
        panels: None,
        seed: m.is_sampled().then_some(args.seed),
        tol: quad.then_some(args.tol),
        max_panels: quad.then_some(args.max_panels),
        subdiv: None,
        epsilon: (m == Method::Mollified).then_some(args.epsilon),
        discarded: None,
        error: None,
        wall_time_ms,
        version: env!("CARGO_PKG_VERSION").into(),
    };
    match result {
        Ok(o) => {
            rec.value = Some(o.value);
            rec.err_or_stderr = Some(o.err);
            rec.a_d_band = o.band;
            rec.panels = o.panels;
            rec.subdiv = o.subdiv;
            rec.discarded = o.discarded;
        }
        Err(e) => {
            rec.status = match e {
                Error::NonConvergence { .. } => "nonconvergence",
                Error::ExcessiveDiscards { discarded, .. } => {
                    rec.discarded = Some(discarded);
                    "excessive_discards"
                }
                _ => "failed",
            }
            .into();
            rec.error = Some(e.to_string());
        }
    }
    rec
}

/// Runs every job in order, in parallel across jobs.
pub fn run_all(command: &str, jobs: &[Job], args: &ComputeArgs) -> Vec<RunRecord> {
    jobs.par_iter().map(|j| run_job(command, j, args)).collect()
}

/// Loops of trial 0 for each job, as blocks of
/// `loop <id> winding <w> self_antipodal <b>` followed by `X Y Z` lines.
pub fn emit_loops(path: &Path, jobs: &[Job], args: &ComputeArgs) -> io::Result<()> {
    let mut out = String::new();
    let stream = SampleStream::new(args.seed);
    for job in jobs {
        let d = job.scheme.homogenization_degree();
        let _ = writeln!(out, "# ensemble {} degree {} seed {} trial 0", args.ensemble, job.degree, args.seed);
        let mesh = match args.subdiv {
            Some(level) => SphereMesh::icosphere(level),
            None => SphereMesh::for_degree(d),
        };
        match mesh.and_then(|m| extract_loops(&sample(&job.scheme, &stream, 0), &m)) {
            Ok(set) => {
                for (id, l) in set.loops.iter().enumerate() {
                    let _ = writeln!(out, "loop {id} winding {} self_antipodal {}", l.winding, l.is_self_antipodal);
                    for p in &l.points {
                        let _ = writeln!(out, "{} {} {}", p[0], p[1], p[2]);
                    }
                    out.push('\n');
                }
            }
            Err(e) => {
                let _ = writeln!(out, "# no loops: {e}\n");
            }
        }
    }
    std::fs::write(path, out)
}

pub fn write_sweep_csv(path: &Path, records: &[RunRecord]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["degree", "value", "err", "a_d_band", "method", "seed"])?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in records {
        w.write_record([
            r.degree.to_string(),
            opt(r.value),
            opt(r.err_or_stderr),
            r.a_d_band.to_string(),
            r.method.clone(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Grid points `s_min + i * step`, snapped to 1e-12 so that exact values
/// such as `s = 1` land on the removable point.
pub fn density_grid(args: &DensityArgs) -> Result<Vec<f64>, UsageError> {
    let (a, b, h) = (args.s_min, args.s_max, args.step);
    if !(h > 0.0 && h.is_finite()) {
        return Err(UsageError("--step must be positive".into()));
    }
    if !(a >= 0.0 && b >= a && b.is_finite()) {
        return Err(UsageError("need 0 <= --s-min <= --s-max".into()));
    }
    if args.degree == 0 {
        return Err(UsageError("--degree must be at least 1".into()));
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| ((a + i as f64 * h) * 1e12).round() / 1e12).collect())
}

pub fn write_density<W: Write>(w: W, degree: usize, grid: &[f64]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["s", "phi_d", "sqrt_phi_d"])?;
    for &s in grid {
        let phi = kac_phi(degree, s);
        w.write_record([s.to_string(), phi.to_string(), phi.sqrt().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn density_output(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn human_table(records: &[RunRecord]) -> String {
    let mut s =
        format!("{:>7}  {:<10}  {:>14}  {:>10}  {:>5}  {}\n", "degree", "method", "value", "err", "band", "status");
    let num = |v: Option<f64>, p: usize| v.map(|x| format!("{x:.p$}")).unwrap_or_else(|| "-".into());
    for r in records {
        let _ = writeln!(
            s,
            "{:>7}  {:<10}  {:>14}  {:>10}  {:>5}  {}",
            r.degree,
            r.method,
            num(r.value, 10),
            r.err_or_stderr.map(|e| format!("{e:.2e}")).unwrap_or_else(|| "-".into()),
            r.a_d_band,
            r.status
        );
    }
    s
}
