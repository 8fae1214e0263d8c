use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use curvedepth::ensembles::CoefficientScheme;

#[derive(Debug, Parser)]
#[command(name = "curvedepth", version, about = "Expected depth of a point inside random real plane curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute one record per degree and print them as JSON lines.
    Depth(DepthArgs),
    /// Compute a degree sweep, write a CSV table and print the records.
    Sweep(SweepArgs),
    /// Tabulate the Kac root density φ_d(s).
    Density(DensityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Adaptive quadrature of the expected-depth integral.
    Kacrice,
    /// Sampled curves, ovals counted on a sphere mesh.
    Montecarlo,
    /// sqrt(d)/2, Kostlan only.
    Closedform,
    /// Mean mollified crossing count over sampled curves.
    Mollified,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Kacrice => "kacrice",
            Method::Montecarlo => "montecarlo",
            Method::Closedform => "closedform",
            Method::Mollified => "mollified",
        }
    }

    pub fn is_sampled(self) -> bool {
        matches!(self, Method::Montecarlo | Method::Mollified)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ensemble {
    Kostlan,
    Kac,
    Custom(PathBuf),
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ensemble::Kostlan => f.write_str("kostlan"),
            Ensemble::Kac => f.write_str("kac"),
            Ensemble::Custom(p) => write!(f, "custom:{}", p.display()),
        }
    }
}

pub fn parse_ensemble(s: &str) -> Result<Ensemble, String> {
    match s {
        "kostlan" => Ok(Ensemble::Kostlan),
        "kac" => Ok(Ensemble::Kac),
        _ => match s.strip_prefix("custom:") {
            Some(p) if !p.is_empty() => Ok(Ensemble::Custom(PathBuf::from(p))),
            _ => Err(format!("unknown ensemble `{s}`; expected kostlan, kac or custom:<path>")),
        },
    }
}

impl Ensemble {
    pub fn scheme(&self, degree: usize) -> curvedepth::Result<CoefficientScheme> {
        match self {
            Ensemble::Kostlan => CoefficientScheme::kostlan(degree),
            Ensemble::Kac => CoefficientScheme::kac_square(degree),
            Ensemble::Custom(p) => CoefficientScheme::from_custom_file(p),
        }
    }
}

/// Comma-separated items, each `N`, `A-B` or `A-B:S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeList(pub Vec<usize>);

pub fn parse_degrees(s: &str) -> Result<DegreeList, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad degree `{t}`"));
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (range, step) = match item.split_once(':') {
            Some((r, st)) => (r, num(st)?),
            None => (item, 1),
        };
        if step == 0 {
            return Err(format!("zero step in `{item}`"));
        }
        match range.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty range `{item}`"));
                }
                out.extend((a..=b).step_by(step));
            }
            None if step == 1 => out.push(num(range)?),
            None => return Err(format!("step without range in `{item}`")),
        }
    }
    if out.is_empty() {
        return Err("no degrees given".into());
    }
    out.sort_unstable();
    out.dedup();
    Ok(DegreeList(out))
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    /// kostlan, kac or custom:<path> (lines `j1 j2 weight`).
    #[arg(long, default_value = "kostlan", value_parser = parse_ensemble)]
    pub ensemble: Ensemble,
    #[arg(long, value_enum, default_value_t = Method::Kacrice)]
    pub method: Method,
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Panel budget across both quadrature levels.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_panels: usize,
    /// Sampled curves per degree.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Icosphere level; defaults to edges below 0.5/d.
    #[arg(long)]
    pub subdiv: Option<u32>,
    /// Mollifier width for the mollified method.
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, env = "CURVEDEPTH_THREADS", value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    /// Write the loops of trial 0 for each degree to this file.
    #[arg(long)]
    pub emit_loops: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DepthArgs {
    #[arg(long, conflicts_with = "degrees")]
    pub degree: Option<usize>,
    #[arg(long, value_parser = parse_degrees)]
    pub degrees: Option<DegreeList>,
    #[command(flatten)]
    pub compute: ComputeArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_degrees)]
    pub degrees: DegreeList,
    /// CSV output path.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub compute: ComputeArgs,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub degree: usize,
    #[arg(long, default_value_t = 0.0)]
    pub s_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub s_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_lists() {
        assert_eq!(parse_degrees("4,16,36,64").unwrap().0, vec![4, 16, 36, 64]);
        assert_eq!(parse_degrees("1-4").unwrap().0, vec![1, 2, 3, 4]);
        assert_eq!(parse_degrees("10-40:10, 5").unwrap().0, vec![5, 10, 20, 30, 40]);
        assert_eq!(parse_degrees("3,3,2").unwrap().0, vec![2, 3]);
        for bad in ["", " , ", "4-2", "1-5:0", "x", "7:2"] {
            assert!(parse_degrees(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn ensembles_round_trip() {
        for s in ["kostlan", "kac", "custom:w.txt"] {
            assert_eq!(parse_ensemble(s).unwrap().to_string(), s);
        }
        assert!(parse_ensemble("custom:").is_err());
        assert!(parse_ensemble("gauss").is_err());
    }
}
