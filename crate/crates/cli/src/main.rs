use std::io::{self, IsTerminal, Write};
use std::process::ExitCode;

use clap::Parser;

use curvedepth_cli::args::{Cli, Command, ComputeArgs};
use curvedepth_cli::record::RunRecord;
use curvedepth_cli::run::{self, Job, UsageError};

const EXIT_USAGE: u8 = 1;
const EXIT_COMPUTE: u8 = 2;

fn thread_pool(threads: Option<u64>) -> Result<rayon::ThreadPool, UsageError> {
    let n = match threads {
        Some(n) => n as usize,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| UsageError(e.to_string()))
}

fn report(records: &[RunRecord]) -> io::Result<u8> {
    let mut out = io::stdout().lock();
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    if io::stderr().is_terminal() {
        eprint!("{}", run::human_table(records));
    }
    Ok(if records.iter().all(RunRecord::is_ok) { 0 } else { EXIT_COMPUTE })
}

fn compute(
    command: &str,
    degrees: Option<&[usize]>,
    args: &ComputeArgs,
) -> Result<(Vec<Job>, Vec<RunRecord>), UsageError> {
    let jobs = run::plan(degrees, args)?;
    let pool = thread_pool(args.threads)?;
    let records = pool.install(|| run::run_all(command, &jobs, args));
    if let Some(path) = &args.emit_loops {
        pool.install(|| run::emit_loops(path, &jobs, args))?;
    }
    Ok((jobs, records))
}

fn main_inner(cli: Cli) -> Result<u8, UsageError> {
    match cli.command {
        Command::Depth(a) => {
            let degrees = a.degree.map(|d| vec![d]).or(a.degrees.map(|l| l.0));
            let (_, records) = compute("depth", degrees.as_deref(), &a.compute)?;
            Ok(report(&records)?)
        }
        Command::Sweep(a) => {
            let (_, records) = compute("sweep", Some(&a.degrees.0), &a.compute)?;
            run::write_sweep_csv(&a.out, &records).map_err(|e| UsageError(e.to_string()))?;
            Ok(report(&records)?)
        }
        Command::Density(a) => {
            let grid = run::density_grid(&a)?;
            let out = run::density_output(a.out.as_deref())?;
            run::write_density(out, a.degree, &grid).map_err(|e| UsageError(e.to_string()))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
