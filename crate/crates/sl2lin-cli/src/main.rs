use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use sl2lin::nashmoser::SlbTriple;
use sl2lin::suites::{run_suite, Suite, SuiteConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Run a verification suite and write its report.
///
/// Exit status: 0 when every hard check passes, 1 on a failed check, 2 on a usage error.
#[derive(Parser, Debug)]
#[command(name = "sl2lin", version)]
struct Args {
    /// matrix, skeleton, flow, foliation, homotopy, flatcalc, smoothing, schedule or all
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    suite: Suite,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Factor applied to every hard tolerance
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
    /// Nodes per axis of the planar grids (odd, at least 33)
    #[arg(long, default_value_t = 257)]
    grid: usize,
    /// Base sample count for randomized checks
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// SLB triple a,b,c for the schedule suite
    #[arg(long, default_value = "1,21,167", value_parser = parse_slb)]
    slb: SlbTriple,
    /// Report path; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: sl2lin::Error| e.to_string())
}

fn parse_slb(s: &str) -> Result<SlbTriple, String> {
    let v: Vec<u64> = s
        .split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|e| format!("'{p}': {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c] => Ok(SlbTriple::new(a, b, c)),
        _ => Err(format!("expected three comma-separated integers, got '{s}'")),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = SuiteConfig {
        suite: args.suite,
        seed: args.seed,
        tol_scale: args.tol_scale,
        grid: args.grid,
        samples: args.samples,
        slb: args.slb,
    };
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    for c in report.failures() {
        eprintln!("FAIL [{}] {}: {:e} {:?} {:e}", c.suite, c.name, c.measured, c.relation, c.tolerance);
    }
    eprintln!(
        "{}: {} checks, {} hard failures",
        cfg.suite,
        report.checks.len(),
        report.hard_failures
    );
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
