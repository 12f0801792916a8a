//! `jbstar`: runs named verification suites and reports worst-case residuals.

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use jbstar::algebra::AlgebraDescriptor;
use jbstar::measures::{measure_by_identifier, Measure, MeasureDocument};
use jbstar::verify::{run_suite, Suite, SuiteConfig};

#[derive(Debug, Parser)]
#[command(name = "jbstar", version, about = "Verification suites for finite-dimensional JB*-algebras")]
struct Args {
    /// Suite to run; see --list-suites.
    #[arg(required_unless_present = "list_suites")]
    suite: Option<String>,

    /// Algebra descriptor such as m3+spin4+albert; defaults per suite.
    #[arg(long)]
    algebra: Option<String>,

    /// Number of random trials; defaults per suite.
    #[arg(long)]
    trials: Option<usize>,

    #[arg(long, env = "JG_DEFAULT_SEED", default_value_t = 0)]
    seed: u64,

    /// Overrides every check's tolerance; lower-bound checks use it as slack.
    #[arg(long)]
    tol: Option<f64>,

    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,

    /// Print the available suites and exit.
    #[arg(long)]
    list_suites: bool,

    /// Measure for the measure suites: a built-in identifier (kadison_s2,
    /// spin_counterexample:K) or the path of a JSON density document.
    #[arg(long)]
    measure: Option<String>,
}

const USAGE: u8 = 2;

fn load_measure(spec: &str) -> Result<Measure, String> {
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| format!("cannot read {spec}: {e}"))?;
        MeasureDocument::from_json(&text).and_then(MeasureDocument::into_measure).map_err(|e| e.to_string())
    } else {
        measure_by_identifier(spec).map_err(|e| e.to_string())
    }
}

fn configure(args: &Args, suite: Suite) -> Result<SuiteConfig, String> {
    let measure = args.measure.as_deref().map(load_measure).transpose()?;
    let algebra: AlgebraDescriptor = match (&args.algebra, &measure) {
        (Some(text), _) => text.parse().map_err(|e: jbstar::Error| e.to_string())?,
        (None, Some(mu)) => mu.descriptor().clone(),
        (None, None) => suite.default_algebra().parse().map_err(|e: jbstar::Error| e.to_string())?,
    };
    if let Some(mu) = &measure {
        if mu.descriptor() != &algebra {
            return Err(format!("measure lives on {} but --algebra is {algebra}", mu.descriptor()));
        }
    }
    let mut config = SuiteConfig::new(algebra, args.trials.unwrap_or(suite.default_trials()), args.seed);
    config.tol = args.tol;
    config.measure = measure;
    Ok(config)
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list_suites {
        for suite in Suite::ALL {
            println!("{:<20} {:<8} {}", suite.name(), suite.default_algebra(), suite.description());
        }
        return ExitCode::SUCCESS;
    }
    let name = args.suite.as_deref().expect("clap requires a suite");
    let suite: Suite = match name.parse() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("jbstar: {e}");
            return ExitCode::from(USAGE);
        }
    };
    let config = match configure(&args, suite) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("jbstar: {e}");
            return ExitCode::from(USAGE);
        }
    };
    match run_suite(suite, &config) {
        Ok(report) => {
            if args.json {
                println!("{}", report.to_json());
            } else {
                print!("{report}");
            }
            if report.pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("jbstar: {e}");
            ExitCode::from(USAGE)
        }
    }
}
