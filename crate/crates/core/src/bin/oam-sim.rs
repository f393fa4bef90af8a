use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use oam_antijam::oracle::run_oracle_suite;
use oam_antijam::report::{summary, trend_checks, write_csv};
use oam_antijam::scenario::{parse_scenario, resolve_seed, Scenario, SEED_ENV};
use oam_antijam::sweep::run_sweep;
use oam_antijam::Error;

/// Monte Carlo sweeps of an OAM link that backscatters on jammed modes.
#[derive(Debug, Parser)]
#[command(name = "oam-sim", version)]
struct Args {
    /// Scenario file (TOML). Without it the reference setup is used.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed; overrides the scenario and $OAM_SIM_SEED.
    #[arg(long)]
    seed: Option<u64>,
    /// Trials per grid point.
    #[arg(long)]
    trials: Option<usize>,
    /// CSV output path.
    #[arg(long, default_value = "oam_sweep.csv")]
    output: PathBuf,
    /// Check the SE trends of the run and report them in the summary.
    #[arg(long)]
    check_trends: bool,
    /// Run the slow validation suite instead of a sweep.
    #[arg(long)]
    oracle: bool,
}

fn exit_code(e: &Error) -> ExitCode {
    match e {
        Error::Numeric(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn run(args: &Args) -> Result<bool, Error> {
    let mut scenario = match &args.config {
        Some(path) => parse_scenario(path)?,
        None => Scenario::default(),
    };
    let env = std::env::var(SEED_ENV).ok();
    scenario.settings.seed = resolve_seed(args.seed, scenario.seed, env.as_deref())?;
    if let Some(t) = args.trials {
        if t == 0 {
            return Err(Error::InvalidConfig {
                field: "trials".into(),
                reason: "must be at least 1".into(),
            });
        }
        scenario.settings.trials = t;
    }

    if args.oracle {
        let checks = run_oracle_suite(scenario.settings.seed)?;
        let mut ok = true;
        for c in &checks {
            println!("{} {:<40} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            ok &= c.passed;
        }
        return Ok(ok);
    }

    let results = run_sweep(&scenario.config, &scenario.axes, &scenario.settings)?;
    let file = File::create(&args.output).map_err(|e| Error::Io(format!("{}: {e}", args.output.display())))?;
    write_csv(BufWriter::new(file), &results)?;

    let checks = args.check_trends.then(|| trend_checks(&results));
    print!("{}", summary(&results, checks.as_deref()));
    println!(
        "seed {} trials {} -> {}",
        scenario.settings.seed,
        scenario.settings.trials,
        args.output.display()
    );
    Ok(checks.is_none_or(|cs| cs.iter().all(|c| c.passed)))
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        // Failed trend or oracle checks are numeric failures.
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("oam-sim: {e}");
            exit_code(&e)
        }
    }
}
