use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qtoric::fan::Fan;
use qtoric::torus::ChartAlgebra;
use qtoric::verify::{self, RunConfig, VerificationReport, VerifyError, SCHEMA};
use qtoric::ThetaSpec;

#[derive(Parser)]
#[command(name = "qtoric", version, about = "Quantum toric charts and identity checks")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for parallel suites.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args, Clone, Default)]
struct Sizes {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    deg: Option<usize>,
    /// Bounding box for semigroup certificates.
    #[arg(long = "box")]
    box_size: Option<i64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Path to a theta JSON file, or the JSON itself.
    #[arg(long)]
    theta: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan and list its cones with dual generators and relations.
    Fan { path: PathBuf },
    /// Print the presentation of the chart algebra of one cone.
    Chart { path: PathBuf, cone: usize },
    /// Run a named verification suite.
    Verify {
        suite: String,
        #[command(flatten)]
        sizes: Sizes,
    },
    /// Re-run suites at numeric theta and report the largest discrepancy.
    Specialize {
        /// Suites to cross-check (default: det).
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Number of random theta when none is given.
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        /// Also run the determinant centrality test.
        #[arg(long)]
        centrality: bool,
        #[command(flatten)]
        sizes: Sizes,
    },
}

/// Input problems exit with 2, failed identities with 1.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Fan { path } => {
            let fan = load_fan(path)?;
            let summary = fan.summary()?;
            match cli.format {
                Format::Json => print_json(&summary),
                Format::Text => print!("{}", fan_text(&summary)),
            }
            Ok(Outcome::Pass)
        }
        Command::Chart { path, cone } => {
            let fan = load_fan(path)?;
            let c = fan
                .cones()
                .get(*cone)
                .ok_or_else(|| anyhow!("unknown cone id {} (fan has {} cones)", cone, fan.cones().len()))?;
            let p = ChartAlgebra::new(c)?.presentation();
            match cli.format {
                Format::Json => print_json(&p.to_json()),
                Format::Text => print!("{}", p.to_text()),
            }
            Ok(Outcome::Pass)
        }
        Command::Verify { suite, sizes } => {
            let cfg = config(sizes)?;
            let report = verify::run_suite(suite, &cfg).map_err(verify_err)?;
            emit(cli.format, &[report], sizes.timing)
        }
        Command::Specialize { suites, seeds, centrality, sizes } => {
            let cfg = config(sizes)?;
            if let Some(t) = &cfg.theta {
                if !t.is_numeric() {
                    return Err(anyhow!("specialize needs a numeric theta"));
                }
            }
            let seed_list: Vec<u64> = (1..=*seeds).map(|k| cfg.seed + k).collect();
            let default = vec!["det".to_string()];
            let names = if suites.is_empty() && !*centrality { &default } else { suites };
            let mut reports = Vec::new();
            for s in names {
                reports.push(verify::cross_check(s, &cfg, &seed_list).map_err(verify_err)?);
            }
            if *centrality {
                let cases = verify::centrality_cases(cfg.seed);
                reports.push(verify::centrality_report(&cases).map_err(verify_err)?);
            }
            emit(cli.format, &reports, sizes.timing)
        }
    }
}

fn verify_err(e: VerifyError) -> anyhow::Error {
    anyhow!(e)
}

fn load_fan(path: &PathBuf) -> Result<Fan> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Fan::from_json(&text)?)
}

fn load_theta(arg: &str) -> Result<ThetaSpec<f64>> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    Ok(ThetaSpec::from_json(&text)?)
}

fn config(s: &Sizes) -> Result<RunConfig> {
    Ok(RunConfig {
        n: s.n,
        d: s.d,
        deg: s.deg,
        box_size: s.box_size,
        trials: s.trials,
        theta: s.theta.as_deref().map(load_theta).transpose()?,
        seed: s.seed,
    })
}

fn emit(format: Format, reports: &[VerificationReport], timing: bool) -> Result<Outcome> {
    let ok = reports.iter().all(|r| r.passed());
    match format {
        Format::Json => {
            if let [r] = reports {
                print_json(&r.to_json(timing));
            } else {
                print_json(&json!({
                    "schema": SCHEMA,
                    "status": if ok { "pass" } else { "fail" },
                    "reports": reports.iter().map(|r| r.to_json(timing)).collect::<Vec<_>>(),
                }));
            }
        }
        Format::Text => {
            for r in reports {
                print!("{}", r.to_text(timing));
            }
        }
    }
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn fan_text(summary: &Value) -> String {
    let mut s = format!("fan in dimension {}, {} charts\n", summary["n"], summary["charts"]);
    for c in summary["cones"].as_array().into_iter().flatten() {
        s.push_str(&format!(
            "  cone {} dim {}{} rays {} generators {} relations {}\n",
            c["id"],
            c["dim"],
            if c["maximal"] == true { " (maximal)" } else { "" },
            c["rays"],
            c["generators"],
            c["relations"].as_array().map_or(0, |r| r.len()),
        ));
    }
    s
}
