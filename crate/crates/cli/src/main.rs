//! `balanced`: batch front end. Every command writes `report.json` plus CSV
//! side tables into `--out`; exit codes are 0 (success), 1 (valid but
//! unsuccessful outcome) and 2 (bad config or input, JSON diagnostics on
//! stderr).

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use commands::{execute, load_config, Failure, Inputs};
use config::{Command, Diagnostic, Expect, Run, RunConfig, SampleKind};

#[derive(Parser)]
#[command(name = "balanced", version, about = "Balanced metrics, slopes, and Chow weights at desk scale")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a JSON config (`seed` is mandatory there).
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Fixed-point iteration for the balanced form.
    Balance {
        #[arg(long)]
        sample: PathBuf,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long)]
        cond_cap: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Exact and estimated slope at infinity along one ray.
    Slope {
        #[arg(long)]
        sample: PathBuf,
        #[arg(long)]
        direction: PathBuf,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Minimizer or certified destabilizing ray.
    Decide {
        #[arg(long)]
        sample: PathBuf,
        #[arg(long, value_enum)]
        expect: Option<Expect>,
        #[command(flatten)]
        common: Common,
    },
    /// Exact Chow weights and DF invariant of a toric configuration.
    Chow {
        #[arg(long)]
        toric: PathBuf,
        #[arg(long)]
        m_max: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Bergman expansion residuals for a deformed metric on P¹.
    Bergman {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<u32>>,
        #[command(flatten)]
        common: Common,
    },
    /// Second differences of the energy along random geodesics.
    Convexity {
        #[arg(long)]
        sample: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Write a generated sample as `sample.json`.
    Sample {
        #[arg(long, value_enum)]
        kind: SampleKind,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        sections: Option<usize>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        hyperplane_dim: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

fn config_from_flags(cmd: Cmd) -> Result<Run, Failure> {
    let mut c = RunConfig::default();
    let common = match cmd {
        Cmd::Run { config } => return load_config(&config),
        Cmd::Balance {
            sample,
            eps,
            max_iter,
            cond_cap,
            common,
        } => {
            c.command = Some(Command::Balance);
            c.sample = Some(sample);
            c.eps_bal = eps;
            c.max_iter = max_iter;
            c.cond_cap = cond_cap;
            common
        }
        Cmd::Slope {
            sample,
            direction,
            t_max,
            tol,
            common,
        } => {
            c.command = Some(Command::Slope);
            c.sample = Some(sample);
            c.direction = Some(direction);
            c.t_max = t_max;
            c.slope_tol = tol;
            common
        }
        Cmd::Decide { sample, expect, common } => {
            c.command = Some(Command::Decide);
            c.sample = Some(sample);
            c.expect = expect;
            common
        }
        Cmd::Chow { toric, m_max, common } => {
            c.command = Some(Command::Chow);
            c.toric = Some(toric);
            c.m_max = m_max;
            common
        }
        Cmd::Bergman { profile, k, common } => {
            c.command = Some(Command::Bergman);
            c.profile = Some(profile);
            c.levels = k;
            common
        }
        Cmd::Convexity { sample, trials, common } => {
            c.command = Some(Command::Convexity);
            c.sample = Some(sample);
            c.trials = trials;
            common
        }
        Cmd::Sample {
            kind,
            k,
            sections,
            points,
            hyperplane_dim,
            common,
        } => {
            c.command = Some(Command::Sample);
            c.kind = Some(kind);
            c.k = k;
            c.sections = sections;
            c.points = points;
            c.hyperplane_dim = hyperplane_dim;
            common
        }
    };
    c.seed = Some(common.seed);
    c.out = Some(common.out);
    c.validate().map_err(Failure::Invalid)
}

fn report_failure(code: u8, diagnostics: &[Diagnostic]) -> ExitCode {
    let doc = json!({"exit_code": code, "diagnostics": diagnostics});
    eprintln!("{}", serde_json::to_string_pretty(&doc).expect("diagnostics serialize"));
    ExitCode::from(code)
}

fn run(run: Run) -> ExitCode {
    let start = Instant::now();
    let result = Inputs::read(&run).and_then(|inputs| execute(&run, &inputs).map(|o| (inputs, o)));
    let (inputs, outcome) = match result {
        Ok(v) => v,
        Err(Failure::Invalid(d)) => return report_failure(2, &d),
        Err(Failure::Math(msg)) => return report_failure(1, &[Diagnostic::new("", msg)]),
    };
    let mut config = serde_json::to_value(&run.config).expect("config serializes");
    if let Some(obj) = config.as_object_mut() {
        obj.retain(|_, v| !v.is_null());
    }
    let report = json!({
        "command": run.command.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "seed": run.seed,
        "config": config,
        "inputs_digest": output::inputs_digest(&config, &inputs.files),
        "results": outcome.results,
        "tolerances": outcome.tolerances,
        "timings": {"total_seconds": start.elapsed().as_secs_f64()},
    });
    if let Err(e) = output::write_outputs(&run.out, &outcome.files, &report) {
        return report_failure(2, &[Diagnostic::new("/out", format!("cannot write outputs: {e}"))]);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").to_string();
            return report_failure(2, &[Diagnostic::new("", first)]);
        }
    };
    match config_from_flags(cli.command) {
        Ok(r) => run(r),
        Err(Failure::Invalid(d)) => report_failure(2, &d),
        Err(Failure::Math(msg)) => report_failure(1, &[Diagnostic::new("", msg)]),
    }
}
