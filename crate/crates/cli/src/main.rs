use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sqkd_core::harness::{
    all_satisfied, bounds_table, run_experiment, run_sweep, run_verify, BoundsQuery, FlatConfig, Scope,
};
use sqkd_core::protocol::{BobModel, Schedule};
use sqkd_core::analysis::render_table;

#[derive(Parser)]
#[command(name = "sqkd", version, about = "Semi-quantum key distribution simulator and verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one Monte Carlo experiment.
    Run(Overrides),
    /// Run one experiment per value of a swept parameter.
    Sweep(Overrides),
    /// Print closed-form bounds at one parameter point.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Also report the Protocol 1' abort bound.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        delta_prime: Option<f64>,
        /// Qubits per INFO bit in the leakage figures.
        #[arg(long, default_value_t = 4)]
        k: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run the verification battery; exits nonzero if any check fails.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_scope)]
        scope: Scope,
        #[arg(long)]
        json: bool,
    },
}

/// Flags mirror the config file keys and override them.
#[derive(Args)]
struct Overrides {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// mock, p1, p1prime or p2.
    #[arg(long)]
    protocol: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta_prime: Option<f64>,
    #[arg(long)]
    p_ctrl: Option<f64>,
    #[arg(long)]
    p_test: Option<f64>,
    #[arg(long, value_parser = parse_schedule)]
    schedule: Option<Schedule>,
    #[arg(long, value_parser = parse_bob_model)]
    bob_model: Option<BobModel>,
    #[arg(long)]
    attack: Option<String>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    forward_matrix: Option<PathBuf>,
    #[arg(long)]
    backward_matrix: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json; defaults from the output extension.
    #[arg(long)]
    format: Option<String>,
    /// Parameter to sweep: theta, n, delta, epsilon or trials.
    #[arg(long)]
    param: Option<String>,
    /// Comma-separated values of the swept parameter.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
}

fn parse_scope(s: &str) -> Result<Scope, String> {
    Scope::parse(s).ok_or_else(|| format!("unknown scope `{s}`"))
}

fn parse_schedule(s: &str) -> Result<Schedule, String> {
    match s {
        "parallel" => Ok(Schedule::Parallel),
        "sequential" => Ok(Schedule::Sequential),
        _ => Err(format!("unknown schedule `{s}`")),
    }
}

fn parse_bob_model(s: &str) -> Result<BobModel, String> {
    match s {
        "register" => Ok(BobModel::Register),
        "immediate" => Ok(BobModel::Immediate),
        _ => Err(format!("unknown Bob model `{s}`")),
    }
}

impl Overrides {
    fn resolve(self) -> sqkd_core::Result<FlatConfig> {
        let file = match &self.config {
            Some(path) => FlatConfig::from_file(path)?,
            None => FlatConfig::default(),
        };
        let cli = FlatConfig {
            protocol: self.protocol,
            n: self.n,
            delta: self.delta,
            epsilon: self.epsilon,
            delta_prime: self.delta_prime,
            p_ctrl: self.p_ctrl,
            p_test: self.p_test,
            schedule: self.schedule,
            bob_model: self.bob_model,
            attack: self.attack,
            theta: self.theta,
            forward_matrix: self.forward_matrix,
            backward_matrix: self.backward_matrix,
            trials: self.trials,
            seed: self.seed,
            out: self.out,
            format: self.format,
            sweep: self.param,
            values: self.values,
        };
        Ok(file.overlay(cli))
    }
}

fn execute(cli: Cli) -> sqkd_core::Result<bool> {
    match cli.command {
        Command::Run(o) => {
            let cfg = o.resolve()?.to_experiment()?;
            let result = run_experiment(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&result.summary)?);
            Ok(true)
        }
        Command::Sweep(o) => {
            let cfg = o.resolve()?.to_sweep()?;
            let rows = run_sweep(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&rows)?);
            Ok(true)
        }
        Command::Bounds {
            n,
            epsilon,
            delta,
            delta_prime,
            k,
            json,
        } => {
            let reports = bounds_table(&BoundsQuery {
                n,
                epsilon,
                delta,
                delta_prime,
                k,
            })?;
            if json {
                println!("{}", serde_json::to_string_pretty(&reports)?);
            } else {
                print!("{}", render_table(&reports));
            }
            Ok(true)
        }
        Command::Verify { scope, json } => {
            let reports = run_verify(scope)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&reports)?);
            } else {
                print!("{}", render_table(&reports));
            }
            let ok = all_satisfied(&reports);
            let failed = reports.iter().filter(|r| !r.satisfied).count();
            eprintln!("{} checks, {failed} failed", reports.len());
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
