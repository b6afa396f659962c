use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spinbath::experiments::{self, Experiment, ExperimentConfig};
use spinbath::{selftest, Error};

#[derive(Parser)]
#[command(
    name = "spinbath",
    version,
    about = "Qubit dynamics in a thermal spin bath: channels, non-Markovianity and QFI datasets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Transfer matrix and inhomogeneity over the time grid
    Channel,
    /// Bloch trajectories of two orthogonal probes, spin bath
    Fig1a,
    /// Bloch trajectories of two orthogonal probes, amplitude damping
    Fig1b,
    /// Bures angle to a trajectory state, one file per (epsilon, T)
    Fig2,
    /// Entangled vs product probe QFI, one file per (epsilon, T)
    Fig3,
    /// Time derivatives of the QFI and the Bures angle
    Fig4,
    /// Non-Markovianity measure over the tau grid
    NmScan,
    /// Entangled and product probe QFI at the configured bath
    Qfi,
    /// Run the oracle cross-checks
    Selftest,
}

impl Command {
    fn experiment(self) -> Experiment {
        match self {
            Command::Channel => Experiment::Channel,
            Command::Fig1a => Experiment::Fig1a,
            Command::Fig1b => Experiment::Fig1b,
            Command::Fig2 => Experiment::Fig2,
            Command::Fig3 => Experiment::Fig3,
            Command::Fig4 => Experiment::Fig4,
            Command::NmScan => Experiment::NmScan,
            Command::Qfi => Experiment::Qfi,
            Command::Selftest => Experiment::Selftest,
        }
    }
}

/// Every configuration key is also a flag; flags win over `--config`.
#[derive(Args)]
struct Options {
    /// key = value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, alias = "output_dir")]
    output_dir: Option<String>,
    /// ode | paper
    #[arg(long, global = true, alias = "phase_convention")]
    phase_convention: Option<String>,
    /// Thermal truncation tolerance
    #[arg(long, global = true, alias = "trunc_tol", alias = "trunc-tol")]
    tol: Option<String>,
    /// Significant digits in CSV output
    #[arg(long, global = true)]
    precision: Option<String>,
    /// Overwrite existing output files
    #[arg(long, global = true)]
    force: bool,
    #[arg(long, global = true)]
    epsilon: Option<String>,
    #[arg(long, global = true, alias = "coupling_J0", alias = "coupling_j0")]
    coupling_j0: Option<String>,
    #[arg(long, global = true)]
    temperature: Option<String>,
    #[arg(long, global = true)]
    gamma: Option<String>,
    #[arg(long, global = true, alias = "t_max")]
    t_max: Option<String>,
    #[arg(long, global = true, alias = "t_step")]
    t_step: Option<String>,
    #[arg(long, global = true)]
    tau: Option<String>,
    #[arg(long, global = true, alias = "tau_max")]
    tau_max: Option<String>,
    #[arg(long, global = true, alias = "tau_step")]
    tau_step: Option<String>,
    #[arg(long, global = true)]
    theta: Option<String>,
    #[arg(long, global = true, alias = "n_cap")]
    n_cap: Option<String>,
    /// Comma-separated eps:T pairs for fig2/fig3
    #[arg(long, global = true)]
    regimes: Option<String>,
}

impl Options {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        [
            ("output_dir", &self.output_dir),
            ("phase_convention", &self.phase_convention),
            ("trunc_tol", &self.tol),
            ("precision", &self.precision),
            ("epsilon", &self.epsilon),
            ("coupling_j0", &self.coupling_j0),
            ("temperature", &self.temperature),
            ("gamma", &self.gamma),
            ("t_max", &self.t_max),
            ("t_step", &self.t_step),
            ("tau", &self.tau),
            ("tau_max", &self.tau_max),
            ("tau_step", &self.tau_step),
            ("theta", &self.theta),
            ("n_cap", &self.n_cap),
            ("regimes", &self.regimes),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
        .collect()
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InputDomain(_) => 2,
        Error::Consistency(_) | Error::Singularity(_) => 3,
        Error::Io(_) => 4,
    }
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = ExperimentConfig::for_experiment(cli.command.experiment());
    if let Some(path) = &cli.opts.config {
        cfg.apply_file(path)?;
    }
    for (key, value) in cli.opts.overrides() {
        cfg.set(key, value)?;
    }
    if cli.opts.force {
        cfg.overwrite = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };

    if let Command::Selftest = cli.command {
        let checks = selftest::run_all();
        for c in &checks {
            println!("{c}");
        }
        let failed = checks.iter().filter(|c| !c.passed).count();
        println!("{} checks, {failed} failed", checks.len());
        return if failed == 0 {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(3)
        };
    }

    match experiments::run(cli.command.experiment(), &cfg) {
        Ok(report) => {
            for note in &report.notes {
                eprintln!("note: {note}");
            }
            for f in &report.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
