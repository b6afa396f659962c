//! Configuration, CSV emission and the figure/scan drivers behind the CLI.

mod config;
mod output;
mod runs;

pub use config::{Experiment, ExperimentConfig};
pub use output::{format_real, write_csv, write_summary};
pub use runs::{
    fig1a_data, fig1b_data, fig2_data, fig3_data, fig4_data, nm_scan_data, probe_trajectories,
    qfi_violations, run_channel, run_fig1a, run_fig1b, run_fig2, run_fig3, run_fig4, run_nm_scan,
    run_qfi, tau_grid, Fig4Data, ProbePair, RunReport,
};

use crate::error::Result;

/// Dispatches `experiment`; `Selftest` is handled by [`crate::selftest`].
pub fn run(experiment: Experiment, cfg: &ExperimentConfig) -> Result<RunReport> {
    match experiment {
        Experiment::Channel => run_channel(cfg),
        Experiment::Fig1a => run_fig1a(cfg),
        Experiment::Fig1b => run_fig1b(cfg),
        Experiment::Fig2 => run_fig2(cfg),
        Experiment::Fig3 => run_fig3(cfg),
        Experiment::Fig4 => run_fig4(cfg),
        Experiment::NmScan => run_nm_scan(cfg),
        Experiment::Qfi => run_qfi(cfg),
        Experiment::Selftest => Ok(RunReport::default()),
    }
}
