use std::path::PathBuf;

use super::config::ExperimentConfig;
use super::output::{format_real, write_csv, write_summary};
use crate::bloch::{orthogonal_probes, BlochVector, ChannelFamily};
use crate::error::Result;
use crate::measures::{bures_series, nm_measure, BuresSeries, NmResult};
use crate::qfi::{derivative_series, qfi_time_series, QfiSeries};
use crate::reference::AmplitudeDamping;
use crate::spin_bath::SpinBath;
use crate::sweep::{self, uniform_grid};

/// Files written by a run plus human-readable notes for the terminal.
#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub notes: Vec<String>,
}

impl RunReport {
    fn note_truncation(&mut self, bath: &SpinBath) {
        if let Some(w) = bath.truncation_warning() {
            self.notes.push(w);
        }
    }
}

fn time_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    uniform_grid(0.0, cfg.t_max, cfg.t_step)
}

fn tag(x: f64) -> String {
    format!("{x}")
}

/// Images of the two orthogonal equatorial probes at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbePair {
    pub t: f64,
    pub v1: BlochVector,
    pub v2: BlochVector,
}

impl ProbePair {
    pub fn angle(&self) -> Option<f64> {
        self.v1.angle_to(&self.v2)
    }
}

pub fn probe_trajectories<F: ChannelFamily>(family: &F, grid: &[f64]) -> Result<Vec<ProbePair>> {
    let (p1, p2) = orthogonal_probes();
    sweep::try_map(grid, |&t| {
        let ch = family.channel_at(t)?;
        Ok(ProbePair {
            t,
            v1: ch.apply(&p1),
            v2: ch.apply(&p2),
        })
    })
}

fn write_trajectories(cfg: &ExperimentConfig, name: &str, pairs: &[ProbePair]) -> Result<PathBuf> {
    let p = cfg.precision;
    let rows: Vec<Vec<String>> = pairs
        .iter()
        .map(|pp| {
            let mut row = vec![format_real(pp.t, p)];
            row.extend(
                pp.v1
                    .0
                    .iter()
                    .chain(pp.v2.0.iter())
                    .map(|&x| format_real(x, p)),
            );
            row.push(format_real(pp.angle().unwrap_or(f64::NAN), p));
            row.push(format_real(pp.v1.norm(), p));
            row.push(format_real(pp.v2.norm(), p));
            row
        })
        .collect();
    let path = cfg.output_dir.join(name);
    write_csv(
        &path,
        &[
            "t", "v1x", "v1y", "v1z", "v2x", "v2y", "v2z", "angle", "len1", "len2",
        ],
        &rows,
        cfg.overwrite,
    )?;
    Ok(path)
}

pub fn fig1a_data(cfg: &ExperimentConfig) -> Result<Vec<ProbePair>> {
    cfg.validate()?;
    let bath = SpinBath::new(cfg.primary_bath_params())?;
    probe_trajectories(&bath, &time_grid(cfg))
}

pub fn run_fig1a(cfg: &ExperimentConfig) -> Result<RunReport> {
    let mut report = RunReport::default();
    report.note_truncation(&SpinBath::new(cfg.primary_bath_params())?);
    let pairs = fig1a_data(cfg)?;
    report
        .files
        .push(write_trajectories(cfg, "fig1a.csv", &pairs)?);
    Ok(report)
}

/// Amplitude damping; the grid is read in units of `1/γ`.
pub fn fig1b_data(cfg: &ExperimentConfig) -> Result<Vec<ProbePair>> {
    cfg.validate()?;
    let grid: Vec<f64> = time_grid(cfg).iter().map(|x| x / cfg.gamma).collect();
    probe_trajectories(&AmplitudeDamping { gamma: cfg.gamma }, &grid)
}

pub fn run_fig1b(cfg: &ExperimentConfig) -> Result<RunReport> {
    let pairs = fig1b_data(cfg)?;
    Ok(RunReport {
        files: vec![write_trajectories(cfg, "fig1b.csv", &pairs)?],
        notes: Vec::new(),
    })
}

pub fn fig2_data(cfg: &ExperimentConfig) -> Result<Vec<((f64, f64), BuresSeries)>> {
    cfg.validate()?;
    let grid = time_grid(cfg);
    cfg.regimes
        .iter()
        .map(|&(eps, temp)| {
            let bath = SpinBath::new(cfg.bath_params(eps, temp))?;
            Ok(((eps, temp), bures_series(&bath, cfg.tau, &grid)?))
        })
        .collect()
}

pub fn run_fig2(cfg: &ExperimentConfig) -> Result<RunReport> {
    let mut report = RunReport::default();
    let p = cfg.precision;
    for ((eps, temp), series) in fig2_data(cfg)? {
        report.note_truncation(&SpinBath::new(cfg.bath_params(eps, temp))?);
        let rows: Vec<Vec<String>> = series
            .t_grid
            .iter()
            .zip(&series.angles)
            .map(|(&t, &d)| vec![format_real(t, p), format_real(d, p)])
            .collect();
        let path = cfg
            .output_dir
            .join(format!("fig2_eps{}_T{}.csv", tag(eps), tag(temp)));
        write_csv(&path, &["t", "D_B"], &rows, cfg.overwrite)?;
        report.files.push(path);
    }
    Ok(report)
}

/// Grid points where the entangled-probe QFI falls below the product probe
/// by more than `tol`, as `(t, f_qc, f_product)`.
pub fn qfi_violations(series: &QfiSeries, tol: f64) -> Vec<(f64, f64, f64)> {
    series
        .t_grid
        .iter()
        .zip(series.f_entangled.iter().zip(&series.f_product))
        .filter(|(_, (fe, fp))| **fe < **fp - tol)
        .map(|(&t, (&fe, &fp))| (t, fe, fp))
        .collect()
}

fn qfi_rows(series: &QfiSeries, precision: usize) -> Vec<Vec<String>> {
    (0..series.t_grid.len())
        .map(|k| {
            vec![
                format_real(series.t_grid[k], precision),
                format_real(series.f_entangled[k], precision),
                format_real(series.f_product[k], precision),
                format_real(2.0 * series.f_product[k], precision),
            ]
        })
        .collect()
}

const QFI_HEADER: [&str; 4] = ["t", "f_qc", "f_product", "f_product_x2"];

pub fn fig3_data(cfg: &ExperimentConfig) -> Result<Vec<((f64, f64), QfiSeries)>> {
    cfg.validate()?;
    let grid = time_grid(cfg);
    cfg.regimes
        .iter()
        .map(|&(eps, temp)| {
            let bath = SpinBath::new(cfg.bath_params(eps, temp))?;
            Ok(((eps, temp), qfi_time_series(&bath, cfg.theta, &grid)?))
        })
        .collect()
}

pub fn run_fig3(cfg: &ExperimentConfig) -> Result<RunReport> {
    let mut report = RunReport::default();
    for ((eps, temp), series) in fig3_data(cfg)? {
        report.note_truncation(&SpinBath::new(cfg.bath_params(eps, temp))?);
        let path = cfg
            .output_dir
            .join(format!("fig3_eps{}_T{}.csv", tag(eps), tag(temp)));
        write_csv(
            &path,
            &QFI_HEADER,
            &qfi_rows(&series, cfg.precision),
            cfg.overwrite,
        )?;
        report.files.push(path);
        for (t, fe, fp) in qfi_violations(&series, 1e-9) {
            report.notes.push(format!(
                "eps={eps} T={temp}: f_qc < f_product at t={t}: {fe} vs {fp}"
            ));
        }
    }
    Ok(report)
}

/// Time derivatives of the entangled-probe QFI and of the Bures angle.
#[derive(Clone, Debug, PartialEq)]
pub struct Fig4Data {
    pub t_grid: Vec<f64>,
    pub df_dt: Vec<f64>,
    pub ddb_dt: Vec<f64>,
}

impl Fig4Data {
    pub fn sign_agree(&self) -> Vec<bool> {
        self.df_dt
            .iter()
            .zip(&self.ddb_dt)
            .map(|(a, b)| (*a > 0.0) == (*b > 0.0))
            .collect()
    }

    pub fn agreement_fraction(&self) -> f64 {
        let agree = self.sign_agree();
        agree.iter().filter(|&&a| a).count() as f64 / agree.len() as f64
    }
}

pub fn fig4_data(cfg: &ExperimentConfig) -> Result<Fig4Data> {
    cfg.validate()?;
    let grid = time_grid(cfg);
    let bath = SpinBath::new(cfg.primary_bath_params())?;
    let qfi = qfi_time_series(&bath, cfg.theta, &grid)?;
    let db = bures_series(&bath, cfg.tau, &grid)?;
    Ok(Fig4Data {
        df_dt: derivative_series(&qfi.f_entangled, &grid)?,
        ddb_dt: derivative_series(&db.angles, &grid)?,
        t_grid: grid,
    })
}

pub fn run_fig4(cfg: &ExperimentConfig) -> Result<RunReport> {
    let mut report = RunReport::default();
    report.note_truncation(&SpinBath::new(cfg.primary_bath_params())?);
    let data = fig4_data(cfg)?;
    let p = cfg.precision;
    let agree = data.sign_agree();
    let rows: Vec<Vec<String>> = (0..data.t_grid.len())
        .map(|k| {
            vec![
                format_real(data.t_grid[k], p),
                format_real(data.df_dt[k], p),
                format_real(data.ddb_dt[k], p),
                u8::from(agree[k]).to_string(),
            ]
        })
        .collect();
    let csv_path = cfg.output_dir.join("fig4.csv");
    write_csv(
        &csv_path,
        &["t", "dF_dt", "dDB_dt", "sign_agree"],
        &rows,
        cfg.overwrite,
    )?;
    let fraction = data.agreement_fraction();
    let stats_path = cfg.output_dir.join("fig4_stats.txt");
    write_summary(
        &stats_path,
        &[
            ("points", agree.len().to_string()),
            ("agreeing", agree.iter().filter(|&&a| a).count().to_string()),
            ("sign_agreement_fraction", format_real(fraction, p)),
            ("tau", format_real(cfg.tau, p)),
        ],
        cfg.overwrite,
    )?;
    report
        .notes
        .push(format!("sign agreement fraction: {fraction:.4}"));
    report.files.extend([csv_path, stats_path]);
    Ok(report)
}

/// `τ` grid `(0, tau_max]` in steps of `tau_step`.
pub fn tau_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    uniform_grid(cfg.tau_step, cfg.tau_max, cfg.tau_step)
}

pub fn nm_scan_data(cfg: &ExperimentConfig) -> Result<NmResult> {
    cfg.validate()?;
    let bath = SpinBath::new(cfg.primary_bath_params())?;
    nm_measure(&bath, &tau_grid(cfg), &time_grid(cfg))
}

pub fn run_nm_scan(cfg: &ExperimentConfig) -> Result<RunReport> {
    let mut report = RunReport::default();
    let bath = SpinBath::new(cfg.primary_bath_params())?;
    report.note_truncation(&bath);
    let nm = nm_scan_data(cfg)?;
    let p = cfg.precision;
    let rows: Vec<Vec<String>> = nm
        .per_tau
        .iter()
        .map(|&(tau, m)| vec![format_real(tau, p), format_real(m, p)])
        .collect();
    let csv_path = cfg.output_dir.join("nm_scan.csv");
    write_csv(&csv_path, &["tau", "measure"], &rows, cfg.overwrite)?;
    let summary_path = cfg.output_dir.join("nm_summary.txt");
    write_summary(
        &summary_path,
        &[
            ("measure", format_real(nm.measure, p)),
            ("argmax_tau", format_real(nm.argmax_tau, p)),
            ("boundary_argmax", nm.boundary_argmax.to_string()),
            ("tail_warning", nm.tail_warning.to_string()),
            ("n_max", bath.weights().n_max.to_string()),
            (
                "truncation_warning",
                bath.truncation_warning().unwrap_or_else(|| "none".into()),
            ),
        ],
        cfg.overwrite,
    )?;
    report.notes.push(format!(
        "measure = {:.6} at tau = {}",
        nm.measure, nm.argmax_tau
    ));
    if nm.boundary_argmax {
        report
            .notes
            .push("maximum sits on the last tau; widen tau_max".into());
    }
    if nm.tail_warning {
        report
            .notes
            .push("measure still growing at the end of the time window; widen t_max".into());
    }
    report.files.extend([csv_path, summary_path]);
    Ok(report)
}

pub fn run_channel(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut report = RunReport::default();
    let bath = SpinBath::new(cfg.primary_bath_params())?;
    report.note_truncation(&bath);
    let p = cfg.precision;
    let rows = sweep::try_map(&time_grid(cfg), |&t| {
        let ch = bath.channel_at(t)?;
        let mut row = vec![format_real(t, p)];
        row.extend(ch.transfer.iter().flatten().map(|&x| format_real(x, p)));
        row.extend(ch.inhomogeneity.iter().map(|&x| format_real(x, p)));
        Ok(row)
    })?;
    let path = cfg.output_dir.join("channel.csv");
    write_csv(
        &path,
        &[
            "t", "T11", "T12", "T13", "T21", "T22", "T23", "T31", "T32", "T33", "r1", "r2", "r3",
        ],
        &rows,
        cfg.overwrite,
    )?;
    report.files.push(path);
    Ok(report)
}

pub fn run_qfi(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut report = RunReport::default();
    let bath = SpinBath::new(cfg.primary_bath_params())?;
    report.note_truncation(&bath);
    let series = qfi_time_series(&bath, cfg.theta, &time_grid(cfg))?;
    let path = cfg.output_dir.join("qfi.csv");
    write_csv(
        &path,
        &QFI_HEADER,
        &qfi_rows(&series, cfg.precision),
        cfg.overwrite,
    )?;
    report.files.push(path);
    Ok(report)
}
