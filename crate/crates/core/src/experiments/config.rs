use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::spin_bath::{PhaseConvention, SpinBathParams};

/// Which experiment a configuration drives; selects its defaults.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Channel,
    Fig1a,
    Fig1b,
    Fig2,
    Fig3,
    Fig4,
    NmScan,
    Qfi,
    Selftest,
}

/// Parameters for one CLI run. Energies are in units of `J`, times in `1/J`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub epsilon: f64,
    pub coupling_j0: f64,
    pub temperature: f64,
    /// Amplitude-damping rate of the Markovian comparison.
    pub gamma: f64,
    pub t_max: f64,
    pub t_step: f64,
    /// Preparation time of the trajectory state used by single-`τ` outputs.
    pub tau: f64,
    pub tau_max: f64,
    pub tau_step: f64,
    pub theta: f64,
    pub trunc_tol: f64,
    pub n_cap: usize,
    pub phase_convention: PhaseConvention,
    pub output_dir: PathBuf,
    /// Significant digits in CSV output.
    pub precision: usize,
    /// `(ε, T)` pairs swept by the multi-regime figures.
    pub regimes: Vec<(f64, f64)>,
    pub overwrite: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            epsilon: 2.0,
            coupling_j0: 1.0,
            temperature: 1.0,
            gamma: 1.0,
            t_max: 3.0,
            t_step: 0.005,
            tau: 2.0,
            tau_max: 4.0,
            tau_step: 0.25,
            theta: FRAC_PI_2,
            trunc_tol: 1e-12,
            n_cap: 10_000,
            phase_convention: PhaseConvention::Ode,
            output_dir: PathBuf::from("output"),
            precision: 17,
            regimes: vec![(2.0, 1.0), (6.0, 1.0), (2.0, 6.0)],
            overwrite: false,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value '{value}' for '{key}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Config(format!(
            "invalid boolean '{value}' for '{key}'"
        ))),
    }
}

/// `2:1, 6:1, 2:6` → `[(2, 1), (6, 1), (2, 6)]`.
fn parse_regimes(value: &str) -> Result<Vec<(f64, f64)>> {
    value
        .split(',')
        .map(|pair| {
            let (e, t) = pair
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("regime '{pair}' is not eps:T")))?;
            Ok((parse("regimes", e)?, parse("regimes", t)?))
        })
        .collect()
}

impl ExperimentConfig {
    /// Defaults matching the standard figure for `experiment`.
    pub fn for_experiment(experiment: Experiment) -> Self {
        let base = Self::default();
        match experiment {
            Experiment::Fig3 => Self {
                regimes: vec![(6.0, 1.0), (2.0, 1.0), (2.0, 6.0)],
                ..base
            },
            Experiment::Fig4 => Self {
                epsilon: 6.0,
                t_step: 0.002,
                ..base
            },
            Experiment::NmScan => Self { t_max: 6.0, ..base },
            _ => base,
        }
    }

    /// Sets one `key = value` pair; keys match the field names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim() {
            "epsilon" => self.epsilon = parse(key, value)?,
            "coupling_j0" | "coupling_J0" => self.coupling_j0 = parse(key, value)?,
            "temperature" => self.temperature = parse(key, value)?,
            "gamma" => self.gamma = parse(key, value)?,
            "t_max" => self.t_max = parse(key, value)?,
            "t_step" => self.t_step = parse(key, value)?,
            "tau" => self.tau = parse(key, value)?,
            "tau_max" => self.tau_max = parse(key, value)?,
            "tau_step" => self.tau_step = parse(key, value)?,
            "theta" => self.theta = parse(key, value)?,
            "trunc_tol" | "tol" => self.trunc_tol = parse(key, value)?,
            "n_cap" => self.n_cap = parse(key, value)?,
            "phase_convention" => {
                self.phase_convention = value
                    .parse()
                    .map_err(|e: Error| Error::Config(e.to_string()))?
            }
            "output_dir" => self.output_dir = PathBuf::from(value.trim()),
            "precision" => self.precision = parse(key, value)?,
            "regimes" => self.regimes = parse_regimes(value)?,
            "overwrite" => self.overwrite = parse_bool(key, value)?,
            other => {
                return Err(Error::Config(format!(
                    "unknown configuration key '{other}'"
                )))
            }
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {}: expected key = value, got '{raw}'",
                    lineno + 1
                ))
            })?;
            self.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.t_step > 0.0) {
            return bad(format!("t_step must be > 0, got {}", self.t_step));
        }
        if !(self.t_max > 0.0) {
            return bad(format!("t_max must be > 0, got {}", self.t_max));
        }
        if !(self.tau_step > 0.0) {
            return bad(format!("tau_step must be > 0, got {}", self.tau_step));
        }
        if !(self.tau_max >= self.tau_step) {
            return bad(format!(
                "tau_max must be at least tau_step, got {}",
                self.tau_max
            ));
        }
        if !(self.tau >= 0.0) {
            return bad(format!("tau must be >= 0, got {}", self.tau));
        }
        if !(0.0..std::f64::consts::PI).contains(&self.theta) {
            return bad(format!("theta must lie in [0, π), got {}", self.theta));
        }
        if !(self.gamma > 0.0) {
            return bad(format!("gamma must be > 0, got {}", self.gamma));
        }
        if !(1..=17).contains(&self.precision) {
            return bad(format!("precision must be 1..=17, got {}", self.precision));
        }
        if self.regimes.is_empty() {
            return bad("regimes must not be empty".into());
        }
        for (eps, temp) in
            std::iter::once((self.epsilon, self.temperature)).chain(self.regimes.iter().copied())
        {
            self.bath_params(eps, temp)
                .validate()
                .map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn bath_params(&self, epsilon: f64, temperature: f64) -> SpinBathParams {
        SpinBathParams {
            epsilon,
            coupling_j0: self.coupling_j0,
            temperature,
            trunc_tol: self.trunc_tol,
            n_cap: self.n_cap,
            phase_convention: self.phase_convention,
            ..SpinBathParams::default()
        }
    }

    /// Bath at the configured `epsilon` and `temperature`.
    pub fn primary_bath_params(&self) -> SpinBathParams {
        self.bath_params(self.epsilon, self.temperature)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_text() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text(
            "# comment\nepsilon = 6.0\n\ncoupling_J0=0.5 # inline\nphase_convention = paper\nregimes = 2:1, 6:3\n",
        )
        .unwrap();
        assert_eq!(cfg.epsilon, 6.0);
        assert_eq!(cfg.coupling_j0, 0.5);
        assert_eq!(cfg.phase_convention, PhaseConvention::SharedPhase);
        assert_eq!(cfg.regimes, vec![(2.0, 1.0), (6.0, 3.0)]);
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let mut cfg = ExperimentConfig::default();
        assert!(matches!(cfg.apply_text("nope = 1"), Err(Error::Config(_))));
        assert!(matches!(cfg.apply_text("epsilon 2"), Err(Error::Config(_))));
        assert!(matches!(
            cfg.apply_text("t_step = abc"),
            Err(Error::Config(_))
        ));
        let mut cfg = ExperimentConfig::default();
        cfg.set("theta", "3.2").unwrap();
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::default();
        cfg.set("temperature", "-1").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn per_command_defaults() {
        let f4 = ExperimentConfig::for_experiment(Experiment::Fig4);
        assert_eq!(
            (f4.epsilon, f4.temperature, f4.coupling_j0, f4.t_step),
            (6.0, 1.0, 1.0, 0.002)
        );
        assert_eq!(
            ExperimentConfig::for_experiment(Experiment::NmScan).t_max,
            6.0
        );
        assert_eq!(
            ExperimentConfig::for_experiment(Experiment::Fig3).regimes[0],
            (6.0, 1.0)
        );
    }
}
