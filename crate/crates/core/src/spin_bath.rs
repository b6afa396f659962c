//! Central qubit coupled to a thermal spin bath in the thermodynamic limit.
//!
//! After the Holstein–Primakoff mapping the bath is a single bosonic mode
//! with energy `2J n`, and the joint evolution conserves the excitation
//! number. Each bath occupation `n` therefore contributes two decoupled
//! 2x2 problems:
//!
//! ```text
//! i d/dt (A1, B1) = [[ ε/2,  J0(n+1) ], [ J0, -(ε/2 - 2J) ]] (A1, B1),  (A1, B1)(0) = (1, 0)
//! i d/dt (C1, D1) = [[ ε/2 - 2J, J0 ], [ J0 n, -ε/2 ]]       (C1, D1),  (C1, D1)(0) = (0, 1)
//! ```
//!
//! The channel follows from thermal averages over `n` with weights
//! `w_n = e^{-2Jn/T} / Z`, `Z = 1 / (1 - e^{-2J/T})`.

use num_complex::Complex64 as C64;

use crate::bloch::{AffineQubitChannel, ChannelFamily};
use crate::error::{consistency, domain, Result};
use crate::numerics::{rk4_linear, Matrix2};
use crate::qfi::XStateIngredients;

/// Global phase carried by the `(C1, D1)` pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PhaseConvention {
    /// `e^{+iJt}`, the phase produced by integrating the mode equations.
    #[default]
    Ode,
    /// `e^{-iJt}` on all four amplitudes, as in the commonly quoted closed
    /// forms. Only the x–y orientation of Bloch trajectories changes (a
    /// rigid z-rotation at rate `2J`).
    SharedPhase,
}

impl PhaseConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Ode => "ode",
            Self::SharedPhase => "paper",
        }
    }
}

impl std::str::FromStr for PhaseConvention {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ode" => Ok(Self::Ode),
            "paper" => Ok(Self::SharedPhase),
            other => Err(domain(format!(
                "unknown phase convention '{other}' (expected ode or paper)"
            ))),
        }
    }
}

/// Physical parameters (in units of `J`, `k_B = 1`) plus numerical controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinBathParams {
    /// Local field `ε` on the central qubit.
    pub epsilon: f64,
    /// Bath XY coupling `J`; sets the energy unit.
    pub coupling_j: f64,
    /// System–bath coupling `J0`.
    pub coupling_j0: f64,
    pub temperature: f64,
    /// Thermal tail tolerance.
    pub trunc_tol: f64,
    /// Hard cap on the number of bath occupations summed.
    pub n_cap: usize,
    pub phase_convention: PhaseConvention,
}

impl Default for SpinBathParams {
    fn default() -> Self {
        Self {
            epsilon: 2.0,
            coupling_j: 1.0,
            coupling_j0: 1.0,
            temperature: 1.0,
            trunc_tol: 1e-12,
            n_cap: 10_000,
            phase_convention: PhaseConvention::Ode,
        }
    }
}

impl SpinBathParams {
    /// `J = 1` parameters with default numerical controls.
    pub fn new(epsilon: f64, coupling_j0: f64, temperature: f64) -> Self {
        Self {
            epsilon,
            coupling_j0,
            temperature,
            ..Self::default()
        }
    }

    pub fn with_phase_convention(mut self, phase: PhaseConvention) -> Self {
        self.phase_convention = phase;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.epsilon,
            self.coupling_j,
            self.coupling_j0,
            self.temperature,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return Err(domain("spin-bath parameters must be finite"));
        }
        if !(self.coupling_j > 0.0) {
            return Err(domain(format!(
                "coupling J must be > 0, got {}",
                self.coupling_j
            )));
        }
        if !(self.temperature > 0.0) {
            return Err(domain(format!(
                "temperature must be > 0, got {}",
                self.temperature
            )));
        }
        if !(self.trunc_tol > 0.0 && self.trunc_tol < 1e-3) {
            return Err(domain(format!(
                "truncation tolerance must lie in (0, 1e-3), got {}",
                self.trunc_tol
            )));
        }
        if self.n_cap < 1 {
            return Err(domain("mode cap must be at least 1"));
        }
        Ok(())
    }

    fn detuning(&self) -> f64 {
        self.coupling_j - 0.5 * self.epsilon
    }
}

/// Normalized Boltzmann weights of the bath occupations `0..=n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermalWeights {
    pub partition: f64,
    pub weights: Vec<f64>,
    pub n_max: usize,
    /// The mode cap was reached before the tail dropped below tolerance.
    pub truncated: bool,
}

impl ThermalWeights {
    pub fn ratio(&self) -> f64 {
        if self.weights.len() > 1 {
            self.weights[1] / self.weights[0]
        } else {
            0.0
        }
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Thermal weights with the tail cut at the first `n` where
/// `(n + 2) w_n < trunc_tol`.
///
/// Every summand in the channel sums is bounded by `(n + 1) w_n`, so the
/// dropped tail is at most `Σ_{k>n} (k + 1) q^k (1 - q)`, which the
/// `(n + 2)` criterion keeps below the tolerance up to a factor
/// `q / (1 - q)²` times a geometric remainder.
pub fn thermal_weights(p: &SpinBathParams) -> Result<ThermalWeights> {
    p.validate()?;
    let q = (-2.0 * p.coupling_j / p.temperature).exp();
    let norm = 1.0 - q;
    let partition = 1.0 / norm;
    let mut weights = Vec::new();
    let mut w = norm;
    let mut n = 0usize;
    let truncated = loop {
        weights.push(w);
        if ((n + 2) as f64) * w < p.trunc_tol {
            break false;
        }
        if n >= p.n_cap {
            break true;
        }
        n += 1;
        w *= q;
    };
    Ok(ThermalWeights {
        partition,
        weights,
        n_max: n,
        truncated,
    })
}

/// Per-occupation amplitudes and Rabi frequencies at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeAmplitudes {
    pub n: usize,
    pub a1: C64,
    pub b1: C64,
    pub c1: C64,
    pub d1: C64,
    /// `Γ = √(J0²(n+1) + (J - ε/2)²)`.
    pub gamma: f64,
    /// `Δ = √(J0² n + (J - ε/2)²)`.
    pub delta: f64,
}

impl ModeAmplitudes {
    /// `|A1|² + (n+1)|B1|²`, equal to one for exact dynamics.
    pub fn upper_norm(&self) -> f64 {
        self.a1.norm_sqr() + (self.n as f64 + 1.0) * self.b1.norm_sqr()
    }

    /// `|D1|² + n|C1|²`, equal to one for exact dynamics.
    pub fn lower_norm(&self) -> f64 {
        self.d1.norm_sqr() + self.n as f64 * self.c1.norm_sqr()
    }
}

fn frequencies(p: &SpinBathParams, n: usize) -> (f64, f64) {
    let j0sq = p.coupling_j0 * p.coupling_j0;
    let det2 = p.detuning() * p.detuning();
    let gamma = (j0sq * (n as f64 + 1.0) + det2).sqrt();
    let delta = (j0sq * n as f64 + det2).sqrt();
    (gamma, delta)
}

/// `sin(ωt)/ω`, continued to `t` at `ω = 0`.
fn sinc_t(omega: f64, t: f64) -> f64 {
    if omega < 1e-14 {
        t
    } else {
        (omega * t).sin() / omega
    }
}

fn cos_t(omega: f64, t: f64) -> f64 {
    if omega < 1e-14 {
        1.0
    } else {
        (omega * t).cos()
    }
}

/// Closed-form solution of the two mode problems for occupation `n`.
pub fn mode_amplitudes_closed(p: &SpinBathParams, n: usize, t: f64) -> ModeAmplitudes {
    let (gamma, delta) = frequencies(p, n);
    let j = p.coupling_j;
    let det = p.detuning();
    let i = C64::new(0.0, 1.0);
    let upper_phase = C64::from_polar(1.0, -j * t);
    let lower_phase = match p.phase_convention {
        PhaseConvention::Ode => C64::from_polar(1.0, j * t),
        PhaseConvention::SharedPhase => upper_phase,
    };
    let sg = sinc_t(gamma, t);
    let sd = sinc_t(delta, t);
    ModeAmplitudes {
        n,
        a1: upper_phase * C64::new(cos_t(gamma, t), det * sg),
        b1: -i * upper_phase * (p.coupling_j0 * sg),
        c1: -i * lower_phase * (p.coupling_j0 * sd),
        d1: lower_phase * C64::new(cos_t(delta, t), -det * sd),
        gamma,
        delta,
    }
}

/// Coefficient matrices `(M_AB, M_CD)` of the mode equations `i v' = M v`.
pub fn mode_generators(p: &SpinBathParams, n: usize) -> (Matrix2, Matrix2) {
    let half_eps = 0.5 * p.epsilon;
    let two_j = 2.0 * p.coupling_j;
    let j0 = p.coupling_j0;
    let nf = n as f64;
    let r = |x: f64| C64::new(x, 0.0);
    let upper = Matrix2::from_rows([
        [r(half_eps), r(j0 * (nf + 1.0))],
        [r(j0), r(-(half_eps - two_j))],
    ]);
    let lower = Matrix2::from_rows([[r(half_eps - two_j), r(j0)], [r(j0 * nf), r(-half_eps)]]);
    (upper, lower)
}

/// Numerical solution of the mode equations with RK4 at step `dt`.
///
/// The `(C1, D1)` pair comes out with the natural `e^{+iJt}` phase whatever
/// `p.phase_convention` says.
pub fn mode_amplitudes_ode(
    p: &SpinBathParams,
    n: usize,
    t: f64,
    dt: f64,
) -> Result<ModeAmplitudes> {
    let (upper, lower) = mode_generators(p, n);
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let [a1, b1] = rk4_linear(&upper, [one, zero], t, dt)?;
    let [c1, d1] = rk4_linear(&lower, [zero, one], t, dt)?;
    let (gamma, delta) = frequencies(p, n);
    Ok(ModeAmplitudes {
        n,
        a1,
        b1,
        c1,
        d1,
        gamma,
        delta,
    })
}

/// How mode amplitudes are obtained when assembling thermal sums.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AmplitudeMethod {
    ClosedForm,
    Ode { dt: f64 },
}

/// Thermal averages from which every observable is built.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalSums {
    /// `κ = Σ w_n A1 D1*`.
    pub kappa: C64,
    pub t33: f64,
    pub r3: f64,
    /// `Σ w_n |A1|²`.
    pub alpha: f64,
    /// `Σ w_n n |C1|²`.
    pub beta: f64,
    /// `Σ w_n` over the retained modes.
    pub weight_total: f64,
}

impl ThermalSums {
    /// Assembles `T` and `r`.
    ///
    /// `T11 = T22 = Re κ`, `T12 = -T21 = Im κ`, `T33`, `r = (0, 0, r3)`.
    pub fn channel(&self) -> AffineQubitChannel {
        let (kr, ki) = (self.kappa.re, self.kappa.im);
        AffineQubitChannel::new(
            [[kr, ki, 0.0], [-ki, kr, 0.0], [0.0, 0.0, self.t33]],
            [0.0, 0.0, self.r3],
        )
    }
}

/// A spin bath with its thermal weights precomputed.
#[derive(Clone, Debug)]
pub struct SpinBath {
    params: SpinBathParams,
    weights: ThermalWeights,
}

impl SpinBath {
    pub fn new(params: SpinBathParams) -> Result<Self> {
        let weights = thermal_weights(&params)?;
        Ok(Self { params, weights })
    }

    pub fn params(&self) -> &SpinBathParams {
        &self.params
    }

    pub fn weights(&self) -> &ThermalWeights {
        &self.weights
    }

    /// Set when the mode cap cut the thermal sum short.
    pub fn truncation_warning(&self) -> Option<String> {
        self.weights.truncated.then(|| {
            let n = self.weights.n_max;
            let tail = self.weights.ratio().powi(n as i32 + 1);
            format!("thermal sum truncated at mode cap n = {n}; neglected weight ≈ {tail:.3e}")
        })
    }

    pub fn thermal_sums(&self, t: f64, method: AmplitudeMethod) -> Result<ThermalSums> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(domain(format!("time must be non-negative, got {t}")));
        }
        let mut sums = ThermalSums {
            kappa: C64::new(0.0, 0.0),
            t33: 0.0,
            r3: 0.0,
            alpha: 0.0,
            beta: 0.0,
            weight_total: 0.0,
        };
        for (n, &w) in self.weights.weights.iter().enumerate() {
            let m = match method {
                AmplitudeMethod::ClosedForm => mode_amplitudes_closed(&self.params, n, t),
                AmplitudeMethod::Ode { dt } => mode_amplitudes_ode(&self.params, n, t, dt)?,
            };
            let nf = n as f64;
            let a2 = m.a1.norm_sqr();
            let upper = a2 - (nf + 1.0) * m.b1.norm_sqr();
            let lower = m.d1.norm_sqr() - nf * m.c1.norm_sqr();
            sums.kappa += m.a1 * m.d1.conj() * w;
            sums.t33 += 0.5 * w * (upper + lower);
            sums.r3 += 0.5 * w * (upper - lower);
            sums.alpha += w * a2;
            sums.beta += w * nf * m.c1.norm_sqr();
            sums.weight_total += w;
        }
        Ok(sums)
    }

    /// `(T(t), r(t))` from the closed-form amplitudes.
    pub fn channel_at(&self, t: f64) -> Result<AffineQubitChannel> {
        Ok(self.thermal_sums(t, AmplitudeMethod::ClosedForm)?.channel())
    }

    pub fn channel_with(&self, t: f64, method: AmplitudeMethod) -> Result<AffineQubitChannel> {
        Ok(self.thermal_sums(t, method)?.channel())
    }

    /// Scalars that assemble the evolved two-qubit X state.
    pub fn qfi_ingredients(&self, t: f64) -> Result<XStateIngredients> {
        let s = self.thermal_sums(t, AmplitudeMethod::ClosedForm)?;
        let xi = s.alpha - s.t33 - s.r3;
        let delta = s.beta + s.t33 - s.r3;
        // Trace preservation per mode makes ξ = Σw - α and δ = Σw - β.
        let xi_dev = (xi - (s.weight_total - s.alpha)).abs();
        let delta_dev = (delta - (s.weight_total - s.beta)).abs();
        if xi_dev > 1e-8 || delta_dev > 1e-8 {
            return Err(consistency(format!(
                "X-state ingredients violate trace identities at t = {t} \
                 (ξ off by {xi_dev:.3e}, δ off by {delta_dev:.3e})"
            )));
        }
        Ok(XStateIngredients {
            alpha: s.alpha,
            beta: s.beta,
            xi,
            delta,
            kappa: s.kappa,
        })
    }
}

impl ChannelFamily for SpinBath {
    fn channel_at(&self, t: f64) -> Result<AffineQubitChannel> {
        SpinBath::channel_at(self, t)
    }
}

/// One-shot convenience wrapper around [`SpinBath::channel_at`].
pub fn channel_at(p: &SpinBathParams, t: f64) -> Result<AffineQubitChannel> {
    SpinBath::new(*p)?.channel_at(t)
}

/// One-shot convenience wrapper around [`SpinBath::qfi_ingredients`].
pub fn qfi_ingredients(p: &SpinBathParams, t: f64) -> Result<XStateIngredients> {
    SpinBath::new(*p)?.qfi_ingredients(t)
}

/// Rate of the rigid z-rotation separating the two phase conventions.
pub fn phase_rotation_rate(p: &SpinBathParams) -> f64 {
    2.0 * p.coupling_j
}
