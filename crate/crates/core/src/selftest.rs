//! Oracle cross-checks run by `spinbath selftest`.
//!
//! Each check compares a closed form against an independent numerical route
//! (RK4 mode integration, explicit matrix square roots, a generic Hermitian
//! eigensolver) or asserts a structural property, and reports one line.

use std::fmt;

use crate::bloch::orthogonal_probes;
use crate::error::Result;
use crate::measures::{bures_angle, bures_angle_trajectory, bures_series, nm_measure};
use crate::numerics::hermitian_eigendecompose;
use crate::qfi::{
    closed_form_spectrum, entangled_state, probe_bloch, qfi_product_closed, qfi_spectral,
};
use crate::reference::AmplitudeDamping;
use crate::spin_bath::{
    mode_amplitudes_closed, mode_amplitudes_ode, AmplitudeMethod, PhaseConvention, SpinBath,
    SpinBathParams,
};
use crate::sweep::uniform_grid;

/// Outcome of one invariant.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn from_result(name: &'static str, outcome: Result<(bool, String)>) -> Self {
        match outcome {
            Ok((passed, detail)) => Self {
                name,
                passed,
                detail,
            },
            Err(e) => Self {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// `(ε, T)` of the standard figures, all at `J0 = J`.
pub const STANDARD_REGIMES: [(f64, f64); 3] = [(2.0, 1.0), (6.0, 1.0), (2.0, 6.0)];

fn bath(eps: f64, temp: f64) -> Result<SpinBath> {
    SpinBath::new(SpinBathParams::new(eps, 1.0, temp))
}

/// Low-discrepancy samples in `(0, 1)`.
fn golden(k: usize) -> f64 {
    const PHI: f64 = 0.618_033_988_749_894_9;
    ((k as f64 + 0.5) * PHI).fract()
}

pub fn identity_at_zero() -> Check {
    let outcome = (|| {
        let mut worst: f64 = 0.0;
        for (eps, temp) in STANDARD_REGIMES {
            for phase in [PhaseConvention::Ode, PhaseConvention::SharedPhase] {
                let p = SpinBathParams::new(eps, 1.0, temp).with_phase_convention(phase);
                let ch = SpinBath::new(p)?.channel_at(0.0)?;
                worst = worst.max(ch.distance_from_identity());
            }
        }
        Ok((worst <= 1e-11, format!("max deviation {worst:.2e}")))
    })();
    Check::from_result("identity_at_t0", outcome)
}

pub fn closed_form_vs_ode() -> Check {
    const DT: f64 = 1e-4;
    let outcome = (|| {
        let mut amp: f64 = 0.0;
        let mut conservation: f64 = 0.0;
        let mut entries: f64 = 0.0;
        for eps in [2.0, 6.0] {
            let p = SpinBathParams::new(eps, 1.0, 1.0);
            let b = SpinBath::new(p)?;
            for t in [0.5, 1.0, 3.0] {
                for n in 0..=5 {
                    let c = mode_amplitudes_closed(&p, n, t);
                    let o = mode_amplitudes_ode(&p, n, t, DT)?;
                    for (x, y) in [(c.a1, o.a1), (c.b1, o.b1), (c.c1, o.c1), (c.d1, o.d1)] {
                        amp = amp.max((x.norm() - y.norm()).abs());
                    }
                    for m in [c, o] {
                        conservation = conservation
                            .max((m.upper_norm() - 1.0).abs())
                            .max((m.lower_norm() - 1.0).abs());
                    }
                }
                let c = b.channel_with(t, AmplitudeMethod::ClosedForm)?;
                let o = b.channel_with(t, AmplitudeMethod::Ode { dt: DT })?;
                let rad = |ch: &crate::AffineQubitChannel| ch.t(1, 1).powi(2) + ch.t(1, 2).powi(2);
                entries = entries
                    .max((c.t(3, 3) - o.t(3, 3)).abs())
                    .max((c.r(3) - o.r(3)).abs())
                    .max((rad(&c) - rad(&o)).abs());
            }
        }
        let ok = amp <= 1e-7 && conservation <= 1e-7 && entries <= 1e-7;
        Ok((
            ok,
            format!("amplitudes {amp:.2e}, conservation {conservation:.2e}, channel entries {entries:.2e}"),
        ))
    })();
    Check::from_result("closed_form_vs_ode", outcome)
}

/// Diagonal Bures formula against explicit Uhlmann fidelity, 200 `(t, τ)`.
pub fn bures_vs_uhlmann() -> Check {
    let outcome = (|| {
        let b = bath(2.0, 1.0)?;
        let mut worst: f64 = 0.0;
        for k in 0..200 {
            let t = 3.0 * golden(k);
            let tau = 4.0 * golden(k + 1000);
            let closed = bures_angle_trajectory(&b, t, tau)?;
            let now = b.channel_at(t)?;
            let prep = b.channel_at(tau)?;
            let rho = now.maximally_mixed_image().to_density()?;
            let sigma = now.apply(&prep.maximally_mixed_image()).to_density()?;
            worst = worst.max((closed - bures_angle(&rho, &sigma)?).abs());
        }
        Ok((
            worst <= 1e-10,
            format!("max deviation {worst:.2e} over 200 pairs"),
        ))
    })();
    Check::from_result("bures_closed_vs_uhlmann", outcome)
}

/// Closed-form product-probe QFI against the spectral formula.
pub fn product_qfi_vs_spectral() -> Check {
    let outcome = (|| {
        let (v0, dv0) = probe_bloch(std::f64::consts::FRAC_PI_2);
        let mut worst: f64 = 0.0;
        let mut at_zero: f64 = 0.0;
        for (eps, temp) in [(6.0, 1.0), (2.0, 1.0), (2.0, 6.0)] {
            let b = bath(eps, temp)?;
            for k in 0..100 {
                let t = 3.0 * golden(k);
                let ch = b.channel_at(t)?;
                let closed = qfi_product_closed(&ch)?;
                let rho = ch.apply(&v0).to_density()?;
                let drho = ch.apply_linear(&dv0).to_traceless_operator();
                let spectral = qfi_spectral(rho.matrix(), &drho)?;
                worst = worst.max((closed - spectral).abs() / spectral.abs().max(1e-300));
            }
            let ch = b.channel_at(0.0)?;
            at_zero = at_zero.max((qfi_product_closed(&ch)? - ch.t(3, 3).powi(2)).abs());
        }
        let ok = worst <= 1e-8 && at_zero <= 1e-12;
        Ok((
            ok,
            format!("max relative error {worst:.2e}, t=0 limit error {at_zero:.2e}"),
        ))
    })();
    Check::from_result("product_qfi_closed_vs_spectral", outcome)
}

/// Closed-form X-state spectrum against the generic 4×4 eigensolver.
pub fn x_state_spectrum() -> Check {
    let outcome = (|| {
        let mut dev: f64 = 0.0;
        let mut range: f64 = 0.0;
        let mut trace: f64 = 0.0;
        for (eps, temp) in [(6.0, 1.0), (2.0, 1.0), (2.0, 6.0)] {
            let b = bath(eps, temp)?;
            for k in 0..60 {
                let t = 3.0 * golden(k);
                let theta = std::f64::consts::PI * golden(k + 500);
                let ing = b.qfi_ingredients(t)?;
                let mut closed = closed_form_spectrum(&ing, theta);
                closed.sort_by(f64::total_cmp);
                let numeric = hermitian_eigendecompose(&entangled_state(&ing, theta)?)?.values;
                for (c, n) in closed.iter().zip(&numeric) {
                    dev = dev.max((c - n).abs());
                    range = range.max(-c).max(c - 1.0);
                }
                trace = trace.max((closed.iter().sum::<f64>() - 1.0).abs());
            }
        }
        let ok = dev <= 1e-10 && range <= 1e-10 && trace <= 1e-10;
        Ok((
            ok,
            format!("max deviation {dev:.2e}, range excess {range:.2e}, trace error {trace:.2e}"),
        ))
    })();
    Check::from_result("x_state_spectrum", outcome)
}

pub fn markovian_baseline() -> Check {
    let outcome = (|| {
        let t_grid = uniform_grid(0.0, 6.0, 0.005);
        let tau_grid = uniform_grid(0.25, 4.0, 0.25);
        let mut worst: f64 = 0.0;
        let mut rises = 0usize;
        for gamma in [0.3, 1.0, 2.5] {
            let ad = AmplitudeDamping { gamma };
            worst = worst.max(nm_measure(&ad, &tau_grid, &t_grid)?.measure);
            let series = bures_series(&ad, 2.0, &t_grid)?;
            rises += series.angles.windows(2).filter(|w| w[1] > w[0]).count();
        }
        Ok((
            worst == 0.0 && rises == 0,
            format!("max measure {worst:e}, rising steps {rises}"),
        ))
    })();
    Check::from_result("markovian_baseline", outcome)
}

/// Measure at the three standard regimes, `(2,1) > (6,1)` and `(2,1) > (2,6)`.
pub fn non_markovian_revivals() -> Check {
    let outcome = (|| {
        let t_grid = uniform_grid(0.0, 6.0, 0.005);
        let tau_grid = uniform_grid(0.25, 4.0, 0.25);
        let mut m = [0.0; 3];
        for (slot, (eps, temp)) in m.iter_mut().zip(STANDARD_REGIMES) {
            *slot = nm_measure(&bath(eps, temp)?, &tau_grid, &t_grid)?.measure;
        }
        let ok = m[0] > 0.0 && m[0] > m[1] && m[0] > m[2];
        Ok((
            ok,
            format!(
                "N(2,1) = {:.4}, N(6,1) = {:.4}, N(2,6) = {:.4}",
                m[0], m[1], m[2]
            ),
        ))
    })();
    Check::from_result("non_markovian_revivals", outcome)
}

/// Probe images satisfy `v1 + v2 = 2r` and the angle revives.
pub fn probe_revival() -> Check {
    let outcome = (|| {
        let b = bath(2.0, 1.0)?;
        let (p1, p2) = orthogonal_probes();
        let grid = uniform_grid(0.0, 3.0, 0.005);
        let mut sum_err: f64 = 0.0;
        let mut angles = Vec::with_capacity(grid.len());
        for &t in &grid {
            let ch = b.channel_at(t)?;
            let (v1, v2) = (ch.apply(&p1), ch.apply(&p2));
            let s = v1 + v2;
            for i in 0..3 {
                sum_err = sum_err.max((s.0[i] - 2.0 * ch.inhomogeneity[i]).abs());
            }
            angles.push(v1.angle_to(&v2).unwrap_or(f64::NAN));
        }
        let rise = revival_after_minimum(&angles);
        Ok((
            sum_err == 0.0 && rise > 1e-3,
            format!("v1+v2-2r max {sum_err:e}, largest rise after a local minimum {rise:.3e} rad"),
        ))
    })();
    Check::from_result("probe_angle_revival", outcome)
}

/// Largest increase following an interior local minimum (0 if none).
pub fn revival_after_minimum(series: &[f64]) -> f64 {
    let mut best: f64 = 0.0;
    for k in 1..series.len().saturating_sub(1) {
        if series[k] < series[k - 1] && series[k] <= series[k + 1] {
            let peak = series[k..]
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            best = best.max(peak - series[k]);
        }
    }
    best
}

pub fn run_all() -> Vec<Check> {
    vec![
        identity_at_zero(),
        closed_form_vs_ode(),
        bures_vs_uhlmann(),
        product_qfi_vs_spectral(),
        x_state_spectrum(),
        markovian_baseline(),
        non_markovian_revivals(),
        probe_revival(),
    ]
}
