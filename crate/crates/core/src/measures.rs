//! Bures fidelity and angle, and the Bures-angle non-Markovianity measure.
//!
//! For a channel family `Λ_t` the trajectory states are
//! `ρ_τ = Λ_τ(I/2)`, and the measure is the largest (over `τ`) total
//! increase of `D_B(Λ_t(I/2), Λ_t(ρ_τ))` along `t`. Markovian (divisible)
//! families give zero, since the Bures angle contracts under CPTP maps.

use num_complex::Complex64 as C64;

use crate::bloch::{AffineQubitChannel, BlochVector, ChannelFamily, DensityMatrix2};
use crate::error::{consistency, domain, Result};
use crate::numerics::psd_sqrt;
use crate::spin_bath::SpinBath;
use crate::sweep;

/// Root fidelity `Tr √(√ρ σ √ρ)` by explicit matrix square roots.
pub fn uhlmann_fidelity(rho: &DensityMatrix2, sigma: &DensityMatrix2) -> Result<f64> {
    let root = psd_sqrt(rho.matrix())?;
    let inner = (root * *sigma.matrix() * root).hermitian_part();
    Ok(psd_sqrt(&inner)?.trace().re)
}

/// Qubit shortcut `F² = Tr(ρσ) + 2√(det ρ det σ)`.
pub fn qubit_fidelity(rho: &DensityMatrix2, sigma: &DensityMatrix2) -> f64 {
    let overlap = (*rho.matrix() * *sigma.matrix()).trace().re;
    let dets = (rho.determinant().max(0.0) * sigma.determinant().max(0.0)).sqrt();
    (overlap + 2.0 * dets).max(0.0).sqrt()
}

/// `arccos F`, with `F` clamped to `[0, 1]`.
pub fn bures_angle(rho: &DensityMatrix2, sigma: &DensityMatrix2) -> Result<f64> {
    Ok(uhlmann_fidelity(rho, sigma)?.clamp(0.0, 1.0).acos())
}

/// Bures angle between a pure state `|ψ>` and `σ`: `arccos √<ψ|σ|ψ>`.
pub fn bures_angle_to_pure(psi: &[C64; 2], sigma: &DensityMatrix2) -> f64 {
    let norm = psi[0].norm_sqr() + psi[1].norm_sqr();
    let overlap = sigma.matrix().sandwich(psi, psi).re / norm;
    overlap.clamp(0.0, 1.0).sqrt().acos()
}

/// Bures angle between two qubit states given by Bloch vectors.
pub fn bures_angle_bloch(u: &BlochVector, w: &BlochVector) -> f64 {
    let mixed = ((1.0 - u.norm_sqr()).max(0.0) * (1.0 - w.norm_sqr()).max(0.0)).sqrt();
    let f2 = 0.5 * (1.0 + u.dot(w) + mixed);
    f2.clamp(0.0, 1.0).sqrt().acos()
}

/// Bures angle between the commuting states with Bloch vectors `(0, 0, a)`
/// and `(0, 0, b)`:
/// `arccos ½ Σ_{θ=±1} √((1 + θa)(1 + θb))`.
///
/// Evaluated through `1 - F = ½ Σ (√p - √q)²` so that small angles keep
/// full relative precision.
pub fn bures_angle_diagonal(a: f64, b: f64) -> Result<f64> {
    let prob = |x: f64| -> Result<f64> {
        if x < -1e-9 {
            return Err(consistency(format!(
                "negative population {x:.3e} in Bures angle"
            )));
        }
        Ok(0.5 * x.max(0.0))
    };
    let mut hellinger = 0.0;
    for sign in [1.0, -1.0] {
        let p = prob(1.0 + sign * a)?;
        let q = prob(1.0 + sign * b)?;
        hellinger += (p.sqrt() - q.sqrt()).powi(2);
    }
    // 1 - cos D = 2 sin²(D/2) and 1 - F = hellinger / 2.
    let half = (0.25 * hellinger).sqrt().min(1.0);
    Ok(2.0 * half.asin())
}

/// `D_B(Λ_t(I/2), Λ_t(ρ_τ))` from the channels at `t` and `τ`.
pub fn trajectory_angle(at_t: &AffineQubitChannel, at_tau: &AffineQubitChannel) -> Result<f64> {
    let u = at_t.maximally_mixed_image();
    let w = at_t.apply(&at_tau.maximally_mixed_image());
    let on_axis = |v: &BlochVector| v.x() == 0.0 && v.y() == 0.0;
    if on_axis(&u) && on_axis(&w) {
        bures_angle_diagonal(u.z(), w.z())
    } else {
        Ok(bures_angle_bloch(&u, &w))
    }
}

/// Spin-bath trajectory angle, using `r3(t)`, `T33(t)` and `r3(τ)`.
pub fn bures_angle_trajectory(bath: &SpinBath, t: f64, tau: f64) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(domain(format!(
            "preparation time must be non-negative, got {tau}"
        )));
    }
    let now = bath.channel_at(t)?;
    let prep = bath.channel_at(tau)?;
    let (r3t, t33t, r3tau) = (now.r(3), now.t(3, 3), prep.r(3));
    bures_angle_diagonal(r3t, r3t + t33t * r3tau)
}

/// Bures angle to a fixed trajectory state over a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BuresSeries {
    pub t_grid: Vec<f64>,
    pub angles: Vec<f64>,
    pub tau: f64,
}

pub fn bures_series<F: ChannelFamily>(family: &F, tau: f64, t_grid: &[f64]) -> Result<BuresSeries> {
    if !(tau >= 0.0) {
        return Err(domain(format!(
            "preparation time must be non-negative, got {tau}"
        )));
    }
    let prep = family.channel_at(tau)?;
    let angles = sweep::try_map(t_grid, |&t| trajectory_angle(&family.channel_at(t)?, &prep))?;
    Ok(BuresSeries {
        t_grid: t_grid.to_vec(),
        angles,
        tau,
    })
}

/// `Σ_k max(0, x_{k+1} - x_k)`.
pub fn positive_variation(series: &[f64]) -> f64 {
    series.windows(2).map(|w| (w[1] - w[0]).max(0.0)).sum()
}

/// Outcome of the non-Markovianity scan.
#[derive(Clone, Debug, PartialEq)]
pub struct NmResult {
    pub measure: f64,
    pub argmax_tau: f64,
    /// `(τ, positive variation)` in `τ` order.
    pub per_tau: Vec<(f64, f64)>,
    /// The maximum sits on the last `τ` of the grid.
    pub boundary_argmax: bool,
    /// The last 10% of the time window carries at least 1% of the measure.
    pub tail_warning: bool,
}

/// Grid estimate of the Bures-angle non-Markovianity measure.
///
/// For each `τ` the increase of `D_B` is summed over positive forward
/// differences on `t_grid`; the result is the largest sum, ties resolved in
/// favour of the smallest `τ`.
pub fn nm_measure<F: ChannelFamily>(
    family: &F,
    tau_grid: &[f64],
    t_grid: &[f64],
) -> Result<NmResult> {
    if tau_grid.is_empty() || t_grid.len() < 2 {
        return Err(domain(
            "non-Markovianity scan needs a τ grid and at least two times",
        ));
    }
    if t_grid[0] != 0.0 {
        return Err(domain("time grid must start at 0"));
    }
    let increasing = |g: &[f64]| g.windows(2).all(|w| w[1] > w[0]);
    if !increasing(t_grid) || !increasing(tau_grid) {
        return Err(domain("grids must be strictly increasing"));
    }
    if tau_grid[0] < 0.0 {
        return Err(domain("preparation times must be non-negative"));
    }

    let at_t = sweep::try_map(t_grid, |&t| family.channel_at(t))?;
    let at_tau = sweep::try_map(tau_grid, |&tau| family.channel_at(tau))?;
    let series = sweep::try_map(&at_tau, |prep| {
        at_t.iter()
            .map(|now| trajectory_angle(now, prep))
            .collect::<Result<Vec<f64>>>()
    })?;

    let per_tau: Vec<(f64, f64)> = tau_grid
        .iter()
        .zip(&series)
        .map(|(&tau, s)| (tau, positive_variation(s)))
        .collect();
    let (best, &(argmax_tau, measure)) = per_tau
        .iter()
        .enumerate()
        .fold(
            None,
            |acc: Option<(usize, &(f64, f64))>, (i, cur)| match acc {
                Some((_, b)) if b.1 >= cur.1 => acc,
                _ => Some((i, cur)),
            },
        )
        .expect("non-empty τ grid");

    let t_max = t_grid[t_grid.len() - 1];
    let tail_start = t_grid.iter().position(|&t| t >= 0.9 * t_max).unwrap_or(0);
    let tail = positive_variation(&series[best][tail_start..]);
    Ok(NmResult {
        measure,
        argmax_tau,
        boundary_argmax: per_tau.len() > 1 && best == per_tau.len() - 1,
        tail_warning: measure > 0.0 && tail >= 0.01 * measure,
        per_tau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::IdentityFamily;
    use crate::numerics::Matrix2;
    use crate::reference::AmplitudeDamping;
    use crate::spin_bath::SpinBathParams;
    use crate::sweep::uniform_grid;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn diag(p: f64) -> DensityMatrix2 {
        DensityMatrix2::new(Matrix2::from_real_diagonal([p, 1.0 - p])).unwrap()
    }

    /// Σ √(p_i q_i) for commuting states.
    fn commuting_fidelity(p: f64, q: f64) -> f64 {
        (p * q).sqrt() + ((1.0 - p) * (1.0 - q)).sqrt()
    }

    #[test]
    fn fidelity_basics() {
        let rho = BlochVector::new(0.2, -0.3, 0.5).to_density().unwrap();
        assert!((uhlmann_fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);
        assert!(uhlmann_fidelity(&diag(1.0), &diag(0.0)).unwrap().abs() < 1e-12);
        let f = uhlmann_fidelity(&diag(0.5), &diag(0.8)).unwrap();
        let expected = commuting_fidelity(0.5, 0.8);
        assert!((f - expected).abs() < 1e-14);
        assert!((expected - (0.4f64.sqrt() + 0.1f64.sqrt())).abs() < 1e-15);
        assert!((expected - 0.94868).abs() < 1e-5);
    }

    #[test]
    fn angle_basics() {
        let rho = BlochVector::new(0.2, -0.3, 0.5).to_density().unwrap();
        assert!(bures_angle(&rho, &rho).unwrap() < 1e-6);
        assert!((bures_angle(&diag(1.0), &diag(0.0)).unwrap() - FRAC_PI_2).abs() < 1e-12);
        let d = bures_angle(&diag(0.5), &diag(0.8)).unwrap();
        assert!((d - commuting_fidelity(0.5, 0.8).acos()).abs() < 1e-12);
        assert!((d - 0.3217).abs() < 1e-4);
    }

    #[test]
    fn diagonal_form_examples() {
        assert_eq!(bures_angle_diagonal(0.3, 0.3).unwrap(), 0.0);
        // t = 0, r3(τ) = 0.6
        let d = bures_angle_diagonal(0.0, 0.6).unwrap();
        let naive = (0.5 * (1.6f64.sqrt() + 0.4f64.sqrt())).acos();
        assert!((d - naive).abs() < 1e-12);
        assert!((d - 0.3217).abs() < 1e-4);
        assert!(bures_angle_diagonal(0.0, 1.1).is_err());
        assert!(bures_angle_diagonal(1.0, 1.0 + 1e-13).is_ok());
    }

    #[test]
    fn pure_reference_special_case() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [C64::new(s, 0.0), C64::new(s, 0.0)];
        let sigma = BlochVector::new(0.3, 0.1, -0.4).to_density().unwrap();
        let rho = BlochVector::new(1.0, 0.0, 0.0).to_density().unwrap();
        let a = bures_angle_to_pure(&psi, &sigma);
        let b = bures_angle(&rho, &sigma).unwrap();
        assert!((a - b).abs() < 1e-7);
    }

    #[test]
    fn trajectory_at_zero_tau_vanishes() {
        let bath = SpinBath::new(SpinBathParams::default()).unwrap();
        for k in 0..20 {
            assert_eq!(
                bures_angle_trajectory(&bath, 0.3 * k as f64, 0.0).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn trajectory_matches_density_route() {
        let bath = SpinBath::new(SpinBathParams::default()).unwrap();
        for (t, tau) in [(0.3, 2.0), (1.1, 0.5), (2.5, 3.7), (4.0, 1.0)] {
            let now = bath.channel_at(t).unwrap();
            let prep = bath.channel_at(tau).unwrap();
            let rho = now.maximally_mixed_image().to_density().unwrap();
            let sigma = now
                .apply(&prep.maximally_mixed_image())
                .to_density()
                .unwrap();
            let oracle = bures_angle(&rho, &sigma).unwrap();
            let eq = bures_angle_trajectory(&bath, t, tau).unwrap();
            assert!(
                (oracle - eq).abs() <= 1e-10,
                "t {t} τ {tau}: {oracle} vs {eq}"
            );
            assert!(
                (qubit_fidelity(&rho, &sigma) - uhlmann_fidelity(&rho, &sigma).unwrap()).abs()
                    < 1e-12
            );
        }
    }

    #[test]
    fn identity_family_has_no_memory() {
        let t = uniform_grid(0.0, 2.0, 0.1);
        let r = nm_measure(&IdentityFamily, &[0.5, 1.0], &t).unwrap();
        assert_eq!(r.measure, 0.0);
        assert_eq!(r.argmax_tau, 0.5);
    }

    #[test]
    fn amplitude_damping_is_markovian() {
        let t = uniform_grid(0.0, 6.0, 0.005);
        let tau = uniform_grid(0.25, 4.0, 0.25);
        for gamma in [0.3, 1.0, 2.5] {
            let r = nm_measure(&AmplitudeDamping { gamma }, &tau, &t).unwrap();
            assert_eq!(r.measure, 0.0, "γ = {gamma}");
        }
    }

    #[test]
    fn spin_bath_backflow_is_positive() {
        let bath = SpinBath::new(SpinBathParams::default()).unwrap();
        let t = uniform_grid(0.0, 6.0, 0.005);
        let tau: Vec<f64> = (1..=8).map(|k| 0.5 * k as f64).collect();
        let r = nm_measure(&bath, &tau, &t).unwrap();
        assert!(r.measure > 0.0);
        assert_eq!(r.per_tau.len(), 8);
        assert!(r.per_tau.iter().all(|&(_, m)| m <= r.measure));
        // Halving the step changes the estimate by less than 1%.
        let fine = nm_measure(&bath, &tau, &uniform_grid(0.0, 6.0, 0.0025)).unwrap();
        assert!(fine.measure >= r.measure);
        assert!((fine.measure - r.measure) / r.measure < 0.01);
    }

    #[test]
    fn scan_rejects_bad_grids() {
        let bath = SpinBath::new(SpinBathParams::default()).unwrap();
        assert!(nm_measure(&bath, &[], &[0.0, 1.0]).is_err());
        assert!(nm_measure(&bath, &[1.0], &[0.1, 1.0]).is_err());
        assert!(nm_measure(&bath, &[1.0, 0.5], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn ties_pick_smallest_tau() {
        let t = uniform_grid(0.0, 1.0, 0.1);
        let r = nm_measure(&AmplitudeDamping { gamma: 1.0 }, &[0.5, 1.0, 2.0], &t).unwrap();
        assert_eq!(r.argmax_tau, 0.5);
        assert!(!r.boundary_argmax);
    }

    proptest! {
        #[test]
        fn refinement_never_decreases_variation(
            xs in proptest::collection::vec(-1.0f64..1.0, 2..60),
            stride in 2usize..5,
        ) {
            let coarse: Vec<f64> = xs.iter().step_by(stride).copied().collect();
            prop_assert!(positive_variation(&xs) + 1e-12 >= positive_variation(&coarse));
        }

        #[test]
        fn bloch_fidelity_matches_uhlmann(
            u in proptest::array::uniform3(-0.57f64..0.57),
            w in proptest::array::uniform3(-0.57f64..0.57),
        ) {
            let (u, w) = (BlochVector(u), BlochVector(w));
            let rho = u.to_density().unwrap();
            let sigma = w.to_density().unwrap();
            let f = uhlmann_fidelity(&rho, &sigma).unwrap();
            prop_assert!((f - qubit_fidelity(&rho, &sigma)).abs() < 1e-12);
            prop_assert!((bures_angle_bloch(&u, &w).cos() - f).abs() < 1e-12);
        }
    }
}
