//! Quantum Fisher information of qubit and two-qubit probes.
//!
//! The general routine is the spectral (SLD) formula
//! `F = Σ_{m,k} 2 |<ψ_m|∂ρ|ψ_k>|² / (ϱ_m + ϱ_k)` over pairs with
//! `ϱ_m + ϱ_k > 1e-12`. For a probe `cos(ϑ/2)|1> + sin(ϑ/2)|0>` sent
//! through a qubit channel there is also a Bloch-ball form
//! `F = |∂v|² + (v·∂v)² / (1 - |v|²)`, and at `ϑ = π/2` the closed form
//! `T33² + r3² T33² / (1 - r3² - T11² - T12²)`.
//!
//! The entangled probe `cos(ϑ/2)|11> + sin(ϑ/2)|00>`, with each qubit in its
//! own bath, evolves into an X state whose spectrum is known in closed form.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;

use crate::bloch::{AffineQubitChannel, BlochVector};
use crate::error::{consistency, domain, Error, Result};
use crate::numerics::{
    hermitian_eigendecompose, kron2, ComplexMatrix, EigenSystem, Matrix2, Matrix4,
};
use crate::spin_bath::SpinBath;
use crate::sweep;

/// Pairs of eigenvalues summing below this are outside the support.
pub const SUPPORT_EPS: f64 = 1e-12;

/// Thermal scalars of the evolved two-qubit X state.
///
/// `alpha` and `beta` are the `|1>` populations reached from `|1>` and `|0>`
/// respectively, `xi = 1 - alpha`, `delta = 1 - beta`, and `kappa` is the
/// coherence factor `T11 + i T12`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateIngredients {
    pub alpha: f64,
    pub beta: f64,
    pub xi: f64,
    pub delta: f64,
    pub kappa: C64,
}

impl XStateIngredients {
    /// Ingredients of the identity channel (`t = 0`).
    pub fn initial() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.0,
            xi: 0.0,
            delta: 1.0,
            kappa: C64::new(1.0, 0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if (self.xi - (1.0 - self.alpha)).abs() > 1e-10
            || (self.delta - (1.0 - self.beta)).abs() > 1e-10
        {
            return Err(domain(
                "X-state ingredients must satisfy xi = 1 - alpha, delta = 1 - beta",
            ));
        }
        if self.kappa.norm() > 1.0 + 1e-10 {
            return Err(domain(format!("|kappa| = {} exceeds 1", self.kappa.norm())));
        }
        Ok(())
    }
}

/// Spectral QFI of `rho` along the direction `drho`.
pub fn qfi_spectral<const N: usize>(
    rho: &ComplexMatrix<N>,
    drho: &ComplexMatrix<N>,
) -> Result<f64> {
    let defect = drho.hermiticity_defect();
    if defect > 1e-9 {
        return Err(domain(format!(
            "state derivative is not Hermitian ({defect:.3e})"
        )));
    }
    let tr = drho.trace().norm();
    if tr > 1e-9 {
        return Err(domain(format!(
            "state derivative is not traceless ({tr:.3e})"
        )));
    }
    let eig = hermitian_eigendecompose(rho)?;
    Ok(qfi_in_eigenbasis(&eig, &drho.hermitian_part()))
}

fn qfi_in_eigenbasis<const N: usize>(eig: &EigenSystem<N>, drho: &ComplexMatrix<N>) -> f64 {
    let mut f = 0.0;
    for m in 0..N {
        for k in 0..N {
            let s = eig.values[m] + eig.values[k];
            if s > SUPPORT_EPS {
                f += 2.0 * drho.sandwich(&eig.vectors[m], &eig.vectors[k]).norm_sqr() / s;
            }
        }
    }
    f
}

/// Bloch-ball QFI of a qubit family with vector `v` and derivative `dv`.
///
/// At the pure-state boundary the second term is a 0/0 limit; it is dropped
/// when its numerator is negligible and reported as a singularity otherwise.
pub fn qfi_bloch(v: &BlochVector, dv: &BlochVector) -> Result<f64> {
    let num = v.dot(dv).powi(2);
    let den = 1.0 - v.norm_sqr();
    let base = dv.norm_sqr();
    if den < 1e-12 {
        if num < 1e-12 {
            return Ok(base);
        }
        return Err(Error::Singularity(format!(
            "Bloch QFI denominator {den:.3e} with numerator {num:.3e}"
        )));
    }
    Ok(base + num / den)
}

/// Closed-form single-qubit QFI of the `ϑ = π/2` probe after `ch`.
pub fn qfi_product_closed(ch: &AffineQubitChannel) -> Result<f64> {
    let (t11, t12, t33, r3) = (ch.t(1, 1), ch.t(1, 2), ch.t(3, 3), ch.r(3));
    let num = r3 * r3 * t33 * t33;
    let den = 1.0 - r3 * r3 - t11 * t11 - t12 * t12;
    if den < 1e-12 {
        if num < 1e-12 {
            return Ok(t33 * t33);
        }
        return Err(Error::Singularity(format!(
            "product QFI denominator {den:.3e} with numerator {num:.3e}"
        )));
    }
    Ok(t33 * t33 + num / den)
}

/// Probe Bloch vector `(sin ϑ, 0, cos ϑ)` and its `ϑ`-derivative.
pub fn probe_bloch(theta: f64) -> (BlochVector, BlochVector) {
    let (s, c) = theta.sin_cos();
    (BlochVector::new(s, 0.0, c), BlochVector::new(c, 0.0, -s))
}

/// Single-qubit QFI of the probe `cos(ϑ/2)|1> + sin(ϑ/2)|0>` after `ch`.
///
/// Uses the closed form at exactly `ϑ = π/2` and the Bloch-ball form
/// elsewhere.
pub fn qfi_product(ch: &AffineQubitChannel, theta: f64) -> Result<f64> {
    if theta == FRAC_PI_2 {
        return qfi_product_closed(ch);
    }
    let (v, dv) = probe_bloch(theta);
    qfi_bloch(&ch.apply(&v), &ch.apply_linear(&dv))
}

fn amplitude_weights(theta: f64) -> (f64, f64, f64) {
    let c2 = (0.5 * theta).cos().powi(2);
    let s2 = (0.5 * theta).sin().powi(2);
    (c2, s2, 0.5 * theta.sin())
}

fn x_state(ing: &XStateIngredients, diag_up: f64, diag_down: f64, coherence: f64) -> Matrix4 {
    let f11 = Matrix2::from_real_diagonal([ing.alpha, ing.xi]);
    let f00 = Matrix2::from_real_diagonal([ing.beta, ing.delta]);
    let mut rho = kron2(&f11, &f11).scale_real(diag_up) + kron2(&f00, &f00).scale_real(diag_down);
    let k2 = ing.kappa * ing.kappa * coherence;
    rho[(0, 3)] += k2;
    rho[(3, 0)] += k2.conj();
    rho
}

/// Evolved density matrix of `cos(ϑ/2)|11> + sin(ϑ/2)|00>` in the basis
/// `{|11>, |10>, |01>, |00>}`.
pub fn entangled_state(ing: &XStateIngredients, theta: f64) -> Result<Matrix4> {
    let (c2, s2, cs) = amplitude_weights(theta);
    let rho = x_state(ing, c2, s2, cs);
    let values = closed_form_spectrum(ing, theta);
    if let Some(bad) = values.iter().find(|&&v| v < -1e-9) {
        return Err(consistency(format!(
            "X state has negative eigenvalue {bad:.3e}"
        )));
    }
    Ok(rho)
}

/// `∂ρ/∂ϑ`; the ingredients do not depend on `ϑ`.
pub fn entangled_state_derivative(ing: &XStateIngredients, theta: f64) -> Matrix4 {
    let half_sin = 0.5 * theta.sin();
    x_state(ing, -half_sin, half_sin, 0.5 * theta.cos())
}

struct XBlock {
    upper: f64,
    lower: f64,
    coherence: C64,
    middle: f64,
}

fn x_block(ing: &XStateIngredients, theta: f64) -> XBlock {
    let (c2, s2, cs) = amplitude_weights(theta);
    XBlock {
        upper: c2 * ing.alpha * ing.alpha + s2 * ing.beta * ing.beta,
        lower: c2 * ing.xi * ing.xi + s2 * ing.delta * ing.delta,
        coherence: ing.kappa * ing.kappa * cs,
        middle: c2 * ing.alpha * ing.xi + s2 * ing.beta * ing.delta,
    }
}

fn block_roots(b: &XBlock) -> (f64, f64) {
    let mean = 0.5 * (b.upper + b.lower);
    let half = (0.25 * (b.upper - b.lower).powi(2) + b.coherence.norm_sqr()).sqrt();
    (mean - half, mean + half)
}

/// Closed-form eigenvalues `(ϱ1, ϱ2, ϱ3, ϱ4)`, unordered: the degenerate
/// `|10>`, `|01>` pair first, then the two roots of the `{|11>, |00>}` block.
pub fn closed_form_spectrum(ing: &XStateIngredients, theta: f64) -> [f64; 4] {
    let b = x_block(ing, theta);
    let (lo, hi) = block_roots(&b);
    [b.middle, b.middle, hi, lo]
}

/// Closed-form eigensystem of the evolved entangled probe.
pub fn entangled_eigensystem(ing: &XStateIngredients, theta: f64) -> Result<EigenSystem<4>> {
    ing.validate()?;
    let b = x_block(ing, theta);
    let (lo, hi) = block_roots(&b);
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let mut pairs = vec![
        (b.middle, [zero, one, zero, zero]),
        (b.middle, [zero, zero, one, zero]),
    ];

    if (hi - b.upper).abs().max((hi - b.lower).abs()) >= 1e-14 {
        // Of the two equivalent forms of the top eigenvector pick the one
        // without cancellation; the other root gets the orthogonal complement.
        let from_upper = (b.coherence, C64::new(hi - b.upper, 0.0));
        let from_lower = (C64::new(hi - b.lower, 0.0), b.coherence.conj());
        let norm = |(x, y): (C64, C64)| (x.norm_sqr() + y.norm_sqr()).sqrt();
        let pick = if norm(from_upper) >= norm(from_lower) {
            from_upper
        } else {
            from_lower
        };
        let n = norm(pick);
        let (x, y) = (pick.0 / n, pick.1 / n);
        pairs.push((hi, [x, zero, zero, y]));
        pairs.push((lo, [-y.conj(), zero, zero, x.conj()]));
    } else {
        // Degenerate scalar block: any orthonormal pair will do.
        pairs.push((hi, [one, zero, zero, zero]));
        pairs.push((lo, [zero, zero, zero, one]));
    }
    Ok(EigenSystem::from_pairs(pairs))
}

/// QFI of the entangled probe with respect to `ϑ` after time `t`.
pub fn qfi_entangled(bath: &SpinBath, t: f64, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let ing = bath.qfi_ingredients(t)?;
    qfi_entangled_from(&ing, theta)
}

/// QFI of the entangled probe for given ingredients.
pub fn qfi_entangled_from(ing: &XStateIngredients, theta: f64) -> Result<f64> {
    let rho = entangled_state(ing, theta)?;
    let drho = entangled_state_derivative(ing, theta);
    qfi_spectral(&rho, &drho)
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..std::f64::consts::PI).contains(&theta) {
        return Err(domain(format!(
            "amplitude parameter must lie in [0, π), got {theta}"
        )));
    }
    Ok(())
}

/// QFI of the entangled and product probes over a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct QfiSeries {
    pub t_grid: Vec<f64>,
    pub f_entangled: Vec<f64>,
    /// Single-qubit product-probe QFI.
    pub f_product: Vec<f64>,
}

pub fn qfi_time_series(bath: &SpinBath, theta: f64, t_grid: &[f64]) -> Result<QfiSeries> {
    check_theta(theta)?;
    let rows = sweep::try_map(t_grid, |&t| -> Result<(f64, f64)> {
        let ing = bath.qfi_ingredients(t)?;
        let fe = qfi_entangled_from(&ing, theta)?;
        let fp = qfi_product(&bath.channel_at(t)?, theta)?;
        Ok((fe, fp))
    })?;
    let (f_entangled, f_product) = rows.into_iter().unzip();
    Ok(QfiSeries {
        t_grid: t_grid.to_vec(),
        f_entangled,
        f_product,
    })
}

/// Numerical time derivative: central differences inside, one-sided at the
/// ends.
pub fn derivative_series(values: &[f64], grid: &[f64]) -> Result<Vec<f64>> {
    if values.len() != grid.len() {
        return Err(domain("series and grid lengths differ"));
    }
    if grid.len() < 3 {
        return Err(domain("derivative needs at least three grid points"));
    }
    if !grid.windows(2).all(|w| w[1] > w[0]) {
        return Err(domain("grid must be strictly increasing"));
    }
    let n = grid.len();
    let mut out = Vec::with_capacity(n);
    out.push((values[1] - values[0]) / (grid[1] - grid[0]));
    for k in 1..n - 1 {
        out.push((values[k + 1] - values[k - 1]) / (grid[k + 1] - grid[k - 1]));
    }
    out.push((values[n - 1] - values[n - 2]) / (grid[n - 1] - grid[n - 2]));
    Ok(out)
}
