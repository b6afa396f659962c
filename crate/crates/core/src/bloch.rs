//! Affine Bloch-ball representation of qubit states and channels.
//!
//! Conventions: basis order `{|1>, |0>}` with `σ_z = |1><1| - |0><0|`,
//! Bloch components `v_μ = Tr[σ_μ ρ]`, so `ρ = (I + v·σ)/2`. A channel acts
//! as `v ↦ T v + r` with `T_μν = ½Tr[σ_μ Λ(σ_ν)]` and `r_μ = ½Tr[σ_μ Λ(I)]`.

use std::ops::{Add, Sub};

use num_complex::Complex64 as C64;

use crate::error::{domain, Result};
use crate::numerics::Matrix2;

/// Pauli matrices `(σ_x, σ_y, σ_z)` in the `{|1>, |0>}` basis.
pub fn pauli() -> [Matrix2; 3] {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        Matrix2::from_rows([[z, one], [one, z]]),
        Matrix2::from_rows([[z, -i], [i, z]]),
        Matrix2::from_rows([[one, z], [z, -one]]),
    ]
}

/// Real Bloch (coherent) vector of a qubit.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub const ORIGIN: Self = Self([0.0; 3]);

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self([x, y, z])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|c| c * s))
    }

    /// Angle between two vectors, `None` when either is (numerically) zero.
    pub fn angle_to(&self, other: &Self) -> Option<f64> {
        let (a, b) = (self.norm(), other.norm());
        if a < 1e-12 || b < 1e-12 {
            return None;
        }
        Some((self.dot(other) / (a * b)).clamp(-1.0, 1.0).acos())
    }

    /// `ρ = (I + v·σ)/2`. Fails if the vector lies outside the Bloch ball.
    pub fn to_density(&self) -> Result<DensityMatrix2> {
        let n = self.norm();
        if n > 1.0 + 1e-6 {
            return Err(domain(format!("Bloch vector norm {n} exceeds 1")));
        }
        Ok(DensityMatrix2(self.to_operator()))
    }

    /// `(I + v·σ)/2` without the ball check.
    fn to_operator(self) -> Matrix2 {
        Matrix2::identity().scale_real(0.5) + self.to_traceless_operator()
    }

    /// `(v·σ)/2`.
    pub fn to_traceless_operator(&self) -> Matrix2 {
        let [sx, sy, sz] = pauli();
        (sx.scale_real(self.0[0]) + sy.scale_real(self.0[1]) + sz.scale_real(self.0[2]))
            .scale_real(0.5)
    }
}

impl Add for BlochVector {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl Sub for BlochVector {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
        ])
    }
}

/// A validated qubit density matrix (Hermitian, unit trace, PSD).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix2(Matrix2);

impl DensityMatrix2 {
    pub fn new(m: Matrix2) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if defect > 1e-10 {
            return Err(domain(format!(
                "density matrix not Hermitian ({defect:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr - 1.0).norm() > 1e-12 {
            return Err(domain(format!("density matrix trace {tr} != 1")));
        }
        let rho = Self(m.hermitian_part());
        let v = rho.to_bloch();
        // The eigenvalues are (1 ± |v|)/2.
        if v.norm() > 1.0 + 2e-10 {
            return Err(domain("density matrix has a negative eigenvalue"));
        }
        Ok(rho)
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }

    pub fn to_bloch(&self) -> BlochVector {
        let m = &self.0;
        let off = m[(0, 1)];
        BlochVector([2.0 * off.re, -2.0 * off.im, (m[(0, 0)] - m[(1, 1)]).re])
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re
    }
}

/// Affine qubit map `v ↦ T v + r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineQubitChannel {
    pub transfer: [[f64; 3]; 3],
    pub inhomogeneity: [f64; 3],
}

impl AffineQubitChannel {
    pub fn new(transfer: [[f64; 3]; 3], inhomogeneity: [f64; 3]) -> Self {
        Self {
            transfer,
            inhomogeneity,
        }
    }

    pub fn identity() -> Self {
        Self::new(
            [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            [0.0; 3],
        )
    }

    /// `T v + r`.
    pub fn apply(&self, v: &BlochVector) -> BlochVector {
        let mut out = self.inhomogeneity;
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..3 {
                *o += self.transfer[i][j] * v.0[j];
            }
        }
        BlochVector(out)
    }

    /// Linear part only: `T v`. This is how operator-valued derivatives
    /// `∂v` propagate.
    pub fn apply_linear(&self, v: &BlochVector) -> BlochVector {
        self.apply(v) - self.maximally_mixed_image()
    }

    /// Bloch vector of `Λ(I/2)`, i.e. `r`.
    pub fn maximally_mixed_image(&self) -> BlochVector {
        BlochVector(self.inhomogeneity)
    }

    pub fn is_unital(&self) -> bool {
        self.inhomogeneity.iter().all(|r| r.abs() <= 1e-12)
    }

    /// `(i, j)` entry of `T` in one-based physics indexing.
    pub fn t(&self, i: usize, j: usize) -> f64 {
        self.transfer[i - 1][j - 1]
    }

    /// `i`-th component of `r`, one-based.
    pub fn r(&self, i: usize) -> f64 {
        self.inhomogeneity[i - 1]
    }

    /// Largest entrywise distance of `(T, r)` from the identity channel.
    pub fn distance_from_identity(&self) -> f64 {
        let id = Self::identity();
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.transfer[i][j] - id.transfer[i][j]).abs());
            }
            worst = worst.max(self.inhomogeneity[i].abs());
        }
        worst
    }
}

/// A time-indexed family of qubit channels `t ↦ Λ_t`.
pub trait ChannelFamily: Sync {
    fn channel_at(&self, t: f64) -> Result<AffineQubitChannel>;
}

/// `Λ_t = id` for every `t`.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityFamily;

impl ChannelFamily for IdentityFamily {
    fn channel_at(&self, _t: f64) -> Result<AffineQubitChannel> {
        Ok(AffineQubitChannel::identity())
    }
}

/// The two orthogonal probes `(|1> ± |0>)/√2`, Bloch vectors `±x̂`.
pub fn orthogonal_probes() -> (BlochVector, BlochVector) {
    (
        BlochVector::new(1.0, 0.0, 0.0),
        BlochVector::new(-1.0, 0.0, 0.0),
    )
}
