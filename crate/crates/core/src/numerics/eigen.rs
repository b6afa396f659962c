use std::cmp::Ordering;

use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use super::{HERMITIAN_TOL, PSD_REJECT};
use crate::error::{domain, Result};

const JACOBI_MAX_SWEEPS: usize = 64;
const TIE_TOL: f64 = 1e-12;

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are ascending and `vectors[k]` pairs with `values[k]`. Each
/// eigenvector has its first non-negligible component real and positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenSystem<const N: usize> {
    pub values: [f64; N],
    pub vectors: [[C64; N]; N],
}

impl<const N: usize> EigenSystem<N> {
    /// Builds a system from unordered eigenpairs, applying the canonical
    /// phase and ordering rules.
    pub fn from_pairs(mut pairs: Vec<(f64, [C64; N])>) -> Self {
        assert_eq!(pairs.len(), N, "expected {N} eigenpairs");
        for (_, v) in pairs.iter_mut() {
            fix_phase(v);
        }
        pairs.sort_by(compare_pairs);
        let mut values = [0.0; N];
        let mut vectors = [[C64::new(0.0, 0.0); N]; N];
        for (k, (val, vec)) in pairs.into_iter().enumerate() {
            values[k] = val;
            vectors[k] = vec;
        }
        Self { values, vectors }
    }

    /// `Σ_k λ_k |v_k><v_k|`.
    pub fn reconstruct(&self) -> ComplexMatrix<N> {
        self.map_values(|x| x)
    }

    /// `Σ_k f(λ_k) |v_k><v_k|`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix<N> {
        let mut m = ComplexMatrix::zeros();
        for k in 0..N {
            m = m + ComplexMatrix::outer(&self.vectors[k]).scale_real(f(self.values[k]));
        }
        m
    }

    /// Largest deviation of the Gram matrix of the eigenvectors from identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for m in 0..N {
            for k in 0..N {
                let ip: C64 = (0..N)
                    .map(|i| self.vectors[m][i].conj() * self.vectors[k][i])
                    .sum();
                let target = if m == k { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        worst
    }
}

fn compare_pairs<const N: usize>(a: &(f64, [C64; N]), b: &(f64, [C64; N])) -> Ordering {
    if (a.0 - b.0).abs() > TIE_TOL {
        return a.0.total_cmp(&b.0);
    }
    for i in 0..N {
        match a.1[i].re.total_cmp(&b.1[i].re) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

fn fix_phase<const N: usize>(v: &mut [C64; N]) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(lead) = v.iter().copied().find(|z| z.norm() > 1e-10 * scale) {
        let phase = lead.conj() / lead.norm();
        v.iter_mut().for_each(|z| *z *= phase);
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as `(m + m†)/2` before solving. Qubit matrices
/// use the closed-form quadratic roots; larger sizes use cyclic complex
/// Jacobi rotations.
pub fn hermitian_eigendecompose<const N: usize>(m: &ComplexMatrix<N>) -> Result<EigenSystem<N>> {
    let defect = m.hermiticity_defect();
    if !(defect <= HERMITIAN_TOL) {
        return Err(domain(format!(
            "matrix is not Hermitian (defect {defect:.3e})"
        )));
    }
    let h = m.hermitian_part();
    let pairs = if N == 2 {
        closed_form_2x2(&h)
    } else {
        jacobi(&h)
    };
    Ok(EigenSystem::from_pairs(pairs))
}

fn basis<const N: usize>(k: usize) -> [C64; N] {
    let mut v = [C64::new(0.0, 0.0); N];
    v[k] = C64::new(1.0, 0.0);
    v
}

fn closed_form_2x2<const N: usize>(h: &ComplexMatrix<N>) -> Vec<(f64, [C64; N])> {
    let a = h[(0, 0)].re;
    let d = h[(1, 1)].re;
    let b = h[(0, 1)];
    let mean = 0.5 * (a + d);
    let half = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    if b.norm() <= f64::MIN_POSITIVE || half == 0.0 {
        return vec![(a, basis(0)), (d, basis(1))];
    }
    [mean - half, mean + half]
        .into_iter()
        .map(|lambda| {
            // Two null vectors of (h - λ); keep the better conditioned one.
            let u = [b, C64::new(lambda - a, 0.0)];
            let w = [C64::new(lambda - d, 0.0), b.conj()];
            let nu = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
            let nw = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
            let (v, n) = if nu >= nw { (u, nu) } else { (w, nw) };
            let mut out = [C64::new(0.0, 0.0); N];
            out[0] = v[0] / n;
            out[1] = v[1] / n;
            (lambda, out)
        })
        .collect()
}

fn off_diagonal_norm<const N: usize>(a: &ComplexMatrix<N>) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi<const N: usize>(h: &ComplexMatrix<N>) -> Vec<(f64, [C64; N])> {
    let mut a = *h;
    let mut v = ComplexMatrix::<N>::identity();
    let scale = h.max_abs().max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= 1e-15 * scale {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // Phase rotation makes a[p][q] real positive, then a real
                // Givens rotation annihilates it.
                let phase = apq.conj() / mag;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let mut g = ComplexMatrix::<N>::identity();
                g[(p, p)] = C64::new(c, 0.0);
                g[(p, q)] = C64::new(s, 0.0);
                g[(q, p)] = -phase * s;
                g[(q, q)] = phase * c;

                a = g.adjoint() * a * g;
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                v = v * g;
            }
        }
    }

    (0..N)
        .map(|k| {
            let mut col = [C64::new(0.0, 0.0); N];
            for (i, c) in col.iter_mut().enumerate() {
                *c = v[(i, k)];
            }
            (a[(k, k)].re, col)
        })
        .collect()
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Small negative eigenvalues from round-off are clamped to zero; anything
/// below `-1e-6` is rejected.
pub fn psd_sqrt<const N: usize>(m: &ComplexMatrix<N>) -> Result<ComplexMatrix<N>> {
    let eig = hermitian_eigendecompose(m)?;
    let min = eig.values[0];
    if min < -PSD_REJECT {
        return Err(domain(format!(
            "matrix is not positive semidefinite (min eigenvalue {min:.3e})"
        )));
    }
    Ok(eig.map_values(|x| x.max(0.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{Matrix2, Matrix4};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian<const N: usize>(rng: &mut ChaCha8Rng) -> ComplexMatrix<N> {
        let mut m = ComplexMatrix::<N>::zeros();
        for i in 0..N {
            for j in 0..N {
                m[(i, j)] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        m.hermitian_part()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let eig = hermitian_eigendecompose(&Matrix2::identity()).unwrap();
        assert_eq!(eig.values, [1.0, 1.0]);
        let eig = hermitian_eigendecompose(&Matrix4::identity()).unwrap();
        assert_eq!(eig.values, [1.0; 4]);
    }

    #[test]
    fn diagonal_returns_standard_basis() {
        let eig = hermitian_eigendecompose(&Matrix2::from_real_diagonal([0.8, 0.2])).unwrap();
        assert_eq!(eig.values, [0.2, 0.8]);
        assert_eq!(eig.vectors[0], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        assert_eq!(eig.vectors[1], [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    }

    #[test]
    fn degenerate_ties_follow_lexicographic_rule() {
        let eig =
            hermitian_eigendecompose(&Matrix4::from_real_diagonal([0.5, 0.0, 0.0, 0.5])).unwrap();
        // Equal eigenvalues are ordered by the real parts of the components.
        assert_eq!(eig.vectors[0][2].re, 1.0);
        assert_eq!(eig.vectors[1][1].re, 1.0);
        assert_eq!(eig.vectors[2][3].re, 1.0);
        assert_eq!(eig.vectors[3][0].re, 1.0);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = Matrix2::identity();
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(hermitian_eigendecompose(&m).is_err());
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let m4: Matrix4 = random_hermitian(&mut rng);
            let eig = hermitian_eigendecompose(&m4).unwrap();
            assert!(eig.reconstruct().max_abs_diff(&m4) <= 1e-10);
            assert!(eig.orthonormality_defect() <= 1e-10);
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));

            let m2: Matrix2 = random_hermitian(&mut rng);
            let eig = hermitian_eigendecompose(&m2).unwrap();
            assert!(eig.reconstruct().max_abs_diff(&m2) <= 1e-12);
            assert!(eig.orthonormality_defect() <= 1e-12);
        }
    }

    #[test]
    fn sqrt_of_diagonal() {
        let r = psd_sqrt(&Matrix2::from_real_diagonal([4.0, 9.0])).unwrap();
        assert!(r.max_abs_diff(&Matrix2::from_real_diagonal([2.0, 3.0])) < 1e-14);
        let r = psd_sqrt(&Matrix4::identity()).unwrap();
        assert!(r.max_abs_diff(&Matrix4::identity()) < 1e-14);
    }

    #[test]
    fn sqrt_of_tilted_qubit_state() {
        // ½(I + 0.6 σ_z) rotated by a Hadamard-like unitary.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = Matrix2::from_rows([
            [C64::new(s, 0.0), C64::new(0.0, s)],
            [C64::new(0.0, s), C64::new(s, 0.0)],
        ]);
        let rho = u * Matrix2::from_real_diagonal([0.8, 0.2]) * u.adjoint();
        let r = psd_sqrt(&rho).unwrap();
        assert!((r * r).max_abs_diff(&rho) <= 1e-9);
        let eig = hermitian_eigendecompose(&r).unwrap();
        assert!((eig.values[0] - 0.2f64.sqrt()).abs() < 1e-12);
        assert!((eig.values[1] - 0.8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sqrt_clamps_round_off_and_rejects_negative() {
        let r = psd_sqrt(&Matrix2::from_real_diagonal([1.0, -1e-13])).unwrap();
        assert_eq!(r[(1, 1)].re, 0.0);
        assert!(psd_sqrt(&Matrix2::from_real_diagonal([1.0, -1e-3])).is_err());
    }
}
