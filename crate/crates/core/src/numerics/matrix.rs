use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;

/// Dense `N x N` complex matrix with row-major indexing.
///
/// Only qubit (`N = 2`) and two-qubit (`N = 4`) sizes are used by the
/// crate; the aliases [`Matrix2`] and [`Matrix4`] name them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMatrix<const N: usize> {
    data: [[C64; N]; N],
}

pub type Matrix2 = ComplexMatrix<2>;
pub type Matrix4 = ComplexMatrix<4>;

impl<const N: usize> Default for ComplexMatrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> ComplexMatrix<N> {
    pub const DIM: usize = N;

    pub fn zeros() -> Self {
        Self {
            data: [[C64::new(0.0, 0.0); N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.data[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: [[C64; N]; N]) -> Self {
        Self { data: rows }
    }

    pub fn from_real_diagonal(diag: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, d) in diag.into_iter().enumerate() {
            m.data[i][i] = C64::new(d, 0.0);
        }
        m
    }

    /// Rank-one projector `|v><v|` (no normalization applied).
    pub fn outer(v: &[C64; N]) -> Self {
        Self::outer2(v, v)
    }

    /// `|u><w|`.
    pub fn outer2(u: &[C64; N], w: &[C64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = u[i] * w[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> &[[C64; N]; N] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = self.data[j][i].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        m.data.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.data[i][i]).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// Largest violation of `m[i][j] == conj(m[j][i])`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(m + m†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_real(0.5)
    }

    pub fn mul_vec(&self, v: &[C64; N]) -> [C64; N] {
        let mut out = [C64::new(0.0, 0.0); N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..N).map(|j| self.data[i][j] * v[j]).sum();
        }
        out
    }

    /// `<u| m |w>`.
    pub fn sandwich(&self, u: &[C64; N], w: &[C64; N]) -> C64 {
        let mw = self.mul_vec(w);
        (0..N).map(|i| u[i].conj() * mw[i]).sum()
    }
}

impl<const N: usize> Index<(usize, usize)> for ComplexMatrix<N> {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for ComplexMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i][j]
    }
}

impl<const N: usize> Add for ComplexMatrix<N> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.data[i][j] += rhs.data[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Sub for ComplexMatrix<N> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.data[i][j] -= rhs.data[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Mul for ComplexMatrix<N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.data[i][k];
                for j in 0..N {
                    m.data[i][j] += a * rhs.data[k][j];
                }
            }
        }
        m
    }
}

/// Kronecker product of two qubit operators, basis order
/// `{|11>, |10>, |01>, |00>}` when each factor uses `{|1>, |0>}`.
pub fn kron2(a: &Matrix2, b: &Matrix2) -> Matrix4 {
    let mut m = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_is_multiplicative_unit() {
        let m = Matrix2::from_rows([[c(1.0, 2.0), c(0.0, -1.0)], [c(3.0, 0.5), c(-2.0, 0.0)]]);
        assert_eq!(m * Matrix2::identity(), m);
        assert_eq!(Matrix2::identity() * m, m);
    }

    #[test]
    fn adjoint_of_product_reverses_order() {
        let a = Matrix2::from_rows([[c(1.0, 2.0), c(0.0, -1.0)], [c(3.0, 0.5), c(-2.0, 0.0)]]);
        let b = Matrix2::from_rows([[c(0.3, 0.0), c(1.0, 1.0)], [c(0.0, 2.0), c(4.0, -1.0)]]);
        assert!((a * b).adjoint().max_abs_diff(&(b.adjoint() * a.adjoint())) < 1e-14);
    }

    #[test]
    fn kron_of_diagonals_orders_basis() {
        let a = Matrix2::from_real_diagonal([1.0, 2.0]);
        let b = Matrix2::from_real_diagonal([3.0, 5.0]);
        let k = kron2(&a, &b);
        let diag: Vec<f64> = (0..4).map(|i| k[(i, i)].re).collect();
        assert_eq!(diag, vec![3.0, 5.0, 6.0, 10.0]);
        assert!((k.trace() - a.trace() * b.trace()).norm() < 1e-14);
    }
}
