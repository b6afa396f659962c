use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use crate::error::{domain, Result};

/// Integrates `i dv/dt = M v` from `v(0) = v0` up to time `t` with the
/// classic fixed-step fourth-order Runge–Kutta scheme.
///
/// The last step is shortened so the integration lands exactly on `t`.
pub fn rk4_linear<const N: usize>(
    coeff: &ComplexMatrix<N>,
    v0: [C64; N],
    t: f64,
    dt: f64,
) -> Result<[C64; N]> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(domain(format!("step must be positive, got {dt}")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("time must be non-negative, got {t}")));
    }
    // dv/dt = -i M v
    let gen = coeff.scale(C64::new(0.0, -1.0));
    let rhs = |v: &[C64; N]| gen.mul_vec(v);
    let axpy = |v: &[C64; N], h: f64, k: &[C64; N]| {
        let mut out = *v;
        for i in 0..N {
            out[i] += k[i] * h;
        }
        out
    };

    let full_steps = (t / dt).floor();
    let remainder = t - full_steps * dt;
    let mut v = v0;
    let step = |v: &mut [C64; N], h: f64| {
        let k1 = rhs(v);
        let k2 = rhs(&axpy(v, 0.5 * h, &k1));
        let k3 = rhs(&axpy(v, 0.5 * h, &k2));
        let k4 = rhs(&axpy(v, h, &k3));
        for i in 0..N {
            v[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
    };
    for _ in 0..full_steps as u64 {
        step(&mut v, dt);
    }
    if remainder > 1e-12 * dt {
        step(&mut v, remainder);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Matrix2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn null_generator_is_stationary() {
        let v0 = [c(0.3, -0.2), c(0.1, 0.9)];
        let v = rk4_linear(&Matrix2::zeros(), v0, 2.5, 0.1).unwrap();
        assert_eq!(v, v0);
    }

    #[test]
    fn diagonal_generator_rotates_phase() {
        for omega in [0.5, 1.0, 3.0] {
            let m = Matrix2::from_real_diagonal([omega, -omega]);
            let t = 10.0 / omega;
            let v = rk4_linear(&m, [c(1.0, 0.0), c(0.0, 0.0)], t, 1e-3 / omega).unwrap();
            let exact = C64::from_polar(1.0, -omega * t);
            assert!(
                (v[0] - exact).norm() < 1e-8,
                "omega {omega}: {}",
                (v[0] - exact).norm()
            );
            assert_eq!(v[1], c(0.0, 0.0));
        }
    }

    #[test]
    fn lands_exactly_on_final_time() {
        let m = Matrix2::from_real_diagonal([1.0, -1.0]);
        let v = rk4_linear(&m, [c(1.0, 0.0), c(0.0, 0.0)], 1.05, 0.1).unwrap();
        assert!((v[0] - C64::from_polar(1.0, -1.05)).norm() < 1e-6);
    }

    #[test]
    fn local_error_is_fifth_order() {
        // One step of size h against two of size h/2: the difference is the
        // local truncation error and must shrink as h^5 (global order four).
        let m = Matrix2::from_rows([[c(0.5, 0.0), c(2.0, 0.0)], [c(1.0, 0.0), c(-1.5, 0.0)]]);
        let v0 = [c(1.0, 0.0), c(0.0, 0.0)];
        let diff = |h: f64| {
            let a = rk4_linear(&m, v0, h, h).unwrap();
            let b = rk4_linear(&m, v0, h, h / 2.0).unwrap();
            ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
        };
        let ratio = diff(0.1) / diff(0.05);
        assert!(
            (ratio.log2() - 5.0).abs() < 0.3,
            "observed order {}",
            ratio.log2()
        );
    }

    #[test]
    fn conserves_weighted_norm() {
        // W M is Hermitian for W = diag(1, 3), so v†Wv is conserved.
        let n1 = 3.0;
        let m = Matrix2::from_rows([[c(1.0, 0.0), c(0.7 * n1, 0.0)], [c(0.7, 0.0), c(1.0, 0.0)]]);
        let v = rk4_linear(&m, [c(1.0, 0.0), c(0.0, 0.0)], 10.0, 1e-3).unwrap();
        let q = v[0].norm_sqr() + n1 * v[1].norm_sqr();
        assert!((q - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_step() {
        assert!(rk4_linear(&Matrix2::zeros(), [c(1.0, 0.0); 2], 1.0, 0.0).is_err());
        assert!(rk4_linear(&Matrix2::zeros(), [c(1.0, 0.0); 2], -1.0, 0.1).is_err());
    }
}
