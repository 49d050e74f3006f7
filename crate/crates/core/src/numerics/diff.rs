//! Central finite differences for functions of three variables.

use super::matrix::SymMatrix3;
use crate::error::{Error, Result};

/// Default relative step for central differences.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

fn steps(x: &[f64; 3], step: f64) -> [f64; 3] {
    x.map(|xi| step * xi.abs().max(1.0))
}

fn eval<F: Fn(&[f64; 3]) -> f64>(f: &F, x: [f64; 3]) -> Result<f64> {
    let v = f(&x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteObjective)
    }
}

fn shifted(x: &[f64; 3], moves: &[(usize, f64)]) -> [f64; 3] {
    let mut y = *x;
    for &(i, d) in moves {
        y[i] += d;
    }
    y
}

/// Central-difference gradient with per-coordinate step `step * max(|x_i|, 1)`.
pub fn fd_gradient<F>(f: F, x: &[f64; 3], step: f64) -> Result<[f64; 3]>
where
    F: Fn(&[f64; 3]) -> f64,
{
    let h = steps(x, step);
    let mut g = [0.0; 3];
    for i in 0..3 {
        let fp = eval(&f, shifted(x, &[(i, h[i])]))?;
        let fm = eval(&f, shifted(x, &[(i, -h[i])]))?;
        g[i] = (fp - fm) / (2.0 * h[i]);
    }
    Ok(g)
}

/// Central-difference Hessian, symmetrized as `(A + Aᵀ) / 2`.
pub fn fd_hessian<F>(f: F, x: &[f64; 3], step: f64) -> Result<SymMatrix3>
where
    F: Fn(&[f64; 3]) -> f64,
{
    let h = steps(x, step);
    let f0 = eval(&f, *x)?;
    let mut a = [[0.0; 3]; 3];
    for i in 0..3 {
        let fp = eval(&f, shifted(x, &[(i, h[i])]))?;
        let fm = eval(&f, shifted(x, &[(i, -h[i])]))?;
        a[i][i] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for j in 0..i {
            let fpp = eval(&f, shifted(x, &[(i, h[i]), (j, h[j])]))?;
            let fpm = eval(&f, shifted(x, &[(i, h[i]), (j, -h[j])]))?;
            let fmp = eval(&f, shifted(x, &[(i, -h[i]), (j, h[j])]))?;
            let fmm = eval(&f, shifted(x, &[(i, -h[i]), (j, -h[j])]))?;
            let v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            a[i][j] = v;
            a[j][i] = v;
        }
    }
    Ok(SymMatrix3::from_full(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_hessian() {
        let f = |x: &[f64; 3]| x[0] * x[0] + 2.0 * x[1] * x[1] + 3.0 * x[2] * x[2];
        let h = fd_hessian(f, &[0.3, -1.2, 2.5], DEFAULT_FD_STEP).unwrap();
        for (got, want) in h.diag().iter().zip([2.0, 4.0, 6.0]) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert!(h.get(i, j).abs() < 1e-6);
        }
    }

    #[test]
    fn mixed_quadratic_hessian() {
        let f = |x: &[f64; 3]| x[0] * x[1] + 0.5 * x[1] * x[2] - x[0] * x[2];
        let h = fd_hessian(f, &[1.0, 2.0, -3.0], DEFAULT_FD_STEP).unwrap();
        assert!((h.get(0, 1) - 1.0).abs() < 1e-6);
        assert!((h.get(1, 2) - 0.5).abs() < 1e-6);
        assert!((h.get(0, 2) + 1.0).abs() < 1e-6);
    }

    #[test]
    fn analytic_gradient() {
        let f = |x: &[f64; 3]| x[0].sin() + x[1] * x[2];
        let g = fd_gradient(f, &[0.0, 1.0, 2.0], DEFAULT_FD_STEP).unwrap();
        for (got, want) in g.iter().zip([1.0, 2.0, 1.0]) {
            assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
    }

    #[test]
    fn non_finite_stencil() {
        let f = |x: &[f64; 3]| if x[0] > 0.0 { x[0].ln() } else { f64::NAN };
        assert_eq!(
            fd_gradient(f, &[1e-6, 0.0, 0.0], 1e-4),
            Err(Error::NonFiniteObjective)
        );
        assert!(fd_hessian(f, &[1e-6, 0.0, 0.0], 1e-4).is_err());
    }
}
