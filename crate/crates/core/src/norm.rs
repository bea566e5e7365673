//! The smoothed Euclidean norm `|x|_ε = sqrt(|x|² + ε)` and its derivatives.

use crate::error::{HysteresisError, Result};
use crate::material::{BlockMatrix, FieldVector};

pub fn smooth_norm<const D: usize>(x: &FieldVector<D>, eps: f64) -> f64 {
    (x.norm_squared() + eps).sqrt()
}

/// `x / |x|_ε`. Undefined only for `x = 0` with `eps = 0`.
pub fn smooth_norm_grad<const D: usize>(x: &FieldVector<D>, eps: f64) -> Result<FieldVector<D>> {
    let n = smooth_norm(x, eps);
    if n == 0.0 {
        return Err(HysteresisError::DegenerateNorm);
    }
    Ok(x / n)
}

/// `I/|x|_ε − x xᵀ/|x|_ε³`, symmetric positive semidefinite.
pub fn smooth_norm_hess<const D: usize>(x: &FieldVector<D>, eps: f64) -> Result<BlockMatrix<D>> {
    let n = smooth_norm(x, eps);
    if n == 0.0 {
        return Err(HysteresisError::DegenerateNorm);
    }
    let u = x / n;
    Ok((BlockMatrix::<D>::identity() - u * u.transpose()) / n)
}

/// `|x + s|_ε − |x|_ε` without cancellation.
pub(crate) fn smooth_norm_change<const D: usize>(
    x: &FieldVector<D>,
    s: &FieldVector<D>,
    eps: f64,
) -> f64 {
    let denom = smooth_norm(&(x + s), eps) + smooth_norm(x, eps);
    if denom == 0.0 {
        return 0.0;
    }
    (2.0 * x.dot(s) + s.norm_squared()) / denom
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;
    use proptest::prelude::*;

    type V2 = FieldVector<2>;

    #[test]
    fn value_examples() {
        assert!((smooth_norm(&V2::zeros(), 1e-6) - 1e-3).abs() < 1e-18);
        assert_eq!(smooth_norm(&V2::new(3.0, 4.0), 0.0), 5.0);
        assert!((smooth_norm(&V2::new(1.0, 0.0), 1e-2) - 1.0049875621120890).abs() < 1e-15);
    }

    #[test]
    fn gradient_examples() {
        assert_eq!(smooth_norm_grad(&V2::zeros(), 1e-6).unwrap(), V2::zeros());
        let g = smooth_norm_grad(&V2::new(3.0, 4.0), 0.0).unwrap();
        assert!((g - V2::new(0.6, 0.8)).norm() < 1e-15);
    }

    #[test]
    fn degenerate_origin() {
        assert_eq!(
            smooth_norm_grad(&V2::zeros(), 0.0),
            Err(HysteresisError::DegenerateNorm)
        );
        assert_eq!(
            smooth_norm_hess(&V2::zeros(), 0.0),
            Err(HysteresisError::DegenerateNorm)
        );
    }

    #[test]
    fn hessian_eigenvalues() {
        // along x: eps/|x|_eps^3, across x: 1/|x|_eps
        let h = smooth_norm_hess(&V2::new(1.0, 0.0), 1e-2).unwrap();
        let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let n = 1.01f64.sqrt();
        assert!((ev[0] - 1e-2 / (n * n * n)).abs() < 1e-15);
        assert!((ev[1] - 1.0 / n).abs() < 1e-15);
        assert!((ev[0] - 0.009852).abs() < 1e-6);
        assert!((ev[1] - 0.995037).abs() < 1e-6);
    }

    #[test]
    fn change_matches_difference() {
        let x = V2::new(0.3, -0.2);
        let s = V2::new(0.05, 0.01);
        let direct = smooth_norm(&(x + s), 1e-4) - smooth_norm(&x, 1e-4);
        assert!((smooth_norm_change(&x, &s, 1e-4) - direct).abs() < 1e-15);
        assert_eq!(smooth_norm_change(&V2::zeros(), &V2::zeros(), 0.0), 0.0);
    }

    proptest! {
        #[test]
        fn sandwich(x in -10.0f64..10.0, y in -10.0f64..10.0, log_eps in -14.0f64..1.0) {
            let eps = 10f64.powf(log_eps);
            let v = V2::new(x, y);
            let n = smooth_norm(&v, eps);
            prop_assert!(v.norm() <= n);
            prop_assert!(n <= v.norm() + eps.sqrt() * (1.0 + 1e-15));
        }

        #[test]
        fn hessian_psd(x in -10.0f64..10.0, y in -10.0f64..10.0, z in -10.0f64..10.0, log_eps in -12.0f64..1.0) {
            let eps = 10f64.powf(log_eps);
            let v = FieldVector::<3>::new(x, y, z);
            let h = smooth_norm_hess(&v, eps).unwrap();
            prop_assert!((h - h.transpose()).norm() == 0.0);
            let scale = h.norm();
            let min = SymmetricEigen::new(h).eigenvalues.min();
            prop_assert!(min >= -1e-12 * scale);
        }

        #[test]
        fn gradient_matches_central_differences(x in -5.0f64..5.0, y in -5.0f64..5.0, log_eps in -6.0f64..0.0) {
            let eps = 10f64.powf(log_eps);
            let v = V2::new(x, y);
            let g = smooth_norm_grad(&v, eps).unwrap();
            let step = 1e-6 * v.norm().max(1.0);
            for i in 0..2 {
                let mut e = V2::zeros();
                e[i] = step;
                let fd = (smooth_norm(&(v + e), eps) - smooth_norm(&(v - e), eps)) / (2.0 * step);
                prop_assert!((fd - g[i]).abs() <= 1e-5 * g.norm().max(1e-3));
            }
        }
    }
}
