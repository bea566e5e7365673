//! Internal energy density of a pinning cell,
//! `U(J) = −(2 a_s j_s/π)·log(cos(π|J|/(2 j_s)))`, applied isotropically
//! through `r = |J|`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{HysteresisError, Result};
use crate::material::{BlockMatrix, FieldVector, PinningCell};

/// Below this fraction of `j_s` the radial quotients use their `r → 0` limits.
const ORIGIN_CUTOFF: f64 = 1e-12;

impl PinningCell {
    /// `π/(2 j_s)`: maps a polarization magnitude to the cosine argument.
    fn angle_scale(&self) -> f64 {
        FRAC_PI_2 / self.j_s
    }

    fn checked_radius<const D: usize>(&self, j: &FieldVector<D>) -> Result<f64> {
        let r = j.norm();
        if r < self.j_s {
            Ok(r)
        } else {
            Err(HysteresisError::DomainViolation {
                magnitude: r,
                saturation: self.j_s,
            })
        }
    }

    pub fn in_domain<const D: usize>(&self, j: &FieldVector<D>) -> bool {
        j.norm() < self.j_s
    }

    pub fn energy_value<const D: usize>(&self, j: &FieldVector<D>) -> Result<f64> {
        let r = self.checked_radius(j)?;
        let c = self.angle_scale();
        let t = (c * r).tan();
        // −log cos θ = ½·log(1 + tan²θ), accurate near θ = 0
        Ok(self.a_s / c * 0.5 * (t * t).ln_1p())
    }

    pub fn energy_grad<const D: usize>(&self, j: &FieldVector<D>) -> Result<FieldVector<D>> {
        let r = self.checked_radius(j)?;
        Ok(j * self.radial_slope(r))
    }

    pub fn energy_hess<const D: usize>(&self, j: &FieldVector<D>) -> Result<BlockMatrix<D>> {
        let r = self.checked_radius(j)?;
        let c = self.angle_scale();
        let slope = self.radial_slope(r);
        if r < ORIGIN_CUTOFF * self.j_s {
            return Ok(BlockMatrix::identity() * slope);
        }
        let sec = 1.0 / (c * r).cos();
        let curvature = self.a_s * c * sec * sec;
        let u = j / r;
        let radial = u * u.transpose();
        Ok((BlockMatrix::identity() - radial) * slope + radial * curvature)
    }

    /// `u'(r)/r` with `u'(r) = a_s·tan(c r)`.
    fn radial_slope(&self, r: f64) -> f64 {
        let c = self.angle_scale();
        if r < ORIGIN_CUTOFF * self.j_s {
            self.a_s * c
        } else {
            self.a_s * (c * r).tan() / r
        }
    }

    /// `U(J + s) − U(J)` evaluated without cancellation; `None` when `J + s`
    /// leaves the domain.
    pub(crate) fn energy_change<const D: usize>(
        &self,
        j: &FieldVector<D>,
        s: &FieldVector<D>,
    ) -> Option<f64> {
        let next = j + s;
        let r0 = j.norm();
        let r1 = next.norm();
        if !(r0 < self.j_s && r1 < self.j_s) {
            return None;
        }
        let c = self.angle_scale();
        let dr = if r0 + r1 > 0.0 {
            (2.0 * j.dot(s) + s.norm_squared()) / (r0 + r1)
        } else {
            0.0
        };
        let (th0, th1) = (c * r0, c * r1);
        // log(cos θ0 / cos θ1) with cos θ0 − cos θ1 = 2 sin((θ0+θ1)/2) sin((θ1−θ0)/2)
        let ratio_minus_one = 2.0 * (0.5 * (th0 + th1)).sin() * (0.5 * c * dr).sin() / th1.cos();
        Some(self.a_s / c * ratio_minus_one.ln_1p())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;
    use proptest::prelude::*;

    fn cell() -> PinningCell {
        PinningCell::new(50.0, 1.545, 140.0).unwrap()
    }

    #[test]
    fn origin_values() {
        let c = cell();
        assert_eq!(c.energy_value(&FieldVector::<2>::zeros()).unwrap(), 0.0);
        assert_eq!(c.energy_grad(&FieldVector::<2>::zeros()).unwrap(), FieldVector::<2>::zeros());
        let h = c.energy_hess(&FieldVector::<2>::zeros()).unwrap();
        assert!((h - BlockMatrix::<2>::identity() * c.convexity()).norm() < 1e-12);
    }

    #[test]
    fn half_saturation_gradient_is_a_s() {
        // tan(π/4) = 1
        let c = cell();
        let g = c.energy_grad(&FieldVector::<1>::new(c.j_s / 2.0)).unwrap();
        assert!((g[0] - 50.0).abs() < 1e-12);
    }

    #[test]
    fn outside_domain_is_rejected() {
        let c = cell();
        let j = FieldVector::<2>::new(c.j_s, 0.0);
        assert!(matches!(
            c.energy_value(&j),
            Err(HysteresisError::DomainViolation { .. })
        ));
        assert!(c.energy_grad(&j).is_err());
        assert!(c.energy_hess(&j).is_err());
        assert!(c.energy_change(&FieldVector::<2>::zeros(), &j).is_none());
    }

    #[test]
    fn blows_up_at_saturation() {
        let c = cell();
        // logarithmic growth: ≈7.2× at 1 − 1e-6, ≈14.6× at 1 − 1e-12
        let mid = c.energy_value(&FieldVector::<1>::new(0.9 * c.j_s)).unwrap();
        let mut last = mid;
        for gap in [1e-3, 1e-6, 1e-9, 1e-12] {
            let v = c.energy_value(&FieldVector::<1>::new((1.0 - gap) * c.j_s)).unwrap();
            assert!(v > last);
            last = v;
        }
        assert!(last >= 10.0 * mid, "{last} vs {mid}");
    }

    #[test]
    fn change_matches_direct_difference() {
        let c = cell();
        let j = FieldVector::<2>::new(0.4, -0.3);
        let s = FieldVector::<2>::new(0.2, 0.1);
        let direct = c.energy_value(&(j + s)).unwrap() - c.energy_value(&j).unwrap();
        let change = c.energy_change(&j, &s).unwrap();
        assert!((change - direct).abs() < 1e-13 * direct.abs().max(1.0));
        let zero = FieldVector::<2>::zeros();
        let from_origin = c.energy_change(&zero, &s).unwrap();
        assert!((from_origin - c.energy_value(&s).unwrap()).abs() < 1e-14);
    }

    fn in_domain_point() -> impl Strategy<Value = FieldVector<3>> {
        (0.0f64..0.98, -1.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(frac, z, phi)| {
            let s = (1.0 - z * z).sqrt();
            FieldVector::<3>::new(s * phi.cos(), s * phi.sin(), z) * (frac * 1.545)
        })
    }

    proptest! {
        #[test]
        fn hessian_bounded_below(j in in_domain_point()) {
            let c = cell();
            let h = c.energy_hess(&j).unwrap();
            let min = SymmetricEigen::new(h).eigenvalues.min();
            prop_assert!(min >= c.convexity() * (1.0 - 1e-12), "{min} < {}", c.convexity());
        }

        #[test]
        fn gradient_matches_central_differences(j in in_domain_point()) {
            let c = cell();
            let g = c.energy_grad(&j).unwrap();
            let step = 1e-6 * j.norm().max(1.0);
            for i in 0..3 {
                let mut e = FieldVector::<3>::zeros();
                e[i] = step;
                let fd = (c.energy_value(&(j + e)).unwrap() - c.energy_value(&(j - e)).unwrap()) / (2.0 * step);
                prop_assert!((fd - g[i]).abs() <= 1e-5 * g.norm().max(1.0));
            }
        }

        #[test]
        fn hessian_matches_gradient_differences(j in in_domain_point()) {
            let c = cell();
            let h = c.energy_hess(&j).unwrap();
            let step = 1e-6 * j.norm().max(1.0);
            for i in 0..3 {
                let mut e = FieldVector::<3>::zeros();
                e[i] = step;
                let fd = (c.energy_grad(&(j + e)).unwrap() - c.energy_grad(&(j - e)).unwrap()) / (2.0 * step);
                prop_assert!((fd - h.column(i)).norm() <= 1e-5 * h.norm());
            }
        }
    }
}
