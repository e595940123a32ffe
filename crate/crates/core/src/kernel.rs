//! Periodic Green's function of `G_ss - G = delta` on a loop of length `L`.
//!
//! `G(s, s') = cosh(|s - s'| - L/2) / (2 sinh(-L/2))` is strictly negative,
//! symmetric and integrates to `-1` over the loop. `K = -G` is the positive
//! unit-mass convolution kernel. Integrals against `ds` use the vertex rule
//! `sum_j f_j ds_j`.

use crate::curve::{check_field, PolyCurve};
use crate::error::{FlowError, Result};
use crate::scalar::{Field, Scalar, Vec2};

/// Kernel assembly refuses loops shorter than this.
pub const CONSTANT_MAP_GUARD: f64 = 1e-12;

/// Beyond this length the single-exponential form would overflow.
const SPLIT_EXP_LIMIT: f64 = 600.0;

/// `G` sampled at every vertex pair, with the weights used to integrate it.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix<T> {
    n: usize,
    /// Row-major `n x n`.
    g: Vec<T>,
    pub s: Vec<T>,
    pub ds: Vec<T>,
    pub length: T,
}

/// `G` for a chord of arclength `d in [0, L]`, written so that neither
/// factor overflows: `(e^{d-L} + e^{-d}) / (2 (e^{-L} - 1))`.
#[inline]
fn green_reduced<T: Scalar>(length: T, d: T, denom: T, exp_neg_len: T) -> T {
    let a = (-d).exp();
    let b = if length < T::lit(SPLIT_EXP_LIMIT) { exp_neg_len / a } else { (d - length).exp() };
    (a + b) / denom
}

/// `G(L; s, s')`. Arguments further apart than `L` are reduced modulo `L`.
pub fn greens_value<T: Scalar>(length: T, s: T, s_tilde: T) -> Result<T> {
    if !(length > T::zero()) {
        return Err(FlowError::OutOfDomain(format!("Green's function needs L > 0, got {length}")));
    }
    let mut d = (s - s_tilde).abs();
    if d > length {
        d = d % length;
    }
    let denom = T::lit(2.0) * (-length).exp_m1();
    Ok(green_reduced(length, d, denom, (-length).exp()))
}

impl<T: Scalar> KernelMatrix<T> {
    pub fn new(curve: &PolyCurve<T>) -> Result<Self> {
        let arc = curve.arc_data()?;
        let length = arc.length;
        if length < T::lit(CONSTANT_MAP_GUARD) {
            return Err(FlowError::ConstantMapGuard { length: length.as_f64() });
        }
        let n = curve.len();
        let denom = T::lit(2.0) * (-length).exp_m1();
        let e_l = (-length).exp();
        let mut g = vec![T::zero(); n * n];
        for i in 0..n {
            g[i * n + i] = green_reduced(length, T::zero(), denom, e_l);
            for j in (i + 1)..n {
                let v = green_reduced(length, arc.s[j] - arc.s[i], denom, e_l);
                g[i * n + j] = v;
                g[j * n + i] = v;
            }
        }
        Ok(Self { n, g, s: arc.s, ds: arc.ds, length })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.g[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.g[i * self.n..(i + 1) * self.n]
    }

    /// `sum_j G_ij ds_j`; `-1` in the continuum.
    pub fn row_quadrature(&self, i: usize) -> T {
        self.row(i).iter().zip(&self.ds).map(|(&g, &w)| g * w).sum()
    }

    /// Largest `|1 + sum_j G_ij ds_j|` over rows.
    pub fn quadrature_defect(&self) -> T {
        (0..self.n).map(|i| (self.row_quadrature(i) + T::one()).abs()).fold(T::zero(), T::max)
    }

    /// `out_i = sum_j G_ij f_j ds_j`.
    pub fn apply(&self, field: &[Vec2<T>]) -> Result<Field<T>> {
        check_field(self.n, field)?;
        let weighted: Vec<Vec2<T>> = field.iter().zip(&self.ds).map(|(&f, &w)| f * w).collect();
        Ok((0..self.n)
            .map(|i| {
                let mut acc = Vec2::zero();
                for (&g, &f) in self.row(i).iter().zip(&weighted) {
                    acc += f * g;
                }
                acc
            })
            .collect())
    }
}

pub fn kernel_matrix<T: Scalar>(curve: &PolyCurve<T>) -> Result<KernelMatrix<T>> {
    KernelMatrix::new(curve)
}

/// `(field * K)_i = sum_j field_j (-G_ij) ds_j`.
pub fn convolve_k<T: Scalar>(curve: &PolyCurve<T>, field: &[Vec2<T>]) -> Result<Field<T>> {
    let km = KernelMatrix::new(curve)?;
    Ok(km.apply(field)?.into_iter().map(|v| -v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::constant_field;
    use std::f64::consts::PI;

    fn ngon(n: usize, r: f64) -> PolyCurve<f64> {
        PolyCurve::new(
            (0..n)
                .map(|i| {
                    let a = 2.0 * PI * i as f64 / n as f64;
                    Vec2::new(r * a.cos(), r * a.sin())
                })
                .collect(),
        )
        .unwrap()
    }

    fn closed_form(l: f64, d: f64) -> f64 {
        (d - l / 2.0).cosh() / (2.0 * (-l / 2.0).sinh())
    }

    #[test]
    fn diagonal_and_antipodal_values() {
        let g = greens_value(2.0_f64, 0.3, 0.3).unwrap();
        assert!((g + 1.0 / (2.0 * 1.0_f64.tanh())).abs() < 1e-15);
        assert!((g + 0.656518).abs() < 1e-6);
        for &l in &[0.1_f64, 1.0, 7.0, 40.0] {
            let g = greens_value(l, 0.0, l / 2.0).unwrap();
            assert!((g + 1.0 / (2.0 * (l / 2.0).sinh())).abs() < 1e-14 * g.abs());
        }
    }

    #[test]
    fn matches_hyperbolic_form() {
        for &l in &[0.01, 0.5, 3.0, 25.0] {
            for k in 0..=20 {
                let d = l * k as f64 / 20.0;
                let g = greens_value(l, d, 0.0).unwrap();
                assert!((g - closed_form(l, d)).abs() < 1e-13 * g.abs());
                assert!(g < 0.0);
            }
        }
        // No overflow for long loops.
        let g = greens_value(1000.0_f64, 0.0, 500.0).unwrap();
        assert!(g.is_finite() && g < 0.0);
        assert!((g.ln() - (-500.0 - 1.0_f64.ln())).abs() < 1e-9 || (g.abs().ln() + 500.0).abs() < 1e-9);
    }

    #[test]
    fn blows_up_near_constant_maps() {
        assert!(greens_value(1e-6_f64, 0.0, 0.0).unwrap() < -1e5);
        assert!(greens_value(0.0_f64, 0.0, 0.0).is_err());
        let tiny = ngon(8, 1e-14);
        assert!(matches!(KernelMatrix::new(&tiny), Err(FlowError::ConstantMapGuard { .. })));
    }

    #[test]
    fn arguments_reduce_modulo_length() {
        let a = greens_value(3.0_f64, 0.2, 0.9).unwrap();
        let b = greens_value(3.0_f64, 0.2 + 3.0, 0.9).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn derivative_bound_one_half() {
        for &l in &[0.3, 2.0, 9.0] {
            let delta = 1e-3;
            for k in 0..200 {
                let s = l * k as f64 / 200.0;
                let a = greens_value(l, s, 0.0).unwrap();
                let b = greens_value(l, s + delta, 0.0).unwrap();
                assert!((b - a).abs() <= (0.5 + 1e-9) * delta);
            }
        }
    }

    #[test]
    fn matrix_structure() {
        let c = ngon(64, 1.0).map(|v| Vec2::new(1.5 * v.x, v.y));
        let km = KernelMatrix::new(&c).unwrap();
        let l = km.length;
        let diag = -1.0 / (2.0 * (l / 2.0).tanh());
        let mut max_abs: f64 = 0.0;
        for i in 0..64 {
            assert!((km.get(i, i) - diag).abs() < 1e-14);
            for j in 0..64 {
                assert_eq!(km.get(i, j), km.get(j, i));
                assert!(km.get(i, j) < 0.0);
                max_abs = max_abs.max(km.get(i, j).abs());
            }
        }
        assert_eq!(max_abs, diag.abs());
        let moved = KernelMatrix::new(&c.translated(Vec2::new(4.0, -2.0))).unwrap();
        for i in 0..64 {
            for j in 0..64 {
                assert!((moved.get(i, j) - km.get(i, j)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn row_quadrature_on_fine_circle() {
        let km = KernelMatrix::new(&ngon(512, 1.0)).unwrap();
        for i in 0..512 {
            let q = km.row_quadrature(i);
            assert!((-1.0 - 2e-3..=-1.0 + 2e-3).contains(&q));
        }
    }

    #[test]
    fn convolution_of_constants_and_zero() {
        let c = ngon(512, 1.0);
        let k = Vec2::new(2.0, -1.0);
        let out = convolve_k(&c, &constant_field(512, k)).unwrap();
        for v in &out {
            assert!((*v - k).norm() <= 2e-3 * k.norm());
        }
        let zero = convolve_k(&c, &constant_field(512, Vec2::zero())).unwrap();
        assert!(zero.iter().all(|v| *v == Vec2::zero()));
        // Young-type inequality with the curve itself as the field.
        let xk = convolve_k(&c, c.vertices()).unwrap();
        let lhs = c.norms(&xk).unwrap().l2_ds;
        let rhs = c.norms(c.vertices()).unwrap().l2_ds;
        assert!(lhs <= rhs);
    }
}
