//! Discrete H1(ds) gradient of length and the flow velocity.
//!
//! The velocity is the quadrature `V_i = -X_i - sum_j X_j G_ij ds_j` of the
//! continuum steepest-descent direction `-grad L`.

use crate::curve::{check_field, PolyCurve};
use crate::error::{FlowError, Result};
use crate::kernel::KernelMatrix;
use crate::scalar::{Field, Scalar, Vec2};

/// Flow velocity `V = -grad L` and its norms.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocityField<T> {
    pub v: Field<T>,
    /// `||grad L||^2` in H1(ds).
    pub grad_norm_sq_h1ds: T,
    pub grad_norm_l2ds: T,
}

impl<T: Scalar> VelocityField<T> {
    pub fn max_speed(&self) -> T {
        self.v.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }
}

fn check_kernel<T: Scalar>(curve: &PolyCurve<T>, km: &KernelMatrix<T>) -> Result<()> {
    if km.len() != curve.len() {
        return Err(FlowError::FieldLength { expected: curve.len(), got: km.len() });
    }
    Ok(())
}

pub fn flow_velocity<T: Scalar>(curve: &PolyCurve<T>, km: &KernelMatrix<T>) -> Result<VelocityField<T>> {
    check_kernel(curve, km)?;
    let smoothed = km.apply(curve.vertices())?;
    let v: Field<T> = curve.vertices().iter().zip(&smoothed).map(|(&x, &g)| -x - g).collect();
    let grad_norm_sq_h1ds = h1ds_inner(curve, &v, &v)?;
    let grad_norm_l2ds = curve.norms(&v)?.l2_ds;
    Ok(VelocityField { v, grad_norm_sq_h1ds, grad_norm_l2ds })
}

/// Builds the kernel for `curve` and evaluates [`flow_velocity`].
pub fn velocity<T: Scalar>(curve: &PolyCurve<T>) -> Result<VelocityField<T>> {
    let km = KernelMatrix::new(curve)?;
    flow_velocity(curve, &km)
}

/// Velocity field only, skipping the norm computations.
pub(crate) fn velocity_vectors<T: Scalar>(curve: &PolyCurve<T>) -> Result<Field<T>> {
    let km = KernelMatrix::new(curve)?;
    let smoothed = km.apply(curve.vertices())?;
    Ok(curve.vertices().iter().zip(&smoothed).map(|(&x, &g)| -x - g).collect())
}

/// `V_i = sum_j (X_i - X_j) G_ij ds_j`. Differs from [`flow_velocity`] by
/// `X_i (1 + sum_j G_ij ds_j)`; kept for verification.
pub fn flow_velocity_centered<T: Scalar>(curve: &PolyCurve<T>, km: &KernelMatrix<T>) -> Result<Field<T>> {
    check_kernel(curve, km)?;
    let x = curve.vertices();
    Ok((0..x.len())
        .map(|i| {
            let mut acc = Vec2::zero();
            for (j, (&g, &w)) in km.row(i).iter().zip(&km.ds).enumerate() {
                acc += (x[i] - x[j]) * (g * w);
            }
            acc
        })
        .collect())
}

/// `<v, w>_{L2(ds)} + <v_s, w_s>_{L2(ds)}` with per-edge arclength derivatives.
pub fn h1ds_inner<T: Scalar>(curve: &PolyCurve<T>, v: &[Vec2<T>], w: &[Vec2<T>]) -> Result<T> {
    let n = curve.len();
    check_field(n, v)?;
    check_field(n, w)?;
    let arc = curve.arc_data()?;
    let e = curve.edge_lengths();
    let l2: T = (0..n).map(|i| v[i].dot(w[i]) * arc.ds[i]).sum();
    let der: T = (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            (v[j] - v[i]).dot(w[j] - w[i]) / e[i]
        })
        .sum();
    Ok(l2 + der)
}

/// Exact derivative of the perimeter in direction `v`:
/// `sum_i <v_{i+1} - v_i, X_{i+1} - X_i> / |X_{i+1} - X_i|`.
pub fn length_directional_derivative<T: Scalar>(curve: &PolyCurve<T>, v: &[Vec2<T>]) -> Result<T> {
    let n = curve.len();
    check_field(n, v)?;
    let e = curve.checked_edge_lengths()?;
    Ok((0..n)
        .map(|i| {
            let j = (i + 1) % n;
            (v[j] - v[i]).dot(curve.edge(i)) / e[i]
        })
        .sum())
}

/// `sum_j T_j G_ij ds_j`, bounded by `L^2 / 2` in the continuum.
pub fn tangential_kernel_term<T: Scalar>(curve: &PolyCurve<T>, km: &KernelMatrix<T>) -> Result<Field<T>> {
    check_kernel(curve, km)?;
    let frame = curve.frame_data()?;
    km.apply(&frame.tangent)
}
