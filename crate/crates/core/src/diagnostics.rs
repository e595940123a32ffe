//! Scalar monitors of a curve state and checks across a trajectory.

use crate::curve::PolyCurve;
use crate::error::{FlowError, Result};
use crate::flow::Trajectory;
use crate::gradient::velocity;
use crate::scalar::Scalar;

/// Per-state monitors. Column order of the diagnostics CSV follows field order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagnosticsRecord<T> {
    pub t: T,
    pub length: T,
    pub area: T,
    /// `L^2 / (4 pi |A|)`.
    pub iso_ratio: T,
    /// `L^2 - 4 pi A`.
    pub deficit: T,
    pub linf: T,
    pub l2ds: T,
    pub xu_l2: T,
    pub min_edge: T,
    pub chord_arc_min: T,
    pub max_abs_k: T,
    /// `e^{-t} max |k|`.
    pub rescaled_max_k: T,
    pub grad_sq_h1ds: T,
    pub embeddedness_ok: bool,
}

pub fn record<T: Scalar>(curve: &PolyCurve<T>, t: T) -> Result<DiagnosticsRecord<T>> {
    let length = curve.total_length();
    let area = curve.signed_area();
    let four_pi = T::lit(4.0) * T::PI();
    let frame = curve.frame_data()?;
    let max_abs_k = frame.curvature.iter().map(|k| k.abs()).fold(T::zero(), T::max);
    let emb = embeddedness_condition(curve)?;
    let vf = velocity(curve)?;
    Ok(DiagnosticsRecord {
        t,
        length,
        area,
        iso_ratio: length * length / (four_pi * area.abs()),
        deficit: length * length - four_pi * area,
        linf: curve.linf(),
        l2ds: curve.norms(curve.vertices())?.l2_ds,
        xu_l2: curve.xu_l2(),
        min_edge: curve.min_edge(),
        chord_arc_min: emb.lhs,
        max_abs_k,
        rescaled_max_k: (-t).exp() * max_abs_k,
        grad_sq_h1ds: vf.grad_norm_sq_h1ds,
        embeddedness_ok: emb.ok,
    })
}

/// Sufficient condition for a flow to stay embedded:
/// `min Ch/S > a e^a` with `a = L^2 sqrt(2 + ||X||_inf^2) / 4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Embeddedness<T> {
    pub ok: bool,
    pub lhs: T,
    pub rhs: T,
}

pub fn embeddedness_condition<T: Scalar>(curve: &PolyCurve<T>) -> Result<Embeddedness<T>> {
    let lhs = curve.chord_arc_min()?.value;
    let l = curve.total_length();
    let m = curve.linf();
    let a = l * l * (T::lit(2.0) + m * m).sqrt() / T::lit(4.0);
    let rhs = a * a.exp();
    Ok(Embeddedness { ok: lhs > rhs, lhs, rhs })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonitorVerdict<T> {
    pub monitor: &'static str,
    /// Largest increase between consecutive records (zero if none).
    pub worst_violation: T,
    /// Record index at which `worst_violation` was reached.
    pub worst_step: usize,
    pub slack: T,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityReport<T> {
    /// `length`, `linf`, `xu_l2`, `l2ds`, in that order.
    pub verdicts: Vec<MonitorVerdict<T>>,
    /// `sup_t D_Y(t) / D_X(0)` for the asymptotic profile; `None` when `D_X(0) <= 0`.
    pub profile_deficit_ratio_sup: Option<T>,
    /// `sup_t e^{-t} max|k|` over the records.
    pub rescaled_k_sup: T,
}

impl<T: Scalar> MonotonicityReport<T> {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn verdict(&self, monitor: &str) -> Option<&MonitorVerdict<T>> {
        self.verdicts.iter().find(|v| v.monitor == monitor)
    }
}

fn non_increase<T: Scalar>(
    monitor: &'static str,
    values: impl Iterator<Item = T>,
    slack: T,
) -> MonitorVerdict<T> {
    let values: Vec<T> = values.collect();
    let mut worst = T::zero();
    let mut worst_step = 0;
    for (k, w) in values.windows(2).enumerate() {
        let rise = w[1] - w[0];
        if rise > worst {
            worst = rise;
            worst_step = k + 1;
        }
    }
    MonitorVerdict { monitor, worst_violation: worst, worst_step, slack, pass: worst <= slack }
}

pub fn monotonicity_report<T: Scalar>(traj: &Trajectory<T>, slack: T) -> Result<MonotonicityReport<T>> {
    let recs = &traj.records;
    if recs.len() < 2 {
        return Err(FlowError::InvalidConfig("monotonicity report needs at least two records".into()));
    }
    if recs.windows(2).any(|w| w[1].t < w[0].t) {
        return Err(FlowError::InvalidConfig("monotonicity report needs a forward trajectory".into()));
    }
    let verdicts = vec![
        non_increase("length", recs.iter().map(|r| r.length), slack),
        non_increase("linf", recs.iter().map(|r| r.linf), slack),
        non_increase("xu_l2", recs.iter().map(|r| r.xu_l2), slack),
        non_increase("l2ds", recs.iter().map(|r| r.l2ds), slack),
    ];
    let d0 = recs[0].deficit;
    // Anchoring is a translation, so D_Y(t) = e^{2t} D_X(t).
    let profile_deficit_ratio_sup = (d0 > T::zero()).then(|| {
        recs.iter()
            .map(|r| (T::lit(2.0) * r.t).exp() * r.deficit / d0)
            .fold(T::neg_infinity(), T::max)
    });
    let rescaled_k_sup = recs.iter().map(|r| r.rescaled_max_k).fold(T::zero(), T::max);
    Ok(MonotonicityReport { verdicts, profile_deficit_ratio_sup, rescaled_k_sup })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Vec2;
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

    #[test]
    fn circle_record_is_nearly_isoperimetric() {
        let r = record(&ngon(512, 1.0), 0.0).unwrap();
        assert!((r.iso_ratio - 1.0).abs() < 1e-4);
        assert!(r.deficit >= 0.0 && r.deficit <= 1e-3);
        assert_eq!(r.rescaled_max_k, r.max_abs_k);
    }

    #[test]
    fn square_iso_ratio() {
        let sq = PolyCurve::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        let r = record(&sq, 0.0).unwrap();
        assert!((r.iso_ratio - 16.0 / (4.0 * PI)).abs() < 1e-12);
        assert!((r.iso_ratio - 1.2732).abs() < 1e-4);
        // orientation does not change the ratio
        let rr = record(&sq.reversed(), 0.0).unwrap();
        assert!((rr.iso_ratio - r.iso_ratio).abs() < 1e-15);
        assert!(rr.area < 0.0);
    }

    #[test]
    fn rescaled_curvature_uses_time() {
        let c = ngon(64, 1.0);
        let r = record(&c, 1.5).unwrap();
        assert!((r.rescaled_max_k - (-1.5f64).exp() * r.max_abs_k).abs() < 1e-14);
    }

    #[test]
    fn embeddedness_is_scale_sensitive() {
        let c = ngon(128, 1.0);
        let small = embeddedness_condition(&c.scaled(0.05)).unwrap();
        let big = embeddedness_condition(&c).unwrap();
        assert!(small.ok);
        assert!(!big.ok && big.rhs > 1.0);
        assert!((small.lhs - big.lhs).abs() < 1e-12);
        assert!(small.rhs < big.rhs);
    }

    #[test]
    fn scaling_behaviour_of_monitors() {
        let c = ngon(100, 1.0).map(|v| Vec2::new(1.7 * v.x, v.y));
        let a = record(&c, 0.0).unwrap();
        let b = record(&c.scaled(3.0), 0.0).unwrap();
        assert!((a.iso_ratio - b.iso_ratio).abs() < 1e-12);
        assert!((a.chord_arc_min - b.chord_arc_min).abs() < 1e-12);
        assert!((b.deficit - 9.0 * a.deficit).abs() < 1e-10 * b.deficit.abs());
    }
}
