//! Principal branch of the Lambert W function and the exact shrinking circle.
//!
//! A round circle of radius `r0` evolves homothetically with
//! `r' = -r / (r^2 + 1)`, whose solution is `r(t)^2 = W(exp(c - 2t))` with
//! `c = r0^2 + ln r0^2`. For very negative `t` the argument `exp(c - 2t)`
//! overflows, so [`lambert_w0_of_exp`] solves `w + ln w = y` directly.

use crate::error::{FlowError, Result};
use crate::scalar::Scalar;

const MAX_HALLEY: usize = 50;
const MAX_NEWTON: usize = 200;

/// `W0(x)`: the solution `w >= -1` of `w e^w = x`, for `x >= -1/e`.
pub fn lambert_w0<T: Scalar>(x: T) -> Result<T> {
    let branch = -T::one().neg().exp();
    if x.is_nan() || x < branch {
        return Err(FlowError::OutOfDomain(format!("lambert_w0 needs x >= -1/e, got {x}")));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    if x.is_infinite() {
        return Ok(x);
    }
    let one = T::one();
    let two = T::lit(2.0);

    let mut w = if x < T::lit(-0.25) {
        // Series about the branch point in p = sqrt(2(ex + 1)).
        let p = (two * (T::E() * x + one)).max(T::zero()).sqrt();
        let series = -one + p - p * p / T::lit(3.0) + T::lit(11.0 / 72.0) * p * p * p
            - T::lit(43.0 / 540.0) * p * p * p * p;
        if p < T::lit(1e-3) {
            return Ok(series.max(-one));
        }
        series
    } else if x < T::lit(3.0) {
        (one + x).ln()
    } else {
        let l = x.ln();
        l - l.ln()
    };

    let tol = T::epsilon();
    for _ in 0..MAX_HALLEY {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + one;
        let denom = ew * wp1 - (w + two) * f / (two * wp1);
        if denom == T::zero() || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        w -= step;
        if step.abs() <= tol * (one + w.abs()) {
            break;
        }
    }
    Ok(w.max(-one))
}

/// Positive solution of `w + ln w = y`, i.e. `W0(exp(y))` without forming `exp(y)`.
pub fn lambert_w0_of_exp<T: Scalar>(y: T) -> T {
    if y.is_nan() {
        return y;
    }
    if y == T::infinity() {
        return y;
    }
    if y == T::neg_infinity() {
        return T::zero();
    }
    let one = T::one();
    // Both guesses put the iteration on a side from which Newton on the
    // concave residual converges monotonically (after at most one step).
    let mut w = if y >= one { y - y.ln() } else { y.exp() };
    if w == T::zero() {
        // exp underflow: w ~ exp(y) below the smallest subnormal
        return w;
    }
    let tol = T::lit(2.0) * T::epsilon();
    for _ in 0..MAX_NEWTON {
        let f = w + w.ln() - y;
        let mut next = w - f * w / (w + one);
        if !(next > T::zero()) {
            next = w * T::lit(0.5);
        }
        let step = (next - w).abs();
        w = next;
        if step <= tol * w {
            break;
        }
    }
    w
}

/// Exact radius of a shrinking round circle, defined for all real `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleSolution<T> {
    pub r0: T,
    /// `r0^2 + ln r0^2`.
    pub c: T,
}

impl<T: Scalar> CircleSolution<T> {
    pub fn new(r0: T) -> Result<Self> {
        if !(r0 > T::zero()) || !r0.is_finite() {
            return Err(FlowError::OutOfDomain(format!("circle radius must be positive, got {r0}")));
        }
        let r2 = r0 * r0;
        Ok(Self { r0, c: r2 + r2.ln() })
    }

    /// `sqrt(W(exp(c - 2t)))`.
    pub fn radius(&self, t: T) -> T {
        lambert_w0_of_exp(self.c - T::lit(2.0) * t).sqrt()
    }

    /// Right-hand side of the radius ODE, `-r / (r^2 + 1)`.
    pub fn radius_rate(&self, t: T) -> T {
        let r = self.radius(t);
        -r / (r * r + T::one())
    }
}

pub fn circle_radius<T: Scalar>(sol: &CircleSolution<T>, t: T) -> T {
    sol.radius(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    /// Bisection oracle for a monotone increasing `g` with a sign change on `[lo, hi]`.
    fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn known_values() {
        assert_eq!(lambert_w0(0.0_f64).unwrap(), 0.0);
        assert!((lambert_w0(E).unwrap() - 1.0).abs() < 1e-15);
        let omega = bisect(|w| w * w.exp() - 1.0, 0.0, 1.0);
        assert!((omega - 0.567143290409784).abs() < 1e-15);
        assert!((lambert_w0(1.0_f64).unwrap() - omega).abs() < 1e-15);
        assert!((lambert_w0(-(-1.0_f64).exp()).unwrap() + 1.0).abs() < 1e-7);
    }

    #[test]
    fn rejects_below_branch_point() {
        assert!(matches!(lambert_w0(-0.4_f64), Err(FlowError::OutOfDomain(_))));
        assert!(lambert_w0(f64::NAN).is_err());
    }

    #[test]
    fn halley_residual_is_tight() {
        for &x in &[-0.36_f64, -0.3, -0.1, 1e-8, 0.3, 2.0, 10.0, 1e3, 1e6, 1e100] {
            let w = lambert_w0(x).unwrap();
            assert!((w * w.exp() - x).abs() <= 1e-14 * x.abs().max(1e-300) * 4.0, "x = {x}");
            assert!(w >= -1.0);
        }
    }

    #[test]
    fn log_domain_values() {
        assert!((lambert_w0_of_exp(1.0_f64) - 1.0).abs() < 1e-15);
        let w100 = bisect(|w| w + w.ln() - 100.0, 1.0, 100.0);
        assert!((lambert_w0_of_exp(100.0_f64) - w100).abs() < 1e-12);
        assert!((w100 - 95.441487).abs() < 1e-6);
        let w = lambert_w0_of_exp(-50.0_f64);
        assert!((w + w.ln() + 50.0).abs() < 1e-12 * 50.0);
        assert!((w / (-50.0_f64).exp() - 1.0).abs() < 1e-10);
        for &y in &[500.0_f64, 1e4, 1e300] {
            let w = lambert_w0_of_exp(y);
            assert!(w.is_finite());
            assert!((w + w.ln() - y).abs() <= 1e-12 * y);
        }
    }

    #[test]
    fn single_precision_works() {
        let w = lambert_w0(1.0_f32).unwrap();
        assert!((w - 0.567_143_3).abs() < 1e-6);
        let r = CircleSolution::new(1.0_f32).unwrap().radius(0.0);
        assert!((r - 1.0).abs() < 1e-6);
    }

    #[test]
    fn circle_radius_examples() {
        let sol = CircleSolution::new(1.0_f64).unwrap();
        assert!((sol.radius(0.0) - 1.0).abs() < 1e-15);
        let h = 1e-5;
        let fd = (sol.radius(h) - sol.radius(-h)) / (2.0 * h);
        assert!((fd + 0.5).abs() < 1e-9);
        // t = 2: r^2 solves w e^w = e^{-3}
        let w = bisect(|w| w * w.exp() - (-3.0_f64).exp(), 0.0, 1.0);
        assert!((sol.radius(2.0) - w.sqrt()).abs() < 1e-14);
        assert!(CircleSolution::new(0.0_f64).is_err());
    }

    #[test]
    fn eternal_solution_far_in_the_past() {
        let sol = CircleSolution::new(1.0_f64).unwrap();
        let r = sol.radius(-400.0);
        assert!(r.is_finite() && r > 28.0);
        assert!(sol.radius(40.0) < 1e-15);
    }
}
