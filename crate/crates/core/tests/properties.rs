use std::f64::consts::PI;

use h1flow::{
    convolve_k, h1ds_inner, length_directional_derivative, step, velocity, Curve, Kernel, Method, Vec2,
};
use proptest::prelude::*;

/// Star-shaped curve `r(theta) = 1 + sum a_k cos(k theta + p_k)`, scaled and shifted.
fn star(n: usize, modes: &[(f64, f64)], scale: f64, shift: (f64, f64)) -> Curve {
    Curve::new(
        (0..n)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / n as f64;
                let r = 1.0
                    + modes.iter().enumerate().map(|(k, &(a, p))| a * ((k + 2) as f64 * th + p).cos()).sum::<f64>();
                Vec2::new(scale * r * th.cos() + shift.0, scale * r * th.sin() + shift.1)
            })
            .collect(),
    )
    .unwrap()
}

fn modes() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-0.08..0.08f64, 0.0..(2.0 * PI)), 0..4)
}

fn smooth_field(n: usize, coef: &[(f64, f64, f64, f64)]) -> Vec<Vec2<f64>> {
    (0..n)
        .map(|i| {
            let th = 2.0 * PI * i as f64 / n as f64;
            coef.iter().enumerate().fold(Vec2::zero(), |acc, (k, &(a, b, c, d))| {
                let (s, co) = ((k as f64 * th).sin(), (k as f64 * th).cos());
                acc + Vec2::new(a * co + b * s, c * co + d * s)
            })
        })
        .collect()
}

fn coefs() -> impl Strategy<Value = Vec<(f64, f64, f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn arc_weights_sum_to_length(m in modes(), scale in 0.1..5.0f64, n in 8usize..200) {
        let c = star(n, &m, scale, (0.3, -1.0));
        let a = c.arc_data().unwrap();
        let sum: f64 = a.ds.iter().sum();
        prop_assert!((sum - a.length).abs() <= 1e-12 * a.length);
        prop_assert!((a.length - c.total_length()).abs() <= 1e-12 * a.length);
    }

    #[test]
    fn chord_arc_at_most_one(m in modes(), scale in 0.1..5.0f64, n in 8usize..120) {
        let ca = star(n, &m, scale, (0.0, 0.0)).chord_arc_min().unwrap();
        prop_assert!(ca.value > 0.0 && ca.value <= 1.0 + 1e-12);
    }

    #[test]
    fn young_inequality(m in modes(), cf in coefs(), scale in 0.2..3.0f64) {
        let c = star(128, &m, scale, (0.5, 0.5));
        let f = smooth_field(128, &cf);
        let km = Kernel::new(&c).unwrap();
        let fk = convolve_k(&c, &f).unwrap();
        let lhs = c.norms(&fk).unwrap().l2_ds;
        let rhs = c.norms(&f).unwrap().l2_ds;
        // the discrete operator norm is bounded by the largest row sum
        prop_assert!(lhs <= rhs * (1.0 + km.quadrature_defect()) + 1e-12);
    }

    #[test]
    fn gradient_identity_holds_on_fine_curves(m in modes(), cf in coefs()) {
        let c = star(256, &m, 1.0, (0.0, 0.0));
        let v = smooth_field(256, &cf);
        let norm = h1ds_inner(&c, &v, &v).unwrap().sqrt();
        let dl = length_directional_derivative(&c, &v).unwrap();
        let grad: Vec<Vec2<f64>> = velocity(&c).unwrap().v.iter().map(|&w| -w).collect();
        let pairing = h1ds_inner(&c, &grad, &v).unwrap();
        prop_assert!((dl - pairing).abs() <= 2e-3 * norm, "{} vs {}", dl, pairing);
    }

    #[test]
    fn step_commutes_with_rotation_and_reindexing(
        m in modes(), angle in -PI..PI, shift in 0usize..64, h in 0.01..0.3f64
    ) {
        let c = star(64, &m, 1.3, (0.2, -0.1));
        let a = step(&c.rotated(angle), h, Method::Euler).unwrap();
        let b = step(&c, h, Method::Euler).unwrap().rotated(angle);
        for (p, q) in a.vertices().iter().zip(b.vertices()) {
            prop_assert!((*p - *q).norm() < 1e-12);
        }
        let a = step(&c.reindexed(shift), h, Method::Euler).unwrap();
        let b = step(&c, h, Method::Euler).unwrap().reindexed(shift);
        for (p, q) in a.vertices().iter().zip(b.vertices()) {
            prop_assert!((*p - *q).norm() < 1e-12);
        }
    }

    #[test]
    fn small_steps_shorten(m in modes(), scale in 0.2..4.0f64, h in 1e-3..0.1f64) {
        let c = star(96, &m, scale, (1.0, 2.0));
        let next = step(&c, h, Method::Euler).unwrap();
        prop_assert!(next.total_length() < c.total_length());
        prop_assert!(next.linf() <= c.linf() + 1e-12);
    }
}

#[test]
fn f32_and_f64_agree_on_short_runs() {
    let c64 = star(64, &[(0.05, 0.3)], 1.0, (0.0, 0.0));
    let c32 = h1flow::CurveF32::new(c64.vertices().iter().map(|v| Vec2::new(v.x as f32, v.y as f32)).collect())
        .unwrap();
    let (mut a, mut b) = (c64, c32);
    for _ in 0..10 {
        a = step(&a, 0.05, Method::Euler).unwrap();
        b = step(&b, 0.05f32, Method::Euler).unwrap();
    }
    for (p, q) in a.vertices().iter().zip(b.vertices()) {
        assert!((p.x - q.x as f64).abs() < 1e-4 && (p.y - q.y as f64).abs() < 1e-4);
    }
}
