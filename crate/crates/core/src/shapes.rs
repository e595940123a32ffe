//! Initial curves: circles, squares, ellipses, stars, barbells and files.

use std::path::PathBuf;

use crate::curve::PolyCurve;
use crate::error::{FlowError, Result};
use crate::io::read_curve;
use crate::scalar::{Scalar, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeKind {
    Circle,
    Square,
    Ellipse,
    Barbell,
    Star,
    File,
}

impl std::str::FromStr for ShapeKind {
    type Err = FlowError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "circle" => ShapeKind::Circle,
            "square" => ShapeKind::Square,
            "ellipse" => ShapeKind::Ellipse,
            "barbell" => ShapeKind::Barbell,
            "star" => ShapeKind::Star,
            "file" => ShapeKind::File,
            other => return Err(FlowError::InvalidSpec(format!("unknown shape {other:?}"))),
        })
    }
}

/// `size` is the radius (circle, star base radius, barbell lobes), the side
/// length (square) or the major semi-axis (ellipse).
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub kind: ShapeKind,
    pub size: f64,
    pub n: usize,
    /// Ellipse minor over major semi-axis.
    pub aspect: f64,
    /// Barbell neck half-width relative to `size`.
    pub neck: f64,
    /// Star radial modulation amplitude relative to `size`.
    pub amplitude: f64,
    pub lobes: usize,
    pub path: Option<PathBuf>,
}

impl GeneratorSpec {
    pub fn new(kind: ShapeKind, size: f64, n: usize) -> Self {
        Self { kind, size, n, aspect: 0.5, neck: 0.25, amplitude: 0.2, lobes: 5, path: None }
    }

    pub fn file(path: impl Into<PathBuf>) -> Self {
        Self { path: Some(path.into()), ..Self::new(ShapeKind::File, 1.0, 0) }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(FlowError::InvalidSpec(msg));
        if self.kind == ShapeKind::File {
            return match self.path {
                Some(_) => Ok(()),
                None => bad("file shape needs a path".into()),
            };
        }
        if self.n < 3 {
            return bad(format!("need at least 3 vertices, got {}", self.n));
        }
        if !(self.size > 0.0 && self.size.is_finite()) {
            return bad(format!("size must be positive, got {}", self.size));
        }
        match self.kind {
            ShapeKind::Square if !self.n.is_multiple_of(4) => bad(format!("square needs n divisible by 4, got {}", self.n)),
            ShapeKind::Ellipse if !(self.aspect > 0.0 && self.aspect.is_finite()) => {
                bad(format!("ellipse aspect must be positive, got {}", self.aspect))
            }
            ShapeKind::Barbell if !(self.neck > 0.0 && self.neck < 1.0) => {
                bad(format!("barbell neck must lie in (0, 1), got {}", self.neck))
            }
            ShapeKind::Star if !(self.amplitude > 0.0 && self.amplitude < 1.0) || self.lobes == 0 => {
                bad(format!("star needs amplitude in (0, 1) and lobes > 0, got {} and {}", self.amplitude, self.lobes))
            }
            _ => Ok(()),
        }
    }
}

fn polar<T: Scalar>(n: usize, r: impl Fn(f64) -> (f64, f64)) -> Result<PolyCurve<T>> {
    PolyCurve::new(
        (0..n)
            .map(|i| {
                let (x, y) = r(2.0 * std::f64::consts::PI * i as f64 / n as f64);
                Vec2::new(T::lit(x), T::lit(y))
            })
            .collect(),
    )
}

/// Centred square, counterclockwise, starting at the lower right corner.
fn square<T: Scalar>(side: f64, n: usize) -> Result<PolyCurve<T>> {
    let per = n / 4;
    let h = side / 2.0;
    let corners = [(h, -h), (h, h), (-h, h), (-h, -h)];
    let mut pts = Vec::with_capacity(n);
    for c in 0..4 {
        let (ax, ay) = corners[c];
        let (bx, by) = corners[(c + 1) % 4];
        for k in 0..per {
            let a = k as f64 / per as f64;
            pts.push(Vec2::new(T::lit(ax + a * (bx - ax)), T::lit(ay + a * (by - ay))));
        }
    }
    PolyCurve::new(pts)
}

/// Two discs of radius `r` centred at `(+-2r, 0)` joined by a neck of
/// half-width `h`, sampled uniformly in arclength.
fn barbell<T: Scalar>(r: f64, neck: f64, n: usize) -> Result<PolyCurve<T>> {
    use std::f64::consts::PI;
    let c = 2.0 * r;
    let h = neck * r;
    let alpha = (h / r).asin();
    let foot = c - (r * r - h * h).sqrt();
    let neck_len = 2.0 * foot;
    let arc_len = r * (2.0 * PI - 2.0 * alpha);
    let total = 2.0 * (neck_len + arc_len);
    let point = |s: f64| -> (f64, f64) {
        if s < neck_len {
            (-foot + s, -h)
        } else if s < neck_len + arc_len {
            let a = -PI + alpha + (s - neck_len) / r;
            (c + r * a.cos(), r * a.sin())
        } else if s < 2.0 * neck_len + arc_len {
            (foot - (s - neck_len - arc_len), h)
        } else {
            let a = alpha + (s - 2.0 * neck_len - arc_len) / r;
            (-c + r * a.cos(), r * a.sin())
        }
    };
    PolyCurve::new(
        (0..n)
            .map(|i| {
                let (x, y) = point(total * i as f64 / n as f64);
                Vec2::new(T::lit(x), T::lit(y))
            })
            .collect(),
    )
}

pub fn generate<T: Scalar>(spec: &GeneratorSpec) -> Result<PolyCurve<T>> {
    spec.validate()?;
    let (s, n) = (spec.size, spec.n);
    match spec.kind {
        ShapeKind::Circle => polar(n, |a| (s * a.cos(), s * a.sin())),
        ShapeKind::Square => square(s, n),
        ShapeKind::Ellipse => polar(n, |a| (s * a.cos(), s * spec.aspect * a.sin())),
        ShapeKind::Star => polar(n, |a| {
            let r = s * (1.0 + spec.amplitude * (spec.lobes as f64 * a).cos());
            (r * a.cos(), r * a.sin())
        }),
        ShapeKind::Barbell => barbell(s, spec.neck, n),
        ShapeKind::File => read_curve(spec.path.as_deref().expect("validated")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_n4() {
        let c: PolyCurve<f64> = generate(&GeneratorSpec::new(ShapeKind::Circle, 1.0, 4)).unwrap();
        let want = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (v, w) in c.vertices().iter().zip(want) {
            assert!((v.x - w.0).abs() < 1e-15 && (v.y - w.1).abs() < 1e-15);
        }
    }

    #[test]
    fn square_n8() {
        let c: PolyCurve<f64> = generate(&GeneratorSpec::new(ShapeKind::Square, 1.0, 8)).unwrap();
        assert!((c.total_length() - 4.0).abs() < 1e-15);
        assert!((c.signed_area() - 1.0).abs() < 1e-15);
        assert_eq!(c.vertex(0), Vec2::new(0.5, -0.5));
        assert_eq!(c.vertex(1), Vec2::new(0.5, 0.0));
        assert!(generate::<f64>(&GeneratorSpec::new(ShapeKind::Square, 1.0, 10)).is_err());
    }

    #[test]
    fn barbell_geometry() {
        let c: PolyCurve<f64> = generate(&GeneratorSpec::new(ShapeKind::Barbell, 1.0, 400)).unwrap();
        assert!(c.signed_area() > 0.0);
        assert!(c.chord_arc_min().unwrap().value > 0.0);
        let e = c.edge_lengths();
        let (lo, hi) = e.iter().fold((f64::MAX, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        assert!(hi / lo < 1.5 && hi <= c.total_length() / 400.0 * 1.05);
        assert!(c.vertices().iter().all(|v| v.x.abs() <= 3.0 + 1e-12 && v.y.abs() <= 1.0 + 1e-12));
        let iso = c.total_length().powi(2) / (4.0 * std::f64::consts::PI * c.signed_area());
        assert!(iso > 1.5);
    }

    #[test]
    fn defaults_are_embedded() {
        for kind in [ShapeKind::Circle, ShapeKind::Square, ShapeKind::Ellipse, ShapeKind::Star, ShapeKind::Barbell] {
            let c: PolyCurve<f64> = generate(&GeneratorSpec::new(kind, 1.0, 200)).unwrap();
            assert!(c.is_non_degenerate());
            assert!(c.chord_arc_min().unwrap().value > 0.0, "{kind:?}");
            assert!(c.signed_area() > 0.0);
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(generate::<f64>(&GeneratorSpec::new(ShapeKind::Circle, 1.0, 2)).is_err());
        assert!(generate::<f64>(&GeneratorSpec::new(ShapeKind::Circle, -1.0, 8)).is_err());
        assert!(generate::<f64>(&GeneratorSpec { path: None, ..GeneratorSpec::file("x") }).is_err());
        assert!(matches!(
            generate::<f64>(&GeneratorSpec::file("/nonexistent/curve.csv")),
            Err(FlowError::Io(_))
        ));
        assert!("blob".parse::<ShapeKind>().is_err());
    }
}
