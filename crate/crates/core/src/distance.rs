//! Path lengths in curve space under the L2(ds) metric, and the paths used to
//! show that the induced distance degenerates: shrinking toward a small copy,
//! reparametrizing it there, and Michor-Mumford zigzags.

use crate::curve::PolyCurve;
use crate::error::{FlowError, Result};
use crate::scalar::{Scalar, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathMode {
    /// Whole velocity is measured.
    Full,
    /// Only the normal component of the velocity is measured.
    Quotient,
}

impl PathMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PathMode::Full => "full",
            PathMode::Quotient => "quotient",
        }
    }
}

impl std::str::FromStr for PathMode {
    type Err = FlowError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(PathMode::Full),
            "quotient" => Ok(PathMode::Quotient),
            other => Err(FlowError::Parse(format!("unknown path mode {other:?}"))),
        }
    }
}

/// Samples `alpha(t_k)` of a path at uniform `t_k` in `[0, 1]`, matched by vertex index.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePath<T> {
    frames: Vec<PolyCurve<T>>,
    pub mode: PathMode,
}

impl<T: Scalar> CurvePath<T> {
    pub fn new(frames: Vec<PolyCurve<T>>, mode: PathMode) -> Result<Self> {
        if frames.len() < 2 {
            return Err(FlowError::MismatchedFrames(format!("need at least 2 frames, got {}", frames.len())));
        }
        let n = frames[0].len();
        for (k, f) in frames.iter().enumerate() {
            if f.len() != n {
                return Err(FlowError::MismatchedFrames(format!(
                    "frame {k} has {} vertices, frame 0 has {n}",
                    f.len()
                )));
            }
            if let Err(FlowError::DegenerateCurve { edge }) = f.checked_edge_lengths() {
                return Err(FlowError::MismatchedFrames(format!("frame {k} is degenerate at edge {edge}")));
            }
        }
        Ok(Self { frames, mode })
    }

    pub fn frames(&self) -> &[PolyCurve<T>] {
        &self.frames
    }

    pub fn vertex_count(&self) -> usize {
        self.frames[0].len()
    }

    pub fn with_mode(mut self, mode: PathMode) -> Self {
        self.mode = mode;
        self
    }

    /// Same frames traversed from the end to the start.
    pub fn reversed(&self) -> Self {
        let mut frames = self.frames.clone();
        frames.reverse();
        Self { frames, mode: self.mode }
    }

    pub fn map_frames(&self, f: impl Fn(&PolyCurve<T>) -> PolyCurve<T>) -> Result<Self> {
        Self::new(self.frames.iter().map(f).collect(), self.mode)
    }

    /// Base path position of vertex `i` at time `tau in [0, 1]`, linear between frames.
    fn position(&self, i: usize, tau: T) -> Vec2<T> {
        let last = self.frames.len() - 1;
        let x = tau.max(T::zero()).min(T::one()) * T::count(last);
        let k = (x.floor().to_usize().unwrap_or(0)).min(last - 1);
        let a = x - T::count(k);
        self.frames[k].vertex(i).lerp(self.frames[k + 1].vertex(i), a)
    }
}

/// Left-endpoint quadrature of `int_0^1 (int |alpha_t|^2 ds)^{1/2} dt`.
///
/// In quotient mode each edge contributes the normal component of its
/// midpoint velocity, weighted by its length, so the quotient length never
/// exceeds the full length.
pub fn path_length_l2ds<T: Scalar>(path: &CurvePath<T>) -> Result<T> {
    let frames = path.frames();
    let n = path.vertex_count();
    let steps = T::count(frames.len() - 1);
    let dt = T::one() / steps;
    let half = T::lit(0.5);
    let mut total = T::zero();
    for w in frames.windows(2) {
        let (cur, next) = (&w[0], &w[1]);
        let vel: Vec<Vec2<T>> =
            cur.vertices().iter().zip(next.vertices()).map(|(&a, &b)| (b - a) * steps).collect();
        let speed_sq = match path.mode {
            PathMode::Full => {
                let arc = cur.arc_data()?;
                vel.iter().zip(&arc.ds).map(|(v, &w)| v.norm_sq() * w).sum::<T>()
            }
            PathMode::Quotient => (0..n)
                .map(|i| {
                    let e = cur.edge(i);
                    let len = e.norm();
                    let mid = (vel[i] + vel[(i + 1) % n]) * half;
                    let vn = mid.dot(e.perp()) / len;
                    vn * vn * len
                })
                .sum::<T>(),
        };
        total += speed_sq.sqrt() * dt;
    }
    Ok(total)
}

/// Frames `((1 - t) + t lambda) * curve`.
pub fn shrink_path<T: Scalar>(curve: &PolyCurve<T>, lambda: T, frames: usize) -> Result<CurvePath<T>> {
    if !(lambda > T::zero() && lambda <= T::one()) {
        return Err(FlowError::OutOfDomain(format!("shrink factor must lie in (0, 1], got {lambda}")));
    }
    if frames < 2 {
        return Err(FlowError::MismatchedFrames("need at least 2 frames".into()));
    }
    let last = T::count(frames - 1);
    let out = (0..frames)
        .map(|k| {
            let t = T::count(k) / last;
            curve.scaled(T::one() - t + t * lambda)
        })
        .collect();
    CurvePath::new(out, PathMode::Full)
}

/// Orientation-preserving circle map given by per-vertex index displacements:
/// vertex `i` is sent to parameter `(i + d_i) / n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Twist<T> {
    pub displacement: Vec<T>,
}

impl<T: Scalar> Twist<T> {
    pub fn identity(n: usize) -> Self {
        Self { displacement: vec![T::zero(); n] }
    }

    /// `d_i = amplitude * sin(2 pi waves i / n)`; monotone when `2 pi waves amplitude < n`.
    pub fn sine(n: usize, amplitude: T, waves: usize) -> Self {
        let tau = T::lit(2.0) * T::PI() * T::count(waves) / T::count(n);
        Self { displacement: (0..n).map(|i| amplitude * (tau * T::count(i)).sin()).collect() }
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self { displacement: self.displacement.iter().map(|&d| d * factor).collect() }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let d = &self.displacement;
        if d.len() != n {
            return Err(FlowError::NonMonotoneTwist(format!("{} displacements for {n} vertices", d.len())));
        }
        if d.iter().any(|x| !x.is_finite()) {
            return Err(FlowError::NonMonotoneTwist("non-finite displacement".into()));
        }
        for i in 0..n {
            let j = (i + 1) % n;
            if !(d[j] - d[i] > -T::one()) {
                return Err(FlowError::NonMonotoneTwist(format!("vertices {i} and {j} swap order")));
            }
        }
        Ok(())
    }
}

/// Point on the polygon at fractional vertex index `q` (taken modulo `n`).
fn sample_polygon<T: Scalar>(curve: &PolyCurve<T>, q: T) -> Vec2<T> {
    let n = T::count(curve.len());
    let q = q - (q / n).floor() * n;
    let j = q.floor();
    let a = q - j;
    let j = j.to_usize().unwrap_or(0) % curve.len();
    curve.vertex(j).lerp(curve.vertex(j + 1), a)
}

/// Frames sampling `curve` at parameters `(1 - t) u_i + t theta(u_i)`.
pub fn reparam_path<T: Scalar>(curve: &PolyCurve<T>, twist: &Twist<T>, frames: usize) -> Result<CurvePath<T>> {
    let n = curve.len();
    twist.validate(n)?;
    if frames < 2 {
        return Err(FlowError::MismatchedFrames("need at least 2 frames".into()));
    }
    let last = T::count(frames - 1);
    let out = (0..frames)
        .map(|k| {
            let t = T::count(k) / last;
            let pts = (0..n).map(|i| sample_polygon(curve, T::count(i) + t * twist.displacement[i])).collect();
            PolyCurve::new(pts)
        })
        .collect::<Result<Vec<_>>>()?;
    CurvePath::new(out, PathMode::Full)
}

/// Michor-Mumford zigzag of `base` with `teeth` teeth, sampled at `frames` times.
///
/// Each tooth spans `n / teeth` vertices. A vertex at tooth fraction
/// `f in [0, 1]` (0 at the tooth tip, 1 halfway to the next tip) follows the
/// base path at double speed, `tau = clamp(2t - f, 0, 1)`: tips move during
/// `[0, 1/2]`, the in-between vertices during `[1/2, 1]`, the rest staggered
/// in between. The endpoints coincide with those of `base`.
pub fn zigzag_path<T: Scalar>(base: &CurvePath<T>, teeth: usize, frames: usize) -> Result<CurvePath<T>> {
    let n = base.vertex_count();
    if base.mode != PathMode::Full {
        return Err(FlowError::MismatchedFrames("zigzag needs a full-mode base path".into()));
    }
    if teeth == 0 || !n.is_multiple_of(2 * teeth) {
        return Err(FlowError::InvalidTeeth { teeth, n });
    }
    if frames < 2 {
        return Err(FlowError::MismatchedFrames("need at least 2 frames".into()));
    }
    let per = n / teeth;
    let two = T::lit(2.0);
    let frac: Vec<T> = (0..n)
        .map(|i| {
            let j = T::count(i % per);
            T::one() - (two * j / T::count(per) - T::one()).abs()
        })
        .collect();
    let last = T::count(frames - 1);
    let out = (0..frames)
        .map(|k| {
            let t = T::count(k) / last;
            let pts = (0..n).map(|i| base.position(i, two * t - frac[i])).collect();
            PolyCurve::new(pts)
        })
        .collect::<Result<Vec<_>>>()?;
    CurvePath::new(out, PathMode::Quotient)
}
