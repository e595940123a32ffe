//! Closed polygons and their purely geometric quantities.
//!
//! A [`PolyCurve`] is an ordered list of planar vertices with an implicit
//! closing edge from the last vertex back to the first. Quantities that need
//! an arclength measure (`ds`, tangents, curvature, ds-weighted norms) reject
//! curves with a zero-length edge instead of regularizing them.

use crate::error::{FlowError, Result};
use crate::scalar::{Field, Scalar, Vec2};

/// Ordered closed polygon, `n >= 3`, all coordinates finite.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCurve<T> {
    vertices: Vec<Vec2<T>>,
}

/// Arclength coordinates of a non-degenerate polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcData<T> {
    /// Cumulative arclength at each vertex, `s[0] == 0`.
    pub s: Vec<T>,
    /// Vertex quadrature weight: mean of the two adjacent edge lengths.
    pub ds: Vec<T>,
    /// Total length (perimeter).
    pub length: T,
}

/// Discrete Frenet data per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameData<T> {
    pub tangent: Vec<Vec2<T>>,
    /// `tangent` rotated by +90 degrees.
    pub normal: Vec<Vec2<T>>,
    /// Signed turning angle at each vertex.
    pub turning: Vec<T>,
    /// Turning angle divided by `ds`.
    pub curvature: Vec<T>,
}

impl<T: Scalar> FrameData<T> {
    /// Sum of turning angles, `±2π` for a simple closed polygon.
    pub fn total_turning(&self) -> T {
        self.turning.iter().copied().sum()
    }
}

/// The five norms of a vector field along a curve.
///
/// `du` norms use the uniform parameter weight `1/n` (the parameter circle has
/// unit length); `ds` norms use arclength weights. Derivative terms are
/// per-edge difference quotients weighted by the edge length in the
/// respective measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Norms<T> {
    pub linf: T,
    pub l2_du: T,
    pub l2_ds: T,
    pub h1_du: T,
    pub h1_ds: T,
}

/// Minimum chord-arc ratio over vertex pairs and the pair attaining it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChordArc<T> {
    pub value: T,
    pub i: usize,
    pub j: usize,
}

impl<T: Scalar> PolyCurve<T> {
    pub fn new(vertices: Vec<Vec2<T>>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(FlowError::InvalidCurve(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(FlowError::InvalidCurve(format!("vertex {i} is not finite")));
        }
        Ok(Self { vertices })
    }

    pub fn from_xy(points: &[(T, T)]) -> Result<Self> {
        Self::new(points.iter().map(|&(x, y)| Vec2::new(x, y)).collect())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Always false; a curve has at least three vertices.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn vertices(&self) -> &[Vec2<T>] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Vec2<T>> {
        self.vertices
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> Vec2<T> {
        self.vertices[i % self.len()]
    }

    /// `X_{i+1} - X_i` with cyclic indexing.
    #[inline]
    pub fn edge(&self, i: usize) -> Vec2<T> {
        let n = self.len();
        self.vertices[(i + 1) % n] - self.vertices[i % n]
    }

    pub fn edge_lengths(&self) -> Vec<T> {
        (0..self.len()).map(|i| self.edge(i).norm()).collect()
    }

    pub fn is_non_degenerate(&self) -> bool {
        self.edge_lengths().iter().all(|&e| e > T::zero())
    }

    /// Edge lengths, or `DegenerateCurve` naming the first zero-length edge.
    pub fn checked_edge_lengths(&self) -> Result<Vec<T>> {
        let e = self.edge_lengths();
        match e.iter().position(|&l| !(l > T::zero())) {
            Some(edge) => Err(FlowError::DegenerateCurve { edge }),
            None => Ok(e),
        }
    }

    /// Perimeter; degenerate edges simply contribute zero.
    pub fn total_length(&self) -> T {
        self.edge_lengths().into_iter().sum()
    }

    pub fn arc_data(&self) -> Result<ArcData<T>> {
        let e = self.checked_edge_lengths()?;
        Ok(arc_from_edges(&e))
    }

    /// Shoelace area, positive for counterclockwise orientation.
    pub fn signed_area(&self) -> T {
        let n = self.len();
        let twice: T = (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum();
        twice * T::lit(0.5)
    }

    pub fn frame_data(&self) -> Result<FrameData<T>> {
        let n = self.len();
        let e = self.checked_edge_lengths()?;
        let arc = arc_from_edges(&e);
        let dirs: Vec<Vec2<T>> = (0..n).map(|i| self.edge(i) / e[i]).collect();
        let mut tangent = Vec::with_capacity(n);
        let mut turning = Vec::with_capacity(n);
        for i in 0..n {
            let prev = dirs[(i + n - 1) % n];
            let next = dirs[i];
            // Antiparallel edges (a fold) leave the tangent perpendicular to both.
            tangent.push((prev + next).normalized().unwrap_or_else(|| next.perp()));
            turning.push(prev.cross(next).atan2(prev.dot(next)));
        }
        let normal = tangent.iter().map(|t| t.perp()).collect();
        let curvature = turning.iter().zip(&arc.ds).map(|(&th, &ds)| th / ds).collect();
        Ok(FrameData { tangent, normal, turning, curvature })
    }

    pub fn norms(&self, field: &[Vec2<T>]) -> Result<Norms<T>> {
        let n = self.len();
        check_field(n, field)?;
        let e = self.checked_edge_lengths()?;
        let arc = arc_from_edges(&e);
        let nf = T::count(n);

        let linf = field.iter().map(|v| v.norm()).fold(T::zero(), T::max);
        let l2_du_sq: T = field.iter().map(|v| v.norm_sq()).sum::<T>() / nf;
        let l2_ds_sq: T = field.iter().zip(&arc.ds).map(|(v, &w)| v.norm_sq() * w).sum();
        // |dv/du|^2 du = |dv|^2 n ; |dv/ds|^2 ds = |dv|^2 / edge
        let dv = |i: usize| (field[(i + 1) % n] - field[i]).norm_sq();
        let der_du: T = (0..n).map(|i| dv(i) * nf).sum();
        let der_ds: T = (0..n).map(|i| dv(i) / e[i]).sum();
        Ok(Norms {
            linf,
            l2_du: l2_du_sq.sqrt(),
            l2_ds: l2_ds_sq.sqrt(),
            h1_du: (l2_du_sq + der_du).sqrt(),
            h1_ds: (l2_ds_sq + der_ds).sqrt(),
        })
    }

    /// Minimum over vertex pairs of chord length over the shorter arc.
    pub fn chord_arc_min(&self) -> Result<ChordArc<T>> {
        let n = self.len();
        let arc = self.arc_data()?;
        let mut best = ChordArc { value: T::infinity(), i: 0, j: 1 };
        for i in 0..n {
            for j in (i + 1)..n {
                let d = arc.s[j] - arc.s[i];
                let along = d.min(arc.length - d);
                let ratio = (self.vertices[j] - self.vertices[i]).norm() / along;
                if ratio < best.value {
                    best = ChordArc { value: ratio, i, j };
                }
            }
        }
        Ok(best)
    }

    /// `max_i |X_i|`.
    pub fn linf(&self) -> T {
        self.vertices.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }

    /// `||X_u||_{L^2(du)}` with the unit-length parameter circle.
    pub fn xu_l2(&self) -> T {
        let n = self.len();
        let sum: T = (0..n).map(|i| self.edge(i).norm_sq()).sum();
        (sum * T::count(n)).sqrt()
    }

    pub fn min_edge(&self) -> T {
        self.edge_lengths().into_iter().fold(T::infinity(), T::min)
    }

    pub fn map(&self, f: impl Fn(Vec2<T>) -> Vec2<T>) -> Self {
        Self { vertices: self.vertices.iter().map(|&v| f(v)).collect() }
    }

    pub fn translated(&self, by: Vec2<T>) -> Self {
        self.map(|v| v + by)
    }

    pub fn rotated(&self, angle: T) -> Self {
        self.map(|v| v.rotated(angle))
    }

    pub fn scaled(&self, factor: T) -> Self {
        self.map(|v| v * factor)
    }

    /// Cyclic re-indexing: new vertex `i` is old vertex `i + shift`.
    pub fn reindexed(&self, shift: usize) -> Self {
        let n = self.len();
        Self { vertices: (0..n).map(|i| self.vertices[(i + shift) % n]).collect() }
    }

    /// Same point set traversed in the opposite direction.
    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self { vertices }
    }

    /// Add `h * field` vertexwise.
    pub fn displaced(&self, field: &[Vec2<T>], h: T) -> Result<Self> {
        check_field(self.len(), field)?;
        let vertices = self.vertices.iter().zip(field).map(|(&x, &v)| x + v * h).collect();
        Self::new(vertices)
    }
}

pub(crate) fn arc_from_edges<T: Scalar>(e: &[T]) -> ArcData<T> {
    let n = e.len();
    let mut s = Vec::with_capacity(n);
    let mut acc = T::zero();
    for &l in e {
        s.push(acc);
        acc += l;
    }
    let half = T::lit(0.5);
    let ds = (0..n).map(|i| (e[(i + n - 1) % n] + e[i]) * half).collect();
    ArcData { s, ds, length: acc }
}

pub(crate) fn check_field<T>(n: usize, field: &[Vec2<T>]) -> Result<()> {
    if field.len() != n {
        return Err(FlowError::FieldLength { expected: n, got: field.len() });
    }
    Ok(())
}

/// Constant field with value `c` on `n` vertices.
pub fn constant_field<T: Scalar>(n: usize, c: Vec2<T>) -> Field<T> {
    vec![c; n]
}
