//! H1(ds) gradient flow of length for closed planar polygons.
//!
//! A polygon `X` evolves by `X_t = -grad L`, the steepest descent of its
//! perimeter in the Sobolev metric `<v, w> = int <v, w> + <v_s, w_s> ds`.
//! The gradient is an integral operator with the periodic Green's function
//! of `G_ss - G = delta`, so the flow runs forward and backward in time and
//! shrinks every curve toward a point without developing singularities.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! crate root fix `f64`.
//!
//! ```
//! use h1flow::{generate, run_flow, Config, Curve, GeneratorSpec, Method, ShapeKind};
//!
//! let square: Curve = generate(&GeneratorSpec::new(ShapeKind::Square, 1.0, 40)).unwrap();
//! let traj = run_flow(&square, &Config::new(0.1, 0.0, 1.0, Method::Euler)).unwrap();
//! assert!(traj.records.last().unwrap().length < 4.0);
//! ```

// `!(x > 0)` rejects NaN as well as non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod diagnostics;
pub mod distance;
pub mod error;
pub mod flow;
pub mod gradient;
pub mod io;
pub mod kernel;
pub mod lambert;
pub mod scalar;
pub mod shapes;

pub use curve::{constant_field, ArcData, ChordArc, FrameData, Norms, PolyCurve};
pub use diagnostics::{
    embeddedness_condition, monotonicity_report, record, DiagnosticsRecord, Embeddedness, MonitorVerdict,
    MonotonicityReport,
};
pub use distance::{path_length_l2ds, reparam_path, shrink_path, zigzag_path, CurvePath, PathMode, Twist};
pub use error::{FlowError, Result};
pub use flow::{
    asymptotic_profile, run_flow, step, step_euler, step_rk4, trajectory_h1ds_length, FlowConfig, Method,
    Termination, Trajectory, TrajectoryLength,
};
pub use gradient::{
    flow_velocity, flow_velocity_centered, h1ds_inner, length_directional_derivative, tangential_kernel_term,
    velocity, VelocityField,
};
pub use kernel::{convolve_k, greens_value, kernel_matrix, KernelMatrix, CONSTANT_MAP_GUARD};
pub use lambert::{circle_radius, lambert_w0, lambert_w0_of_exp, CircleSolution};
pub use scalar::{Field, Scalar, Vec2};
pub use shapes::{generate, GeneratorSpec, ShapeKind};

pub type Point = Vec2<f64>;
pub type Curve = PolyCurve<f64>;
pub type Kernel = KernelMatrix<f64>;
pub type Config = FlowConfig<f64>;
pub type Traj = Trajectory<f64>;
pub type Record = DiagnosticsRecord<f64>;
pub type Velocity = VelocityField<f64>;
pub type Path = CurvePath<f64>;
pub type Report = MonotonicityReport<f64>;

pub type CurveF32 = PolyCurve<f32>;
pub type ConfigF32 = FlowConfig<f32>;
pub type TrajF32 = Trajectory<f32>;
