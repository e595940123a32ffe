//! Time integration of the flow, forward and backward in time.

use crate::curve::PolyCurve;
use crate::diagnostics::{record, DiagnosticsRecord};
use crate::error::{FlowError, Result};
use crate::gradient::velocity_vectors;
use crate::scalar::{Scalar, Vec2};

/// Above this step size forward Euler is refused outright.
pub const MAX_DT: f64 = 2.0;
/// Above this step size a warning is logged.
pub const WARN_DT: f64 = 0.5;
const MAX_STEPS: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Euler,
    Rk4,
}

impl std::str::FromStr for Method {
    type Err = FlowError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler" => Ok(Method::Euler),
            "rk4" => Ok(Method::Rk4),
            other => Err(FlowError::InvalidConfig(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowConfig<T> {
    /// Positive step size; the sign of the step comes from `t1 - t0`.
    pub dt: T,
    pub t0: T,
    pub t1: T,
    pub method: Method,
    /// Runs stop with [`Termination::LengthGuard`] below this length.
    pub min_length_guard: T,
    pub record_every: usize,
    /// Also compute the asymptotic profile of the run.
    pub rescale_profile: bool,
}

impl<T: Scalar> Default for FlowConfig<T> {
    fn default() -> Self {
        Self {
            dt: T::lit(1e-2),
            t0: T::zero(),
            t1: T::one(),
            method: Method::Euler,
            min_length_guard: T::lit(1e-8),
            record_every: 1,
            rescale_profile: false,
        }
    }
}

impl<T: Scalar> FlowConfig<T> {
    pub fn new(dt: T, t0: T, t1: T, method: Method) -> Self {
        Self { dt, t0, t1, method, ..Self::default() }
    }

    pub fn record_every(mut self, k: usize) -> Self {
        self.record_every = k;
        self
    }

    pub fn with_profile(mut self) -> Self {
        self.rescale_profile = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(FlowError::InvalidConfig(m));
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if self.dt > T::lit(MAX_DT) {
            return bad(format!("dt = {} exceeds the stability limit {MAX_DT}", self.dt));
        }
        if !self.t0.is_finite() || !self.t1.is_finite() {
            return bad("time horizon must be finite".into());
        }
        if ((self.t1 - self.t0).abs() / self.dt).as_f64() > MAX_STEPS {
            return bad("more than 1e8 steps requested".into());
        }
        if self.record_every == 0 {
            return bad("record_every must be at least 1".into());
        }
        if !(self.min_length_guard >= T::zero()) {
            return bad("min_length_guard must be non-negative".into());
        }
        if self.dt > T::lit(WARN_DT) {
            log::warn!("dt = {} is above {WARN_DT}; forward Euler may be unstable", self.dt);
        }
        Ok(())
    }

    /// Number of uniform steps and the signed step that lands exactly on `t1`.
    pub fn steps(&self) -> (usize, T) {
        let span = self.t1 - self.t0;
        let k = ((span.abs() / self.dt).as_f64() - 1e-9).ceil().max(0.0) as usize;
        if k == 0 {
            (0, T::zero())
        } else {
            (k, span / T::count(k))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Completed,
    LengthGuard,
    NumericalFailure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<PolyCurve<T>>,
    pub records: Vec<DiagnosticsRecord<T>>,
    pub termination: Termination,
    /// Asymptotic profile, present when the run was configured with `rescale_profile`.
    pub profile: Option<Box<Trajectory<T>>>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> Option<(&T, &PolyCurve<T>)> {
        self.times.last().zip(self.states.last())
    }

    pub fn push(&mut self, t: T, state: PolyCurve<T>) -> Result<()> {
        self.records.push(record(&state, t)?);
        self.times.push(t);
        self.states.push(state);
        Ok(())
    }

    fn empty(termination: Termination) -> Self {
        Self { times: vec![], states: vec![], records: vec![], termination, profile: None }
    }
}

fn advance<T: Scalar>(x: &[Vec2<T>], v: &[Vec2<T>], h: T) -> Vec<Vec2<T>> {
    x.iter().zip(v).map(|(&p, &q)| p + q * h).collect()
}

/// `X + h V(X)`; negative `h` steps backward.
pub fn step_euler<T: Scalar>(curve: &PolyCurve<T>, h: T) -> Result<PolyCurve<T>> {
    let v = velocity_vectors(curve)?;
    PolyCurve::new(advance(curve.vertices(), &v, h))
}

/// Classical four-stage Runge-Kutta step; each stage rebuilds the kernel.
pub fn step_rk4<T: Scalar>(curve: &PolyCurve<T>, h: T) -> Result<PolyCurve<T>> {
    let x = curve.vertices();
    let half = h * T::lit(0.5);
    let k1 = velocity_vectors(curve)?;
    let k2 = velocity_vectors(&PolyCurve::new(advance(x, &k1, half))?)?;
    let k3 = velocity_vectors(&PolyCurve::new(advance(x, &k2, half))?)?;
    let k4 = velocity_vectors(&PolyCurve::new(advance(x, &k3, h))?)?;
    let sixth = h / T::lit(6.0);
    let two = T::lit(2.0);
    let next = (0..x.len())
        .map(|i| x[i] + (k1[i] + k2[i] * two + k3[i] * two + k4[i]) * sixth)
        .collect();
    PolyCurve::new(next)
}

pub fn step<T: Scalar>(curve: &PolyCurve<T>, h: T, method: Method) -> Result<PolyCurve<T>> {
    match method {
        Method::Euler => step_euler(curve, h),
        Method::Rk4 => step_rk4(curve, h),
    }
}

pub fn run_flow<T: Scalar>(initial: &PolyCurve<T>, cfg: &FlowConfig<T>) -> Result<Trajectory<T>> {
    cfg.validate()?;
    initial.checked_edge_lengths()?;
    let l0 = initial.total_length();
    if !(l0 > cfg.min_length_guard) {
        return Err(FlowError::ConstantMapGuard { length: l0.as_f64() });
    }
    let (steps, h) = cfg.steps();
    let mut traj = Trajectory::empty(Termination::Completed);
    traj.push(cfg.t0, initial.clone())?;

    let mut current = initial.clone();
    let mut done = 0;
    for k in 1..=steps {
        let t = cfg.t0 + h * T::count(k);
        let next = match step(&current, h, cfg.method) {
            Ok(c) => c,
            Err(FlowError::InvalidCurve(_)) | Err(FlowError::DegenerateCurve { .. }) => {
                traj.termination = Termination::NumericalFailure;
                break;
            }
            Err(FlowError::ConstantMapGuard { .. }) => {
                traj.termination = Termination::LengthGuard;
                break;
            }
            Err(e) => return Err(e),
        };
        if !next.is_non_degenerate() {
            traj.termination = Termination::NumericalFailure;
            break;
        }
        if next.total_length() < cfg.min_length_guard {
            traj.termination = Termination::LengthGuard;
            break;
        }
        current = next;
        done = k;
        if k % cfg.record_every == 0 || k == steps {
            traj.push(t, current.clone())?;
        }
    }
    // an early stop keeps the last good state even between recording points
    if done % cfg.record_every != 0 && done != steps {
        traj.push(cfg.t0 + h * T::count(done), current)?;
    }
    if cfg.rescale_profile {
        traj.profile = Some(Box::new(asymptotic_profile(&traj)?));
    }
    Ok(traj)
}

/// `Y(t) = e^t (X(t) - X(t, vertex 0))` with diagnostics recomputed on `Y`.
pub fn asymptotic_profile<T: Scalar>(traj: &Trajectory<T>) -> Result<Trajectory<T>> {
    if traj.times.windows(2).any(|w| w[1] < w[0]) {
        return Err(FlowError::InvalidConfig("asymptotic profile needs a forward trajectory".into()));
    }
    let mut out = Trajectory::empty(traj.termination);
    for (&t, x) in traj.times.iter().zip(&traj.states) {
        let anchor = x.vertex(0);
        let scale = t.exp();
        out.push(t, x.map(|p| (p - anchor) * scale))?;
    }
    Ok(out)
}

/// Left-endpoint quadrature of `int ||X_t||_{H1(ds)} dt` over a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryLength<T> {
    pub total: T,
    /// Running total after each recorded interval.
    pub partial_sums: Vec<T>,
}

pub fn trajectory_h1ds_length<T: Scalar>(traj: &Trajectory<T>) -> TrajectoryLength<T> {
    let mut acc = T::zero();
    let mut partial_sums = Vec::with_capacity(traj.records.len().saturating_sub(1));
    for w in traj.records.windows(2) {
        acc += w[0].grad_sq_h1ds.sqrt() * (w[1].t - w[0].t).abs();
        partial_sums.push(acc);
    }
    TrajectoryLength { total: acc, partial_sums }
}
