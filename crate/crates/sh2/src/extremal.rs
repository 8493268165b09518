//! Extremal machinery of the optimal control problem: the normal Hamiltonian
//! system, the abnormal (constant) case, the pendulum reduction of the
//! vertical subsystem, and the energy stratification of the initial cylinder.
//!
//! Normal extremals solve
//!
//! ```text
//! h1' = h2 h3,   h2' = -h1 h3,   h3' = h1 h2,
//! x'  = h1 cosh z,   y' = h1 sinh z,   z' = h2,
//! ```
//!
//! with the Hamiltonian `H = (h1^2 + h2^2)/2` conserved. Initial covectors
//! live on the cylinder `C = {h1^2 + h2^2 = 1}`; in the angle coordinates
//! `h1 = cos(alpha)`, `h2 = sin(alpha)`, `gamma = 2 alpha`, `c = 2 h3` the
//! vertical subsystem is the mathematical pendulum `gamma' = c`,
//! `c' = -sin(gamma)` with energy `E = c^2/2 - cos(gamma)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::ode::{rk4_advance, Dopri5};

/// Strict cylinder tolerance used when constructing initial covectors.
pub const CYLINDER_TOL_STRICT: f64 = 1e-12;

/// Cylinder tolerance accepted by operations taking initial covectors.
pub const CYLINDER_TOL: f64 = 1e-9;

/// Default tolerance for the stratum boundaries `E = +/-1` and `c = 0`.
pub const DEFAULT_EPS_ENERGY: f64 = 1e-9;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Fiber coordinates `(h1, h2, h3)` on the cotangent bundle; the adjoint
/// state of the maximum principle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Covector {
    /// Momentum along `X1`.
    pub h1: f64,
    /// Momentum along `X2`.
    pub h2: f64,
    /// Momentum along the derived direction `X3`.
    pub h3: f64,
}

impl Covector {
    /// Unchecked covector (any point of the fiber).
    pub fn new(h1: f64, h2: f64, h3: f64) -> Self {
        Self { h1, h2, h3 }
    }

    /// Covector validated to lie on the cylinder `h1^2 + h2^2 = 1` within
    /// [`CYLINDER_TOL_STRICT`].
    pub fn on_cylinder(h1: f64, h2: f64, h3: f64) -> Result<Self> {
        let c = Self::new(h1, h2, h3);
        if c.cylinder_defect() > CYLINDER_TOL_STRICT {
            return Err(Error::OffCylinder { h1, h2 });
        }
        Ok(c)
    }

    /// Cylinder point from the angle `alpha`: `(cos alpha, sin alpha, h3)`.
    pub fn from_angle(alpha: f64, h3: f64) -> Self {
        Self::new(alpha.cos(), alpha.sin(), h3)
    }

    /// `h1^2 + h2^2`.
    pub fn horizontal_norm2(&self) -> f64 {
        self.h1 * self.h1 + self.h2 * self.h2
    }

    /// `|h1^2 + h2^2 - 1|`.
    pub fn cylinder_defect(&self) -> f64 {
        (self.horizontal_norm2() - 1.0).abs()
    }
}

/// Pendulum coordinates of the reduced vertical subsystem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PendulumState {
    /// Angle in `R / 4 pi Z`, stored in `[0, 4 pi)`.
    pub gamma: f64,
    /// Conjugate variable `c = 2 h3`.
    pub c: f64,
}

impl PendulumState {
    /// Normalizes `gamma` into `[0, 4 pi)`.
    pub fn new(gamma: f64, c: f64) -> Self {
        Self {
            gamma: gamma.rem_euclid(FOUR_PI),
            c,
        }
    }

    /// Pendulum energy `E = c^2/2 - cos(gamma)`.
    pub fn energy(&self) -> f64 {
        0.5 * self.c * self.c - self.gamma.cos()
    }
}

/// The pendulum vector field `(gamma', c') = (c, -sin gamma)`.
pub fn pendulum_rhs(p: &PendulumState) -> (f64, f64) {
    (p.c, -p.gamma.sin())
}

/// Stratum of the initial cylinder by pendulum energy: oscillation,
/// rotation, separatrix, stable equilibrium, unstable equilibrium.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stratum {
    /// `E` in `(-1, 1)`: oscillating pendulum.
    C1,
    /// `E > 1`: rotating pendulum.
    C2,
    /// `E = 1`, `c != 0`: separatrix motion.
    C3,
    /// `E = -1`: stable equilibrium.
    C4,
    /// `E = 1`, `c = 0`: unstable equilibrium.
    C5,
}

impl std::fmt::Display for Stratum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stratum::C1 => "C1",
            Stratum::C2 => "C2",
            Stratum::C3 => "C3",
            Stratum::C4 => "C4",
            Stratum::C5 => "C5",
        };
        f.write_str(s)
    }
}

/// Pendulum energy of a covector, `E = 2 h3^2 - h1^2 + h2^2`.
///
/// On the cylinder this equals `c^2/2 - cos(gamma)` of [`to_pendulum`].
pub fn energy(h: &Covector) -> f64 {
    2.0 * h.h3 * h.h3 - h.h1 * h.h1 + h.h2 * h.h2
}

/// Maps a cylinder covector to pendulum coordinates:
/// `gamma = 2 atan2(h2, h1)` in `[0, 4 pi)`, `c = 2 h3`.
pub fn to_pendulum(h: &Covector) -> Result<PendulumState> {
    if h.cylinder_defect() > CYLINDER_TOL {
        return Err(Error::OffCylinder { h1: h.h1, h2: h.h2 });
    }
    Ok(PendulumState::new(2.0 * h.h2.atan2(h.h1), 2.0 * h.h3))
}

/// Classifies a cylinder covector into its stratum with boundary tolerance
/// `eps` (see [`DEFAULT_EPS_ENERGY`]).
///
/// The separatrix level `E = 1` splits into `C3` (`|c| > eps`) and the
/// unstable equilibria `C5` (`|c| <= eps`) so the strata partition `C`.
pub fn classify(h: &Covector, eps: f64) -> Result<Stratum> {
    if h.cylinder_defect() > CYLINDER_TOL {
        return Err(Error::OffCylinder { h1: h.h1, h2: h.h2 });
    }
    let e = energy(h);
    let c = 2.0 * h.h3;
    if (e + 1.0).abs() <= eps {
        Ok(Stratum::C4)
    } else if (e - 1.0).abs() <= eps {
        if c.abs() > eps {
            Ok(Stratum::C3)
        } else {
            Ok(Stratum::C5)
        }
    } else if e < 1.0 {
        Ok(Stratum::C1)
    } else {
        Ok(Stratum::C2)
    }
}

/// A point of an extremal: base point and adjoint covector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExtremalState {
    /// Base point on the group.
    pub q: GroupElement,
    /// Adjoint covector.
    pub h: Covector,
}

impl ExtremalState {
    /// New extremal state.
    pub fn new(q: GroupElement, h: Covector) -> Self {
        Self { q, h }
    }

    /// The maximized Hamiltonian `H = (h1^2 + h2^2)/2`.
    pub fn hamiltonian(&self) -> f64 {
        0.5 * self.h.horizontal_norm2()
    }
}

/// Right-hand side of the normal Hamiltonian system at a state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremalDerivative {
    /// `(x', y', z')`.
    pub q_dot: [f64; 3],
    /// `(h1', h2', h3')`.
    pub h_dot: [f64; 3],
}

/// Evaluates the normal Hamiltonian vector field.
pub fn normal_rhs(s: &ExtremalState) -> ExtremalDerivative {
    let h = &s.h;
    let ch = s.q.z.cosh();
    let sh = s.q.z.sinh();
    ExtremalDerivative {
        q_dot: [h.h1 * ch, h.h1 * sh, h.h2],
        h_dot: [h.h2 * h.h3, -h.h1 * h.h3, h.h1 * h.h2],
    }
}

/// Stepper choice for trajectory integration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "scheme", rename_all = "kebab-case")]
pub enum StepMethod {
    /// Embedded Dormand-Prince 5(4) with mixed absolute/relative control.
    Adaptive {
        /// Relative tolerance.
        rel_tol: f64,
        /// Absolute tolerance.
        abs_tol: f64,
    },
    /// Classical fixed-step 4th order; pair with [`richardson_error`] to
    /// bound the discretization error.
    FixedRk4 {
        /// Step size (at most; intervals are split evenly).
        dt: f64,
    },
}

/// Step control: scheme plus output sample spacing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepControl {
    /// Integration scheme.
    pub method: StepMethod,
    /// Spacing of the recorded samples.
    pub sample_dt: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            method: StepMethod::Adaptive {
                rel_tol: 1e-10,
                abs_tol: 1e-10,
            },
            sample_dt: 1e-2,
        }
    }
}

impl StepControl {
    /// Adaptive control with the given tolerances and default sampling.
    pub fn adaptive(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            method: StepMethod::Adaptive { rel_tol, abs_tol },
            ..Self::default()
        }
    }

    /// Fixed-step control with the given step and default sampling.
    pub fn fixed(dt: f64) -> Self {
        Self {
            method: StepMethod::FixedRk4 { dt },
            ..Self::default()
        }
    }

    /// Same control with a different sample spacing.
    pub fn with_sample_dt(mut self, sample_dt: f64) -> Self {
        self.sample_dt = sample_dt;
        self
    }
}

/// One recorded trajectory sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectorySample {
    /// Time.
    pub t: f64,
    /// State at `t`.
    pub state: ExtremalState,
}

/// A time-sampled extremal: strictly increasing times starting at 0.
#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    /// Samples in increasing time order; the first is at `t = 0`.
    pub samples: Vec<TrajectorySample>,
    /// Step control the trajectory was produced with.
    pub control: StepControl,
}

impl Trajectory {
    /// Final sample.
    pub fn last(&self) -> &TrajectorySample {
        self.samples
            .last()
            .expect("trajectory has at least one sample")
    }

    /// CSV with header `t,x,y,z,h1,h2,h3`, one row per sample, full double
    /// precision (17 significant digits).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,z,h1,h2,h3\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                format_g17(s.t),
                format_g17(s.state.q.x),
                format_g17(s.state.q.y),
                format_g17(s.state.q.z),
                format_g17(s.state.h.h1),
                format_g17(s.state.h.h2),
                format_g17(s.state.h.h3),
            ));
        }
        out
    }
}

/// Formats a float with 17 significant digits (full `f64` precision),
/// deterministically.
pub fn format_g17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Hard cap on recorded samples per trajectory.
pub const MAX_SAMPLES: usize = 20_000_000;

/// Sample times `0, dt, 2dt, ..., t1` (the final time is always included).
fn sample_times(t1: f64, dt: f64) -> Vec<f64> {
    let mut times = vec![0.0];
    if t1 <= 0.0 {
        return times;
    }
    let mut i = 1u64;
    loop {
        let t = i as f64 * dt;
        if t >= t1 - 1e-12 * t1.max(1.0) {
            break;
        }
        times.push(t);
        i += 1;
    }
    times.push(t1);
    times
}

fn extremal_vector_rhs(_t: f64, y: &[f64; 6]) -> [f64; 6] {
    let state = ExtremalState::new(
        GroupElement::new(y[0], y[1], y[2]),
        Covector::new(y[3], y[4], y[5]),
    );
    let d = normal_rhs(&state);
    [
        d.q_dot[0], d.q_dot[1], d.q_dot[2], d.h_dot[0], d.h_dot[1], d.h_dot[2],
    ]
}

/// Integrates the normal extremal with initial covector `h0` from the
/// identity up to `t1`, sampling per `ctrl`.
///
/// `h0` must lie on the cylinder within [`CYLINDER_TOL`]; `t1 = 0` yields a
/// single sample at the identity.
pub fn integrate_extremal(h0: &Covector, t1: f64, ctrl: &StepControl) -> Result<Trajectory> {
    if h0.cylinder_defect() > CYLINDER_TOL {
        return Err(Error::OffCylinder {
            h1: h0.h1,
            h2: h0.h2,
        });
    }
    if !t1.is_finite() || t1 < 0.0 {
        return Err(Error::Domain {
            context: "integrate_extremal (need t1 >= 0)",
            value: t1,
        });
    }
    let y0 = [0.0, 0.0, 0.0, h0.h1, h0.h2, h0.h3];
    let samples = integrate_sampled(extremal_vector_rhs, y0, t1, ctrl)?
        .into_iter()
        .map(|(t, y)| TrajectorySample {
            t,
            state: ExtremalState::new(
                GroupElement::new(y[0], y[1], y[2]),
                Covector::new(y[3], y[4], y[5]),
            ),
        })
        .collect();
    Ok(Trajectory {
        samples,
        control: *ctrl,
    })
}

/// Continues an extremal from an arbitrary state; used for local refinement
/// around candidate times without restarting from the identity.
pub fn advance_extremal(
    state: &ExtremalState,
    t_from: f64,
    t_to: f64,
    ctrl: &StepControl,
) -> Result<ExtremalState> {
    let y0 = [
        state.q.x, state.q.y, state.q.z, state.h.h1, state.h.h2, state.h.h3,
    ];
    let y = advance(extremal_vector_rhs, y0, t_from, t_to, &ctrl.method)?;
    Ok(ExtremalState::new(
        GroupElement::new(y[0], y[1], y[2]),
        Covector::new(y[3], y[4], y[5]),
    ))
}

/// The abnormal extremal through `q0`: constant in time.
pub fn abnormal_trajectory(q0: GroupElement, t1: f64) -> Trajectory {
    let ctrl = StepControl::default();
    // Vertical part of an abnormal extremal: h1 = h2 = 0, h3 != 0 (any
    // nonzero h3 gives the same constant trajectory; 1 is recorded).
    let h = Covector::new(0.0, 0.0, 1.0);
    let samples = sample_times(t1.max(0.0), ctrl.sample_dt)
        .into_iter()
        .map(|t| TrajectorySample {
            t,
            state: ExtremalState::new(q0, h),
        })
        .collect();
    Trajectory {
        samples,
        control: ctrl,
    }
}

/// Integrates the pendulum `gamma' = c`, `c' = -sin gamma`, sampling per
/// `ctrl`; the returned angles are normalized into `[0, 4 pi)`.
pub fn integrate_pendulum(
    p0: &PendulumState,
    t1: f64,
    ctrl: &StepControl,
) -> Result<Vec<(f64, PendulumState)>> {
    if !t1.is_finite() || t1 < 0.0 {
        return Err(Error::Domain {
            context: "integrate_pendulum (need t1 >= 0)",
            value: t1,
        });
    }
    let rhs = |_t: f64, y: &[f64; 2]| [y[1], -y[0].sin()];
    let rows = integrate_sampled(rhs, [p0.gamma, p0.c], t1, ctrl)?;
    Ok(rows
        .into_iter()
        .map(|(t, y)| (t, PendulumState::new(y[0], y[1])))
        .collect())
}

/// Richardson error estimate for the fixed-step scheme: integrates the
/// extremal at steps `dt` and `dt/2` and returns the componentwise estimate
/// `max |y_dt - y_dt/2| / 15` of the finer result's error at `t1`.
pub fn richardson_error(h0: &Covector, t1: f64, dt: f64) -> Result<f64> {
    if h0.cylinder_defect() > CYLINDER_TOL {
        return Err(Error::OffCylinder {
            h1: h0.h1,
            h2: h0.h2,
        });
    }
    if dt.is_nan() || dt <= 0.0 || !t1.is_finite() || t1 < 0.0 {
        return Err(Error::Domain {
            context: "richardson_error (need dt > 0, t1 >= 0)",
            value: dt,
        });
    }
    let y0 = [0.0, 0.0, 0.0, h0.h1, h0.h2, h0.h3];
    let coarse = rk4_advance(&extremal_vector_rhs, 0.0, &y0, t1, dt)?;
    let fine = rk4_advance(&extremal_vector_rhs, 0.0, &y0, t1, 0.5 * dt)?;
    let max_diff = coarse
        .iter()
        .zip(fine.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    Ok(max_diff / 15.0)
}

fn advance<const N: usize>(
    rhs: fn(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    t_from: f64,
    t_to: f64,
    method: &StepMethod,
) -> Result<[f64; N]> {
    match *method {
        StepMethod::Adaptive { rel_tol, abs_tol } => {
            let mut solver = Dopri5::new(rhs, rel_tol, abs_tol);
            let mut y = y0;
            solver.advance(t_from, &mut y, t_to)?;
            Ok(y)
        }
        StepMethod::FixedRk4 { dt } => rk4_advance(&rhs, t_from, &y0, t_to, dt),
    }
}

fn integrate_sampled<const N: usize>(
    rhs: fn(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    t1: f64,
    ctrl: &StepControl,
) -> Result<Vec<(f64, [f64; N])>> {
    if ctrl.sample_dt.is_nan() || ctrl.sample_dt <= 0.0 {
        return Err(Error::Domain {
            context: "StepControl::sample_dt (need > 0)",
            value: ctrl.sample_dt,
        });
    }
    if t1 / ctrl.sample_dt > MAX_SAMPLES as f64 {
        return Err(Error::Domain {
            context: "StepControl::sample_dt (sample budget exceeded)",
            value: t1 / ctrl.sample_dt,
        });
    }
    let times = sample_times(t1, ctrl.sample_dt);
    let mut out = Vec::with_capacity(times.len());
    out.push((0.0, y0));
    match ctrl.method {
        StepMethod::Adaptive { rel_tol, abs_tol } => {
            let mut solver = Dopri5::new(rhs, rel_tol, abs_tol);
            let mut y = y0;
            let mut t_prev = 0.0;
            for &t in &times[1..] {
                solver.advance(t_prev, &mut y, t).map_err(|e| match e {
                    Error::Integration { last_good_time: _ } => Error::Integration {
                        last_good_time: t_prev,
                    },
                    other => other,
                })?;
                out.push((t, y));
                t_prev = t;
            }
        }
        StepMethod::FixedRk4 { dt } => {
            if dt.is_nan() || dt <= 0.0 {
                return Err(Error::Domain {
                    context: "StepMethod::FixedRk4 (need dt > 0)",
                    value: dt,
                });
            }
            let mut y = y0;
            let mut t_prev = 0.0;
            for &t in &times[1..] {
                y = rk4_advance(&rhs, t_prev, &y, t, dt).map_err(|e| match e {
                    Error::Integration { last_good_time: _ } => Error::Integration {
                        last_good_time: t_prev,
                    },
                    other => other,
                })?;
                out.push((t, y));
                t_prev = t;
            }
        }
    }
    Ok(out)
}
