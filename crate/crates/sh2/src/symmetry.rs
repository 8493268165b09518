//! Infinitesimal symmetries of the control problem: the generators
//! `v1 = -y dx - x dy - dz`, `v2 = dx`, `v3 = dy`, numeric verification of
//! the symmetry conditions, the bracket table, the flow of `v1`, and its
//! fixed-point set `S = {(0, 0, z)}`.
//!
//! A field `v` is a symmetry when its Lie derivative preserves the
//! distribution (`omega([v, Xj]) = 0` for `j = 1, 2`) and kills the metric
//! (`L_v g = 0`). Both residuals are evaluated pointwise over a sampled box.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::extremal::Trajectory;
use crate::frame::{
    contact_form_eval, field_x1, field_x2, lie_bracket, CoordinateVectorField, METRIC_DIAG,
};
use crate::group::{GroupElement, HyperbolicRotation};

/// One of the built-in symmetry generators, or a user-supplied field.
#[derive(Clone, Debug)]
pub enum SymmetryField {
    /// `v1 = -y dx - x dy - dz`, the hyperbolic-rotation generator.
    V1,
    /// `v2 = dx`.
    V2,
    /// `v3 = dy`.
    V3,
    /// A named user-supplied coordinate field.
    Custom {
        /// Display name used in reports.
        name: String,
        /// The field.
        field: CoordinateVectorField,
    },
}

impl SymmetryField {
    /// Report name.
    pub fn name(&self) -> &str {
        match self {
            SymmetryField::V1 => "v1",
            SymmetryField::V2 => "v2",
            SymmetryField::V3 => "v3",
            SymmetryField::Custom { name, .. } => name,
        }
    }

    /// The coordinate field (built-ins carry closed-form derivatives).
    pub fn field(&self) -> CoordinateVectorField {
        match self {
            SymmetryField::V1 => CoordinateVectorField::with_jacobian(
                |q| [-q.y, -q.x, -1.0],
                |_| [[0.0, -1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
            ),
            SymmetryField::V2 => {
                CoordinateVectorField::with_jacobian(|_| [1.0, 0.0, 0.0], |_| [[0.0; 3]; 3])
            }
            SymmetryField::V3 => {
                CoordinateVectorField::with_jacobian(|_| [0.0, 1.0, 0.0], |_| [[0.0; 3]; 3])
            }
            SymmetryField::Custom { field, .. } => field.clone(),
        }
    }
}

/// Sampling specification for the pointwise symmetry check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SampleSpec {
    /// Number of sample points.
    pub count: usize,
    /// Points are drawn uniformly from `[-half_width, half_width]^3`.
    pub half_width: f64,
    /// RNG seed.
    pub seed: u64,
    /// Residual threshold a field must stay under to pass.
    pub threshold: f64,
    /// Force finite-difference derivatives even when closed forms exist.
    pub force_finite_differences: bool,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self {
            count: 200,
            half_width: 5.0,
            seed: 42,
            threshold: 1e-6,
            force_finite_differences: false,
        }
    }
}

/// Result of a pointwise symmetry verification.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    /// Field name.
    pub field: String,
    /// Max over samples of `|omega([v, Xj])|`, `j = 1, 2`.
    pub residual_contact: f64,
    /// Max over samples of the components of `L_v g`.
    pub residual_metric: f64,
    /// Number of sample points used.
    pub samples: usize,
    /// Threshold the residuals were compared against.
    pub tolerance: f64,
    /// Whether both residuals are below the threshold.
    pub pass: bool,
    /// False when a non-finite value was encountered.
    pub valid: bool,
}

fn sample_points(spec: &SampleSpec) -> Vec<GroupElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    (0..spec.count)
        .map(|_| {
            let w = spec.half_width;
            GroupElement::new(
                rng.gen_range(-w..=w),
                rng.gen_range(-w..=w),
                rng.gen_range(-w..=w),
            )
        })
        .collect()
}

/// The six independent components of `L_v g` at `q` for the diagonal metric
/// `g = dx^2 - dy^2 + dz^2`:
/// `(L_v g)_{ij} = g_jj d_i v^j + g_ii d_j v^i`.
fn metric_lie_derivative(jac: &[[f64; 3]; 3]) -> [f64; 6] {
    let mut out = [0.0; 6];
    let mut idx = 0;
    for i in 0..3 {
        for j in i..3 {
            out[idx] = METRIC_DIAG[j] * jac[j][i] + METRIC_DIAG[i] * jac[i][j];
            idx += 1;
        }
    }
    out
}

/// Verifies the two symmetry conditions for `v` over the sampled box and
/// reports the max residuals.
pub fn verify_symmetry(v: &SymmetryField, spec: &SampleSpec) -> SymmetryReport {
    let field = v.field();
    let field = if spec.force_finite_differences {
        let inner = field.clone();
        CoordinateVectorField::new(move |q| inner.eval(q))
    } else {
        field
    };
    let x1 = field_x1();
    let x2 = field_x2();
    let mut residual_contact: f64 = 0.0;
    let mut residual_metric: f64 = 0.0;
    let mut valid = true;
    for q in sample_points(spec) {
        for frame_field in [&x1, &x2] {
            let b = lie_bracket(&field, frame_field, q);
            let r = contact_form_eval(q, &b).abs();
            if !r.is_finite() {
                valid = false;
            }
            residual_contact = residual_contact.max(r);
        }
        let jac = if spec.force_finite_differences {
            field.fd_jacobian(q)
        } else {
            field.jacobian(q)
        };
        for r in metric_lie_derivative(&jac) {
            if !r.is_finite() {
                valid = false;
            }
            residual_metric = residual_metric.max(r.abs());
        }
    }
    SymmetryReport {
        field: v.name().to_string(),
        residual_contact,
        residual_metric,
        samples: spec.count,
        tolerance: spec.threshold,
        pass: valid && residual_contact < spec.threshold && residual_metric < spec.threshold,
        valid,
    }
}

/// One verified bracket relation between named fields.
#[derive(Clone, Debug, Serialize)]
pub struct BracketRelation {
    /// Left operand.
    pub left: String,
    /// Right operand.
    pub right: String,
    /// The field the bracket equals (`"0"` for the zero field).
    pub equals: String,
    /// Max componentwise deviation from the expected field over the samples.
    pub max_residual: f64,
}

fn check_bracket(
    left: (&str, &CoordinateVectorField),
    right: (&str, &CoordinateVectorField),
    equals: (&str, Option<&CoordinateVectorField>),
    sign: f64,
    points: &[GroupElement],
) -> BracketRelation {
    let mut max_residual: f64 = 0.0;
    for &q in points {
        let b = lie_bracket(left.1, right.1, q);
        let want = match equals.1 {
            Some(f) => f.eval(q).map(|c| sign * c),
            None => [0.0; 3],
        };
        for i in 0..3 {
            max_residual = max_residual.max((b.components[i] - want[i]).abs());
        }
    }
    let equals_name = if sign < 0.0 {
        format!("-{}", equals.0)
    } else {
        equals.0.to_string()
    };
    BracketRelation {
        left: left.0.to_string(),
        right: right.0.to_string(),
        equals: equals_name,
        max_residual,
    }
}

/// Structure constants of the symmetry algebra, verified by
/// finite-difference brackets at sampled points:
/// `[v1, v2] = v3`, `[v1, v3] = v2`, `[v2, v3] = 0`.
pub fn bracket_table() -> Vec<BracketRelation> {
    // Strip the closed-form derivatives so the table is an independent
    // finite-difference verification.
    let strip = |f: CoordinateVectorField| CoordinateVectorField::new(move |q| f.eval(q));
    let v1 = strip(SymmetryField::V1.field());
    let v2 = strip(SymmetryField::V2.field());
    let v3 = strip(SymmetryField::V3.field());
    let points = sample_points(&SampleSpec {
        count: 32,
        ..SampleSpec::default()
    });
    vec![
        check_bracket(("v1", &v1), ("v2", &v2), ("v3", Some(&v3)), 1.0, &points),
        check_bracket(("v1", &v1), ("v3", &v3), ("v2", Some(&v2)), 1.0, &points),
        check_bracket(("v2", &v2), ("v3", &v3), ("0", None), 1.0, &points),
    ]
}

/// Structure constants of the frame algebra, verified the same way:
/// `[X1, X2] = X3`, `[X2, X3] = -X1`, `[X1, X3] = 0`.
pub fn frame_bracket_table() -> Vec<BracketRelation> {
    let strip = |f: CoordinateVectorField| CoordinateVectorField::new(move |q| f.eval(q));
    let x1 = strip(field_x1());
    let x2 = strip(field_x2());
    let x3 = strip(crate::frame::field_x3());
    let points = sample_points(&SampleSpec {
        count: 32,
        ..SampleSpec::default()
    });
    vec![
        check_bracket(("X1", &x1), ("X2", &x2), ("X3", Some(&x3)), 1.0, &points),
        check_bracket(("X2", &x2), ("X3", &x3), ("X1", Some(&x1)), -1.0, &points),
        check_bracket(("X1", &x1), ("X3", &x3), ("0", None), 1.0, &points),
    ]
}

/// Flow of `v1` at time `s`:
/// `(x, y, z) -> (x cosh s - y sinh s, y cosh s - x sinh s, z - s)`.
///
/// Coincides with [`HyperbolicRotation::apply`].
pub fn flow_v1(q: GroupElement, s: f64) -> GroupElement {
    HyperbolicRotation::new(s).apply(q)
}

/// True when `q` lies in the fixed-point set `S = {(0, 0, z)}` of the flow,
/// within `tol`: `max(|x|, |y|) <= tol`.
pub fn is_fixed_point(q: GroupElement, tol: f64) -> bool {
    q.x.abs().max(q.y.abs()) <= tol
}

/// Applies the flow of `v1` pointwise to a trajectory's base points; the
/// covector samples are kept, and the image satisfies the horizontal system
/// with the same controls `u1 = h1(t)`, `u2 = h2(t)` (see
/// [`horizontal_residual`]).
pub fn map_geodesic(traj: &Trajectory, s: f64) -> Trajectory {
    let mut out = traj.clone();
    for sample in &mut out.samples {
        sample.state.q = flow_v1(sample.state.q, s);
    }
    out
}

/// Admissibility residuals of a sampled curve.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HorizontalResidual {
    /// Max componentwise deviation of the sampled velocity from
    /// `h1 X1 + h2 X2` at the sample's own base point.
    pub max_ode: f64,
    /// Max `|omega(velocity)|` over the samples (velocity in the
    /// distribution).
    pub max_contact: f64,
    /// Number of interior samples the residuals were evaluated at.
    pub samples: usize,
}

/// Checks that a trajectory is an integral curve of the horizontal system
/// with controls `(h1, h2)` read off its own covector samples.
///
/// Velocities are estimated by 4th-order central differences on the sample
/// grid, so the result is meaningful for uniformly spaced samples.
pub fn horizontal_residual(traj: &Trajectory) -> HorizontalResidual {
    let s = &traj.samples;
    let mut max_ode: f64 = 0.0;
    let mut max_contact: f64 = 0.0;
    let mut used = 0;
    for i in 2..s.len().saturating_sub(2) {
        let dt = s[i + 1].t - s[i].t;
        let grid_ok = [
            s[i - 1].t - s[i - 2].t,
            s[i].t - s[i - 1].t,
            s[i + 2].t - s[i + 1].t,
        ]
        .iter()
        .all(|&d| (d - dt).abs() < 1e-12 * (1.0 + dt));
        if !grid_ok {
            continue;
        }
        let coord = |j: usize| [s[j].state.q.x, s[j].state.q.y, s[j].state.q.z];
        let (qm2, qm1, qp1, qp2) = (coord(i - 2), coord(i - 1), coord(i + 1), coord(i + 2));
        let mut vel = [0.0; 3];
        for a in 0..3 {
            vel[a] = (-qp2[a] + 8.0 * qp1[a] - 8.0 * qm1[a] + qm2[a]) / (12.0 * dt);
        }
        let q = s[i].state.q;
        let h = s[i].state.h;
        let ch = q.z.cosh();
        let sh = q.z.sinh();
        let want = [h.h1 * ch, h.h1 * sh, h.h2];
        for a in 0..3 {
            max_ode = max_ode.max((vel[a] - want[a]).abs());
        }
        max_contact = max_contact.max((ch * vel[1] - sh * vel[0]).abs());
        used += 1;
    }
    HorizontalResidual {
        max_ode,
        max_contact,
        samples: used,
    }
}
