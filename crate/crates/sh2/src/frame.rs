//! The left-invariant orthonormal frame, metric, contact form, Lie brackets
//! and the controllability rank test.
//!
//! The distribution is spanned by `X1 = cosh z dx + sinh z dy` and `X2 = dz`;
//! the derived field is `X3 = [X1, X2] = -sinh z dx - cosh z dy`. The metric
//! on coordinates is `g = dx^2 - dy^2 + dz^2`, which restricts to the
//! identity on the frame, and the contact form annihilating the distribution
//! is `omega = cosh(z) dy - sinh(z) dx`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::GroupElement;

/// Central-difference step for coefficient derivatives.
///
/// Close to the optimum `(3 eps)^(1/3)` for cosh-scale coefficients, where
/// truncation and cancellation balance; a smaller step (1e-6) pushes the
/// cancellation floor of the symmetry residuals above 1e-6 at the corners
/// of the default sampling box.
pub const FD_STEP: f64 = 1e-5;

/// A tangent vector attached to a base point, in the coordinate basis
/// `(d/dx, d/dy, d/dz)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVector {
    /// Base point.
    pub base: GroupElement,
    /// Components in the coordinate basis.
    pub components: [f64; 3],
}

impl TangentVector {
    /// New tangent vector at `base`.
    pub fn new(base: GroupElement, components: [f64; 3]) -> Self {
        Self { base, components }
    }
}

type EvalFn = dyn Fn(GroupElement) -> [f64; 3] + Send + Sync;
type JacobianFn = dyn Fn(GroupElement) -> [[f64; 3]; 3] + Send + Sync;

/// A vector field given by evaluable coefficient functions of `(x, y, z)`
/// in the coordinate basis, optionally with closed-form derivatives.
#[derive(Clone)]
pub struct CoordinateVectorField {
    eval: Arc<EvalFn>,
    jacobian: Option<Arc<JacobianFn>>,
}

impl fmt::Debug for CoordinateVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoordinateVectorField")
            .field("analytic_jacobian", &self.jacobian.is_some())
            .finish()
    }
}

impl CoordinateVectorField {
    /// Field from coefficient functions only; derivatives fall back to
    /// central finite differences with step [`FD_STEP`].
    pub fn new(eval: impl Fn(GroupElement) -> [f64; 3] + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            jacobian: None,
        }
    }

    /// Field with closed-form coefficient derivatives;
    /// `jacobian(q)[i][j] = d(component i)/d(coordinate j)`.
    pub fn with_jacobian(
        eval: impl Fn(GroupElement) -> [f64; 3] + Send + Sync + 'static,
        jacobian: impl Fn(GroupElement) -> [[f64; 3]; 3] + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            jacobian: Some(Arc::new(jacobian)),
        }
    }

    /// Coefficients at `q`.
    pub fn eval(&self, q: GroupElement) -> [f64; 3] {
        (self.eval)(q)
    }

    /// Whether closed-form derivatives were supplied.
    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    /// Coefficient derivatives at `q`, analytic when available.
    pub fn jacobian(&self, q: GroupElement) -> [[f64; 3]; 3] {
        match &self.jacobian {
            Some(j) => j(q),
            None => self.fd_jacobian(q),
        }
    }

    /// Coefficient derivatives by central finite differences, regardless of
    /// whether a closed form exists.
    pub fn fd_jacobian(&self, q: GroupElement) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for j in 0..3 {
            let mut qp = q;
            let mut qm = q;
            match j {
                0 => {
                    qp.x += FD_STEP;
                    qm.x -= FD_STEP;
                }
                1 => {
                    qp.y += FD_STEP;
                    qm.y -= FD_STEP;
                }
                _ => {
                    qp.z += FD_STEP;
                    qm.z -= FD_STEP;
                }
            }
            let fp = self.eval(qp);
            let fm = self.eval(qm);
            for i in 0..3 {
                out[i][j] = (fp[i] - fm[i]) / (2.0 * FD_STEP);
            }
        }
        out
    }
}

/// The frame field `X1 = cosh z dx + sinh z dy`.
pub fn field_x1() -> CoordinateVectorField {
    CoordinateVectorField::with_jacobian(
        |q| [q.z.cosh(), q.z.sinh(), 0.0],
        |q| {
            [
                [0.0, 0.0, q.z.sinh()],
                [0.0, 0.0, q.z.cosh()],
                [0.0, 0.0, 0.0],
            ]
        },
    )
}

/// The frame field `X2 = dz`.
pub fn field_x2() -> CoordinateVectorField {
    CoordinateVectorField::with_jacobian(|_| [0.0, 0.0, 1.0], |_| [[0.0; 3]; 3])
}

/// The derived field `X3 = [X1, X2] = -sinh z dx - cosh z dy`.
pub fn field_x3() -> CoordinateVectorField {
    CoordinateVectorField::with_jacobian(
        |q| [-q.z.sinh(), -q.z.cosh(), 0.0],
        |q| {
            [
                [0.0, 0.0, -q.z.cosh()],
                [0.0, 0.0, -q.z.sinh()],
                [0.0, 0.0, 0.0],
            ]
        },
    )
}

/// Evaluates the frame `(X1, X2, X3)` at `q`.
pub fn eval_frame(q: GroupElement) -> (TangentVector, TangentVector, TangentVector) {
    let ch = q.z.cosh();
    let sh = q.z.sinh();
    (
        TangentVector::new(q, [ch, sh, 0.0]),
        TangentVector::new(q, [0.0, 0.0, 1.0]),
        TangentVector::new(q, [-sh, -ch, 0.0]),
    )
}

/// The metric `g = dx^2 - dy^2 + dz^2` on two tangent vectors at `q`.
///
/// Errors if `v` or `w` is not based at `q`.
pub fn metric_eval(q: GroupElement, v: &TangentVector, w: &TangentVector) -> Result<f64> {
    if !v.base.approx_eq(q, 1e-12) || !w.base.approx_eq(q, 1e-12) {
        return Err(Error::BasePointMismatch);
    }
    let a = v.components;
    let b = w.components;
    Ok(a[0] * b[0] - a[1] * b[1] + a[2] * b[2])
}

/// Diagonal coordinate metric coefficients of `g = dx^2 - dy^2 + dz^2`.
pub const METRIC_DIAG: [f64; 3] = [1.0, -1.0, 1.0];

/// The contact form `omega = cosh(z) dy - sinh(z) dx` on a tangent vector.
///
/// Vanishes exactly on the span of `X1` and `X2`.
pub fn contact_form_eval(q: GroupElement, v: &TangentVector) -> f64 {
    q.z.cosh() * v.components[1] - q.z.sinh() * v.components[0]
}

/// Coordinate coefficients `(omega_x, omega_y, omega_z)` of the contact form.
pub fn contact_form_coefficients(q: GroupElement) -> [f64; 3] {
    [-q.z.sinh(), q.z.cosh(), 0.0]
}

/// Coordinate Lie bracket `[v, w] = (v . grad) w - (w . grad) v` at `q`.
///
/// Uses closed-form derivatives when both fields supply them, otherwise
/// central finite differences with step [`FD_STEP`].
pub fn lie_bracket(
    v: &CoordinateVectorField,
    w: &CoordinateVectorField,
    q: GroupElement,
) -> TangentVector {
    let vq = v.eval(q);
    let wq = w.eval(q);
    let (jv, jw) = if v.has_analytic_jacobian() && w.has_analytic_jacobian() {
        (v.jacobian(q), w.jacobian(q))
    } else {
        (v.fd_jacobian(q), w.fd_jacobian(q))
    };
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += jw[i][j] * vq[j] - jv[i][j] * wq[j];
        }
    }
    TangentVector::new(q, out)
}

/// Rank of the span of a set of coordinate vectors, by Gaussian elimination
/// with partial pivoting; pivots below `tol` (relative to the largest entry)
/// count as zero.
pub fn rank_of_span(vectors: &[[f64; 3]], tol: f64) -> usize {
    let mut rows: Vec<[f64; 3]> = vectors.to_vec();
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()));
    if scale == 0.0 {
        return 0;
    }
    let threshold = tol * scale;
    let mut rank = 0;
    for col in 0..3 {
        let pivot = (rank..rows.len())
            .max_by(|&a, &b| rows[a][col].abs().partial_cmp(&rows[b][col].abs()).unwrap());
        let Some(p) = pivot else { break };
        if rows[p][col].abs() <= threshold {
            continue;
        }
        rows.swap(rank, p);
        for r in rank + 1..rows.len() {
            let f = rows[r][col] / rows[rank][col];
            for c in 0..3 {
                rows[r][c] -= f * rows[rank][c];
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Rank of `span{X1, X2, [X1, X2]}` at `q`; equals 3 everywhere, which is
/// the bracket-generating certificate for controllability.
pub fn lie_rank(q: GroupElement) -> usize {
    let x1 = field_x1();
    let x2 = field_x2();
    let bracket = lie_bracket(&x1, &x2, q);
    rank_of_span(&[x1.eval(q), x2.eval(q), bracket.components], 1e-9)
}

/// Numeric coefficient of `omega ^ d omega` against `dx ^ dy ^ dz` at `q`,
/// with the exterior derivative taken by central finite differences.
///
/// A nonzero value certifies that the distribution is contact at `q`; the
/// closed form evaluates to -1 everywhere.
pub fn contact_nondegeneracy(q: GroupElement) -> f64 {
    let w = contact_form_coefficients(q);
    let shift = |q: GroupElement, axis: usize, d: f64| {
        let mut s = q;
        match axis {
            0 => s.x += d,
            1 => s.y += d,
            _ => s.z += d,
        }
        s
    };
    // (d omega)_{ij} = d_i omega_j - d_j omega_i
    let mut dw = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let di_wj = (contact_form_coefficients(shift(q, i, FD_STEP))[j]
                - contact_form_coefficients(shift(q, i, -FD_STEP))[j])
                / (2.0 * FD_STEP);
            let dj_wi = (contact_form_coefficients(shift(q, j, FD_STEP))[i]
                - contact_form_coefficients(shift(q, j, -FD_STEP))[i])
                / (2.0 * FD_STEP);
            dw[i][j] = di_wj - dj_wi;
        }
    }
    w[0] * dw[1][2] - w[1] * dw[0][2] + w[2] * dw[0][1]
}
