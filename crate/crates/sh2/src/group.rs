//! The group SH(2) of motions of the pseudo-Euclidean plane.
//!
//! A motion `m(x, y, z)` translates by `(x, y)` after a hyperbolic rotation
//! of angle `z`. Elements are stored as raw coordinate triples; matrix forms
//! are derived on demand, so there is no renormalization drift.

use serde::{Deserialize, Serialize};

/// Default absolute tolerance for equality checks between group elements.
pub const DEFAULT_TOL: f64 = 1e-10;

/// A motion `(x, y, z)` of the pseudo-Euclidean plane; also the state of the
/// control system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    /// First translation coordinate.
    pub x: f64,
    /// Second translation coordinate.
    pub y: f64,
    /// Hyperbolic rotation angle.
    pub z: f64,
}

/// A point of the pseudo-Euclidean plane acted on by motions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    /// First coordinate.
    pub a1: f64,
    /// Second coordinate.
    pub a2: f64,
}

impl PlanePoint {
    /// New plane point.
    pub fn new(a1: f64, a2: f64) -> Self {
        Self { a1, a2 }
    }
}

impl GroupElement {
    /// The identity motion.
    pub const IDENTITY: Self = Self {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// New motion from coordinates.
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite() && z.is_finite());
        Self { x, y, z }
    }

    /// Group composition:
    /// `x3 = x2 cosh z1 + y2 sinh z1 + x1`,
    /// `y3 = x2 sinh z1 + y2 cosh z1 + y1`,
    /// `z3 = z1 + z2`.
    pub fn compose(self, other: Self) -> Self {
        let ch = self.z.cosh();
        let sh = self.z.sinh();
        Self {
            x: other.x * ch + other.y * sh + self.x,
            y: other.x * sh + other.y * ch + self.y,
            z: self.z + other.z,
        }
    }

    /// Group inverse:
    /// `(-x cosh z + y sinh z, x sinh z - y cosh z, -z)`.
    pub fn inverse(self) -> Self {
        let ch = self.z.cosh();
        let sh = self.z.sinh();
        Self {
            x: -self.x * ch + self.y * sh,
            y: self.x * sh - self.y * ch,
            z: -self.z,
        }
    }

    /// Affine action on the plane:
    /// `b1 = a1 cosh z + a2 sinh z + x`, `b2 = a1 sinh z + a2 cosh z + y`.
    pub fn act_on_plane(self, p: PlanePoint) -> PlanePoint {
        let ch = self.z.cosh();
        let sh = self.z.sinh();
        PlanePoint {
            a1: p.a1 * ch + p.a2 * sh + self.x,
            a2: p.a1 * sh + p.a2 * ch + self.y,
        }
    }

    /// Componentwise equality within an absolute tolerance.
    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        (self.x - other.x).abs() <= tol
            && (self.y - other.y).abs() <= tol
            && (self.z - other.z).abs() <= tol
    }
}

/// The one-parameter subgroup of hyperbolic rotations about the origin.
///
/// Its action on a motion coincides with left composition by `(0, 0, -s)`;
/// the linear part preserves the quadratic form `x^2 - y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicRotation {
    /// Boost parameter.
    pub s: f64,
}

impl HyperbolicRotation {
    /// New rotation with boost parameter `s`.
    pub fn new(s: f64) -> Self {
        Self { s }
    }

    /// Applies the rotation to a motion:
    /// `(x cosh s - y sinh s, y cosh s - x sinh s, z - s)`.
    pub fn apply(self, m: GroupElement) -> GroupElement {
        let ch = self.s.cosh();
        let sh = self.s.sinh();
        GroupElement {
            x: m.x * ch - m.y * sh,
            y: m.y * ch - m.x * sh,
            z: m.z - self.s,
        }
    }

    /// Applies the linear part to a plane point:
    /// `(a1 cosh s - a2 sinh s, a2 cosh s - a1 sinh s)`.
    pub fn apply_plane(self, p: PlanePoint) -> PlanePoint {
        let ch = self.s.cosh();
        let sh = self.s.sinh();
        PlanePoint {
            a1: p.a1 * ch - p.a2 * sh,
            a2: p.a2 * ch - p.a1 * sh,
        }
    }

    /// The 3x3 matrix form acting on column vectors `(x, y, z)^T`.
    pub fn matrix(self) -> [[f64; 3]; 3] {
        let ch = self.s.cosh();
        let sh = self.s.sinh();
        [[ch, -sh, 0.0], [-sh, ch, 0.0], [0.0, 0.0, 1.0]]
    }
}
