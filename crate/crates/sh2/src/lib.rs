//! Sub-Riemannian control on the special hyperbolic group SH(2).
//!
//! The crate models the motions of the pseudo-Euclidean plane as a
//! three-dimensional Lie group, equips it with the rank-2 left-invariant
//! distribution of the unicycle system and its metric, and provides the
//! machinery the optimal control problem needs:
//!
//! - [`group`]: composition, inverses, the plane action, and the
//!   hyperbolic-rotation subgroup.
//! - [`frame`]: the orthonormal frame `X1, X2`, the derived field `X3`,
//!   metric and contact form, Lie brackets, and the controllability rank
//!   test.
//! - [`extremal`]: the normal Hamiltonian system of the maximum principle,
//!   the constant abnormal case, the pendulum reduction of the vertical
//!   subsystem, and the energy stratification `C1..C5` of the initial
//!   cylinder.
//! - [`symmetry`]: the infinitesimal symmetry algebra `v1, v2, v3`, numeric
//!   verification of the symmetry conditions, the flow of `v1`, and its
//!   fixed-point axis `S`.
//! - [`elliptic`]: the self-contained kernel of elliptic integrals and
//!   Jacobi functions.
//! - [`maxwell`]: stratum-wise `L1`/`L2` closed forms, the function
//!   `g(k) = E - k'^2 K` with its root scan, and Maxwell-point search by
//!   intersecting geodesics with `S`.
//!
//! # Example
//!
//! ```
//! use sh2::extremal::{classify, integrate_extremal, Covector, StepControl, Stratum};
//!
//! // An initial covector on the cylinder h1^2 + h2^2 = 1.
//! let h0 = Covector::from_angle(0.5, 0.25);
//! assert_eq!(classify(&h0, 1e-9).unwrap(), Stratum::C1);
//!
//! let traj = integrate_extremal(&h0, 5.0, &StepControl::default()).unwrap();
//! let end = traj.last();
//! assert!((end.state.hamiltonian() - 0.5).abs() < 1e-9);
//! ```

// Index-based stencils over [f64; 3] pair several arrays per iteration;
// iterator forms obscure them.
#![allow(clippy::needless_range_loop)]

pub mod elliptic;
pub mod error;
pub mod extremal;
pub mod frame;
pub mod group;
pub mod maxwell;
mod ode;
pub mod symmetry;

pub use error::{Error, Result};
pub use extremal::{Covector, ExtremalState, PendulumState, Stratum, Trajectory};
pub use group::{GroupElement, HyperbolicRotation, PlanePoint};

// Compile the guide's code samples as doc-tests so the book cannot drift
// from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/group.md")]
    mod group {}
    #[doc = include_str!("../../../book/src/frame.md")]
    mod frame {}
    #[doc = include_str!("../../../book/src/extremal.md")]
    mod extremal {}
    #[doc = include_str!("../../../book/src/symmetry.md")]
    mod symmetry {}
    #[doc = include_str!("../../../book/src/elliptic.md")]
    mod elliptic {}
    #[doc = include_str!("../../../book/src/maxwell.md")]
    mod maxwell {}
}
