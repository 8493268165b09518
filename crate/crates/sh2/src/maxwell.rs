//! Maxwell-point analysis: stratum-wise closed forms for the symmetric
//! coordinate combinations `L1 = x + y`, `L2 = x - y`, the function
//! `g(k) = E(k) - k'^2 K(k)` with its root scan, first-Maxwell-time
//! classification, and a numeric search for intersections of geodesics with
//! the fixed-point axis `S = {(0, 0, z)}`.
//!
//! The relation between the elliptic arguments and physical time is
//! stratum-dependent and not fixed here; the `L` operations take arguments
//! directly, while the time-domain statements are exercised through the
//! numeric search.

use serde::{Serialize, Serializer};

use crate::elliptic::{
    complete_e, complete_k, incomplete_e, jacobi_sn_cn_dn, EllipticArgument, Modulus,
};
use crate::error::{Error, Result};
use crate::extremal::{
    advance_extremal, classify, integrate_extremal, Covector, StepControl, Stratum,
    DEFAULT_EPS_ENERGY,
};
use crate::group::GroupElement;
use crate::symmetry::is_fixed_point;

/// Default horizon of the numeric intersection search.
pub const DEFAULT_T_MAX: f64 = 50.0;

/// Default lower time cutoff; every geodesic starts on the axis at `t = 0`,
/// so the search ignores `t < t_min`.
pub const DEFAULT_T_MIN: f64 = 0.1;

/// Default tolerance for counting a point as lying on the axis.
pub const DEFAULT_AXIS_TOL: f64 = 1e-6;

/// Number of initial brackets used by the root scan on `(0, 1)`.
pub const ROOT_SCAN_BRACKETS: usize = 256;

/// First Maxwell time of a geodesic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FirstTime {
    /// The geodesic never meets the Maxwell set.
    Infinity,
    /// Maxwell point at this time.
    Time(f64),
    /// The closed form needs a root of `g` that does not exist in `(0, 1)`;
    /// see the attached diagnostics.
    Undetermined,
}

impl Serialize for FirstTime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FirstTime::Infinity => s.serialize_str("inf"),
            FirstTime::Undetermined => s.serialize_str("undetermined"),
            FirstTime::Time(t) => s.serialize_f64(*t),
        }
    }
}

/// How a verdict was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictMethod {
    /// Stratum-wise closed form.
    ClosedForm,
    /// Sampling plus bracketed refinement of axis intersections.
    NumericSearch,
}

/// An intersection of the geodesic with the axis `S`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MaxwellPoint {
    /// Time of the intersection.
    pub t: f64,
    /// The point, within tolerance of `S`.
    #[serde(flatten)]
    pub q: GroupElement,
}

/// Extra context attached to a verdict.
#[derive(Clone, Debug, Default, Serialize)]
pub struct VerdictDiagnostics {
    /// The geodesic lies on the axis for every sampled time.
    pub continuous_intersection: bool,
    /// Lower time cutoff of the numeric search.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_min: Option<f64>,
    /// Horizon of the numeric search.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    /// Axis tolerance of the numeric search.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Root report for `g` when the closed form consulted it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k0: Option<K0Report>,
    /// Candidate lattice times `4 n k K(k)` reported alongside the located
    /// points when a modulus was supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_times: Option<Vec<f64>>,
}

/// Outcome of the Maxwell analysis for one initial covector.
#[derive(Clone, Debug, Serialize)]
pub struct MaxwellVerdict {
    /// Stratum of the initial covector.
    pub stratum: Stratum,
    /// First Maxwell time.
    pub first_time: FirstTime,
    /// Located axis intersections, each within tolerance of `S` and at
    /// `t >= t_min`.
    #[serde(rename = "points")]
    pub maxwell_points: Vec<MaxwellPoint>,
    /// How the verdict was obtained.
    pub method: VerdictMethod,
    /// Extra context.
    pub diagnostics: VerdictDiagnostics,
}

fn require_unit_modulus_interval(k: Modulus, context: &'static str) -> Result<()> {
    if k.k() <= 0.0 || k.k() >= 1.0 {
        return Err(Error::Domain {
            context,
            value: k.k(),
        });
    }
    Ok(())
}

fn require_nonzero_omega(omega: f64, context: &'static str) -> Result<()> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::Domain {
            context,
            value: omega,
        });
    }
    Ok(())
}

/// Oscillatory-stratum combinations:
/// `L1 = omega ((eps(phi_t) - eps(phi)) - k (sn(phi_t) - sn(phi)))`,
/// `L2 = ((eps(phi_t) - eps(phi)) + k (sn(phi_t) - sn(phi))) / (omega (1 - k^2))`.
pub fn l1_l2_c1(phi: f64, phi_t: f64, k: Modulus, omega: f64) -> Result<(f64, f64)> {
    require_unit_modulus_interval(k, "l1_l2_c1 (need 0 < k < 1)")?;
    require_nonzero_omega(omega, "l1_l2_c1 (need omega != 0)")?;
    let de = incomplete_e(EllipticArgument::new(phi_t, k)?)?
        - incomplete_e(EllipticArgument::new(phi, k)?)?;
    let dsn = jacobi_sn_cn_dn(EllipticArgument::new(phi_t, k)?)?.0
        - jacobi_sn_cn_dn(EllipticArgument::new(phi, k)?)?.0;
    let l1 = omega * (de - k.k() * dsn);
    let l2 = (de + k.k() * dsn) / (omega * k.complement_squared());
    Ok((l1, l2))
}

/// Rotating-stratum combinations with their simultaneous-zero factorization.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct C2Factorization {
    /// `L1 = omega (-(eps(psi_t) - eps(psi)) + k'^2 (psi_t - psi) + k (sn(psi_t) - sn(psi)))`.
    pub l1: f64,
    /// `L2 = ((eps(psi_t) - eps(psi)) - k'^2 (psi_t - psi) + k (sn(psi_t) - sn(psi))) / (omega (1 - k^2))`.
    pub l2: f64,
    /// `2 k (sn(psi_t) - sn(psi))`; vanishes exactly on the `4K` lattice.
    pub sn_factor: f64,
    /// `(eps(psi_t) - eps(psi)) - k'^2 (psi_t - psi)`; grows by `4 n g(k)`
    /// across `n` lattice periods.
    pub secular_factor: f64,
}

/// Rotating-stratum combinations `L1`, `L2`; both vanish simultaneously iff
/// both factors of the returned factorization vanish.
pub fn l1_l2_c2(psi: f64, psi_t: f64, k: Modulus, omega: f64) -> Result<C2Factorization> {
    require_unit_modulus_interval(k, "l1_l2_c2 (need 0 < k < 1)")?;
    require_nonzero_omega(omega, "l1_l2_c2 (need omega != 0)")?;
    let de = incomplete_e(EllipticArgument::new(psi_t, k)?)?
        - incomplete_e(EllipticArgument::new(psi, k)?)?;
    let dsn = jacobi_sn_cn_dn(EllipticArgument::new(psi_t, k)?)?.0
        - jacobi_sn_cn_dn(EllipticArgument::new(psi, k)?)?.0;
    let kp2 = k.complement_squared();
    let dpsi = psi_t - psi;
    Ok(C2Factorization {
        l1: omega * (-de + kp2 * dpsi + k.k() * dsn),
        l2: (de - kp2 * dpsi + k.k() * dsn) / (omega * kp2),
        sn_factor: 2.0 * k.k() * dsn,
        secular_factor: de - kp2 * dpsi,
    })
}

/// Separatrix-stratum combinations:
/// `L1 = (phi_t - phi) / omega`, `L2 = 2 omega (tanh(phi_t) - tanh(phi))`.
pub fn l1_l2_c3(phi: f64, phi_t: f64, omega: f64) -> Result<(f64, f64)> {
    require_nonzero_omega(omega, "l1_l2_c3 (need omega != 0)")?;
    Ok((
        (phi_t - phi) / omega,
        2.0 * omega * (phi_t.tanh() - phi.tanh()),
    ))
}

/// `g(k) = E(k) - (1 - k^2) K(k)` on `[0, 1)`.
///
/// `g(0) = 0` and `g'(k) = k K(k) > 0`, so `g` is strictly increasing with
/// `g([0, 1)) = [0, 1)`.
pub fn g_function(k: Modulus) -> Result<f64> {
    if k.k() >= 1.0 {
        return Err(Error::Domain {
            context: "g_function (need k < 1)",
            value: k.k(),
        });
    }
    Ok(complete_e(k)? - k.complement_squared() * complete_k(k)?)
}

/// One row of a `g` tabulation.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GScanRow {
    /// Grid modulus.
    pub k: f64,
    /// `g(k)`.
    pub g: f64,
    /// Central finite-difference derivative of `g` (step 1e-6, one-sided at
    /// the domain boundary `k = 0`).
    pub g_prime_fd: f64,
    /// `k K(k)`, the closed form the derivative is checked against.
    pub k_times_big_k: f64,
}

/// Root/sign-change report of a scan.
#[derive(Clone, Debug, Serialize)]
pub struct GScanReport {
    /// Whether `g` is nondecreasing across the grid.
    pub monotone_nondecreasing: bool,
    /// Interior sign changes found (refined roots).
    pub sign_changes: Vec<f64>,
    /// Grid argument of the minimum of `g`.
    pub min_k: f64,
    /// Minimum of `g` over the grid.
    pub min_g: f64,
    /// Whether `g` vanishes at `k = 0` (when the grid starts there).
    pub boundary_root_at_zero: bool,
}

/// A tabulation of `g` with its scan report.
#[derive(Clone, Debug, Serialize)]
pub struct GScan {
    /// Grid rows.
    pub rows: Vec<GScanRow>,
    /// Sign-change/monotonicity summary.
    pub report: GScanReport,
}

impl GScan {
    /// CSV with header `k,g,g_prime_fd,kK`, full double precision.
    pub fn to_csv(&self) -> String {
        use crate::extremal::format_g17;
        let mut out = String::from("k,g,g_prime_fd,kK\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                format_g17(r.k),
                format_g17(r.g),
                format_g17(r.g_prime_fd),
                format_g17(r.k_times_big_k),
            ));
        }
        out
    }
}

/// Tabulates `g`, its finite-difference derivative and `k K(k)` on a uniform
/// grid, and reports sign changes and monotonicity.
pub fn g_scan(k_min: f64, k_max: f64, n: usize) -> Result<GScan> {
    if !(0.0..1.0).contains(&k_min) || k_max >= 1.0 || k_min >= k_max {
        return Err(Error::Domain {
            context: "g_scan (need 0 <= k_min < k_max < 1)",
            value: if k_min >= k_max { k_max } else { k_min },
        });
    }
    if n < 2 {
        return Err(Error::Domain {
            context: "g_scan (need n >= 2)",
            value: n as f64,
        });
    }
    let step = (k_max - k_min) / (n - 1) as f64;
    let ks: Vec<f64> = (0..n).map(|i| k_min + i as f64 * step).collect();
    let gs: Vec<f64> = ks
        .iter()
        .map(|&k| g_function(Modulus::new(k)?))
        .collect::<Result<_>>()?;
    let g_at = |k: f64| g_function(Modulus::new(k).expect("inside [0,1)"));
    let fd_h = 1e-6;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let k = ks[i];
        let g_prime_fd = if k < fd_h {
            (g_at(k + fd_h)? - gs[i]) / fd_h
        } else if k + fd_h >= 1.0 {
            (gs[i] - g_at(k - fd_h)?) / fd_h
        } else {
            (g_at(k + fd_h)? - g_at(k - fd_h)?) / (2.0 * fd_h)
        };
        rows.push(GScanRow {
            k,
            g: gs[i],
            g_prime_fd,
            k_times_big_k: k * complete_k(Modulus::new(k)?)?,
        });
    }
    let monotone_nondecreasing = gs.windows(2).all(|w| w[1] >= w[0] - 1e-15);
    let sign_changes = find_roots(
        &|k| g_function(Modulus::new(k)?),
        ks[1].max(k_min + step),
        k_max,
        n.min(ROOT_SCAN_BRACKETS),
        1e-12,
    )?;
    let (min_idx, &min_g) = gs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .expect("non-empty grid");
    Ok(GScan {
        rows,
        report: GScanReport {
            monotone_nondecreasing,
            sign_changes,
            min_k: ks[min_idx],
            min_g,
            boundary_root_at_zero: k_min == 0.0 && gs[0].abs() <= 1e-12,
        },
    })
}

/// Bracket-scan plus bisection root finder on `[a, b]`.
///
/// Scans `brackets` equal subintervals for sign changes and bisects each to
/// width `tol`; endpoint values below 1e-14 in magnitude count as roots.
pub fn find_roots(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    brackets: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    if a.is_nan() || b.is_nan() || a >= b || brackets == 0 || tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain {
            context: "find_roots (need a < b, brackets > 0, tol > 0)",
            value: tol,
        });
    }
    let step = (b - a) / brackets as f64;
    let mut roots = Vec::new();
    let mut x0 = a;
    let mut f0 = f(x0)?;
    for i in 1..=brackets {
        let x1 = if i == brackets {
            b
        } else {
            a + i as f64 * step
        };
        let f1 = f(x1)?;
        if f0.abs() <= 1e-14 {
            push_root(&mut roots, x0, tol);
        } else if f0 * f1 < 0.0 {
            let mut lo = x0;
            let mut hi = x1;
            let mut flo = f0;
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid)?;
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if flo * fm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            push_root(&mut roots, 0.5 * (lo + hi), tol);
        }
        x0 = x1;
        f0 = f1;
    }
    if f0.abs() <= 1e-14 {
        push_root(&mut roots, b, tol);
    }
    Ok(roots)
}

fn push_root(roots: &mut Vec<f64>, x: f64, tol: f64) {
    if roots.last().is_none_or(|&r| (x - r).abs() > 2.0 * tol) {
        roots.push(x);
    }
}

/// Root report for `g` on the open interval `(0, 1)`.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum K0Report {
    /// Interior roots were found.
    InteriorRoot {
        /// The roots in increasing order.
        roots: Vec<f64>,
    },
    /// No interior root; `g > 0` on `(0, 1)` with its only zero at the
    /// boundary `k = 0`.
    NoInteriorRoot {
        /// Whether `g(0) = 0` within 1e-12.
        boundary_root_at_zero: bool,
        /// Grid argument of the interior minimum found by the scan.
        grid_min_k: f64,
        /// The interior minimum value.
        grid_min_g: f64,
    },
}

/// Searches `(0, 1)` for a root of `g` with a 256-bracket scan followed by
/// bisection to `tol`; a structured no-root diagnostic is a first-class
/// result, not an error.
pub fn find_k0(tol: f64) -> Result<K0Report> {
    let f = |k: f64| g_function(Modulus::new(k)?);
    let lo = 1e-6;
    let hi = 1.0 - 1e-6;
    let roots = find_roots(&f, lo, hi, ROOT_SCAN_BRACKETS, tol)?;
    if !roots.is_empty() {
        return Ok(K0Report::InteriorRoot { roots });
    }
    let mut grid_min_k = lo;
    let mut grid_min_g = f(lo)?;
    for i in 1..=ROOT_SCAN_BRACKETS {
        let k = lo + (hi - lo) * i as f64 / ROOT_SCAN_BRACKETS as f64;
        let v = f(k)?;
        if v < grid_min_g {
            grid_min_g = v;
            grid_min_k = k;
        }
    }
    Ok(K0Report::NoInteriorRoot {
        boundary_root_at_zero: f(0.0)?.abs() <= 1e-12,
        grid_min_k,
        grid_min_g,
    })
}

/// Stratum-wise first Maxwell time.
///
/// `C1`, `C3`, `C4`: the geodesic never returns to the axis, so the time is
/// infinite. `C2`: `4 k0 K(k0)` for the supplied modulus; when none is given
/// the root search runs and its (no-root) diagnostic is attached with the
/// time left undetermined. `C5`: the geodesic lies on the axis, so the
/// numeric search supplies the first admissible time.
pub fn first_maxwell_time(h0: &Covector, k0: Option<Modulus>) -> Result<MaxwellVerdict> {
    let stratum = classify(h0, DEFAULT_EPS_ENERGY)?;
    match stratum {
        Stratum::C1 | Stratum::C3 | Stratum::C4 => Ok(MaxwellVerdict {
            stratum,
            first_time: FirstTime::Infinity,
            maxwell_points: Vec::new(),
            method: VerdictMethod::ClosedForm,
            diagnostics: VerdictDiagnostics::default(),
        }),
        Stratum::C2 => {
            let mut diagnostics = VerdictDiagnostics::default();
            let first_time = match k0 {
                Some(k) => {
                    require_unit_modulus_interval(k, "first_maxwell_time (need 0 < k0 < 1)")?;
                    let t1 = 4.0 * k.k() * complete_k(k)?;
                    diagnostics.lattice_times = Some((1..=5).map(|n| n as f64 * t1).collect());
                    FirstTime::Time(t1)
                }
                None => {
                    let report = find_k0(1e-12)?;
                    let time = match &report {
                        K0Report::InteriorRoot { roots } => {
                            let k = Modulus::new(roots[0])?;
                            FirstTime::Time(4.0 * k.k() * complete_k(k)?)
                        }
                        K0Report::NoInteriorRoot { .. } => FirstTime::Undetermined,
                    };
                    diagnostics.k0 = Some(report);
                    time
                }
            };
            Ok(MaxwellVerdict {
                stratum,
                first_time,
                maxwell_points: Vec::new(),
                method: VerdictMethod::ClosedForm,
                diagnostics,
            })
        }
        Stratum::C5 => numeric_maxwell_search(h0, DEFAULT_T_MAX, DEFAULT_T_MIN, DEFAULT_AXIS_TOL),
    }
}

/// Integrates the geodesic and scans `r(t) = max(|x|, |y|)` for
/// intersections with the axis on `[t_min, t_max]`; local minima of `r`
/// below `10 tol` are refined by golden-section minimization and reported
/// when `r <= tol`.
pub fn numeric_maxwell_search(
    h0: &Covector,
    t_max: f64,
    t_min: f64,
    tol: f64,
) -> Result<MaxwellVerdict> {
    if t_min.is_nan() || t_max.is_nan() || t_min <= 0.0 || t_max <= t_min {
        return Err(Error::Domain {
            context: "numeric_maxwell_search (need 0 < t_min < t_max)",
            value: t_min,
        });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain {
            context: "numeric_maxwell_search (need tol > 0)",
            value: tol,
        });
    }
    let stratum = classify(h0, DEFAULT_EPS_ENERGY)?;
    let ctrl = StepControl::default();
    let traj = integrate_extremal(h0, t_max, &ctrl)?;
    let axis_dist = |q: &GroupElement| q.x.abs().max(q.y.abs());

    let considered: Vec<usize> = (0..traj.samples.len())
        .filter(|&i| traj.samples[i].t >= t_min)
        .collect();
    let on_axis = considered
        .iter()
        .filter(|&&i| axis_dist(&traj.samples[i].state.q) <= tol)
        .count();
    let continuous = !considered.is_empty() && on_axis * 10 >= considered.len() * 9;

    let mut diagnostics = VerdictDiagnostics {
        continuous_intersection: continuous,
        t_min: Some(t_min),
        t_max: Some(t_max),
        tol: Some(tol),
        ..VerdictDiagnostics::default()
    };

    let mut points: Vec<MaxwellPoint> = Vec::new();
    if continuous {
        // Every sampled time qualifies; report a thinned subset.
        let stride = (considered.len() / 64).max(1);
        for &i in considered.iter().step_by(stride) {
            let s = &traj.samples[i];
            points.push(MaxwellPoint {
                t: s.t,
                q: s.state.q,
            });
        }
    } else {
        // Refine interior local minima of r(t) that come close to the axis.
        let eval_r = |t: f64| -> Result<f64> {
            let idx = traj.samples.partition_point(|s| s.t <= t).saturating_sub(1);
            let base = &traj.samples[idx];
            let state = advance_extremal(&base.state, base.t, t, &ctrl)?;
            Ok(axis_dist(&state.q))
        };
        for w in considered.windows(3) {
            let (i0, i1, i2) = (w[0], w[1], w[2]);
            let r0 = axis_dist(&traj.samples[i0].state.q);
            let r1 = axis_dist(&traj.samples[i1].state.q);
            let r2 = axis_dist(&traj.samples[i2].state.q);
            if r1 <= r0 && r1 <= r2 && r1 < 10.0 * tol {
                let (mut lo, mut hi) = (traj.samples[i0].t, traj.samples[i2].t);
                // Golden-section minimization of r over the bracket.
                const INV_PHI: f64 = 0.618_033_988_749_894_9;
                let mut a = hi - INV_PHI * (hi - lo);
                let mut b = lo + INV_PHI * (hi - lo);
                let mut fa = eval_r(a)?;
                let mut fb = eval_r(b)?;
                for _ in 0..80 {
                    if hi - lo < 1e-12 {
                        break;
                    }
                    if fa < fb {
                        hi = b;
                        b = a;
                        fb = fa;
                        a = hi - INV_PHI * (hi - lo);
                        fa = eval_r(a)?;
                    } else {
                        lo = a;
                        a = b;
                        fa = fb;
                        b = lo + INV_PHI * (hi - lo);
                        fb = eval_r(b)?;
                    }
                }
                let t_star = 0.5 * (lo + hi);
                let idx = traj
                    .samples
                    .partition_point(|s| s.t <= t_star)
                    .saturating_sub(1);
                let base = &traj.samples[idx];
                let state = advance_extremal(&base.state, base.t, t_star, &ctrl)?;
                if t_star >= t_min
                    && is_fixed_point(state.q, tol)
                    && points
                        .last()
                        .is_none_or(|p| (t_star - p.t).abs() > 10.0 * tol)
                {
                    points.push(MaxwellPoint {
                        t: t_star,
                        q: state.q,
                    });
                }
            }
        }
    }

    let first_time = match points.first() {
        Some(p) => FirstTime::Time(p.t),
        None => FirstTime::Infinity,
    };
    if continuous {
        diagnostics.continuous_intersection = true;
    }
    Ok(MaxwellVerdict {
        stratum,
        first_time,
        maxwell_points: points,
        method: VerdictMethod::NumericSearch,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modulus(k: f64) -> Modulus {
        Modulus::new(k).unwrap()
    }

    #[test]
    fn g_at_zero_and_toward_one() {
        assert!(g_function(modulus(0.0)).unwrap().abs() < 1e-12);
        let near_one = g_function(modulus(0.999999)).unwrap();
        assert!((near_one - 1.0).abs() < 1e-2);
        assert!(g_function(modulus(1.0)).is_err());
    }

    #[test]
    fn g_reference_value() {
        // Frozen from quadrature of the defining integrals.
        let g = g_function(modulus(0.5)).unwrap();
        assert!((g - 0.20314944322998012).abs() < 1e-12);
    }

    #[test]
    fn g_derivative_matches_k_times_big_k() {
        let h = 1e-6;
        let mut k = 0.05;
        while k <= 0.95 {
            let fd = (g_function(modulus(k + h)).unwrap() - g_function(modulus(k - h)).unwrap())
                / (2.0 * h);
            let want = k * complete_k(modulus(k)).unwrap();
            assert!(
                ((fd - want) / want).abs() < 1e-5,
                "k={k}: fd={fd}, kK={want}"
            );
            k += 0.05;
        }
    }

    #[test]
    fn g_scan_is_monotone_with_boundary_root() {
        let scan = g_scan(0.0, 0.99, 100).unwrap();
        assert_eq!(scan.rows.len(), 100);
        assert!(scan.report.monotone_nondecreasing);
        assert!(scan.report.boundary_root_at_zero);
        assert!(scan.report.sign_changes.is_empty());
        assert!(scan.rows[0].g.abs() < 1e-12);
        for w in scan.rows.windows(2) {
            assert!(w[1].g >= w[0].g);
        }
        for r in &scan.rows[1..scan.rows.len() - 1] {
            assert!(
                ((r.g_prime_fd - r.k_times_big_k) / r.k_times_big_k).abs() < 1e-5,
                "derivative column at k={}: fd={}, kK={}",
                r.k,
                r.g_prime_fd,
                r.k_times_big_k
            );
        }
    }

    #[test]
    fn g_scan_rejects_bad_grids() {
        assert!(g_scan(0.5, 0.4, 10).is_err());
        assert!(g_scan(0.0, 0.9, 1).is_err());
        assert!(g_scan(0.0, 1.0, 10).is_err());
    }

    #[test]
    fn root_finder_self_tests() {
        let roots = find_roots(&|k| Ok(k - 0.5), 0.0, 1.0, 64, 1e-12).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 0.5).abs() < 1e-10);

        let roots = find_roots(&|k| Ok((k - 0.3) * (k - 0.7)), 0.0, 1.0, 64, 1e-12).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 0.3).abs() < 1e-10);
        assert!((roots[1] - 0.7).abs() < 1e-10);

        let roots = find_roots(&|k| Ok(k * k + 1.0), 0.0, 1.0, 64, 1e-12).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn k0_search_reports_the_no_root_diagnostic() {
        match find_k0(1e-12).unwrap() {
            K0Report::NoInteriorRoot {
                boundary_root_at_zero,
                grid_min_k,
                grid_min_g,
            } => {
                assert!(boundary_root_at_zero);
                assert!(grid_min_g > 0.0);
                assert!(grid_min_k < 0.01);
            }
            K0Report::InteriorRoot { roots } => panic!("unexpected roots {roots:?}"),
        }
    }

    #[test]
    fn c1_combinations_vanish_only_together_with_the_energy_difference() {
        let k = modulus(0.5);
        let omega = 1.3;
        let (l1, l2) = l1_l2_c1(0.3, 0.3, k, omega).unwrap();
        assert_eq!((l1, l2), (0.0, 0.0));

        // phi = 0, phi_t = 4K: the sn difference cancels and L1 = 4 omega E.
        let quarter = complete_k(k).unwrap();
        let e = complete_e(k).unwrap();
        let (l1, _) = l1_l2_c1(0.0, 4.0 * quarter, k, omega).unwrap();
        assert!((l1 - 4.0 * omega * e).abs() < 1e-9);

        // Dense scan: no simultaneous zero for phi_t in (phi, phi + 8K].
        let phi = 0.3;
        let mut min_pair: f64 = f64::INFINITY;
        for i in 1..=2000 {
            let phi_t = phi + 8.0 * quarter * i as f64 / 2000.0;
            let (l1, l2) = l1_l2_c1(phi, phi_t, k, omega).unwrap();
            min_pair = min_pair.min(l1.abs().max(l2.abs()));
        }
        assert!(min_pair > 1e-3, "near-simultaneous zero found: {min_pair}");
    }

    #[test]
    fn c1_rejects_bad_parameters() {
        assert!(l1_l2_c1(0.0, 1.0, modulus(0.5), 0.0).is_err());
        assert!(l1_l2_c1(0.0, 1.0, modulus(0.0), 1.0).is_err());
        assert!(l1_l2_c1(0.0, 1.0, modulus(1.0), 1.0).is_err());
    }

    #[test]
    fn c2_lattice_behaviour() {
        let k = modulus(0.6);
        let omega = 0.9;
        let f = l1_l2_c2(0.2, 0.2, k, omega).unwrap();
        assert_eq!((f.l1, f.l2), (0.0, 0.0));

        // psi = 0, psi_t = 4K: sn factor vanishes, secular factor is 4 g(k).
        let quarter = complete_k(k).unwrap();
        let g = g_function(k).unwrap();
        let f = l1_l2_c2(0.0, 4.0 * quarter, k, omega).unwrap();
        assert!(f.sn_factor.abs() < 1e-9);
        assert!((f.secular_factor - 4.0 * g).abs() < 1e-9);

        // sn factor vanishes on the whole 4K lattice.
        for n in 1..=3 {
            let f = l1_l2_c2(0.7, 0.7 + 4.0 * n as f64 * quarter, k, omega).unwrap();
            assert!(f.sn_factor.abs() < 1e-9, "n={n}");
            assert!(
                ((f.secular_factor - 4.0 * n as f64 * g) / (4.0 * n as f64 * g)).abs() < 1e-9,
                "n={n}"
            );
        }
    }

    #[test]
    fn c3_combinations() {
        let (l1, l2) = l1_l2_c3(0.4, 0.4, 2.0).unwrap();
        assert_eq!((l1, l2), (0.0, 0.0));
        let (l1, l2) = l1_l2_c3(0.0, 1.0, 1.0).unwrap();
        assert!((l1 - 1.0).abs() < 1e-15);
        assert!((l2 - 2.0 * 1.0f64.tanh()).abs() < 1e-15);
        // L1 is strictly positive for phi_t > phi.
        for i in 1..100 {
            let phi_t = 0.4 + i as f64 * 0.05;
            let (l1, _) = l1_l2_c3(0.4, phi_t, 2.0).unwrap();
            assert!(l1 > 0.0);
        }
        assert!(l1_l2_c3(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn closed_form_verdicts_by_stratum() {
        let v = first_maxwell_time(&Covector::new(1.0, 0.0, 0.0), None).unwrap();
        assert_eq!(v.stratum, Stratum::C4);
        assert_eq!(v.first_time, FirstTime::Infinity);
        assert!(v.maxwell_points.is_empty());

        let v = first_maxwell_time(&Covector::new(1.0, 0.0, 1.0), None).unwrap();
        assert_eq!(v.stratum, Stratum::C3);
        assert_eq!(v.first_time, FirstTime::Infinity);

        let c1 = Covector::from_angle(0.5, 0.25);
        let v = first_maxwell_time(&c1, None).unwrap();
        assert_eq!(v.stratum, Stratum::C1);
        assert_eq!(v.first_time, FirstTime::Infinity);
    }

    #[test]
    fn c2_verdict_with_supplied_modulus() {
        let h0 = Covector::new(0.6, 0.8, 1.0);
        let k = modulus(0.9);
        let v = first_maxwell_time(&h0, Some(k)).unwrap();
        assert_eq!(v.stratum, Stratum::C2);
        let want = 4.0 * 0.9 * complete_k(k).unwrap();
        match v.first_time {
            FirstTime::Time(t) => assert!((t - want).abs() < 1e-12),
            other => panic!("expected a time, got {other:?}"),
        }
        let lattice = v.diagnostics.lattice_times.unwrap();
        assert_eq!(lattice.len(), 5);
        assert!((lattice[0] - want).abs() < 1e-12);
        assert!((lattice[4] - 5.0 * want).abs() < 1e-11);
    }

    #[test]
    fn c2_verdict_without_modulus_carries_the_diagnostic() {
        let h0 = Covector::new(0.6, 0.8, 1.0);
        let v = first_maxwell_time(&h0, None).unwrap();
        assert_eq!(v.stratum, Stratum::C2);
        assert_eq!(v.first_time, FirstTime::Undetermined);
        assert!(matches!(
            v.diagnostics.k0,
            Some(K0Report::NoInteriorRoot { .. })
        ));
    }

    #[test]
    fn numeric_search_continuous_on_the_axis_stratum() {
        let v = numeric_maxwell_search(&Covector::new(0.0, 1.0, 0.0), 10.0, 0.1, 1e-6).unwrap();
        assert_eq!(v.stratum, Stratum::C5);
        assert!(v.diagnostics.continuous_intersection);
        assert!(!v.maxwell_points.is_empty());
        match v.first_time {
            FirstTime::Time(t) => assert!(t >= 0.1),
            other => panic!("expected a time, got {other:?}"),
        }
        for p in &v.maxwell_points {
            assert!(is_fixed_point(p.q, 1e-6));
            assert!(p.t >= 0.1);
        }
    }

    #[test]
    fn numeric_search_finds_nothing_on_the_line_stratum() {
        let v = numeric_maxwell_search(&Covector::new(1.0, 0.0, 0.0), 50.0, 0.1, 1e-6).unwrap();
        assert_eq!(v.stratum, Stratum::C4);
        assert_eq!(v.first_time, FirstTime::Infinity);
        assert!(v.maxwell_points.is_empty());
        assert!(!v.diagnostics.continuous_intersection);
    }

    #[test]
    fn numeric_search_finds_nothing_for_an_oscillating_covector() {
        // Pendulum (gamma, c) = (1.0, 0.5): alpha = 0.5, h3 = 0.25.
        let h0 = Covector::from_angle(0.5, 0.25);
        let v = numeric_maxwell_search(&h0, 50.0, 0.1, 1e-6).unwrap();
        assert_eq!(v.stratum, Stratum::C1);
        assert_eq!(v.first_time, FirstTime::Infinity);
        assert!(v.maxwell_points.is_empty());
    }

    #[test]
    fn numeric_search_validates_bounds() {
        let h0 = Covector::new(1.0, 0.0, 0.0);
        assert!(numeric_maxwell_search(&h0, 1.0, 0.0, 1e-6).is_err());
        assert!(numeric_maxwell_search(&h0, 0.05, 0.1, 1e-6).is_err());
        assert!(numeric_maxwell_search(&h0, 1.0, 0.1, 0.0).is_err());
    }

    #[test]
    fn verdict_serializes_first_time_as_declared() {
        let v = first_maxwell_time(&Covector::new(1.0, 0.0, 0.0), None).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["first_time"], serde_json::json!("inf"));
        assert_eq!(json["stratum"], serde_json::json!("C4"));
        assert_eq!(json["method"], serde_json::json!("closed-form"));

        let v = numeric_maxwell_search(&Covector::new(0.0, 1.0, 0.0), 5.0, 0.1, 1e-6).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert!(json["first_time"].is_number());
        let p = &json["points"][0];
        assert!(
            p["t"].is_number() && p["x"].is_number() && p["y"].is_number() && p["z"].is_number()
        );
    }
}
