//! Complete and incomplete elliptic integrals and Jacobi elliptic functions.
//!
//! Self-contained kernel: K via the arithmetic-geometric mean, E and the
//! incomplete integral of the second kind via Carlson symmetric forms, the
//! Jacobi amplitude via the descending Landen/AGM recurrence. The argument
//! convention is the modulus `k` (the integrands contain `k^2 sin^2 t`),
//! not the parameter `m = k^2`.
//!
//! Target relative accuracy is 1e-12; accuracy degrades for `k > 1 - 1e-8`
//! where the complementary modulus underflows the working precision.

use crate::error::{Error, Result};

/// Modulus of an elliptic integral, `0 <= k <= 1`.
///
/// `k = 1` is accepted at construction so callers can reach the finite
/// limits (E(1) = 1, sn/cn/dn via tanh/sech); operations without a finite
/// limit at `k = 1` reject it individually.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Modulus {
    k: f64,
}

impl Modulus {
    /// Validates `0 <= k <= 1`.
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() || !(0.0..=1.0).contains(&k) {
            return Err(Error::Domain {
                context: "Modulus::new (need 0 <= k <= 1)",
                value: k,
            });
        }
        Ok(Self { k })
    }

    /// The modulus value.
    pub fn k(self) -> f64 {
        self.k
    }

    /// `k^2`.
    pub fn k2(self) -> f64 {
        self.k * self.k
    }

    /// Complementary parameter `k'^2 = 1 - k^2`, computed as `(1-k)(1+k)`
    /// to keep relative accuracy near `k = 1`.
    pub fn complement_squared(self) -> f64 {
        (1.0 - self.k) * (1.0 + self.k)
    }

    /// Complementary modulus `k' = sqrt(1 - k^2)`.
    pub fn complement(self) -> f64 {
        self.complement_squared().sqrt()
    }
}

/// A Jacobi argument `u` together with its modulus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticArgument {
    /// Jacobi argument (the integration variable of `F`, not the amplitude angle).
    pub u: f64,
    /// Modulus.
    pub k: Modulus,
}

impl EllipticArgument {
    /// Validates that `u` is finite.
    pub fn new(u: f64, k: Modulus) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::Domain {
                context: "EllipticArgument::new (need finite u)",
                value: u,
            });
        }
        Ok(Self { u, k })
    }
}

const AGM_MAX_ITER: usize = 64;

/// Arithmetic-geometric mean of two positive numbers.
fn agm(a0: f64, b0: f64) -> f64 {
    let mut a = a0;
    let mut b = b0;
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a.abs() {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        a = an;
        b = bn;
    }
    0.5 * (a + b)
}

/// Complete elliptic integral of the first kind,
/// `K(k) = integral of dt / sqrt(1 - k^2 sin^2 t) over [0, pi/2]`.
///
/// Rejects `k = 1`, where the integral diverges.
pub fn complete_k(k: Modulus) -> Result<f64> {
    if k.k() >= 1.0 {
        return Err(Error::Domain {
            context: "complete_k (need k < 1)",
            value: k.k(),
        });
    }
    Ok(std::f64::consts::FRAC_PI_2 / agm(1.0, k.complement()))
}

/// Complete elliptic integral of the second kind,
/// `E(k) = integral of sqrt(1 - k^2 sin^2 t) over [0, pi/2]`; `E(1) = 1`.
pub fn complete_e(k: Modulus) -> Result<f64> {
    if k.k() == 1.0 {
        return Ok(1.0);
    }
    let kp2 = k.complement_squared();
    let k2 = k.k2();
    Ok(carlson_rf(0.0, kp2, 1.0)? - k2 / 3.0 * carlson_rd(0.0, kp2, 1.0)?)
}

/// Jacobi amplitude `am(u, k)`, continuous and strictly increasing in `u`.
///
/// Computed on the reduced argument `u mod 2K` by the AGM back-recurrence,
/// then continued with `am(u + 2K) = am(u) + pi`.
pub fn jacobi_am(arg: EllipticArgument) -> Result<f64> {
    let (u, k) = (arg.u, arg.k);
    if k.k() >= 1.0 {
        return Err(Error::Domain {
            context: "jacobi_am (need k < 1)",
            value: k.k(),
        });
    }
    if k.k() == 0.0 {
        return Ok(u);
    }
    let quarter = complete_k(k)?;
    let (n, r) = reduce_half_period(u, quarter);
    Ok(n as f64 * std::f64::consts::PI + am_reduced(r, k))
}

/// Splits `u = 2nK + r` with `r` in `[-K, K)`.
fn reduce_half_period(u: f64, quarter: f64) -> (i64, f64) {
    let n = ((u / quarter + 1.0) / 2.0).floor();
    (n as i64, u - 2.0 * n * quarter)
}

/// Amplitude on the reduced range `|r| <= K` via the AGM scale and the
/// descending recurrence `phi_{n-1} = (phi_n + asin((c_n/a_n) sin phi_n))/2`.
fn am_reduced(r: f64, k: Modulus) -> f64 {
    let mut a = [0.0f64; AGM_MAX_ITER];
    let mut c = [0.0f64; AGM_MAX_ITER];
    a[0] = 1.0;
    c[0] = k.k();
    let mut b = k.complement();
    let mut n = 0;
    while c[n].abs() > f64::EPSILON * a[n] && n + 1 < AGM_MAX_ITER {
        let an = 0.5 * (a[n] + b);
        let cn = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
        a[n] = an;
        c[n] = cn;
    }
    let mut phi = (1u64 << n) as f64 * a[n] * r;
    for i in (1..=n).rev() {
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    phi
}

/// Jacobi elliptic functions `(sn, cn, dn)` at `u`.
///
/// `k = 1` degenerates to `(tanh u, sech u, sech u)`.
pub fn jacobi_sn_cn_dn(arg: EllipticArgument) -> Result<(f64, f64, f64)> {
    let k = arg.k;
    if k.k() == 1.0 {
        let sech = 1.0 / arg.u.cosh();
        return Ok((arg.u.tanh(), sech, sech));
    }
    let am = jacobi_am(arg)?;
    let sn = am.sin();
    let cn = am.cos();
    // dn^2 = k'^2 + k^2 cn^2 stays in [k'^2, 1] without clamping.
    let dn = (k.complement_squared() + k.k2() * cn * cn).sqrt();
    Ok((sn, cn, dn))
}

/// Incomplete elliptic integral of the second kind in Jacobi form,
/// `eps(u, k) = integral of dn^2(t, k) dt over [0, u]`.
///
/// Satisfies `eps(0) = 0`, `d eps/du = dn^2(u, k)` and the quasi-period law
/// `eps(u + 2K) = eps(u) + 2E`.
pub fn incomplete_e(arg: EllipticArgument) -> Result<f64> {
    let (u, k) = (arg.u, arg.k);
    if k.k() >= 1.0 {
        return Err(Error::Domain {
            context: "incomplete_e (need k < 1)",
            value: k.k(),
        });
    }
    if k.k() == 0.0 {
        return Ok(u);
    }
    let quarter = complete_k(k)?;
    let e = complete_e(k)?;
    let (n, r) = reduce_half_period(u, quarter);
    let phi = am_reduced(r, k);
    Ok(2.0 * n as f64 * e + incomplete_e_amplitude(phi, k))
}

/// `E(phi, k)` in amplitude form for `|phi| <= pi/2`, odd in `phi`.
fn incomplete_e_amplitude(phi: f64, k: Modulus) -> f64 {
    let s = phi.sin();
    let c2 = phi.cos() * phi.cos();
    let q = 1.0 - k.k2() * s * s;
    let rf = carlson_rf(c2, q, 1.0).expect("rf arguments are non-negative by construction");
    let rd = carlson_rd(c2, q, 1.0).expect("rd arguments are valid by construction");
    s * rf - k.k2() / 3.0 * s * s * s * rd
}

// Carlson symmetric forms, duplication iteration with tolerances chosen so
// the truncation error of the Taylor tail is below 1e-16 relative.

const CARLSON_MAX_ITER: usize = 200;
const RF_ERR_TOL: f64 = 0.0025;
const RD_ERR_TOL: f64 = 0.0015;

/// Carlson's `R_F(x, y, z)`; arguments non-negative, at most one zero.
fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    let tiny = 5.0 * f64::MIN_POSITIVE;
    if x.min(y).min(z) < 0.0 || (x + y).min(x + z).min(y + z) < tiny {
        return Err(Error::Domain {
            context: "carlson_rf (need non-negative args, at most one zero)",
            value: x.min(y).min(z),
        });
    }
    let (mut xt, mut yt, mut zt) = (x, y, z);
    let mut ave = 0.0;
    let (mut dx, mut dy, mut dz) = (0.0, 0.0, 0.0);
    let mut converged = false;
    for _ in 0..CARLSON_MAX_ITER {
        let sx = xt.sqrt();
        let sy = yt.sqrt();
        let sz = zt.sqrt();
        let lambda = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lambda);
        yt = 0.25 * (yt + lambda);
        zt = 0.25 * (zt + lambda);
        ave = (xt + yt + zt) / 3.0;
        dx = (ave - xt) / ave;
        dy = (ave - yt) / ave;
        dz = (ave - zt) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < RF_ERR_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("carlson_rf"));
    }
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    Ok((1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / ave.sqrt())
}

/// Carlson's `R_D(x, y, z)`; `x, y` non-negative with at most one zero, `z > 0`.
fn carlson_rd(x: f64, y: f64, z: f64) -> Result<f64> {
    let tiny = 1e-250;
    if x.min(y) < 0.0 || (x + y) < tiny || z < tiny {
        return Err(Error::Domain {
            context: "carlson_rd (need x,y >= 0 with x+y > 0 and z > 0)",
            value: x.min(y).min(z),
        });
    }
    let (mut xt, mut yt, mut zt) = (x, y, z);
    let mut sum = 0.0;
    let mut fac = 1.0;
    let mut ave = 0.0;
    let (mut dx, mut dy, mut dz) = (0.0, 0.0, 0.0);
    let mut converged = false;
    for _ in 0..CARLSON_MAX_ITER {
        let sx = xt.sqrt();
        let sy = yt.sqrt();
        let sz = zt.sqrt();
        let lambda = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (zt + lambda));
        fac *= 0.25;
        xt = 0.25 * (xt + lambda);
        yt = 0.25 * (yt + lambda);
        zt = 0.25 * (zt + lambda);
        ave = 0.2 * (xt + yt + 3.0 * zt);
        dx = (ave - xt) / ave;
        dy = (ave - yt) / ave;
        dz = (ave - zt) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < RD_ERR_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("carlson_rd"));
    }
    let ea = dx * dy;
    let eb = dz * dz;
    let ec = ea - eb;
    let ed = ea - 6.0 * eb;
    let ee = ed + ec + ec;
    Ok(3.0 * sum
        + fac
            * (1.0
                + ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * dz * ee)
                + dz * (1.0 / 6.0 * ee + dz * (-9.0 / 22.0 * ec + 3.0 / 26.0 * dz * ea)))
            / (ave * ave.sqrt()))
}
