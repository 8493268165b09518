//! Internal ODE steppers: an embedded Dormand-Prince 5(4) pair with adaptive
//! step control, and classical fixed-step RK4 for reproducibility checks.

use crate::error::{Error, Result};

const SAFETY: f64 = 0.9;
const SHRINK_LIMIT: f64 = 0.2;
const GROW_LIMIT: f64 = 5.0;
const MAX_STEPS: usize = 50_000_000;

/// Adaptive Dormand-Prince 5(4) integrator; the step size persists across
/// calls to `advance` so chained segments do not restart cold.
pub(crate) struct Dopri5<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]> {
    f: F,
    rel_tol: f64,
    abs_tol: f64,
    h: f64,
}

impl<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]> Dopri5<N, F> {
    pub fn new(f: F, rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            f,
            rel_tol,
            abs_tol,
            h: 1e-3,
        }
    }

    /// Advances `y` in place from `t0` to `t1` (forward only).
    pub fn advance(&mut self, t0: f64, y: &mut [f64; N], t1: f64) -> Result<()> {
        debug_assert!(t1 >= t0);
        let mut t = t0;
        let mut steps = 0usize;
        while t < t1 {
            if steps > MAX_STEPS {
                return Err(Error::NoConvergence("dopri5 step budget"));
            }
            steps += 1;
            let h = self.h.min(t1 - t).max(f64::EPSILON * t1.abs().max(1.0));
            let (y5, err) = self.step(t, y, h);
            if !err.is_finite() || y5.iter().any(|v| !v.is_finite()) {
                return Err(Error::Integration { last_good_time: t });
            }
            if err <= 1.0 {
                t += h;
                *y = y5;
                let factor = if err == 0.0 {
                    GROW_LIMIT
                } else {
                    (SAFETY * err.powf(-0.2)).clamp(SHRINK_LIMIT, GROW_LIMIT)
                };
                self.h = h * factor;
            } else {
                self.h = h * (SAFETY * err.powf(-0.2)).clamp(SHRINK_LIMIT, 1.0);
            }
        }
        Ok(())
    }

    /// One trial step of size `h`; returns the 5th-order solution and the
    /// scaled error norm of the embedded 4(5) difference.
    fn step(&self, t: f64, y: &[f64; N], h: f64) -> ([f64; N], f64) {
        let f = &self.f;
        let k1 = f(t, y);
        let k2 = f(t + h / 5.0, &comb(y, h, &[(0.2, &k1)]));
        let k3 = f(
            t + 3.0 / 10.0 * h,
            &comb(y, h, &[(3.0 / 40.0, &k1), (9.0 / 40.0, &k2)]),
        );
        let k4 = f(
            t + 4.0 / 5.0 * h,
            &comb(
                y,
                h,
                &[(44.0 / 45.0, &k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)],
            ),
        );
        let k5 = f(
            t + 8.0 / 9.0 * h,
            &comb(
                y,
                h,
                &[
                    (19372.0 / 6561.0, &k1),
                    (-25360.0 / 2187.0, &k2),
                    (64448.0 / 6561.0, &k3),
                    (-212.0 / 729.0, &k4),
                ],
            ),
        );
        let k6 = f(
            t + h,
            &comb(
                y,
                h,
                &[
                    (9017.0 / 3168.0, &k1),
                    (-355.0 / 33.0, &k2),
                    (46732.0 / 5247.0, &k3),
                    (49.0 / 176.0, &k4),
                    (-5103.0 / 18656.0, &k5),
                ],
            ),
        );
        let y5 = comb(
            y,
            h,
            &[
                (35.0 / 384.0, &k1),
                (500.0 / 1113.0, &k3),
                (125.0 / 192.0, &k4),
                (-2187.0 / 6784.0, &k5),
                (11.0 / 84.0, &k6),
            ],
        );
        let k7 = f(t + h, &y5);
        // Coefficients of (5th order) - (embedded 4th order).
        const E: [f64; 7] = [
            71.0 / 57600.0,
            0.0,
            -71.0 / 16695.0,
            71.0 / 1920.0,
            -17253.0 / 339200.0,
            22.0 / 525.0,
            -1.0 / 40.0,
        ];
        let ks = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
        let mut err_sq = 0.0;
        for i in 0..N {
            let mut e = 0.0;
            for (c, k) in E.iter().zip(ks.iter()) {
                e += c * k[i];
            }
            e *= h;
            let scale = self.abs_tol + self.rel_tol * y[i].abs().max(y5[i].abs());
            let r = e / scale;
            err_sq += r * r;
        }
        (y5, (err_sq / N as f64).sqrt())
    }
}

fn comb<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Fixed-step classical RK4 from `t0` to `t1` with step at most `dt`
/// (the interval is split into equal steps).
pub(crate) fn rk4_advance<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: &[f64; N],
    t1: f64,
    dt: f64,
) -> Result<[f64; N]> {
    debug_assert!(t1 >= t0 && dt > 0.0);
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(*y0);
    }
    let n = (span / dt).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let mut y = *y0;
    let mut t = t0;
    for step in 0..n {
        let k1 = f(t, &y);
        let k2 = f(t + 0.5 * h, &comb(&y, h, &[(0.5, &k1)]));
        let k3 = f(t + 0.5 * h, &comb(&y, h, &[(0.5, &k2)]));
        let k4 = f(t + h, &comb(&y, h, &[(1.0, &k3)]));
        for i in 0..N {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t = t0 + (step + 1) as f64 * h;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Integration { last_good_time: t });
        }
    }
    Ok(y)
}
