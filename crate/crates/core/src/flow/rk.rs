//! Dormand–Prince 5(4) integrator with adaptive step control.
//!
//! The right-hand side may fail (for instance when a stage leaves the chart);
//! such steps are rejected and retried with a smaller step.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RkOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: Option<f64>,
    pub h_min: f64,
    pub max_steps: usize,
}

impl RkOptions {
    /// Relative tolerance `tol`, absolute tolerance `tol/100`.
    pub fn with_tol(tol: f64) -> Self {
        RkOptions { rtol: tol, atol: tol * 1e-2, h_init: None, h_min: 1e-14, max_steps: 200_000 }
    }
}

impl Default for RkOptions {
    fn default() -> Self {
        Self::with_tol(1e-9)
    }
}

/// Returned by the step observer after every accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    /// True when the observer stopped the integration before `t1`.
    pub stopped: bool,
    pub steps: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// differences between the 5th and embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])], h: f64) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

struct Step<const N: usize> {
    y: [f64; N],
    err: f64,
    k_last: [f64; N],
}

fn try_step<const N: usize, F>(
    f: &mut F,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
    opts: &RkOptions,
) -> Result<Step<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let k2 = f(t + C2 * h, &axpy(y, &[(A21, k1)], h))?;
    let k3 = f(t + C3 * h, &axpy(y, &[(A31, k1), (A32, &k2)], h))?;
    let k4 = f(t + C4 * h, &axpy(y, &[(A41, k1), (A42, &k2), (A43, &k3)], h))?;
    let k5 = f(t + C5 * h, &axpy(y, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)], h))?;
    let k6 = f(t + h, &axpy(y, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h))?;
    let y_new = axpy(y, &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h);
    let k7 = f(t + h, &y_new)?;
    let mut err: f64 = 0.0;
    for i in 0..N {
        let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
        err = err.max((e / sc).abs());
    }
    if !err.is_finite() || !y_new.iter().all(|v| v.is_finite()) {
        return Err(Error::domain("non-finite state in integration step"));
    }
    Ok(Step { y: y_new, err, k_last: k7 })
}

/// Integrates `y' = f(t, y)` from `(t0, y0)` to `t1` (either direction).
/// The observer sees every accepted state and may stop the integration.
pub fn integrate<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: &RkOptions,
    mut observer: O,
) -> Result<Outcome<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    O: FnMut(f64, &[f64; N]) -> Control,
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(Outcome { t: t0, y: y0, stopped: false, steps: 0 });
    }
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(Error::Config("integrator tolerances must be positive".into()));
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y)?;
    let mut h = opts.h_init.unwrap_or_else(|| (span.abs() * 1e-2).min(1e-2)).abs().max(opts.h_min) * dir;
    let mut steps = 0;
    let mut last_err: Option<Error> = None;
    while (t1 - t) * dir > 0.0 {
        if steps >= opts.max_steps {
            return Err(Error::Budget(format!("integrator exceeded {} steps", opts.max_steps)));
        }
        let remaining = t1 - t;
        let last = h.abs() >= remaining.abs();
        let h_try = if last { remaining } else { h };
        match try_step(&mut f, t, &y, &k1, h_try, opts) {
            Ok(step) if step.err <= 1.0 => {
                steps += 1;
                t = if last { t1 } else { t + h_try };
                y = step.y;
                k1 = step.k_last;
                let grow = if step.err == 0.0 { 5.0 } else { (0.9 * step.err.powf(-0.2)).clamp(0.2, 5.0) };
                h = h_try * grow;
                if observer(t, &y) == Control::Stop {
                    return Ok(Outcome { t, y, stopped: true, steps });
                }
            }
            Ok(step) => {
                h = h_try * (0.9 * step.err.powf(-0.2)).clamp(0.1, 0.9);
            }
            Err(e) => {
                last_err = Some(e);
                h = h_try * 0.25;
            }
        }
        if h.abs() < opts.h_min {
            return Err(last_err.unwrap_or_else(|| {
                Error::domain(format!("integrator step underflow at t={t}"))
            }));
        }
    }
    Ok(Outcome { t, y, stopped: false, steps })
}
