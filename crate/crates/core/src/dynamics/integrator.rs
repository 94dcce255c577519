//! Dormand–Prince 5(4) on complex vectors with per-step renormalisation.

use crate::{Error, Result, C64};

/// Local error control and safety limits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Abort when a step changes ‖ψ‖ by more than this.
    pub norm_abort: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 50_000_000,
            norm_abort: 1e-6,
        }
    }
}

impl Tolerance {
    pub fn relative(rtol: f64) -> Self {
        Tolerance {
            rtol,
            atol: rtol * 1e-2,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Trajectory {
    pub state: Vec<C64>,
    pub steps: usize,
    pub rejected: usize,
    /// Largest |‖ψ‖ − 1| seen before renormalising an accepted step.
    pub max_norm_drift: f64,
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
// b − b* (error weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Integrate the linear system dy/dt = f(t, y) from t0 to t1. `f` writes into
/// its output slice and may fail (e.g. a singular CD solve).
pub(crate) fn integrate<F>(
    mut f: F,
    y0: &[C64],
    t0: f64,
    t1: f64,
    tol: &Tolerance,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[C64], &mut [C64]) -> Result<()>,
{
    let n = y0.len();
    let zero = C64::new(0.0, 0.0);
    let mut y = y0.to_vec();
    let span = t1 - t0;
    let mut traj = Trajectory {
        state: Vec::new(),
        steps: 0,
        rejected: 0,
        max_norm_drift: 0.0,
    };
    if span <= 0.0 {
        traj.state = y;
        return Ok(traj);
    }

    let mut k1 = vec![zero; n];
    let mut k2 = vec![zero; n];
    let mut k3 = vec![zero; n];
    let mut k4 = vec![zero; n];
    let mut k5 = vec![zero; n];
    let mut k6 = vec![zero; n];
    let mut k7 = vec![zero; n];
    let mut tmp = vec![zero; n];
    let mut ynew = vec![zero; n];

    let mut t = t0;
    f(t, &y, &mut k1)?;
    let d0 = norm(&y);
    let d1 = norm(&k1);
    let mut h = if d1 > 1e-300 {
        (0.01 * d0 / d1).min(span)
    } else {
        span * 1e-3
    };
    h = h.max(span * 1e-12);
    let h_min = span * 1e-14;

    while t < t1 {
        if traj.steps >= tol.max_steps {
            return Err(Error::MaxSteps {
                t,
                max_steps: tol.max_steps,
            });
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        macro_rules! stage {
            ($out:expr, $c:expr, $($a:expr, $k:expr),+) => {{
                for i in 0..n {
                    tmp[i] = y[i] + (zero $(+ $k[i] * $a)+) * h;
                }
                f(t + $c * h, &tmp, &mut $out)?;
            }};
        }
        stage!(k2, C2, A21, k1);
        stage!(k3, C3, A31, k1, A32, k2);
        stage!(k4, C4, A41, k1, A42, k2, A43, k3);
        stage!(k5, C5, A51, k1, A52, k2, A53, k3, A54, k4);
        stage!(k6, 1.0, A61, k1, A62, k2, A63, k3, A64, k4, A65, k5);
        for i in 0..n {
            ynew[i] = y[i] + (k1[i] * B1 + k3[i] * B3 + k4[i] * B4 + k5[i] * B5 + k6[i] * B6) * h;
        }
        let t_new = if last { t1 } else { t + h };
        f(t_new, &ynew, &mut k7)?;

        let mut err = 0.0;
        for i in 0..n {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let sc = tol.atol + tol.rtol * y[i].norm().max(ynew[i].norm());
            err += (e.norm() / sc).powi(2);
        }
        let err = (err / n as f64).sqrt();
        if !err.is_finite() {
            return Err(Error::NonFinite(format!("integrator error estimate at t = {t}")));
        }

        if err <= 1.0 {
            let nrm = norm(&ynew);
            let drift = (nrm - 1.0).abs();
            traj.max_norm_drift = traj.max_norm_drift.max(drift);
            if drift > tol.norm_abort {
                return Err(Error::NormDrift { t: t_new, drift });
            }
            for (a, b) in y.iter_mut().zip(&ynew) {
                *a = *b / nrm;
            }
            t = t_new;
            traj.steps += 1;
            // FSAL: f is linear in y, so rescale instead of re-evaluating
            for (a, b) in k1.iter_mut().zip(&k7) {
                *a = *b / nrm;
            }
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= fac;
        } else {
            traj.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            if h < h_min {
                return Err(Error::StepUnderflow { t, h });
            }
        }
    }
    traj.state = y;
    Ok(traj)
}
