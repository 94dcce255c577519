//! Amplitude scans and the I₁/I₂ second-order leakage metrics.

use super::generator::{general, Assembler, Terms};
use super::{Amplitudes, DrivenProtocol};
use crate::agp::second_order_minimizer;
use crate::models::{ground_state, ChainOperators, SpinModel};
use crate::{Error, Result};

/// How the control field enters the second-order solve along a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ControlFolding {
    /// β shifts the couplings; the path derivative is that of H₀ alone.
    #[default]
    CouplingsOnly,
    /// β shifts the couplings and β̇ enters the path derivative.
    CouplingsAndRate,
}

fn grid_times(tau: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidParameter(format!(
            "time grid needs at least 2 points, got {points}"
        )));
    }
    Ok((0..points)
        .map(|k| tau * k as f64 / (points - 1) as f64)
        .collect())
}

fn bump(a: &mut Amplitudes, key: &'static str, v: f64) {
    let e = a.entry(key).or_insert(0.0);
    *e = e.max(v.abs());
}

pub(crate) fn grid_amplitudes(asm: &Assembler, points: usize) -> Result<Amplitudes> {
    let mut a = Amplitudes::new();
    for t in grid_times(asm.protocol.tau(), points)? {
        match asm.terms(t)? {
            Terms::Spin(c) => {
                bump(&mut a, "zz", c.zz);
                bump(&mut a, "z_field", c.z);
                bump(&mut a, "x_field", c.x);
                bump(&mut a, "control", c.beta);
                bump(&mut a, "cd_alpha", c.y);
                bump(&mut a, "cd_gamma", c.xy);
                bump(&mut a, "cd_zeta", c.zy);
            }
            Terms::Lattice { hop, site, beta } => {
                for h in hop {
                    bump(&mut a, "tunnel", h.norm());
                }
                for v in site {
                    bump(&mut a, "site", v);
                }
                bump(&mut a, "control", beta);
            }
            Terms::Dense {
                spin, beta, cd_max, ..
            } => {
                if let Some(c) = spin {
                    bump(&mut a, "zz", c.zz);
                    bump(&mut a, "z_field", c.z);
                    bump(&mut a, "x_field", c.x);
                }
                bump(&mut a, "control", beta);
                bump(&mut a, "cd_exact", cd_max);
            }
        }
    }
    Ok(a)
}

/// Max over a uniform grid of each labelled coefficient magnitude (CD terms as
/// λ̇α etc.; lattice tunnelling as J_CD).
pub fn max_amplitudes(protocol: &DrivenProtocol, points: usize) -> Result<Amplitudes> {
    grid_amplitudes(&Assembler::new(protocol, false), points)
}

struct PathSample {
    rates: [f64; 3],
    form: crate::models::IsingForm,
}

fn sample_second_order(
    protocol: &DrivenProtocol,
    t: f64,
    folding: ControlFolding,
) -> Result<PathSample> {
    let tau = protocol.tau();
    let pt = protocol.schedule.point(t);
    let beta = protocol.control.value(t, tau);
    let bdot = match folding {
        ControlFolding::CouplingsOnly => 0.0,
        ControlFolding::CouplingsAndRate => protocol.control.derivative(t, tau),
    };
    let (f, r) = protocol
        .model
        .ising_form(pt.lambda, pt.lambda_dot, beta, bdot)?;
    let rates = second_order_minimizer(&general(&f, &r));
    Ok(PathSample { rates, form: f })
}

/// Max over the grid of |λ̇α|, |λ̇γ|, |λ̇ζ| from the second-order solve along
/// the protocol's path (whatever its CD mode).
pub fn path_gauge_amplitudes(
    protocol: &DrivenProtocol,
    points: usize,
    folding: ControlFolding,
) -> Result<[f64; 3]> {
    if !protocol.model.is_spin() {
        return Err(Error::Unsupported(
            "second-order amplitudes need a spin model".into(),
        ));
    }
    let mut m = [0.0f64; 3];
    for t in grid_times(protocol.tau(), points)? {
        let s = sample_second_order(protocol, t, folding)?;
        for k in 0..3 {
            m[k] = m[k].max(s.rates[k].abs());
        }
    }
    Ok(m)
}

fn simpson(values: &[f64], tau: f64) -> Result<f64> {
    let n = values.len();
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "composite Simpson needs an odd number (≥ 3) of grid points, got {n}"
        )));
    }
    let h = tau / (n - 1) as f64;
    let mut s = values[0] + values[n - 1];
    for (k, v) in values.iter().enumerate().take(n - 1).skip(1) {
        s += if k % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    Ok(s * h / 3.0)
}

/// (I₁, I₂) on a uniform grid by composite Simpson. Γ(t) = λ̇γ(σˣσʸ + σʸσˣ);
/// I₁ integrates its ground-state standard deviation, I₂ its magnitude.
pub fn i_metrics(
    protocol: &DrivenProtocol,
    points: usize,
    folding: ControlFolding,
) -> Result<(f64, f64)> {
    if !matches!(protocol.model, SpinModel::TwoSpin(_)) {
        return Err(Error::Unsupported("I-metrics are defined for the two-spin model".into()));
    }
    let ops = ChainOperators::new(2);
    let xy = ops.xy.to_dense();
    let xy2 = xy.mul(&xy)?;
    let mut f1 = Vec::with_capacity(points);
    let mut f2 = Vec::with_capacity(points);
    for t in grid_times(protocol.tau(), points)? {
        let s = sample_second_order(protocol, t, folding)?;
        let g = ground_state(&ops.dense(&s.form))?;
        if g.degenerate {
            return Err(Error::NearDegeneracy {
                gap: g.gap,
                lower: 0,
                upper: 1,
                tolerance: 1e-10,
            });
        }
        let m1 = xy.expectation(&g.state)?.re;
        let m2 = xy2.expectation(&g.state)?.re;
        let gamma = s.rates[1].abs();
        f1.push(gamma * (m2 - m1 * m1).max(0.0).sqrt());
        f2.push(gamma);
    }
    Ok((simpson(&f1, protocol.tau())?, simpson(&f2, protocol.tau())?))
}

pub fn i1_metric(protocol: &DrivenProtocol, points: usize) -> Result<f64> {
    Ok(i_metrics(protocol, points, ControlFolding::default())?.0)
}

pub fn i2_metric(protocol: &DrivenProtocol, points: usize) -> Result<f64> {
    Ok(i_metrics(protocol, points, ControlFolding::default())?.1)
}
