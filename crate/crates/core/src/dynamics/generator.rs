//! Instantaneous Hamiltonian coefficients of a driven protocol and the
//! matrix-free action −iH(t)ψ.

use nalgebra::{DMatrix, DVector};

use super::{CdMode, DrivenProtocol};
use crate::agp::{
    exact_agp, ising_cd_rate, second_order_minimizer, two_spin_cd_rate, DegeneracyPolicy,
    GeneralIsingParams, LatticeCDTerms,
};
use crate::models::{ChainOperators, IsingForm, SpinModel};
use crate::{Operator, Result, C64};

/// Coefficients of the spin-chain operator sums at one instant (CD entries are
/// the rates λ̇α, λ̇γ, λ̇ζ).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct SpinCoefficients {
    pub zz: f64,
    pub z: f64,
    pub x: f64,
    pub y: f64,
    pub xy: f64,
    pub zy: f64,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Terms {
    Spin(SpinCoefficients),
    /// Matrix elements H_{n,n+1} and diagonal.
    Lattice {
        hop: Vec<C64>,
        site: Vec<f64>,
        beta: f64,
    },
    /// Full dense H(t) (exact CD).
    Dense {
        h: DMatrix<C64>,
        beta: f64,
        spin: Option<SpinCoefficients>,
        cd_max: f64,
    },
}

pub(crate) struct Assembler<'a> {
    pub protocol: &'a DrivenProtocol,
    ops: Option<ChainOperators>,
    /// Drop H_β and keep only the CD term (gauge-only evolution).
    gauge_only: bool,
}

impl<'a> Assembler<'a> {
    pub fn new(protocol: &'a DrivenProtocol, gauge_only: bool) -> Self {
        let ops = protocol
            .model
            .is_spin()
            .then(|| ChainOperators::new(protocol.model.n_sites()));
        Assembler {
            protocol,
            ops,
            gauge_only,
        }
    }

    pub fn terms(&self, t: f64) -> Result<Terms> {
        let p = self.protocol;
        let tau = p.schedule.tau();
        let pt = p.schedule.point(t);
        let (lambda, ldot) = (pt.lambda, pt.lambda_dot);
        let beta = p.control.value(t, tau);
        let bdot = p.control.derivative(t, tau);
        let keep = if self.gauge_only { 0.0 } else { 1.0 };

        match p.model {
            SpinModel::Lattice(_) => {
                let prof = p.model.lattice_profile(lambda)?;
                let j: Vec<f64> = prof.j.iter().map(|v| v + beta).collect();
                if p.cd == CdMode::ExactCd {
                    let h = lattice_matrix(&j.iter().map(|&v| C64::new(-v, 0.0)).collect::<Vec<_>>(), &prof.v);
                    let djt: Vec<C64> = prof.dj.iter().map(|d| C64::new(-(d * ldot + bdot), 0.0)).collect();
                    let dvt: Vec<f64> = prof.dv.iter().map(|d| d * ldot).collect();
                    let dh = lattice_matrix(&djt, &dvt);
                    return self.dense(h, dh, keep, beta, None);
                }
                let hop: Vec<C64> = if p.cd == CdMode::LatticeCd {
                    let djt: Vec<f64> = prof.dj.iter().map(|d| d * ldot + bdot).collect();
                    let dvt: Vec<f64> = prof.dv.iter().map(|d| d * ldot).collect();
                    let rates = if ldot == 0.0 && bdot == 0.0 {
                        vec![0.0; j.len()]
                    } else {
                        crate::agp::lattice_alpha_solve_tilted(&j, &prof.v, &djt, &dvt)?
                    };
                    let cd = LatticeCDTerms::from_rates(&j, &rates);
                    (0..j.len())
                        .map(|k| {
                            if self.gauge_only {
                                C64::new(0.0, rates[k])
                            } else {
                                -cd.hopping(k)
                            }
                        })
                        .collect()
                } else {
                    j.iter().map(|&v| C64::new(-v * keep, 0.0)).collect()
                };
                let site = prof.v.iter().map(|v| v * keep).collect();
                Ok(Terms::Lattice { hop, site, beta })
            }
            _ => {
                let (f, r) = p.model.ising_form(lambda, ldot, beta, bdot)?;
                let mut c = SpinCoefficients {
                    zz: -f.j * keep,
                    z: f.z * keep,
                    x: f.x * keep,
                    beta,
                    ..Default::default()
                };
                match p.cd {
                    CdMode::None | CdMode::LatticeCd => {}
                    CdMode::Lcd1 => {
                        c.y = match p.model {
                            // Eq. (19) is written for H₀ − βΣσᶻ
                            SpinModel::TwoSpin(m) => two_spin_cd_rate(lambda, ldot, -beta, -bdot, m.j, m.h),
                            SpinModel::Ising(m) => ising_cd_rate(
                                lambda, ldot, beta, bdot, m.j, m.z0, m.x_f, m.n_sites,
                                p.finite_size, p.scaling,
                            ),
                            SpinModel::Lattice(_) => unreachable!(),
                        };
                    }
                    CdMode::Lcd2 => {
                        let v = second_order_minimizer(&general(&f, &r));
                        c.y = v[0];
                        c.xy = v[1];
                        c.zy = v[2];
                    }
                    CdMode::ExactCd => {
                        let ops = self.ops.as_ref().expect("spin operators");
                        let h = ops.dense(&f).into_matrix();
                        let dh = ops.dense(&r).into_matrix();
                        return self.dense(h, dh, keep, beta, Some(c));
                    }
                }
                Ok(Terms::Spin(c))
            }
        }
    }

    /// keep · H_β + A(∂ₜH_β), A from the exact eigenbasis of H_β.
    fn dense(
        &self,
        h: DMatrix<C64>,
        dh_t: DMatrix<C64>,
        keep: f64,
        beta: f64,
        spin: Option<SpinCoefficients>,
    ) -> Result<Terms> {
        let mut total = &h * C64::new(keep, 0.0);
        let mut cd_max = 0.0;
        if dh_t.iter().any(|z| z.norm() > 0.0) {
            let a = exact_agp(
                &Operator::from_matrix(h)?,
                &Operator::from_matrix(dh_t)?,
                DegeneracyPolicy::ZeroWithinDegenerate { rel_gap: 1e-8 },
            )?;
            cd_max = a.max_abs();
            total += a.matrix();
        }
        Ok(Terms::Dense {
            h: total,
            beta,
            spin,
            cd_max,
        })
    }

    /// out = −i H ψ
    pub fn apply(&self, terms: &Terms, psi: &[C64], out: &mut [C64]) {
        let mi = C64::new(0.0, -1.0);
        out.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        match terms {
            Terms::Spin(c) => {
                let ops = self.ops.as_ref().expect("spin operators");
                for (op, v) in [
                    (&ops.zz, c.zz),
                    (&ops.z, c.z),
                    (&ops.x, c.x),
                    (&ops.y, c.y),
                    (&ops.xy, c.xy),
                    (&ops.zy, c.zy),
                ] {
                    if v != 0.0 {
                        op.apply_add(mi * v, psi, out);
                    }
                }
            }
            Terms::Lattice { hop, site, .. } => {
                let n = site.len();
                for k in 0..n {
                    let mut acc = psi[k] * site[k];
                    if k + 1 < n {
                        acc += hop[k] * psi[k + 1];
                    }
                    if k > 0 {
                        acc += hop[k - 1].conj() * psi[k - 1];
                    }
                    out[k] = mi * acc;
                }
            }
            Terms::Dense { h, .. } => {
                let v = h * DVector::from_column_slice(psi);
                for (o, z) in out.iter_mut().zip(v.iter()) {
                    *o = mi * z;
                }
            }
        }
    }
}

pub(crate) fn general(f: &IsingForm, r: &IsingForm) -> GeneralIsingParams {
    GeneralIsingParams {
        j: f.j,
        z: f.z,
        x: f.x,
        dj: r.j,
        dz: r.z,
        dx: r.x,
        n_sites: f.n_sites,
    }
}

fn lattice_matrix(hop: &[C64], site: &[f64]) -> DMatrix<C64> {
    let n = site.len();
    let mut m = DMatrix::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = C64::new(site[k], 0.0);
        if k + 1 < n {
            m[(k, k + 1)] = hop[k];
            m[(k + 1, k)] = hop[k].conj();
        }
    }
    m
}
