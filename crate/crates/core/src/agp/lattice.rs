//! Tridiagonal LCD solve and counterdiabatic tunnelling transform for the
//! synthetic lattice.

use crate::{Error, Result, C64};

/// Thomas algorithm; `sub[i]` couples row i+1 to i, `sup[i]` row i to i+1.
pub fn tridiagonal_solve(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::Empty("tridiagonal system"));
    }
    for (len, name) in [(sub.len(), n - 1), (sup.len(), n - 1), (rhs.len(), n)] {
        if len != name {
            return Err(Error::DimensionMismatch {
                expected: name,
                found: len,
            });
        }
    }
    let scale = diag
        .iter()
        .chain(sub)
        .chain(sup)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let tiny = 1e-14 * scale;
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut piv = diag[0];
    if piv.abs() <= tiny {
        return Err(singular(0, piv));
    }
    if n > 1 {
        c[0] = sup[0] / piv;
    }
    d[0] = rhs[0] / piv;
    for i in 1..n {
        piv = diag[i] - sub[i - 1] * c[i - 1];
        if piv.abs() <= tiny || !piv.is_finite() {
            return Err(singular(i, piv));
        }
        if i < n - 1 {
            c[i] = sup[i] / piv;
        }
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / piv;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

fn singular(row: usize, piv: f64) -> Error {
    Error::Singular {
        context: format!("tridiagonal row {row}"),
        detail: format!("pivot {piv:e}"),
    }
}

/// Bond coefficients αₙ from the printed tridiagonal system (∂V = 0):
/// −3JₙJₙ₊₁αₙ₊₁ + (Jₙ₋₁² + 4Jₙ² + Jₙ₊₁² + (Vₙ₊₁ − Vₙ)²)αₙ − 3JₙJₙ₋₁αₙ₋₁ = −∂Jₙ(Vₙ₊₁ − Vₙ).
pub fn lattice_alpha_solve(j: &[f64], v: &[f64], dj: &[f64]) -> Result<Vec<f64>> {
    let zeros = vec![0.0; v.len()];
    lattice_alpha_solve_tilted(j, v, dj, &zeros)
}

/// Full minimiser including a λ-dependent potential: the right-hand side
/// gains Jₙ(∂Vₙ₊₁ − ∂Vₙ). Derivatives may be λ-derivatives or time rates.
pub fn lattice_alpha_solve_tilted(j: &[f64], v: &[f64], dj: &[f64], dv: &[f64]) -> Result<Vec<f64>> {
    let n_sites = v.len();
    if n_sites < 2 {
        return Err(Error::InvalidParameter(format!(
            "lattice needs at least 2 sites, got {n_sites}"
        )));
    }
    let bonds = n_sites - 1;
    for (len, exp) in [(j.len(), bonds), (dj.len(), bonds), (dv.len(), n_sites)] {
        if len != exp {
            return Err(Error::DimensionMismatch {
                expected: exp,
                found: len,
            });
        }
    }
    let jb = |k: isize| -> f64 {
        if k < 0 || k as usize >= bonds {
            0.0
        } else {
            j[k as usize]
        }
    };
    let mut diag = Vec::with_capacity(bonds);
    let mut rhs = Vec::with_capacity(bonds);
    for k in 0..bonds {
        let dv_k = v[k + 1] - v[k];
        let ki = k as isize;
        diag.push(jb(ki - 1).powi(2) + 4.0 * j[k] * j[k] + jb(ki + 1).powi(2) + dv_k * dv_k);
        rhs.push(-dj[k] * dv_k + j[k] * (dv[k + 1] - dv[k]));
    }
    let off: Vec<f64> = (0..bonds.saturating_sub(1))
        .map(|k| -3.0 * j[k] * j[k + 1])
        .collect();
    if rhs.iter().all(|&r| r == 0.0) {
        return Ok(vec![0.0; bonds]);
    }
    tridiagonal_solve(&off, &diag, &off, &rhs)
}

/// Per-bond amplitude and phase of the complex CD hopping.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeCDTerms {
    pub amplitude: Vec<f64>,
    pub phase: Vec<f64>,
}

impl LatticeCDTerms {
    /// J_CD e^{−iφ} = Jₙ + i αₙ/τ; the matrix element on |n⟩⟨n+1| is its negative.
    pub fn hopping(&self, bond: usize) -> C64 {
        C64::from_polar(self.amplitude[bond], -self.phase[bond])
    }

    /// From the bond amplitudes Jₙ and the CD rates λ̇αₙ directly.
    pub fn from_rates(j: &[f64], cd_rate: &[f64]) -> Self {
        let mut amplitude = Vec::with_capacity(j.len());
        let mut phase = Vec::with_capacity(j.len());
        for (&jn, &r) in j.iter().zip(cd_rate) {
            // J_CD e^{−iφ} = Jₙ − i λ̇αₙ
            amplitude.push(jn.hypot(r));
            let mut p = r.atan2(jn);
            if p == -std::f64::consts::PI {
                p = std::f64::consts::PI;
            }
            phase.push(p);
        }
        LatticeCDTerms { amplitude, phase }
    }
}

/// J_CD = √(Jₙ² + (αₙ/τ)²), φ = atan2(−αₙ/τ, Jₙ) in (−π, π], for λ̇ = −1/τ.
pub fn cd_tunneling_transform(j: &[f64], alpha: &[f64], tau: f64) -> Result<LatticeCDTerms> {
    if !(tau > 0.0) {
        return Err(Error::Domain {
            what: "tau",
            value: tau,
            domain: "(0, inf)",
        });
    }
    if j.len() != alpha.len() {
        return Err(Error::DimensionMismatch {
            expected: j.len(),
            found: alpha.len(),
        });
    }
    let rates: Vec<f64> = alpha.iter().map(|a| -a / tau).collect();
    Ok(LatticeCDTerms::from_rates(j, &rates))
}
