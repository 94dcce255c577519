//! Generic trace-action machinery on dense matrices.

use nalgebra::{DMatrix, DVector};

use crate::linalg::I;
use crate::{Error, Operator, Result};

/// G = ∂_λH + i[A, H]
pub fn g_operator(h: &Operator, dh: &Operator, a: &Operator) -> Result<Operator> {
    let c = a.commutator(h)?;
    dh.add(&c.scale_complex(I))
}

/// Re Tr G²
pub fn action_trace(g: &Operator) -> f64 {
    g.trace_product(g).expect("same operator").re
}

/// Coefficients c minimising Tr[(∂H + i Σ cₖ[Oₖ, H])²] via the normal equations
/// Mₖₗ = Tr(BₖBₗ), rₖ = Tr(Bₖ ∂H), Bₖ = i[Oₖ, H].
pub fn variational_minimize_oracle(
    h: &Operator,
    dh: &Operator,
    basis: &[Operator],
) -> Result<Vec<f64>> {
    if basis.is_empty() {
        return Err(Error::Empty("ansatz basis"));
    }
    let b: Vec<Operator> = basis
        .iter()
        .map(|o| o.commutator(h).map(|c| c.scale_complex(I)))
        .collect::<Result<_>>()?;
    let n = b.len();
    let mut m = DMatrix::zeros(n, n);
    let mut r = DVector::zeros(n);
    for k in 0..n {
        for l in k..n {
            let v = b[k].trace_product(&b[l])?.re;
            m[(k, l)] = v;
            m[(l, k)] = v;
        }
        r[k] = b[k].trace_product(dh)?.re;
    }
    let eig = m.clone().symmetric_eigen();
    let max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || min <= 1e-12 * max {
        return Err(Error::RankDeficient {
            ratio: if max > 0.0 { min / max } else { 0.0 },
        });
    }
    let c = m
        .cholesky()
        .ok_or(Error::RankDeficient { ratio: min / max })?
        .solve(&(-r));
    Ok(c.iter().cloned().collect())
}
