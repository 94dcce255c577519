//! Exact adiabatic gauge potential from the instantaneous eigenbasis.

use nalgebra::DMatrix;

use crate::linalg::{eigh, I};
use crate::models::{bare_derivative, bare_hamiltonian, SpinModel};
use crate::{Error, Operator, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DegeneracyPolicy {
    /// Error when a gap falls below `rel_gap` times the spectral range.
    Strict { rel_gap: f64 },
    /// Group levels closer than `rel_gap` times the range and drop the
    /// elements inside each group.
    ZeroWithinDegenerate { rel_gap: f64 },
}

impl Default for DegeneracyPolicy {
    fn default() -> Self {
        DegeneracyPolicy::Strict { rel_gap: 1e-8 }
    }
}

/// ⟨m|A|n⟩ = i⟨m|∂H|n⟩/(Eₙ − Eₘ), diagonal zero. A is linear in ∂H, so
/// passing ∂ₜH yields λ̇A.
pub fn exact_agp(h: &Operator, dh: &Operator, policy: DegeneracyPolicy) -> Result<Operator> {
    if h.dim() != dh.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: dh.dim(),
        });
    }
    let (w, v) = eigh(h);
    let d = w.len();
    let range = w[d - 1] - w[0];
    let (rel, strict) = match policy {
        DegeneracyPolicy::Strict { rel_gap } => (rel_gap, true),
        DegeneracyPolicy::ZeroWithinDegenerate { rel_gap } => (rel_gap, false),
    };
    let tol = rel * range;
    // cluster label per level
    let mut cluster = vec![0usize; d];
    for k in 1..d {
        let gap = w[k] - w[k - 1];
        if gap <= tol {
            if strict {
                return Err(Error::NearDegeneracy {
                    gap,
                    lower: k - 1,
                    upper: k,
                    tolerance: tol,
                });
            }
            cluster[k] = cluster[k - 1];
        } else {
            cluster[k] = cluster[k - 1] + 1;
        }
    }
    let dh_eig = v.adjoint() * dh.matrix() * &v;
    let mut a = DMatrix::<C64>::zeros(d, d);
    for m in 0..d {
        for n in 0..d {
            if cluster[m] != cluster[n] {
                a[(m, n)] = I * dh_eig[(m, n)] / (w[n] - w[m]);
            }
        }
    }
    Operator::from_matrix(&v * a * v.adjoint())
}

/// Exact AGP of the bare model at λ (strict nondegeneracy, gap > 10⁻⁸ range).
pub fn exact_agp_oracle(model: &SpinModel, lambda: f64) -> Result<Operator> {
    let h = bare_hamiltonian(model, lambda)?;
    let dh = bare_derivative(model, lambda)?;
    exact_agp(&h, &dh, DegeneracyPolicy::default())
}
