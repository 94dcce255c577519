//! Adiabatic gauge potentials: analytic local (LCD) coefficients, the
//! second-order variational solve, numerical oracles, and the lattice CD
//! transform.

mod exact;
mod first_order;
mod lattice;
mod second_order;
mod variational;

pub use exact::{exact_agp, exact_agp_oracle, DegeneracyPolicy};
pub use first_order::{
    alpha_ising, alpha_ising_controlled, alpha_two_spin, alpha_two_spin_controlled,
    boundary_scaling, first_order_rate, ising_cd_rate, two_spin_cd_rate, ControlledPoint,
};
pub use lattice::{
    cd_tunneling_transform, lattice_alpha_solve, lattice_alpha_solve_tilted, tridiagonal_solve,
    LatticeCDTerms,
};
pub use second_order::{
    second_order_minimizer, second_order_solve, trace_action_density, GeneralIsingParams,
    QuadraticForm,
};
pub use variational::{action_trace, g_operator, variational_minimize_oracle};

/// LCD coefficients along the path.
#[derive(Clone, Debug, PartialEq)]
pub enum GaugeCoefficients {
    /// A = α Σσʸ
    FirstOrder { alpha: f64 },
    /// A = α Σσʸ + γ Σ(σˣσʸ + σʸσˣ) + ζ Σ(σᶻσʸ + σʸσᶻ)
    SecondOrder { alpha: f64, gamma: f64, zeta: f64 },
    /// A = Σ αₙ Oₙ on lattice bonds
    Lattice { alpha: Vec<f64> },
}

impl GaugeCoefficients {
    pub fn order(&self) -> u8 {
        match self {
            GaugeCoefficients::SecondOrder { .. } => 2,
            _ => 1,
        }
    }

    /// (α, γ, ζ) for spin-model coefficients, zeros above the order.
    pub fn triple(&self) -> Option<[f64; 3]> {
        match *self {
            GaugeCoefficients::FirstOrder { alpha } => Some([alpha, 0.0, 0.0]),
            GaugeCoefficients::SecondOrder { alpha, gamma, zeta } => Some([alpha, gamma, zeta]),
            GaugeCoefficients::Lattice { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            GaugeCoefficients::Lattice { alpha } => alpha.iter().all(|a| a.is_finite()),
            _ => self.triple().unwrap().iter().all(|a| a.is_finite()),
        }
    }
}
