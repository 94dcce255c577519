//! Counterdiabatic optimised local driving (COLD).
//!
//! Annealing schedules and control fields, the three benchmark models, local and
//! exact adiabatic gauge potentials, Schrödinger-equation dynamics, Powell-based
//! optimisation with restarts, and a config-driven experiment runner.
//!
//! Energies are in units of the model's coupling (J or J₀) and times in its inverse, ħ = 1.

pub mod agp;
pub mod cli;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod models;
pub mod optimize;
pub mod schedules;

pub use error::{Error, Result};
pub use linalg::{Operator, StateVector, C64};
