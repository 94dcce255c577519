//! Time evolution under driven protocols, fidelities, the τ → 0 gauge-only
//! limit and leakage diagnostics.

mod diagnostics;
mod generator;
mod integrator;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use diagnostics::{
    i1_metric, i2_metric, i_metrics, max_amplitudes, path_gauge_amplitudes, ControlFolding,
};
pub use integrator::Tolerance;

use crate::models::SpinModel;
use crate::schedules::{AnnealingSchedule, ControlField, ScheduleKind};
use crate::{Error, Result, StateVector};
use generator::Assembler;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CdMode {
    None,
    Lcd1,
    Lcd2,
    ExactCd,
    LatticeCd,
}

impl CdMode {
    pub fn name(self) -> &'static str {
        match self {
            CdMode::None => "none",
            CdMode::Lcd1 => "lcd1",
            CdMode::Lcd2 => "lcd2",
            CdMode::ExactCd => "exact_cd",
            CdMode::LatticeCd => "lattice_cd",
        }
    }
}

/// H(t) = H₀(λ) + β O_opt (+ λ̇A for CD modes).
#[derive(Clone, Debug, PartialEq)]
pub struct DrivenProtocol {
    pub model: SpinModel,
    pub schedule: AnnealingSchedule,
    pub control: ControlField,
    pub cd: CdMode,
    /// α → S(λ)α for the Ising first-order coefficient.
    pub scaling: bool,
    /// J² → J²(1 − 1/N) in the Ising first-order coefficient.
    pub finite_size: bool,
    /// Amplitude cap (energy units) used by constrained costs.
    pub cap: Option<f64>,
}

impl DrivenProtocol {
    pub fn new(
        model: SpinModel,
        schedule: AnnealingSchedule,
        control: ControlField,
        cd: CdMode,
    ) -> Result<Self> {
        let ok = match cd {
            CdMode::LatticeCd => !model.is_spin(),
            CdMode::Lcd1 | CdMode::Lcd2 => model.is_spin(),
            CdMode::None | CdMode::ExactCd => true,
        };
        if !ok {
            return Err(Error::Unsupported(format!(
                "CD mode {} is not available for the {} model",
                cd.name(),
                model.name()
            )));
        }
        Ok(DrivenProtocol {
            model,
            schedule,
            control,
            cd,
            scaling: false,
            finite_size: false,
            cap: None,
        })
    }

    /// Model on its natural schedule with no control field.
    pub fn bare(model: SpinModel, tau: f64, cd: CdMode) -> Result<Self> {
        let schedule = AnnealingSchedule::new(model.schedule_kind(), tau)?;
        let control = ControlField::zero(1, crate::schedules::FrequencyConvention::HalfSine);
        Self::new(model, schedule, control, cd)
    }

    pub fn with_scaling(mut self, on: bool) -> Result<Self> {
        if on && !matches!(self.model, SpinModel::Ising(_)) {
            return Err(Error::Unsupported(
                "the S(λ) scaling applies to the Ising first-order coefficient only".into(),
            ));
        }
        self.scaling = on;
        Ok(self)
    }

    pub fn with_finite_size(mut self, on: bool) -> Self {
        self.finite_size = on;
        self
    }

    pub fn with_cap(mut self, cap: Option<f64>) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_control(&self, control: ControlField) -> Self {
        DrivenProtocol {
            control,
            ..self.clone()
        }
    }

    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Ok(DrivenProtocol {
            schedule: AnnealingSchedule::new(self.schedule.kind(), tau)?,
            ..self.clone()
        })
    }

    pub fn tau(&self) -> f64 {
        self.schedule.tau()
    }
}

/// Per-term maxima of |coefficient| over a trajectory, keyed by label.
pub type Amplitudes = BTreeMap<&'static str, f64>;

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionResult {
    pub state: StateVector,
    pub fidelity: f64,
    pub amplitudes: Amplitudes,
    pub steps: usize,
    pub rejected_steps: usize,
    /// Largest |‖ψ‖ − 1| over accepted steps before renormalisation.
    pub max_norm_drift: f64,
}

/// Points on the uniform amplitude grid attached to every evolution.
pub const AMPLITUDE_GRID: usize = 1001;

/// |⟨ψ_T|ψ⟩|²
pub fn fidelity(psi: &StateVector, target: &StateVector) -> Result<f64> {
    Ok(target.inner(psi)?.norm_sqr())
}

fn check_initial(psi0: &StateVector, dim: usize) -> Result<()> {
    if psi0.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: psi0.dim(),
        });
    }
    let n = psi0.norm();
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "initial state norm {n} is not 1"
        )));
    }
    Ok(())
}

fn run(
    protocol: &DrivenProtocol,
    psi0: &StateVector,
    target: &StateVector,
    tol: &Tolerance,
    gauge_only: bool,
) -> Result<EvolutionResult> {
    check_initial(psi0, protocol.model.dim())?;
    check_initial(target, protocol.model.dim())?;
    let asm = Assembler::new(protocol, gauge_only);
    let rhs = |t: f64, y: &[crate::C64], out: &mut [crate::C64]| -> Result<()> {
        let terms = asm.terms(t)?;
        asm.apply(&terms, y, out);
        Ok(())
    };
    let traj = integrator::integrate(rhs, psi0.amplitudes(), 0.0, protocol.tau(), tol)?;
    let state = StateVector::from_amplitudes(traj.state);
    let fidelity = fidelity(&state, target)?;
    let amplitudes = diagnostics::grid_amplitudes(&asm, AMPLITUDE_GRID)?;
    Ok(EvolutionResult {
        state,
        fidelity,
        amplitudes,
        steps: traj.steps,
        rejected_steps: traj.rejected,
        max_norm_drift: traj.max_norm_drift,
    })
}

/// Solve iψ̇ = H(t)ψ over [0, τ] and score against `target`.
pub fn evolve(
    protocol: &DrivenProtocol,
    psi0: &StateVector,
    target: &StateVector,
    tol: &Tolerance,
) -> Result<EvolutionResult> {
    run(protocol, psi0, target, tol, false)
}

/// τ → 0 limit: i d|ψ⟩/dλ = A_λ|ψ⟩ with H switched off. Integrated in
/// s = t/τ on a unit-duration copy of the protocol, so the result does not
/// depend on the protocol's τ.
pub fn evolve_gauge_only(
    protocol: &DrivenProtocol,
    psi0: &StateVector,
    target: &StateVector,
    tol: &Tolerance,
) -> Result<EvolutionResult> {
    if !matches!(protocol.cd, CdMode::Lcd1 | CdMode::Lcd2) {
        return Err(Error::Unsupported(format!(
            "gauge-only evolution needs LCD1 or LCD2, got {}",
            protocol.cd.name()
        )));
    }
    let unit = protocol.with_tau(1.0)?;
    run(&unit, psi0, target, tol, true)
}

/// Initial and target states for a protocol's model and schedule.
pub fn boundary_states(protocol: &DrivenProtocol) -> Result<(StateVector, StateVector)> {
    let kind: ScheduleKind = protocol.schedule.kind();
    crate::models::initial_and_target_states(&protocol.model, kind)
}
