//! Control-field optimisation: cost with an optional amplitude penalty, Powell
//! minimisation, seeded restarts and distribution statistics.

mod powell;
mod stats;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use powell::{powell_minimize, PowellOptions, PowellResult};
pub use stats::{summarize_distribution, DistributionStats};

use crate::dynamics::{boundary_states, evolve, Amplitudes, CdMode, DrivenProtocol, Tolerance};
use crate::models::SpinModel;
use crate::schedules::{draw_crab_distortions, AnnealingSchedule, ControlField, FrequencyConvention};
use crate::{Error, Result, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Bare Powell optimisation.
    Bpo,
    Cold,
    Crab,
    ColdCrab,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Bpo => "BPO",
            Method::Cold => "COLD",
            Method::Crab => "CRAB",
            Method::ColdCrab => "COLD-CRAB",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().replace('_', "-").as_str() {
            "BPO" => Some(Method::Bpo),
            "COLD" => Some(Method::Cold),
            "CRAB" => Some(Method::Crab),
            "COLD-CRAB" | "COLDCRAB" => Some(Method::ColdCrab),
            _ => None,
        }
    }

    pub fn is_crab(self) -> bool {
        matches!(self, Method::Crab | Method::ColdCrab)
    }

    pub fn uses_cd(self) -> bool {
        matches!(self, Method::Cold | Method::ColdCrab)
    }

    /// CD mode implied by the method on a given model.
    pub fn cd_mode(self, model: &SpinModel) -> CdMode {
        match (self.uses_cd(), model.is_spin()) {
            (false, _) => CdMode::None,
            (true, true) => CdMode::Lcd1,
            (true, false) => CdMode::LatticeCd,
        }
    }
}

/// Model plus the path options shared by every evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelContext {
    pub model: SpinModel,
    pub frequency: FrequencyConvention,
    pub scaling: bool,
    pub finite_size: bool,
    /// Replaces the method's CD mode (e.g. LCD2 for a COLD run).
    pub cd_override: Option<CdMode>,
}

impl ModelContext {
    pub fn new(model: SpinModel) -> Self {
        ModelContext {
            model,
            frequency: FrequencyConvention::HalfSine,
            scaling: false,
            finite_size: false,
            cd_override: None,
        }
    }

    pub fn cd_mode(&self, method: Method) -> CdMode {
        self.cd_override.unwrap_or_else(|| method.cd_mode(&self.model))
    }

    /// Energy unit J (J₀ for the lattice).
    pub fn energy_unit(&self) -> f64 {
        match self.model {
            SpinModel::TwoSpin(p) => p.j,
            SpinModel::Ising(p) => p.j,
            SpinModel::Lattice(p) => p.j0,
        }
    }

    /// Protocol for `method` at `tau` carrying `control`.
    pub fn protocol(&self, method: Method, tau: f64, control: ControlField) -> Result<DrivenProtocol> {
        let schedule = AnnealingSchedule::new(self.model.schedule_kind(), tau)?;
        let p = DrivenProtocol::new(self.model, schedule, control, self.cd_mode(method))?
            .with_finite_size(self.finite_size);
        if self.scaling {
            p.with_scaling(true)
        } else {
            Ok(p)
        }
    }
}

/// Default Powell search bound in energy units. The unconstrained Ising COLD
/// cost keeps falling towards a plateau as |β| → ∞, so an unbounded line
/// search never brackets.
pub const DEFAULT_SEARCH_HALF_WIDTH: f64 = 100.0;

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizationProblem {
    pub method: Method,
    pub n_k: usize,
    /// Per-coefficient box for the initial draws.
    pub bounds: Vec<(f64, f64)>,
    /// Powell's trial points stay within ±search_half_width (and the box).
    pub search_half_width: f64,
    /// Clip the search to the draw box instead.
    pub clip_to_box: bool,
    pub restarts: usize,
    pub base_seed: u64,
    pub cap: Option<f64>,
    pub tolerance: Tolerance,
    pub powell: PowellOptions,
}

impl OptimizationProblem {
    /// Defaults: draws from [−5J, 5J] per coefficient, search within ±100J,
    /// 50 restarts, seed 0.
    pub fn new(method: Method, n_k: usize) -> Result<Self> {
        let p = OptimizationProblem {
            method,
            n_k,
            bounds: vec![(-5.0, 5.0); n_k],
            search_half_width: DEFAULT_SEARCH_HALF_WIDTH,
            clip_to_box: false,
            restarts: 50,
            base_seed: 0,
            cap: None,
            tolerance: Tolerance::default(),
            powell: PowellOptions::default(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_box(mut self, half_width: f64) -> Self {
        self.bounds = vec![(-half_width, half_width); self.n_k];
        self
    }

    /// Bounds handed to Powell.
    pub fn search_bounds(&self) -> Vec<(f64, f64)> {
        if self.clip_to_box {
            return self.bounds.clone();
        }
        let w = self.search_half_width;
        self.bounds.iter().map(|&(lo, hi)| (lo.min(-w), hi.max(w))).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_k == 0 {
            return Err(Error::InvalidParameter("N_k must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("restarts must be at least 1".into()));
        }
        if self.bounds.len() != self.n_k {
            return Err(Error::DimensionMismatch {
                expected: self.n_k,
                found: self.bounds.len(),
            });
        }
        if let Some(&(lo, hi)) = self.bounds.iter().find(|(lo, hi)| !(lo <= hi) || !lo.is_finite() || !hi.is_finite()) {
            return Err(Error::InvalidParameter(format!("invalid search interval [{lo}, {hi}]")));
        }
        if !(self.search_half_width > 0.0 && self.search_half_width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "search half-width {} must be positive and finite",
                self.search_half_width
            )));
        }
        if let Some(c) = self.cap {
            if !(c > 0.0) {
                return Err(Error::InvalidParameter(format!("amplitude cap {c} must be positive")));
            }
        }
        Ok(())
    }
}

/// Labels counted by the amplitude penalty (the control term itself is not).
pub const PENALIZED_TERMS: [&str; 9] = [
    "zz", "z_field", "x_field", "cd_alpha", "cd_gamma", "cd_zeta", "cd_exact", "tunnel", "site",
];

/// w Σ max(0, amp − cap)², w = 10³/J².
pub fn amplitude_penalty(amps: &Amplitudes, cap: f64, energy_unit: f64) -> f64 {
    let w = 1e3 / (energy_unit * energy_unit);
    PENALIZED_TERMS
        .iter()
        .filter_map(|k| amps.get(k))
        .map(|a| (a - cap).max(0.0).powi(2))
        .sum::<f64>()
        * w
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub cost: f64,
    pub fidelity: f64,
    pub penalty: f64,
    pub amplitudes: Amplitudes,
    /// Evolution error; the cost is then the worst case 1.
    pub failure: Option<String>,
}

/// Cost function for one restart: fixed protocol template, variable β^k.
pub struct Objective {
    template: DrivenProtocol,
    psi0: StateVector,
    target: StateVector,
    cap: Option<f64>,
    energy_unit: f64,
    tolerance: Tolerance,
}

impl Objective {
    /// `distortions` are the CRAB r_k (ignored for non-CRAB methods).
    pub fn new(
        problem: &OptimizationProblem,
        ctx: &ModelContext,
        tau: f64,
        distortions: &[f64],
    ) -> Result<Self> {
        problem.validate()?;
        let zeros = vec![0.0; problem.n_k];
        let control = if problem.method.is_crab() {
            ControlField::crab(zeros, ctx.frequency, distortions.to_vec())?
        } else {
            ControlField::new(zeros, ctx.frequency)?
        };
        let template = ctx.protocol(problem.method, tau, control)?;
        let (psi0, target) = boundary_states(&template)?;
        Ok(Objective {
            template,
            psi0,
            target,
            cap: problem.cap,
            energy_unit: ctx.energy_unit(),
            tolerance: problem.tolerance,
        })
    }

    pub fn protocol(&self, coefficients: &[f64]) -> Result<DrivenProtocol> {
        Ok(self
            .template
            .with_control(self.template.control.with_coefficients(coefficients)?))
    }

    pub fn evaluate(&self, coefficients: &[f64]) -> Evaluation {
        let run = self
            .protocol(coefficients)
            .and_then(|p| evolve(&p, &self.psi0, &self.target, &self.tolerance));
        match run {
            Ok(r) => {
                let penalty = self
                    .cap
                    .map_or(0.0, |c| amplitude_penalty(&r.amplitudes, c, self.energy_unit));
                Evaluation {
                    cost: 1.0 - r.fidelity + penalty,
                    fidelity: r.fidelity,
                    penalty,
                    amplitudes: r.amplitudes,
                    failure: None,
                }
            }
            Err(e) => Evaluation {
                cost: 1.0,
                fidelity: 0.0,
                penalty: 0.0,
                amplitudes: Amplitudes::new(),
                failure: Some(e.to_string()),
            },
        }
    }
}

/// 1 − F (+ penalty) for non-CRAB methods; CRAB methods use rₖ = 0.
pub fn cost(problem: &OptimizationProblem, coefficients: &[f64], ctx: &ModelContext, tau: f64) -> Result<f64> {
    if coefficients.len() != problem.n_k {
        return Err(Error::DimensionMismatch {
            expected: problem.n_k,
            found: coefficients.len(),
        });
    }
    let obj = Objective::new(problem, ctx, tau, &vec![0.0; problem.n_k])?;
    Ok(obj.evaluate(coefficients).cost)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestartRecord {
    pub index: usize,
    pub seed: u64,
    pub x0: Vec<f64>,
    pub distortions: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub fidelity: f64,
    pub cost: f64,
    pub evaluations: usize,
    pub sweeps: usize,
    pub converged: bool,
    /// Best-so-far cost after every line minimisation.
    pub history: Vec<f64>,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizationOutcome {
    pub best_coefficients: Vec<f64>,
    pub best_distortions: Vec<f64>,
    pub best_fidelity: f64,
    pub best_restart: usize,
    /// Fidelities of successful restarts in restart order.
    pub fidelities: Vec<f64>,
    pub stats: DistributionStats,
    pub n_failed: usize,
    /// Max amplitudes of the best protocol.
    pub best_amplitudes: Amplitudes,
    pub restarts: Vec<RestartRecord>,
}

/// One Powell run from the seeded draw of restart `index`.
pub fn run_single_restart(
    problem: &OptimizationProblem,
    ctx: &ModelContext,
    tau: f64,
    index: usize,
) -> Result<RestartRecord> {
    let seed = problem.base_seed.wrapping_add(index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0: Vec<f64> = problem
        .bounds
        .iter()
        .map(|&(lo, hi)| if lo == hi { lo } else { rng.random_range(lo..hi) })
        .collect();
    let distortions = if problem.method.is_crab() {
        draw_crab_distortions(&mut rng, problem.n_k)
    } else {
        Vec::new()
    };
    let obj = Objective::new(problem, ctx, tau, &distortions)?;
    let bounds = problem.search_bounds();
    let res = powell_minimize(|x| obj.evaluate(x).cost, &x0, Some(&bounds), &problem.powell);
    let fin = obj.evaluate(&res.x);
    // any protocol inside the cap costs at most 1, so this one is stuck outside it
    let failure = fin.failure.or_else(|| {
        (fin.cost > 1.0).then(|| format!("amplitude cap violated (penalty {:.3e})", fin.penalty))
    });
    Ok(RestartRecord {
        index,
        seed,
        x0,
        distortions,
        coefficients: res.x,
        fidelity: fin.fidelity,
        cost: fin.cost,
        evaluations: res.evals + 1,
        sweeps: res.sweeps,
        converged: res.converged,
        history: res.history,
        failure,
    })
}

/// Independent restarts j = 0..restarts with seed base_seed + j, run on the
/// current rayon pool. Failed restarts are counted and excluded.
pub fn run_restarts(problem: &OptimizationProblem, ctx: &ModelContext, tau: f64) -> Result<OptimizationOutcome> {
    problem.validate()?;
    // fail fast on configuration errors before spawning work
    Objective::new(problem, ctx, tau, &vec![0.0; problem.n_k])?;
    let records: Vec<RestartRecord> = (0..problem.restarts)
        .into_par_iter()
        .map(|j| {
            run_single_restart(problem, ctx, tau, j).unwrap_or_else(|e| RestartRecord {
                index: j,
                seed: problem.base_seed.wrapping_add(j as u64),
                x0: Vec::new(),
                distortions: Vec::new(),
                coefficients: Vec::new(),
                fidelity: 0.0,
                cost: 1.0,
                evaluations: 0,
                sweeps: 0,
                converged: false,
                history: Vec::new(),
                failure: Some(e.to_string()),
            })
        })
        .collect();
    outcome_from_records(problem, ctx, tau, records)
}

fn outcome_from_records(
    problem: &OptimizationProblem,
    ctx: &ModelContext,
    tau: f64,
    records: Vec<RestartRecord>,
) -> Result<OptimizationOutcome> {
    let ok: Vec<&RestartRecord> = records.iter().filter(|r| r.failure.is_none()).collect();
    let n_failed = records.len() - ok.len();
    let fidelities: Vec<f64> = ok.iter().map(|r| r.fidelity).collect();
    let best = ok
        .iter()
        .copied()
        .fold(None::<&RestartRecord>, |b, r| match b {
            Some(b) if b.fidelity >= r.fidelity => Some(b),
            _ => Some(r),
        })
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "all {} restarts failed: {}",
                records.len(),
                records[0].failure.clone().unwrap_or_default()
            ))
        })?;
    let stats = summarize_distribution(&fidelities)?;
    let obj = Objective::new(problem, ctx, tau, &best.distortions)?;
    let best_amplitudes = obj.evaluate(&best.coefficients).amplitudes;
    Ok(OptimizationOutcome {
        best_coefficients: best.coefficients.clone(),
        best_distortions: best.distortions.clone(),
        best_fidelity: best.fidelity,
        best_restart: best.index,
        fidelities,
        stats,
        n_failed,
        best_amplitudes,
        restarts: records,
    })
}
