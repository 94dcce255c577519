//! Grid runner: one row per (N, N_k, τ, method).

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{frequency_name, ExperimentConfig, RunMethod};
use crate::dynamics::{
    boundary_states, evolve, path_gauge_amplitudes, Amplitudes, ControlFolding, Tolerance,
    AMPLITUDE_GRID,
};
use crate::optimize::{
    run_restarts, summarize_distribution, DistributionStats, Method, ModelContext,
    OptimizationProblem, PowellOptions,
};
use crate::schedules::ControlField;
use crate::{Error, Result};

/// Bumped whenever the column set or its meaning changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Amplitude labels reported as `max_amp_<label>`, in column order.
pub const AMPLITUDE_COLUMNS: [&str; 10] = [
    "zz", "z_field", "x_field", "control", "cd_alpha", "cd_gamma", "cd_zeta", "cd_exact",
    "tunnel", "site",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub schema_version: u32,
    pub panel: String,
    pub model: String,
    pub model_params: String,
    pub method: String,
    pub cd_mode: String,
    pub n_sites: usize,
    pub n_k: usize,
    #[serde(rename = "tau_invJ")]
    pub tau: f64,
    pub best_f: Option<f64>,
    pub mean_f: Option<f64>,
    pub std_f: Option<f64>,
    pub q1: Option<f64>,
    pub median_f: Option<f64>,
    pub q3: Option<f64>,
    pub iqr: Option<f64>,
    pub min_f: Option<f64>,
    pub max_f: Option<f64>,
    pub max_amp_zz: Option<f64>,
    pub max_amp_z_field: Option<f64>,
    pub max_amp_x_field: Option<f64>,
    pub max_amp_control: Option<f64>,
    pub max_amp_cd_alpha: Option<f64>,
    pub max_amp_cd_gamma: Option<f64>,
    pub max_amp_cd_zeta: Option<f64>,
    pub max_amp_cd_exact: Option<f64>,
    pub max_amp_tunnel: Option<f64>,
    pub max_amp_site: Option<f64>,
    /// Second-order |λ̇α|, |λ̇γ|, |λ̇ζ| along the row's best path (spin models).
    pub path_alpha: Option<f64>,
    pub path_gamma: Option<f64>,
    pub path_zeta: Option<f64>,
    /// `;`-joined.
    pub best_coefficients: String,
    pub best_distortions: String,
    pub restart_fidelities: String,
    pub n_restarts: usize,
    pub n_failed: usize,
    pub seed: u64,
    pub rtol: f64,
    pub atol: f64,
    pub ftol: f64,
    pub xtol: f64,
    pub max_sweeps: usize,
    #[serde(rename = "box_J")]
    pub box_half_width: f64,
    #[serde(rename = "search_J")]
    pub search_half_width: f64,
    pub clip_to_box: bool,
    #[serde(rename = "cap_J")]
    pub cap: Option<f64>,
    pub frequency: String,
    pub scaling: bool,
    pub finite_size: bool,
    pub failure: String,
    pub wall_time_s: f64,
}

impl ResultRow {
    pub fn amplitude(&self, label: &str) -> Option<f64> {
        match label {
            "zz" => self.max_amp_zz,
            "z_field" => self.max_amp_z_field,
            "x_field" => self.max_amp_x_field,
            "control" => self.max_amp_control,
            "cd_alpha" => self.max_amp_cd_alpha,
            "cd_gamma" => self.max_amp_cd_gamma,
            "cd_zeta" => self.max_amp_cd_zeta,
            "cd_exact" => self.max_amp_cd_exact,
            "tunnel" => self.max_amp_tunnel,
            "site" => self.max_amp_site,
            _ => None,
        }
    }

    /// Parsed `restart_fidelities`.
    pub fn fidelities(&self) -> Vec<f64> {
        split_floats(&self.restart_fidelities)
    }

    pub fn coefficients(&self) -> Vec<f64> {
        split_floats(&self.best_coefficients)
    }

    fn set_amplitudes(&mut self, a: &Amplitudes) {
        let g = |k: &str| a.get(k).copied();
        self.max_amp_zz = g("zz");
        self.max_amp_z_field = g("z_field");
        self.max_amp_x_field = g("x_field");
        self.max_amp_control = g("control");
        self.max_amp_cd_alpha = g("cd_alpha");
        self.max_amp_cd_gamma = g("cd_gamma");
        self.max_amp_cd_zeta = g("cd_zeta");
        self.max_amp_cd_exact = g("cd_exact");
        self.max_amp_tunnel = g("tunnel");
        self.max_amp_site = g("site");
    }

    fn set_stats(&mut self, s: &DistributionStats) {
        self.best_f = Some(s.max);
        self.mean_f = Some(s.mean);
        self.std_f = Some(s.std);
        self.q1 = Some(s.q1);
        self.median_f = Some(s.median);
        self.q3 = Some(s.q3);
        self.iqr = Some(s.iqr());
        self.min_f = Some(s.min);
        self.max_f = Some(s.max);
    }
}

fn split_floats(s: &str) -> Vec<f64> {
    s.split(';').filter(|p| !p.is_empty()).filter_map(|p| p.parse().ok()).collect()
}

fn join_floats(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(";")
}

/// One grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub n_sites: usize,
    pub n_k: usize,
    pub tau: f64,
    pub method: RunMethod,
}

/// Grid points in output order: N, then N_k, then τ, then method.
pub fn grid(config: &ExperimentConfig) -> Vec<GridPoint> {
    let mut g = Vec::new();
    for &n_sites in &config.n_sites {
        for &n_k in &config.n_k {
            for &tau in &config.taus {
                for &method in &config.methods {
                    g.push(GridPoint { n_sites, n_k, tau, method });
                }
            }
        }
    }
    g
}

/// Runs every grid point on the current rayon pool; rows come back in grid order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    Ok(grid(config)
        .into_par_iter()
        .map(|p| run_point(config, p))
        .collect())
}

/// As [`run_experiment`] on a pool of `jobs` threads (0 picks the core count).
pub fn run_experiment_with_jobs(config: &ExperimentConfig, jobs: usize) -> Result<Vec<ResultRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    pool.install(|| run_experiment(config))
}

/// A row with every optional column empty, for spelling out the header.
pub(crate) fn placeholder_row() -> ResultRow {
    let c = ExperimentConfig::new(super::config::ModelKind::TwoSpin);
    let p = GridPoint {
        n_sites: 2,
        n_k: 1,
        tau: 1.0,
        method: RunMethod::Baseline(crate::dynamics::CdMode::None),
    };
    empty_row(&c, p, "none")
}

fn empty_row(config: &ExperimentConfig, p: GridPoint, cd_mode: &str) -> ResultRow {
    let tol = Tolerance::relative(config.rtol);
    ResultRow {
        schema_version: SCHEMA_VERSION,
        panel: config.panel.clone(),
        model: config.model.name().to_string(),
        model_params: config.model_params(),
        method: p.method.name().to_string(),
        cd_mode: cd_mode.to_string(),
        n_sites: p.n_sites,
        n_k: p.n_k,
        tau: p.tau,
        best_f: None,
        mean_f: None,
        std_f: None,
        q1: None,
        median_f: None,
        q3: None,
        iqr: None,
        min_f: None,
        max_f: None,
        max_amp_zz: None,
        max_amp_z_field: None,
        max_amp_x_field: None,
        max_amp_control: None,
        max_amp_cd_alpha: None,
        max_amp_cd_gamma: None,
        max_amp_cd_zeta: None,
        max_amp_cd_exact: None,
        max_amp_tunnel: None,
        max_amp_site: None,
        path_alpha: None,
        path_gamma: None,
        path_zeta: None,
        best_coefficients: String::new(),
        best_distortions: String::new(),
        restart_fidelities: String::new(),
        n_restarts: match p.method {
            RunMethod::Baseline(_) => 1,
            RunMethod::Optimized(_) => config.restarts,
        },
        n_failed: 0,
        seed: config.seed,
        rtol: tol.rtol,
        atol: tol.atol,
        ftol: config.ftol,
        xtol: config.xtol,
        max_sweeps: config.max_sweeps,
        box_half_width: config.box_half_width,
        search_half_width: config.search_half_width,
        clip_to_box: config.clip_to_box,
        cap: config.cap,
        frequency: frequency_name(config.frequency).to_string(),
        scaling: config.scaling,
        finite_size: config.finite_size,
        failure: String::new(),
        wall_time_s: 0.0,
    }
}

fn context(config: &ExperimentConfig, n_sites: usize, cd_override: Option<crate::dynamics::CdMode>) -> Result<ModelContext> {
    let mut ctx = ModelContext::new(config.model_for(n_sites)?);
    ctx.frequency = config.frequency;
    ctx.scaling = config.scaling;
    ctx.finite_size = config.finite_size;
    ctx.cd_override = cd_override;
    Ok(ctx)
}

/// Runs one grid point; errors land in the row's `failure` column.
pub fn run_point(config: &ExperimentConfig, p: GridPoint) -> ResultRow {
    let start = Instant::now();
    let cd = match p.method {
        RunMethod::Baseline(cd) => cd,
        RunMethod::Optimized(m) if m.uses_cd() => config
            .cd_override
            .unwrap_or_else(|| match config.model_for(p.n_sites) {
                Ok(model) => m.cd_mode(&model),
                Err(_) => crate::dynamics::CdMode::None,
            }),
        RunMethod::Optimized(_) => crate::dynamics::CdMode::None,
    };
    let mut row = empty_row(config, p, cd.name());
    let outcome = match p.method {
        RunMethod::Baseline(cd) => baseline(config, p, cd, &mut row),
        RunMethod::Optimized(m) => optimised(config, p, m, &mut row),
    };
    if let Err(e) = outcome {
        row.failure = e.to_string();
    }
    row.wall_time_s = start.elapsed().as_secs_f64();
    row
}

fn set_path_amplitudes(row: &mut ResultRow, protocol: &crate::dynamics::DrivenProtocol) {
    if !protocol.model.is_spin() {
        return;
    }
    if let Ok([a, g, z]) = path_gauge_amplitudes(protocol, AMPLITUDE_GRID, ControlFolding::default()) {
        row.path_alpha = Some(a);
        row.path_gamma = Some(g);
        row.path_zeta = Some(z);
    }
}

fn baseline(config: &ExperimentConfig, p: GridPoint, cd: crate::dynamics::CdMode, row: &mut ResultRow) -> Result<()> {
    let ctx = context(config, p.n_sites, Some(cd))?;
    let protocol = ctx.protocol(Method::Bpo, p.tau / config.energy_unit, ControlField::zero(p.n_k, config.frequency))?;
    let (psi0, target) = boundary_states(&protocol)?;
    let r = evolve(&protocol, &psi0, &target, &Tolerance::relative(config.rtol))?;
    row.set_stats(&summarize_distribution(&[r.fidelity])?);
    row.set_amplitudes(&r.amplitudes);
    row.restart_fidelities = join_floats(&[r.fidelity]);
    set_path_amplitudes(row, &protocol);
    Ok(())
}

fn optimised(config: &ExperimentConfig, p: GridPoint, method: Method, row: &mut ResultRow) -> Result<()> {
    let override_cd = if method.uses_cd() { config.cd_override } else { None };
    let ctx = context(config, p.n_sites, override_cd)?;
    // config quantities are in units of J (or J0)
    let u = config.energy_unit;
    let tau = p.tau / u;
    let mut problem = OptimizationProblem::new(method, p.n_k)?.with_box(config.box_half_width * u);
    problem.search_half_width = config.search_half_width * u;
    problem.clip_to_box = config.clip_to_box;
    problem.restarts = config.restarts;
    problem.base_seed = config.seed;
    problem.cap = config.cap.map(|c| c * u);
    problem.tolerance = Tolerance::relative(config.rtol);
    problem.powell = PowellOptions {
        ftol: config.ftol,
        xtol: config.xtol,
        max_sweeps: config.max_sweeps,
        ..PowellOptions::default()
    };
    let out = run_restarts(&problem, &ctx, tau)?;
    row.set_stats(&out.stats);
    row.best_f = Some(out.best_fidelity);
    row.set_amplitudes(&out.best_amplitudes);
    row.best_coefficients = join_floats(&out.best_coefficients);
    row.best_distortions = join_floats(&out.best_distortions);
    row.restart_fidelities = join_floats(&out.fidelities);
    row.n_failed = out.n_failed;
    if out.n_failed > 0 {
        let first = out.restarts.iter().find_map(|r| r.failure.clone()).unwrap_or_default();
        row.failure = format!("{} of {} restarts failed: {first}", out.n_failed, config.restarts);
    }
    let control = if method.is_crab() {
        ControlField::crab(out.best_coefficients.clone(), config.frequency, out.best_distortions.clone())?
    } else {
        ControlField::new(out.best_coefficients.clone(), config.frequency)?
    };
    set_path_amplitudes(row, &ctx.protocol(method, tau, control)?);
    Ok(())
}
