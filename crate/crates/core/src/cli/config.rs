//! Flat `key = value` experiment configs.
//!
//! Lines are `key = value`; `#` starts a comment. List values are comma
//! separated, and `logspace(a, b, n)` expands to n points from 10^a to 10^b.
//! Energies carry their unit in the key (`h_J`, `cap_J`), times likewise
//! (`tau_grid_invJ`); for the lattice the unit is J₀.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::dynamics::CdMode;
use crate::models::SpinModel;
use crate::optimize::Method;
use crate::schedules::FrequencyConvention;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    TwoSpin,
    Ising,
    Lattice,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::TwoSpin => "two_spin",
            ModelKind::Ising => "ising",
            ModelKind::Lattice => "lattice",
        }
    }
}

/// A table row's method: a single evolution with a fixed CD mode, or an optimiser.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunMethod {
    Baseline(CdMode),
    Optimized(Method),
}

impl RunMethod {
    pub fn parse(s: &str) -> Option<Self> {
        if let Some(m) = Method::parse(s) {
            return Some(RunMethod::Optimized(m));
        }
        let cd = match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "none" | "arp" => CdMode::None,
            "lcd1" | "lcd" => CdMode::Lcd1,
            "lcd2" => CdMode::Lcd2,
            "exact_cd" | "exact" => CdMode::ExactCd,
            "lattice_cd" => CdMode::LatticeCd,
            _ => return None,
        };
        Some(RunMethod::Baseline(cd))
    }

    pub fn name(self) -> &'static str {
        match self {
            RunMethod::Baseline(cd) => cd.name(),
            RunMethod::Optimized(m) => m.name(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    /// J, or J₀ for the lattice.
    pub energy_unit: f64,
    /// h (two-spin), Z₀ and X_f (Ising) or V₀ (lattice), in units of the energy unit.
    pub h: f64,
    pub z0: f64,
    pub x_f: f64,
    pub v0: f64,
    pub n_sites: Vec<usize>,
    pub methods: Vec<RunMethod>,
    /// τ in units of 1/J.
    pub taus: Vec<f64>,
    pub n_k: Vec<usize>,
    pub restarts: usize,
    pub seed: u64,
    pub cap: Option<f64>,
    pub box_half_width: f64,
    pub search_half_width: f64,
    pub clip_to_box: bool,
    pub frequency: FrequencyConvention,
    pub scaling: bool,
    pub finite_size: bool,
    /// Replaces the CD mode of the optimised methods that use one.
    pub cd_override: Option<CdMode>,
    pub rtol: f64,
    pub ftol: f64,
    pub xtol: f64,
    pub max_sweeps: usize,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    /// Label copied into every row; the canned figures use it for panels.
    pub panel: String,
}

impl ExperimentConfig {
    /// Defaults for `model`; τ grid and methods are left empty.
    pub fn new(model: ModelKind) -> Self {
        let (h, v0, n) = match model {
            ModelKind::TwoSpin => (2.0, 0.0, 2),
            ModelKind::Ising => (0.0, 0.0, 5),
            ModelKind::Lattice => (0.0, 4.0, 7),
        };
        ExperimentConfig {
            model,
            energy_unit: 1.0,
            h,
            z0: 0.02,
            x_f: 10.0,
            v0,
            n_sites: vec![n],
            methods: Vec::new(),
            taus: Vec::new(),
            n_k: vec![1],
            restarts: 50,
            seed: 0,
            cap: None,
            box_half_width: 5.0,
            search_half_width: 100.0,
            clip_to_box: false,
            frequency: FrequencyConvention::HalfSine,
            scaling: false,
            finite_size: false,
            cd_override: None,
            rtol: 1e-10,
            ftol: 1e-8,
            xtol: 1e-4,
            max_sweeps: 100,
            format: OutputFormat::Csv,
            output: None,
            panel: String::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(usize, String, String)> = Vec::new();
        let mut seen: HashMap<String, usize> = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(config_err(line_no, line, "expected `key = value`"));
            };
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if k.is_empty() {
                return Err(config_err(line_no, "", "empty key"));
            }
            if let Some(prev) = seen.insert(k.clone(), line_no) {
                return Err(config_err(line_no, &k, &format!("duplicate key (first on line {prev})")));
            }
            entries.push((line_no, k, v));
        }
        let Some((mline, _, mval)) = entries.iter().find(|(_, k, _)| k == "model") else {
            return Err(config_err(0, "model", "missing required key"));
        };
        let kind = match mval.to_ascii_lowercase().replace('-', "_").as_str() {
            "two_spin" => ModelKind::TwoSpin,
            "ising" => ModelKind::Ising,
            "lattice" => ModelKind::Lattice,
            other => return Err(config_err(*mline, "model", &format!("unknown model `{other}`"))),
        };
        let mut c = ExperimentConfig::new(kind);
        let mut have_tau = false;
        let mut have_methods = false;
        for (line, key, val) in &entries {
            let (line, key) = (*line, key.as_str());
            let e = |msg: &str| config_err(line, key, msg);
            match key {
                "model" => {}
                "J" | "J0" => c.energy_unit = positive(val, &e)?,
                "h_J" => c.h = number(val, &e)?,
                "Z0_J" => c.z0 = number(val, &e)?,
                "X_f_J" => c.x_f = number(val, &e)?,
                "V0_J0" => c.v0 = number(val, &e)?,
                "n_sites" => c.n_sites = list(val, &e, |s| integer(s, &e))?,
                "methods" => {
                    c.methods = list(val, &e, |s| {
                        RunMethod::parse(s).ok_or_else(|| e(&format!("unknown method `{s}`")))
                    })?;
                    have_methods = true;
                }
                "tau_grid_invJ" | "tau_grid_invJ0" => {
                    c.taus = tau_grid(val, &e)?;
                    have_tau = true;
                }
                "n_k" => c.n_k = list(val, &e, |s| integer(s, &e))?,
                "restarts" => c.restarts = integer(val, &e)?,
                "seed" => {
                    c.seed = val.parse().map_err(|_| e("expected a non-negative integer"))?
                }
                "cap_J" | "cap_J0" => {
                    c.cap = if val.eq_ignore_ascii_case("none") {
                        None
                    } else {
                        Some(positive(val, &e)?)
                    }
                }
                "box_J" | "box_J0" => c.box_half_width = positive(val, &e)?,
                "search_J" | "search_J0" => c.search_half_width = positive(val, &e)?,
                "clip_to_box" => c.clip_to_box = boolean(val, &e)?,
                "frequency" => {
                    c.frequency = match val.to_ascii_lowercase().as_str() {
                        "half_sine" => FrequencyConvention::HalfSine,
                        "full_sine" => FrequencyConvention::FullSine,
                        _ => return Err(e("expected half_sine or full_sine")),
                    }
                }
                "scaling" => c.scaling = boolean(val, &e)?,
                "finite_size" => c.finite_size = boolean(val, &e)?,
                "cd_override" => {
                    c.cd_override = match RunMethod::parse(val) {
                        _ if val.eq_ignore_ascii_case("default") => None,
                        Some(RunMethod::Baseline(cd)) => Some(cd),
                        _ => return Err(e("expected a CD mode (none, lcd1, lcd2, exact_cd, lattice_cd)")),
                    }
                }
                "rtol" => c.rtol = positive(val, &e)?,
                "ftol" => c.ftol = positive(val, &e)?,
                "xtol" => c.xtol = positive(val, &e)?,
                "max_sweeps" => c.max_sweeps = integer(val, &e)?,
                "format" => {
                    c.format = OutputFormat::parse(val).ok_or_else(|| e("expected csv or json"))?
                }
                "output" => c.output = Some(PathBuf::from(val)),
                "panel" => c.panel = val.clone(),
                _ => return Err(e("unknown key")),
            }
        }
        if !have_tau {
            return Err(config_err(0, "tau_grid_invJ", "missing required key"));
        }
        if !have_methods {
            return Err(config_err(0, "methods", "missing required key"));
        }
        c.validate()?;
        Ok(c)
    }

    /// Semantic checks; field errors carry line 0.
    pub fn validate(&self) -> Result<()> {
        let e = |field: &str, msg: &str| Err(config_err(0, field, msg));
        if self.taus.is_empty() {
            return e("tau_grid_invJ", "τ grid is empty");
        }
        if let Some(t) = self.taus.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return e("tau_grid_invJ", &format!("τ = {t} must be positive"));
        }
        if self.methods.is_empty() {
            return e("methods", "no methods given");
        }
        if self.n_sites.is_empty() || self.n_k.is_empty() {
            return e("n_sites", "sweep lists must be nonempty");
        }
        if self.n_k.contains(&0) {
            return e("n_k", "N_k must be at least 1");
        }
        if self.restarts == 0 {
            return e("restarts", "need at least one restart");
        }
        if self.max_sweeps == 0 {
            return e("max_sweeps", "must be at least 1");
        }
        for &n in &self.n_sites {
            self.model_for(n).map_err(|err| config_err(0, "n_sites", &err.to_string()))?;
        }
        let spin = self.model != ModelKind::Lattice;
        for m in &self.methods {
            let cd = match m {
                RunMethod::Baseline(cd) => *cd,
                RunMethod::Optimized(_) => continue,
            };
            let ok = match cd {
                CdMode::None | CdMode::ExactCd => true,
                CdMode::Lcd1 | CdMode::Lcd2 => spin,
                CdMode::LatticeCd => !spin,
            };
            if !ok {
                return e("methods", &format!("{} does not apply to the {} model", cd.name(), self.model.name()));
            }
        }
        if let Some(cd) = self.cd_override {
            let ok = match cd {
                CdMode::None | CdMode::ExactCd => true,
                CdMode::Lcd1 | CdMode::Lcd2 => spin,
                CdMode::LatticeCd => !spin,
            };
            if !ok {
                return e("cd_override", &format!("{} does not apply to the {} model", cd.name(), self.model.name()));
            }
        }
        if self.scaling && self.model != ModelKind::Ising {
            return e("scaling", "the S(λ) scaling applies to the Ising chain only");
        }
        Ok(())
    }

    /// The model at `n_sites`, with energies scaled by the unit.
    pub fn model_for(&self, n_sites: usize) -> Result<SpinModel> {
        let u = self.energy_unit;
        match self.model {
            ModelKind::TwoSpin => {
                if n_sites != 2 {
                    return Err(Error::InvalidParameter(format!(
                        "the two-spin model has 2 sites, got {n_sites}"
                    )));
                }
                SpinModel::two_spin(u, self.h * u)
            }
            ModelKind::Ising => SpinModel::ising(u, self.z0 * u, self.x_f * u, n_sites),
            ModelKind::Lattice => SpinModel::lattice(u, self.v0 * u, n_sites),
        }
    }

    /// Model parameters as `key=value` pairs joined by `;`.
    pub fn model_params(&self) -> String {
        let u = self.energy_unit;
        match self.model {
            ModelKind::TwoSpin => format!("J={u};h_J={}", self.h),
            ModelKind::Ising => format!("J={u};Z0_J={};X_f_J={}", self.z0, self.x_f),
            ModelKind::Lattice => format!("J0={u};V0_J0={}", self.v0),
        }
    }

    /// Config text that parses back to `self`.
    pub fn to_text(&self) -> String {
        let join = |v: Vec<String>| v.join(", ");
        let mut s = String::new();
        let _ = writeln!(s, "model = {}", self.model.name());
        let unit = if self.model == ModelKind::Lattice { "J0" } else { "J" };
        let _ = writeln!(s, "{unit} = {}", self.energy_unit);
        match self.model {
            ModelKind::TwoSpin => {
                let _ = writeln!(s, "h_J = {}", self.h);
            }
            ModelKind::Ising => {
                let _ = writeln!(s, "Z0_J = {}\nX_f_J = {}", self.z0, self.x_f);
            }
            ModelKind::Lattice => {
                let _ = writeln!(s, "V0_J0 = {}", self.v0);
            }
        }
        let _ = writeln!(s, "n_sites = {}", join(self.n_sites.iter().map(|n| n.to_string()).collect()));
        let _ = writeln!(s, "methods = {}", join(self.methods.iter().map(|m| m.name().to_string()).collect()));
        let _ = writeln!(s, "tau_grid_{} = {}", tau_key(unit), join(self.taus.iter().map(|t| format!("{t:e}")).collect()));
        let _ = writeln!(s, "n_k = {}", join(self.n_k.iter().map(|n| n.to_string()).collect()));
        let _ = writeln!(s, "restarts = {}\nseed = {}", self.restarts, self.seed);
        if let Some(c) = self.cap {
            let _ = writeln!(s, "cap_{unit} = {c}");
        }
        let _ = writeln!(s, "box_{unit} = {}\nsearch_{unit} = {}", self.box_half_width, self.search_half_width);
        let _ = writeln!(s, "clip_to_box = {}", self.clip_to_box);
        let _ = writeln!(s, "frequency = {}", frequency_name(self.frequency));
        let _ = writeln!(s, "scaling = {}\nfinite_size = {}", self.scaling, self.finite_size);
        if let Some(cd) = self.cd_override {
            let _ = writeln!(s, "cd_override = {}", cd.name());
        }
        let _ = writeln!(s, "rtol = {:e}\nftol = {:e}\nxtol = {:e}", self.rtol, self.ftol, self.xtol);
        let _ = writeln!(s, "max_sweeps = {}\nformat = {}", self.max_sweeps, self.format.name());
        if let Some(p) = &self.output {
            let _ = writeln!(s, "output = {}", p.display());
        }
        if !self.panel.is_empty() {
            let _ = writeln!(s, "panel = {}", self.panel);
        }
        s
    }
}

fn tau_key(unit: &str) -> String {
    format!("inv{unit}")
}

pub fn frequency_name(f: FrequencyConvention) -> &'static str {
    match f {
        FrequencyConvention::HalfSine => "half_sine",
        FrequencyConvention::FullSine => "full_sine",
    }
}

fn config_err(line: usize, field: &str, message: &str) -> Error {
    Error::Config {
        line,
        field: field.to_string(),
        message: message.to_string(),
    }
}

fn number(s: &str, e: &impl Fn(&str) -> Error) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| e(&format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(e(&format!("`{s}` is not finite")));
    }
    Ok(v)
}

fn positive(s: &str, e: &impl Fn(&str) -> Error) -> Result<f64> {
    let v = number(s, e)?;
    if v <= 0.0 {
        return Err(e(&format!("`{s}` must be positive")));
    }
    Ok(v)
}

fn integer(s: &str, e: &impl Fn(&str) -> Error) -> Result<usize> {
    s.trim().parse().map_err(|_| e(&format!("`{s}` is not a non-negative integer")))
}

fn boolean(s: &str, e: &impl Fn(&str) -> Error) -> Result<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(e(&format!("`{s}` is not a boolean"))),
    }
}

fn list<T>(s: &str, e: &impl Fn(&str) -> Error, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    if s.trim().is_empty() {
        return Err(e("empty list"));
    }
    s.split(',').map(|p| item(p.trim())).collect()
}

fn tau_grid(s: &str, e: &impl Fn(&str) -> Error) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(args) = s.strip_prefix("logspace(").and_then(|r| r.strip_suffix(')')) {
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(e("logspace takes (start_exponent, stop_exponent, count)"));
        }
        let (a, b) = (number(parts[0], e)?, number(parts[1], e)?);
        let n = integer(parts[2], e)?;
        return Ok(match n {
            0 => Vec::new(),
            1 => vec![10f64.powf(a)],
            _ => (0..n)
                .map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64))
                .collect(),
        });
    }
    s.split(',').map(|p| number(p, e)).collect()
}
