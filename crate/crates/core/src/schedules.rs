//! Scaling functions λ(t) and the optimisable control field β(t).

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScheduleKind {
    /// λ(t) = sin²(π/2 · sin²(πt/2τ)), from 0 to 1.
    TrigRamp,
    /// λ(t) = 1 − t/τ, from 1 to 0.
    LinearReverse,
}

impl ScheduleKind {
    pub fn lambda_start(self) -> f64 {
        match self {
            ScheduleKind::TrigRamp => 0.0,
            ScheduleKind::LinearReverse => 1.0,
        }
    }

    pub fn lambda_end(self) -> f64 {
        match self {
            ScheduleKind::TrigRamp => 1.0,
            ScheduleKind::LinearReverse => 0.0,
        }
    }
}

/// λ and λ̇ at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathPoint {
    pub lambda: f64,
    pub lambda_dot: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnealingSchedule {
    kind: ScheduleKind,
    tau: f64,
}

impl AnnealingSchedule {
    pub fn new(kind: ScheduleKind, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Domain {
                what: "tau",
                value: tau,
                domain: "(0, inf)",
            });
        }
        Ok(AnnealingSchedule { kind, tau })
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// (λ(0), λ(τ))
    pub fn boundary_values(&self) -> (f64, f64) {
        (self.kind.lambda_start(), self.kind.lambda_end())
    }

    fn check_t(&self, t: f64) -> Result<()> {
        if !(0.0..=self.tau).contains(&t) {
            return Err(Error::Domain {
                what: "t",
                value: t,
                domain: "[0, tau]",
            });
        }
        Ok(())
    }

    pub fn lambda(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        Ok(self.point(t).lambda)
    }

    pub fn lambda_dot(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        Ok(self.point(t).lambda_dot)
    }

    /// λ and λ̇ with t clamped into [0, τ] (used inside integrators where stage
    /// times can overshoot τ by rounding).
    pub fn point(&self, t: f64) -> PathPoint {
        let t = t.clamp(0.0, self.tau);
        match self.kind {
            ScheduleKind::TrigRamp => {
                let theta = PI * t / (2.0 * self.tau);
                let s = theta.sin().powi(2);
                let lambda = (0.5 * PI * s).sin().powi(2);
                let lambda_dot =
                    PI * PI / (4.0 * self.tau) * (PI * s).sin() * (PI * t / self.tau).sin();
                PathPoint { lambda, lambda_dot }
            }
            ScheduleKind::LinearReverse => PathPoint {
                lambda: 1.0 - t / self.tau,
                lambda_dot: -1.0 / self.tau,
            },
        }
    }

    /// λ(t)/λ̇(t) with the analytic limit t/4 at t → 0 (TrigRamp) and |·| clamped
    /// to `cap` where λ̇ vanishes at t = τ.
    pub fn lambda_over_lambda_dot(&self, t: f64, cap: f64) -> Result<f64> {
        self.check_t(t)?;
        let r = match self.kind {
            ScheduleKind::TrigRamp => {
                // λ/λ̇ = tan(πs/2)/(π ṡ) = [tan(x)/x] · τ tan(θ)/(2π), x = πs/2
                let theta = PI * t / (2.0 * self.tau);
                let x = 0.5 * PI * theta.sin().powi(2);
                let tan_ratio = if x == 0.0 { 1.0 } else { x.tan() / x };
                tan_ratio * self.tau * theta.tan() / (2.0 * PI)
            }
            ScheduleKind::LinearReverse => -(self.tau - t),
        };
        if r.is_nan() {
            return Ok(cap);
        }
        if r.abs() > cap {
            return Ok(cap.copysign(r));
        }
        Ok(r)
    }

    /// Default clamp for [`Self::lambda_over_lambda_dot`]: 10⁶·τ.
    pub fn default_ratio_cap(&self) -> f64 {
        1e6 * self.tau
    }
}

pub fn lambda_of_t(schedule: &AnnealingSchedule, t: f64) -> Result<f64> {
    schedule.lambda(t)
}

pub fn lambda_dot(schedule: &AnnealingSchedule, t: f64) -> Result<f64> {
    schedule.lambda_dot(t)
}

/// Inverse of the TrigRamp map: f(λ(t)) = t/τ.
pub fn f_of_lambda(lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain {
            what: "lambda",
            value: lambda,
            domain: "[0, 1]",
        });
    }
    let (u, uc) = arcsin_sqrt_pair(lambda, 1.0 - lambda);
    Ok(arcsin_sqrt_pair(u, uc).0)
}

/// g(x) = (2/π) arcsin √x together with 1 − g(x) = g(1 − x), each evaluated on
/// whichever argument keeps arcsin away from 1.
fn arcsin_sqrt_pair(x: f64, xc: f64) -> (f64, f64) {
    if x <= 0.5 {
        let g = (2.0 / PI) * x.sqrt().asin();
        (g, 1.0 - g)
    } else {
        let gc = (2.0 / PI) * xc.sqrt().asin();
        (1.0 - gc, gc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrequencyConvention {
    /// sin(πkt/τ)
    HalfSine,
    /// sin(2πkt/τ)
    FullSine,
}

impl FrequencyConvention {
    /// mₖ/π for k = 1.
    fn base(self) -> f64 {
        match self {
            FrequencyConvention::HalfSine => 1.0,
            FrequencyConvention::FullSine => 2.0,
        }
    }
}

/// sin(πx), exactly zero at integers.
fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let s = (PI * (x - n)).sin();
    if n.rem_euclid(2.0) == 0.0 {
        s
    } else {
        -s
    }
}

/// cos(πx)
fn cos_pi(x: f64) -> f64 {
    let n = x.round();
    let c = (PI * (x - n)).cos();
    if n.rem_euclid(2.0) == 0.0 {
        c
    } else {
        -c
    }
}

/// β(t) = Σₖ βᵏ sin(mₖ t/τ) with mₖ = πk or 2πk, and k → k(1+rₖ) under CRAB.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlField {
    coefficients: Vec<f64>,
    convention: FrequencyConvention,
    crab: Vec<f64>,
    boundary_zero: bool,
}

impl ControlField {
    /// Plain Fourier-sine field; vanishes at both ends.
    pub fn new(coefficients: Vec<f64>, convention: FrequencyConvention) -> Result<Self> {
        check_coefficients(&coefficients)?;
        Ok(ControlField {
            coefficients,
            convention,
            crab: Vec::new(),
            boundary_zero: true,
        })
    }

    /// CRAB field with one distortion rₖ ∈ [−0.5, 0.5] per coefficient.
    pub fn crab(
        coefficients: Vec<f64>,
        convention: FrequencyConvention,
        distortions: Vec<f64>,
    ) -> Result<Self> {
        check_coefficients(&coefficients)?;
        if distortions.len() != coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: coefficients.len(),
                found: distortions.len(),
            });
        }
        if let Some(&r) = distortions.iter().find(|r| !(-0.5..=0.5).contains(*r)) {
            return Err(Error::Domain {
                what: "CRAB distortion r_k",
                value: r,
                domain: "[-0.5, 0.5]",
            });
        }
        Ok(ControlField {
            coefficients,
            convention,
            crab: distortions,
            boundary_zero: false,
        })
    }

    /// β ≡ 0 with `n_k` slots.
    pub fn zero(n_k: usize, convention: FrequencyConvention) -> Self {
        ControlField {
            coefficients: vec![0.0; n_k],
            convention,
            crab: Vec::new(),
            boundary_zero: true,
        }
    }

    /// Same frequencies, new coefficients.
    pub fn with_coefficients(&self, coefficients: &[f64]) -> Result<Self> {
        if coefficients.len() != self.coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coefficients.len(),
                found: coefficients.len(),
            });
        }
        check_coefficients(coefficients)?;
        Ok(ControlField {
            coefficients: coefficients.to_vec(),
            ..self.clone()
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn convention(&self) -> FrequencyConvention {
        self.convention
    }

    pub fn distortions(&self) -> &[f64] {
        &self.crab
    }

    pub fn boundary_zero(&self) -> bool {
        self.boundary_zero
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&b| b == 0.0)
    }

    /// Angular multipliers mₖ.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.coefficients.len()).map(|i| PI * self.cycles(i)).collect()
    }

    /// mₖ/π
    fn cycles(&self, i: usize) -> f64 {
        let k = (i + 1) as f64;
        let r = self.crab.get(i).copied().unwrap_or(0.0);
        self.convention.base() * k * (1.0 + r)
    }

    pub fn value(&self, t: f64, tau: f64) -> f64 {
        let s = t / tau;
        self.coefficients
            .iter()
            .enumerate()
            .map(|(i, b)| b * sin_pi(self.cycles(i) * s))
            .sum()
    }

    pub fn derivative(&self, t: f64, tau: f64) -> f64 {
        let s = t / tau;
        self.coefficients
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let c = self.cycles(i);
                b * PI * c / tau * cos_pi(c * s)
            })
            .sum()
    }
}

fn check_coefficients(c: &[f64]) -> Result<()> {
    if c.is_empty() {
        return Err(Error::Empty("control coefficients"));
    }
    if let Some(&b) = c.iter().find(|b| !b.is_finite()) {
        return Err(Error::NonFinite(format!("control coefficient {b}")));
    }
    Ok(())
}

pub fn control_value(field: &ControlField, t: f64, tau: f64) -> f64 {
    field.value(t, tau)
}

pub fn control_derivative(field: &ControlField, t: f64, tau: f64) -> f64 {
    field.derivative(t, tau)
}

/// One rₖ ~ U[−0.5, 0.5] per coefficient.
pub fn draw_crab_distortions<R: Rng>(rng: &mut R, n_k: usize) -> Vec<f64> {
    (0..n_k).map(|_| rng.random_range(-0.5..=0.5)).collect()
}
