//! Closed-form first-order LCD coefficients.

use std::f64::consts::PI;

use super::second_order::GeneralIsingParams;

/// Path quantities entering the controlled formulas. `lambda_over_lambda_dot`
/// comes from the guarded schedule operation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlledPoint {
    pub lambda: f64,
    pub lambda_over_lambda_dot: f64,
    pub beta: f64,
    pub beta_dot: f64,
}

/// α = −h²/(4(hλ)² + h² + 4J²)
pub fn alpha_two_spin(lambda: f64, j: f64, h: f64) -> f64 {
    let den = 4.0 * (h * lambda).powi(2) + h * h + 4.0 * j * j;
    if den == 0.0 {
        return 0.0;
    }
    -h * h / den
}

/// Two-spin α with a control field entering as H₀ − βΣσᶻ:
/// α = −(h(h+β) − h(λ/λ̇)β̇)/(4(hλ)² + (h+β)² + 4J²).
pub fn alpha_two_spin_controlled(p: ControlledPoint, j: f64, h: f64) -> f64 {
    let hb = h + p.beta;
    let den = 4.0 * (h * p.lambda).powi(2) + hb * hb + 4.0 * j * j;
    if den == 0.0 {
        return 0.0;
    }
    -(h * hb - h * p.lambda_over_lambda_dot * p.beta_dot) / den
}

/// λ̇α for the two-spin model in the H₀ − βΣσᶻ convention, finite where λ̇ → 0.
pub fn two_spin_cd_rate(
    lambda: f64,
    lambda_dot: f64,
    beta: f64,
    beta_dot: f64,
    j: f64,
    h: f64,
) -> f64 {
    let hb = h + beta;
    let den = 4.0 * (h * lambda).powi(2) + hb * hb + 4.0 * j * j;
    if den == 0.0 {
        return 0.0;
    }
    -(h * hb * lambda_dot - h * lambda * beta_dot) / den
}

fn ising_coupling_term(j: f64, n_sites: usize, finite_size: bool) -> f64 {
    let f = if finite_size {
        1.0 - 1.0 / n_sites as f64
    } else {
        1.0
    };
    2.0 * j * j * f
}

/// α = ½ Z₀X_f/(Z₀² + λ²X_f² + 2J²), with J² → J²(1 − 1/N) when `finite_size`.
pub fn alpha_ising(lambda: f64, j: f64, z0: f64, x_f: f64, n_sites: usize, finite_size: bool) -> f64 {
    let den = z0 * z0 + (lambda * x_f).powi(2) + ising_coupling_term(j, n_sites, finite_size);
    if den == 0.0 {
        return 0.0;
    }
    0.5 * z0 * x_f / den
}

/// S(λ) = sin²(πλ)
pub fn boundary_scaling(lambda: f64) -> f64 {
    (PI * lambda).sin().powi(2)
}

/// α(λ,β) = (X_f/2)((Z₀+β) − λβ̇/λ̇)/((Z₀+β)² + λ²X_f² + 2J²), times S(λ) when
/// `scaling` is set. `n_sites`/`finite_size` select the J²(1 − 1/N) variant.
#[allow(clippy::too_many_arguments)]
pub fn alpha_ising_controlled(
    p: ControlledPoint,
    j: f64,
    z0: f64,
    x_f: f64,
    n_sites: usize,
    finite_size: bool,
    scaling: bool,
) -> f64 {
    let zb = z0 + p.beta;
    let den = zb * zb + (p.lambda * x_f).powi(2) + ising_coupling_term(j, n_sites, finite_size);
    if den == 0.0 {
        return 0.0;
    }
    // λβ̇/λ̇ = β̇ · (λ/λ̇)
    let a = 0.5 * x_f * (zb - p.beta_dot * p.lambda_over_lambda_dot) / den;
    if scaling {
        a * boundary_scaling(p.lambda)
    } else {
        a
    }
}

/// λ̇α for the Ising chain with control +βΣσᶻ.
#[allow(clippy::too_many_arguments)]
pub fn ising_cd_rate(
    lambda: f64,
    lambda_dot: f64,
    beta: f64,
    beta_dot: f64,
    j: f64,
    z0: f64,
    x_f: f64,
    n_sites: usize,
    finite_size: bool,
    scaling: bool,
) -> f64 {
    let zb = z0 + beta;
    let den = zb * zb + (lambda * x_f).powi(2) + ising_coupling_term(j, n_sites, finite_size);
    if den == 0.0 {
        return 0.0;
    }
    let r = 0.5 * x_f * (zb * lambda_dot - lambda * beta_dot) / den;
    if scaling {
        r * boundary_scaling(lambda)
    } else {
        r
    }
}

/// First-order minimiser for the homogeneous chain (open boundary):
/// α = (ZẊ − XŻ)/(2(X² + Z² + 2(1 − 1/N)J²)). Linear in the derivatives, so
/// passing time rates returns λ̇α.
pub fn first_order_rate(p: &GeneralIsingParams) -> f64 {
    let n = p.n_sites as f64;
    let den = 2.0 * (p.x * p.x + p.z * p.z + 2.0 * (1.0 - 1.0 / n) * p.j * p.j);
    if den == 0.0 {
        return 0.0;
    }
    (p.z * p.dx - p.x * p.dz) / den
}
