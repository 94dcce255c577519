//! Second-order LCD on the homogeneous open chain H = −JΣσᶻσᶻ + ZΣσᶻ + XΣσˣ
//! with A = αΣσʸ + γΣ(σˣσʸ + σʸσˣ) + ζΣ(σᶻσʸ + σʸσᶻ).

use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use super::GaugeCoefficients;
use crate::{Error, Result};

/// Couplings and their derivatives. The derivatives may be λ-derivatives or
/// time rates; every solve is linear in them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralIsingParams {
    pub j: f64,
    pub z: f64,
    pub x: f64,
    pub dj: f64,
    pub dz: f64,
    pub dx: f64,
    pub n_sites: usize,
}

impl GeneralIsingParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return Err(Error::InvalidParameter(format!(
                "chain needs at least 2 sites, got {}",
                self.n_sites
            )));
        }
        let all = [self.j, self.z, self.x, self.dj, self.dz, self.dx];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("{self:?}")));
        }
        Ok(())
    }

    /// The squared terms of Tr G²/2ᴺ as (weight, constant, coefficient vector):
    /// S = Σ w (c + a·v)², v = (α, γ, ζ).
    fn terms(&self) -> [(f64, f64, [f64; 3]); 9] {
        let n = self.n_sites as f64;
        let (j, z, x) = (self.j, self.z, self.x);
        [
            // σᶻσᶻ bonds
            (n - 1.0, self.dj, [0.0, 0.0, -4.0 * x]),
            // σᶻ sites
            (n, self.dz, [2.0 * x, 0.0, 0.0]),
            // σˣ on the N − 2 bulk sites
            (n - 2.0, self.dx, [-2.0 * z, 0.0, 4.0 * j]),
            // σˣ on the two edge sites
            (2.0, self.dx, [-2.0 * z, 0.0, 2.0 * j]),
            // σˣσᶻ + σᶻσˣ bonds
            (2.0 * (n - 1.0), 0.0, [2.0 * j, 2.0 * x, -2.0 * z]),
            // σᶻσʸσᶻ-type three-site strings
            (16.0 * (n - 2.0), 0.0, [0.0, j, 0.0]),
            (16.0 * (n - 1.0), 0.0, [0.0, z, -x]),
            (16.0 * (n - 1.0), 0.0, [0.0, z, 0.0]),
            (16.0 * (n - 2.0), 0.0, [0.0, 0.0, j]),
        ]
    }

    /// S(v) = vᵀMv + 2bᵀv + c
    pub fn quadratic_form(&self) -> QuadraticForm {
        let mut m = Matrix3::zeros();
        let mut b = Vector3::zeros();
        let mut c = 0.0;
        for (w, c0, a) in self.terms() {
            let a = Vector3::from(a);
            m += a * a.transpose() * w;
            b += a * (w * c0);
            c += w * c0 * c0;
        }
        QuadraticForm { m, b, c }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticForm {
    pub m: Matrix3<f64>,
    pub b: Vector3<f64>,
    pub c: f64,
}

impl QuadraticForm {
    pub fn eval(&self, v: [f64; 3]) -> f64 {
        let v = Vector3::from(v);
        (v.transpose() * self.m * v)[0] + 2.0 * self.b.dot(&v) + self.c
    }
}

/// Tr G²/2ᴺ for the open chain at coefficients (α, γ, ζ).
pub fn trace_action_density(p: &GeneralIsingParams, alpha: f64, gamma: f64, zeta: f64) -> f64 {
    p.terms()
        .iter()
        .map(|(w, c, a)| w * (c + a[0] * alpha + a[1] * gamma + a[2] * zeta).powi(2))
        .sum()
}

/// Stationary point of the trace action: M v = −b by partial-pivoting
/// elimination, refused when cond(M) > 10¹².
pub fn second_order_solve(p: &GeneralIsingParams) -> Result<GaugeCoefficients> {
    p.validate()?;
    let q = p.quadratic_form();
    let eig = SymmetricEigen::new(q.m);
    let max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || !(min > 0.0) || max / min > 1e12 {
        return Err(Error::Singular {
            context: format!(
                "J={}, Z={}, X={}, N={}",
                p.j, p.z, p.x, p.n_sites
            ),
            detail: format!("condition number {:e}", if min > 0.0 { max / min } else { f64::INFINITY }),
        });
    }
    let v = solve3(q.m, -q.b);
    Ok(GaugeCoefficients::SecondOrder {
        alpha: v[0],
        gamma: v[1],
        zeta: v[2],
    })
}

/// Minimum-norm minimiser of the trace action; agrees with
/// [`second_order_solve`] when M is well conditioned and stays finite at
/// singular but consistent points (e.g. two spins at λ = 0).
pub fn second_order_minimizer(p: &GeneralIsingParams) -> [f64; 3] {
    let q = p.quadratic_form();
    let eig = SymmetricEigen::new(q.m);
    let max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let mut v = Vector3::zeros();
    if max > 0.0 {
        for k in 0..3 {
            let w = eig.eigenvalues[k];
            if w > 1e-12 * max {
                let u = eig.eigenvectors.column(k);
                v -= u * (u.dot(&q.b) / w);
            }
        }
    }
    [v[0], v[1], v[2]]
}

fn solve3(mut a: Matrix3<f64>, mut b: Vector3<f64>) -> Vector3<f64> {
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &k| a[(i, col)].abs().total_cmp(&a[(k, col)].abs()))
            .unwrap();
        if piv != col {
            a.swap_rows(piv, col);
            b.swap_rows(piv, col);
        }
        for row in col + 1..3 {
            let f = a[(row, col)] / a[(col, col)];
            for k in col..3 {
                a[(row, k)] -= f * a[(col, k)];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = Vector3::zeros();
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| a[(row, k)] * x[k]).sum();
        x[row] = (b[row] - s) / a[(row, row)];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GeneralIsingParams {
        GeneralIsingParams {
            j: 1.1,
            z: -0.7,
            x: 2.3,
            dj: 0.4,
            dz: -1.2,
            dx: 0.9,
            n_sites: 4,
        }
    }

    #[test]
    fn quadratic_form_reproduces_trace_formula() {
        let p = sample();
        let q = p.quadratic_form();
        for v in [[0.0, 0.0, 0.0], [0.3, -0.2, 0.5], [-1.0, 2.0, 0.1]] {
            let a = q.eval(v);
            let b = trace_action_density(&p, v[0], v[1], v[2]);
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let p = GeneralIsingParams {
            j: 1.0,
            z: 0.5,
            x: 0.0,
            dj: 0.0,
            dz: 0.0,
            dx: 0.0,
            n_sites: 3,
        };
        assert_eq!(
            second_order_solve(&p).unwrap().triple().unwrap(),
            [0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn solve_is_stationary_and_matches_minimizer() {
        let p = sample();
        let v = second_order_solve(&p).unwrap().triple().unwrap();
        let s0 = trace_action_density(&p, v[0], v[1], v[2]);
        let h = 1e-6;
        for k in 0..3 {
            let mut up = v;
            let mut dn = v;
            up[k] += h;
            dn[k] -= h;
            let g = (trace_action_density(&p, up[0], up[1], up[2])
                - trace_action_density(&p, dn[0], dn[1], dn[2]))
                / (2.0 * h);
            assert!(g.abs() < 1e-6 * s0.abs().max(1.0));
        }
        let w = second_order_minimizer(&p);
        for k in 0..3 {
            assert!((w[k] - v[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn singular_point_is_reported() {
        // two spins at λ = 0: J → 2, Z → −2, X → 0
        let p = GeneralIsingParams {
            j: 2.0,
            z: -2.0,
            x: 0.0,
            dj: 0.0,
            dz: 0.0,
            dx: 4.0,
            n_sites: 2,
        };
        assert!(matches!(second_order_solve(&p), Err(Error::Singular { .. })));
        let v = second_order_minimizer(&p);
        assert!(v.iter().all(|c| c.is_finite()));
    }
}
