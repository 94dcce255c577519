//! Oracle comparisons shared by the integration and acceptance targets. Each
//! returns the largest discrepancy found.
#![allow(dead_code)]

use cold::agp::{
    action_trace, alpha_ising, alpha_ising_controlled, alpha_two_spin, alpha_two_spin_controlled,
    exact_agp_oracle, g_operator, lattice_alpha_solve_tilted, second_order_solve,
    trace_action_density, variational_minimize_oracle, ControlledPoint, GeneralIsingParams,
};
use cold::models::{bare_derivative, bare_hamiltonian, control_operator, ChainOperators, IsingForm, SpinModel};
use cold::optimize::{powell_minimize, PowellOptions};
use cold::{Operator, C64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn y_sum(n: usize) -> Operator {
    ChainOperators::new(n).y.to_dense()
}

/// Eq. (14) against the oracle with basis {Σσʸ}.
pub fn eq14_max_error(points: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..points {
        let (j, h) = (r.random_range(0.3..2.0), r.random_range(0.3..3.0));
        let lambda = r.random_range(0.0..1.0);
        let m = SpinModel::two_spin(j, h).unwrap();
        let c = variational_minimize_oracle(
            &bare_hamiltonian(&m, lambda).unwrap(),
            &bare_derivative(&m, lambda).unwrap(),
            &[y_sum(2)],
        )
        .unwrap();
        worst = worst.max((c[0] - alpha_two_spin(lambda, j, h)).abs());
    }
    worst
}

/// Controlled two-spin α against the oracle on H₀ − βΣσᶻ, ∂_λ(−βΣσᶻ) = −(β̇/λ̇)Σσᶻ.
pub fn eq19_max_error(points: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..points {
        let (j, h) = (r.random_range(0.3..2.0), r.random_range(0.3..3.0));
        let lambda = r.random_range(0.05..1.0);
        let ratio = r.random_range(-2.0..2.0);
        let beta = r.random_range(-3.0..3.0);
        let beta_dot = r.random_range(-5.0..5.0);
        let m = SpinModel::two_spin(j, h).unwrap();
        let z = control_operator(&m).unwrap();
        let h_op = bare_hamiltonian(&m, lambda).unwrap().sub(&z.scale(beta)).unwrap();
        let dh = bare_derivative(&m, lambda)
            .unwrap()
            .sub(&z.scale(beta_dot * ratio / lambda))
            .unwrap();
        let c = variational_minimize_oracle(&h_op, &dh, &[y_sum(2)]).unwrap();
        let p = ControlledPoint {
            lambda,
            lambda_over_lambda_dot: ratio,
            beta,
            beta_dot,
        };
        worst = worst.max((c[0] - alpha_two_spin_controlled(p, j, h)).abs());
    }
    worst
}

fn random_ising(r: &mut ChaCha8Rng, n: usize) -> (f64, f64, f64, SpinModel) {
    let j = r.random_range(0.5..1.5);
    let z0 = r.random_range(-1.0..1.0);
    let x_f = r.random_range(0.5..10.0);
    (j, z0, x_f, SpinModel::ising(j, z0, x_f, n).unwrap())
}

/// Eq. (25) with the finite-size factor against the oracle on an N-site chain.
pub fn eq25_max_error(points: usize, n: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..points {
        let (j, z0, x_f, m) = random_ising(&mut r, n);
        let lambda = r.random_range(0.0..1.0);
        let c = variational_minimize_oracle(
            &bare_hamiltonian(&m, lambda).unwrap(),
            &bare_derivative(&m, lambda).unwrap(),
            &[y_sum(n)],
        )
        .unwrap();
        worst = worst.max((c[0] - alpha_ising(lambda, j, z0, x_f, n, true)).abs());
    }
    worst
}

/// Eq. (29) against the oracle on H₀ + βΣσᶻ.
pub fn eq29_max_error(points: usize, n: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..points {
        let (j, z0, x_f, m) = random_ising(&mut r, n);
        let lambda = r.random_range(0.05..1.0);
        let ratio = r.random_range(-2.0..2.0);
        let beta = r.random_range(-3.0..3.0);
        let beta_dot = r.random_range(-5.0..5.0);
        let z = control_operator(&m).unwrap();
        let h_op = bare_hamiltonian(&m, lambda).unwrap().add(&z.scale(beta)).unwrap();
        let dh = bare_derivative(&m, lambda)
            .unwrap()
            .add(&z.scale(beta_dot * ratio / lambda))
            .unwrap();
        let c = variational_minimize_oracle(&h_op, &dh, &[y_sum(n)]).unwrap();
        let p = ControlledPoint {
            lambda,
            lambda_over_lambda_dot: ratio,
            beta,
            beta_dot,
        };
        worst = worst.max((c[0] - alpha_ising_controlled(p, j, z0, x_f, n, true, false)).abs());
    }
    worst
}

pub fn random_general(r: &mut ChaCha8Rng, n: usize) -> GeneralIsingParams {
    GeneralIsingParams {
        j: r.random_range(0.3..2.0),
        z: r.random_range(-2.0..2.0),
        x: r.random_range(0.3..3.0),
        dj: r.random_range(-1.0..1.0),
        dz: r.random_range(-2.0..2.0),
        dx: r.random_range(-3.0..3.0),
        n_sites: n,
    }
}

/// second_order_solve against Powell on the trace formula (nested line minimisations).
pub fn second_order_vs_nested_max_error(points: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let opts = PowellOptions {
        ftol: 1e-15,
        xtol: 1e-10,
        max_sweeps: 500,
        max_evals: 200_000,
    };
    let mut worst = 0.0f64;
    for _ in 0..points {
        let n = r.random_range(2..8);
        let p = random_general(&mut r, n);
        let exact = second_order_solve(&p).unwrap().triple().unwrap();
        let res = powell_minimize(|v| trace_action_density(&p, v[0], v[1], v[2]), &[0.0; 3], None, &opts);
        for k in 0..3 {
            worst = worst.max((res.x[k] - exact[k]).abs());
        }
    }
    worst
}

fn dense_form(ops: &ChainOperators, j: f64, z: f64, x: f64, n: usize) -> Operator {
    ops.dense(&IsingForm { j, z, x, n_sites: n })
}

fn ansatz(ops: &ChainOperators, v: [f64; 3]) -> Operator {
    let m = ops.y.to_dense().into_matrix() * C64::new(v[0], 0.0)
        + ops.xy.to_dense().into_matrix() * C64::new(v[1], 0.0)
        + ops.zy.to_dense().into_matrix() * C64::new(v[2], 0.0);
    Operator::from_matrix(m).unwrap()
}

/// Relative gap between the trace formula and Tr G²/2^N at random (p, α, γ, ζ).
pub fn trace_formula_max_rel_error(points: usize, n: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let ops = ChainOperators::new(n);
    let mut worst = 0.0f64;
    for _ in 0..points {
        let p = random_general(&mut r, n);
        let v = [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)];
        let h = dense_form(&ops, p.j, p.z, p.x, n);
        let dh = dense_form(&ops, p.dj, p.dz, p.dx, n);
        let g = g_operator(&h, &dh, &ansatz(&ops, v)).unwrap();
        let numeric = action_trace(&g) / (1u64 << n) as f64;
        let formula = trace_action_density(&p, v[0], v[1], v[2]);
        worst = worst.max((numeric - formula).abs() / numeric.abs().max(1e-300));
    }
    worst
}

/// second_order_solve against the oracle with the three-operator basis.
pub fn second_order_vs_oracle_max_error(points: usize, n: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let ops = ChainOperators::new(n);
    let basis = [ops.y.to_dense(), ops.xy.to_dense(), ops.zy.to_dense()];
    let mut worst = 0.0f64;
    for _ in 0..points {
        let p = random_general(&mut r, n);
        let h = dense_form(&ops, p.j, p.z, p.x, n);
        let dh = dense_form(&ops, p.dj, p.dz, p.dx, n);
        let c = variational_minimize_oracle(&h, &dh, &basis).unwrap();
        let s = second_order_solve(&p).unwrap().triple().unwrap();
        for k in 0..3 {
            worst = worst.max((c[k] - s[k]).abs());
        }
    }
    worst
}

fn lattice_operator(hop: &[C64], site: &[f64]) -> Operator {
    let n = site.len();
    let mut m = DMatrix::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = C64::new(site[k], 0.0);
        if k + 1 < n {
            m[(k, k + 1)] = hop[k];
            m[(k + 1, k)] = hop[k].conj();
        }
    }
    Operator::from_matrix(m).unwrap()
}

/// Bond operators Oₙ with (Oₙ)_{n,n+1} = i.
pub fn bond_basis(n: usize) -> Vec<Operator> {
    (0..n - 1)
        .map(|b| {
            let mut hop = vec![C64::new(0.0, 0.0); n - 1];
            hop[b] = C64::new(0.0, 1.0);
            lattice_operator(&hop, &vec![0.0; n])
        })
        .collect()
}

/// Lattice solve: (max relative tridiagonal residual, max deviation from the
/// dense variational oracle) at `points` λ values.
pub fn lattice_max_errors(n: usize, points: usize) -> (f64, f64) {
    let m = SpinModel::lattice(1.0, 4.0, n).unwrap();
    let basis = bond_basis(n);
    let (mut res_worst, mut oracle_worst) = (0.0f64, 0.0f64);
    for i in 0..points {
        let lambda = (i as f64 + 0.5) / points as f64;
        let p = m.lattice_profile(lambda).unwrap();
        let alpha = lattice_alpha_solve_tilted(&p.j, &p.v, &p.dj, &p.dv).unwrap();
        // residual of the tridiagonal system
        let bonds = n - 1;
        let jb = |k: isize| if k < 0 || k as usize >= bonds { 0.0 } else { p.j[k as usize] };
        let mut rhs_norm = 0.0f64;
        let mut res = 0.0f64;
        for k in 0..bonds {
            let ki = k as isize;
            let dvk = p.v[k + 1] - p.v[k];
            let rhs = -p.dj[k] * dvk + p.j[k] * (p.dv[k + 1] - p.dv[k]);
            let mut lhs = (jb(ki - 1).powi(2) + 4.0 * p.j[k].powi(2) + jb(ki + 1).powi(2) + dvk * dvk) * alpha[k];
            if k + 1 < bonds {
                lhs -= 3.0 * p.j[k] * p.j[k + 1] * alpha[k + 1];
            }
            if k > 0 {
                lhs -= 3.0 * p.j[k] * p.j[k - 1] * alpha[k - 1];
            }
            res = res.max((lhs - rhs).abs());
            rhs_norm = rhs_norm.max(rhs.abs());
        }
        res_worst = res_worst.max(res / rhs_norm.max(1e-300));
        let c = variational_minimize_oracle(
            &bare_hamiltonian(&m, lambda).unwrap(),
            &bare_derivative(&m, lambda).unwrap(),
            &basis,
        )
        .unwrap();
        for k in 0..bonds {
            oracle_worst = oracle_worst.max((c[k] - alpha[k]).abs());
        }
    }
    (res_worst, oracle_worst)
}

/// max over λ of ‖[∂_λH + i[A,H], H]‖_F for the exact AGP.
pub fn exact_agp_max_residual(model: &SpinModel, points: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..points {
        let lambda = (i as f64 + 0.5) / points as f64;
        let h = bare_hamiltonian(model, lambda).unwrap();
        let dh = bare_derivative(model, lambda).unwrap();
        let a = exact_agp_oracle(model, lambda).unwrap();
        assert!(a.hermiticity_error() < 1e-12);
        let g = g_operator(&h, &dh, &a).unwrap();
        worst = worst.max(g.commutator(&h).unwrap().frobenius_norm());
    }
    worst
}
