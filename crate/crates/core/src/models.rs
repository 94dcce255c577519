//! The three benchmark Hamiltonians, their λ-derivatives, control operator and
//! boundary states.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::linalg::{eigh, fix_phase, Pauli, PauliString, SparseOperator};
use crate::schedules::ScheduleKind;
use crate::{Error, Operator, Result, StateVector, C64};

/// H₀ = −2J σ₁ᶻσ₂ᶻ − h(σ₁ᶻ + σ₂ᶻ) + 2hλ(σ₁ˣ + σ₂ˣ)
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoSpinParams {
    pub j: f64,
    pub h: f64,
}

/// Open chain H₀ = −J Σ σⱼᶻσⱼ₊₁ᶻ + Z₀ Σ σⱼᶻ + λ X_f Σ σⱼˣ
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsingParams {
    pub j: f64,
    pub z0: f64,
    pub x_f: f64,
    pub n_sites: usize,
}

/// Single particle on N sites: H = −Σ Jₙ(|n⟩⟨n+1| + h.c.) + Σ Vₙ|n⟩⟨n| with
/// Jₙ = J₀(1.1 − λ) and Vₙ = n V₀ 2(λ − 1/2), n = 0..N−1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    pub j0: f64,
    pub v0: f64,
    pub n_sites: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SpinModel {
    TwoSpin(TwoSpinParams),
    Ising(IsingParams),
    Lattice(LatticeParams),
}

/// Homogeneous couplings of H = −J Σ σᶻσᶻ + Z Σ σᶻ + X Σ σˣ on `n_sites`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsingForm {
    pub j: f64,
    pub z: f64,
    pub x: f64,
    pub n_sites: usize,
}

fn finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::InvalidParameter(format!("{name} = {v} is not finite")));
    }
    Ok(())
}

impl SpinModel {
    pub fn two_spin(j: f64, h: f64) -> Result<Self> {
        finite("J", j)?;
        finite("h", h)?;
        Ok(SpinModel::TwoSpin(TwoSpinParams { j, h }))
    }

    pub fn ising(j: f64, z0: f64, x_f: f64, n_sites: usize) -> Result<Self> {
        finite("J", j)?;
        finite("Z0", z0)?;
        finite("X_f", x_f)?;
        check_sites(n_sites, 20)?;
        Ok(SpinModel::Ising(IsingParams { j, z0, x_f, n_sites }))
    }

    pub fn lattice(j0: f64, v0: f64, n_sites: usize) -> Result<Self> {
        finite("J0", j0)?;
        finite("V0", v0)?;
        check_sites(n_sites, usize::MAX)?;
        Ok(SpinModel::Lattice(LatticeParams { j0, v0, n_sites }))
    }

    pub fn n_sites(&self) -> usize {
        match self {
            SpinModel::TwoSpin(_) => 2,
            SpinModel::Ising(p) => p.n_sites,
            SpinModel::Lattice(p) => p.n_sites,
        }
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        match self {
            SpinModel::Lattice(p) => p.n_sites,
            _ => 1 << self.n_sites(),
        }
    }

    pub fn is_spin(&self) -> bool {
        !matches!(self, SpinModel::Lattice(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            SpinModel::TwoSpin(_) => "two_spin",
            SpinModel::Ising(_) => "ising",
            SpinModel::Lattice(_) => "lattice",
        }
    }

    /// Natural schedule of the model (lattice transport runs λ from 1 to 0).
    pub fn schedule_kind(&self) -> ScheduleKind {
        match self {
            SpinModel::Lattice(_) => ScheduleKind::LinearReverse,
            _ => ScheduleKind::TrigRamp,
        }
    }

    /// Couplings of H₀ + βΣσᶻ in the homogeneous Ising form, together with
    /// their rates of change given (λ̇, β̇). Two spins map as J → 2J,
    /// Z → −h + β, X → 2hλ.
    pub fn ising_form(
        &self,
        lambda: f64,
        lambda_rate: f64,
        beta: f64,
        beta_rate: f64,
    ) -> Result<(IsingForm, IsingForm)> {
        match *self {
            SpinModel::TwoSpin(p) => Ok((
                IsingForm {
                    j: 2.0 * p.j,
                    z: -p.h + beta,
                    x: 2.0 * p.h * lambda,
                    n_sites: 2,
                },
                IsingForm {
                    j: 0.0,
                    z: beta_rate,
                    x: 2.0 * p.h * lambda_rate,
                    n_sites: 2,
                },
            )),
            SpinModel::Ising(p) => Ok((
                IsingForm {
                    j: p.j,
                    z: p.z0 + beta,
                    x: lambda * p.x_f,
                    n_sites: p.n_sites,
                },
                IsingForm {
                    j: 0.0,
                    z: beta_rate,
                    x: lambda_rate * p.x_f,
                    n_sites: p.n_sites,
                },
            )),
            SpinModel::Lattice(_) => Err(Error::Unsupported(
                "the lattice model has no Ising form".into(),
            )),
        }
    }

    /// Bond amplitudes Jₙ (N−1) and site energies Vₙ (N) with their λ-derivatives.
    pub fn lattice_profile(&self, lambda: f64) -> Result<LatticeProfile> {
        match *self {
            SpinModel::Lattice(p) => {
                let n = p.n_sites;
                Ok(LatticeProfile {
                    j: vec![p.j0 * (1.1 - lambda); n - 1],
                    dj: vec![-p.j0; n - 1],
                    v: (0..n)
                        .map(|k| k as f64 * p.v0 * 2.0 * (lambda - 0.5))
                        .collect(),
                    dv: (0..n).map(|k| 2.0 * k as f64 * p.v0).collect(),
                })
            }
            _ => Err(Error::Unsupported(
                "lattice profile requested for a spin model".into(),
            )),
        }
    }
}

fn check_sites(n: usize, max: usize) -> Result<()> {
    if n < 2 || n > max {
        return Err(Error::InvalidParameter(format!(
            "number of sites {n} outside [2, {max}]"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeProfile {
    pub j: Vec<f64>,
    pub dj: Vec<f64>,
    pub v: Vec<f64>,
    pub dv: Vec<f64>,
}

/// Sums of Pauli strings over a homogeneous open chain.
#[derive(Clone, Debug)]
pub struct ChainOperators {
    pub zz: SparseOperator,
    pub z: SparseOperator,
    pub x: SparseOperator,
    pub y: SparseOperator,
    /// Σ (σˣσʸ + σʸσˣ) on bonds
    pub xy: SparseOperator,
    /// Σ (σᶻσʸ + σʸσᶻ) on bonds
    pub zy: SparseOperator,
}

impl ChainOperators {
    pub fn new(n: usize) -> Self {
        let single = |p: Pauli| -> SparseOperator {
            let terms: Vec<_> = (0..n)
                .map(|j| (1.0, PauliString::new(n, &[(j, p)]).unwrap()))
                .collect();
            SparseOperator::from_pauli_sum(n, &terms)
        };
        let bond = |pairs: &[(Pauli, Pauli)]| -> SparseOperator {
            let mut terms = Vec::new();
            for j in 0..n - 1 {
                for &(a, b) in pairs {
                    terms.push((1.0, PauliString::new(n, &[(j, a), (j + 1, b)]).unwrap()));
                }
            }
            SparseOperator::from_pauli_sum(n, &terms)
        };
        ChainOperators {
            zz: bond(&[(Pauli::Z, Pauli::Z)]),
            z: single(Pauli::Z),
            x: single(Pauli::X),
            y: single(Pauli::Y),
            xy: bond(&[(Pauli::X, Pauli::Y), (Pauli::Y, Pauli::X)]),
            zy: bond(&[(Pauli::Z, Pauli::Y), (Pauli::Y, Pauli::Z)]),
        }
    }

    /// −J Σσᶻσᶻ + Z Σσᶻ + X Σσˣ as a dense matrix.
    pub fn dense(&self, f: &IsingForm) -> Operator {
        let m = self.zz.to_dense().into_matrix() * C64::new(-f.j, 0.0)
            + self.z.to_dense().into_matrix() * C64::new(f.z, 0.0)
            + self.x.to_dense().into_matrix() * C64::new(f.x, 0.0);
        Operator::from_matrix(m).expect("square")
    }
}

fn lattice_dense(j: &[f64], v: &[f64]) -> Operator {
    let n = v.len();
    let mut m = DMatrix::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = C64::new(v[k], 0.0);
    }
    for k in 0..n - 1 {
        m[(k, k + 1)] = C64::new(-j[k], 0.0);
        m[(k + 1, k)] = C64::new(-j[k], 0.0);
    }
    Operator::from_matrix(m).expect("square")
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain {
            what: "lambda",
            value: lambda,
            domain: "[0, 1]",
        });
    }
    Ok(())
}

/// H₀(λ) with zero control field.
pub fn bare_hamiltonian(model: &SpinModel, lambda: f64) -> Result<Operator> {
    check_lambda(lambda)?;
    match model {
        SpinModel::Lattice(_) => {
            let p = model.lattice_profile(lambda)?;
            Ok(lattice_dense(&p.j, &p.v))
        }
        _ => {
            let (f, _) = model.ising_form(lambda, 0.0, 0.0, 0.0)?;
            Ok(ChainOperators::new(f.n_sites).dense(&f))
        }
    }
}

/// ∂_λH₀ at λ.
pub fn bare_derivative(model: &SpinModel, lambda: f64) -> Result<Operator> {
    check_lambda(lambda)?;
    match model {
        SpinModel::Lattice(_) => {
            let p = model.lattice_profile(lambda)?;
            Ok(lattice_dense(&p.dj, &p.dv))
        }
        _ => {
            let (_, d) = model.ising_form(lambda, 1.0, 0.0, 0.0)?;
            Ok(ChainOperators::new(d.n_sites).dense(&d))
        }
    }
}

/// Σⱼ σⱼᶻ. The lattice control modifies hopping instead and has no such operator.
pub fn control_operator(model: &SpinModel) -> Result<Operator> {
    match model {
        SpinModel::Lattice(_) => Err(Error::Unsupported(
            "the lattice control field enters the hopping, not a Σσᶻ operator".into(),
        )),
        _ => Ok(ChainOperators::new(model.n_sites()).z.to_dense()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundState {
    pub state: StateVector,
    pub energy: f64,
    /// E₁ − E₀
    pub gap: f64,
    /// Gap below 10⁻¹⁰ of the spectral range.
    pub degenerate: bool,
}

/// Lowest eigenvector with the largest-magnitude amplitude real positive.
pub fn ground_state(h: &Operator) -> Result<GroundState> {
    if !h.is_hermitian() {
        return Err(Error::InvalidParameter(format!(
            "ground_state needs a Hermitian matrix (error {:e})",
            h.hermiticity_error()
        )));
    }
    let (w, v) = eigh(h);
    let mut g = v.column(0).into_owned();
    fix_phase(&mut g);
    let range = w[w.len() - 1] - w[0];
    let gap = if w.len() > 1 { w[1] - w[0] } else { f64::INFINITY };
    Ok(GroundState {
        state: StateVector::from_vector(g),
        energy: w[0],
        gap,
        degenerate: w.len() > 1 && gap < 1e-10 * range,
    })
}

/// Initial and target states of the transfer for the given schedule kind.
/// Spin models: ground states of H₀ at the start and end λ. Lattice: the
/// particle on the first and on the last site.
pub fn initial_and_target_states(
    model: &SpinModel,
    kind: ScheduleKind,
) -> Result<(StateVector, StateVector)> {
    match model {
        SpinModel::Lattice(p) => Ok((
            StateVector::basis(p.n_sites, 0)?,
            StateVector::basis(p.n_sites, p.n_sites - 1)?,
        )),
        _ => {
            let mut out = Vec::with_capacity(2);
            for lambda in [kind.lambda_start(), kind.lambda_end()] {
                let g = ground_state(&bare_hamiltonian(model, lambda)?)?;
                if g.degenerate {
                    return Err(Error::NearDegeneracy {
                        gap: g.gap,
                        lower: 0,
                        upper: 1,
                        tolerance: 1e-10,
                    });
                }
                out.push(g.state);
            }
            let target = out.pop().unwrap();
            Ok((out.pop().unwrap(), target))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli(p: char) -> DMatrix<C64> {
        let c = |re: f64, im: f64| C64::new(re, im);
        let z = c(0., 0.);
        match p {
            'x' => DMatrix::from_row_slice(2, 2, &[z, c(1., 0.), c(1., 0.), z]),
            'y' => DMatrix::from_row_slice(2, 2, &[z, c(0., -1.), c(0., 1.), z]),
            'z' => DMatrix::from_row_slice(2, 2, &[c(1., 0.), z, z, c(-1., 0.)]),
            _ => DMatrix::identity(2, 2),
        }
    }

    /// Kronecker-product oracle for a string like "zzi".
    fn kron(s: &str) -> DMatrix<C64> {
        let mut chars = s.chars();
        let first = pauli(chars.next().unwrap());
        chars.fold(first, |acc, p| acc.kronecker(&pauli(p)))
    }

    fn site(p: char, j: usize, n: usize) -> String {
        (0..n).map(|k| if k == j { p } else { 'i' }).collect()
    }

    fn bond(p: char, q: char, j: usize, n: usize) -> String {
        (0..n)
            .map(|k| if k == j { p } else if k == j + 1 { q } else { 'i' })
            .collect()
    }

    fn ising_oracle(j: f64, z0: f64, x: f64, n: usize) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(1 << n, 1 << n);
        for k in 0..n - 1 {
            m -= kron(&bond('z', 'z', k, n)) * C64::new(j, 0.0);
        }
        for k in 0..n {
            m += kron(&site('z', k, n)) * C64::new(z0, 0.0);
            m += kron(&site('x', k, n)) * C64::new(x, 0.0);
        }
        m
    }

    #[test]
    fn two_spin_matches_kronecker_oracle() {
        let m = SpinModel::two_spin(1.0, 2.0).unwrap();
        let h0 = bare_hamiltonian(&m, 0.0).unwrap();
        assert_eq!(h0.get(0, 0), C64::new(-6.0, 0.0));
        for lambda in [0.0, 0.3, 1.0] {
            let oracle = kron("zz") * C64::new(-2.0, 0.0)
                - (kron("zi") + kron("iz")) * C64::new(2.0, 0.0)
                + (kron("xi") + kron("ix")) * C64::new(4.0 * lambda, 0.0);
            let h = bare_hamiltonian(&m, lambda).unwrap();
            assert!((h.matrix() - oracle).norm() < 1e-14);
            assert!(h.is_hermitian());
        }
        let d = bare_derivative(&m, 0.4).unwrap();
        assert!((d.matrix() - (kron("xi") + kron("ix")) * C64::new(4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn ising_matches_kronecker_oracle() {
        let m = SpinModel::ising(1.3, 0.02, 10.0, 4).unwrap();
        let h = bare_hamiltonian(&m, 0.6).unwrap();
        assert!((h.matrix() - ising_oracle(1.3, 0.02, 6.0, 4)).norm() < 1e-12);
        let n2 = SpinModel::ising(1.0, 0.0, 7.0, 2).unwrap();
        assert!((bare_hamiltonian(&n2, 0.0).unwrap().matrix() + kron("zz")).norm() == 0.0);
    }

    #[test]
    fn lattice_example() {
        let m = SpinModel::lattice(1.0, 4.0, 3).unwrap();
        let h = bare_hamiltonian(&m, 1.0).unwrap();
        // n = 0, 1, 2 → V = 0, 4, 8 at λ = 1
        for (k, v) in [0.0, 4.0, 8.0].iter().enumerate() {
            assert!((h.get(k, k).re - v).abs() < 1e-14);
        }
        assert!((h.get(0, 1).re + 0.1).abs() < 1e-14);
        assert!((h.get(2, 1).re + 0.1).abs() < 1e-14);
        assert_eq!(h.get(0, 2), C64::new(0.0, 0.0));
        let d = bare_derivative(&m, 0.2).unwrap();
        assert_eq!(d.get(0, 1).re, 1.0);
        assert_eq!(d.get(2, 2).re, 16.0);
    }

    #[test]
    fn control_operator_examples() {
        let two = control_operator(&SpinModel::two_spin(1.0, 2.0).unwrap()).unwrap();
        assert_eq!(two, Operator::diagonal(&[2.0, 0.0, 0.0, -2.0]));
        let three = control_operator(&SpinModel::ising(1.0, 0.0, 1.0, 3).unwrap()).unwrap();
        for k in 0..8 {
            assert!([3.0, 1.0, -1.0, -3.0].contains(&three.get(k, k).re));
        }
        let lat = SpinModel::lattice(1.0, 4.0, 3).unwrap();
        assert!(matches!(control_operator(&lat), Err(Error::Unsupported(_))));
    }

    #[test]
    fn ground_state_examples() {
        let g = ground_state(&Operator::diagonal(&[-1.0, 1.0])).unwrap();
        assert_eq!(g.state.amplitudes(), &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let mx = Operator::from_real_rows(&[&[0.0, -1.0], &[-1.0, 0.0]]).unwrap();
        let g = ground_state(&mx).unwrap();
        let s = 1.0 / 2f64.sqrt();
        for a in g.state.amplitudes() {
            assert!((a - C64::new(s, 0.0)).norm() < 1e-14);
        }
        assert!(ground_state(&Operator::diagonal(&[1.0, 1.0, 2.0])).unwrap().degenerate);
    }

    #[test]
    fn ising_ground_energy_matches_full_diagonalisation() {
        let m = SpinModel::ising(1.0, 0.02, 10.0, 5).unwrap();
        let h = bare_hamiltonian(&m, 1.0).unwrap();
        let g = ground_state(&h).unwrap();
        let oracle = ising_oracle(1.0, 0.02, 10.0, 5).symmetric_eigen();
        let e0 = oracle.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((g.energy - e0).abs() < 1e-10);
        let hv = h.apply(&g.state).unwrap();
        let r = hv.vector() - g.state.vector() * C64::new(g.energy, 0.0);
        assert!(r.norm() < 1e-10);
    }

    #[test]
    fn boundary_states() {
        let two = SpinModel::two_spin(1.0, 2.0).unwrap();
        let (init, _) = initial_and_target_states(&two, ScheduleKind::TrigRamp).unwrap();
        assert_eq!(init, StateVector::basis(4, 0).unwrap());

        let lat = SpinModel::lattice(1.0, 4.0, 7).unwrap();
        let (i, t) = initial_and_target_states(&lat, ScheduleKind::LinearReverse).unwrap();
        assert_eq!(i, StateVector::basis(7, 0).unwrap());
        assert_eq!(t, StateVector::basis(7, 6).unwrap());

        // Z₀ > 0 with +Z₀Σσᶻ: every spin points along σᶻ = −1 in the ground state.
        let ising = SpinModel::ising(1.0, 0.02, 10.0, 3).unwrap();
        let (i, _) = initial_and_target_states(&ising, ScheduleKind::TrigRamp).unwrap();
        assert_eq!(i, StateVector::basis(8, 7).unwrap());
    }

    #[test]
    fn parity_symmetry_at_zero_field() {
        for n in 2..=4 {
            let m = SpinModel::ising(1.0, 0.0, 10.0, n).unwrap();
            let h = bare_hamiltonian(&m, 0.37).unwrap();
            let flip = (0..n).fold(DMatrix::<C64>::identity(1, 1), |acc, _| acc.kronecker(&pauli('x')));
            let flipped = &flip * h.matrix() * &flip;
            let (a, _) = eigh(&h);
            let (b, _) = eigh(&Operator::from_matrix(flipped).unwrap());
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn boundary_hamiltonians() {
        let m = SpinModel::ising(1.0, 0.02, 10.0, 3).unwrap();
        let h1 = bare_hamiltonian(&m, 1.0).unwrap();
        assert!((h1.matrix() - ising_oracle(1.0, 0.02, 10.0, 3)).norm() < 1e-13);
        assert!(bare_hamiltonian(&m, 1.5).is_err());
        assert!(SpinModel::ising(1.0, 0.0, 1.0, 1).is_err());
        assert!(SpinModel::two_spin(f64::NAN, 1.0).is_err());
    }
}
