//! Dense operators, state vectors, sparse Pauli sums and Hermitian eigensolves.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;

pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Dense square complex matrix (energy units for Hamiltonians).
#[derive(Clone, Debug, PartialEq)]
pub struct Operator(DMatrix<C64>);

impl Operator {
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        Ok(Operator(m))
    }

    /// Real matrix given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let d = rows.len();
        let mut m = DMatrix::zeros(d, d);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: r.len(),
                });
            }
            for (j, &v) in r.iter().enumerate() {
                m[(i, j)] = C64::new(v, 0.0);
            }
        }
        Ok(Operator(m))
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let d = entries.len();
        Operator(DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(entries[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn zeros(d: usize) -> Self {
        Operator(DMatrix::zeros(d, d))
    }

    pub fn identity(d: usize) -> Self {
        Operator(DMatrix::identity(d, d))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |M − M†| entry.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut e: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                e = e.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        e
    }

    /// Hermitian within 10⁻¹² · max|M| (exact zero matrix counts as Hermitian).
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_error() <= 1e-12 * self.max_abs()
    }

    pub fn adjoint(&self) -> Operator {
        Operator(self.0.adjoint())
    }

    fn same_dim(&self, other: &Operator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.same_dim(other)?;
        Ok(Operator(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.same_dim(other)?;
        Ok(Operator(&self.0 - &other.0))
    }

    pub fn scale(&self, c: f64) -> Operator {
        Operator(&self.0 * C64::new(c, 0.0))
    }

    pub fn scale_complex(&self, c: C64) -> Operator {
        Operator(&self.0 * c)
    }

    pub fn mul(&self, other: &Operator) -> Result<Operator> {
        self.same_dim(other)?;
        Ok(Operator(&self.0 * &other.0))
    }

    /// [self, other]
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        self.same_dim(other)?;
        Ok(Operator(&self.0 * &other.0 - &other.0 * &self.0))
    }

    /// Tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &Operator) -> Result<C64> {
        self.same_dim(other)?;
        let d = self.dim();
        let mut t = C64::new(0.0, 0.0);
        for i in 0..d {
            for k in 0..d {
                t += self.0[(i, k)] * other.0[(k, i)];
            }
        }
        Ok(t)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        Ok(StateVector(&self.0 * &v.0))
    }

    /// Expectation value ⟨v|M|v⟩.
    pub fn expectation(&self, v: &StateVector) -> Result<C64> {
        let w = self.apply(v)?;
        Ok(v.inner(&w)?)
    }
}

/// Complex amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(DVector<C64>);

impl StateVector {
    pub fn from_amplitudes(a: Vec<C64>) -> Self {
        StateVector(DVector::from_vec(a))
    }

    pub fn from_vector(v: DVector<C64>) -> Self {
        StateVector(v)
    }

    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::DimensionMismatch { expected: d, found: k });
        }
        let mut v = DVector::zeros(d);
        v[k] = C64::new(1.0, 0.0);
        Ok(StateVector(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NonFinite(format!("state norm {n}")));
        }
        Ok(StateVector(&self.0 / C64::new(n, 0.0)))
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self.0.dotc(&other.0))
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.0.as_slice()
    }

    pub fn vector(&self) -> &DVector<C64> {
        &self.0
    }
}

/// Eigenvalues in ascending order with matching eigenvector columns.
pub fn eigh(h: &Operator) -> (Vec<f64>, DMatrix<C64>) {
    let eig = h.matrix().clone().symmetric_eigen();
    let d = h.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = DMatrix::zeros(d, d);
    for (c, &k) in order.iter().enumerate() {
        vecs.set_column(c, &eig.eigenvectors.column(k));
    }
    (values, vecs)
}

/// Rotate the global phase so the largest-magnitude amplitude is real positive.
/// Ties are broken towards the lowest index.
pub fn fix_phase(v: &mut DVector<C64>) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let k = v.iter().position(|z| z.norm() >= max * (1.0 - 1e-9)).unwrap_or(0);
    let phase = v[k].conj() / v[k].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[k] = C64::new(v[k].re, 0.0);
}

/// Single-site Pauli factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// Product of Pauli factors on an `n`-site register. Site 0 is the most
/// significant bit of the basis index and bit value 0 is σᶻ = +1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PauliString {
    x_mask: usize,
    z_mask: usize,
    n_y: u32,
}

impl PauliString {
    pub fn new(n_sites: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut s = PauliString {
            x_mask: 0,
            z_mask: 0,
            n_y: 0,
        };
        for &(site, p) in factors {
            if site >= n_sites {
                return Err(Error::DimensionMismatch {
                    expected: n_sites,
                    found: site,
                });
            }
            let bit = 1usize << (n_sites - 1 - site);
            if (s.x_mask | s.z_mask) & bit != 0 {
                return Err(Error::InvalidParameter(format!(
                    "site {site} appears twice in a Pauli string"
                )));
            }
            match p {
                Pauli::X => s.x_mask |= bit,
                Pauli::Z => s.z_mask |= bit,
                Pauli::Y => {
                    s.x_mask |= bit;
                    s.z_mask |= bit;
                    s.n_y += 1;
                }
            }
        }
        Ok(s)
    }

    /// Image of basis index `b`: P|b⟩ = phase · |target⟩ (Y = iXZ on each site).
    fn act(&self, b: usize) -> (usize, C64) {
        let sign = if (b & self.z_mask).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        let iy = match self.n_y % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
        (b ^ self.x_mask, iy * sign)
    }
}

/// Compressed sparse row operator.
#[derive(Clone, Debug)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseOperator {
    /// Σ cᵢ Pᵢ over an `n_sites` register.
    pub fn from_pauli_sum(n_sites: usize, terms: &[(f64, PauliString)]) -> Self {
        let dim = 1usize << n_sites;
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); dim];
        for &(c, p) in terms {
            for b in 0..dim {
                let (target, phase) = p.act(b);
                // entry (target, b)
                let row = &mut rows[target];
                match row.iter_mut().find(|(col, _)| *col == b) {
                    Some(e) => e.1 += phase * c,
                    None => row.push((b, phase * c)),
                }
            }
        }
        Self::from_rows(dim, rows)
    }

    fn from_rows(dim: usize, mut rows: Vec<Vec<(usize, C64)>>) -> Self {
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in rows.iter_mut() {
            row.sort_by_key(|e| e.0);
            for &(c, v) in row.iter() {
                if v.norm() > 0.0 {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        SparseOperator {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn from_dense(op: &Operator) -> Self {
        let d = op.dim();
        let rows = (0..d)
            .map(|i| (0..d).map(|j| (j, op.get(i, j))).collect())
            .collect();
        Self::from_rows(d, rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn to_dense(&self) -> Operator {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.cols[k])] += self.vals[k];
            }
        }
        Operator(m)
    }

    /// y += c · (M x)
    pub fn apply_add(&self, c: C64, x: &[C64], y: &mut [C64]) {
        for i in 0..self.dim {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            y[i] += c * acc;
        }
    }
}
