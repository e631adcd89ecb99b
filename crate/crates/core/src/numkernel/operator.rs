use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::DMatrix;

use super::{CMatrix, CVector, HilbertSpace, QuantumState, ATOM_DIM, C64, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Dense square complex matrix acting on a finite Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator(CMatrix);

impl Operator {
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        Ok(Self(matrix))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self(CMatrix::from_fn(n, n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { C64::new(0.0, 0.0) }))
    }

    /// `|to⟩⟨from|` on the three-level atom.
    pub fn atom_transition(to: usize, from: usize) -> Self {
        let mut m = CMatrix::zeros(ATOM_DIM, ATOM_DIM);
        m[(to, from)] = C64::new(1.0, 0.0);
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn kron(&self, other: &Operator) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// `max|M - M†|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                defect = defect.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        defect
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= HERMITIAN_TOL * self.max_abs()
    }

    /// Errors with the measured defect unless the operator is Hermitian within
    /// the relative tolerance.
    pub fn ensure_hermitian(&self) -> Result<()> {
        let defect = self.hermiticity_defect();
        let allowed = HERMITIAN_TOL * self.max_abs();
        if defect > allowed {
            return Err(Error::NotHermitian { defect, allowed });
        }
        Ok(())
    }

    /// Spectral (operator 2-) norm, the largest singular value.
    pub fn op_norm(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        self.0
            .clone()
            .singular_values()
            .iter()
            .fold(0.0_f64, |acc, &s| acc.max(s))
    }

    pub fn apply(&self, state: &QuantumState) -> CVector {
        &self.0 * state.amplitudes()
    }

    /// `⟨ψ|M|ψ⟩`.
    pub fn expectation(&self, state: &QuantumState) -> C64 {
        state.amplitudes().dotc(&(&self.0 * state.amplitudes()))
    }

    /// Copy of the sub-block `rows × cols`.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> CMatrix {
        self.0.view((rows.start, cols.start), (rows.len(), cols.len())).into_owned()
    }
}

/// Truncated annihilation operator: `⟨n-1|a|n⟩ = √n`.
pub fn boson_annihilation(fock_dim: usize) -> Result<Operator> {
    if fock_dim < 2 {
        return Err(Error::InvalidDimension { dim: fock_dim, reason: "fock_dim must be at least 2" });
    }
    let mut m = DMatrix::zeros(fock_dim, fock_dim);
    for n in 1..fock_dim {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Ok(Operator(m))
}

/// `a†a` on the truncated space.
pub fn number_operator(fock_dim: usize) -> Result<Operator> {
    if fock_dim < 2 {
        return Err(Error::InvalidDimension { dim: fock_dim, reason: "fock_dim must be at least 2" });
    }
    let diag: Vec<f64> = (0..fock_dim).map(|n| n as f64).collect();
    Ok(Operator::from_real_diagonal(&diag))
}

/// `atom_op ⊗ field_op` in the atom-major layout of `space`.
pub fn embed(atom_op: &Operator, field_op: &Operator, space: &HilbertSpace) -> Result<Operator> {
    if atom_op.dim() != ATOM_DIM {
        return Err(Error::DimensionMismatch { expected: ATOM_DIM, found: atom_op.dim() });
    }
    if field_op.dim() != space.fock_dim() {
        return Err(Error::DimensionMismatch { expected: space.fock_dim(), found: field_op.dim() });
    }
    Ok(atom_op.kron(field_op))
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Operator> for &Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                Operator(&self.0 $op &rhs.0)
            }
        }
        impl $trait<Operator> for Operator {
            type Output = Operator;
            fn $method(self, rhs: Operator) -> Operator {
                Operator(self.0 $op rhs.0)
            }
        }
        impl $trait<&Operator> for Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                Operator(self.0 $op &rhs.0)
            }
        }
        impl $trait<Operator> for &Operator {
            type Output = Operator;
            fn $method(self, rhs: Operator) -> Operator {
                Operator(&self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl AddAssign<&Operator> for Operator {
    fn add_assign(&mut self, rhs: &Operator) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Operator> for Operator {
    fn add_assign(&mut self, rhs: Operator) {
        self.0 += rhs.0;
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator(-self.0)
    }
}

impl Mul<&Operator> for f64 {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale_real(self)
    }
}

impl Mul<Operator> for f64 {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        rhs.scale_real(self)
    }
}

impl Mul<&Operator> for C64 {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale(self)
    }
}
