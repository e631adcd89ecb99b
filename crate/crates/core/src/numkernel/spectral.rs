use nalgebra::{DVector, SymmetricEigen};

use super::{CMatrix, CVector, Operator, QuantumState, C64};
use crate::error::Result;

/// `M = V diag(λ) V†` with ascending real eigenvalues and unitary `V`
/// (eigenvectors in columns).
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn reconstruct(&self) -> Operator {
        let v = &self.eigenvectors;
        let scaled = CMatrix::from_fn(self.dim(), self.dim(), |i, j| v[(i, j)] * self.eigenvalues[j]);
        Operator::from_matrix(scaled * v.adjoint()).expect("square by construction")
    }

    /// `max|V†V - 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.eigenvectors.adjoint() * &self.eigenvectors;
        let n = self.dim();
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((gram[(i, j)] - C64::new(target, 0.0)).norm());
            }
        }
        defect
    }

    /// `exp(-i M t)`.
    pub fn propagator(&self, t: f64) -> Operator {
        let v = &self.eigenvectors;
        let phased = CMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            v[(i, j)] * C64::from_polar(1.0, -self.eigenvalues[j] * t)
        });
        Operator::from_matrix(phased * v.adjoint()).expect("square by construction")
    }

    pub fn evolver(&self, psi0: &QuantumState) -> Evolver<'_> {
        let coeffs = self.eigenvectors.adjoint() * psi0.amplitudes();
        Evolver { decomposition: self, coeffs }
    }
}

/// Caches `V†ψ0` so a whole time grid costs one matrix-vector product per
/// sample.
pub struct Evolver<'a> {
    decomposition: &'a SpectralDecomposition,
    coeffs: CVector,
}

impl Evolver<'_> {
    pub fn state_at(&self, t: f64) -> QuantumState {
        let d = self.decomposition;
        let phased = CVector::from_fn(d.dim(), |k, _| {
            self.coeffs[k] * C64::from_polar(1.0, -d.eigenvalues[k] * t)
        });
        QuantumState::from_amplitudes(&d.eigenvectors * phased)
    }
}

/// Eigen-decomposition of a Hermitian operator, eigenvalues ascending.
pub fn hermitian_eig(op: &Operator) -> Result<SpectralDecomposition> {
    op.ensure_hermitian()?;
    let m = op.matrix();
    let sym = (m + m.adjoint()).unscale(2.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = DVector::from_iterator(order.len(), order.iter().map(|&k| eig.eigenvalues[k]));
    let eigenvectors = CMatrix::from_fn(m.nrows(), order.len(), |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

/// `ψ(t) = exp(-iHt) ψ0` through the spectral decomposition of `H`.
pub fn evolve_unitary(h: &Operator, psi0: &QuantumState, t: f64) -> Result<QuantumState> {
    let decomposition = hermitian_eig(h)?;
    Ok(decomposition.evolver(psi0).state_at(t))
}

/// Matrix exponential by scaling and squaring with a Padé approximant.
pub fn expm(op: &Operator) -> Operator {
    Operator::from_matrix(op.matrix().exp()).expect("square by construction")
}
