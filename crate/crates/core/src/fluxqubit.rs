//! Three-junction flux loop: potential landscape, lowest levels on a periodic
//! phase grid, and flux-coupling matrix elements between them.
//!
//! The square `[−π, π)²` in `(φ_p, φ_m)` covers the physical phase torus
//! twice: the shift `T: (φ_p, φ_m) → (φ_p + π, φ_m + π)` maps the two copies
//! onto each other and commutes with the Hamiltonian. Only `T`-even states are
//! physical, so the solver works on one representative half of the grid.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DMatrixView, DVector, Matrix3, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numkernel::{AtomLevel, C64};

/// Loop parameters in units where `ħ = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluxParams {
    /// Josephson energy of the two large junctions.
    pub e_j: f64,
    /// Ratio of the small junction to the large ones.
    pub alpha: f64,
    /// Reduced external flux `Φ_e/Φ_0`.
    pub f: f64,
    /// Dimensionless stiffness `E_J · M_p`.
    pub mass_ratio: f64,
}

impl Default for FluxParams {
    fn default() -> Self {
        Self { e_j: 1.0, alpha: 0.8, f: 0.45, mass_ratio: 3.0 }
    }
}

impl FluxParams {
    pub fn new(e_j: f64, alpha: f64, f: f64, mass_ratio: f64) -> Result<Self> {
        let params = Self { e_j, alpha, f, mass_ratio };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e_j > 0.0 && self.e_j.is_finite()) {
            return Err(Error::InvalidParameter { name: "e_j", reason: format!("must be positive, got {}", self.e_j) });
        }
        if !(self.alpha > 0.0 && self.alpha < 2.0) {
            return Err(Error::InvalidParameter { name: "alpha", reason: format!("must lie in (0, 2), got {}", self.alpha) });
        }
        if !self.f.is_finite() {
            return Err(Error::InvalidParameter { name: "f", reason: "must be finite".into() });
        }
        if !(self.mass_ratio > 0.0 && self.mass_ratio.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "mass_ratio",
                reason: format!("must be positive, got {}", self.mass_ratio),
            });
        }
        Ok(())
    }

    pub fn with_flux(self, f: f64) -> Self {
        Self { f, ..self }
    }

    /// `M_p = r / E_J`.
    pub fn m_p(&self) -> f64 {
        self.mass_ratio / self.e_j
    }

    /// `M_m = M_p (1 + 2α)`.
    pub fn m_m(&self) -> f64 {
        self.m_p() * (1.0 + 2.0 * self.alpha)
    }
}

/// `U = 2E_J(1 − cos φ_p cos φ_m) + αE_J[1 − cos(2πf + 2φ_m)]`.
pub fn potential_energy(phi_p: f64, phi_m: f64, params: &FluxParams) -> f64 {
    let FluxParams { e_j, alpha, f, .. } = *params;
    2.0 * e_j * (1.0 - phi_p.cos() * phi_m.cos()) + alpha * e_j * (1.0 - (2.0 * PI * f + 2.0 * phi_m).cos())
}

/// `∂U/∂f = 2παE_J sin(2πf + 2φ_m)`, the operator through which flux drives
/// transitions.
pub fn flux_coupling(phi_m: f64, params: &FluxParams) -> f64 {
    2.0 * PI * params.alpha * params.e_j * (2.0 * PI * params.f + 2.0 * phi_m).sin()
}

/// Periodic grid on `[−π, π)²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid2D {
    pub n_p: usize,
    pub n_m: usize,
}

impl Grid2D {
    pub fn new(n_p: usize, n_m: usize) -> Result<Self> {
        for dim in [n_p, n_m] {
            if dim < 16 {
                return Err(Error::InvalidDimension { dim, reason: "grid needs at least 16 points per axis" });
            }
            if dim % 2 != 0 {
                return Err(Error::InvalidDimension { dim, reason: "grid points per axis must be even" });
            }
        }
        Ok(Self { n_p, n_m })
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn h_p(&self) -> f64 {
        2.0 * PI / self.n_p as f64
    }

    pub fn h_m(&self) -> f64 {
        2.0 * PI / self.n_m as f64
    }

    pub fn phi_p(&self, i: usize) -> f64 {
        -PI + self.h_p() * i as f64
    }

    pub fn phi_m(&self, j: usize) -> f64 {
        -PI + self.h_m() * j as f64
    }

    pub fn len(&self) -> usize {
        self.n_p * self.n_m
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Area element `h_p h_m`.
    pub fn cell(&self) -> f64 {
        self.h_p() * self.h_m()
    }

    /// Flat index of `(i, j)`, `φ_p`-major.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_m + j
    }
}

/// Finite-difference stencil for the second derivatives.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Stencil {
    /// `(1, −2, 1)/h²`.
    Second,
    /// `(−1, 16, −30, 16, −1)/(12h²)`.
    #[default]
    Fourth,
}

impl Stencil {
    /// Weights for offsets `0, ±1, ±2`, before dividing by `h²`.
    fn weights(self) -> [f64; 3] {
        match self {
            Stencil::Second => [-2.0, 1.0, 0.0],
            Stencil::Fourth => [-30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0],
        }
    }

    fn abs_sum(self) -> f64 {
        let [w0, w1, w2] = self.weights();
        w0.abs() + 2.0 * (w1.abs() + w2.abs())
    }
}

/// Lanczos controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Ritz residual tolerance relative to the Gershgorin bound on `‖H‖`.
    pub tol: f64,
    pub max_iter: usize,
    /// Ritz values are tested every this many steps.
    pub check_every: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 2500, check_every: 10, seed: 0x5eed }
    }
}

/// Lowest levels on the grid. Wavefunctions are real, stored `φ_p`-major and
/// normalized so that `Σ ψ² h_p h_m = 1`.
#[derive(Clone, Debug)]
pub struct LevelData {
    pub grid: Grid2D,
    pub energies: Vec<f64>,
    pub wavefunctions: Vec<Vec<f64>>,
    /// Set when two of the lowest three energies coincide within `1e-9`
    /// relative.
    pub degenerate: bool,
    pub iterations: usize,
}

impl LevelData {
    /// Level `i` of the three lowest, as `b`, `c`, `e` in ascending energy.
    pub fn label(i: usize) -> Option<AtomLevel> {
        AtomLevel::ALL.get(i).copied()
    }

    /// `⟨ψ_i|ψ_j⟩` on the grid.
    pub fn overlap(&self, i: usize, j: usize) -> f64 {
        dot(&self.wavefunctions[i], &self.wavefunctions[j]) * self.grid.cell()
    }

    /// `⟨ψ|P|ψ⟩` for the inversion `(φ_p, φ_m) → (−φ_p, −φ_m)`.
    pub fn inversion_parity(&self, i: usize) -> f64 {
        let g = self.grid;
        let psi = &self.wavefunctions[i];
        let mut acc = 0.0;
        for a in 0..g.n_p {
            for b in 0..g.n_m {
                acc += psi[g.index(a, b)] * psi[g.index((g.n_p - a) % g.n_p, (g.n_m - b) % g.n_m)];
            }
        }
        acc * g.cell()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Grid Hamiltonian restricted to `T`-even functions, in the coordinates of
/// the representative rows `i < n_p/2`.
struct ReducedHamiltonian {
    grid: Grid2D,
    rows: usize,
    potential: Vec<f64>,
    kp: [f64; 3],
    km: [f64; 3],
    norm_bound: f64,
}

impl ReducedHamiltonian {
    fn new(params: &FluxParams, grid: Grid2D, stencil: Stencil) -> Self {
        let rows = grid.n_p / 2;
        let mut potential = Vec::with_capacity(rows * grid.n_m);
        for i in 0..rows {
            for j in 0..grid.n_m {
                potential.push(potential_energy(grid.phi_p(i), grid.phi_m(j), params));
            }
        }
        let w = stencil.weights();
        let cp = -0.5 / (params.m_p() * grid.h_p().powi(2));
        let cm = -0.5 / (params.m_m() * grid.h_m().powi(2));
        let u_max = potential.iter().fold(0.0_f64, |acc, u| acc.max(u.abs()));
        let norm_bound = u_max + stencil.abs_sum() * (cp.abs() + cm.abs());
        Self { grid, rows, potential, kp: w.map(|x| x * cp), km: w.map(|x| x * cm), norm_bound }
    }

    fn dim(&self) -> usize {
        self.rows * self.grid.n_m
    }

    /// Value at full-grid row `i` (any integer) and column `j` of the
    /// `T`-even extension of `u`.
    #[inline]
    fn at(&self, u: &[f64], i: isize, j: usize) -> f64 {
        let n_p = self.grid.n_p as isize;
        let n_m = self.grid.n_m;
        let i = i.rem_euclid(n_p) as usize;
        if i < self.rows {
            u[i * n_m + j]
        } else {
            u[(i - self.rows) * n_m + (j + n_m - n_m / 2) % n_m]
        }
    }

    fn apply(&self, u: &[f64], out: &mut [f64]) {
        let n_m = self.grid.n_m;
        for i in 0..self.rows {
            let ii = i as isize;
            for j in 0..n_m {
                let k = i * n_m + j;
                let (jm1, jp1) = ((j + n_m - 1) % n_m, (j + 1) % n_m);
                let (jm2, jp2) = ((j + n_m - 2) % n_m, (j + 2) % n_m);
                let mut acc = (self.potential[k] + self.kp[0] + self.km[0]) * u[k];
                acc += self.km[1] * (u[i * n_m + jm1] + u[i * n_m + jp1]);
                acc += self.kp[1] * (self.at(u, ii - 1, j) + self.at(u, ii + 1, j));
                if self.kp[2] != 0.0 {
                    acc += self.km[2] * (u[i * n_m + jm2] + u[i * n_m + jp2]);
                    acc += self.kp[2] * (self.at(u, ii - 2, j) + self.at(u, ii + 2, j));
                }
                out[k] = acc;
            }
        }
    }

    /// Full-grid wavefunction from reduced coordinates, normalized on the grid.
    fn expand(&self, u: &[f64]) -> Vec<f64> {
        let g = self.grid;
        let mut psi = vec![0.0; g.len()];
        for i in 0..g.n_p {
            for j in 0..g.n_m {
                psi[g.index(i, j)] = self.at(u, i as isize, j);
            }
        }
        let norm = (dot(&psi, &psi) * g.cell()).sqrt();
        psi.iter_mut().for_each(|x| *x /= norm);
        psi
    }
}

/// Lowest `k` eigenpairs by Lanczos with full reorthogonalization.
fn lanczos_lowest(h: &ReducedHamiltonian, k: usize, opts: &SolverOptions) -> Result<(Vec<f64>, Vec<DVector<f64>>, usize)> {
    let n = h.dim();
    let max_iter = opts.max_iter.min(n);
    let tol = opts.tol * h.norm_bound;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut q = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
    q /= q.norm();

    // Krylov vectors, column-major.
    let mut krylov: Vec<f64> = Vec::with_capacity(n * 64);
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = DVector::zeros(n);
    let mut last_residual = f64::INFINITY;
    let mut next_check = k.max(opts.check_every);

    for step in 0..max_iter {
        h.apply(q.as_slice(), w.as_mut_slice());
        let a = q.dot(&w);
        krylov.extend_from_slice(q.as_slice());
        alphas.push(a);
        let m = alphas.len();
        let basis = DMatrixView::from_slice(&krylov, n, m);
        for _ in 0..2 {
            let c = basis.tr_mul(&w);
            w.gemv(-1.0, &basis, &c, 1.0);
        }
        let b = w.norm();
        let exhausted = b <= 1e-14 * h.norm_bound;

        if m >= k && (m >= next_check || exhausted || step + 1 == max_iter) {
            next_check = (m + opts.check_every).max(m + m / 8);
            let t = DMatrix::from_fn(m, m, |r, c| {
                if r == c {
                    alphas[r]
                } else if r + 1 == c {
                    betas[r]
                } else if c + 1 == r {
                    betas[c]
                } else {
                    0.0
                }
            });
            let eig = SymmetricEigen::new(t);
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
            let lowest = &order[..k];
            last_residual = lowest.iter().map(|&c| (b * eig.eigenvectors[(m - 1, c)]).abs()).fold(0.0, f64::max);
            if last_residual <= tol || exhausted {
                let values = lowest.iter().map(|&c| eig.eigenvalues[c]).collect();
                let vectors = lowest.iter().map(|&c| basis * eig.eigenvectors.column(c)).collect();
                return Ok((values, vectors, m));
            }
        }
        if exhausted {
            break;
        }
        betas.push(b);
        q = &w / b;
    }
    Err(Error::NotConverged { iterations: alphas.len(), residual: last_residual })
}

/// Lowest `k ≥ 3` levels of the loop Hamiltonian on `grid`.
pub fn spectrum_2d(params: &FluxParams, grid: Grid2D, k: usize, stencil: Stencil, opts: &SolverOptions) -> Result<LevelData> {
    params.validate()?;
    if k < 3 {
        return Err(Error::InvalidParameter { name: "k", reason: format!("need at least 3 levels, got {k}") });
    }
    let h = ReducedHamiltonian::new(params, grid, stencil);
    let (energies, vectors, iterations) = lanczos_lowest(&h, k, opts)?;
    let wavefunctions = vectors.iter().map(|v| h.expand(v.as_slice())).collect();
    let scale = energies.iter().take(3).fold(1.0_f64, |acc, e| acc.max(e.abs()));
    let degenerate = energies.windows(2).take(2).any(|w| (w[1] - w[0]).abs() <= 1e-9 * scale);
    Ok(LevelData { grid, energies, wavefunctions, degenerate, iterations })
}

/// `t_ij = ⟨i| ∂U/∂f |j⟩` for the three lowest levels `(b, c, e)`.
pub fn transition_elements(levels: &LevelData, params: &FluxParams) -> Matrix3<C64> {
    let g = levels.grid;
    let coupling: Vec<f64> = (0..g.n_m).map(|j| flux_coupling(g.phi_m(j), params)).collect();
    Matrix3::from_fn(|a, b| {
        let (pa, pb) = (&levels.wavefunctions[a], &levels.wavefunctions[b]);
        let mut acc = 0.0;
        for i in 0..g.n_p {
            for (j, c) in coupling.iter().enumerate() {
                let k = g.index(i, j);
                acc += pa[k] * c * pb[k];
            }
        }
        C64::new(acc * g.cell(), 0.0)
    })
}

/// `|t_bc t_ce t_eb|`.
pub fn cyclic_product(t: &Matrix3<C64>) -> f64 {
    (t[(0, 1)] * t[(1, 2)] * t[(2, 0)]).norm()
}

/// Off-diagonal couplings of one flux point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelectionPoint {
    pub f: f64,
    pub t_bc: f64,
    pub t_ce: f64,
    pub t_eb: f64,
    pub product: f64,
    pub max_element: f64,
}

pub fn selection_point(params: &FluxParams, grid: Grid2D, stencil: Stencil, opts: &SolverOptions) -> Result<SelectionPoint> {
    let levels = spectrum_2d(params, grid, 3, stencil, opts)?;
    let t = transition_elements(&levels, params);
    Ok(SelectionPoint {
        f: params.f,
        t_bc: t[(0, 1)].norm(),
        t_ce: t[(1, 2)].norm(),
        t_eb: t[(2, 0)].norm(),
        product: cyclic_product(&t),
        max_element: t.iter().fold(0.0, |acc, z| acc.max(z.norm())),
    })
}
