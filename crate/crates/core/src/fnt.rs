//! Second-order elimination of off-diagonal couplings by a unitary
//! `exp(S)` with `H₁ + [H₀, S] = 0`, and the matching Rayleigh–Schrödinger
//! series.
//!
//! All operators in a [`Decomposition`] are expressed in its own basis, where
//! `H₀` is diagonal.

use nalgebra::DVector;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hamiltonians::{coupling_operators, DressedLevel, DressedParams};
use crate::numkernel::{embed, expm, hermitian_eig, CMatrix, HilbertSpace, Operator, C64};

/// Relative floor below which an off-diagonal element counts as uncoupled.
const COUPLING_FLOOR: f64 = 1e-12;
/// Degeneracy tolerance relative to `‖H₀‖`.
const GAP_TOL: f64 = 1e-9;
const UNITARITY_TOL: f64 = 1e-10;

/// `H = H₀ + H₁` with `H₀` diagonal and `H₁` zero on the diagonal, both in the
/// basis given by the columns of `basis`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    h0: Operator,
    h1: Operator,
    basis: CMatrix,
    energies: DVector<f64>,
    /// `COUPLING_FLOOR · max|H₁|`.
    floor: f64,
}

impl Decomposition {
    /// Builds a decomposition from energies and a coupling already expressed
    /// in the standard basis. The diagonal of `h1` must vanish.
    pub fn from_parts(energies: DVector<f64>, h1: Operator) -> Result<Self> {
        let n = energies.len();
        if h1.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: h1.dim() });
        }
        h1.ensure_hermitian()?;
        if let Some(i) = (0..n).find(|&i| h1.get(i, i) != C64::new(0.0, 0.0)) {
            return Err(Error::InvalidParameter {
                name: "h1",
                reason: format!("diagonal element {i} is nonzero"),
            });
        }
        Ok(Self {
            h0: Operator::from_real_diagonal(energies.as_slice()),
            floor: COUPLING_FLOOR * h1.max_abs(),
            h1,
            basis: CMatrix::identity(n, n),
            energies,
        })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn h0(&self) -> &Operator {
        &self.h0
    }

    pub fn h1(&self) -> &Operator {
        &self.h1
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn energies(&self) -> &DVector<f64> {
        &self.energies
    }

    /// `H₀ + H₁` in the decomposition basis.
    pub fn hamiltonian(&self) -> Operator {
        &self.h0 + &self.h1
    }

    /// Maps an operator from the decomposition basis back to the original one.
    pub fn to_original(&self, op: &Operator) -> Operator {
        Operator::from_matrix(&self.basis * op.matrix() * self.basis.adjoint()).expect("square")
    }

    /// `1e-9 · ‖H₀‖`.
    pub fn gap_tol(&self) -> f64 {
        GAP_TOL * self.energies.iter().fold(0.0_f64, |acc, e| acc.max(e.abs()))
    }

    /// Whether `H₁` couples `m` and `n` above the relative floor.
    pub fn coupled(&self, m: usize, n: usize) -> bool {
        m != n && self.h1.get(m, n).norm() > self.floor
    }

    /// Smallest `|E_n − E_m|` over coupled pairs, or infinity when nothing is
    /// coupled.
    pub fn min_coupled_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for m in 0..self.dim() {
            for n in (m + 1)..self.dim() {
                if self.coupled(m, n) {
                    gap = gap.min((self.energies[n] - self.energies[m]).abs());
                }
            }
        }
        gap
    }

    fn check_gaps(&self) -> Result<()> {
        let tol = self.gap_tol();
        for m in 0..self.dim() {
            for n in (m + 1)..self.dim() {
                let gap = (self.energies[n] - self.energies[m]).abs();
                if self.coupled(m, n) && gap <= tol {
                    return Err(Error::DegenerateCoupling { row: m, col: n, gap, tol });
                }
            }
        }
        Ok(())
    }
}

/// Splits `h` into its diagonal and off-diagonal parts in the orthonormal
/// basis formed by the columns of `basis`.
pub fn split(h: &Operator, basis: &CMatrix) -> Result<Decomposition> {
    let n = h.dim();
    if basis.nrows() != n || basis.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: basis.nrows().max(basis.ncols()) });
    }
    h.ensure_hermitian()?;
    let gram = basis.adjoint() * basis;
    let defect = (gram - CMatrix::identity(n, n)).iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
    if defect > UNITARITY_TOL {
        return Err(Error::NotUnitary { defect });
    }

    let mut rotated = basis.adjoint() * h.matrix() * basis;
    let energies = DVector::from_fn(n, |i, _| rotated[(i, i)].re);
    for i in 0..n {
        rotated[(i, i)] = C64::new(0.0, 0.0);
    }
    let h1 = Operator::from_matrix(rotated)?;
    Ok(Decomposition {
        h0: Operator::from_real_diagonal(energies.as_slice()),
        floor: COUPLING_FLOOR * h1.max_abs(),
        h1,
        basis: basis.clone(),
        energies,
    })
}

/// [`split`] in the standard basis.
pub fn split_standard(h: &Operator) -> Result<Decomposition> {
    split(h, &CMatrix::identity(h.dim(), h.dim()))
}

/// `S_mn = ⟨m|H₁|n⟩ / (E_n − E_m)` on coupled pairs, zero elsewhere.
pub fn generator(d: &Decomposition) -> Result<Operator> {
    d.check_gaps()?;
    let n = d.dim();
    let e = d.energies();
    let s = CMatrix::from_fn(n, n, |i, j| {
        if d.coupled(i, j) { d.h1().get(i, j) / (e[j] - e[i]) } else { C64::new(0.0, 0.0) }
    });
    Operator::from_matrix(s)
}

/// `‖H₁ + [H₀, S]‖` in the operator norm.
pub fn residual(d: &Decomposition, s: &Operator) -> f64 {
    (d.h1() + d.h0().commutator(s)).op_norm()
}

/// `H₀ + ½[H₁, S]`.
pub fn effective_hamiltonian(d: &Decomposition, s: &Operator) -> Operator {
    d.h0() + d.h1().commutator(s).scale_real(0.5)
}

/// `exp(−S) (H₀ + H₁) exp(S)`, the exactly transformed Hamiltonian.
pub fn transformed_hamiltonian(d: &Decomposition, s: &Operator) -> Operator {
    let h = d.hamiltonian();
    expm(&s.scale_real(-1.0)) * h * expm(s)
}

/// Second-order energies and corrected eigenvectors (columns), in the
/// decomposition basis.
#[derive(Clone, Debug)]
pub struct PerturbationSeries {
    pub energies_2nd: DVector<f64>,
    /// `|n⟩ + Σ_m ⟨m|H₁|n⟩/(E_n − E_m) |m⟩`, i.e. `(1 + S)|n⟩`.
    pub states_1st: CMatrix,
    /// `(1 + S + S²/2)|n⟩`.
    pub states_2nd: CMatrix,
}

pub fn perturbation_series(d: &Decomposition, s: &Operator) -> Result<PerturbationSeries> {
    d.check_gaps()?;
    let n = d.dim();
    let e = d.energies();
    let energies_2nd = DVector::from_fn(n, |k, _| {
        let shift: f64 = (0..n)
            .filter(|&l| d.coupled(l, k))
            .map(|l| d.h1().get(l, k).norm_sqr() / (e[k] - e[l]))
            .sum();
        e[k] + shift
    });
    let id = CMatrix::identity(n, n);
    let states_1st = &id + s.matrix();
    let states_2nd = &states_1st + (s.matrix() * s.matrix()) * C64::new(0.5, 0.0);
    Ok(PerturbationSeries { energies_2nd, states_1st, states_2nd })
}

/// Everything the engine produces for one Hamiltonian.
#[derive(Clone, Debug)]
pub struct FntResult {
    pub decomposition: Decomposition,
    pub generator: Operator,
    pub effective: Operator,
    pub series: PerturbationSeries,
    pub residual: f64,
}

impl FntResult {
    /// Largest `|E_n^(2) − λ_n|`, pairing both spectra in ascending order.
    pub fn max_energy_error(&self) -> Result<f64> {
        let exact = hermitian_eig(&self.decomposition.hamiltonian())?.eigenvalues;
        let mut approx: Vec<f64> = self.series.energies_2nd.iter().copied().collect();
        approx.sort_by(f64::total_cmp);
        Ok(approx.iter().zip(exact.iter()).fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs())))
    }
}

/// Runs the full elimination for `h` in the given basis.
pub fn eliminate(h: &Operator, basis: &CMatrix) -> Result<FntResult> {
    eliminate_decomposition(split(h, basis)?)
}

pub fn eliminate_decomposition(decomposition: Decomposition) -> Result<FntResult> {
    let s = generator(&decomposition)?;
    let effective = effective_hamiltonian(&decomposition, &s);
    let series = perturbation_series(&decomposition, &s)?;
    let residual = residual(&decomposition, &s);
    Ok(FntResult { decomposition, generator: s, effective, series, residual })
}

/// Random nondegenerate instance: `E_n = n + U(−¼, ¼)` and a complex Hermitian
/// coupling with zero diagonal scaled so that `‖H₁‖ = ratio · min gap`.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, dim: usize, ratio: f64) -> Result<Decomposition> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, reason: "random instance needs at least two levels" });
    }
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::InvalidParameter { name: "ratio", reason: format!("must be positive, got {ratio}") });
    }
    let energies = DVector::from_fn(dim, |n, _| n as f64 + rng.gen_range(-0.25..0.25));
    let mut m = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in (i + 1)..dim {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    let h1 = Operator::from_matrix(m)?;
    let gap = min_gap(&energies);
    let h1 = h1.scale_real(ratio * gap / h1.op_norm());
    Decomposition::from_parts(energies, h1)
}

fn min_gap(energies: &DVector<f64>) -> f64 {
    let mut sorted: Vec<f64> = energies.iter().copied().collect();
    sorted.sort_by(f64::total_cmp);
    sorted.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

/// Analytic generator for the dressed model,
/// `S = Γ₁ A|e⟩⟨+| + Γ₂ B|e⟩⟨−| + Γ₃ A†|+⟩⟨e| + Γ₄ B†|−⟩⟨e|`,
/// with coefficients from [`DressedParams::generator_coefficients`].
pub fn model_generator(dp: &DressedParams, space: &HilbertSpace) -> Result<Operator> {
    let (c_plus, c_minus) = coupling_operators(dp, space)?;
    let (mi, pl, ex) = (DressedLevel::Minus.index(), DressedLevel::Plus.index(), DressedLevel::Excited.index());
    let t = Operator::atom_transition;
    let (dplus, dminus) = (dp.detuning_plus, dp.detuning_minus);
    // Γ₁A = −C₊/Δ₊, Γ₂B = C₋/Δ₋
    let lower = embed(&t(ex, pl), &c_plus.scale_real(-1.0 / dplus), space)?
        + embed(&t(ex, mi), &c_minus.scale_real(1.0 / dminus), space)?;
    Ok(&lower - lower.adjoint())
}

/// Photon-number coefficients read off a second-order Hamiltonian in dressed
/// coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchCoefficients {
    /// Minus the slope of the `|+⟩` diagonal in photon number.
    pub stark_plus: f64,
    /// Minus the slope of the `|−⟩` diagonal in photon number.
    pub stark_minus: f64,
    /// Slope of the `⟨+, n|·|−, n⟩` elements in photon number.
    pub cross: f64,
}

/// Reads the coefficients from the `n = 0, 1` entries, away from the
/// truncation edge.
pub fn branch_coefficients(h_eff: &Operator, space: &HilbertSpace) -> BranchCoefficients {
    let (mi, pl) = (DressedLevel::Minus.index(), DressedLevel::Plus.index());
    let el = |a: usize, b: usize, n: usize| h_eff.get(space.index(a, n), space.index(b, n)).re;
    BranchCoefficients {
        stark_plus: -(el(pl, pl, 1) - el(pl, pl, 0)),
        stark_minus: -(el(mi, mi, 1) - el(mi, mi, 0)),
        cross: el(pl, mi, 1) - el(pl, mi, 0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_level(delta: f64, g: f64) -> Operator {
        let mut m = CMatrix::zeros(2, 2);
        m[(1, 1)] = C64::new(delta, 0.0);
        m[(0, 1)] = C64::new(g, 0.0);
        m[(1, 0)] = C64::new(g, 0.0);
        Operator::from_matrix(m).unwrap()
    }

    #[test]
    fn diagonal_input_has_no_coupling() {
        let d = split_standard(&Operator::from_real_diagonal(&[1.0, -2.0, 0.5])).unwrap();
        assert_eq!(d.h1().max_abs(), 0.0);
        assert_eq!(generator(&d).unwrap().max_abs(), 0.0);
        assert_eq!(effective_hamiltonian(&d, &generator(&d).unwrap()), *d.h0());
    }

    #[test]
    fn two_level_split_generator_and_effective() {
        let (delta, g) = (2.0, 0.1);
        let d = split_standard(&two_level(delta, g)).unwrap();
        assert_eq!(d.energies().as_slice(), &[0.0, delta]);
        assert_eq!(d.h1().get(0, 1), C64::new(g, 0.0));
        let s = generator(&d).unwrap();
        assert!((s.get(0, 1) - C64::new(g / delta, 0.0)).norm() < 1e-16);
        assert!((s.get(1, 0) + C64::new(g / delta, 0.0)).norm() < 1e-16);
        assert!(residual(&d, &s) < 1e-16);
        let h = effective_hamiltonian(&d, &s);
        assert!((h.get(0, 0).re + g * g / delta).abs() < 1e-15);
        assert!((h.get(1, 1).re - delta - g * g / delta).abs() < 1e-15);
        let series = perturbation_series(&d, &s).unwrap();
        assert!((series.energies_2nd[0] + g * g / delta).abs() < 1e-15);
    }

    #[test]
    fn degenerate_coupled_pair_is_named() {
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(2, 2)] = C64::new(1.0, 0.0);
        m[(0, 2)] = C64::new(0.1, 0.0);
        m[(2, 0)] = C64::new(0.1, 0.0);
        let d = split_standard(&Operator::from_matrix(m).unwrap()).unwrap();
        assert!(matches!(generator(&d), Err(Error::DegenerateCoupling { row: 0, col: 2, .. })));
    }

    #[test]
    fn uncoupled_degenerate_pair_is_allowed() {
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(2, 2)] = C64::new(1.0, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        m[(1, 0)] = C64::new(0.1, 0.0);
        let d = split_standard(&Operator::from_matrix(m).unwrap()).unwrap();
        let s = generator(&d).unwrap();
        assert_eq!(s.get(0, 2), C64::new(0.0, 0.0));
        assert!(residual(&d, &s) < 1e-15);
    }

    #[test]
    fn non_unitary_basis_rejected() {
        let basis = CMatrix::identity(2, 2) * C64::new(1.1, 0.0);
        assert!(matches!(split(&two_level(1.0, 0.1), &basis), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn split_in_rotated_basis_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let d = random_instance(&mut rng, 6, 0.3).unwrap();
        let h = d.hamiltonian();
        let u = hermitian_eig(&random_instance(&mut rng, 6, 1.0).unwrap().hamiltonian()).unwrap().eigenvectors;
        let h_orig = Operator::from_matrix(&u * h.matrix() * u.adjoint()).unwrap();
        let d2 = split(&h_orig, &u).unwrap();
        assert!((d2.to_original(&d2.hamiltonian()) - &h_orig).max_abs() < 1e-12);
        assert!((d2.hamiltonian() - h).max_abs() < 1e-12);
    }

    #[test]
    fn random_instance_is_scaled() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = random_instance(&mut rng, 8, 0.05).unwrap();
        let gap = min_gap(d.energies());
        assert!((d.h1().op_norm() - 0.05 * gap).abs() < 1e-12);
        assert!(gap >= 0.5);
        assert!(random_instance(&mut rng, 1, 0.1).is_err());
    }

    #[test]
    fn series_states_are_first_order_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = random_instance(&mut rng, 5, 0.1).unwrap();
        let s = generator(&d).unwrap();
        let series = perturbation_series(&d, &s).unwrap();
        let e = d.energies();
        for n in 0..5 {
            for m in 0..5 {
                let want = if m == n { C64::new(1.0, 0.0) } else { d.h1().get(m, n) / (e[n] - e[m]) };
                assert!((series.states_1st[(m, n)] - want).norm() < 1e-15);
            }
        }
    }
}
