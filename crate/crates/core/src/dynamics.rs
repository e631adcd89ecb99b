//! Cat-state dynamics in the dispersive regime: analytic branch amplitudes,
//! the overlap exponent between branches, coherent-state generation on the
//! `|−⟩` branch, and exact-versus-effective propagation.
//!
//! Branch amplitudes are written as `α = (F/Ω)(1 − e^{iΩt})` with the force
//! `F = Ω·x`, which stays finite when the Stark shift `Ω` vanishes.

use crate::error::{Error, Result};
use crate::hamiltonians::{
    dressed_params, dressed_rotation, effective_hamiltonians, rotating_hamiltonian, DressedLevel, DressedParams,
    ModelParams,
};
use crate::numkernel::{
    coherent_state, embed, hermitian_eig, number_operator, AtomLevel, CVector, HilbertSpace, Operator,
    QuantumState, C64,
};

/// Below this `|Ωt|` the small-angle limits are used.
const SMALL_PHASE: f64 = 1e-8;

/// `(F/Ω)(1 − e^{iΩt})`, tending to `−iFt` as `Ω → 0`.
fn displacement(force: f64, omega: f64, t: f64) -> C64 {
    let phase = omega * t;
    if phase.abs() < SMALL_PHASE {
        return C64::new(0.5 * force * omega * t * t, -force * t);
    }
    (1.0 - C64::from_polar(1.0, phase)) * (force / omega)
}

/// `x² sin(Ωt)` with `x = F/Ω`, zero when there is no force.
fn displacement_phase(force: f64, omega: f64, t: f64) -> f64 {
    if force == 0.0 {
        return 0.0;
    }
    let x = force / omega;
    x * x * (omega * t).sin()
}

/// `sin(Ωt)/Ω`, tending to `t`.
fn sin_over(omega: f64, t: f64) -> f64 {
    if (omega * t).abs() < SMALL_PHASE { t } else { (omega * t).sin() / omega }
}

/// `F₊ = −Ω_A ξ`, the force on the `|+⟩` branch.
fn force_plus(dp: &DressedParams) -> f64 {
    let (_, sin_h) = dp.half_angle();
    -dp.coupling_plus * dp.rabi_eb * sin_h / dp.detuning_plus
}

/// Analytic state of the dispersive dynamics started from `|b⟩⊗|0⟩`:
/// `w₊ e^{iφ₊}|+⟩|α₊⟩ + w₋ e^{iφ₋}|−⟩|α₋⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatState {
    /// `sin(θ/2)`.
    pub weight_plus: f64,
    /// `cos(θ/2)`.
    pub weight_minus: f64,
    /// `α(−ξ, t) = −ξ(1 − e^{iΩ_A t})`.
    pub alpha_plus: C64,
    /// `α(ζ, t) = ζ(1 − e^{iΩ_B t})`.
    pub alpha_minus: C64,
    /// Unimodular phase `exp(−iε₊t + iξ² sin Ω_A t)` from exact propagation.
    pub phase_plus: C64,
    /// Unimodular phase `exp(−iε₋t + iζ² sin Ω_B t)`.
    pub phase_minus: C64,
    /// `exp[iξ² e^{−iΩ_A t}]`; not unimodular, kept for comparison only.
    pub naive_phase_plus: C64,
    /// `exp[iζ² e^{−iΩ_B t}]`; not unimodular, kept for comparison only.
    pub naive_phase_minus: C64,
}

impl CatState {
    /// The state in dressed coordinates of `space`.
    pub fn to_state(&self, space: &HilbertSpace) -> Result<QuantumState> {
        let n = space.fock_dim();
        let plus = coherent_state(self.alpha_plus, n)?;
        let minus = coherent_state(self.alpha_minus, n)?;
        let mut amps = CVector::zeros(space.total_dim());
        let (pl, mi) = (DressedLevel::Plus.index(), DressedLevel::Minus.index());
        for k in 0..n {
            amps[space.index(pl, k)] = plus.amplitudes()[k] * self.phase_plus * self.weight_plus;
            amps[space.index(mi, k)] = minus.amplitudes()[k] * self.phase_minus * self.weight_minus;
        }
        Ok(QuantumState::from_amplitudes(amps))
    }
}

pub fn cat_evolution(dp: &DressedParams, t: f64) -> CatState {
    let (cos_h, sin_h) = dp.half_angle();
    let fp = force_plus(dp);
    let fm = dp.driving_force;
    let (oa, ob) = (dp.stark_plus, dp.stark_minus);
    let i = C64::new(0.0, 1.0);
    let naive = |x: f64, omega: f64| {
        if x == 0.0 { C64::new(1.0, 0.0) } else { (i * x * x * C64::from_polar(1.0, -omega * t)).exp() }
    };
    CatState {
        weight_plus: sin_h,
        weight_minus: cos_h,
        alpha_plus: displacement(fp, oa, t),
        alpha_minus: displacement(fm, ob, t),
        phase_plus: C64::from_polar(1.0, -dp.eps_plus * t + displacement_phase(fp, oa, t)),
        phase_minus: C64::from_polar(1.0, -dp.eps_minus * t + displacement_phase(fm, ob, t)),
        naive_phase_plus: naive(dp.displacement_plus, oa),
        naive_phase_minus: naive(dp.displacement_minus, ob),
    }
}

/// `y = −ln|⟨α₋|α₊⟩| = ½|α₊ − α₋|²`.
pub fn overlap_y(dp: &DressedParams, t: f64) -> f64 {
    0.5 * overlap_exponent_squared(dp, t)
}

/// `|α₊ − α₋|² = −ln|⟨α₋|α₊⟩|²`, twice [`overlap_y`].
pub fn overlap_exponent_squared(dp: &DressedParams, t: f64) -> f64 {
    let cat = cat_evolution(dp, t);
    (cat.alpha_plus - cat.alpha_minus).norm_sqr()
}

/// Mean photon number on the `|−⟩` branch, `ζ²|1 − e^{iΩ_B t}|²`.
pub fn photon_number(dp: &DressedParams, t: f64) -> f64 {
    displacement(dp.driving_force, dp.stark_minus, t).norm_sqr()
}

/// `|dN/dt| = 2ζ²Ω_B |sin Ω_B t|`.
pub fn generation_rate(dp: &DressedParams, t: f64) -> f64 {
    2.0 * dp.driving_force.powi(2) * sin_over(dp.stark_minus, t).abs()
}

/// `|2g(θ)²/Δ₋ · sin Ω_B t|`, which equals [`generation_rate`] only when `G = g`.
pub fn generation_rate_coupling_form(dp: &DressedParams, t: f64) -> f64 {
    (2.0 * dp.coupling_plus.powi(2) / dp.detuning_minus * (dp.stark_minus * t).sin()).abs()
}

/// `|b⟩⊗|0⟩` in the bare basis.
pub fn bare_ground_vacuum(space: &HilbertSpace) -> QuantumState {
    QuantumState::basis(space.total_dim(), space.index(AtomLevel::B.index(), 0))
}

/// `Σ_± |⟨χ_±|φ_±⟩|` between the analytic branches `χ₊ = sin(θ/2)|α₊⟩`,
/// `χ₋ = cos(θ/2)|α₋⟩` and the `|±⟩` components of `dressed_state`.
/// Insensitive to branch phases; at most 1.
pub fn cat_branch_fidelity(cat: &CatState, space: &HilbertSpace, dressed_state: &QuantumState) -> Result<f64> {
    let n = space.fock_dim();
    let plus = coherent_state(cat.alpha_plus, n)?;
    let minus = coherent_state(cat.alpha_minus, n)?;
    let amps = dressed_state.amplitudes();
    let branch = |slot: usize, coh: &QuantumState, weight: f64| {
        (0..n).map(|k| coh.amplitudes()[k].conj() * amps[space.index(slot, k)]).sum::<C64>().norm() * weight
    };
    Ok(branch(DressedLevel::Plus.index(), &plus, cat.weight_plus)
        + branch(DressedLevel::Minus.index(), &minus, cat.weight_minus))
}

/// Observables recorded along a [`Trajectory`], one entry per time.
#[derive(Clone, Debug, Default)]
pub struct Observables {
    pub norm: Vec<f64>,
    pub population_b: Vec<f64>,
    pub population_c: Vec<f64>,
    pub population_e: Vec<f64>,
    pub photons_exact: Vec<f64>,
    pub photons_effective: Vec<f64>,
    /// `|⟨ψ_eff|ψ_exact⟩|`.
    pub fidelity: Vec<f64>,
    /// `Σ_k |⟨ψ_eff,k|ψ_exact,k⟩|` over the dressed atom slots.
    pub branch_fidelity: Vec<f64>,
    /// Analytic overlap exponent [`overlap_y`].
    pub y: Vec<f64>,
}

/// Exact and effective evolution on a common time grid. States are in the
/// bare basis.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub exact: Vec<QuantumState>,
    pub effective: Vec<QuantumState>,
    pub observables: Observables,
}

/// Propagates `psi0` (bare basis) under the exact rotating Hamiltonian and
/// under the block-diagonal effective Hamiltonian, both by exact
/// diagonalization.
///
/// Fails with a truncation error if either mean photon number exceeds
/// `fock_dim/4`.
pub fn evolve_and_compare(
    params: &ModelParams,
    space: &HilbertSpace,
    psi0: &QuantumState,
    times: &[f64],
) -> Result<Trajectory> {
    if psi0.dim() != space.total_dim() {
        return Err(Error::DimensionMismatch { expected: space.total_dim(), found: psi0.dim() });
    }
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter { name: "psi0", reason: format!("norm {} is not 1", psi0.norm()) });
    }
    if times.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return Err(Error::InvalidParameter { name: "times", reason: "must be strictly increasing".into() });
    }

    let dp = dressed_params(params)?;
    let r = dressed_rotation(&dp, space)?;
    let exact_eig = hermitian_eig(&rotating_hamiltonian(params, space)?)?;
    let eff_eig = hermitian_eig(&effective_hamiltonians(params, space)?.rwa_total())?;
    let psi0_dressed = QuantumState::from_amplitudes(r.adjoint().apply(psi0));
    let exact_evolver = exact_eig.evolver(psi0);
    let eff_evolver = eff_eig.evolver(&psi0_dressed);

    let photons = embed(&Operator::identity(3), &number_operator(space.fock_dim())?, space)?;
    let limit = space.fock_dim() as f64 / 4.0;
    let n = space.fock_dim();
    let slot_overlap = |a: &CVector, b: &CVector, slot: usize| {
        (0..n).map(|k| a[space.index(slot, k)].conj() * b[space.index(slot, k)]).sum::<C64>().norm()
    };

    let mut obs = Observables::default();
    let mut exact = Vec::with_capacity(times.len());
    let mut effective = Vec::with_capacity(times.len());
    for &t in times {
        let psi = exact_evolver.state_at(t);
        let phi_dressed = eff_evolver.state_at(t);
        let psi_dressed = r.adjoint().apply(&psi);
        let phi = QuantumState::from_amplitudes(r.apply(&phi_dressed));

        let n_exact = photons.expectation(&psi).re;
        let n_eff = photons.expectation(&phi).re;
        let worst = n_exact.max(n_eff);
        if worst > limit {
            return Err(Error::Truncation { mean_photons: worst, limit, suggested: 2 * space.fock_dim() });
        }

        let level_pop = |level: AtomLevel| (0..n).map(|k| psi.probability(space.index(level.index(), k))).sum::<f64>();
        obs.norm.push(psi.norm());
        obs.population_b.push(level_pop(AtomLevel::B));
        obs.population_c.push(level_pop(AtomLevel::C));
        obs.population_e.push(level_pop(AtomLevel::E));
        obs.photons_exact.push(n_exact);
        obs.photons_effective.push(n_eff);
        obs.fidelity.push(phi.overlap(&psi));
        obs.branch_fidelity.push(
            [DressedLevel::Minus, DressedLevel::Plus, DressedLevel::Excited]
                .iter()
                .map(|l| slot_overlap(phi_dressed.amplitudes(), &psi_dressed, l.index()))
                .sum(),
        );
        obs.y.push(overlap_y(&dp, t));
        exact.push(psi);
        effective.push(phi);
    }
    Ok(Trajectory { times: times.to_vec(), exact, effective, observables: obs })
}

/// Uniform grid of `samples` points on `[0, t_max]`.
pub fn uniform_times(t_max: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..samples).map(|k| t_max * k as f64 / (samples - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn fig5(theta: f64) -> DressedParams {
        dressed_params(&ModelParams::from_mixing_angle(3.0, theta, 0.8, 0.9, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn cat_starts_in_vacuum() {
        let cat = cat_evolution(&fig5(PI / 3.0), 0.0);
        assert_eq!(cat.alpha_plus, C64::new(0.0, 0.0));
        assert_eq!(cat.alpha_minus, C64::new(0.0, 0.0));
        assert!((cat.weight_plus.powi(2) + cat.weight_minus.powi(2) - 1.0).abs() < 1e-15);
        assert_eq!(overlap_y(&fig5(PI / 3.0), 0.0), 0.0);
    }

    #[test]
    fn half_period_gives_maximal_displacement() {
        let dp = fig5(PI / 3.0);
        let t = PI / dp.stark_minus;
        let cat = cat_evolution(&dp, t);
        assert!((cat.alpha_minus.norm() - 2.0 * dp.displacement_minus).abs() < 1e-12);
        assert!((photon_number(&dp, t) - 4.0 * dp.displacement_minus.powi(2)).abs() < 1e-11);
    }

    #[test]
    fn amplitudes_match_displacement_form() {
        let dp = fig5(PI / 4.0);
        for t in [0.3, 17.0, 123.4] {
            let cat = cat_evolution(&dp, t);
            let want_plus = -dp.displacement_plus * (1.0 - C64::from_polar(1.0, dp.stark_plus * t));
            let want_minus = dp.displacement_minus * (1.0 - C64::from_polar(1.0, dp.stark_minus * t));
            assert!((cat.alpha_plus - want_plus).norm() < 1e-12);
            assert!((cat.alpha_minus - want_minus).norm() < 1e-12);
        }
    }

    #[test]
    fn propagated_phases_are_unimodular_naive_ones_are_not() {
        let dp = fig5(PI / 2.0);
        let cat = cat_evolution(&dp, 10.0);
        assert!((cat.phase_plus.norm() - 1.0).abs() < 1e-15);
        assert!((cat.phase_minus.norm() - 1.0).abs() < 1e-15);
        assert!((cat.naive_phase_plus.norm() - 1.0).abs() > 1e-3);
    }

    #[test]
    fn y_closed_form() {
        let dp = fig5(PI / 3.0);
        let (xi, zeta) = (dp.displacement_plus, dp.displacement_minus);
        for t in [0.5, 10.0, 77.7, 200.0] {
            let (a, b) = (dp.stark_plus * t, dp.stark_minus * t);
            let want = xi * xi * (1.0 - a.cos())
                + zeta * zeta * (1.0 - b.cos())
                + xi * zeta * (1.0 - a.cos() - b.cos() + (a - b).cos());
            assert!((overlap_y(&dp, t) - want).abs() < 1e-12);
            assert!((overlap_exponent_squared(&dp, t) - 2.0 * want).abs() < 1e-12);
        }
    }

    #[test]
    fn rate_forms() {
        let dp = fig5(PI / 3.0);
        assert_eq!(generation_rate(&dp, 0.0), 0.0);
        let t = 0.5 * PI / dp.stark_minus;
        let peak = 2.0 * dp.displacement_minus.powi(2) * dp.stark_minus;
        assert!((generation_rate(&dp, t) - peak).abs() < 1e-12 * peak);
        assert!((generation_rate_coupling_form(&dp, t) - generation_rate(&dp, t)).abs() > 1e-4);
    }

    #[test]
    fn vanishing_drive_generates_nothing() {
        let dp = dressed_params(&ModelParams::from_detunings(3.0, 0.5, 0.8, 0.9, 0.0).unwrap()).unwrap();
        for t in [0.0, 1.0, 1e3] {
            assert_eq!(photon_number(&dp, t), 0.0);
            assert_eq!(generation_rate(&dp, t), 0.0);
            let cat = cat_evolution(&dp, t);
            assert!(cat.alpha_minus.norm().is_finite() && cat.phase_minus.norm().is_finite());
        }
    }

    #[test]
    fn uniform_grid() {
        assert_eq!(uniform_times(1.0, 3), vec![0.0, 0.5, 1.0]);
        assert!(uniform_times(1.0, 0).is_empty());
    }

    #[test]
    fn rejects_bad_times_and_state() {
        let p = ModelParams::from_detunings(5.0, 0.0, 0.3, 0.3, 1.0).unwrap();
        let s = HilbertSpace::new(8).unwrap();
        let psi = bare_ground_vacuum(&s);
        assert!(evolve_and_compare(&p, &s, &psi, &[0.0, 1.0, 1.0]).is_err());
        let half = QuantumState::from_amplitudes(psi.amplitudes() * C64::new(0.5, 0.0));
        assert!(evolve_and_compare(&p, &s, &half, &[0.0]).is_err());
    }
}
