//! Experiment runners. Each returns a [`ResultTable`] whose metadata carries
//! the resolved config.

use std::f64::consts::PI;

use delta_atom_core::dynamics::{
    bare_ground_vacuum, cat_branch_fidelity, cat_evolution, evolve_and_compare, generation_rate,
    generation_rate_coupling_form, overlap_y, photon_number, uniform_times,
};
use delta_atom_core::fluxqubit::{selection_point, spectrum_2d, FluxParams};
use delta_atom_core::fnt::{eliminate_decomposition, random_instance};
use delta_atom_core::hamiltonians::{dressed_params, dressed_rotation, effective_hamiltonians, DressedParams};
use delta_atom_core::numkernel::{coherent_state, fock_dim_for, hermitian_eig, number_operator, HilbertSpace, QuantumState};
use delta_atom_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Experiment, RunConfig};
use crate::error::{CliError, Result};
use crate::table::{Cell, ResultTable};

pub fn run_experiment(cfg: &RunConfig) -> Result<ResultTable> {
    match cfg.experiment {
        Experiment::Fig5 => run_fig5(cfg),
        Experiment::Cat => run_cat(cfg),
        Experiment::Coherent => run_coherent(cfg),
        Experiment::SelectionRules => run_selection_rules(cfg),
        Experiment::FntCheck => run_fnt_check(cfg),
        Experiment::Spectrum => run_spectrum(cfg),
    }
}

/// `pi/2`, `2*pi/3`, … for rational multiples of π with small denominators.
pub fn theta_label(theta: f64) -> String {
    for k in 1..=12u32 {
        let m = theta * k as f64 / PI;
        if (m - m.round()).abs() < 1e-12 && m.round() != 0.0 {
            let m = m.round() as i64;
            let num = if m == 1 { "pi".to_string() } else { format!("{m}*pi") };
            return if k == 1 { num } else { format!("{num}/{k}") };
        }
    }
    format!("{theta:?}")
}

fn cat_params(dp: &DressedParams, what: &str) -> Result<()> {
    if dp.singularity.is_some() {
        return Err(CliError::Validation(format!("{what} needs lambda != 0 (branch displacement diverges)")));
    }
    Ok(())
}

/// Largest branch amplitude `2·max(ξ, ζ)` reached by the cat state.
fn cat_alpha_bound(dp: &DressedParams) -> f64 {
    2.0 * dp.displacement_plus.abs().max(dp.displacement_minus.abs())
}

fn longest_period(dp: &DressedParams) -> f64 {
    2.0 * PI / dp.stark_plus.abs().min(dp.stark_minus.abs())
}

/// Overlap exponent per mixing angle on a common `g·t` axis, next to the
/// same quantity evaluated from truncated Fock-space coherent states.
pub fn run_fig5(cfg: &RunConfig) -> Result<ResultTable> {
    let model = cfg.model()?;
    let sweep = model.sweep()?;
    let mut dps = Vec::with_capacity(sweep.len());
    for (_, p) in &sweep {
        let dp = dressed_params(p)?;
        cat_params(&dp, "fig5")?;
        dps.push(dp);
    }
    let window = cfg.numerics.periods * dps.iter().map(longest_period).fold(0.0, f64::max);
    if !window.is_finite() {
        return Err(CliError::Validation("fig5: a Stark shift vanishes, the period is infinite".into()));
    }
    let dims: Vec<usize> = dps.iter().map(|dp| fock_dim_for(cat_alpha_bound(dp), cfg.numerics.fock_dim)).collect();

    let labels: Vec<String> = sweep.iter().map(|(theta, _)| theta_label(*theta)).collect();
    let mut header = vec!["gt".to_string()];
    header.extend(labels.iter().map(|l| format!("y(theta={l})")));
    header.extend(labels.iter().map(|l| format!("y_fock(theta={l})")));
    let mut table = ResultTable::new(header, cfg.to_json());
    table.note("fock_dim_used", dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","));

    for t in uniform_times(window, cfg.numerics.samples) {
        let mut row: Vec<Cell> = vec![(model.g * t).into()];
        row.extend(dps.iter().map(|dp| Cell::from(overlap_y(dp, t))));
        for (dp, &n) in dps.iter().zip(&dims) {
            let cat = cat_evolution(dp, t);
            let plus = coherent_state(cat.alpha_plus, n)?;
            let minus = coherent_state(cat.alpha_minus, n)?;
            row.push((-minus.overlap(&plus).ln()).into());
        }
        table.push(row);
    }
    Ok(table)
}

/// Exact rotating-frame evolution from `|b⟩⊗|0⟩` compared with the analytic
/// cat state of the effective Hamiltonian.
pub fn run_cat(cfg: &RunConfig) -> Result<ResultTable> {
    let p = cfg.model()?.params()?;
    let dp = dressed_params(&p)?;
    cat_params(&dp, "cat")?;
    let window = cfg.numerics.periods * longest_period(&dp);
    let n = fock_dim_for(cat_alpha_bound(&dp), cfg.numerics.fock_dim);
    let space = HilbertSpace::new(n)?;
    let r = dressed_rotation(&dp, &space)?;
    let times = uniform_times(window, cfg.numerics.samples);
    let traj = evolve_and_compare(&p, &space, &bare_ground_vacuum(&space), &times)?;

    let header = [
        "t",
        "fidelity",
        "fidelity_effective",
        "y",
        "pop_b",
        "pop_c",
        "pop_e",
        "abs_alpha_plus",
        "abs_alpha_minus",
    ];
    let mut table = ResultTable::new(header.map(String::from).to_vec(), cfg.to_json());
    table.note("fock_dim_used", n.to_string());
    table.note("leakage_bound", format!("{:?}", 4.0 * (dp.max_coupling() / dp.min_detuning()).powi(2)));
    let obs = &traj.observables;
    for (k, &t) in traj.times.iter().enumerate() {
        let dressed = QuantumState::from_amplitudes(r.adjoint().apply(&traj.exact[k]));
        let cat = cat_evolution(&dp, t);
        table.push(vec![
            t.into(),
            cat_branch_fidelity(&cat, &space, &dressed)?.into(),
            obs.fidelity[k].into(),
            obs.y[k].into(),
            obs.population_b[k].into(),
            obs.population_c[k].into(),
            obs.population_e[k].into(),
            cat.alpha_plus.norm().into(),
            cat.alpha_minus.norm().into(),
        ]);
    }
    Ok(table)
}

/// Photon number of the `|−⟩` branch: closed form against exact
/// propagation under the driven-oscillator Hamiltonian.
pub fn run_coherent(cfg: &RunConfig) -> Result<ResultTable> {
    let p = cfg.model()?.params()?;
    let dp = dressed_params(&p)?;
    let omega = dp.stark_minus.abs();
    // without a Stark shift the drive grows linearly; fall back to the detuning timescale
    let period = if omega > 0.0 { 2.0 * PI / omega } else { 2.0 * PI / dp.detuning_minus.abs() };
    let window = cfg.numerics.periods * period;
    let amplitude = if omega > 0.0 { 2.0 * dp.driving_force.abs() / omega } else { dp.driving_force.abs() * window };
    if !window.is_finite() || !amplitude.is_finite() {
        return Err(CliError::Validation("coherent: no finite time window for these parameters".into()));
    }
    let n = fock_dim_for(amplitude, cfg.numerics.fock_dim);
    let space = HilbertSpace::new(n)?;
    let h = effective_hamiltonians(&p, &space)?.minus;
    let eig = hermitian_eig(&h)?;
    let evolver = eig.evolver(&QuantumState::basis(n, 0));
    let num = number_operator(n)?;
    let limit = n as f64 / 4.0;

    let header = ["t", "N_analytic", "N_exact", "r_derivative", "r_coupling_form"];
    let mut table = ResultTable::new(header.map(String::from).to_vec(), cfg.to_json());
    table.note("fock_dim_used", n.to_string());
    for t in uniform_times(window, cfg.numerics.samples) {
        let exact = num.expectation(&evolver.state_at(t)).re;
        if exact > limit {
            return Err(Error::Truncation { mean_photons: exact, limit, suggested: 2 * n }.into());
        }
        table.push(vec![
            t.into(),
            photon_number(&dp, t).into(),
            exact.into(),
            generation_rate(&dp, t).into(),
            generation_rate_coupling_form(&dp, t).into(),
        ]);
    }
    Ok(table)
}

fn flux_scan(cfg: &RunConfig) -> Result<Vec<FluxParams>> {
    let base = cfg.flux()?.params()?;
    cfg.numerics.flux_points().into_iter().map(|f| Ok(FluxParams::new(base.e_j, base.alpha, f, base.mass_ratio)?)).collect()
}

/// Transition matrix elements of the flux coupling between the three lowest
/// loop states across a flux scan.
pub fn run_selection_rules(cfg: &RunConfig) -> Result<ResultTable> {
    let grid = cfg.numerics.grid2d()?;
    let opts = cfg.numerics.solver_options(cfg.seed);
    let stencil = cfg.numerics.stencil.into();
    let points = flux_scan(cfg)?
        .par_iter()
        .map(|p| selection_point(p, grid, stencil, &opts))
        .collect::<std::result::Result<Vec<_>, _>>()?;

    let header = ["f", "abs_t_bc", "abs_t_ce", "abs_t_eb", "abs_product", "max_abs_t"];
    let mut table = ResultTable::new(header.map(String::from).to_vec(), cfg.to_json());
    for s in points {
        table.push(vec![s.f.into(), s.t_bc.into(), s.t_ce.into(), s.t_eb.into(), s.product.into(), s.max_element.into()]);
    }
    Ok(table)
}

/// Lowest three loop energies across a flux scan.
pub fn run_spectrum(cfg: &RunConfig) -> Result<ResultTable> {
    let grid = cfg.numerics.grid2d()?;
    let opts = cfg.numerics.solver_options(cfg.seed);
    let stencil = cfg.numerics.stencil.into();
    let scan = flux_scan(cfg)?;
    let levels = scan
        .par_iter()
        .map(|p| spectrum_2d(p, grid, 3, stencil, &opts))
        .collect::<std::result::Result<Vec<_>, _>>()?;

    let header = ["f", "E_b", "E_c", "E_e"];
    let mut table = ResultTable::new(header.map(String::from).to_vec(), cfg.to_json());
    for (p, lv) in scan.iter().zip(levels) {
        table.push(vec![p.f.into(), lv.energies[0].into(), lv.energies[1].into(), lv.energies[2].into()]);
    }
    Ok(table)
}

/// Randomized elimination ensemble: residual of the generator equation and
/// second-order energy error against exact diagonalization.
pub fn run_fnt_check(cfg: &RunConfig) -> Result<ResultTable> {
    let n = &cfg.numerics;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let header = ["instance", "dim", "ratio", "h1_norm", "residual", "energy_error", "error_bound"];
    let mut table = ResultTable::new(header.map(String::from).to_vec(), cfg.to_json());
    for i in 0..n.instances {
        let dim = rng.gen_range(2..=n.max_dim);
        let ratio = rng.gen_range(n.ratio_min..=n.ratio_max);
        let d = random_instance(&mut rng, dim, ratio)?;
        let h1 = d.h1().op_norm();
        let gap = d.min_coupled_gap();
        let res = eliminate_decomposition(d)?;
        table.push(vec![
            i.into(),
            dim.into(),
            (h1 / gap).into(),
            h1.into(),
            res.residual.into(),
            res.max_energy_error()?.into(),
            (10.0 * h1.powi(3) / (gap * gap)).into(),
        ]);
    }
    Ok(table)
}
