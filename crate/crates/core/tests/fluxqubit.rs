use std::f64::consts::PI;

use delta_atom_core::fluxqubit::{
    cyclic_product, flux_coupling, potential_energy, selection_point, spectrum_2d, transition_elements, FluxParams,
    Grid2D, SolverOptions, Stencil,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn opts() -> SolverOptions {
    SolverOptions::default()
}

#[test]
fn inversion_symmetry_at_half_flux() {
    let p = FluxParams::default().with_flux(0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let (a, b) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let u = potential_energy(a, b, &p);
        assert!((potential_energy(-a, -b, &p) - u).abs() < 1e-12);
        // same relation with the two arguments exchanged
        assert!((potential_energy(-b, -a, &p) - potential_energy(b, a, &p)).abs() < 1e-12);
    }
}

#[test]
fn symmetry_holds_for_every_integer_two_f() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for two_f in -2..=3 {
        let p = FluxParams::default().with_flux(0.5 * two_f as f64);
        for _ in 0..1000 {
            let (a, b) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
            assert!((potential_energy(-a, -b, &p) - potential_energy(a, b, &p)).abs() < 1e-12);
        }
    }
}

#[test]
fn bias_off_half_flux_breaks_inversion() {
    let p = FluxParams::default().with_flux(0.45);
    let (a, b) = (0.3, PI / 4.0);
    let defect = (potential_energy(-a, -b, &p) - potential_energy(a, b, &p)).abs();
    assert!(defect > 0.01 * p.e_j, "defect {defect}");
}

proptest! {
    #[test]
    fn potential_is_periodic(a in -PI..PI, b in -PI..PI, f in -1.0..1.0f64, kp in -3i32..3, km in -3i32..3) {
        let p = FluxParams::default().with_flux(f);
        let u = potential_energy(a, b, &p);
        let shifted = potential_energy(a + 2.0 * PI * kp as f64, b + 2.0 * PI * km as f64, &p);
        prop_assert!((shifted - u).abs() < 1e-11);
        prop_assert!((potential_energy(a, b, &p.with_flux(f + 1.0)) - u).abs() < 1e-11);
    }

    #[test]
    fn potential_is_nonnegative_and_bounded(a in -PI..PI, b in -PI..PI, f in 0.0..1.0f64) {
        let p = FluxParams::default().with_flux(f);
        let u = potential_energy(a, b, &p);
        prop_assert!(u >= -1e-15 && u <= 4.0 + 2.0 * p.alpha + 1e-12);
    }

    #[test]
    fn coupling_is_flux_derivative(b in -PI..PI, f in 0.0..1.0f64) {
        let p = FluxParams::default();
        let step = 1e-6;
        let fd = (potential_energy(0.1, b, &p.with_flux(f + step)) - potential_energy(0.1, b, &p.with_flux(f - step))) / (2.0 * step);
        prop_assert!((fd - flux_coupling(b, &p.with_flux(f))).abs() < 1e-6);
    }
}

#[test]
fn harmonic_limit_matches_normal_modes() {
    // single deep well at the origin for alpha < 1/2
    let p = FluxParams::new(1.0, 0.2, 0.5, 400.0).unwrap();
    let h = 1e-4;
    let u = |a: f64, b: f64| potential_energy(a, b, &p);
    let upp = (u(h, 0.0) - 2.0 * u(0.0, 0.0) + u(-h, 0.0)) / (h * h);
    let umm = (u(0.0, h) - 2.0 * u(0.0, 0.0) + u(0.0, -h)) / (h * h);
    let (w_p, w_m) = ((upp / p.m_p()).sqrt(), (umm / p.m_m()).sqrt());
    assert!(w_m < w_p && w_p < 2.0 * w_m);

    let lv = spectrum_2d(&p, Grid2D::square(96).unwrap(), 3, Stencil::Fourth, &opts()).unwrap();
    let first = lv.energies[1] - lv.energies[0];
    let second = lv.energies[2] - lv.energies[0];
    assert!((first / w_m - 1.0).abs() < 0.02, "{first} vs {w_m}");
    assert!((second / w_p - 1.0).abs() < 0.02, "{second} vs {w_p}");
}

#[test]
fn half_flux_states_have_definite_parity() {
    let p = FluxParams::default().with_flux(0.5);
    let lv = spectrum_2d(&p, Grid2D::square(48).unwrap(), 5, Stencil::Fourth, &opts()).unwrap();
    for i in 0..5 {
        let parity = lv.inversion_parity(i);
        assert!((parity.abs() - 1.0).abs() < 1e-6, "level {i}: {parity}");
    }
}

#[test]
fn refinement_converges_from_below() {
    let p = FluxParams::default();
    let grids = [32, 64, 128].map(|n| spectrum_2d(&p, Grid2D::square(n).unwrap(), 3, Stencil::Fourth, &opts()).unwrap());
    for lv in &grids {
        assert!(lv.energies.windows(2).all(|w| w[1] > w[0]));
        assert!(!lv.degenerate);
        for i in 0..3 {
            assert!((lv.overlap(i, i) - 1.0).abs() < 1e-8);
        }
    }
    for i in 0..3 {
        let (e32, e64, e128) = (grids[0].energies[i], grids[1].energies[i], grids[2].energies[i]);
        assert!(e32 < e64 && e64 < e128, "level {i}: {e32} {e64} {e128}");
        assert!(((e128 - e64) / e128).abs() < 1e-4, "level {i}");
    }
}

#[test]
fn stencils_agree_on_coarse_grid() {
    let p = FluxParams::default();
    let g = Grid2D::square(64).unwrap();
    let a = spectrum_2d(&p, g, 3, Stencil::Second, &opts()).unwrap();
    let b = spectrum_2d(&p, g, 3, Stencil::Fourth, &opts()).unwrap();
    for i in 0..3 {
        assert!((a.energies[i] - b.energies[i]).abs() / b.energies[i] < 2e-3);
    }
}

#[test]
fn transition_matrix_is_hermitian() {
    let p = FluxParams::default();
    let lv = spectrum_2d(&p, Grid2D::square(32).unwrap(), 3, Stencil::Fourth, &opts()).unwrap();
    let t = transition_elements(&lv, &p);
    for a in 0..3 {
        for b in 0..3 {
            assert!((t[(a, b)] - t[(b, a)].conj()).norm() < 1e-10);
        }
    }
}

#[test]
fn loop_closes_only_off_half_flux() {
    let g = Grid2D::square(48).unwrap();
    let off = selection_point(&FluxParams::default().with_flux(0.45), g, Stencil::Fourth, &opts()).unwrap();
    let on = selection_point(&FluxParams::default().with_flux(0.5), g, Stencil::Fourth, &opts()).unwrap();
    for leg in [off.t_bc, off.t_ce, off.t_eb] {
        assert!(leg > 1e-3 * off.max_element);
    }
    assert!(on.product <= 1e-8 * on.max_element.powi(3));
    assert!(on.product <= 1e-8 * off.product);
}

#[test]
fn cyclic_product_is_smallest_at_half_flux() {
    let g = Grid2D::square(32).unwrap();
    let scan: Vec<_> = (0..=20)
        .map(|k| {
            let p = FluxParams::default().with_flux(0.45 + 0.005 * k as f64);
            let lv = spectrum_2d(&p, g, 3, Stencil::Fourth, &opts()).unwrap();
            (p.f, cyclic_product(&transition_elements(&lv, &p)))
        })
        .collect();
    let (f_min, _) = scan.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    assert!((f_min - 0.5).abs() < 1e-12, "minimum at {f_min}");
}
