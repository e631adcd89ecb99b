use delta_atom_core::hamiltonians::{
    dressed_hamiltonian, dressed_params, dressed_rotation, frame_unitary, frame_unitary_derivative, lab_hamiltonian,
    rotating_hamiltonian, ModelParams,
};
use delta_atom_core::numkernel::{hermitian_eig, HilbertSpace, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params() -> ModelParams {
    ModelParams::new(23.0, 19.5, 4.0, 24.0, 20.0, 0.3, 0.45, 0.7).unwrap()
}

#[test]
fn frame_change_removes_time_dependence() {
    let p = params();
    let space = HilbertSpace::new(8).unwrap();
    let h_rot = rotating_hamiltonian(&p, &space).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let t = rng.gen_range(0.0..50.0);
        let w = frame_unitary(&p, &space, t).unwrap();
        let dw = frame_unitary_derivative(&p, &space, t).unwrap();
        let lab = lab_hamiltonian(&p, &space, t).unwrap();
        let transformed = w.adjoint() * lab * &w - (w.adjoint() * dw).scale(C64::new(0.0, 1.0));
        let err = (transformed - &h_rot).op_norm();
        assert!(err <= 1e-10, "t = {t}: {err}");
    }
}

#[test]
fn frame_derivative_matches_finite_difference() {
    let p = params();
    let space = HilbertSpace::new(5).unwrap();
    let (t, h) = (1.3, 1e-6);
    let fd = (frame_unitary(&p, &space, t + h).unwrap() - frame_unitary(&p, &space, t - h).unwrap()).scale_real(0.5 / h);
    let exact = frame_unitary_derivative(&p, &space, t).unwrap();
    assert!((fd - exact).max_abs() < 1e-6);
}

#[test]
fn dressed_frame_is_a_basis_change() {
    let p = params();
    let space = HilbertSpace::new(10).unwrap();
    let dp = dressed_params(&p).unwrap();
    let r = dressed_rotation(&dp, &space).unwrap();
    assert!((r.adjoint() * &r - delta_atom_core::numkernel::Operator::identity(30)).max_abs() < 1e-14);

    let h_rot = rotating_hamiltonian(&p, &space).unwrap();
    let dressed = dressed_hamiltonian(&p, &space).unwrap().total();
    assert!((&r * &dressed * r.adjoint() - &h_rot).op_norm() < 1e-12);

    let a = hermitian_eig(&h_rot).unwrap().eigenvalues;
    let b = hermitian_eig(&dressed).unwrap().eigenvalues;
    let worst = a.iter().zip(b.iter()).fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()));
    assert!(worst <= 1e-10, "{worst}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dressed_frame_equivalence_random(
        de in -6.0..6.0f64, dc in -3.0..3.0f64, g in 0.05..1.0f64, gg in 0.05..1.0f64, l in 0.1..2.0f64,
    ) {
        let p = ModelParams::from_detunings(de, dc, g, gg, l).unwrap();
        let Ok(dp) = dressed_params(&p) else { return Ok(()) };
        prop_assume!(dp.min_detuning() > 1e-3);
        let space = HilbertSpace::new(6).unwrap();
        let r = dressed_rotation(&dp, &space).unwrap();
        let h_rot = rotating_hamiltonian(&p, &space).unwrap();
        let dressed = dressed_hamiltonian(&p, &space).unwrap().total();
        prop_assert!((&r * dressed * r.adjoint() - h_rot).max_abs() < 1e-12);
    }

    #[test]
    fn dressed_invariants_random(dc in -5.0..5.0f64, l in -2.0..2.0f64, g in 0.1..1.0f64, gg in 0.1..1.0f64) {
        prop_assume!(l.abs() > 1e-3);
        let p = ModelParams::from_detunings(7.0, dc, g, gg, l).unwrap();
        let dp = dressed_params(&p).unwrap();
        prop_assert!((dp.eps_plus - dp.eps_minus - 2.0 * dp.omega_prime).abs() < 1e-12);
        prop_assert!((dp.displacement_plus * dp.displacement_minus - (gg / g).powi(2)).abs() < 1e-10 * (gg / g).powi(2).max(1.0));
        prop_assert!((dp.coupling_plus.powi(2) + dp.coupling_minus.powi(2) - g * g).abs() < 1e-14);
        prop_assert!(dp.theta > 0.0 || l < 0.0);
    }

    #[test]
    fn lab_hamiltonian_is_hermitian(t in 0.0..100.0f64) {
        let p = params();
        let h = lab_hamiltonian(&p, &HilbertSpace::new(5).unwrap(), t).unwrap();
        prop_assert!(h.is_hermitian());
    }
}
