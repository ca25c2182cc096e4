use dqc1_core::circuit::{
    branch_pure_state, evolve, final_state_closed, general_final_control, linear_entropy_closed, normalized_trace,
    reduced_system_state, ControlQubit, Dqc1Instance,
};
use dqc1_core::entpower::{
    brute_force_entpower, branch_coefficients, decompose_from_t, ensemble_average, entpower_alpha, entpower_bounds,
    entpower_standard, fourier_ensemble, lambda_factor, mixing_factor,
};
use dqc1_core::measurement::{entpower_from_rounds, error_budget, estimate_trace, expect_pauli, rounds_for_budget};
use dqc1_core::numerics::{
    eig_hermitian, eig_unitary, haar_unitary, kron, partial_trace, random_density, random_right_unitary,
    random_state, trace_sqrt_product, Axis, ComplexMatrix, SeededRng, Subsystem,
};
use dqc1_core::C64;
use proptest::prelude::*;

fn random_bloch(rng: &mut SeededRng) -> [f64; 3] {
    let v = [rng.standard_normal(), rng.standard_normal(), rng.standard_normal()];
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let radius = (rng.standard_normal().abs() * 0.6).min(1.0);
    v.map(|x| x / norm * radius)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kron_is_associative(seed in any::<u64>(), da in 1usize..4, db in 1usize..4, dc in 1usize..4) {
        let mut rng = SeededRng::new(seed, 0);
        let a = haar_unitary(da, &mut rng);
        let b = random_density(db, db, &mut rng).unwrap();
        let c = haar_unitary(dc, &mut rng);
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = SeededRng::new(seed, 0);
        let a = random_density(2, 2, &mut rng).unwrap();
        let b = random_density(1 << n, 1 << n, &mut rng).unwrap();
        let joint = kron(&a, &b).unwrap();
        let kept = partial_trace(&joint, Subsystem::Control, 1 << n).unwrap();
        prop_assert!(kept.max_abs_diff(&a.scale(b.trace().re)) < 1e-12);
        let kept = partial_trace(&joint, Subsystem::System, 1 << n).unwrap();
        prop_assert!(kept.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn trace_sqrt_product_is_a_fidelity(seed in any::<u64>(), n in 1usize..4, rank_seed in 0usize..8) {
        let mut rng = SeededRng::new(seed, 0);
        let d = 1 << n;
        let u = haar_unitary(d, &mut rng);
        let rho = random_density(d, 1 + rank_seed % d, &mut rng).unwrap();
        let f = trace_sqrt_product(&u, &rho).unwrap();
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&f));
    }

    #[test]
    fn modes_agree(seed in any::<u64>(), alpha in 0.0f64..=1.0) {
        let mut rng = SeededRng::new(seed, 0);
        let u = haar_unitary(4, &mut rng);
        let a = ControlQubit::alpha(alpha).unwrap();
        let b = ControlQubit::bloch([0.0, 0.0, alpha]).unwrap();
        let ia = Dqc1Instance::new(u.clone(), a).unwrap();
        let ib = Dqc1Instance::new(u.clone(), b).unwrap();
        prop_assert!(evolve(&ia).max_abs_diff(&evolve(&ib)) < 1e-12);
        prop_assert!((lambda_factor(&a) - lambda_factor(&b)).abs() < 1e-12);
        let t = random_right_unitary(2, 4, &mut rng).unwrap();
        let ma = mixing_factor(&branch_coefficients(&a, &t).unwrap());
        let mb = mixing_factor(&branch_coefficients(&b, &t).unwrap());
        prop_assert!((ma - mb).abs() < 1e-12);
        let ens = fourier_ensemble(&u).unwrap();
        prop_assert!((ensemble_average(&ia, &ens).unwrap() - ensemble_average(&ib, &ens).unwrap()).abs() < 1e-12);
        let (sa, sb) = (SeededRng::new(seed, 1), SeededRng::new(seed, 1));
        let ea = estimate_trace(&ia, 1000, &mut sa.clone()).unwrap();
        let eb = estimate_trace(&ib, 1000, &mut sb.clone()).unwrap();
        if alpha > 0.0 {
            prop_assert!((ea.trace_estimate - eb.trace_estimate).norm() < 1e-12);
        }
    }
}

#[test]
fn spectral_reconstruction() {
    let mut rng = SeededRng::new(10, 0);
    for k in 0..100 {
        let d = 1 + k % 8;
        let u = haar_unitary(d, &mut rng);
        let s = eig_unitary(&u).unwrap();
        assert!(s.reconstruction_error(&u) <= 1e-10 * d as f64);
        let rho = random_density(d, 1 + k % d, &mut rng).unwrap();
        let s = eig_hermitian(&rho).unwrap();
        assert!(s.reconstruction_error(&rho) <= 1e-10 * d as f64);
    }
}

#[test]
fn closed_form_matches_simulation() {
    let mut rng = SeededRng::new(11, 0);
    for k in 0..200 {
        let n = 1 + k % 4;
        let u = haar_unitary(1 << n, &mut rng);
        let alpha = (k as f64 + 0.5) / 200.0;
        let inst = Dqc1Instance::new(u.clone(), ControlQubit::alpha(alpha).unwrap()).unwrap();
        let rho_f = evolve(&inst);
        assert!(final_state_closed(alpha, &u).unwrap().max_abs_diff(&rho_f) < 1e-12);
        let t = normalized_trace(&u);
        let rho_f = partial_trace(&rho_f, Subsystem::Control, 1 << n).unwrap();
        assert!((expect_pauli(&rho_f, Axis::X).unwrap() - alpha * t.re).abs() < 1e-12);
        assert!((expect_pauli(&rho_f, Axis::Y).unwrap() - alpha * t.im).abs() < 1e-12);
    }
}

#[test]
fn linear_entropy_first_principles() {
    let mut rng = SeededRng::new(12, 0);
    for k in 0..200 {
        let d = 1 << (1 + k % 3);
        let p = random_bloch(&mut rng);
        let u = haar_unitary(d, &mut rng);
        let rho = random_density(d, 1 + k % d, &mut rng).unwrap();
        let control = ControlQubit::bloch(p).unwrap();
        let rho_c = general_final_control(&control, &rho, &u).unwrap();
        let t = (&u * &rho).trace();
        let closed = linear_entropy_closed(p, t).unwrap();
        assert!((closed - (1.0 - rho_c.purity())).abs() < 1e-12);
    }
}

#[test]
fn branch_state_traces_to_reduced_state() {
    let mut rng = SeededRng::new(13, 0);
    for n in 1..=3 {
        let u = haar_unitary(1 << n, &mut rng);
        let phi = random_state(1 << n, &mut rng);
        let psi = branch_pure_state(&phi, &u).unwrap();
        let reduced = partial_trace(&ComplexMatrix::projector(&psi), Subsystem::System, 1 << n).unwrap();
        assert!(reduced.max_abs_diff(&reduced_system_state(&phi, &u).unwrap()) < 1e-12);
    }
}

#[test]
fn random_ensembles_respect_upper_bound() {
    let mut rng = SeededRng::new(14, 0);
    for k in 0..500 {
        let n = 1 + k % 3;
        let d = 1 << n;
        let u = haar_unitary(d, &mut rng);
        let inst = Dqc1Instance::new(u.clone(), ControlQubit::pure_zero()).unwrap();
        let t = random_right_unitary(d, 2 * d, &mut rng).unwrap();
        let ens = decompose_from_t(inst.system_state(), &t).unwrap();
        assert!(ensemble_average(&inst, &ens).unwrap() <= entpower_standard(&u) + 1e-9);
    }
}

#[test]
fn fourier_saturation_with_degenerate_spectrum() {
    let mut rng = SeededRng::new(15, 0);
    for _ in 0..10 {
        let v = haar_unitary(8, &mut rng);
        let phases = [0.3, 0.3, 0.3, -1.2, -1.2, 2.0, 2.0, 2.0].map(|p| C64::from_polar(1.0, p));
        let u = &(&v * &ComplexMatrix::from_diagonal(&phases)) * &v.adjoint();
        let inst = Dqc1Instance::new(u.clone(), ControlQubit::pure_zero()).unwrap();
        let value = ensemble_average(&inst, &fourier_ensemble(&u).unwrap()).unwrap();
        assert!((value - entpower_standard(&u)).abs() < 1e-9);
    }
}

#[test]
fn alpha_scaling_is_linear() {
    let mut rng = SeededRng::new(16, 0);
    let u = haar_unitary(4, &mut rng);
    let base = entpower_standard(&u);
    for k in 1..=10 {
        let alpha = k as f64 / 10.0;
        assert_eq!(entpower_alpha(&u, alpha).unwrap() / base, alpha * base / base);
        let inst = Dqc1Instance::new(u.clone(), ControlQubit::alpha(alpha).unwrap()).unwrap();
        let best = brute_force_entpower(&inst, 20, 8, &rng.fork(k)).unwrap();
        assert!(best <= entpower_alpha(&u, alpha).unwrap() + 1e-9);
    }
}

#[test]
fn mixing_floor_for_random_decompositions() {
    let mut rng = SeededRng::new(17, 0);
    let controls = [
        ControlQubit::Bloch([0.3, 0.4, 0.5]),
        ControlQubit::Bloch(random_bloch(&mut rng)),
        ControlQubit::Alpha(0.45),
    ];
    for control in controls {
        let floor = lambda_factor(&control);
        for _ in 0..10_000 {
            let t = random_right_unitary(2, 4, &mut rng).unwrap();
            assert!(mixing_factor(&branch_coefficients(&control, &t).unwrap()) >= floor - 1e-9);
        }
    }
}

#[test]
fn general_register_sandwich() {
    let mut rng = SeededRng::new(18, 0);
    for k in 0..200 {
        let d = 1 << (1 + k % 3);
        let u = haar_unitary(d, &mut rng);
        let rho = random_density(d, 1 + k % d, &mut rng).unwrap();
        let b = entpower_bounds(&u, &rho).unwrap();
        assert!(b.lower <= b.upper + 1e-9);
        let inst = Dqc1Instance::new(u, ControlQubit::pure_zero())
            .unwrap()
            .with_system_state(rho)
            .unwrap();
        let best = brute_force_entpower(&inst, 4, 2 * d, &rng.fork(k as u64)).unwrap();
        assert!((-1e-12..=b.upper + 1e-9).contains(&best));
        if b.lower > 1e-9 {
            assert!(best > 0.0);
        }
    }
}

#[test]
fn commuting_pairs_still_entangle() {
    // lower bound vanishes, sampled entangling power does not
    let mut rng = SeededRng::new(19, 0);
    for _ in 0..5 {
        let v = haar_unitary(4, &mut rng);
        let phases = [0.0, 0.9, -0.4, 2.2].map(|p| C64::from_polar(1.0, p));
        let u = &(&v * &ComplexMatrix::from_diagonal(&phases)) * &v.adjoint();
        let weights = [0.4, 0.3, 0.2, 0.1].map(|w| C64::new(w, 0.0));
        let rho = &(&v * &ComplexMatrix::from_diagonal(&weights)) * &v.adjoint();
        let b = entpower_bounds(&u, &rho).unwrap();
        assert!(b.lower.abs() < 1e-10);
        let inst = Dqc1Instance::new(u, ControlQubit::pure_zero())
            .unwrap()
            .with_system_state(rho)
            .unwrap();
        let best = brute_force_entpower(&inst, 50, 8, &rng.fork(0)).unwrap();
        assert!(best > 0.1 && best <= b.upper + 1e-9);
    }
}

#[test]
fn complexity_identity() {
    let mut rng = SeededRng::new(20, 0);
    for _ in 0..100 {
        let u = haar_unitary(4, &mut rng);
        let alpha = 0.05 + 0.95 * (rng.standard_normal().abs() / 3.0).min(1.0);
        let t = normalized_trace(&u);
        let (eps_x, pe_x, pe_y): (f64, f64, f64) = (0.05, 0.01, 0.02);
        // y budget chosen so both quadratures demand the same number of rounds
        let eps_y = eps_x * t.re.abs() / t.im.abs() * (pe_y.ln() / pe_x.ln()).sqrt();
        let budget = error_budget(eps_x, eps_y, pe_x, pe_y).unwrap();
        let plan = rounds_for_budget(&budget, alpha, t).unwrap();
        assert!(plan.consistent);
        let e = entpower_from_rounds(alpha, plan.budget_m, plan.rounds).unwrap();
        assert!((e - alpha * entpower_standard(&u)).abs() < 1e-12);
    }
}
