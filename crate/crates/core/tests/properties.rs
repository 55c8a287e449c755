//! Property tests of the simulator invariants, checked against the oracles in
//! `common`.

mod common;

use std::f64::consts::PI;

use common::*;
use itertools::Itertools;
use loswap::components::{u_crossing, u_mzi, u_rbs, u_rbs_physical};
use loswap::dualrail::{qubit_permutation_matrix, swap_matrix};
use loswap::fock::{evolve_via_permanents, evolve_with, SimOptions};
use loswap::router::emit_netlist_uniform;
use loswap::*;
use proptest::prelude::*;
use rand::Rng as _;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn arb_complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| c(re, im))
}

fn arb_matrix(max: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(arb_complex(), n * n).prop_map(move |d| CMatrix::new(n, n, d).unwrap())
    })
}

fn arb_qubit() -> impl Strategy<Value = Vec<Complex64>> {
    (arb_complex(), arb_complex()).prop_filter("non-zero", |(a, b)| a.norm_sqr() + b.norm_sqr() > 1e-3).prop_map(
        |(a, b)| {
            let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
            vec![a / n, b / n]
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ryser_matches_permutation_sum(m in arb_matrix(6)) {
        let fast = m.permanent().unwrap();
        let slow = naive_permanent(&m);
        prop_assert!((fast - slow).norm() <= 1e-10 * slow.norm().max(1.0));
    }

    #[test]
    fn permanent_of_matrix_with_zero_row_vanishes(m in arb_matrix(5), row in 0usize..5) {
        let n = m.rows();
        let row = row % n;
        let mut z = m.clone();
        for col in 0..n {
            z[(row, col)] = Complex64::new(0.0, 0.0);
        }
        prop_assert_eq!(z.permanent().unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn permanent_is_invariant_under_transpose(m in arb_matrix(5)) {
        let d = m.permanent().unwrap() - m.transpose().permanent().unwrap();
        prop_assert!(d.norm() < 1e-10);
    }

    #[test]
    fn global_phase_is_ignored(seed in any::<u64>(), phase in -PI..PI) {
        let u = random_unitary(&mut rng(seed), 4);
        let v = u.scale(Complex64::from_polar(1.0, phase));
        prop_assert!(v.equal_up_to_global_phase(&u, 1e-12).unwrap());
        prop_assert!(u.equal_up_to_global_phase(&v, 1e-12).unwrap());
    }

    #[test]
    fn matmul_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, m) = (random_matrix(&mut r, 4), random_matrix(&mut r, 4), random_matrix(&mut r, 4));
        let left = a.matmul(&b).unwrap().matmul(&m).unwrap();
        let right = a.matmul(&b.matmul(&m).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() < 1e-12);
    }

    #[test]
    fn lossless_circuits_compile_to_unitaries(seed in any::<u64>(), width in 1usize..7, len in 0usize..25) {
        let circuit = random_circuit(&mut rng(seed), width, len);
        let u = circuit.compile().unwrap().unitary;
        prop_assert!(u.is_unitary(1e-12).unwrap());
    }

    #[test]
    fn compile_order_is_last_element_on_the_left(seed in any::<u64>()) {
        let mut r = rng(seed);
        let first = random_circuit(&mut r, 4, 5);
        let second = random_circuit(&mut r, 4, 5);
        let mut both = first.clone();
        both.extend(&second).unwrap();
        let expect = second.compile().unwrap().unitary.matmul(&first.compile().unwrap().unitary).unwrap();
        prop_assert!(both.compile().unwrap().unitary.max_abs_diff(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn evolution_conserves_norm_and_photons(seed in any::<u64>(), width in 2usize..5, photons in 1usize..4) {
        let mut r = rng(seed);
        let u = random_unitary(&mut r, width);
        let basis = enumerate_basis(width, photons).unwrap();
        let amps = random_normalized(&mut r, basis.len());
        let terms: Vec<_> = basis.into_iter().zip(amps).collect();
        let input = PhotonicState::from_terms(width, photons, &terms).unwrap();
        let out = evolve(&u, &input).unwrap();
        prop_assert_eq!(out.photons(), photons);
        prop_assert!(out.amplitude_map().iter().all(|(f, _)| f.photons() == photons));
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn evolution_composes(seed in any::<u64>(), photons in 1usize..4) {
        let mut r = rng(seed);
        let (u1, u2) = (random_unitary(&mut r, 4), random_unitary(&mut r, 4));
        let basis = enumerate_basis(4, photons).unwrap();
        let input = PhotonicState::from_fock(&basis[r.random_range(0..basis.len())]).unwrap();
        let stepwise = evolve(&u2, &evolve(&u1, &input).unwrap()).unwrap();
        let direct = evolve(&u2.matmul(&u1).unwrap(), &input).unwrap();
        prop_assert!(max_diff(stepwise.amplitudes(), direct.amplitudes()) < 1e-10);
    }

    #[test]
    fn single_photon_fast_path_matches_permanents(seed in any::<u64>(), width in 1usize..7) {
        let mut r = rng(seed);
        let u = random_unitary(&mut r, width);
        let terms: Vec<_> = (0..width).map(|k| FockState::single(width, k)).zip(random_normalized(&mut r, width)).collect();
        let input = PhotonicState::from_terms(width, 1, &terms).unwrap();
        let fast = evolve_with(&u, &input, &SimOptions::default()).unwrap();
        let slow = evolve_via_permanents(&u, &input, &SimOptions::default()).unwrap();
        prop_assert!(max_diff(fast.amplitudes(), slow.amplitudes()) < 1e-12);
    }

    #[test]
    fn encode_decode_round_trip(seed in any::<u64>(), qubits in 1usize..4) {
        let register = DualRailRegister::consecutive(qubits).unwrap();
        let logical = random_normalized(&mut rng(seed), 1 << qubits);
        let state = encode(&logical, &register).unwrap();
        let (back, success) = decode(&state, &register).unwrap();
        prop_assert!((success - 1.0).abs() < 1e-12);
        prop_assert!(max_diff(&back, &logical) < 1e-12);
    }

    #[test]
    fn swap_exchanges_product_states(a in arb_qubit(), b in arb_qubit()) {
        let register = DualRailRegister::consecutive(2).unwrap();
        let gate = build_gate(&Settings64::swap(), (0, 1), &register).unwrap();
        let u = gate.compile().unwrap().unitary;
        let out = evolve(&u, &encode(&kron(&a, &b), &register).unwrap()).unwrap();
        let (logical, success) = decode(&out, &register).unwrap();
        prop_assert!((success - 1.0).abs() < 1e-10);
        prop_assert!(max_diff(&logical, &kron(&b, &a)) < 1e-10);
    }

    #[test]
    fn identity_preset_leaves_states_alone(seed in any::<u64>()) {
        let register = DualRailRegister::consecutive(2).unwrap();
        let gate = build_gate(&Settings64::identity(), (0, 1), &register).unwrap();
        let logical = random_normalized(&mut rng(seed), 4);
        let out = evolve(&gate.compile().unwrap().unitary, &encode(&logical, &register).unwrap()).unwrap();
        let (back, _) = decode(&out, &register).unwrap();
        prop_assert!(max_diff(&back, &logical) < 1e-10);
    }

    #[test]
    fn physical_rbs_matches_canonical_form(theta in -PI..PI, phi in -PI..PI) {
        // MZI then an external shifter on the second arm, compiled as a circuit
        let circuit = Circuit64::new(2).unwrap()
            .with(Component::mzi(0, 1, theta)).unwrap()
            .with(Component::phase_shifter(1, phi)).unwrap();
        let physical = circuit.compile().unwrap().unitary;
        prop_assert!(physical.equal_up_to_global_phase(&u_rbs(theta, phi), 1e-12).unwrap());
        prop_assert!(physical.max_abs_diff(&u_rbs_physical(theta, phi)).unwrap() < 1e-12);
    }

    #[test]
    fn routing_realizes_random_permutations(image in (6usize..=7).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())) {
        let target = Permutation::new(image.clone()).unwrap();
        let net = synthesize(&target);
        prop_assert_eq!(net.realized(), target.clone());
        prop_assert_eq!(net.swap_count(), bubble_sort_swaps(&invert(&image)));
        prop_assert!(net.depth() <= image.len());
    }

    #[test]
    fn netlist_round_trips(seed in any::<u64>(), width in 1usize..6, len in 0usize..15, lossy in any::<bool>()) {
        let mut r = rng(seed);
        let mut circuit = Circuit64::new(width).unwrap();
        for part in random_circuit(&mut r, width, len).elements() {
            let loss = if lossy { r.random_range(0.0..0.5) } else { 0.0 };
            circuit.push(part.clone().with_loss(loss)).unwrap();
        }
        let text = serialize(&circuit);
        let parsed: Circuit64 = parse_netlist(&text).unwrap();
        prop_assert_eq!(serialize(&parsed), text);
        let (a, b) = (circuit.compile().unwrap(), parsed.compile().unwrap());
        prop_assert!(a.transfer.max_abs_diff(&b.transfer).unwrap() < 1e-12);
    }
}

fn invert(image: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; image.len()];
    for (i, &p) in image.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

#[test]
fn evolve_matches_creation_operator_expansion() {
    let mut r = rng(11);
    for width in 1..=4 {
        for photons in 1..=3 {
            for _ in 0..5 {
                let u = random_unitary(&mut r, width);
                for input in enumerate_basis(width, photons).unwrap() {
                    let expect = creation_operator_evolve(&u, &input);
                    let out = evolve(&u, &PhotonicState::from_fock(&input).unwrap()).unwrap();
                    for (fock, amp) in out.amplitude_map() {
                        let want = expect.get(fock.occupations()).copied().unwrap_or_default();
                        assert!((amp - want).norm() < 1e-10, "{input} -> {fock}: {amp} vs {want}");
                    }
                }
            }
        }
    }
}

#[test]
fn hong_ou_mandel_dip() {
    let circuit = Circuit64::new(2).unwrap().with(Component::coupler(0, 1, 0.5)).unwrap();
    let out =
        evolve(&circuit.compile().unwrap().unitary, &PhotonicState::from_fock(&FockState::new(vec![1, 1])).unwrap())
            .unwrap();
    assert!(out.amplitude(&FockState::new(vec![1, 1])).norm() < 1e-12);
    assert!((out.amplitude(&FockState::new(vec![2, 0])).norm_sqr() - 0.5).abs() < 1e-12);
}

#[test]
fn swap_fixes_symmetric_bell_state() {
    let register = DualRailRegister::consecutive(2).unwrap();
    let u = build_gate(&Settings64::swap(), (0, 1), &register).unwrap().compile().unwrap().unitary;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for bell in [[s, 0.0, 0.0, s], [0.0, s, s, 0.0]] {
        let logical: Vec<_> = bell.iter().map(|&x| c(x, 0.0)).collect();
        let (out, _) = decode(&evolve(&u, &encode(&logical, &register).unwrap()).unwrap(), &register).unwrap();
        assert!(max_diff(&out, &logical) < 1e-10);
    }
    // the singlet picks up a sign
    let singlet = [c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)];
    let (out, _) = decode(&evolve(&u, &encode(&singlet, &register).unwrap()).unwrap(), &register).unwrap();
    let negated: Vec<_> = singlet.iter().map(|z| -z).collect();
    assert!(max_diff(&out, &negated) < 1e-10);
}

#[test]
fn swap_twice_is_identity() {
    let register = DualRailRegister::consecutive(2).unwrap();
    let gate = build_gate(&Settings64::swap(), (0, 1), &register).unwrap();
    let mut twice = gate.clone();
    twice.extend(&gate).unwrap();
    let m = logical_matrix(&twice, &register).unwrap().matrix;
    assert!(m.equal_up_to_global_phase(&CMatrix::identity(4), 1e-12).unwrap());
}

#[test]
fn mzi_crossing_style_keeps_both_presets() {
    let register = DualRailRegister::consecutive(2).unwrap();
    for mode in [GateMode::Swap, GateMode::Identity] {
        let settings = Settings64::preset(mode).with_crossing_style(CrossingStyle::MziThetaZero);
        let g = logical_matrix(&build_gate(&settings, (0, 1), &register).unwrap(), &register).unwrap();
        assert!(g.matrix.equal_up_to_global_phase(&mode.target(), 1e-12).unwrap(), "{mode:?}");
    }
}

#[test]
fn mzi_at_zero_is_a_crossing_up_to_phase() {
    assert!(u_mzi(0.0f64).equal_up_to_global_phase(&u_crossing(), 1e-12).unwrap());
}

#[test]
fn routing_is_exhaustive_up_to_five_qubits() {
    for n in 1..=5 {
        for image in (0..n).permutations(n) {
            let target = Permutation::new(image.clone()).unwrap();
            let net = synthesize(&target);
            assert_eq!(net.realized(), target);
            assert_eq!(net.swap_count(), target.inversions());
            assert_eq!(net.swap_count(), bubble_sort_swaps(&invert(&image)));
            assert!(net.layers().iter().all(|l| !l.is_empty()));
        }
    }
}

#[test]
fn emitted_networks_act_as_qubit_permutations() {
    let mut r = rng(5);
    for n in 2..=3 {
        for image in (0..n).permutations(n) {
            let net = synthesize(&Permutation::new(image.clone()).unwrap());
            let circuit = emit_netlist_uniform(&net, &Settings64::swap()).unwrap();
            let register = DualRailRegister::consecutive(n).unwrap();
            let g = logical_matrix(&circuit, &register).unwrap();
            let expect = qubit_permutation_matrix::<f64>(&image);
            assert!(g.matrix.max_abs_diff(&expect).unwrap() < 1e-10, "{image:?}");

            let parts: Vec<_> = (0..n).map(|_| random_normalized(&mut r, 2)).collect();
            let out = g.apply(&kron_all(&parts)).unwrap();
            assert!(max_diff(&out, &permuted_product(&parts, &image)) < 1e-10, "{image:?}");
        }
    }
}

#[test]
fn logical_swap_matches_reference_matrix() {
    let register = DualRailRegister::consecutive(2).unwrap();
    let g = logical_matrix(&build_gate(&Settings64::swap(), (0, 1), &register).unwrap(), &register).unwrap();
    let expect = CMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);
    assert!(g.matrix.equal_up_to_global_phase(&expect, 1e-12).unwrap());
    assert!(swap_matrix::<f64>().max_abs_diff(&expect).unwrap() == 0.0);
}

#[test]
fn single_precision_aliases_work() {
    let register = DualRailRegister::consecutive(2).unwrap();
    let g: Gate32 = logical_matrix(&build_gate(&Settings32::swap(), (0, 1), &register).unwrap(), &register).unwrap();
    assert!(g.matrix.equal_up_to_global_phase(&GateMode::Swap.target(), 1e-5).unwrap());
    assert!((g.success_probability - 1.0).abs() < 1e-5);
    let m = CMatrix32::identity(3);
    assert!((m.permanent().unwrap() - Complex32::new(1.0, 0.0)).norm() < 1e-6);
    let circuit: Circuit32 = parse_netlist("modes 2\ndc 1 2 0.5\n").unwrap();
    assert!(circuit.compile().unwrap().unitary.is_unitary(1e-5).unwrap());
}
