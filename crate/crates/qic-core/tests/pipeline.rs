//! Cross-module consistency checks: independent computation paths must agree
//! and the extraction channel must behave like a state swap.

use num_complex::Complex64;

use qic_core::config::{theta_grid, Tolerances};
use qic_core::corr::{check_equivalence, corr_state_single, VirtualQubit};
use qic_core::info::{apply_write, extract, written_qubit_bloch, WriteOp};
use qic_core::linalg::{tensor, CMat, CVec};
use qic_core::qic::{check_qic_criteria, find_qic, ghz_fixture};
use qic_core::qubit::{haar_random_state, reduced_density, StateVector};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn capsule_state_equals_first_qubit_of_factorized_frame() {
    // Two paths to the capsule's state: correlation-space expectations of the
    // conjugated triple vs the partial trace after applying the explicit
    // factorizing unitary.
    let fixture = ghz_fixture(&tol()).unwrap();
    for theta in theta_grid() {
        let written = apply_write(&fixture.state, &WriteOp::z_write(theta)).unwrap();
        let via_corr = corr_state_single(&written, &fixture.qic1);
        let mapped = written.apply_matrix(&fixture.factorizing_unitary);
        let via_trace = reduced_density(&mapped, &[0]).unwrap();
        assert!(via_corr.rho.max_abs_diff(&via_trace) < 1e-10);
        assert!((via_corr.purity - 1.0).abs() < 1e-10);
    }
}

#[test]
fn single_qubit_corr_purity_stays_in_range() {
    for seed in 0..10u64 {
        let n = 2 + (seed as usize % 4);
        let psi = haar_random_state(n, 100 + seed);
        let physical = VirtualQubit::physical(0, n, &tol()).unwrap();
        let capsule = find_qic(&psi, [0.0, 0.0, 1.0], &tol()).unwrap().qubit;
        for triple in [&physical, &capsule] {
            let purity = corr_state_single(&psi, triple).purity;
            assert!(
                (0.5 - 1e-9..=1.0 + 1e-9).contains(&purity),
                "purity {purity}"
            );
        }
    }
}

#[test]
fn readout_is_independent_of_the_probe_state() {
    let psi = haar_random_state(4, 7);
    let qic = find_qic(&psi, [0.0, 0.0, 1.0], &tol()).unwrap();
    let w = WriteOp::z_write(0.8);
    let chi_a = CVec::basis(2, 0);
    let chi_b = CVec::new(vec![c(0.48, -0.36), c(0.6, 0.528)]).normalized();
    let via_a = extract(&psi, &w, &qic.qubit, &chi_a, &tol()).unwrap();
    let via_b = extract(&psi, &w, &qic.qubit, &chi_b, &tol()).unwrap();
    for i in 0..3 {
        assert!((via_a.readout_bloch[i] - via_b.readout_bloch[i]).abs() <= 1e-8);
    }
}

#[test]
fn readout_equals_the_correlation_state() {
    // The swap transports exactly the virtual qubit's correlation state onto
    // the probe, whether or not the triple confines the write.
    let cases: Vec<(StateVector, VirtualQubit)> = vec![
        (
            haar_random_state(3, 40),
            find_qic(&haar_random_state(3, 40), [0.0, 0.0, 1.0], &tol())
                .unwrap()
                .qubit,
        ),
        (
            StateVector::bell(),
            VirtualQubit::physical(0, 2, &tol()).unwrap(),
        ),
    ];
    for (psi, triple) in &cases {
        for theta in [0.0, 0.4, 1.9] {
            let w = WriteOp::z_write(theta);
            let written = apply_write(psi, &w).unwrap();
            let expected = corr_state_single(&written, triple);
            let extraction = extract(psi, &w, triple, &CVec::basis(2, 0), &tol()).unwrap();
            assert!(extraction.readout.max_abs_diff(&expected.rho) < 1e-10);
        }
    }
}

#[test]
fn readout_traces_the_written_circle() {
    let psi = haar_random_state(5, 11);
    let qic = find_qic(&psi, [0.0, 0.0, 1.0], &tol()).unwrap();
    for theta in [0.0, 0.7, 1.4, 2.1, 2.8] {
        let extraction = extract(
            &psi,
            &WriteOp::z_write(theta),
            &qic.qubit,
            &CVec::basis(2, 0),
            &tol(),
        )
        .unwrap();
        let expected = written_qubit_bloch(&qic.capsule_state, theta);
        for (got, want) in extraction.readout_bloch.iter().zip(&expected) {
            assert!((got - want).abs() <= 1e-8);
        }
        assert!(extraction.residual_fisher.abs() <= 1e-8);
    }
    // The z component is the conserved generator expectation.
    let z0 = written_qubit_bloch(&qic.capsule_state, 0.0)[2];
    let z1 = written_qubit_bloch(&qic.capsule_state, 1.0)[2];
    assert!((z0 - z1).abs() < 1e-12);
}

#[test]
fn equivalence_invariant_under_generic_rotation() {
    // Rotate a capsule triple by an exact SO(3) matrix (Rodrigues form) and
    // confirm the equivalence verdict both ways.
    let psi = haar_random_state(3, 19);
    let base = find_qic(&psi, [0.0, 0.0, 1.0], &tol()).unwrap().qubit;

    let axis = {
        let raw: [f64; 3] = [1.0, -2.0, 0.5];
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        [raw[0] / norm, raw[1] / norm, raw[2] / norm]
    };
    let angle: f64 = 1.234;
    let (sin, cos) = angle.sin_cos();
    let mut rot = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let eps_term: f64 = match (i, j) {
                (0, 1) => -axis[2],
                (0, 2) => axis[1],
                (1, 0) => axis[2],
                (1, 2) => -axis[0],
                (2, 0) => -axis[1],
                (2, 1) => axis[0],
                _ => 0.0,
            };
            let delta = if i == j { 1.0 } else { 0.0 };
            rot[i][j] = cos * delta + sin * eps_term + (1.0 - cos) * axis[i] * axis[j];
        }
    }

    let mut rotated_ops = Vec::with_capacity(3);
    for row in rot {
        let mut op = CMat::zeros(base.dim(), base.dim());
        for (coeff, component) in row.iter().zip(base.ops()) {
            op = op.add(&component.scaled(c(*coeff, 0.0)));
        }
        rotated_ops.push(op);
    }
    let rotated = VirtualQubit::new(
        3,
        [
            rotated_ops[0].clone(),
            rotated_ops[1].clone(),
            rotated_ops[2].clone(),
        ],
        "rotated capsule",
        &tol(),
    )
    .unwrap();

    let forward = check_equivalence(&base, &rotated, &tol());
    let backward = check_equivalence(&rotated, &base, &tol());
    assert!(forward.equivalent, "{forward:?}");
    assert!(backward.equivalent, "{backward:?}");
}

#[test]
fn tensor_is_associative() {
    // Exact on operator entries drawn from {0, ±1, ±i}.
    let sx = qic_core::pauli::sigma_x();
    let sy = qic_core::pauli::sigma_y();
    let sz = qic_core::pauli::sigma_z();
    let left = tensor(&tensor(&sx, &sy).unwrap(), &sz).unwrap();
    let right = tensor(&sx, &tensor(&sy, &sz).unwrap()).unwrap();
    assert!(left.max_abs_diff(&right) == 0.0);

    // Within an ulp for generic entries.
    let a = CMat::from_fn(2, 2, |i, j| c(0.3 * i as f64 - 0.7, 0.2 * j as f64));
    let b = CMat::from_fn(3, 2, |i, j| c(0.1 + i as f64 * j as f64, -0.4));
    let d = CMat::from_fn(2, 3, |i, j| c(1.1 * j as f64, 0.9 - i as f64));
    let left = tensor(&tensor(&a, &b).unwrap(), &d).unwrap();
    let right = tensor(&a, &tensor(&b, &d).unwrap()).unwrap();
    assert!(left.max_abs_diff(&right) < 1e-15);
}

#[test]
fn tilted_axis_capsule_on_larger_state() {
    let axis = [1.0 / 3f64.sqrt(), 1.0 / 3f64.sqrt(), 1.0 / 3f64.sqrt()];
    let psi = haar_random_state(5, 23);
    let qic = find_qic(&psi, axis, &tol()).unwrap();
    let criteria = check_qic_criteria(&psi, axis, &qic, &tol()).unwrap();
    assert!(criteria.passes, "{criteria:?}");
}

#[test]
fn antipodal_axis_capsule_passes() {
    // −ẑ exercises the β = π branch of the frame rotation end to end.
    let axis = [0.0, 0.0, -1.0];
    let psi = haar_random_state(3, 29);
    let qic = find_qic(&psi, axis, &tol()).unwrap();
    let criteria = check_qic_criteria(&psi, axis, &qic, &tol()).unwrap();
    assert!(criteria.passes, "{criteria:?}");
}
