//! Golden values for the five reference gates.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use qperceptron::gatezoo::reference;
use qperceptron::perceptron::{default_initial_weights, reconstruct_raw};
use qperceptron::*;

fn ket(s: &str) -> StateVector {
    parse_state(s).unwrap()
}

/// Unrolled single-pair recurrence: after `t` steps the column hit by a basis
/// input `x` is `d + (w0 x − d)(1 − η)^t`; the other columns never change.
fn closed_form(w0: &Matrix, x_index: usize, d: &StateVector, eta: f64, t: usize) -> Matrix {
    let decay = (1.0 - eta).powi(t as i32);
    let mut rows = Vec::new();
    for i in 0..w0.rows() {
        let mut row = Vec::new();
        for j in 0..w0.cols() {
            let z = if j == x_index {
                d[i] + (w0.get(i, j) - d[i]) * decay
            } else {
                w0.get(i, j)
            };
            row.push(z);
        }
        rows.extend(row);
    }
    Matrix::new(w0.rows(), w0.cols(), rows).unwrap()
}

#[test]
fn iterative_not_and_hadamard_follow_closed_form() {
    let plus = StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
    for (x_index, d, golden) in [
        (1, ket("|0>"), [[1.0, 0.9282102], [0.0, -0.0717898]]),
        (0, plus, [[0.72813353, 0.0], [0.65634373, -1.0]]),
    ] {
        let w0 = default_initial_weights(2, 2);
        let x = basis_ket(&qperceptron::dirac::KetLabel::from_index(x_index, 1).unwrap());
        let cfg = IterativeConfig::new(0.1, 25, w0.clone()).unwrap();
        let run = iterative_train(&cfg, &x, &d).unwrap();
        for (t, w) in run.trace.iter().enumerate() {
            let oracle = closed_form(&w0, x_index, &d, 0.1, t + 1);
            assert!(w.max_abs_diff(&oracle).unwrap() <= 1e-9, "step {}", t + 1);
        }
        let golden = Matrix::from_real_rows(&golden).unwrap();
        assert!(run.weights.max_abs_diff(&golden).unwrap() <= 1e-6);
        assert!(!is_unitary(&run.weights, DEFAULT_UNITARITY_TOL));
    }
}

#[test]
fn analytic_weights_match_reference_matrices() {
    for name in ["not", "hadamard", "cnot"] {
        let spec = builtin_dataset(name).unwrap();
        let w = synthesize_weights(&spec.training_set).unwrap();
        let want = reference::analytic(name).unwrap();
        assert!(w.max_abs_diff(&want).unwrap() <= 1e-12, "{name}");
        assert!(unitarity_residual(&w) <= 1e-12, "{name}");
    }
}

#[test]
fn cswap_weight_follows_dataset() {
    let spec = builtin_dataset("cswap").unwrap();
    let w = synthesize_weights(&spec.training_set).unwrap();
    let mut want = Matrix::zeros(4, 8).entries().to_vec();
    for (i, j) in [
        (0, 0),
        (1, 1),
        (2, 2),
        (3, 3),
        (0, 4),
        (2, 5),
        (1, 6),
        (3, 7),
    ] {
        want[i * 8 + j] = ComplexScalar::new(1.0, 0.0);
    }
    assert_eq!(w, Matrix::new(4, 8, want).unwrap());

    // The printed variant differs exactly at (1,5) and (1,6).
    let printed = reference::analytic("cswap").unwrap();
    let diff = qperceptron::perceptron::mismatched_entries(&w, &printed, 1e-12).unwrap();
    assert_eq!(diff, vec![(1, 5), (1, 6)]);
}

#[test]
fn decomposed_gates_match_reference_leading_rows() {
    for (name, sigma) in [("xor", SQRT_2), ("cswap", SQRT_2)] {
        let spec = builtin_dataset(name).unwrap();
        let w = synthesize_weights(&spec.training_set).unwrap();
        let model = build_model(&w, DEFAULT_UNITARITY_TOL).unwrap();
        assert_eq!(model.mode(), Mode::Decomposed);
        for s in model.singular_values().unwrap() {
            assert!((s - sigma).abs() <= 1e-10);
        }
        // F Σ_new W_new is unique when all singular values coincide, and it
        // equals the leading rows of the reference W_new.
        let w_ref = reference::decomposed_w_new(name).unwrap();
        let m = w.rows();
        let kept = mat_mul(&rect_identity(m, w.cols()), &w_ref).unwrap();
        assert!(model.effective_operator().max_abs_diff(&kept).unwrap() <= 1e-12);
        assert!(frobenius_distance(&reconstruct_raw(&model).unwrap(), &w).unwrap() <= 1e-10);
    }
}

#[test]
fn xor_scaled_weight_has_reference_singular_values() {
    let spec = builtin_dataset("xor").unwrap();
    let w = synthesize_weights_scaled(&spec.training_set).unwrap();
    assert_eq!(w, reference::analytic("xor").unwrap());
    let svd = svd_full(&w).unwrap();
    for s in svd.sigma {
        assert!((s - FRAC_1_SQRT_2).abs() <= 1e-10);
    }
}

#[test]
fn prediction_examples() {
    let model = |name: &str| {
        let spec = builtin_dataset(name).unwrap();
        build_model(
            &synthesize_weights(&spec.training_set).unwrap(),
            DEFAULT_UNITARITY_TOL,
        )
        .unwrap()
    };
    assert_eq!(predict(&model("xor"), &ket("|01>")).unwrap(), ket("|1>"));
    assert_eq!(
        predict(&model("cswap"), &ket("|101>")).unwrap(),
        ket("|10>")
    );
    let h = predict(&model("hadamard"), &ket("|0>")).unwrap();
    assert!(
        h.max_abs_diff(&StateVector::from_real(&[FRAC_1_SQRT_2; 2]).unwrap())
            .unwrap()
            <= 1e-15
    );
    let raw = forward_raw(&model("cswap"), &ket("|000>")).unwrap();
    assert!(
        raw.max_abs_diff(&StateVector::from_real(&[FRAC_1_SQRT_2, 0.0, 0.0, 0.0]).unwrap())
            .unwrap()
            <= 1e-12
    );
}
