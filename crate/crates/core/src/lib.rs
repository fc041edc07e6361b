//! Quantum perceptron with closed-form weights.
//!
//! Training pairs of kets are turned into a weight matrix by summing
//! `|y⟩ ⊗ x⁺` over the pairs, where `x⁺` is the Moore-Penrose pseudoinverse
//! of the input. Weights that come out non-unitary (dissipative maps such as
//! XOR or a controlled swap onto fewer qubits) are factored with an SVD; the
//! singular values are replaced by ones, which leaves two unitary factors and
//! a rectangular identity between them. A threshold measurement then reads
//! off the basis output.
//!
//! ```
//! use qperceptron::{builtin_dataset, synthesize_weights, build_model, predict, parse_state};
//!
//! let xor = builtin_dataset("xor").unwrap();
//! let w = synthesize_weights(&xor.training_set).unwrap();
//! let model = build_model(&w, 1e-10).unwrap();
//! let out = predict(&model, &parse_state("|10>").unwrap()).unwrap();
//! assert_eq!(out, parse_state("|1>").unwrap());
//! ```

pub mod decomp;
pub mod dirac;
pub mod error;
pub mod gatezoo;
pub mod linalg;
pub mod perceptron;

pub use decomp::{
    diag_rect, orthonormal_complete, pinv_matrix, pinv_vector, rect_identity, svd_full, SvdResult,
};
pub use dirac::{basis_ket, format_state, parse_state, uniform_superposition, KetLabel};
pub use error::{Error, Result};
pub use gatezoo::{
    builtin_dataset, fidelity, verify_truth_table, verify_truth_table_with, GateSpec, PairRecord,
    VerificationReport, BUILTIN_NAMES,
};
pub use linalg::{
    apply, conj_transpose, frobenius_distance, is_unitary, kronecker, mat_mul, outer_product,
    unitarity_residual, ComplexScalar, Matrix, StateVector, DEFAULT_UNITARITY_TOL,
};
pub use perceptron::{
    build_model, classical_forward, classical_train, decompose_model, forward_raw, iterative_step,
    iterative_train, measure, predict, predict_with, synthesize_weights, synthesize_weights_scaled,
    ClassicalPerceptron, IterativeConfig, IterativeRun, Mode, PerceptronModel, TrainingPair,
    TrainingSet,
};
