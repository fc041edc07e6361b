//! Built-in training sets for five gates and a truth-table checker.

use crate::dirac::{basis_ket, format_state, parse_state, KetLabel};
use crate::error::{Error, Result};
use crate::linalg::StateVector;
use crate::perceptron::{
    model_residuals, predict_with, Mode, PerceptronModel, TrainingPair, TrainingSet,
};

pub const BUILTIN_NAMES: [&str; 5] = ["not", "hadamard", "cnot", "cswap", "xor"];

/// Minimum fidelity for a truth-table row to pass.
pub const PASS_FIDELITY: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    pub name: &'static str,
    pub training_set: TrainingSet,
    pub expected_mode: Mode,
}

const NOT_PAIRS: &[(&str, &str)] = &[("|0>", "|1>"), ("|1>", "|0>")];

const HADAMARD_PAIRS: &[(&str, &str)] = &[
    ("|0>", "0.70710678118654752*|0> + 0.70710678118654752*|1>"),
    ("|1>", "0.70710678118654752*|0> - 0.70710678118654752*|1>"),
];

const CNOT_PAIRS: &[(&str, &str)] = &[
    ("|00>", "|00>"),
    ("|01>", "|01>"),
    ("|10>", "|11>"),
    ("|11>", "|10>"),
];

/// Three qubits in, two out: if the first bit is set, swap the other two.
const CSWAP_PAIRS: &[(&str, &str)] = &[
    ("|000>", "|00>"),
    ("|001>", "|01>"),
    ("|010>", "|10>"),
    ("|011>", "|11>"),
    ("|100>", "|00>"),
    ("|101>", "|10>"),
    ("|110>", "|01>"),
    ("|111>", "|11>"),
];

const XOR_PAIRS: &[(&str, &str)] = &[
    ("|00>", "|0>"),
    ("|01>", "|1>"),
    ("|10>", "|1>"),
    ("|11>", "|0>"),
];

fn training_set(pairs: &[(&str, &str)]) -> TrainingSet {
    let pairs = pairs
        .iter()
        .map(|(x, y)| {
            let x = parse_state(x).expect("builtin input parses");
            // Hadamard targets are written to 17 digits; renormalize so the
            // pair invariant holds to machine precision.
            let y = parse_state(y)
                .expect("builtin target parses")
                .normalize()
                .expect("nonzero");
            TrainingPair::new(x, y).expect("builtin pair is normalized")
        })
        .collect();
    TrainingSet::new(pairs).expect("builtin set is consistent")
}

/// Training set for one of [`BUILTIN_NAMES`].
pub fn builtin_dataset(name: &str) -> Result<GateSpec> {
    let (name, pairs, expected_mode) = match name.to_ascii_lowercase().as_str() {
        "not" => ("not", NOT_PAIRS, Mode::Unitary),
        "hadamard" => ("hadamard", HADAMARD_PAIRS, Mode::Unitary),
        "cnot" => ("cnot", CNOT_PAIRS, Mode::Unitary),
        "cswap" => ("cswap", CSWAP_PAIRS, Mode::Decomposed),
        "xor" => ("xor", XOR_PAIRS, Mode::Decomposed),
        _ => {
            return Err(Error::NotFound {
                kind: "gate",
                name: name.into(),
                valid: BUILTIN_NAMES.iter().map(|s| s.to_string()).collect(),
            })
        }
    };
    Ok(GateSpec {
        name,
        training_set: training_set(pairs),
        expected_mode,
    })
}

/// Worked values used by the demo's comparison table.
pub mod reference {
    use std::f64::consts::FRAC_1_SQRT_2 as R;

    use crate::linalg::Matrix;

    /// Single-pair iterative run: `(pair index, weights after 25 steps at η = 0.1)`
    /// starting from `[[1, 0], [0, −1]]`.
    pub fn iterative(name: &str) -> Option<(usize, Matrix)> {
        let rows: [[f64; 2]; 2] = match name {
            "not" => [[1.0, 0.9282102], [0.0, -0.0717898]],
            "hadamard" => [[0.72813353, 0.0], [0.65634373, -1.0]],
            _ => return None,
        };
        let pair = if name == "not" { 1 } else { 0 };
        Some((pair, Matrix::from_real_rows(&rows).unwrap()))
    }

    /// Analytic weight matrices as commonly printed. The controlled-swap
    /// matrix carries a known transcription error in rows 1 and 2
    /// (column 5 set twice, column 6 empty); comparisons against it are
    /// expected to flag those entries.
    pub fn analytic(name: &str) -> Option<Matrix> {
        let m = match name {
            "not" => Matrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]),
            "hadamard" => Matrix::from_real_rows(&[[R, R], [R, -R]]),
            "cnot" => Matrix::from_real_rows(&[
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [0.0, 0.0, 1.0, 0.0],
            ]),
            "cswap" => Matrix::from_real_rows(&[
                [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
            ]),
            // Scaled by 1/√4.
            "xor" => Matrix::from_real_rows(&[[0.5, 0.0, 0.0, 0.5], [0.0, 0.5, 0.5, 0.0]]),
            _ => return None,
        };
        Some(m.unwrap())
    }

    /// `W_new` of the decomposed gates. Only its leading rows (those kept by
    /// `Σ_new`) are determined uniquely; the rest span a degenerate subspace.
    pub fn decomposed_w_new(name: &str) -> Option<Matrix> {
        let m = match name {
            "xor" => Matrix::from_real_rows(&[
                [R, 0.0, 0.0, R],
                [0.0, R, R, 0.0],
                [0.0, -R, R, 0.0],
                [-R, 0.0, 0.0, R],
            ]),
            "cswap" => Matrix::from_real_rows(&[
                [R, 0.0, 0.0, 0.0, R, 0.0, 0.0, 0.0],
                [0.0, R, 0.0, 0.0, 0.0, 0.0, R, 0.0],
                [0.0, 0.0, R, 0.0, 0.0, R, 0.0, 0.0],
                [0.0, 0.0, 0.0, R, 0.0, 0.0, 0.0, R],
                [-R, 0.0, 0.0, 0.0, R, 0.0, 0.0, 0.0],
                [0.0, 0.0, -R, 0.0, 0.0, R, 0.0, 0.0],
                [0.0, -R, 0.0, 0.0, 0.0, 0.0, R, 0.0],
                [0.0, 0.0, 0.0, -R, 0.0, 0.0, 0.0, R],
            ]),
            _ => return None,
        };
        Some(m.unwrap())
    }
}

/// `|⟨a|b⟩|²` for normalized states.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::dim("fidelity", a.dim(), b.dim()));
    }
    for v in [a, b] {
        if !v.is_normalized() {
            return Err(Error::Precondition(format!(
                "fidelity needs normalized states (squared norm {:.12})",
                v.norm_sqr()
            )));
        }
    }
    Ok(a.inner(b)?.norm_sqr())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairRecord {
    pub input: String,
    pub expected: StateVector,
    pub predicted: StateVector,
    pub fidelity: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub records: Vec<PairRecord>,
    pub pass_count: usize,
    pub total: usize,
    pub raw_residual: f64,
    pub f_residual: f64,
    pub w_new_residual: f64,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.pass_count == self.total
    }
}

fn describe(v: &StateVector) -> String {
    // Basis inputs print as their label; anything else as a full state.
    if let Some(n) = crate::dirac::qubit_count(v.dim()) {
        for idx in 0..v.dim() {
            let label = KetLabel::from_index(idx, n).expect("index fits");
            if basis_ket(&label) == *v {
                return format!("|{label}>");
            }
        }
    }
    format_state(v, 1e-12).unwrap_or_else(|_| format!("{v:?}"))
}

/// Runs [`predict`](crate::perceptron::predict) on every pair and scores it
/// by fidelity against the target.
pub fn verify_truth_table(model: &PerceptronModel, ts: &TrainingSet) -> Result<VerificationReport> {
    verify_truth_table_with(model, ts, false)
}

/// Predicted outputs are renormalized before scoring; a zero prediction fails.
pub fn verify_truth_table_with(
    model: &PerceptronModel,
    ts: &TrainingSet,
    force_measure: bool,
) -> Result<VerificationReport> {
    if ts.input_dim() != model.input_dim() || ts.target_dim() != model.output_dim() {
        return Err(Error::dim(
            "verify_truth_table",
            format!("model {}->{}", model.input_dim(), model.output_dim()),
            format!("dataset {}->{}", ts.input_dim(), ts.target_dim()),
        ));
    }
    let mut records = Vec::with_capacity(ts.len());
    for pair in ts.pairs() {
        let predicted = predict_with(model, &pair.input, force_measure)?;
        let fid = match predicted.normalize() {
            Ok(p) => fidelity(&p, &pair.target)?,
            Err(_) => 0.0,
        };
        records.push(PairRecord {
            input: describe(&pair.input),
            expected: pair.target.clone(),
            predicted,
            fidelity: fid,
            pass: fid >= PASS_FIDELITY,
        });
    }
    let (raw_residual, f_residual, w_new_residual) = model_residuals(model);
    Ok(VerificationReport {
        pass_count: records.iter().filter(|r| r.pass).count(),
        total: records.len(),
        records,
        raw_residual,
        f_residual,
        w_new_residual,
    })
}
