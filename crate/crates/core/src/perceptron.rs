//! Quantum perceptron: analytic weight synthesis, the iterative learning
//! rule, SVD unitarization, thresholded measurement and prediction. A
//! classical ±1 perceptron is included as a baseline.
//!
//! Analytic training sums one outer product per pair,
//!
//! ```text
//! W = Σ_j |y_j⟩ ⊗ x_j⁺        x⁺ = x† / (x†x)
//! ```
//!
//! If `W` is unitary it is used as is. Otherwise `W = U Σ V†` is decomposed
//! and the model keeps `F = U`, `W_new = V†` and replaces `Σ` by the
//! rectangular identity of the same shape, so evaluation is
//! `M(F · Σ_new · W_new |x⟩)` with `M` the componentwise threshold.

use log::warn;

use crate::decomp::{pinv_vector, rect_identity, svd_full};
use crate::error::{Error, Result};
use crate::linalg::{
    apply, is_unitary, mat_mul, outer_product, unitarity_residual, Matrix, StateVector, ONE, ZERO,
};

/// Default threshold of the measurement map.
pub const DEFAULT_THRESHOLD: f64 = 0.5;
pub const DEFAULT_ETA: f64 = 0.1;
pub const DEFAULT_ITERATIONS: usize = 25;

/// One training example. Both kets are normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingPair {
    pub input: StateVector,
    pub target: StateVector,
}

impl TrainingPair {
    pub fn new(input: StateVector, target: StateVector) -> Result<Self> {
        for (what, v) in [("input", &input), ("target", &target)] {
            if !v.is_normalized() {
                return Err(Error::Precondition(format!(
                    "{what} state is not normalized (squared norm {:.12})",
                    v.norm_sqr()
                )));
            }
        }
        Ok(TrainingPair { input, target })
    }
}

/// Non-empty ordered list of pairs with a common input dimension and a common
/// target dimension. The two dimensions may differ.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    pairs: Vec<TrainingPair>,
}

impl TrainingSet {
    pub fn new(pairs: Vec<TrainingPair>) -> Result<Self> {
        let Some(first) = pairs.first() else {
            return Err(Error::Precondition("training set is empty".into()));
        };
        let (din, dout) = (first.input.dim(), first.target.dim());
        for (k, p) in pairs.iter().enumerate() {
            if p.input.dim() != din {
                return Err(Error::dim(
                    "TrainingSet::new",
                    format!("input dim {din}"),
                    format!("pair {k} input dim {}", p.input.dim()),
                ));
            }
            if p.target.dim() != dout {
                return Err(Error::dim(
                    "TrainingSet::new",
                    format!("target dim {dout}"),
                    format!("pair {k} target dim {}", p.target.dim()),
                ));
            }
        }
        let ts = TrainingSet { pairs };
        for (a, b) in ts.conflicting_duplicates() {
            warn!("pairs {a} and {b} share an input but have different targets; exact interpolation is impossible");
        }
        Ok(ts)
    }

    pub fn pairs(&self) -> &[TrainingPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.pairs[0].input.dim()
    }

    pub fn target_dim(&self) -> usize {
        self.pairs[0].target.dim()
    }

    /// Index pairs `(a, b)` with equal inputs but different targets.
    pub fn conflicting_duplicates(&self) -> Vec<(usize, usize)> {
        const EQ: f64 = 1e-12;
        let mut out = Vec::new();
        for a in 0..self.pairs.len() {
            for b in a + 1..self.pairs.len() {
                let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
                let same_in = pa.input.max_abs_diff(&pb.input).is_ok_and(|d| d <= EQ);
                let same_out = pa.target.max_abs_diff(&pb.target).is_ok_and(|d| d <= EQ);
                if same_in && !same_out {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// `Σ_j target_j ⊗ pinv(input_j)`, shape `target_dim x input_dim`.
pub fn synthesize_weights(ts: &TrainingSet) -> Result<Matrix> {
    let mut w = Matrix::zeros(ts.target_dim(), ts.input_dim());
    for pair in ts.pairs() {
        let dual = pinv_vector(&pair.input)?;
        w = w.add(&outer_product(&pair.target, &dual)?)?;
    }
    Ok(w)
}

/// [`synthesize_weights`] times `1/√N` for `N` pairs, the normalization a
/// uniform superposition of the inputs would contribute.
pub fn synthesize_weights_scaled(ts: &TrainingSet) -> Result<Matrix> {
    Ok(synthesize_weights(ts)?.scale(1.0 / (ts.len() as f64).sqrt()))
}

/// One application of `w ← w + η (d − w x) x†`.
pub fn iterative_step(w: &Matrix, x: &StateVector, d: &StateVector, eta: f64) -> Result<Matrix> {
    if w.rows() != d.dim() {
        return Err(Error::dim(
            "iterative_step",
            format!("{}x{} weights", w.rows(), w.cols()),
            format!("target of dim {}", d.dim()),
        ));
    }
    let err = d.sub(&apply(w, x)?)?;
    w.add(&outer_product(&err.scale(eta), &x.dagger())?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterativeConfig {
    pub eta: f64,
    pub iterations: usize,
    pub initial_weights: Matrix,
}

impl IterativeConfig {
    pub fn new(eta: f64, iterations: usize, initial_weights: Matrix) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::Precondition(format!(
                "learning rate must lie in (0, 1], got {eta}"
            )));
        }
        Ok(IterativeConfig {
            eta,
            iterations,
            initial_weights,
        })
    }

    /// Default rate and iteration count with [`default_initial_weights`].
    pub fn with_defaults(rows: usize, cols: usize) -> Self {
        IterativeConfig {
            eta: DEFAULT_ETA,
            iterations: DEFAULT_ITERATIONS,
            initial_weights: default_initial_weights(rows, cols),
        }
    }
}

/// Diagonal `+1, −1, +1, ...`; for 2x2 this is `[[1, 0], [0, −1]]`.
pub fn default_initial_weights(rows: usize, cols: usize) -> Matrix {
    let mut w = Matrix::zeros(rows, cols);
    for i in 0..rows.min(cols) {
        w.set(i, i, if i % 2 == 0 { ONE } else { -ONE });
    }
    w
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterativeRun {
    pub weights: Matrix,
    /// Weights after every step; `trace[t]` is the matrix after `t + 1` steps.
    pub trace: Vec<Matrix>,
}

/// Repeats [`iterative_step`] on a single `(x, d)` pair.
pub fn iterative_train(
    cfg: &IterativeConfig,
    x: &StateVector,
    d: &StateVector,
) -> Result<IterativeRun> {
    let mut w = cfg.initial_weights.clone();
    let mut trace = Vec::with_capacity(cfg.iterations);
    for _ in 0..cfg.iterations {
        w = iterative_step(&w, x, d, cfg.eta)?;
        trace.push(w.clone());
    }
    Ok(IterativeRun { weights: w, trace })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Unitary,
    Decomposed,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Unitary => "Unitary",
            Mode::Decomposed => "Decomposed",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Unitary" | "unitary" => Ok(Mode::Unitary),
            "Decomposed" | "decomposed" => Ok(Mode::Decomposed),
            other => Err(Error::NotFound {
                kind: "mode",
                name: other.into(),
                valid: vec!["Unitary".into(), "Decomposed".into()],
            }),
        }
    }
}

/// Trained perceptron. `raw_w` is the synthesized weight; the triple
/// `(f_hat, sigma_new, w_new)` is what evaluation uses.
#[derive(Debug, Clone, PartialEq)]
pub struct PerceptronModel {
    mode: Mode,
    f_hat: Matrix,
    sigma_new: Matrix,
    w_new: Matrix,
    raw_w: Matrix,
    threshold: f64,
}

impl PerceptronModel {
    /// Reassembles a model from stored parts, checking the invariants of its
    /// mode at `tol`.
    pub fn from_parts(
        mode: Mode,
        raw_w: Matrix,
        f_hat: Matrix,
        sigma_new: Matrix,
        w_new: Matrix,
        threshold: f64,
        tol: f64,
    ) -> Result<Self> {
        let (m, n) = raw_w.shape();
        if f_hat.shape() != (m, m) || sigma_new.shape() != (m, n) || w_new.shape() != (n, n) {
            return Err(Error::dim(
                "PerceptronModel::from_parts",
                format!("raw weights {m}x{n}"),
                format!(
                    "F {:?}, S {:?}, WNEW {:?}",
                    f_hat.shape(),
                    sigma_new.shape(),
                    w_new.shape()
                ),
            ));
        }
        if !threshold.is_finite() {
            return Err(Error::Precondition("threshold must be finite".into()));
        }
        match mode {
            Mode::Unitary => {
                if f_hat != Matrix::identity(m)
                    || sigma_new != Matrix::identity(m)
                    || w_new != raw_w
                {
                    return Err(Error::Precondition(
                        "unitary-mode model must have F = S = I and WNEW = W".into(),
                    ));
                }
                let r = unitarity_residual(&raw_w);
                if r > tol {
                    return Err(Error::Precondition(format!(
                        "unitary-mode weights fail unitarity (residual {r:.3e})"
                    )));
                }
            }
            Mode::Decomposed => {
                if sigma_new != rect_identity(m, n) {
                    return Err(Error::Precondition(
                        "S must be the rectangular identity".into(),
                    ));
                }
                for (name, factor) in [("F", &f_hat), ("WNEW", &w_new)] {
                    let r = unitarity_residual(factor);
                    if r > tol {
                        return Err(Error::Precondition(format!(
                            "{name} fails unitarity (residual {r:.3e})"
                        )));
                    }
                }
            }
        }
        Ok(PerceptronModel {
            mode,
            f_hat,
            sigma_new,
            w_new,
            raw_w,
            threshold,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn f_hat(&self) -> &Matrix {
        &self.f_hat
    }

    pub fn sigma_new(&self) -> &Matrix {
        &self.sigma_new
    }

    pub fn w_new(&self) -> &Matrix {
        &self.w_new
    }

    pub fn raw_w(&self) -> &Matrix {
        &self.raw_w
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn input_dim(&self) -> usize {
        self.w_new.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.f_hat.rows()
    }

    /// `F · Σ_new · W_new`, the operator evaluation applies.
    pub fn effective_operator(&self) -> Matrix {
        let fs = mat_mul(&self.f_hat, &self.sigma_new).expect("F and S agree");
        mat_mul(&fs, &self.w_new).expect("S and WNEW agree")
    }

    /// Singular values of the raw weight.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        Ok(svd_full(&self.raw_w)?.sigma)
    }
}

/// Keeps a unitary `w` as is; otherwise decomposes it and swaps the singular
/// values for ones.
pub fn build_model(w: &Matrix, tol: f64) -> Result<PerceptronModel> {
    if is_unitary(w, tol) {
        let n = w.rows();
        return Ok(PerceptronModel {
            mode: Mode::Unitary,
            f_hat: Matrix::identity(n),
            sigma_new: Matrix::identity(n),
            w_new: w.clone(),
            raw_w: w.clone(),
            threshold: DEFAULT_THRESHOLD,
        });
    }
    decompose_model(w)
}

/// Always takes the SVD route, even for unitary weights.
pub fn decompose_model(w: &Matrix) -> Result<PerceptronModel> {
    let svd = svd_full(w)?;
    Ok(PerceptronModel {
        mode: Mode::Decomposed,
        f_hat: svd.u,
        sigma_new: rect_identity(w.rows(), w.cols()),
        w_new: svd.v_dagger,
        raw_w: w.clone(),
        threshold: DEFAULT_THRESHOLD,
    })
}

/// `F · Σ_new · W_new |x⟩` without measurement.
pub fn forward_raw(model: &PerceptronModel, x: &StateVector) -> Result<StateVector> {
    if x.dim() != model.input_dim() {
        return Err(Error::dim(
            "forward_raw",
            format!("model input dim {}", model.input_dim()),
            format!("state of dim {}", x.dim()),
        ));
    }
    let v = apply(&model.w_new, x)?;
    let v = apply(&model.sigma_new, &v)?;
    apply(&model.f_hat, &v)
}

/// Componentwise `1` where the real part strictly exceeds `threshold`, else `0`.
pub fn measure(v: &StateVector, threshold: f64) -> StateVector {
    let amps = v
        .amplitudes()
        .iter()
        .map(|z| if z.re > threshold { ONE } else { ZERO })
        .collect();
    StateVector::new(amps).expect("0/1 entries are finite")
}

/// Measured output in decomposed mode, raw amplitudes in unitary mode.
pub fn predict(model: &PerceptronModel, x: &StateVector) -> Result<StateVector> {
    predict_with(model, x, false)
}

/// As [`predict`], with `force_measure` applying the threshold in unitary
/// mode as well.
pub fn predict_with(
    model: &PerceptronModel,
    x: &StateVector,
    force_measure: bool,
) -> Result<StateVector> {
    let raw = forward_raw(model, x)?;
    Ok(match (model.mode, force_measure) {
        (Mode::Decomposed, _) | (Mode::Unitary, true) => measure(&raw, model.threshold),
        (Mode::Unitary, false) => raw,
    })
}

/// `f_hat · diag(σ) · w_new`, the exact factorization of `raw_w` before
/// the singular values are replaced.
pub fn reconstruct_raw(model: &PerceptronModel) -> Result<Matrix> {
    let (m, n) = model.raw_w.shape();
    let sigma = model.singular_values()?;
    let s = crate::decomp::diag_rect(&sigma, m, n);
    match model.mode {
        Mode::Unitary => Ok(model.raw_w.clone()),
        Mode::Decomposed => mat_mul(&mat_mul(&model.f_hat, &s)?, &model.w_new),
    }
}

/// Unitarity residuals of `(raw_w, f_hat, w_new)`.
pub fn model_residuals(model: &PerceptronModel) -> (f64, f64, f64) {
    (
        unitarity_residual(&model.raw_w),
        unitarity_residual(&model.f_hat),
        unitarity_residual(&model.w_new),
    )
}

/// Entries of `a` and `b` whose difference exceeds `tol`, as `(row, col)`.
pub fn mismatched_entries(a: &Matrix, b: &Matrix, tol: f64) -> Result<Vec<(usize, usize)>> {
    if a.shape() != b.shape() {
        return Err(Error::dim(
            "mismatched_entries",
            format!("{:?}", a.shape()),
            format!("{:?}", b.shape()),
        ));
    }
    let mut out = Vec::new();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if (a.get(i, j) - b.get(i, j)).norm() > tol {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Classical reference
// ---------------------------------------------------------------------------

/// Single ±1 neuron with a fixed threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalPerceptron {
    pub weights: Vec<f64>,
    pub threshold: f64,
    pub eta: f64,
}

impl ClassicalPerceptron {
    /// Initial weights must lie in `[-1, 1)`.
    pub fn new(weights: Vec<f64>, threshold: f64, eta: f64) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(-1.0..1.0).contains(*w)) {
            return Err(Error::Precondition(format!("weight {w} outside [-1, 1)")));
        }
        Ok(ClassicalPerceptron {
            weights,
            threshold,
            eta,
        })
    }
}

/// `+1` if `Σ w_k x_k ≥ θ`, else `−1`.
pub fn classical_forward(p: &ClassicalPerceptron, inputs: &[i8]) -> Result<i8> {
    if inputs.len() != p.weights.len() {
        return Err(Error::dim(
            "classical_forward",
            p.weights.len(),
            inputs.len(),
        ));
    }
    let s: f64 = p
        .weights
        .iter()
        .zip(inputs)
        .map(|(w, &x)| w * x as f64)
        .sum();
    Ok(if s >= p.threshold { 1 } else { -1 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalTraining {
    pub perceptron: ClassicalPerceptron,
    pub converged: bool,
    pub epochs_run: usize,
}

/// Per-example rule `w_k += η (d − y) x_k`. Stops after the first epoch in
/// which every example was already classified correctly.
pub fn classical_train(
    p: &ClassicalPerceptron,
    dataset: &[(Vec<i8>, i8)],
    epochs: usize,
) -> Result<ClassicalTraining> {
    let mut p = p.clone();
    for epoch in 0..epochs {
        let mut updates = 0;
        for (x, d) in dataset {
            let y = classical_forward(&p, x)?;
            if y != *d {
                updates += 1;
                let delta = p.eta * (*d - y) as f64;
                for (w, &xk) in p.weights.iter_mut().zip(x) {
                    *w += delta * xk as f64;
                }
            }
        }
        if updates == 0 {
            return Ok(ClassicalTraining {
                perceptron: p,
                converged: true,
                epochs_run: epoch + 1,
            });
        }
    }
    Ok(ClassicalTraining {
        perceptron: p,
        converged: false,
        epochs_run: epochs,
    })
}

/// `(inputs, target)` rows of a two-input boolean function in ±1 encoding.
pub fn boolean_dataset(f: impl Fn(bool, bool) -> bool) -> Vec<(Vec<i8>, i8)> {
    let enc = |b: bool| if b { 1 } else { -1 };
    [(false, false), (false, true), (true, false), (true, true)]
        .into_iter()
        .map(|(a, b)| (vec![enc(a), enc(b)], enc(f(a, b))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::parse_state;
    use crate::linalg::{ComplexScalar, DEFAULT_UNITARITY_TOL};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ket(s: &str) -> StateVector {
        parse_state(s).unwrap()
    }

    fn set(pairs: &[(&str, &str)]) -> TrainingSet {
        TrainingSet::new(
            pairs
                .iter()
                .map(|(x, y)| TrainingPair::new(ket(x), ket(y)).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn rows(r: &[&[f64]]) -> Matrix {
        Matrix::from_real_rows(r).unwrap()
    }

    #[test]
    fn synthesize_not() {
        let w = synthesize_weights(&set(&[("|0>", "|1>"), ("|1>", "|0>")])).unwrap();
        assert_eq!(w, rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
    }

    #[test]
    fn synthesize_cnot() {
        let w = synthesize_weights(&set(&[
            ("|00>", "|00>"),
            ("|01>", "|01>"),
            ("|10>", "|11>"),
            ("|11>", "|10>"),
        ]))
        .unwrap();
        let want = rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        assert_eq!(w, want);
    }

    #[test]
    fn scaled_synthesis_divides_by_sqrt_n() {
        let ts = set(&[
            ("|00>", "|0>"),
            ("|01>", "|1>"),
            ("|10>", "|1>"),
            ("|11>", "|0>"),
        ]);
        let w = synthesize_weights_scaled(&ts).unwrap();
        assert_eq!(w, rows(&[&[0.5, 0.0, 0.0, 0.5], &[0.0, 0.5, 0.5, 0.0]]));
    }

    #[test]
    fn training_pair_requires_normalized_states() {
        let err = TrainingPair::new(ket("2*|0>"), ket("|1>")).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn training_set_checks_dims() {
        assert!(TrainingSet::new(vec![]).is_err());
        let a = TrainingPair::new(ket("|0>"), ket("|1>")).unwrap();
        let b = TrainingPair::new(ket("|00>"), ket("|1>")).unwrap();
        assert!(matches!(
            TrainingSet::new(vec![a, b]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn conflicting_duplicates_are_accepted() {
        let ts = set(&[("|0>", "|0>"), ("|0>", "|1>")]);
        assert_eq!(ts.conflicting_duplicates(), vec![(0, 1)]);
        let w = synthesize_weights(&ts).unwrap();
        assert_eq!(w, rows(&[&[1.0, 0.0], &[1.0, 0.0]]));
    }

    #[test]
    fn iterative_step_examples() {
        let w0 = rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let w1 = iterative_step(&w0, &ket("|1>"), &ket("|0>"), 0.1).unwrap();
        assert!(
            w1.max_abs_diff(&rows(&[&[1.0, 0.1], &[0.0, -0.9]]))
                .unwrap()
                < 1e-15
        );

        assert_eq!(
            iterative_step(&w0, &ket("|1>"), &ket("|0>"), 0.0).unwrap(),
            w0
        );

        let x = rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(
            iterative_step(&x, &ket("|0>"), &ket("|1>"), 0.1).unwrap(),
            x
        );

        assert!(iterative_step(&w0, &ket("|00>"), &ket("|0>"), 0.1).is_err());
        assert!(iterative_step(&w0, &ket("|0>"), &ket("|00>"), 0.1).is_err());
    }

    #[test]
    fn iterative_config_validates_eta() {
        let w = default_initial_weights(2, 2);
        assert!(IterativeConfig::new(0.0, 5, w.clone()).is_err());
        assert!(IterativeConfig::new(1.5, 5, w.clone()).is_err());
        assert!(IterativeConfig::new(1.0, 5, w).is_ok());
        assert_eq!(
            default_initial_weights(2, 2),
            rows(&[&[1.0, 0.0], &[0.0, -1.0]])
        );
    }

    #[test]
    fn iterative_train_trace_length() {
        let cfg = IterativeConfig::with_defaults(2, 2);
        let run = iterative_train(&cfg, &ket("|1>"), &ket("|0>")).unwrap();
        assert_eq!(run.trace.len(), 25);
        assert_eq!(run.trace.last().unwrap(), &run.weights);
        let zero = IterativeConfig::new(0.1, 0, cfg.initial_weights.clone()).unwrap();
        let run = iterative_train(&zero, &ket("|1>"), &ket("|0>")).unwrap();
        assert_eq!(run.weights, cfg.initial_weights);
        assert!(run.trace.is_empty());
    }

    #[test]
    fn build_model_unitary_not() {
        let x = rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let m = build_model(&x, DEFAULT_UNITARITY_TOL).unwrap();
        assert_eq!(m.mode(), Mode::Unitary);
        assert_eq!(m.raw_w(), &x);
        assert_eq!(m.f_hat(), &Matrix::identity(2));
        assert_eq!(m.w_new(), &x);
    }

    #[test]
    fn build_model_xor() {
        let w = rows(&[&[0.5, 0.0, 0.0, 0.5], &[0.0, 0.5, 0.5, 0.0]]);
        let m = build_model(&w, DEFAULT_UNITARITY_TOL).unwrap();
        assert_eq!(m.mode(), Mode::Decomposed);
        assert_eq!(m.sigma_new(), &rect_identity(2, 4));
        assert!(unitarity_residual(m.w_new()) <= 1e-10);
        assert!(unitarity_residual(m.f_hat()) <= 1e-10);
        // F Σ_new W_new = W / σ with σ = 1/√2 for both values.
        let eff = m.effective_operator();
        assert!(eff.max_abs_diff(&w.scale(2f64.sqrt())).unwrap() < 1e-12);
        assert!(reconstruct_raw(&m).unwrap().max_abs_diff(&w).unwrap() < 1e-12);
    }

    #[test]
    fn forward_and_predict_xor() {
        let w = rows(&[&[0.5, 0.0, 0.0, 0.5], &[0.0, 0.5, 0.5, 0.0]]);
        let m = build_model(&w, DEFAULT_UNITARITY_TOL).unwrap();
        let raw = forward_raw(&m, &ket("|01>")).unwrap();
        let want = StateVector::from_real(&[0.0, FRAC_1_SQRT_2]).unwrap();
        assert!(raw.max_abs_diff(&want).unwrap() < 1e-12);
        assert_eq!(predict(&m, &ket("|01>")).unwrap(), ket("|1>"));
        assert!(forward_raw(&m, &ket("|0>")).is_err());
    }

    #[test]
    fn forward_identity_model() {
        let m = build_model(&Matrix::identity(4), 1e-10).unwrap();
        let v = ket("0.6*|01> + (0+0.8i)*|10>");
        assert_eq!(forward_raw(&m, &v).unwrap(), v);
    }

    #[test]
    fn hadamard_is_not_thresholded_unless_forced() {
        let h = rows(&[&[1.0, 1.0], &[1.0, -1.0]]).scale(FRAC_1_SQRT_2);
        let m = build_model(&h, 1e-10).unwrap();
        let out = predict(&m, &ket("|0>")).unwrap();
        assert!(
            out.max_abs_diff(&StateVector::from_real(&[FRAC_1_SQRT_2; 2]).unwrap())
                .unwrap()
                < 1e-15
        );
        let forced = predict_with(&m, &ket("|0>"), true).unwrap();
        assert_eq!(forced, ket("|0> + |1>"));
    }

    #[test]
    fn measure_examples() {
        let v = StateVector::from_real(&[FRAC_1_SQRT_2, 0.0]).unwrap();
        assert_eq!(measure(&v, 0.5), ket("|0>"));
        let v = StateVector::from_real(&[0.5, 0.5]).unwrap();
        assert_eq!(measure(&v, 0.5), StateVector::zeros(2));
        let v = StateVector::from_real(&[-FRAC_1_SQRT_2, 0.9]).unwrap();
        assert_eq!(measure(&v, 0.5), ket("|1>"));
        // Only the real part counts.
        let v = StateVector::new(vec![ComplexScalar::new(0.1, 0.9), ZERO]).unwrap();
        assert_eq!(measure(&v, 0.5), StateVector::zeros(2));
    }

    #[test]
    fn from_parts_rejects_broken_models() {
        let w = rows(&[&[0.5, 0.0, 0.0, 0.5], &[0.0, 0.5, 0.5, 0.0]]);
        let m = build_model(&w, 1e-10).unwrap();
        let ok = PerceptronModel::from_parts(
            m.mode(),
            m.raw_w().clone(),
            m.f_hat().clone(),
            m.sigma_new().clone(),
            m.w_new().clone(),
            0.5,
            1e-10,
        );
        assert_eq!(ok.unwrap(), m);
        let bad = PerceptronModel::from_parts(
            Mode::Decomposed,
            w.clone(),
            Matrix::identity(2),
            rect_identity(2, 4),
            Matrix::identity(4).scale(2.0),
            0.5,
            1e-10,
        );
        assert!(bad.is_err());
        let bad = PerceptronModel::from_parts(
            Mode::Unitary,
            rows(&[&[1.0, 0.1], &[0.0, -0.9]]),
            Matrix::identity(2),
            Matrix::identity(2),
            rows(&[&[1.0, 0.1], &[0.0, -0.9]]),
            0.5,
            1e-10,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn classical_forward_examples() {
        let p = ClassicalPerceptron::new(vec![0.9, 0.9], 1.5, 0.1).unwrap();
        let p = ClassicalPerceptron {
            weights: vec![1.0, 1.0],
            ..p
        };
        assert_eq!(classical_forward(&p, &[1, 1]).unwrap(), 1);
        assert_eq!(classical_forward(&p, &[1, -1]).unwrap(), -1);
        let z = ClassicalPerceptron::new(vec![0.0, 0.0], 0.0, 0.1).unwrap();
        for x in [[1, 1], [1, -1], [-1, 1], [-1, -1]] {
            assert_eq!(classical_forward(&z, &x).unwrap(), 1);
        }
        assert!(classical_forward(&z, &[1]).is_err());
        assert!(ClassicalPerceptron::new(vec![1.0], 0.0, 0.1).is_err());
    }

    #[test]
    fn classical_train_and_vs_xor() {
        let p = ClassicalPerceptron::new(vec![0.0, 0.0], 0.5, 0.1).unwrap();
        let and = classical_train(&p, &boolean_dataset(|a, b| a && b), 100).unwrap();
        assert!(and.converged);
        for (x, d) in boolean_dataset(|a, b| a && b) {
            assert_eq!(classical_forward(&and.perceptron, &x).unwrap(), d);
        }
        let xor = classical_train(&p, &boolean_dataset(|a, b| a != b), 1000).unwrap();
        assert!(!xor.converged);
        assert_eq!(xor.epochs_run, 1000);
        let none = classical_train(&p, &boolean_dataset(|a, b| a && b), 0).unwrap();
        assert_eq!(none.perceptron, p);
        assert!(!none.converged);
    }
}
