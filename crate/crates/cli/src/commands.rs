use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use qperceptron::gatezoo::reference;
use qperceptron::perceptron::{default_initial_weights, mismatched_entries, model_residuals};
use qperceptron::{
    build_model, builtin_dataset, decompose_model, format_state, forward_raw, iterative_train,
    parse_state, predict_with, synthesize_weights, synthesize_weights_scaled, unitarity_residual,
    verify_truth_table_with, IterativeConfig, Matrix, Mode, PerceptronModel, StateVector,
    TrainingSet,
};

use crate::dataset::{load_dataset, near_normalized};
use crate::error::{CliError, Result, EXIT_VERIFY_FAILED};
use crate::model_file::{load_model, save_model};
use crate::report;

/// Tolerance used when printing states.
const STATE_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "qperceptron",
    version,
    about = "Quantum perceptron with closed-form weights"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrainMode {
    Analytic,
    Iterative,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model from a `.qds` dataset and write it as `.qpm`.
    Train {
        dataset: PathBuf,
        #[arg(long, value_enum, default_value_t = TrainMode::Analytic)]
        mode: TrainMode,
        /// Learning rate for iterative training.
        #[arg(long, default_value_t = qperceptron::perceptron::DEFAULT_ETA)]
        eta: f64,
        /// Number of iterative steps.
        #[arg(long, default_value_t = qperceptron::perceptron::DEFAULT_ITERATIONS)]
        iters: usize,
        /// Zero-based pair used by iterative training (default: last pair).
        #[arg(long)]
        pair: Option<usize>,
        /// Scale analytic weights by 1/sqrt(N) for N pairs.
        #[arg(long)]
        scale: bool,
        /// Unitarity tolerance.
        #[arg(long, default_value_t = qperceptron::DEFAULT_UNITARITY_TOL)]
        tol: f64,
        /// Output model path (default: dataset path with `.qpm` extension).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a model on a state such as "|10>".
    Eval {
        model: PathBuf,
        #[arg(allow_hyphen_values = true)]
        state: String,
        /// Print amplitudes before measurement.
        #[arg(long)]
        raw: bool,
        /// Apply the threshold measurement even for unitary models.
        #[arg(long)]
        force_measure: bool,
    },
    /// Check a model against every pair of a dataset.
    Verify {
        model: PathBuf,
        dataset: PathBuf,
        #[arg(long)]
        force_measure: bool,
    },
    /// Print shapes, mode, residuals and singular values of a model.
    Info { model: PathBuf },
    /// Decompose a model's raw weights through the SVD path and print the factors.
    Decompose {
        model: PathBuf,
        /// Also write the decomposed model here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in gate through both training modes.
    Demo {
        gate: String,
        #[arg(long, default_value_t = qperceptron::DEFAULT_UNITARITY_TOL)]
        tol: f64,
    },
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                crate::error::EXIT_INPUT
            } else {
                0
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Train {
            dataset,
            mode,
            eta,
            iters,
            pair,
            scale,
            tol,
            out: path,
        } => cmd_train(out, &dataset, mode, eta, iters, pair, scale, tol, path),
        Command::Eval {
            model,
            state,
            raw,
            force_measure,
        } => cmd_eval(out, &model, &state, raw, force_measure),
        Command::Verify {
            model,
            dataset,
            force_measure,
        } => cmd_verify(out, &model, &dataset, force_measure),
        Command::Info { model } => cmd_info(out, &model),
        Command::Decompose { model, out: path } => cmd_decompose(out, &model, path.as_deref()),
        Command::Demo { gate, tol } => cmd_demo(out, &gate, tol),
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Input(format!("cannot write output: {e}"))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(io)?
    };
}

fn unitary_label(residual: f64, tol: f64) -> &'static str {
    if residual <= tol {
        "UNITARY"
    } else {
        "NOT UNITARY"
    }
}

fn show_state(v: &StateVector) -> Result<String> {
    let s = format_state(v, STATE_TOL)?;
    Ok(if s.is_empty() { "0".into() } else { s })
}

fn describe_model(out: &mut dyn Write, model: &PerceptronModel) -> Result<()> {
    say!(out, "mode: {}", model.mode());
    say!(
        out,
        "singular values: {}",
        report::values(&model.singular_values()?)
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_train(
    out: &mut dyn Write,
    dataset: &Path,
    mode: TrainMode,
    eta: f64,
    iters: usize,
    pair: Option<usize>,
    scale: bool,
    tol: f64,
    path: Option<PathBuf>,
) -> Result<i32> {
    let ts = load_dataset(dataset)?;
    say!(
        out,
        "dataset: {} ({} pairs, dim {} -> {})",
        dataset.display(),
        ts.len(),
        ts.input_dim(),
        ts.target_dim()
    );
    let weights = match mode {
        TrainMode::Analytic => {
            say!(
                out,
                "training: analytic{}",
                if scale { " (scaled by 1/sqrt(N))" } else { "" }
            );
            if scale {
                synthesize_weights_scaled(&ts)?
            } else {
                synthesize_weights(&ts)?
            }
        }
        TrainMode::Iterative => {
            let index = pair.unwrap_or(ts.len() - 1);
            let chosen = ts.pairs().get(index).ok_or_else(|| {
                CliError::Input(format!(
                    "--pair {index} out of range (dataset has {} pairs)",
                    ts.len()
                ))
            })?;
            let w0 = default_initial_weights(ts.target_dim(), ts.input_dim());
            let cfg = IterativeConfig::new(eta, iters, w0)?;
            say!(
                out,
                "training: iterative (pair {index}, eta {eta}, {iters} iterations)"
            );
            let run = iterative_train(&cfg, &chosen.input, &chosen.target)?;
            let y = qperceptron::apply(&run.weights, &chosen.input)?;
            say!(out, "output for pair {index}: {}", show_state(&y)?);
            run.weights
        }
    };
    say!(out, "weights:\n{}", report::matrix(&weights));
    let residual = unitarity_residual(&weights);
    say!(out, "unitarity residual: {residual:.3e}");
    say!(out, "{}", unitary_label(residual, tol));
    let model = build_model(&weights, tol)?;
    describe_model(out, &model)?;
    let path = path.unwrap_or_else(|| dataset.with_extension("qpm"));
    save_model(&model, &path)?;
    say!(out, "model written to {}", path.display());
    Ok(0)
}

fn parse_input_state(text: &str, dim: usize) -> Result<StateVector> {
    let v = parse_state(text).map_err(|e| CliError::Input(format!("state `{text}`: {e}")))?;
    if v.dim() != dim {
        return Err(CliError::Input(format!(
            "state has dimension {} but the model expects {dim}",
            v.dim()
        )));
    }
    near_normalized(v).map_err(|m| CliError::Input(format!("state `{text}`: {m}")))
}

pub fn cmd_eval(
    out: &mut dyn Write,
    model: &Path,
    state: &str,
    raw: bool,
    force_measure: bool,
) -> Result<i32> {
    let model = load_model(model)?;
    let x = parse_input_state(state, model.input_dim())?;
    let y = if raw {
        forward_raw(&model, &x)?
    } else {
        predict_with(&model, &x, force_measure)?
    };
    say!(out, "{}", format_state(&y, STATE_TOL)?);
    Ok(0)
}

/// Notes where a model's stored weights disagree with the dataset's own
/// synthesized weights (plain or scaled).
fn weight_discrepancy(
    model: &PerceptronModel,
    ts: &TrainingSet,
) -> Result<Option<Vec<(usize, usize)>>> {
    let plain = synthesize_weights(ts)?;
    let scaled = synthesize_weights_scaled(ts)?;
    let raw = model.raw_w();
    if raw.shape() != plain.shape() {
        return Ok(None);
    }
    let tol = 1e-9;
    let a = mismatched_entries(raw, &plain, tol)?;
    let b = mismatched_entries(raw, &scaled, tol)?;
    if a.is_empty() || b.is_empty() {
        return Ok(None);
    }
    Ok(Some(if a.len() <= b.len() { a } else { b }))
}

pub fn cmd_verify(
    out: &mut dyn Write,
    model: &Path,
    dataset: &Path,
    force_measure: bool,
) -> Result<i32> {
    let model = load_model(model)?;
    let ts = load_dataset(dataset)?;
    let report = verify_truth_table_with(&model, &ts, force_measure)?;
    say!(out, "{}", report::verification_table(&report).trim_end());
    say!(
        out,
        "residuals: W {:.3e}, F {:.3e}, WNEW {:.3e}",
        report.raw_residual,
        report.f_residual,
        report.w_new_residual
    );
    if let Some(entries) = weight_discrepancy(&model, &ts)? {
        let list: Vec<String> = entries.iter().map(|(i, j)| format!("({i},{j})")).collect();
        say!(
            out,
            "note: stored weights differ from the dataset's synthesized weights at {}",
            list.join(", ")
        );
    }
    Ok(if report.all_pass() {
        0
    } else {
        EXIT_VERIFY_FAILED
    })
}

pub fn cmd_info(out: &mut dyn Write, model: &Path) -> Result<i32> {
    let model = load_model(model)?;
    let (rw, rf, rn) = model_residuals(&model);
    let (m, n) = model.raw_w().shape();
    say!(out, "input dim: {n}, output dim: {m}");
    say!(
        out,
        "shapes: W {}x{}, F {}x{}, S {}x{}, WNEW {}x{}",
        m,
        n,
        model.f_hat().rows(),
        model.f_hat().cols(),
        model.sigma_new().rows(),
        model.sigma_new().cols(),
        model.w_new().rows(),
        model.w_new().cols()
    );
    say!(
        out,
        "mode: {}, residual {:.1e}, σ = {}",
        model.mode(),
        rw,
        report::values(&model.singular_values()?)
    );
    say!(out, "factor residuals: F {rf:.1e}, WNEW {rn:.1e}");
    say!(out, "threshold: {}", model.threshold());
    Ok(0)
}

fn print_factors(out: &mut dyn Write, model: &PerceptronModel) -> Result<()> {
    say!(out, "F:\n{}", report::matrix(model.f_hat()));
    say!(out, "S (Σ_new):\n{}", report::matrix(model.sigma_new()));
    say!(out, "WNEW:\n{}", report::matrix(model.w_new()));
    Ok(())
}

pub fn cmd_decompose(out: &mut dyn Write, model: &Path, path: Option<&Path>) -> Result<i32> {
    let loaded = load_model(model)?;
    let model = decompose_model(loaded.raw_w())?.with_threshold(loaded.threshold());
    say!(out, "W:\n{}", report::matrix(model.raw_w()));
    say!(
        out,
        "singular values: {}",
        report::values(&model.singular_values()?)
    );
    print_factors(out, &model)?;
    let (_, rf, rn) = model_residuals(&model);
    say!(out, "factor residuals: F {rf:.3e}, WNEW {rn:.3e}");
    if let Some(path) = path {
        save_model(&model, path)?;
        say!(out, "model written to {}", path.display());
    }
    Ok(0)
}

fn compare_line(
    out: &mut dyn Write,
    what: &str,
    computed: &Matrix,
    reference: &Matrix,
    tol: f64,
) -> Result<()> {
    let diff = mismatched_entries(computed, reference, tol)?;
    let max = computed.max_abs_diff(reference)?;
    if diff.is_empty() {
        say!(out, "  {what:<28} max |Δ| {max:.2e}  match");
    } else {
        let list: Vec<String> = diff.iter().map(|(i, j)| format!("({i},{j})")).collect();
        say!(
            out,
            "  {what:<28} max |Δ| {max:.2e}  DIFFERS at {}",
            list.join(", ")
        );
    }
    Ok(())
}

pub fn cmd_demo(out: &mut dyn Write, gate: &str, tol: f64) -> Result<i32> {
    let spec = builtin_dataset(gate)?;
    let name = spec.name;
    let ts = &spec.training_set;
    say!(
        out,
        "== {name}: {} pairs, dim {} -> {} ==",
        ts.len(),
        ts.input_dim(),
        ts.target_dim()
    );
    for p in ts.pairs() {
        say!(
            out,
            "  {} -> {}",
            show_state(&p.input)?,
            show_state(&p.target)?
        );
    }

    // Iterative rule on one pair.
    let reference_iter = reference::iterative(name);
    let index = reference_iter.as_ref().map_or(ts.len() - 1, |(i, _)| *i);
    let pair = &ts.pairs()[index];
    let cfg = IterativeConfig::with_defaults(ts.target_dim(), ts.input_dim());
    let run = iterative_train(&cfg, &pair.input, &pair.target)?;
    let residual = unitarity_residual(&run.weights);
    say!(
        out,
        "\n-- iterative: pair {index}, eta {}, {} iterations --",
        cfg.eta,
        cfg.iterations
    );
    say!(out, "{}", report::matrix(&run.weights));
    say!(
        out,
        "output: {}",
        show_state(&qperceptron::apply(&run.weights, &pair.input)?)?
    );
    say!(
        out,
        "unitarity residual {residual:.3e}: {}",
        unitary_label(residual, tol)
    );

    // Closed-form synthesis.
    let w = synthesize_weights(ts)?;
    let residual = unitarity_residual(&w);
    say!(out, "\n-- analytic --");
    say!(out, "{}", report::matrix(&w));
    say!(
        out,
        "unitarity residual {residual:.3e}: {}",
        unitary_label(residual, tol)
    );
    let model = build_model(&w, tol)?;
    describe_model(out, &model)?;
    if model.mode() == Mode::Decomposed {
        print_factors(out, &model)?;
    }

    say!(out, "\n-- reference comparison --");
    if let Some((_, want)) = &reference_iter {
        compare_line(out, "iterative weights (1e-6)", &run.weights, want, 1e-6)?;
    }
    if let Some(want) = reference::analytic(name) {
        let computed = if name == "xor" {
            synthesize_weights_scaled(ts)?
        } else {
            w.clone()
        };
        compare_line(out, "analytic weights (1e-12)", &computed, &want, 1e-12)?;
    }
    if let Some(want) = reference::decomposed_w_new(name) {
        let kept = qperceptron::mat_mul(&qperceptron::rect_identity(w.rows(), w.cols()), &want)?;
        compare_line(
            out,
            "F·S·WNEW leading rows",
            &model.effective_operator(),
            &kept,
            1e-12,
        )?;
    }
    say!(
        out,
        "  expected mode {:<17} got {}",
        spec.expected_mode.to_string(),
        model.mode()
    );

    say!(out, "\n-- truth table --");
    let report = verify_truth_table_with(&model, ts, false)?;
    say!(out, "{}", report::verification_table(&report).trim_end());
    let ok = report.all_pass() && model.mode() == spec.expected_mode;
    Ok(if ok { 0 } else { EXIT_VERIFY_FAILED })
}
