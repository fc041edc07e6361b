//! Line-oriented training-set files (`.qds`).
//!
//! ```text
//! # NOT gate
//! |0> -> |1>
//! |1> -> |0>
//! ```
//!
//! Each non-blank, non-comment line is `state -> state` in the ket grammar of
//! [`qperceptron::dirac`]. States whose squared norm is within
//! [`RENORMALIZE_TOL`] of one are renormalized so that 8-digit coefficients
//! such as `0.70710678` are accepted.

use std::path::Path;

use qperceptron::{
    format_state, parse_state, Error as CoreError, StateVector, TrainingPair, TrainingSet,
};

use crate::error::{CliError, Result};

pub const RENORMALIZE_TOL: f64 = 1e-6;

/// Normalizes `v` when it is already close to unit norm.
pub fn near_normalized(v: StateVector) -> std::result::Result<StateVector, String> {
    let n2 = v.norm_sqr();
    if (n2 - 1.0).abs() > RENORMALIZE_TOL {
        return Err(format!("state is not normalized (squared norm {n2:.9})"));
    }
    v.normalize().map_err(|e| e.to_string())
}

pub fn parse_dataset(text: &str, path: &Path) -> Result<TrainingSet> {
    let syntax = |line: usize, column: usize, message: String| CliError::Syntax {
        path: path.to_path_buf(),
        line,
        column,
        message,
    };
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some(arrow) = raw.find("->") else {
            return Err(syntax(line, 1, "expected `input -> target`".into()));
        };
        let mut states = Vec::with_capacity(2);
        for (offset, part) in [(0, &raw[..arrow]), (arrow + 2, &raw[arrow + 2..])] {
            let v = parse_state(part).map_err(|e| match e {
                CoreError::Parse { position, message } => {
                    syntax(line, offset + position + 1, message)
                }
                other => syntax(line, offset + 1, other.to_string()),
            })?;
            let v = near_normalized(v).map_err(|m| syntax(line, offset + 1, m))?;
            states.push(v);
        }
        let target = states.pop().unwrap();
        let input = states.pop().unwrap();
        pairs.push(TrainingPair::new(input, target).map_err(|e| syntax(line, 1, e.to_string()))?);
    }
    if pairs.is_empty() {
        return Err(CliError::Input(format!(
            "{}: dataset has no pairs",
            path.display()
        )));
    }
    TrainingSet::new(pairs).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load_dataset(path: &Path) -> Result<TrainingSet> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_dataset(&text, path)
}

pub fn format_dataset(ts: &TrainingSet) -> Result<String> {
    let mut out = String::new();
    for p in ts.pairs() {
        out.push_str(&format_state(&p.input, 1e-12)?);
        out.push_str(" -> ");
        out.push_str(&format_state(&p.target, 1e-12)?);
        out.push('\n');
    }
    Ok(out)
}
