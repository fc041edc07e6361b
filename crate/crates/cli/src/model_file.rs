//! Model files (`.qpm`).
//!
//! ```text
//! QPM1
//! mode: Decomposed
//! threshold: 5.0000000000000000e-1
//! W:
//! 2 4
//! 5.0000000000000000e-1,0.0000000000000000e0 ...
//! F:
//! ...
//! S:
//! ...
//! WNEW:
//! ...
//! ```
//!
//! Every block is `rows cols` followed by `rows` lines of space-separated
//! `re,im` pairs written with 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use qperceptron::{ComplexScalar, Matrix, Mode, PerceptronModel, DEFAULT_UNITARITY_TOL};

use crate::error::{CliError, Result};

pub const MAGIC: &str = "QPM1";

fn write_matrix(out: &mut String, label: &str, m: &Matrix) {
    let _ = writeln!(out, "{label}:");
    let _ = writeln!(out, "{} {}", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| {
                let z = m.get(i, j);
                format!("{:.16e},{:.16e}", z.re, z.im)
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

pub fn serialize_model(model: &PerceptronModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "mode: {}", model.mode());
    let _ = writeln!(out, "threshold: {:.16e}", model.threshold());
    write_matrix(&mut out, "W", model.raw_w());
    write_matrix(&mut out, "F", model.f_hat());
    write_matrix(&mut out, "S", model.sigma_new());
    write_matrix(&mut out, "WNEW", model.w_new());
    out
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
    path: &'a Path,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<&'a str> {
        loop {
            match self.iter.next() {
                Some((n, l)) => {
                    self.last = n + 1;
                    if !l.trim().is_empty() {
                        return Ok(l.trim());
                    }
                }
                None => return Err(self.err("unexpected end of file")),
            }
        }
    }

    fn err(&self, message: impl Into<String>) -> CliError {
        CliError::Syntax {
            path: self.path.to_path_buf(),
            line: self.last,
            column: 1,
            message: message.into(),
        }
    }

    fn field(&mut self, key: &str) -> Result<&'a str> {
        let l = self.next()?;
        l.strip_prefix(key)
            .and_then(|r| r.strip_prefix(':'))
            .map(str::trim)
            .ok_or_else(|| self.err(format!("expected `{key}:`")))
    }

    fn matrix(&mut self, label: &str) -> Result<Matrix> {
        let l = self.next()?;
        if l != format!("{label}:") {
            return Err(self.err(format!("expected `{label}:` block")));
        }
        let dims = self.next()?;
        let mut it = dims.split_whitespace().map(str::parse::<usize>);
        let (rows, cols) = match (it.next(), it.next(), it.next()) {
            (Some(Ok(r)), Some(Ok(c)), None) if r > 0 && c > 0 => (r, c),
            _ => return Err(self.err("expected `rows cols`")),
        };
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let l = self.next()?;
            let before = data.len();
            for tok in l.split_whitespace() {
                let (re, im) = tok
                    .split_once(',')
                    .ok_or_else(|| self.err(format!("expected `re,im`, found `{tok}`")))?;
                let parse = |s: &str| {
                    s.parse::<f64>()
                        .map_err(|_| self.err(format!("invalid number `{s}`")))
                };
                data.push(ComplexScalar::new(parse(re)?, parse(im)?));
            }
            if data.len() - before != cols {
                return Err(self.err(format!("expected {cols} entries in row")));
            }
        }
        Matrix::new(rows, cols, data).map_err(|e| self.err(e.to_string()))
    }
}

pub fn parse_model(text: &str, path: &Path) -> Result<PerceptronModel> {
    let mut lines = Lines {
        iter: text.lines().enumerate(),
        path,
        last: 0,
    };
    if lines.next()? != MAGIC {
        return Err(lines.err(format!("missing `{MAGIC}` header")));
    }
    let mode: Mode = lines
        .field("mode")?
        .parse()
        .map_err(|e: qperceptron::Error| lines.err(e.to_string()))?;
    let threshold: f64 = lines
        .field("threshold")?
        .parse()
        .map_err(|_| lines.err("invalid threshold"))?;
    let w = lines.matrix("W")?;
    let f = lines.matrix("F")?;
    let s = lines.matrix("S")?;
    let wnew = lines.matrix("WNEW")?;
    PerceptronModel::from_parts(mode, w, f, s, wnew, threshold, DEFAULT_UNITARITY_TOL)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn save_model(model: &PerceptronModel, path: &Path) -> Result<()> {
    std::fs::write(path, serialize_model(model)).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_model(path: &Path) -> Result<PerceptronModel> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_model(&text, path)
}
