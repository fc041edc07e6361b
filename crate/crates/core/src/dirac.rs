//! Kets in Dirac notation.
//!
//! Text form of a state, whitespace-insensitive between tokens:
//!
//! ```text
//! state := term (('+' | '-') term)*
//! term  := [coeff '*'] ket
//! coeff := real | '(' real ('+' | '-') real 'i' ')'
//! ket   := '|' bit+ '>'
//! ```
//!
//! A single leading sign before the first term is also accepted. Bit strings
//! are big-endian: the leftmost bit is the most significant bit of the basis
//! index, so `|01>` is basis index 1 of a 4-dimensional space.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{ComplexScalar, StateVector, ONE, ZERO};

/// Widest ket accepted by the parser.
pub const MAX_QUBITS: usize = 20;

/// Computational-basis label such as `101`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KetLabel(Vec<bool>);

impl KetLabel {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Precondition(
                "ket label needs at least one bit".into(),
            ));
        }
        if bits.len() > MAX_QUBITS {
            return Err(Error::Precondition(format!(
                "ket label has {} bits, at most {MAX_QUBITS} supported",
                bits.len()
            )));
        }
        Ok(KetLabel(bits))
    }

    /// Label of basis index `index` in an `n_qubits` register.
    pub fn from_index(index: usize, n_qubits: usize) -> Result<Self> {
        if n_qubits < usize::BITS as usize && index >> n_qubits != 0 {
            return Err(Error::Precondition(format!(
                "index {index} does not fit in {n_qubits} qubits"
            )));
        }
        KetLabel::new((0..n_qubits).rev().map(|b| index >> b & 1 == 1).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.0.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Big-endian basis index.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| acc << 1 | b as usize)
    }
}

impl FromStr for KetLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(position, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    position,
                    message: format!("expected bit, found `{other}`"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        KetLabel::new(bits)
    }
}

impl fmt::Display for KetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub fn basis_ket(label: &KetLabel) -> StateVector {
    let mut amps = vec![ZERO; 1 << label.n_qubits()];
    amps[label.index()] = ONE;
    StateVector::new(amps).expect("basis ket is finite")
}

/// All `2^n` amplitudes equal to `1/√(2^n)`.
pub fn uniform_superposition(n_qubits: usize) -> Result<StateVector> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::Precondition(format!(
            "qubit count must be in 1..={MAX_QUBITS}, got {n_qubits}"
        )));
    }
    let dim = 1usize << n_qubits;
    let a = ComplexScalar::new(1.0 / (dim as f64).sqrt(), 0.0);
    StateVector::new(vec![a; dim])
}

/// Number of qubits for a power-of-two dimension of at least 2.
pub fn qubit_count(dim: usize) -> Option<usize> {
    (dim >= 2 && dim.is_power_of_two()).then(|| dim.trailing_zeros() as usize)
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let ch = self.peek()?;
        self.pos += ch.len_utf8();
        Some(ch)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(ch) if ch == want => {
                self.bump();
                Ok(())
            }
            Some(ch) => self.error(format!("expected `{want}`, found `{ch}`")),
            None => self.error(format!("expected `{want}`, found end of input")),
        }
    }

    fn real(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        if end < bytes.len() && (bytes[end] == b'+' || bytes[end] == b'-') {
            end += 1;
        }
        let digits_start = end;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end == digits_start {
            return self.error("expected a number");
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            let exp_digits = k;
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            if k > exp_digits {
                end = k;
            }
        }
        match self.src[start..end].parse::<f64>() {
            Ok(x) if x.is_finite() => {
                self.pos = end;
                Ok(x)
            }
            _ => self.error(format!("invalid number `{}`", &self.src[start..end])),
        }
    }

    fn coeff(&mut self) -> Result<ComplexScalar> {
        if self.peek() == Some('(') {
            self.bump();
            let re = self.real()?;
            let sign = match self.peek() {
                Some('+') => 1.0,
                Some('-') => -1.0,
                _ => return self.error("expected `+` or `-` in complex coefficient"),
            };
            self.bump();
            let im = self.real()?;
            self.expect('i')?;
            self.expect(')')?;
            Ok(ComplexScalar::new(re, sign * im))
        } else {
            Ok(ComplexScalar::new(self.real()?, 0.0))
        }
    }

    fn ket(&mut self) -> Result<KetLabel> {
        self.expect('|')?;
        let start = self.pos;
        let mut bits = Vec::new();
        while let Some(ch) = self.src[self.pos..].chars().next() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => break,
            }
            self.pos += 1;
        }
        if bits.is_empty() {
            return self.error("expected at least one bit inside ket");
        }
        if bits.len() > MAX_QUBITS {
            self.pos = start;
            return self.error(format!("ket wider than {MAX_QUBITS} qubits"));
        }
        match self.src[self.pos..].chars().next() {
            Some('>') | Some('⟩') => {
                self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
            }
            Some(ch) => return self.error(format!("expected `>` to close ket, found `{ch}`")),
            None => return self.error("unterminated ket"),
        }
        KetLabel::new(bits)
    }

    fn term(&mut self) -> Result<(ComplexScalar, KetLabel, usize)> {
        let at = {
            self.skip_ws();
            self.pos
        };
        let c = match self.peek() {
            Some('|') => ONE,
            Some(_) => {
                let c = self.coeff()?;
                self.expect('*')?;
                c
            }
            None => return self.error("expected a term"),
        };
        let label = self.ket()?;
        Ok((c, label, at))
    }
}

/// Parses a state such as `0.70710678*|0> - 0.70710678*|1>`. The result is
/// not normalized.
pub fn parse_state(text: &str) -> Result<StateVector> {
    let mut cur = Cursor { src: text, pos: 0 };
    if cur.peek().is_none() {
        return cur.error("empty state");
    }

    let mut sign = 1.0;
    // A leading sign directly before a ket or a parenthesized coefficient
    // belongs to the term; before a number it is the number's own sign.
    if let Some(ch @ ('+' | '-')) = cur.peek() {
        let save = cur.pos;
        cur.bump();
        if matches!(cur.peek(), Some('|') | Some('(')) {
            sign = if ch == '-' { -1.0 } else { 1.0 };
        } else {
            cur.pos = save;
        }
    }

    let mut terms = Vec::new();
    loop {
        let (c, label, at) = cur.term()?;
        terms.push((c * sign, label, at));
        match cur.peek() {
            None => break,
            Some('+') => sign = 1.0,
            Some('-') => sign = -1.0,
            Some(ch) => {
                return cur.error(format!("expected `+`, `-` or end of input, found `{ch}`"))
            }
        }
        cur.bump();
    }

    let width = terms[0].1.n_qubits();
    let mut amps = vec![ZERO; 1 << width];
    for (c, label, at) in terms {
        if label.n_qubits() != width {
            return Err(Error::Dimension {
                op: "parse_state",
                lhs: format!("{width}-qubit ket"),
                rhs: format!("{}-qubit ket |{label}> at position {at}", label.n_qubits()),
            });
        }
        amps[label.index()] += c;
    }
    StateVector::new(amps)
}

/// Formats `x > 0` with 8 significant digits, trailing zeros dropped.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&exp) {
        let s = format!("{:.*e}", digits - 1, x);
        let (mantissa, exponent) = s.split_once('e').unwrap_or((&s, "0"));
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exponent}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Canonical text for `v`: amplitudes with magnitude above `tol`, ascending
/// basis index, coefficients to 8 significant digits, unit coefficients
/// omitted. The zero vector formats as the empty string.
pub fn format_state(v: &StateVector, tol: f64) -> Result<String> {
    let n = qubit_count(v.dim())
        .ok_or_else(|| Error::dim("format_state", "power-of-two dimension >= 2", v.dim()))?;
    let mut out = String::new();
    for (idx, z) in v.amplitudes().iter().enumerate() {
        if z.norm() <= tol {
            continue;
        }
        let first = out.is_empty();
        let label = KetLabel::from_index(idx, n)?;
        if z.im.abs() <= tol {
            let mag = format_significant(z.re.abs(), 8);
            let negative = z.re < 0.0;
            match (first, negative) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            if mag != "1" {
                out.push_str(&mag);
                out.push('*');
            }
        } else {
            if !first {
                out.push_str(" + ");
            }
            let re = if z.re.abs() <= tol {
                "0".to_string()
            } else {
                let m = format_significant(z.re.abs(), 8);
                if z.re < 0.0 {
                    format!("-{m}")
                } else {
                    m
                }
            };
            let sign = if z.im < 0.0 { '-' } else { '+' };
            let im = format_significant(z.im.abs(), 8);
            out.push_str(&format!("({re}{sign}{im}i)*"));
        }
        out.push_str(&format!("|{label}>"));
    }
    Ok(out)
}
