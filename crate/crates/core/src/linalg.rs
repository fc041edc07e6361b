//! Dense complex matrices and state vectors.
//!
//! Everything here is small-dimension, row-major and allocation-per-result.
//! Values are immutable once built; all operations return fresh values.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The amplitude field.
pub type ComplexScalar = Complex64;

pub const ZERO: ComplexScalar = Complex64::new(0.0, 0.0);
pub const ONE: ComplexScalar = Complex64::new(1.0, 0.0);

/// Default tolerance used by [`is_unitary`] callers that have no better value.
pub const DEFAULT_UNITARITY_TOL: f64 = 1e-10;

/// Tolerance for the squared-norm check on quantum states.
pub const NORMALIZATION_TOL: f64 = 1e-10;

fn check_finite(values: &[ComplexScalar]) -> Result<()> {
    match values
        .iter()
        .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Dense rectangular complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<ComplexScalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ComplexScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Precondition(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::dim(
                "Matrix::new",
                format!("{rows}x{cols}"),
                format!("{} entries", data.len()),
            ));
        }
        check_finite(&data)?;
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from real-valued rows.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n_cols {
                return Err(Error::dim(
                    "Matrix::from_real_rows",
                    format!("row 0 has {n_cols} columns"),
                    format!("row {i} has {}", r.len()),
                ));
            }
            data.extend(r.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Matrix::new(n_rows, n_cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[StateVector]) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::Precondition("no columns given".into()));
        };
        let rows = first.dim();
        let cols = columns.len();
        let mut m = Matrix::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            if c.dim() != rows {
                return Err(Error::dim("Matrix::from_columns", rows, c.dim()));
            }
            for i in 0..rows {
                m.data[i * cols + j] = c[i];
            }
        }
        Ok(m)
    }

    /// The `1 x n` row `(v_0, ..., v_{n-1})`, without conjugation.
    pub fn row_from(v: &StateVector) -> Self {
        Matrix {
            rows: 1,
            cols: v.dim(),
            data: v.amplitudes().to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[ComplexScalar] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> ComplexScalar {
        self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, z: ComplexScalar) {
        self.data[i * self.cols + j] = z;
    }

    pub fn column(&self, j: usize) -> StateVector {
        StateVector {
            amps: (0..self.rows).map(|i| self.get(i, j)).collect(),
        }
    }

    pub fn row(&self, i: usize) -> StateVector {
        StateVector {
            amps: self.data[i * self.cols..(i + 1) * self.cols].to_vec(),
        }
    }

    pub fn scale(&self, factor: f64) -> Matrix {
        self.map(|z| z * factor)
    }

    pub fn map(&self, f: impl Fn(ComplexScalar) -> ComplexScalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, "sub", |a, b| a - b)
    }

    fn zip(
        &self,
        other: &Matrix,
        op: &'static str,
        f: impl Fn(ComplexScalar, ComplexScalar) -> ComplexScalar,
    ) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::dim(op, shape_str(self), shape_str(other)));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entrywise difference; shapes must agree.
    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        Ok(self
            .sub(other)?
            .data
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }
}

fn shape_str(m: &Matrix) -> String {
    format!("{}x{}", m.rows, m.cols)
}

impl Index<(usize, usize)> for Matrix {
    type Output = ComplexScalar;

    fn index(&self, (i, j): (usize, usize)) -> &ComplexScalar {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Complex column vector. Kets have power-of-two dimension, but weight rows
/// and intermediate results need not.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<ComplexScalar>,
}

impl StateVector {
    pub fn new(amps: Vec<ComplexScalar>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Precondition("state vector must be non-empty".into()));
        }
        check_finite(&amps)?;
        Ok(StateVector { amps })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        StateVector::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "state vector must be non-empty");
        StateVector {
            amps: vec![ZERO; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[ComplexScalar] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`, conjugating `self`.
    pub fn inner(&self, other: &StateVector) -> Result<ComplexScalar> {
        if self.dim() != other.dim() {
            return Err(Error::dim("inner", self.dim(), other.dim()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Whether the squared magnitudes sum to one within [`NORMALIZATION_TOL`].
    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORMALIZATION_TOL
    }

    pub fn normalize(&self) -> Result<StateVector> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::DegenerateInput(
                "cannot normalize the zero vector".into(),
            ));
        }
        Ok(self.scale(1.0 / n))
    }

    pub fn scale(&self, factor: f64) -> StateVector {
        StateVector {
            amps: self.amps.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn sub(&self, other: &StateVector) -> Result<StateVector> {
        if self.dim() != other.dim() {
            return Err(Error::dim("sub", self.dim(), other.dim()));
        }
        Ok(StateVector {
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Column matrix `dim x 1`.
    pub fn to_column(&self) -> Matrix {
        Matrix {
            rows: self.dim(),
            cols: 1,
            data: self.amps.clone(),
        }
    }

    /// The dual row `⟨v|`, i.e. the conjugate transpose as a `1 x dim` matrix.
    pub fn dagger(&self) -> Matrix {
        Matrix {
            rows: 1,
            cols: self.dim(),
            data: self.amps.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        Ok(self
            .sub(other)?
            .amps
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }
}

impl Index<usize> for StateVector {
    type Output = ComplexScalar;

    fn index(&self, i: usize) -> &ComplexScalar {
        &self.amps[i]
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateVector(")?;
        for (k, z) in self.amps.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:+.6}{:+.6}i", z.re, z.im)?;
        }
        write!(f, ")")
    }
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.rows {
        return Err(Error::dim("mat_mul", shape_str(a), shape_str(b)));
    }
    let mut out = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if aik == ZERO {
                continue;
            }
            for j in 0..b.cols {
                out.data[i * b.cols + j] += aik * b.get(k, j);
            }
        }
    }
    Ok(out)
}

pub fn conj_transpose(a: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.cols, a.rows);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out.data[j * a.rows + i] = a.get(i, j).conj();
        }
    }
    out
}

/// `|y⟩ ⊗ ⟨x|`: entry `(i, j)` is `y_i * x_dual_j`.
pub fn outer_product(y: &StateVector, x_dual: &Matrix) -> Result<Matrix> {
    if x_dual.rows != 1 {
        return Err(Error::dim(
            "outer_product",
            "1xn dual row",
            shape_str(x_dual),
        ));
    }
    let mut out = Matrix::zeros(y.dim(), x_dual.cols);
    for i in 0..y.dim() {
        for j in 0..x_dual.cols {
            out.data[i * x_dual.cols + j] = y[i] * x_dual.data[j];
        }
    }
    Ok(out)
}

pub fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = Matrix::zeros(rows, cols);
    for ai in 0..a.rows {
        for aj in 0..a.cols {
            let s = a.get(ai, aj);
            for bi in 0..b.rows {
                for bj in 0..b.cols {
                    out.data[(ai * b.rows + bi) * cols + aj * b.cols + bj] = s * b.get(bi, bj);
                }
            }
        }
    }
    out
}

/// Tensor product of two kets.
pub fn kron_states(a: &StateVector, b: &StateVector) -> StateVector {
    let k = kronecker(&a.to_column(), &b.to_column());
    StateVector { amps: k.data }
}

/// Matrix-vector product.
pub fn apply(a: &Matrix, v: &StateVector) -> Result<StateVector> {
    if a.cols != v.dim() {
        return Err(Error::dim(
            "apply",
            shape_str(a),
            format!("vector of dim {}", v.dim()),
        ));
    }
    let amps = (0..a.rows)
        .map(|i| {
            a.data[i * a.cols..(i + 1) * a.cols]
                .iter()
                .zip(&v.amps)
                .map(|(m, x)| m * x)
                .sum()
        })
        .collect();
    Ok(StateVector { amps })
}

/// `max(‖A†A − I‖_F, ‖AA† − I‖_F)`. Rectangular inputs never reach zero.
pub fn unitarity_residual(a: &Matrix) -> f64 {
    let ad = conj_transpose(a);
    let gram = |m: &Matrix| -> f64 {
        let n = m.rows;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { ONE } else { ZERO };
                acc += (m.get(i, j) - target).norm_sqr();
            }
        }
        acc.sqrt()
    };
    // Shapes are compatible by construction.
    let left = mat_mul(&ad, a).expect("A†A shape");
    let right = mat_mul(a, &ad).expect("AA† shape");
    gram(&left).max(gram(&right))
}

pub fn is_unitary(a: &Matrix, tol: f64) -> bool {
    unitarity_residual(a) <= tol
}

pub fn frobenius_distance(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::dim("frobenius_distance", shape_str(a), shape_str(b)));
    }
    Ok(a.sub(b)?.frobenius_norm())
}
