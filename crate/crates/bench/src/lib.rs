//! Input generators shared by the benchmarks.

use qperceptron::{ComplexScalar, Matrix};
use rand::Rng;

/// Dense matrix with entries uniform in the unit square of the complex plane.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols)
        .map(|_| ComplexScalar::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    Matrix::new(rows, cols, data).expect("finite entries")
}
