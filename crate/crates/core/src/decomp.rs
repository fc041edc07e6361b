//! Full singular value decomposition, Moore-Penrose pseudoinverses and
//! orthonormal basis completion for small dense complex matrices.
//!
//! The SVD is a one-sided (Hestenes) Jacobi iteration run on the taller
//! orientation of the input. Columns of the working copy are rotated pairwise
//! until every pair is orthogonal to within a relative cosine of
//! [`JACOBI_TOL`]; the column norms are then the singular values and the
//! accumulated rotations form the right singular vectors. Left singular
//! vectors belonging to (numerically) zero singular values, and the extra
//! columns needed to make `U` square, come from [`orthonormal_complete`].

use crate::error::{Error, Result};
use crate::linalg::{conj_transpose, mat_mul, ComplexScalar, Matrix, StateVector, ONE, ZERO};

/// Maximum number of full Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 60;

/// A pair of columns is rotated while `|g_p† g_q| > JACOBI_TOL * ‖g_p‖‖g_q‖`.
pub const JACOBI_TOL: f64 = 1e-13;

/// Singular values at or below `PINV_RCOND * σ_max` are treated as zero by
/// [`pinv_matrix`].
pub const PINV_RCOND: f64 = 1e-12;

/// Tolerance used when checking the orthonormality precondition of
/// [`orthonormal_complete`].
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Canonical basis vectors whose residual falls below this are skipped
/// during completion.
pub const COMPLETION_SKIP: f64 = 1e-8;

/// `A = U · diag_rect(σ) · V†` with square unitary `U` (m×m) and `V†` (n×n).
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    pub u: Matrix,
    /// Descending, non-negative, length `min(m, n)`.
    pub sigma: Vec<f64>,
    pub v_dagger: Matrix,
}

impl SvdResult {
    pub fn rows(&self) -> usize {
        self.u.rows()
    }

    pub fn cols(&self) -> usize {
        self.v_dagger.cols()
    }

    /// `U · diag_rect(σ) · V†`.
    pub fn reconstruct(&self) -> Matrix {
        let s = diag_rect(&self.sigma, self.rows(), self.cols());
        let us = mat_mul(&self.u, &s).expect("U is m x m");
        mat_mul(&us, &self.v_dagger).expect("V† is n x n")
    }

    /// Number of singular values above `rcond * σ_max`.
    pub fn rank(&self, rcond: f64) -> usize {
        let cutoff = rcond * self.sigma.first().copied().unwrap_or(0.0);
        self.sigma.iter().filter(|&&s| s > cutoff).count()
    }
}

/// `rows x cols` matrix with `values` on the main diagonal.
pub fn diag_rect(values: &[f64], rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for (i, &s) in values.iter().enumerate().take(rows.min(cols)) {
        m.set(i, i, ComplexScalar::new(s, 0.0));
    }
    m
}

/// Ones on the main diagonal, zeros elsewhere. Square inputs give the
/// identity; rectangular ones give a partial isometry.
pub fn rect_identity(rows: usize, cols: usize) -> Matrix {
    diag_rect(&vec![1.0; rows.min(cols)], rows, cols)
}

fn dot(a: &[ComplexScalar], b: &[ComplexScalar]) -> ComplexScalar {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(a: &[ComplexScalar]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Rotates columns `p` and `q` of both the working matrix and the
/// accumulator so that the working columns become orthogonal.
fn rotate(
    cols: &mut [Vec<ComplexScalar>],
    p: usize,
    q: usize,
    c: f64,
    s: f64,
    phase: ComplexScalar,
) {
    let (head, tail) = cols.split_at_mut(q);
    let cp = &mut head[p];
    let cq = &mut tail[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yt = phase.conj() * *y;
        let nx = *x * c - yt * s;
        let ny = *x * s + yt * c;
        *x = nx;
        *y = ny;
    }
}

type Columns = Vec<Vec<ComplexScalar>>;

/// One-sided Jacobi on a tall (`m >= n`) matrix given as columns. Returns the
/// orthogonalized columns and the accumulated right rotation, column-wise.
fn jacobi_tall(mut g: Columns) -> Result<(Columns, Columns)> {
    let n = g.len();
    let mut v: Columns = (0..n)
        .map(|j| (0..n).map(|i| if i == j { ONE } else { ZERO }).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sqr(&g[p]);
                let beta = norm_sqr(&g[q]);
                let gamma = dot(&g[p], &g[q]);
                let scale = (alpha * beta).sqrt();
                let mag = gamma.norm();
                if scale == 0.0 || mag <= JACOBI_TOL * scale {
                    continue;
                }
                rotated = true;
                let phase = gamma / mag;
                let zeta = (beta - alpha) / (2.0 * mag);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                rotate(&mut g, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            return Ok((g, v));
        }
    }

    let mut worst = 0.0f64;
    for p in 0..n {
        for q in p + 1..n {
            let scale = (norm_sqr(&g[p]) * norm_sqr(&g[q])).sqrt();
            if scale > 0.0 {
                worst = worst.max(dot(&g[p], &g[q]).norm() / scale);
            }
        }
    }
    Err(Error::Numerical(format!(
        "Jacobi SVD did not converge in {MAX_SWEEPS} sweeps; largest relative off-diagonal {worst:.3e}"
    )))
}

/// `(U, σ, V)` for a tall matrix, with U completed to square. `V` is returned
/// (not `V†`) with columns matching `σ`.
fn svd_tall(a: &Matrix) -> Result<(Matrix, Vec<f64>, Matrix)> {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let columns: Vec<Vec<ComplexScalar>> =
        (0..n).map(|j| a.column(j).amplitudes().to_vec()).collect();
    let (g, v) = jacobi_tall(columns)?;

    let norms: Vec<f64> = g.iter().map(|c| norm_sqr(c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps the result deterministic for repeated values.
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let cutoff = sigma_max * f64::EPSILON * m as f64;

    let mut u_cols = Vec::new();
    for (&j, &s) in order.iter().zip(&sigma) {
        if s > cutoff && s > 0.0 {
            u_cols.push(StateVector::new(g[j].iter().map(|z| z / s).collect())?);
        }
    }
    let u = if u_cols.is_empty() {
        Matrix::identity(m)
    } else {
        orthonormal_complete(&Matrix::from_columns(&u_cols)?, m)?
    };

    let v_sorted: Vec<StateVector> = order
        .iter()
        .map(|&j| StateVector::new(v[j].clone()))
        .collect::<Result<_>>()?;
    let v = Matrix::from_columns(&v_sorted)?;
    Ok((u, sigma, v))
}

/// Full SVD of `a`: `U` is `m x m`, `V†` is `n x n`, `σ` has `min(m, n)`
/// entries in descending order.
///
/// Each singular pair is rotated by a common phase so that the
/// largest-magnitude entry of its `U` column is real and non-negative. For
/// repeated singular values the individual factors are not unique; only the
/// reconstruction and unitarity of the factors are guaranteed.
pub fn svd_full(a: &Matrix) -> Result<SvdResult> {
    let (m, n) = a.shape();
    let (mut u, sigma, mut v_dagger) = if m >= n {
        let (u, s, v) = svd_tall(a)?;
        (u, s, conj_transpose(&v))
    } else {
        // A† = U' Σ V'†  =>  A = V' Σᵀ U'†
        let (u_prime, s, v_prime) = svd_tall(&conj_transpose(a))?;
        (v_prime, s, conj_transpose(&u_prime))
    };

    let k = m.min(n);
    for j in 0..m {
        let phase = leading_phase(&u, j);
        if phase == ONE {
            continue;
        }
        for i in 0..m {
            u.set(i, j, u.get(i, j) * phase);
        }
        if j < k {
            for c in 0..n {
                v_dagger.set(j, c, v_dagger.get(j, c) * phase.conj());
            }
        }
    }

    Ok(SvdResult { u, sigma, v_dagger })
}

/// Unit phase that makes the largest-magnitude entry of column `j` real and
/// non-negative.
fn leading_phase(u: &Matrix, j: usize) -> ComplexScalar {
    let mut best = ZERO;
    for i in 0..u.rows() {
        let z = u.get(i, j);
        if z.norm() > best.norm() {
            best = z;
        }
    }
    if best.norm() == 0.0 || (best.im == 0.0 && best.re >= 0.0) {
        ONE
    } else {
        best.conj() / best.norm()
    }
}

/// `x† / (x†x)` as a `1 x dim` row.
pub fn pinv_vector(x: &StateVector) -> Result<Matrix> {
    let n2 = x.norm_sqr();
    if n2 == 0.0 {
        return Err(Error::DegenerateInput(
            "pseudoinverse of the zero vector is undefined here".into(),
        ));
    }
    Ok(x.dagger().scale(1.0 / n2))
}

/// `V Σ⁺ U†`, dropping singular values at or below [`PINV_RCOND`]` · σ_max`.
pub fn pinv_matrix(a: &Matrix) -> Result<Matrix> {
    let svd = svd_full(a)?;
    let (m, n) = a.shape();
    let cutoff = PINV_RCOND * svd.sigma.first().copied().unwrap_or(0.0);
    let mut out = Matrix::zeros(n, m);
    for (j, &s) in svd.sigma.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            continue;
        }
        let inv = 1.0 / s;
        for i in 0..n {
            let vij = svd.v_dagger.get(j, i).conj() * inv;
            for c in 0..m {
                out.set(i, c, out.get(i, c) + vij * svd.u.get(c, j).conj());
            }
        }
    }
    Ok(out)
}

/// Extends orthonormal columns to a `target_dim x target_dim` unitary.
///
/// The given columns are copied unchanged; the rest are canonical basis
/// vectors `e_0, e_1, ...` in index order, Gram-Schmidt orthogonalized
/// (twice) against everything accepted so far. Candidates whose residual
/// norm falls below [`COMPLETION_SKIP`] are skipped.
pub fn orthonormal_complete(partial_columns: &Matrix, target_dim: usize) -> Result<Matrix> {
    let (rows, k) = partial_columns.shape();
    if rows != target_dim {
        return Err(Error::dim(
            "orthonormal_complete",
            format!("{rows}x{k} columns"),
            format!("target dimension {target_dim}"),
        ));
    }
    if k > target_dim {
        return Err(Error::Precondition(format!(
            "{k} columns cannot be completed within dimension {target_dim}"
        )));
    }
    let gram = mat_mul(&conj_transpose(partial_columns), partial_columns)?;
    let worst = gram
        .sub(&Matrix::identity(k))?
        .entries()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if worst > ORTHONORMAL_TOL {
        return Err(Error::Precondition(format!(
            "columns are not orthonormal (max Gram deviation {worst:.3e})"
        )));
    }

    let mut basis: Vec<Vec<ComplexScalar>> = (0..k)
        .map(|j| partial_columns.column(j).amplitudes().to_vec())
        .collect();
    for e in 0..target_dim {
        if basis.len() == target_dim {
            break;
        }
        let mut cand: Vec<ComplexScalar> = (0..target_dim)
            .map(|i| if i == e { ONE } else { ZERO })
            .collect();
        for _ in 0..2 {
            for b in &basis {
                let proj = dot(b, &cand);
                for (c, bi) in cand.iter_mut().zip(b) {
                    *c -= proj * bi;
                }
            }
        }
        let norm = norm_sqr(&cand).sqrt();
        if norm < COMPLETION_SKIP {
            continue;
        }
        basis.push(cand.into_iter().map(|z| z / norm).collect());
    }

    let cols: Vec<StateVector> = basis
        .into_iter()
        .map(StateVector::new)
        .collect::<Result<_>>()?;
    Matrix::from_columns(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_distance, unitarity_residual};
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn cswap_weight() -> Matrix {
        let mut w = Matrix::zeros(4, 8);
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
            w.set(i, j, ONE);
        }
        w
    }

    fn assert_valid(a: &Matrix, svd: &SvdResult) {
        assert!(unitarity_residual(&svd.u) <= 1e-10);
        assert!(unitarity_residual(&svd.v_dagger) <= 1e-10);
        assert!(svd.sigma.windows(2).all(|w| w[0] >= w[1]));
        assert!(svd.sigma.iter().all(|&s| s >= 0.0));
        assert!(frobenius_distance(&svd.reconstruct(), a).unwrap() <= 1e-10);
    }

    #[test]
    fn svd_identity() {
        let a = Matrix::identity(4);
        let svd = svd_full(&a).unwrap();
        assert_eq!(svd.sigma, vec![1.0; 4]);
        assert_eq!(svd.reconstruct(), a);
    }

    #[test]
    fn svd_xor_weight() {
        let a = Matrix::from_real_rows(&[[0.5, 0.0, 0.0, 0.5], [0.0, 0.5, 0.5, 0.0]]).unwrap();
        let svd = svd_full(&a).unwrap();
        assert_valid(&a, &svd);
        assert_eq!(svd.sigma.len(), 2);
        for s in &svd.sigma {
            assert!((s - FRAC_1_SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn svd_cswap_weight() {
        let a = cswap_weight();
        let svd = svd_full(&a).unwrap();
        assert_valid(&a, &svd);
        assert_eq!(svd.u.shape(), (4, 4));
        assert_eq!(svd.v_dagger.shape(), (8, 8));
        for s in &svd.sigma {
            assert!((s - SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn svd_rank_deficient_and_zero() {
        let a = Matrix::from_real_rows(&[[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]]).unwrap();
        let svd = svd_full(&a).unwrap();
        assert_valid(&a, &svd);
        assert!(svd.sigma[1] < 1e-14);
        assert_eq!(svd.rank(PINV_RCOND), 1);

        let z = Matrix::zeros(2, 3);
        let svd = svd_full(&z).unwrap();
        assert_eq!(svd.sigma, vec![0.0, 0.0]);
        assert_valid(&z, &svd);
    }

    #[test]
    fn svd_is_deterministic() {
        let a = cswap_weight();
        assert_eq!(svd_full(&a).unwrap(), svd_full(&a).unwrap());
    }

    #[test]
    fn svd_sign_convention() {
        let a = Matrix::new(
            2,
            2,
            vec![
                ComplexScalar::new(0.0, 2.0),
                ComplexScalar::new(1.0, -1.0),
                ComplexScalar::new(-0.5, 0.0),
                ComplexScalar::new(0.3, 0.7),
            ],
        )
        .unwrap();
        let svd = svd_full(&a).unwrap();
        assert_valid(&a, &svd);
        for j in 0..2 {
            let col = svd.u.column(j);
            let lead = col.amplitudes().iter().copied().fold(ZERO, |b, z| {
                if z.norm() > b.norm() {
                    z
                } else {
                    b
                }
            });
            assert!(lead.re >= 0.0 && lead.im.abs() < 1e-15, "{lead}");
        }
    }

    #[test]
    fn pinv_vector_examples() {
        let ket0 = StateVector::from_real(&[1.0, 0.0]).unwrap();
        assert_eq!(pinv_vector(&ket0).unwrap().entries(), &[ONE, ZERO]);

        let ket01 = StateVector::from_real(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        let p = pinv_vector(&ket01).unwrap();
        assert_eq!(p, Matrix::from_real_rows(&[[0.0, 1.0, 0.0, 0.0]]).unwrap());

        let x = StateVector::from_real(&[2.0, 0.0]).unwrap();
        let p = pinv_vector(&x).unwrap();
        assert_eq!(p, Matrix::from_real_rows(&[[0.5, 0.0]]).unwrap());
        // Penrose conditions for A = x (2x1), A⁺ = p (1x2).
        let a = x.to_column();
        let apa = mat_mul(&mat_mul(&a, &p).unwrap(), &a).unwrap();
        assert_eq!(apa, a);
        let pap = mat_mul(&mat_mul(&p, &a).unwrap(), &p).unwrap();
        assert_eq!(pap, p);
        let ap = mat_mul(&a, &p).unwrap();
        assert_eq!(conj_transpose(&ap), ap);
        let pa = mat_mul(&p, &a).unwrap();
        assert_eq!(conj_transpose(&pa), pa);

        let err = pinv_vector(&StateVector::zeros(2)).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)));
    }

    #[test]
    fn pinv_matrix_examples() {
        let i3 = Matrix::identity(3);
        assert!(pinv_matrix(&i3).unwrap().max_abs_diff(&i3).unwrap() < 1e-15);

        let x = Matrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(pinv_matrix(&x).unwrap().max_abs_diff(&x).unwrap() < 1e-15);

        let d = Matrix::from_real_rows(&[[2.0, 0.0], [0.0, 0.0]]).unwrap();
        let want = Matrix::from_real_rows(&[[0.5, 0.0], [0.0, 0.0]]).unwrap();
        assert!(pinv_matrix(&d).unwrap().max_abs_diff(&want).unwrap() < 1e-15);
    }

    #[test]
    fn orthonormal_complete_examples() {
        let e0 = Matrix::from_real_rows(&[[1.0], [0.0]]).unwrap();
        assert_eq!(orthonormal_complete(&e0, 2).unwrap(), Matrix::identity(2));

        let plus = Matrix::from_real_rows(&[[FRAC_1_SQRT_2], [FRAC_1_SQRT_2]]).unwrap();
        let full = orthonormal_complete(&plus, 2).unwrap();
        assert_eq!(full.column(0), plus.column(0));
        let second = full.column(1);
        let want = StateVector::from_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).unwrap();
        let overlap = want.inner(&second).unwrap().norm();
        assert!((overlap - 1.0).abs() < 1e-12);

        let four = Matrix::from_real_rows(&[
            [FRAC_1_SQRT_2, 0.0, 0.0, 0.0],
            [0.0, FRAC_1_SQRT_2, 0.0, 0.0],
            [0.0, 0.0, FRAC_1_SQRT_2, 0.0],
            [0.0, 0.0, 0.0, FRAC_1_SQRT_2],
            [FRAC_1_SQRT_2, 0.0, 0.0, 0.0],
            [0.0, 0.0, FRAC_1_SQRT_2, 0.0],
            [0.0, FRAC_1_SQRT_2, 0.0, 0.0],
            [0.0, 0.0, 0.0, FRAC_1_SQRT_2],
        ])
        .unwrap();
        let full = orthonormal_complete(&four, 8).unwrap();
        assert!(unitarity_residual(&full) <= 1e-10);
        for j in 0..4 {
            assert_eq!(full.column(j), four.column(j));
        }
    }

    #[test]
    fn orthonormal_complete_rejects_bad_input() {
        let bad = Matrix::from_real_rows(&[[1.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(matches!(
            orthonormal_complete(&bad, 2),
            Err(Error::Precondition(_))
        ));
        let e0 = Matrix::from_real_rows(&[[1.0], [0.0]]).unwrap();
        assert!(orthonormal_complete(&e0, 3).is_err());
    }

    #[test]
    fn rect_identity_examples() {
        let s = rect_identity(2, 4);
        assert_eq!(
            s,
            Matrix::from_real_rows(&[[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]]).unwrap()
        );
        let s = rect_identity(4, 8);
        for i in 0..4 {
            for j in 0..8 {
                assert_eq!(s.get(i, j), if i == j { ONE } else { ZERO });
            }
        }
        assert_eq!(rect_identity(3, 3), Matrix::identity(3));
    }
}
