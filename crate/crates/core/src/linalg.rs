//! Small dense linear algebra: Cholesky, symmetric Jacobi eigensolver,
//! one-sided Jacobi SVD and minimum-norm least squares.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has the wrong length");
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lower Cholesky factor of a symmetric matrix. Returns `None` as soon as a
/// pivot drops to `pivot_floor` or below.
pub fn cholesky(a: &Matrix, pivot_floor: f64) -> Option<Matrix> {
    let n = a.rows;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > pivot_floor) {
            return None;
        }
        let d = libm::sqrt(d);
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}

/// Solve `L y = b` for lower-triangular `L`.
pub fn forward_substitute(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows;
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    y
}

/// Solve `Lᵀ x = y` for lower-triangular `L`.
pub fn backward_substitute_transposed(l: &Matrix, y: &[f64]) -> Vec<f64> {
    let n = l.rows;
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[(k, i)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

/// Inverse of a symmetric positive definite matrix from its Cholesky factor.
pub fn cholesky_inverse(l: &Matrix) -> Matrix {
    let n = l.rows;
    let mut inv = Matrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[j] = 1.0;
        let y = forward_substitute(l, &e);
        let x = backward_substitute_transposed(l, &y);
        for i in 0..n {
            inv[(i, j)] = x[i];
        }
    }
    // Symmetrize away rounding asymmetry.
    for i in 0..n {
        for j in i + 1..n {
            let m = 0.5 * (inv[(i, j)] + inv[(j, i)]);
            inv[(i, j)] = m;
            inv[(j, i)] = m;
        }
    }
    inv
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues are ascending; eigenvectors are the columns of the second
/// component and are orthonormal.
pub fn symmetric_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    let n = a.rows;
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        let total: f64 = m.data.iter().map(|x| x * x).sum();
        if off <= 1e-32 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let s = if theta >= 0.0 { 1.0 } else { -1.0 };
                    s / (theta.abs() + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

/// Thin singular value decomposition `A = U Σ Vᵀ` (one-sided Jacobi).
#[derive(Debug, Clone)]
pub struct Svd {
    /// Columns of `A V`, i.e. `U Σ`; column `j` has norm `singular[j]`.
    scaled_u: Matrix,
    pub singular: Vec<f64>,
    pub v: Matrix,
}

pub fn svd(a: &Matrix) -> Svd {
    let (m, n) = (a.rows, a.cols);
    // Work column-major for cache-friendly column rotations.
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v = Matrix::identity(n);
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0 || gamma.abs() <= 1e-15 * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    let s = if zeta >= 0.0 { 1.0 } else { -1.0 };
                    s / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                for k in 0..m {
                    let x = cp[k];
                    let y = cq[k];
                    cp[k] = c * x - s * y;
                    cq[k] = s * x + c * y;
                }
                for k in 0..n {
                    let x = v[(k, p)];
                    let y = v[(k, q)];
                    v[(k, p)] = c * x - s * y;
                    v[(k, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let singular = cols.iter().map(|c| norm(c)).collect();
    let scaled_u = Matrix::from_fn(m, n, |i, j| cols[j][i]);
    Svd { scaled_u, singular, v }
}

impl Svd {
    pub fn max_singular(&self) -> f64 {
        self.singular.iter().fold(0.0, |m, s| m.max(*s))
    }

    fn cutoff(&self, rel_threshold: f64) -> f64 {
        rel_threshold * self.max_singular()
    }

    pub fn rank(&self, rel_threshold: f64) -> usize {
        let cut = self.cutoff(rel_threshold);
        self.singular.iter().filter(|&&s| s > cut).count()
    }

    /// Orthonormal basis of the numerical kernel.
    pub fn kernel(&self, rel_threshold: f64) -> Vec<Vec<f64>> {
        let cut = self.cutoff(rel_threshold);
        self.singular
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= cut)
            .map(|(j, _)| self.v.column(j))
            .collect()
    }

    /// Minimum-norm least-squares solution of `A x = b`.
    pub fn solve(&self, b: &[f64], rel_threshold: f64) -> Vec<f64> {
        let cut = self.cutoff(rel_threshold);
        let n = self.v.rows();
        let mut x = vec![0.0; n];
        for (j, &s) in self.singular.iter().enumerate() {
            if s <= cut || s == 0.0 {
                continue;
            }
            let coeff = dot(&self.scaled_u.column(j), b) / (s * s);
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += coeff * self.v[(i, j)];
            }
        }
        x
    }
}

/// Result of a minimum-norm least-squares fit.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub solution: Vec<f64>,
    /// Euclidean norm of `A x - b`.
    pub residual_norm: f64,
    pub rank: usize,
    pub kernel: Vec<Vec<f64>>,
}

/// Solve `A x ≈ b` in the least-squares sense, returning the minimum-norm
/// solution. Singular values at or below `rel_threshold · σmax` are treated
/// as zero.
pub fn least_squares(a: &Matrix, b: &[f64], rel_threshold: f64) -> LeastSquares {
    assert_eq!(a.rows, b.len());
    let decomposition = svd(a);
    let solution = decomposition.solve(b, rel_threshold);
    let fitted = a.matvec(&solution);
    let residual: Vec<f64> = fitted.iter().zip(b).map(|(f, y)| f - y).collect();
    LeastSquares {
        residual_norm: norm(&residual),
        rank: decomposition.rank(rel_threshold),
        kernel: decomposition.kernel(rel_threshold),
        solution,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(rows: usize, cols: usize, seed: u64) -> Matrix {
        let mut state = seed;
        Matrix::from_fn(rows, cols, |_, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
    }

    #[test]
    fn cholesky_inverse_is_inverse() {
        let m = sample(5, 5, 3);
        let spd = m.transpose().matmul(&m);
        let spd = Matrix::from_fn(5, 5, |i, j| spd[(i, j)] + if i == j { 5.0 } else { 0.0 });
        let l = cholesky(&spd, 1e-12).unwrap();
        let prod = spd.matmul(&cholesky_inverse(&l));
        for i in 0..5 {
            for j in 0..5 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - e).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = Matrix::from_row_major(2, 2, vec![1.0, 2.0, 2.0, 1.0]);
        assert!(cholesky(&m, 1e-12).is_none());
    }

    #[test]
    fn jacobi_eigen_reconstructs() {
        let m = sample(6, 6, 11);
        let s = Matrix::from_fn(6, 6, |i, j| m[(i, j)] + m[(j, i)]);
        let (vals, vecs) = symmetric_eigen(&s);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let rebuilt = Matrix::from_fn(6, 6, |i, j| (0..6).map(|k| vecs[(i, k)] * vals[k] * vecs[(j, k)]).sum());
        for i in 0..6 {
            for j in 0..6 {
                assert!((rebuilt[(i, j)] - s[(i, j)]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn svd_min_norm_on_rank_deficient_system() {
        // Third column duplicates the first: kernel spanned by (1, 0, -1)/√2.
        let base = sample(8, 2, 5);
        let a = Matrix::from_fn(8, 3, |i, j| base[(i, if j == 2 { 0 } else { j })]);
        let truth = [1.0, -2.0, 3.0];
        let b = a.matvec(&truth);
        let fit = least_squares(&a, &b, 1e-10);
        assert_eq!(fit.rank, 2);
        assert_eq!(fit.kernel.len(), 1);
        // min-norm splits the duplicated weight evenly
        assert!((fit.solution[0] - 2.0).abs() < 1e-12);
        assert!((fit.solution[1] + 2.0).abs() < 1e-12);
        assert!((fit.solution[2] - 2.0).abs() < 1e-12);
        assert!(fit.residual_norm < 1e-12);
    }
}
