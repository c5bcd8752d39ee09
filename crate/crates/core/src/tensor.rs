//! Pointwise multilinear algebra on an n-dimensional tangent space.
//!
//! Conventions used everywhere in the crate:
//!
//! * `R̄(X,Y,Z,W) = g(R(X,Y)Z, W)`, stored as `R̄[[i, j, k, l]]`.
//! * Ricci contraction over the first and last slots: `S_jk = g^il R̄_ijkl`,
//!   so a space of constant curvature κ has `S = κ(n-1)g`.
//! * `G_ijkl = g_jk g_il - g_ik g_jl` is the curvature tensor of unit
//!   constant curvature.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, Matrix};

/// A Riemannian metric at a point, with its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    g: Matrix,
    inv: Matrix,
    cholesky: Matrix,
}

impl Metric {
    /// Validate symmetry and positive definiteness, then cache the inverse.
    pub fn new(components: Matrix) -> Result<Self> {
        let n = components.rows();
        if n < 1 || components.cols() != n {
            return Err(Error::SingularMetric(format!(
                "metric must be square, got {}x{}",
                components.rows(),
                components.cols()
            )));
        }
        let scale = components.max_abs();
        for i in 0..n {
            for j in i + 1..n {
                if (components[(i, j)] - components[(j, i)]).abs() > 1e-12 * scale.max(1.0) {
                    return Err(Error::SingularMetric(format!("g[{i}][{j}] != g[{j}][{i}]")));
                }
            }
        }
        if components.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularMetric("non-finite component".into()));
        }
        let g = Matrix::from_fn(n, n, |i, j| 0.5 * (components[(i, j)] + components[(j, i)]));
        let cholesky = linalg::cholesky(&g, 1e-12 * scale)
            .ok_or_else(|| Error::SingularMetric("Cholesky pivot below threshold".into()))?;
        let inv = linalg::cholesky_inverse(&cholesky);
        Ok(Metric { g, inv, cholesky })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        Metric::new(Matrix::from_fn(n, n, f))
    }

    pub fn euclidean(n: usize) -> Self {
        Metric::new(Matrix::identity(n)).expect("identity is a metric")
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    #[inline]
    pub fn g(&self, i: usize, j: usize) -> f64 {
        self.g[(i, j)]
    }

    #[inline]
    pub fn inv(&self, i: usize, j: usize) -> f64 {
        self.inv[(i, j)]
    }

    pub fn components(&self) -> &Matrix {
        &self.g
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inv
    }

    /// Lower Cholesky factor `L` with `g = L Lᵀ`.
    pub fn cholesky(&self) -> &Matrix {
        &self.cholesky
    }

    /// Metric dual vector `ρ^i = g^ij T_j`.
    pub fn raise(&self, form: &OneForm) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.inv(i, j) * form[j]).sum())
            .collect()
    }

    /// Covector `g_ij v^j`.
    pub fn lower(&self, vector: &[f64]) -> OneForm {
        let n = self.dim();
        OneForm::from_fn(n, |i| (0..n).map(|j| self.g(i, j) * vector[j]).sum())
    }

    /// `g^ij a_i b_j`, the induced inner product of covectors.
    pub fn inner_forms(&self, a: &OneForm, b: &OneForm) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.inv(i, j) * a[i] * b[j];
            }
        }
        s
    }

    /// `g^jk P_jk`.
    pub fn trace(&self, p: &Bilinear) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for j in 0..n {
            for k in 0..n {
                s += self.inv(j, k) * p[(j, k)];
            }
        }
        s
    }

    /// The metric itself as a bilinear form.
    pub fn as_bilinear(&self) -> Bilinear {
        Bilinear::from_fn(self.dim(), |i, j| self.g(i, j))
    }
}

/// A covector (1-form) at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm(Vec<f64>);

impl OneForm {
    pub fn new(components: Vec<f64>) -> Self {
        OneForm(components)
    }

    pub fn zeros(n: usize) -> Self {
        OneForm(vec![0.0; n])
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> f64) -> Self {
        OneForm((0..n).map(f).collect())
    }

    /// The basis covector `e^i`.
    pub fn basis(n: usize, i: usize) -> Self {
        OneForm::from_fn(n, |k| if k == i { 1.0 } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Evaluate on a vector: `T(v) = T_i v^i`.
    pub fn apply(&self, vector: &[f64]) -> f64 {
        linalg::dot(&self.0, vector)
    }

    pub fn scale(&self, c: f64) -> OneForm {
        OneForm(self.0.iter().map(|v| c * v).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| *v == 0.0)
    }
}

impl Index<usize> for OneForm {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &OneForm {
    type Output = OneForm;

    fn add(self, rhs: &OneForm) -> OneForm {
        OneForm(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &OneForm {
    type Output = OneForm;

    fn sub(self, rhs: &OneForm) -> OneForm {
        OneForm(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// A (0,2) tensor. Ricci tensors are symmetric; the `P` tensors of the
/// hyper / pseudo quasi-constant forms need not be.
#[derive(Debug, Clone, PartialEq)]
pub struct Bilinear {
    n: usize,
    data: Vec<f64>,
}

impl Bilinear {
    pub fn zeros(n: usize) -> Self {
        Bilinear {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Bilinear { n, data }
    }

    /// `a ⊗ b`, i.e. `(a ⊗ b)(X, Y) = a(X) b(Y)`.
    pub fn outer(a: &OneForm, b: &OneForm) -> Self {
        Bilinear::from_fn(a.dim(), |i, j| a[i] * b[j])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_row_major(self.n, self.n, self.data.clone())
    }

    pub fn transpose(&self) -> Bilinear {
        Bilinear::from_fn(self.n, |i, j| self[(j, i)])
    }

    /// Largest `|P_ij - P_ji|`.
    pub fn symmetry_defect(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                m = m.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        m
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.symmetry_defect() <= tol * self.max_abs().max(1.0)
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, c: f64) -> Bilinear {
        Bilinear {
            n: self.n,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }
}

impl Index<(usize, usize)> for Bilinear {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Bilinear {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &Bilinear {
    type Output = Bilinear;

    fn add(self, rhs: &Bilinear) -> Bilinear {
        Bilinear::from_fn(self.n, |i, j| self[(i, j)] + rhs[(i, j)])
    }
}

impl Sub for &Bilinear {
    type Output = Bilinear;

    fn sub(self, rhs: &Bilinear) -> Bilinear {
        Bilinear::from_fn(self.n, |i, j| self[(i, j)] - rhs[(i, j)])
    }
}

/// A (1,1) tensor `Q^i_j`, acting on vectors as `(QX)^i = Q^i_j X^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap(Matrix);

impl LinearMap {
    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        LinearMap(Matrix::from_fn(n, n, f))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn apply(&self, vector: &[f64]) -> Vec<f64> {
        self.0.matvec(vector)
    }

    /// The covector `X ↦ B(QX)`, components `B_l Q^l_i`.
    pub fn pull_back(&self, form: &OneForm) -> OneForm {
        let n = self.dim();
        OneForm::from_fn(n, |i| (0..n).map(|l| form[l] * self.0[(l, i)]).sum())
    }
}

impl Index<(usize, usize)> for LinearMap {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

/// Residuals of the algebraic curvature symmetries, as largest absolute
/// violations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSymmetry {
    pub antisymmetry_first: f64,
    pub antisymmetry_last: f64,
    pub pair_symmetry: f64,
    pub first_bianchi: f64,
}

impl RiemannSymmetry {
    pub fn max(&self) -> f64 {
        self.antisymmetry_first
            .max(self.antisymmetry_last)
            .max(self.pair_symmetry)
            .max(self.first_bianchi)
    }
}

/// A (0,4) tensor with dense storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor04 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor04 {
    pub fn zeros(n: usize) -> Self {
        Tensor04 {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        data.push(f(i, j, k, l));
                    }
                }
            }
        }
        Tensor04 { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, c: f64) -> Tensor04 {
        Tensor04 {
            n: self.n,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    pub fn riemann_symmetry(&self) -> RiemannSymmetry {
        let n = self.n;
        let mut out = RiemannSymmetry {
            antisymmetry_first: 0.0,
            antisymmetry_last: 0.0,
            pair_symmetry: 0.0,
            first_bianchi: 0.0,
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self[[i, j, k, l]];
                        out.antisymmetry_first = out.antisymmetry_first.max((r + self[[j, i, k, l]]).abs());
                        out.antisymmetry_last = out.antisymmetry_last.max((r + self[[i, j, l, k]]).abs());
                        out.pair_symmetry = out.pair_symmetry.max((r - self[[k, l, i, j]]).abs());
                        let cyclic = r + self[[j, k, i, l]] + self[[k, i, j, l]];
                        out.first_bianchi = out.first_bianchi.max(cyclic.abs());
                    }
                }
            }
        }
        out
    }

    /// All four algebraic curvature symmetries hold within `rel_tol · ‖R̄‖`.
    pub fn is_riemann_like(&self, rel_tol: f64) -> bool {
        self.riemann_symmetry().max() <= rel_tol * self.norm()
    }
}

impl Index<[usize; 4]> for Tensor04 {
    type Output = f64;

    #[inline]
    fn index(&self, [i, j, k, l]: [usize; 4]) -> &f64 {
        let n = self.n;
        &self.data[((i * n + j) * n + k) * n + l]
    }
}

impl IndexMut<[usize; 4]> for Tensor04 {
    #[inline]
    fn index_mut(&mut self, [i, j, k, l]: [usize; 4]) -> &mut f64 {
        let n = self.n;
        &mut self.data[((i * n + j) * n + k) * n + l]
    }
}

impl Add for &Tensor04 {
    type Output = Tensor04;

    fn add(self, rhs: &Tensor04) -> Tensor04 {
        Tensor04 {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Tensor04 {
    type Output = Tensor04;

    fn sub(self, rhs: &Tensor04) -> Tensor04 {
        Tensor04 {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<&Tensor04> for f64 {
    type Output = Tensor04;

    fn mul(self, rhs: &Tensor04) -> Tensor04 {
        rhs.scale(self)
    }
}

impl Neg for &Tensor04 {
    type Output = Tensor04;

    fn neg(self) -> Tensor04 {
        self.scale(-1.0)
    }
}

/// Dense rank-`R` array over `n` indices per slot, row-major.
///
/// Used for Christoffel symbols (`[k, i, j]` = Γ^k_ij), the covariant
/// derivative of Ricci (`[i, j, k]` = (∇_i S)_jk) and of Riemann
/// (`[m, i, j, k, l]` = (∇_m R̄)_ijkl).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<const R: usize> {
    n: usize,
    data: Vec<f64>,
}

impl<const R: usize> Grid<R> {
    pub fn zeros(n: usize) -> Self {
        Grid {
            n,
            data: vec![0.0; n.pow(R as u32)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    #[inline]
    fn offset(&self, idx: [usize; R]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }
}

impl<const R: usize> Index<[usize; R]> for Grid<R> {
    type Output = f64;

    #[inline]
    fn index(&self, idx: [usize; R]) -> &f64 {
        &self.data[self.offset(idx)]
    }
}

impl<const R: usize> IndexMut<[usize; R]> for Grid<R> {
    #[inline]
    fn index_mut(&mut self, idx: [usize; R]) -> &mut f64 {
        let o = self.offset(idx);
        &mut self.data[o]
    }
}

/// Ricci contraction `S_jk = g^il R̄_ijkl`.
pub fn ricci_contract(r: &Tensor04, g: &Metric) -> Result<Bilinear> {
    let n = g.dim();
    check_dim(n, r.dim())?;
    Ok(Bilinear::from_fn(n, |j, k| {
        let mut s = 0.0;
        for i in 0..n {
            for l in 0..n {
                s += g.inv(i, l) * r[[i, j, k, l]];
            }
        }
        s
    }))
}

/// Scalar curvature `r = g^jk S_jk`.
pub fn scalar_curvature(s: &Bilinear, g: &Metric) -> Result<f64> {
    check_dim(g.dim(), s.dim())?;
    Ok(g.trace(s))
}

/// Ricci operator `Q^i_j = g^ik S_kj`, so that `g(QX, Y) = S(X, Y)`.
pub fn ricci_operator(s: &Bilinear, g: &Metric) -> Result<LinearMap> {
    let n = g.dim();
    check_dim(n, s.dim())?;
    Ok(LinearMap::from_fn(n, |i, j| (0..n).map(|k| g.inv(i, k) * s[(k, j)]).sum()))
}

/// `G_ijkl = g_jk g_il - g_ik g_jl`.
pub fn wedge_gg(g: &Metric) -> Tensor04 {
    Tensor04::from_fn(g.dim(), |i, j, k, l| g.g(j, k) * g.g(i, l) - g.g(i, k) * g.g(j, l))
}

/// `g_il P_jk - g_ik P_jl + g_jk P_il - g_jl P_ik`, the four-term block of
/// hyper quasi-constant curvature.
pub fn hyper_shape(g: &Metric, p: &Bilinear) -> Result<Tensor04> {
    check_dim(g.dim(), p.dim())?;
    Ok(Tensor04::from_fn(g.dim(), |i, j, k, l| {
        g.g(i, l) * p[(j, k)] - g.g(i, k) * p[(j, l)] + g.g(j, k) * p[(i, l)] - g.g(j, l) * p[(i, k)]
    }))
}

/// `g_il A_j A_k - g_ik A_j A_l + g_jk A_i A_l - g_jl A_i A_k`, the 1-form
/// block of quasi-constant curvature.
pub fn quasi_constant_shape(g: &Metric, a: &OneForm) -> Result<Tensor04> {
    check_dim(g.dim(), a.dim())?;
    hyper_shape(g, &Bilinear::outer(a, a))
}

/// `P_jk g_il - P_ik g_jl`, the two-term block of pseudo quasi-constant
/// curvature. Not riemann-like for general `P`.
pub fn pseudo_shape(g: &Metric, p: &Bilinear) -> Result<Tensor04> {
    check_dim(g.dim(), p.dim())?;
    Ok(Tensor04::from_fn(g.dim(), |i, j, k, l| p[(j, k)] * g.g(i, l) - p[(i, k)] * g.g(j, l)))
}
