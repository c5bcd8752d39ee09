//! Pointwise classification: Einstein, quasi-Einstein, quasi-constant,
//! hyper and pseudo quasi-constant curvature, conformal flatness.
//!
//! Norms are coordinate Frobenius norms. Every fit reports a residual
//! `‖input − re-expansion‖ / (1 + ‖input‖)`.

use alloc::vec::Vec;

use crate::chart::CurvatureBundle;
use crate::error::{check_dim, Result};
use crate::gencurv;
use crate::linalg::{self, Matrix};
use crate::tensor::{
    hyper_shape, pseudo_shape, quasi_constant_shape, ricci_contract, wedge_gg, Bilinear, Metric, OneForm, Tensor04,
};

/// Threshold used by every fit to decide the rank of its design matrix.
pub const FIT_RANK_TOL: f64 = 1e-10;

/// Thresholds used by [`classify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative residual below which a fit is accepted.
    pub residual: f64,
    /// Relative eigenvalue spread for the quasi-Einstein clustering.
    pub cluster: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-8,
            cluster: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EinsteinFit {
    pub alpha: f64,
    pub residual: f64,
    pub passed: bool,
}

/// `α = r/n` and `‖S − αg‖ / (1 + ‖S‖)`.
pub fn einstein_check(s: &Bilinear, g: &Metric, tol: f64) -> Result<EinsteinFit> {
    check_dim(g.dim(), s.dim())?;
    let alpha = g.trace(s) / g.dim() as f64;
    let residual = (s - &g.as_bilinear().scale(alpha)).norm() / (1.0 + s.norm());
    Ok(EinsteinFit {
        alpha,
        residual,
        passed: residual <= tol,
    })
}

/// `S = p g + q ω⊗ω` with `g(ω♯, ω♯) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiEinstein {
    pub p: f64,
    pub q: f64,
    pub omega: OneForm,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuasiEinsteinVerdict {
    QuasiEinstein(QuasiEinstein),
    /// All eigenvalues cluster: `q ≈ 0`.
    Einstein { alpha: f64, residual: f64 },
    /// Neither pattern; the generalized eigenvalues are attached.
    NotQuasiEinstein { eigenvalues: Vec<f64> },
}

impl QuasiEinsteinVerdict {
    pub fn quasi_einstein(&self) -> Option<&QuasiEinstein> {
        match self {
            QuasiEinsteinVerdict::QuasiEinstein(q) => Some(q),
            _ => None,
        }
    }
}

/// Eigenvalues and `g`-orthonormal eigenvectors of `S v = λ g v`.
pub fn generalized_eigen(s: &Bilinear, g: &Metric) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = g.dim();
    check_dim(n, s.dim())?;
    let l = g.cholesky();
    // C = L⁻¹ S L⁻ᵀ, built column by column.
    let mut half = Matrix::zeros(n, n);
    for j in 0..n {
        let col: Vec<f64> = (0..n).map(|i| s[(i, j)]).collect();
        let y = linalg::forward_substitute(l, &col);
        for i in 0..n {
            half[(i, j)] = y[i];
        }
    }
    let mut c = Matrix::zeros(n, n);
    for i in 0..n {
        let row: Vec<f64> = (0..n).map(|j| half[(i, j)]).collect();
        let y = linalg::forward_substitute(l, &row);
        for j in 0..n {
            c[(i, j)] = y[j];
        }
    }
    let c = Matrix::from_fn(n, n, |i, j| 0.5 * (c[(i, j)] + c[(j, i)]));
    let (values, u) = linalg::symmetric_eigen(&c);
    let vectors = (0..n)
        .map(|k| linalg::backward_substitute_transposed(l, &u.column(k)))
        .collect();
    Ok((values, vectors))
}

fn canonical_sign(mut form: OneForm) -> OneForm {
    let cut = 1e-12 * form.max_abs();
    if let Some(&first) = form.as_slice().iter().find(|v| v.abs() > cut) {
        if first < 0.0 {
            form = form.scale(-1.0);
        }
    }
    form
}

fn frob(a: &Bilinear, b: &Bilinear) -> f64 {
    linalg::dot(a.as_slice(), b.as_slice())
}

/// Least-squares `(p, q)` for `S ≈ p g + q ω⊗ω`.
fn refit_pq(s: &Bilinear, g: &Bilinear, w: &Bilinear) -> (f64, f64) {
    let (gg, gw, ww) = (frob(g, g), frob(g, w), frob(w, w));
    let (sg, sw) = (frob(s, g), frob(s, w));
    let det = gg * ww - gw * gw;
    ((sg * ww - sw * gw) / det, (gg * sw - gw * sg) / det)
}

/// Decide whether `S = p g + q ω⊗ω` with `q ≠ 0`.
///
/// The generalized eigenvalues must form a cluster of `n − 1` values plus
/// one simple value; `tol` is the relative spread allowed in the cluster
/// and the least separation required of the simple value.
pub fn quasi_einstein_decompose(s: &Bilinear, g: &Metric, tol: f64) -> Result<QuasiEinsteinVerdict> {
    let n = g.dim();
    let (values, vectors) = generalized_eigen(s, g)?;
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cut = tol * scale;
    if values[n - 1] - values[0] <= cut {
        let e = einstein_check(s, g, f64::INFINITY)?;
        return Ok(QuasiEinsteinVerdict::Einstein {
            alpha: e.alpha,
            residual: e.residual,
        });
    }
    if n < 2 {
        return Ok(QuasiEinsteinVerdict::NotQuasiEinstein { eigenvalues: values });
    }
    // simple eigenvalue on top, or at the bottom
    let simple = if values[n - 2] - values[0] <= cut && values[n - 1] - values[n - 2] > cut {
        n - 1
    } else if values[n - 1] - values[1] <= cut && values[1] - values[0] > cut {
        0
    } else {
        return Ok(QuasiEinsteinVerdict::NotQuasiEinstein { eigenvalues: values });
    };
    let omega = canonical_sign(g.lower(&vectors[simple]));
    let gb = g.as_bilinear();
    let w = Bilinear::outer(&omega, &omega);
    let (p, q) = refit_pq(s, &gb, &w);
    let fitted = &gb.scale(p) + &w.scale(q);
    let residual = (s - &fitted).norm() / (1.0 + s.norm());
    Ok(QuasiEinsteinVerdict::QuasiEinstein(QuasiEinstein { p, q, omega, residual }))
}

fn tensor_dot(a: &Tensor04, b: &Tensor04) -> f64 {
    linalg::dot(a.as_slice(), b.as_slice())
}

fn relative_residual(input: &Tensor04, fitted: &Tensor04) -> f64 {
    (input - fitted).norm() / (1.0 + input.norm())
}

/// Fit of `R̄ = a G + b [quasi-constant block of A]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiConstantFit {
    /// Residual within tolerance and both scalars non-zero.
    pub accepted: bool,
    pub a: f64,
    pub b: f64,
    /// Unit 1-form `A`, when the contracted Ricci tensor is quasi-Einstein.
    pub form: Option<OneForm>,
    pub residual: f64,
    pub weyl_norm: f64,
    /// Set when the input is of constant curvature within tolerance; `a` is
    /// the curvature and `b = 0`.
    pub constant_curvature: Option<f64>,
}

fn weyl_norm_of(r: &Tensor04, g: &Metric) -> Result<f64> {
    if g.dim() < 3 {
        return Ok(0.0);
    }
    let bundle = CurvatureBundle::from_riemann(g.clone(), r.clone())?;
    Ok(gencurv::weyl(&bundle)?.norm())
}

pub fn quasi_constant_fit(r: &Tensor04, g: &Metric, tol: f64) -> Result<QuasiConstantFit> {
    quasi_constant_fit_with(r, g, Tolerances { residual: tol, ..Tolerances::default() })
}

/// [`quasi_constant_fit`] with an explicit eigenvalue clustering tolerance.
pub fn quasi_constant_fit_with(r: &Tensor04, g: &Metric, tol: Tolerances) -> Result<QuasiConstantFit> {
    let n = g.dim();
    check_dim(n, r.dim())?;
    let s = ricci_contract(r, g)?;
    let weyl_norm = weyl_norm_of(r, g)?;
    let wedge = wedge_gg(g);
    let constant_only = || {
        let gg = tensor_dot(&wedge, &wedge);
        let a = if gg > 0.0 { tensor_dot(r, &wedge) / gg } else { 0.0 };
        (a, relative_residual(r, &wedge.scale(a)))
    };
    let omega = match quasi_einstein_decompose(&s, g, tol.cluster)? {
        QuasiEinsteinVerdict::QuasiEinstein(qe) => qe.omega,
        _ => {
            let (a, residual) = constant_only();
            return Ok(QuasiConstantFit {
                accepted: false,
                a,
                b: 0.0,
                form: None,
                residual,
                weyl_norm,
                constant_curvature: (residual <= tol.residual).then_some(a),
            });
        }
    };
    let shape = quasi_constant_shape(g, &omega)?;
    let (gg, gs, ss) = (tensor_dot(&wedge, &wedge), tensor_dot(&wedge, &shape), tensor_dot(&shape, &shape));
    let (rg, rs) = (tensor_dot(r, &wedge), tensor_dot(r, &shape));
    let det = gg * ss - gs * gs;
    let a = (rg * ss - rs * gs) / det;
    let b = (gg * rs - gs * rg) / det;
    let fitted = &wedge.scale(a) + &shape.scale(b);
    let residual = relative_residual(r, &fitted);
    let floor = 1e-10 * (a.abs() + b.abs());
    Ok(QuasiConstantFit {
        accepted: residual <= tol.residual && a.abs() > floor && b.abs() > floor,
        a,
        b,
        form: Some(omega),
        residual,
        weyl_norm,
        constant_curvature: None,
    })
}

/// Fit of `R̄ = a G + shape(P)` with `P` gauge-fixed to `tr_g P = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeFit {
    pub accepted: bool,
    pub a: f64,
    pub p: Bilinear,
    pub residual: f64,
    /// Dimension of the design kernel over `(a, P)`; the gauge direction
    /// `P → P + c g` always contributes one.
    pub kernel_dim: usize,
}

fn shape_fit(
    r: &Tensor04,
    g: &Metric,
    tol: f64,
    shape: impl Fn(&Metric, &Bilinear) -> Result<Tensor04>,
    gauge_weight: f64,
) -> Result<ShapeFit> {
    let n = g.dim();
    check_dim(n, r.dim())?;
    let rows = n.pow(4);
    let mut design = Matrix::zeros(rows, 1 + n * n);
    let wedge = wedge_gg(g);
    for (row, v) in wedge.as_slice().iter().enumerate() {
        design[(row, 0)] = *v;
    }
    for p in 0..n {
        for q in 0..n {
            let unit = Bilinear::from_fn(n, |i, j| if (i, j) == (p, q) { 1.0 } else { 0.0 });
            let column = shape(g, &unit)?;
            for (row, v) in column.as_slice().iter().enumerate() {
                design[(row, 1 + p * n + q)] = *v;
            }
        }
    }
    let fit = linalg::least_squares(&design, r.as_slice(), FIT_RANK_TOL);
    let mut a = fit.solution[0];
    let mut p = Bilinear::from_fn(n, |i, j| fit.solution[1 + i * n + j]);
    // shape(c g) = gauge_weight · c · G, so (a, P) ~ (a + w c, P − c g).
    let c = g.trace(&p) / n as f64;
    p = &p - &g.as_bilinear().scale(c);
    a += gauge_weight * c;
    let fitted = &wedge.scale(a) + &shape(g, &p)?;
    let residual = relative_residual(r, &fitted);
    Ok(ShapeFit {
        accepted: residual <= tol,
        a,
        p,
        residual,
        kernel_dim: fit.kernel.len(),
    })
}

/// `R̄ = a G + [g_il P_jk − g_ik P_jl + g_jk P_il − g_jl P_ik]`.
pub fn hyper_quasi_constant_fit(r: &Tensor04, g: &Metric, tol: f64) -> Result<ShapeFit> {
    shape_fit(r, g, tol, hyper_shape, 2.0)
}

/// `R̄ = a G + [P_jk g_il − P_ik g_jl]`; the input need not be riemann-like.
pub fn pseudo_quasi_constant_fit(r: &Tensor04, g: &Metric, tol: f64) -> Result<ShapeFit> {
    shape_fit(r, g, tol, pseudo_shape, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalFlatness {
    pub weyl_norm: f64,
    /// `weyl_norm ≤ tol · (1 + ‖R̄‖)`.
    pub flat: bool,
}

/// Weyl tensor norm and verdict. Dimensions below 3 are always
/// conformally flat.
pub fn conformally_flat_check(bundle: &CurvatureBundle, tol: f64) -> Result<ConformalFlatness> {
    let weyl_norm = if bundle.dim() < 3 {
        0.0
    } else {
        gencurv::weyl(bundle)?.norm()
    };
    Ok(ConformalFlatness {
        weyl_norm,
        flat: weyl_norm <= tol * (1.0 + bundle.riemann.norm()),
    })
}

/// Every classification of one curvature bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub tolerances: Tolerances,
    pub einstein: EinsteinFit,
    pub quasi_einstein: QuasiEinsteinVerdict,
    pub quasi_constant: QuasiConstantFit,
    pub hyper_quasi_constant: ShapeFit,
    pub pseudo_quasi_constant: ShapeFit,
    pub conformal: ConformalFlatness,
}

pub fn classify(bundle: &CurvatureBundle, tol: Tolerances) -> Result<ClassificationReport> {
    let g = &bundle.metric;
    Ok(ClassificationReport {
        tolerances: tol,
        einstein: einstein_check(&bundle.ricci, g, tol.residual)?,
        quasi_einstein: quasi_einstein_decompose(&bundle.ricci, g, tol.cluster)?,
        quasi_constant: quasi_constant_fit_with(&bundle.riemann, g, tol)?,
        hyper_quasi_constant: hyper_quasi_constant_fit(&bundle.riemann, g, tol.residual)?,
        pseudo_quasi_constant: pseudo_quasi_constant_fit(&bundle.riemann, g, tol.residual)?,
        conformal: conformally_flat_check(bundle, tol.residual)?,
    })
}
