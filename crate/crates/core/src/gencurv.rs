//! Generalized curvature tensors and their flat reconstructions.
//!
//! Every tensor here is lowered with the last slot, `T(X,Y,Z,W) =
//! g(T(X,Y)Z, W)`, and uses the scalar curvature stored in the bundle.

use alloc::format;

use crate::chart::CurvatureBundle;
use crate::error::{check_dim, Error, Result};
use crate::tensor::{hyper_shape, pseudo_shape, wedge_gg, Bilinear, Metric, Tensor04};

/// The constants `a`, `b` of the quasi-conformal and pseudo-projective
/// tensors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcParams {
    pub a: f64,
    pub b: f64,
}

/// Relative tolerance below which `1 + (b/a)(n-2)` (and its
/// pseudo-projective analogue) counts as zero.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Tolerance of the strict reconstruction mode on `r - tr S`.
pub const TRACE_TOL: f64 = 1e-10;

impl QcParams {
    pub fn new(a: f64, b: f64) -> Self {
        QcParams { a, b }
    }

    fn require_a(&self) -> Result<()> {
        if self.a == 0.0 || !self.a.is_finite() || !self.b.is_finite() {
            return Err(Error::InvalidParams(format!("need finite a != 0, got a = {}, b = {}", self.a, self.b)));
        }
        Ok(())
    }

    fn require_ab(&self) -> Result<()> {
        self.require_a()?;
        if self.b == 0.0 {
            return Err(Error::InvalidParams("pseudo-projective tensor needs b != 0".into()));
        }
        Ok(())
    }

    /// `1 + (b/a)(n-2)`, the factor the quasi-conformal Einstein constant is
    /// divided by.
    pub fn qc_denominator(&self, n: usize) -> Result<f64> {
        self.require_a()?;
        let d = 1.0 + self.b / self.a * (n as f64 - 2.0);
        if d.abs() <= DEGENERACY_TOL * (1.0 + (self.b / self.a * (n as f64 - 2.0)).abs()) {
            return Err(Error::DegenerateParams(format!(
                "1 + (b/a)(n-2) vanishes for a = {}, b = {}, n = {n}",
                self.a, self.b
            )));
        }
        Ok(d)
    }

    /// `1 + (b/a)(n-1)`; the pseudo-projective reconstruction only pins
    /// the Ricci tensor down when this is non-zero.
    pub fn pp_denominator(&self, n: usize) -> Result<f64> {
        self.require_ab()?;
        let d = 1.0 + self.b / self.a * (n as f64 - 1.0);
        if d.abs() <= DEGENERACY_TOL * (1.0 + (self.b / self.a * (n as f64 - 1.0)).abs()) {
            return Err(Error::DegenerateParams(format!(
                "1 + (b/a)(n-1) vanishes for a = {}, b = {}, n = {n}",
                self.a, self.b
            )));
        }
        Ok(d)
    }

    /// Einstein constant forced on a quasi-conformally flat space:
    /// `α = r / (1 + (b/a)(n-2)) · [-b/a + (1/n)(1 + 2b(n-1)/a)]`.
    pub fn qc_einstein_constant(&self, n: usize, r: f64) -> Result<f64> {
        let denom = self.qc_denominator(n)?;
        let nf = n as f64;
        let ratio = self.b / self.a;
        Ok(r / denom * (-ratio + (1.0 + 2.0 * ratio * (nf - 1.0)) / nf))
    }
}

fn check_bundle(bundle: &CurvatureBundle) -> Result<usize> {
    let n = bundle.dim();
    check_dim(n, bundle.riemann.dim())?;
    check_dim(n, bundle.ricci.dim())?;
    Ok(n)
}

/// Quasi-conformal curvature tensor
/// `C̄* = a R̄ + b [S∧g four-term block] - (r/n)(a/(n-1) + 2b) G`.
pub fn quasi_conformal(bundle: &CurvatureBundle, params: QcParams) -> Result<Tensor04> {
    let n = check_bundle(bundle)?;
    let g = &bundle.metric;
    let nf = n as f64;
    let coeff = bundle.scalar / nf * (params.a / (nf - 1.0) + 2.0 * params.b);
    let block = hyper_shape(g, &bundle.ricci)?;
    let wedge = wedge_gg(g);
    Ok(Tensor04::from_fn(n, |i, j, k, l| {
        params.a * bundle.riemann[[i, j, k, l]] + params.b * block[[i, j, k, l]] - coeff * wedge[[i, j, k, l]]
    }))
}

/// Pseudo-projective curvature tensor
/// `P̄ = a R̄ + b [S_jk g_il - S_ik g_jl] - (r/n)(a/(n-1) + b) G`.
pub fn pseudo_projective(bundle: &CurvatureBundle, params: QcParams) -> Result<Tensor04> {
    params.require_ab()?;
    let n = check_bundle(bundle)?;
    let g = &bundle.metric;
    let nf = n as f64;
    let coeff = bundle.scalar / nf * (params.a / (nf - 1.0) + params.b);
    let block = pseudo_shape(g, &bundle.ricci)?;
    let wedge = wedge_gg(g);
    Ok(Tensor04::from_fn(n, |i, j, k, l| {
        params.a * bundle.riemann[[i, j, k, l]] + params.b * block[[i, j, k, l]] - coeff * wedge[[i, j, k, l]]
    }))
}

/// W2 curvature tensor `W̄2 = R̄ + (1/(n-1)) [g_ik S_jl - g_jk S_il]`.
pub fn w2(bundle: &CurvatureBundle) -> Result<Tensor04> {
    let n = check_bundle(bundle)?;
    if n < 2 {
        return Err(Error::InvalidConfig("W2 tensor needs n >= 2".into()));
    }
    let g = &bundle.metric;
    let s = &bundle.ricci;
    let c = 1.0 / (n as f64 - 1.0);
    Ok(Tensor04::from_fn(n, |i, j, k, l| {
        bundle.riemann[[i, j, k, l]] + c * (g.g(i, k) * s[(j, l)] - g.g(j, k) * s[(i, l)])
    }))
}

/// Weyl conformal curvature tensor
/// `W = R̄ - (1/(n-2)) [S∧g four-term block] + r/((n-1)(n-2)) G`.
pub fn weyl(bundle: &CurvatureBundle) -> Result<Tensor04> {
    let n = check_bundle(bundle)?;
    if n < 3 {
        return Err(Error::InvalidConfig("Weyl tensor needs n >= 3".into()));
    }
    let nf = n as f64;
    let block = hyper_shape(&bundle.metric, &bundle.ricci)?;
    let wedge = wedge_gg(&bundle.metric);
    let c1 = 1.0 / (nf - 2.0);
    let c2 = bundle.scalar / ((nf - 1.0) * (nf - 2.0));
    Ok(Tensor04::from_fn(n, |i, j, k, l| {
        bundle.riemann[[i, j, k, l]] - c1 * block[[i, j, k, l]] + c2 * wedge[[i, j, k, l]]
    }))
}

/// Error unless `r` agrees with `g^jk S_jk` within [`TRACE_TOL`] (relative).
pub fn ensure_trace_consistent(s: &Bilinear, g: &Metric, r: f64) -> Result<()> {
    check_dim(g.dim(), s.dim())?;
    let trace = g.trace(s);
    if (trace - r).abs() > TRACE_TOL * (1.0 + trace.abs()) {
        return Err(Error::InconsistentScalarCurvature { given: r, trace });
    }
    Ok(())
}

/// Solve `C̄* = 0` for the curvature tensor:
/// `R̄ = -(b/a)[S∧g four-term block] + (r/n)(1/(n-1) + 2b/a) G`.
///
/// `s` and `r` are taken as given; see [`reconstruct_qc_flat_strict`].
pub fn reconstruct_qc_flat(s: &Bilinear, g: &Metric, r: f64, params: QcParams) -> Result<Tensor04> {
    params.require_a()?;
    let n = g.dim();
    check_dim(n, s.dim())?;
    let nf = n as f64;
    let ratio = params.b / params.a;
    let coeff = r / nf * (1.0 / (nf - 1.0) + 2.0 * ratio);
    let block = hyper_shape(g, s)?;
    let wedge = wedge_gg(g);
    Ok(Tensor04::from_fn(n, |i, j, k, l| -ratio * block[[i, j, k, l]] + coeff * wedge[[i, j, k, l]]))
}

pub fn reconstruct_qc_flat_strict(s: &Bilinear, g: &Metric, r: f64, params: QcParams) -> Result<Tensor04> {
    ensure_trace_consistent(s, g, r)?;
    reconstruct_qc_flat(s, g, r, params)
}

/// Solve `P̄ = 0` for the curvature tensor:
/// `R̄ = -(b/a)[S_jk g_il - S_ik g_jl] + (r/(a n))(a/(n-1) + b) G`.
pub fn reconstruct_pp_flat(s: &Bilinear, g: &Metric, r: f64, params: QcParams) -> Result<Tensor04> {
    params.require_ab()?;
    let n = g.dim();
    check_dim(n, s.dim())?;
    let nf = n as f64;
    let ratio = params.b / params.a;
    let coeff = r / (params.a * nf) * (params.a / (nf - 1.0) + params.b);
    let block = pseudo_shape(g, s)?;
    let wedge = wedge_gg(g);
    Ok(Tensor04::from_fn(n, |i, j, k, l| -ratio * block[[i, j, k, l]] + coeff * wedge[[i, j, k, l]]))
}

pub fn reconstruct_pp_flat_strict(s: &Bilinear, g: &Metric, r: f64, params: QcParams) -> Result<Tensor04> {
    ensure_trace_consistent(s, g, r)?;
    reconstruct_pp_flat(s, g, r, params)
}

/// Solve `W̄2 = 0` for the curvature tensor:
/// `R̄_ijkl = (1/(n-1)) [g_jk S_il - g_ik S_jl]`.
pub fn reconstruct_w2_flat(s: &Bilinear, g: &Metric) -> Result<Tensor04> {
    let n = g.dim();
    check_dim(n, s.dim())?;
    if n < 2 {
        return Err(Error::InvalidConfig("W2 tensor needs n >= 2".into()));
    }
    let c = 1.0 / (n as f64 - 1.0);
    Ok(Tensor04::from_fn(n, |i, j, k, l| c * (g.g(j, k) * s[(i, l)] - g.g(i, k) * s[(j, l)])))
}
