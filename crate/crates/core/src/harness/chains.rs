//! Pointwise building blocks of the flatness derivations.
//!
//! Each function produces the tensor a derivation step asserts, from
//! tangent-space data (metric, covectors, scalar curvature), and raises the
//! error a vanishing denominator would cause.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, Matrix};
use crate::tensor::{ricci_operator, Bilinear, Metric, OneForm};

/// Relative size below which a denominator counts as zero.
pub const DENOMINATOR_TOL: f64 = 1e-12;

/// `A(ρ₂) − D(ρ₂)` with `ρ₂` dual to `B`.
pub fn kappa(g: &Metric, a: &OneForm, b: &OneForm, d: &OneForm) -> f64 {
    g.inner_forms(a, b) - g.inner_forms(d, b)
}

/// `S = α₁ A⊗B̄ + α₂ D⊗B̄` with `α₁ = −α₂ = 1/(A(ρ₂) − D(ρ₂))`.
pub fn ricci_from_forms(g: &Metric, a: &OneForm, b: &OneForm, d: &OneForm, b_bar: &OneForm) -> Result<Bilinear> {
    let n = g.dim();
    for f in [a, b, d, b_bar] {
        check_dim(n, f.dim())?;
    }
    let k = kappa(g, a, b, d);
    let scale = (a.norm() + d.norm()) * b.norm();
    if k.abs() <= DENOMINATOR_TOL * (1.0 + scale) {
        return Err(Error::DegenerateDenominator(format!("A(rho_2) - D(rho_2) = {k:e}")));
    }
    let alpha1 = 1.0 / k;
    Ok(Bilinear::from_fn(n, |x, y| alpha1 * a[x] * b_bar[y] - alpha1 * d[x] * b_bar[y]))
}

/// Largest `|[A(X) − D(X)] B(QY) − S(X,Y)[A(ρ₂) − D(ρ₂)]|`.
///
/// `B(QY)` contracts `B♯` into the first slot of `S`, as the derivation
/// does when it substitutes `ρ₂`.
pub fn forms_identity_residual(g: &Metric, s: &Bilinear, a: &OneForm, b: &OneForm, d: &OneForm) -> Result<f64> {
    let n = g.dim();
    let bq = ricci_operator(s, g)?.pull_back(b);
    let k = kappa(g, a, b, d);
    let mut worst: f64 = 0.0;
    for x in 0..n {
        for y in 0..n {
            worst = worst.max(((a[x] - d[x]) * bq[y] - s[(x, y)] * k).abs());
        }
    }
    Ok(worst)
}

/// `A = −(1/r)(B̄ + D̄)` from the covector values `B̄ = B∘Q`, `D̄ = D∘Q`.
pub fn a_from_barred(r: f64, b_bar: &OneForm, d_bar: &OneForm) -> Result<OneForm> {
    if r.abs() <= DENOMINATOR_TOL * (1.0 + b_bar.norm() + d_bar.norm()) {
        return Err(Error::ZeroScalarCurvature(r));
    }
    Ok((b_bar + d_bar).scale(-1.0 / r))
}

/// `S = α̃ T⊗T` with `α̃ = r / T(ρ)`.
pub fn rank_one_ricci(g: &Metric, t: &OneForm, r: f64) -> Result<Bilinear> {
    check_dim(g.dim(), t.dim())?;
    let t_rho = g.inner_forms(t, t);
    if t_rho <= DENOMINATOR_TOL * (1.0 + t.norm() * t.norm()) {
        return Err(Error::DegenerateDenominator(format!("T(rho) = {t_rho:e}")));
    }
    Ok(Bilinear::outer(t, t).scale(r / t_rho))
}

/// `δ(B⊗B − B⊗D − D⊗B + D⊗D)`.
pub fn expanded_bd(b: &OneForm, d: &OneForm, delta: f64) -> Bilinear {
    let n = b.dim();
    Bilinear::from_fn(n, |i, j| delta * (b[i] * b[j] - b[i] * d[j] - d[i] * b[j] + d[i] * d[j]))
}

/// Move `(a, P)` along the gauge `(a + w c, P − c g)` to `tr_g P = 0`.
pub fn gauge_fix(a: f64, p: &Bilinear, g: &Metric, weight: f64) -> (f64, Bilinear) {
    let c = g.trace(p) / g.dim() as f64;
    (a + weight * c, p - &g.as_bilinear().scale(c))
}

/// Solve `S = L(S)` together with `tr_g S = r` for an affine map `L` on
/// `n × n` bilinear forms, by a dense linear solve over the `n²`
/// components.
pub fn contraction_fixed_point(g: &Metric, r: f64, map: impl Fn(&Bilinear) -> Result<Bilinear>) -> Result<Bilinear> {
    let n = g.dim();
    let nn = n * n;
    let offset = map(&Bilinear::zeros(n))?;
    let mut system = Matrix::zeros(nn + 1, nn);
    for col in 0..nn {
        let unit = Bilinear::from_fn(n, |i, j| if i * n + j == col { 1.0 } else { 0.0 });
        let image = map(&unit)?;
        for row in 0..nn {
            let linear = image.as_slice()[row] - offset.as_slice()[row];
            system[(row, col)] = if row == col { 1.0 - linear } else { -linear };
        }
        system[(nn, col)] = g.inv(col / n, col % n);
    }
    let mut rhs: Vec<f64> = offset.as_slice().to_vec();
    rhs.push(r);
    let fit = linalg::least_squares(&system, &rhs, 1e-10);
    if fit.rank < nn {
        return Err(Error::DegenerateParams(format!(
            "contraction map has a {}-dimensional family of fixed points",
            nn - fit.rank
        )));
    }
    if fit.residual_norm > 1e-8 * (1.0 + linalg::norm(&rhs)) {
        return Err(Error::DegenerateParams("contraction map has no fixed point with the given trace".into()));
    }
    Ok(Bilinear::from_fn(n, |i, j| fit.solution[i * n + j]))
}
