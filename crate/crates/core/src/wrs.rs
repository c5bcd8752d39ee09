//! Weakly symmetric and weakly Ricci symmetric structure at a point.
//!
//! Index layout follows [`CurvatureBundle`]: `nabla_ricci[[i, j, k]]` is
//! `(∇_i S)_jk` and `nabla_riemann[[m, i, j, k, l]]` is `(∇_m R̄)_ijkl`.

use alloc::vec::Vec;

use crate::chart::{CurvatureBundle, MetricField};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, Matrix};
use crate::tensor::{Bilinear, Grid, Metric, OneForm, Tensor04};

/// Associated 1-forms of a weakly (Ricci) symmetric structure.
///
/// `t` is always `b - d`. `c` and `e` are only used by the full weak
/// symmetry check; when absent they default to `b` and `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneFormSystem {
    pub a: OneForm,
    pub b: OneForm,
    pub d: OneForm,
    pub t: OneForm,
    pub c: Option<OneForm>,
    pub e: Option<OneForm>,
}

impl OneFormSystem {
    pub fn new(a: OneForm, b: OneForm, d: OneForm) -> Result<Self> {
        check_dim(a.dim(), b.dim())?;
        check_dim(a.dim(), d.dim())?;
        let t = &b - &d;
        Ok(OneFormSystem { a, b, d, t, c: None, e: None })
    }

    pub fn zeros(n: usize) -> Self {
        OneFormSystem::new(OneForm::zeros(n), OneForm::zeros(n), OneForm::zeros(n)).unwrap()
    }

    pub fn with_ce(mut self, c: OneForm, e: OneForm) -> Result<Self> {
        check_dim(self.dim(), c.dim())?;
        check_dim(self.dim(), e.dim())?;
        self.c = Some(c);
        self.e = Some(e);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn c_or_b(&self) -> &OneForm {
        self.c.as_ref().unwrap_or(&self.b)
    }

    pub fn e_or_d(&self) -> &OneForm {
        self.e.as_ref().unwrap_or(&self.d)
    }

    /// True unless `a`, `b` and `d` all vanish.
    pub fn is_nontrivial(&self) -> bool {
        !(self.a.is_zero() && self.b.is_zero() && self.d.is_zero())
    }

    /// The vector field ρ dual to `t`.
    pub fn rho(&self, g: &Metric) -> Vec<f64> {
        g.raise(&self.t)
    }

    /// `T(ρ) = g(ρ, ρ)`.
    pub fn t_of_rho(&self, g: &Metric) -> f64 {
        g.inner_forms(&self.t, &self.t)
    }
}

fn check_forms(n: usize, forms: &OneFormSystem) -> Result<()> {
    check_dim(n, forms.dim())
}

/// Right hand side `A_i S_jk + B_j S_ik + D_k S_ij` of the weak Ricci
/// symmetry condition.
pub fn wrs_rhs(s: &Bilinear, forms: &OneFormSystem) -> Result<Grid<3>> {
    let n = s.dim();
    check_forms(n, forms)?;
    let mut out = Grid::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[[i, j, k]] = forms.a[i] * s[(j, k)] + forms.b[j] * s[(i, k)] + forms.d[k] * s[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Largest violation of `(∇_i S)_jk = A_i S_jk + B_j S_ik + D_k S_ij`,
/// divided by `1 + ‖∇S‖`.
pub fn wrs_residual(bundle: &CurvatureBundle, forms: &OneFormSystem) -> Result<f64> {
    let n = bundle.dim();
    check_forms(n, forms)?;
    let rhs = wrs_rhs(&bundle.ricci, forms)?;
    let worst = bundle
        .nabla_ricci
        .as_slice()
        .iter()
        .zip(rhs.as_slice())
        .fold(0.0f64, |m, (l, r)| m.max((l - r).abs()));
    Ok(worst / (1.0 + bundle.nabla_ricci.norm()))
}

/// Right hand side of the weak symmetry condition
/// `A_m R̄_ijkl + B_i R̄_mjkl + C_j R̄_imkl + D_k R̄_ijml + E_l R̄_ijkm`.
pub fn weak_symmetry_rhs(riemann: &Tensor04, forms: &OneFormSystem) -> Result<Grid<5>> {
    let n = riemann.dim();
    check_forms(n, forms)?;
    let (a, b, c, d, e) = (&forms.a, &forms.b, forms.c_or_b(), &forms.d, forms.e_or_d());
    let mut out = Grid::zeros(n);
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        out[[m, i, j, k, l]] = a[m] * riemann[[i, j, k, l]]
                            + b[i] * riemann[[m, j, k, l]]
                            + c[j] * riemann[[i, m, k, l]]
                            + d[k] * riemann[[i, j, m, l]]
                            + e[l] * riemann[[i, j, k, m]];
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Largest absolute violation of the weak symmetry condition given
/// `∇R̄` and `R̄` at a point.
pub fn weak_symmetry_residual_at(nabla_riemann: &Grid<5>, riemann: &Tensor04, forms: &OneFormSystem) -> Result<f64> {
    check_dim(riemann.dim(), nabla_riemann.dim())?;
    let rhs = weak_symmetry_rhs(riemann, forms)?;
    Ok(nabla_riemann
        .as_slice()
        .iter()
        .zip(rhs.as_slice())
        .fold(0.0f64, |m, (l, r)| m.max((l - r).abs())))
}

/// Weak symmetry residual of a chart metric at `point`.
pub fn weak_symmetry_residual(field: &MetricField, point: &[f64], forms: &OneFormSystem) -> Result<f64> {
    let bundle = field.curvature_bundle(point)?;
    let nabla = field.nabla_riemann(point)?;
    weak_symmetry_residual_at(&nabla, &bundle.riemann, forms)
}

/// Largest `|B(R(X,Z)U) + D(R(X,U)Z)|` over basis vectors, i.e.
/// `R̄_ijkm B^m + R̄_ikjm D^m`.
pub fn ws_to_wrs_condition(bundle: &CurvatureBundle, forms: &OneFormSystem) -> Result<f64> {
    let n = bundle.dim();
    check_forms(n, forms)?;
    let b_up = bundle.metric.raise(&forms.b);
    let d_up = bundle.metric.raise(&forms.d);
    let r = &bundle.riemann;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut v = 0.0;
                for m in 0..n {
                    v += r[[i, j, k, m]] * b_up[m] + r[[i, k, j, m]] * d_up[m];
                }
                worst = worst.max(v.abs());
            }
        }
    }
    Ok(worst)
}

/// Largest `|dr(X) - r A(X) - B(QX) - D(QX)|` over basis vectors.
pub fn check_dr_identity(bundle: &CurvatureBundle, forms: &OneFormSystem) -> Result<f64> {
    let n = bundle.dim();
    check_forms(n, forms)?;
    let q = &bundle.ricci_operator;
    let bq = q.pull_back(&forms.b);
    let dq = q.pull_back(&forms.d);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let v = bundle.dr[i] - bundle.scalar * forms.a[i] - bq[i] - dq[i];
        worst = worst.max(v.abs());
    }
    Ok(worst)
}

/// `A(X) = -(1/r)[B(QX) + D(QX)]`, valid for non-zero scalar curvature.
pub fn a_from_bd(bundle: &CurvatureBundle, b: &OneForm, d: &OneForm) -> Result<OneForm> {
    let n = bundle.dim();
    check_dim(n, b.dim())?;
    check_dim(n, d.dim())?;
    let r = bundle.scalar;
    if r.abs() <= 1e-12 * (1.0 + bundle.ricci.norm()) {
        return Err(Error::ZeroScalarCurvature(r));
    }
    let q = &bundle.ricci_operator;
    let sum = &q.pull_back(b) + &q.pull_back(d);
    Ok(sum.scale(-1.0 / r))
}

/// `(max_i |T(Q e_i) - r T(e_i)|, max_ijk |T_j S_ik - T_k S_ij|)`.
pub fn t_identities(bundle: &CurvatureBundle, forms: &OneFormSystem) -> Result<(f64, f64)> {
    let n = bundle.dim();
    check_forms(n, forms)?;
    let t = &forms.t;
    let tq = bundle.ricci_operator.pull_back(t);
    let res19 = (0..n).fold(0.0f64, |m, i| m.max((tq[i] - bundle.scalar * t[i]).abs()));
    let s = &bundle.ricci;
    let mut res111: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                res111 = res111.max((t[j] * s[(i, k)] - t[k] * s[(i, j)]).abs());
            }
        }
    }
    Ok((res19, res111))
}

/// Singular values at or below this fraction of the largest count as zero
/// in the 1-form recovery.
pub const KERNEL_THRESHOLD: f64 = 1e-10;

/// Outcome of [`recover_one_forms`].
#[derive(Debug, Clone)]
pub struct Recovery {
    pub forms: OneFormSystem,
    /// [`wrs_residual`] of the recovered forms.
    pub residual: f64,
    /// Frobenius norm of the least-squares misfit over all `n³` equations.
    pub lsq_residual: f64,
    pub kernel_dim: usize,
    /// Kernel basis of the design operator, each of length `3n` laid out
    /// as `(A, B, D)`.
    pub kernel: Vec<Vec<f64>>,
}

/// Design matrix of the linear map `(A, B, D) ↦ A_i S_jk + B_j S_ik + D_k S_ij`,
/// rows indexed by `(i, j, k)` row-major.
pub fn design_matrix(s: &Bilinear) -> Matrix {
    let n = s.dim();
    let mut m = Matrix::zeros(n * n * n, 3 * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let row = (i * n + j) * n + k;
                m[(row, i)] += s[(j, k)];
                m[(row, n + j)] += s[(i, k)];
                m[(row, 2 * n + k)] += s[(i, j)];
            }
        }
    }
    m
}

/// Minimum-norm least-squares solution for `A`, `B`, `D` given `S` and
/// `∇S` in the bundle.
pub fn recover_one_forms(bundle: &CurvatureBundle) -> Result<Recovery> {
    let n = bundle.dim();
    if bundle.ricci.norm() <= 1e-13 {
        return Err(Error::DegenerateRicci);
    }
    let design = design_matrix(&bundle.ricci);
    let fit = linalg::least_squares(&design, bundle.nabla_ricci.as_slice(), KERNEL_THRESHOLD);
    let x = &fit.solution;
    let forms = OneFormSystem::new(
        OneForm::new(x[..n].to_vec()),
        OneForm::new(x[n..2 * n].to_vec()),
        OneForm::new(x[2 * n..].to_vec()),
    )?;
    let residual = wrs_residual(bundle, &forms)?;
    Ok(Recovery {
        forms,
        residual,
        lsq_residual: fit.residual_norm,
        kernel_dim: fit.kernel.len(),
        kernel: fit.kernel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{quasi_constant_shape, wedge_gg};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_form(rng: &mut ChaCha8Rng, n: usize) -> OneForm {
        OneForm::from_fn(n, |_| rng.gen_range(-1.0..1.0))
    }

    fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> Metric {
        let m = Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let mtm = m.transpose().matmul(&m);
        Metric::from_fn(n, |i, j| mtm[(i, j)] + if i == j { n as f64 } else { 0.0 }).unwrap()
    }

    fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Bilinear {
        let p = Bilinear::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        Bilinear::from_fn(n, |i, j| p[(i, j)] + p[(j, i)])
    }

    fn synthetic(g: Metric, s: Bilinear, forms: &OneFormSystem) -> CurvatureBundle {
        let nabla = wrs_rhs(&s, forms).unwrap();
        let r = g.trace(&s);
        let n = g.dim();
        CurvatureBundle::from_parts(g, Tensor04::zeros(n), s, r)
            .unwrap()
            .with_nabla_ricci(nabla)
            .unwrap()
    }

    #[test]
    fn einstein_parallel_ricci_has_zero_residual() {
        let g = Metric::euclidean(3);
        let b = CurvatureBundle::from_riemann(g.clone(), wedge_gg(&g)).unwrap();
        assert_eq!(wrs_residual(&b, &OneFormSystem::zeros(3)).unwrap(), 0.0);
        assert_eq!(ws_to_wrs_condition(&b, &OneFormSystem::zeros(3)).unwrap(), 0.0);
        assert_eq!(check_dr_identity(&b, &OneFormSystem::zeros(3)).unwrap(), 0.0);
    }

    #[test]
    fn synthetic_rhs_satisfies_condition() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let g = random_metric(&mut rng, 4);
        let s = random_symmetric(&mut rng, 4);
        let bd = random_form(&mut rng, 4);
        let forms = OneFormSystem::new(random_form(&mut rng, 4), bd.clone(), bd).unwrap();
        let b = synthetic(g, s, &forms);
        assert!(wrs_residual(&b, &forms).unwrap() < 1e-15);
        assert!(b.nabla_ricci_symmetry_defect() < 1e-15);
    }

    #[test]
    fn antisymmetric_part_is_the_t_obstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let n = rng.gen_range(2..6);
            let s = random_symmetric(&mut rng, n);
            let forms =
                OneFormSystem::new(random_form(&mut rng, n), random_form(&mut rng, n), random_form(&mut rng, n))
                    .unwrap();
            let rhs = wrs_rhs(&s, &forms).unwrap();
            let t = &forms.t;
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let anti = 0.5 * (rhs[[i, j, k]] - rhs[[i, k, j]]);
                        let expected = 0.5 * (t[j] * s[(i, k)] - t[k] * s[(i, j)]);
                        assert!((anti - expected).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn unequal_b_d_generic_s_is_not_weakly_ricci_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let g = random_metric(&mut rng, 4);
        let s = random_symmetric(&mut rng, 4);
        let forms =
            OneFormSystem::new(random_form(&mut rng, 4), random_form(&mut rng, 4), random_form(&mut rng, 4)).unwrap();
        // symmetric ∇S can't match a non-symmetric right hand side
        let rhs = wrs_rhs(&s, &forms).unwrap();
        let mut sym = Grid::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    sym[[i, j, k]] = 0.5 * (rhs[[i, j, k]] + rhs[[i, k, j]]);
                }
            }
        }
        let r = g.trace(&s);
        let b = CurvatureBundle::from_parts(g, Tensor04::zeros(4), s, r)
            .unwrap()
            .with_nabla_ricci(sym)
            .unwrap();
        let (_, res111) = t_identities(&b, &forms).unwrap();
        let raw = wrs_residual(&b, &forms).unwrap() * (1.0 + b.nabla_ricci.norm());
        assert!(raw > 1e-3);
        assert!((raw - 0.5 * res111).abs() < 1e-12);
    }

    #[test]
    fn weak_symmetry_rhs_matches_synthetic() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let g = random_metric(&mut rng, 3);
        let r = wedge_gg(&g).scale(0.7);
        let forms = OneFormSystem::new(random_form(&mut rng, 3), random_form(&mut rng, 3), random_form(&mut rng, 3))
            .unwrap()
            .with_ce(random_form(&mut rng, 3), random_form(&mut rng, 3))
            .unwrap();
        let nabla = weak_symmetry_rhs(&r, &forms).unwrap();
        assert!(weak_symmetry_residual_at(&nabla, &r, &forms).unwrap() < 1e-15);
        assert!(weak_symmetry_residual_at(&Grid::zeros(3), &r, &forms).unwrap() > 1e-3);
        assert_eq!(weak_symmetry_residual_at(&Grid::zeros(3), &r, &OneFormSystem::zeros(3)).unwrap(), 0.0);
    }

    #[test]
    fn sphere_forms_zero_are_weakly_symmetric() {
        let f = MetricField::from_entries(&["theta", "phi"], &[(0, 0, "1"), (1, 1, "sin(theta)^2")]).unwrap();
        let res = weak_symmetry_residual(&f, &[0.9, 0.1], &OneFormSystem::zeros(2)).unwrap();
        assert!(res < 1e-13);
        let forms = OneFormSystem::new(OneForm::basis(2, 0), OneForm::basis(2, 1), OneForm::basis(2, 0)).unwrap();
        assert!(weak_symmetry_residual(&f, &[0.9, 0.1], &forms).unwrap() > 1e-3);
    }

    #[test]
    fn ws_to_wrs_loop_oracle() {
        let g = Metric::euclidean(3);
        let b = CurvatureBundle::from_riemann(g.clone(), wedge_gg(&g)).unwrap();
        let e0 = OneForm::basis(3, 0);
        let forms = OneFormSystem::new(OneForm::zeros(3), e0.clone(), e0).unwrap();
        // R̄_ijk0 + R̄_ikj0 with R̄ = G: (g_jk g_i0 - g_ik g_j0) + (g_jk g_i0 - g_ij g_k0)
        let mut expected: f64 = 0.0;
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let v = 2.0 * d(j, k) * d(i, 0) - d(i, k) * d(j, 0) - d(i, j) * d(k, 0);
                    expected = expected.max(f64::abs(v));
                }
            }
        }
        assert_eq!(ws_to_wrs_condition(&b, &forms).unwrap(), expected);
        let flat = CurvatureBundle::from_riemann(g, Tensor04::zeros(3)).unwrap();
        assert_eq!(ws_to_wrs_condition(&flat, &forms).unwrap(), 0.0);
    }

    #[test]
    fn a_from_bd_cases() {
        let g = Metric::euclidean(4);
        let b = CurvatureBundle::from_riemann(g.clone(), wedge_gg(&g)).unwrap();
        let z = OneForm::zeros(4);
        assert!(a_from_bd(&b, &z, &z).unwrap().is_zero());
        let bd = OneForm::new(alloc::vec![0.3, -1.0, 2.0, 0.5]);
        let a = a_from_bd(&b, &bd, &bd).unwrap();
        // Q = (r/n) id, so A = -(1/n)(B + D) = -(2/n) B
        let expected = bd.scale(-2.0 / 4.0);
        assert!((&a - &expected).max_abs() < 1e-15);
        // A from (1.8) makes dr = 0 consistent
        let forms = OneFormSystem::new(a, bd.clone(), bd.clone()).unwrap();
        assert!(check_dr_identity(&b, &forms).unwrap() < 1e-14);
        let flat = CurvatureBundle::from_riemann(g, Tensor04::zeros(4)).unwrap();
        assert!(matches!(a_from_bd(&flat, &bd, &bd), Err(Error::ZeroScalarCurvature(_))));
    }

    #[test]
    fn t_identities_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let g = random_metric(&mut rng, 4);
        let t = random_form(&mut rng, 4);
        let c = 1.7;
        let s = Bilinear::outer(&t, &t).scale(c);
        let r = g.trace(&s);
        let b = CurvatureBundle::from_parts(g.clone(), Tensor04::zeros(4), s, r).unwrap();
        let forms = OneFormSystem::new(OneForm::zeros(4), t.clone(), OneForm::zeros(4)).unwrap();
        assert!((r - c * forms.t_of_rho(&g)).abs() < 1e-13);
        let (r19, r111) = t_identities(&b, &forms).unwrap();
        assert!(r19 < 1e-13 && r111 < 1e-14);

        let eu = Metric::euclidean(4);
        let b = CurvatureBundle::from_parts(eu.clone(), Tensor04::zeros(4), eu.as_bilinear(), 4.0).unwrap();
        let (r19, r111) = t_identities(&b, &forms).unwrap();
        assert!((r19 - 3.0 * t.max_abs()).abs() < 1e-14);
        // T_j δ_ik - T_k δ_ij at i = k != j leaves T_j, so the residual is max |T|.
        assert!((r111 - t.max_abs()).abs() < 1e-15);
        assert_eq!(t_identities(&b, &OneFormSystem::zeros(4)).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn recovery_of_synthetic_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let g = random_metric(&mut rng, 4);
        let s = Bilinear::from_fn(4, |i, j| if i == j { 1.0 + i as f64 } else { 0.0 });
        let bd = random_form(&mut rng, 4);
        let forms = OneFormSystem::new(random_form(&mut rng, 4), bd.clone(), bd).unwrap();
        let b = synthetic(g, s, &forms);
        let rec = recover_one_forms(&b).unwrap();
        assert!(rec.residual < 1e-12);
        assert!(rec.lsq_residual < 1e-11);
        assert_eq!(rec.kernel_dim, 0);
        assert!((&rec.forms.a - &forms.a).max_abs() < 1e-9);
        assert!((&rec.forms.b - &forms.b).max_abs() < 1e-9);
        assert!((&rec.forms.d - &forms.d).max_abs() < 1e-9);
        assert_eq!(wrs_residual(&b, &rec.forms).unwrap(), rec.residual);
    }

    #[test]
    fn recovery_with_parallel_ricci_gives_zero_forms() {
        let g = Metric::euclidean(3);
        let s = Bilinear::from_fn(3, |i, j| if i == j { [1.0, 2.0, 5.0][i] } else { 0.0 });
        let b = CurvatureBundle::from_parts(g, Tensor04::zeros(3), s, 8.0).unwrap();
        let rec = recover_one_forms(&b).unwrap();
        assert!(rec.forms.a.is_zero() && rec.forms.b.is_zero() && rec.forms.d.is_zero());
        assert_eq!(rec.residual, 0.0);
    }

    #[test]
    fn rank_one_ricci_leaves_a_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let g = random_metric(&mut rng, 4);
        let t = random_form(&mut rng, 4);
        let s = Bilinear::outer(&t, &t).scale(2.0);
        let forms =
            OneFormSystem::new(random_form(&mut rng, 4), random_form(&mut rng, 4), random_form(&mut rng, 4)).unwrap();
        let b = synthetic(g, s, &forms);
        let rec = recover_one_forms(&b).unwrap();
        assert!(rec.residual < 1e-9);
        assert!(rec.kernel_dim > 0);
        assert_eq!(rec.kernel.len(), rec.kernel_dim);
    }

    #[test]
    fn degenerate_ricci_is_rejected() {
        let g = Metric::euclidean(3);
        let b = CurvatureBundle::from_riemann(g, Tensor04::zeros(3)).unwrap();
        assert!(matches!(recover_one_forms(&b), Err(Error::DegenerateRicci)));
    }

    #[test]
    fn dimension_mismatch() {
        let g = Metric::euclidean(3);
        let b = CurvatureBundle::from_riemann(g.clone(), quasi_constant_shape(&g, &OneForm::basis(3, 0)).unwrap())
            .unwrap();
        assert!(matches!(
            wrs_residual(&b, &OneFormSystem::zeros(4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
