use alloc::vec::Vec;

use super::brute::{self, Mat};
use super::chains::{
    a_from_barred, contraction_fixed_point, expanded_bd, forms_identity_residual, gauge_fix, kappa, rank_one_ricci,
    ricci_from_forms,
};
use super::{guard_check, rel, run_check, CheckResult, CheckSpec, HarnessReport, Outcome, Sampler, TrialConfig};
use super::REJECTION_THRESHOLD;
use crate::chart::CurvatureBundle;
use crate::classify::{
    einstein_check, hyper_quasi_constant_fit, pseudo_quasi_constant_fit, quasi_constant_fit, quasi_einstein_decompose,
};
use crate::error::{Error, Result};
use crate::gencurv::{self, reconstruct_pp_flat, reconstruct_qc_flat, reconstruct_w2_flat, QcParams};
use crate::tensor::{
    hyper_shape, pseudo_shape, quasi_constant_shape, ricci_contract, ricci_operator, wedge_gg, Bilinear, Metric, OneForm,
    Tensor04,
};
use crate::wrs::{self, OneFormSystem};

/// Eigenvalue clustering tolerance used by the quasi-Einstein verdicts.
const CLUSTER_TOL: f64 = 1e-6;

fn mat(b: &Bilinear) -> Mat {
    let n = b.dim();
    (0..n).map(|i| (0..n).map(|j| b[(i, j)]).collect()).collect()
}

fn metric_mat(g: &Metric) -> Mat {
    mat(&g.as_bilinear())
}

fn stream(section: u64, check: u64) -> u64 {
    section * 64 + check
}

#[derive(Clone, Copy)]
enum Flatness {
    QuasiConformal,
    PseudoProjective,
    W2,
}

impl Flatness {
    fn reconstruct(self, s: &Bilinear, g: &Metric, r: f64, p: QcParams) -> Result<Tensor04> {
        match self {
            Flatness::QuasiConformal => reconstruct_qc_flat(s, g, r, p),
            Flatness::PseudoProjective => reconstruct_pp_flat(s, g, r, p),
            Flatness::W2 => reconstruct_w2_flat(s, g),
        }
    }

    fn brute(self, s: &Mat, g: &Mat, r: f64, p: QcParams) -> brute::T4 {
        match self {
            Flatness::QuasiConformal => brute::reconstruct_qc(s, g, r, p.a, p.b),
            Flatness::PseudoProjective => brute::reconstruct_pp(s, g, r, p.a, p.b),
            Flatness::W2 => brute::reconstruct_w2(s, g),
        }
    }

    /// Contraction of the reconstruction as a closed-form expression in
    /// `S`, `g`, `r`, assuming `tr_g S = r`.
    fn closed_contraction(self, s: &Bilinear, g: &Metric, r: f64, p: QcParams) -> Bilinear {
        let n = g.dim() as f64;
        let ratio = p.b / p.a;
        let gb = g.as_bilinear();
        match self {
            Flatness::QuasiConformal => &(&s.scale(n - 2.0) + &gb.scale(r)).scale(-ratio)
                + &gb.scale(r / n * (1.0 / (n - 1.0) + 2.0 * ratio) * (n - 1.0)),
            Flatness::PseudoProjective => {
                &s.scale(-ratio * (n - 1.0)) + &gb.scale(r / n * (1.0 + ratio * (n - 1.0)))
            }
            Flatness::W2 => (&gb.scale(r) - s).scale(1.0 / (n - 1.0)),
        }
    }

    /// The Einstein constant the derivation states.
    fn alpha(self, n: usize, r: f64, p: QcParams) -> Result<f64> {
        match self {
            Flatness::QuasiConformal => p.qc_einstein_constant(n, r),
            Flatness::PseudoProjective => {
                p.pp_denominator(n)?;
                Ok(r / n as f64)
            }
            Flatness::W2 => Ok(r / n as f64),
        }
    }
}

/// Self-consistent Ricci tensor of a flat reconstruction is `α g`.
fn contraction_check(config: &TrialConfig, stream: u64, spec: CheckSpec, kind: Flatness) -> Result<Vec<CheckResult>> {
    let n = config.n;
    let p = config.params;
    run_check(config, stream, spec, |s, first| {
        let g = s.metric(n);
        let sym = s.symmetric(n);
        let r = g.trace(&sym);
        let map = |x: &Bilinear| ricci_contract(&kind.reconstruct(x, &g, r, p)?, &g);
        let alpha = kind.alpha(n, r, p)?;
        let fixed = contraction_fixed_point(&g, r, map)?;
        let einstein = g.as_bilinear().scale(alpha);
        let gmax = g.components().max_abs();
        let mut residual = rel((&fixed - &einstein).max_abs(), alpha.abs() * gmax);
        residual = residual.max(rel(alpha - r / n as f64, r.abs()).abs());
        residual = residual.max(einstein_check(&fixed, &g, f64::INFINITY)?.residual);
        let image = map(&sym)?;
        let closed = kind.closed_contraction(&sym, &g, r, p);
        residual = residual.max(rel((&image - &closed).max_abs(), closed.max_abs()));
        if let Flatness::W2 = kind {
            let back = reconstruct_w2_flat(&fixed, &g)?;
            let bundle = CurvatureBundle::from_parts(g.clone(), back.clone(), fixed.clone(), r)?;
            residual = residual.max(rel(gencurv::w2(&bundle)?.max_abs(), back.max_abs()));
        }
        let twin = first.then(|| {
            let gm = metric_mat(&g);
            let t = kind.brute(&mat(&sym), &gm, r, p);
            let contracted = brute::contract(&t, &brute::inverse(&gm));
            rel(brute::max_diff2(&contracted, image.as_slice()), image.max_abs())
        });
        Ok(Outcome { residual, twin, info: None })
    })
}

fn draw_forms(s: &mut Sampler, g: &Metric, n: usize) -> Result<(OneForm, OneForm, OneForm)> {
    s.until("A(rho_2) = D(rho_2)", |s| {
        let (a, b, d) = (s.form(n), s.form(n), s.form(n));
        (kappa(g, &a, &b, &d).abs() > REJECTION_THRESHOLD).then_some((a, b, d))
    })
}

/// `S = α₁ A⊗B̄ + α₂ D⊗B̄` satisfies `[A(X) − D(X)] B(QY) = S(X,Y)[A(ρ₂) − D(ρ₂)]`.
fn forms_check(config: &TrialConfig, stream: u64, spec: CheckSpec) -> Result<Vec<CheckResult>> {
    let n = config.n;
    run_check(config, stream, spec, |s, first| {
        let g = s.metric(n);
        let (a, b, d) = draw_forms(s, &g, n)?;
        let b_bar = s.form(n);
        let ricci = ricci_from_forms(&g, &a, &b, &d, &b_bar)?;
        let k = kappa(&g, &a, &b, &d);
        let scale = ricci.max_abs() * k.abs();
        let mut residual = rel(forms_identity_residual(&g, &ricci, &a, &b, &d)?, scale);
        // B∘Q computed from S reproduces B̄
        let bq = ricci_operator(&ricci, &g)?.pull_back(&b);
        residual = residual.max(rel((&bq - &b_bar).max_abs(), b_bar.max_abs()));
        let twin = first.then(|| {
            let (bs, bres) =
                brute::forms_chain(&metric_mat(&g), a.as_slice(), b.as_slice(), d.as_slice(), b_bar.as_slice());
            rel(brute::max_diff2(&bs, ricci.as_slice()), ricci.max_abs()).max(rel(bres, scale))
        });
        Ok(Outcome { residual, twin, info: None })
    })
}

/// Data of the "non-zero constant scalar curvature" branch: `A` from
/// `B̄`, `D̄` and `r`, then `S` of the `A⊗B̄ − D⊗B̄` form.
struct ConstantScalarDraw {
    g: Metric,
    d: OneForm,
    b_bar: OneForm,
    d_bar: OneForm,
    r: f64,
    alpha1: f64,
    ricci: Bilinear,
}

fn draw_constant_scalar(s: &mut Sampler, n: usize) -> Result<ConstantScalarDraw> {
    let g = s.metric(n);
    let r = s.nonzero_scalar();
    let (b, d, b_bar, d_bar, a) = s.until("A(rho_2) = D(rho_2)", |s| {
        let (b, d, b_bar, d_bar) = (s.form(n), s.form(n), s.form(n), s.form(n));
        let a = a_from_barred(r, &b_bar, &d_bar).ok()?;
        (kappa(&g, &a, &b, &d).abs() > REJECTION_THRESHOLD).then_some((b, d, b_bar, d_bar, a))
    })?;
    let ricci = ricci_from_forms(&g, &a, &b, &d, &b_bar)?;
    let alpha1 = 1.0 / kappa(&g, &a, &b, &d);
    Ok(ConstantScalarDraw {
        g,
        d,
        b_bar,
        d_bar,
        r,
        alpha1,
        ricci,
    })
}

/// `α₁ B̄(Z)(−1/r)[B̄(X) + D̄(X)] + α₂ D(X) B̄(Z)`, indexed `(X, Z)`.
fn substituted_ricci(c: &ConstantScalarDraw) -> Bilinear {
    let alpha2 = -c.alpha1;
    Bilinear::from_fn(c.g.dim(), |x, z| {
        c.alpha1 * c.b_bar[z] * (-1.0 / c.r) * (c.b_bar[x] + c.d_bar[x]) + alpha2 * c.d[x] * c.b_bar[z]
    })
}

/// Reconstruction from the substituted Ricci tensor is `α G + shape(P)`
/// with `P = −(b/a) S`, and the matching fit finds it.
fn constant_scalar_shape_check(
    config: &TrialConfig,
    stream: u64,
    spec: CheckSpec,
    kind: Flatness,
) -> Result<Vec<CheckResult>> {
    let n = config.n;
    let p = config.params;
    let nf = n as f64;
    let ratio = p.b / p.a;
    run_check(config, stream, spec, |s, first| {
        let c = draw_constant_scalar(s, n)?;
        let g = &c.g;
        let mut residual = rel((&substituted_ricci(&c) - &c.ricci).max_abs(), c.ricci.max_abs());
        let curvature = kind.reconstruct(&c.ricci, g, c.r, p)?;
        let alpha2 = -c.alpha1;
        let (coefficient, shape_p, fit, weight) = match kind {
            Flatness::QuasiConformal => {
                let shape_p = Bilinear::from_fn(n, |y, z| {
                    -ratio
                        * (-(c.alpha1 / c.r) * c.b_bar[y] * c.b_bar[z] + alpha2 * c.d[y] * c.b_bar[z]
                            - (c.alpha1 / c.r) * c.b_bar[z] * c.d_bar[y])
                });
                let l = c.r / nf * (1.0 / (nf - 1.0) + 2.0 * ratio);
                (l, shape_p, hyper_quasi_constant_fit(&curvature, g, config.tolerance)?, 2.0)
            }
            _ => {
                let shape_p = Bilinear::from_fn(n, |y, z| {
                    -ratio * (-(c.alpha1 / c.r) * c.b_bar[z] * (c.b_bar[y] + c.d_bar[y]) + alpha2 * c.d[y] * c.b_bar[z])
                });
                let alpha = c.r / (p.a * nf) * (p.a / (nf - 1.0) + p.b);
                (alpha, shape_p, pseudo_quasi_constant_fit(&curvature, g, config.tolerance)?, 1.0)
            }
        };
        residual = residual.max(rel((&shape_p - &c.ricci.scale(-ratio)).max_abs(), shape_p.max_abs()));
        let shape = match kind {
            Flatness::QuasiConformal => hyper_shape(g, &shape_p)?,
            _ => pseudo_shape(g, &shape_p)?,
        };
        let direct = &wedge_gg(g).scale(coefficient) + &shape;
        residual = residual.max(rel((&direct - &curvature).max_abs(), curvature.max_abs()));
        residual = residual.max(fit.residual);
        let (a0, p0) = gauge_fix(coefficient, &shape_p, g, weight);
        residual = residual.max(rel((fit.a - a0).abs(), a0.abs()));
        residual = residual.max(rel((&fit.p - &p0).max_abs(), p0.max_abs()));
        let twin = first.then(|| {
            let gm = metric_mat(g);
            let t = match kind {
                Flatness::QuasiConformal => brute::hyper_form(&gm, coefficient, &mat(&shape_p)),
                _ => brute::pseudo_form(&gm, coefficient, &mat(&shape_p)),
            };
            rel(brute::max_diff4(&t, curvature.as_slice()), curvature.max_abs())
        });
        Ok(Outcome { residual, twin, info: None })
    })
}

struct RankOneDraw {
    g: Metric,
    b: OneForm,
    d: OneForm,
    t: OneForm,
    t_rho: f64,
    r: f64,
    ricci: Bilinear,
}

fn draw_rank_one(s: &mut Sampler, n: usize) -> Result<RankOneDraw> {
    let g = s.metric(n);
    let (b, d) = s.until("T(rho) = 0", |s| {
        let (b, d) = (s.form(n), s.form(n));
        (g.inner_forms(&(&b - &d), &(&b - &d)) > REJECTION_THRESHOLD).then_some((b, d))
    })?;
    let r = s.nonzero_scalar();
    let t = &b - &d;
    let t_rho = g.inner_forms(&t, &t);
    let ricci = rank_one_ricci(&g, &t, r)?;
    Ok(RankOneDraw {
        g,
        b,
        d,
        t,
        t_rho,
        r,
        ricci,
    })
}

/// `S = (r/T(ρ)) T⊗T` satisfies `r T(X)T(Z) = T(ρ) S(X,Z)`, the `T`
/// identities, and is quasi-Einstein with `p = 0`, `q = r`, `ω ∥ T`.
fn rank_one_check(config: &TrialConfig, stream: u64, spec: CheckSpec) -> Result<Vec<CheckResult>> {
    let n = config.n;
    run_check(config, stream, spec, |s, first| {
        let c = draw_rank_one(s, n)?;
        let g = &c.g;
        let t = &c.t;
        let scale = c.r.abs() * t.max_abs() * t.max_abs();
        let identity = Bilinear::from_fn(n, |x, z| c.r * t[z] * t[x] - c.t_rho * c.ricci[(x, z)]);
        let mut residual = rel(identity.max_abs(), scale);
        residual = residual.max(rel((g.trace(&c.ricci) - c.r).abs(), c.r.abs()));
        let bundle = CurvatureBundle::from_parts(g.clone(), Tensor04::zeros(n), c.ricci.clone(), c.r)?;
        let forms = OneFormSystem::new(OneForm::zeros(n), c.b.clone(), c.d.clone())?;
        let (r19, r111) = wrs::t_identities(&bundle, &forms)?;
        residual = residual.max(rel(r19, c.r.abs() * t.max_abs())).max(rel(r111, c.ricci.max_abs() * t.max_abs()));
        match quasi_einstein_decompose(&c.ricci, g, CLUSTER_TOL)?.quasi_einstein() {
            Some(qe) => {
                let unit = t.scale(1.0 / libm::sqrt(c.t_rho));
                let omega = (&qe.omega - &unit).max_abs().min((&qe.omega + &unit).max_abs());
                residual = residual
                    .max(rel(qe.p.abs(), c.r.abs()))
                    .max(rel((qe.q - c.r).abs(), c.r.abs()))
                    .max(omega)
                    .max(qe.residual);
            }
            None => residual = residual.max(1.0),
        }
        let twin = first.then(|| {
            let bs = brute::rank_one(&metric_mat(g), t.as_slice(), c.r);
            rel(brute::max_diff2(&bs, c.ricci.as_slice()), c.ricci.max_abs())
        });
        Ok(Outcome { residual, twin, info: None })
    })
}

/// Reconstruction from `S = α̃ T⊗T` is `γ G + δ shape(T)` and the
/// fit recovers `γ` and `δ = −(b/a) α̃`.
fn rank_one_shape_check(
    config: &TrialConfig,
    stream: u64,
    spec: CheckSpec,
    kind: Flatness,
) -> Result<Vec<CheckResult>> {
    let n = config.n;
    let p = config.params;
    let nf = n as f64;
    let ratio = p.b / p.a;
    run_check(config, stream, spec, |s, first| {
        let c = draw_rank_one(s, n)?;
        let g = &c.g;
        let alpha_tilde = c.r / c.t_rho;
        let delta = -ratio * alpha_tilde;
        let curvature = kind.reconstruct(&c.ricci, g, c.r, p)?;
        let tt = Bilinear::outer(&c.t, &c.t);
        let (coefficient, shape) = match kind {
            Flatness::QuasiConformal => {
                (c.r / nf * (1.0 / (nf - 1.0) + 2.0 * ratio), quasi_constant_shape(g, &c.t)?)
            }
            _ => (c.r / (p.a * nf) * (p.a / (nf - 1.0) + p.b), pseudo_shape(g, &tt)?),
        };
        let direct = &wedge_gg(g).scale(coefficient) + &shape.scale(delta);
        let mut residual = rel((&direct - &curvature).max_abs(), curvature.max_abs());
        let mut info = None;
        match kind {
            Flatness::QuasiConformal => {
                let fit = quasi_constant_fit(&curvature, g, config.tolerance)?;
                residual = residual.max(fit.residual);
                residual = residual.max(rel((fit.a - coefficient).abs(), coefficient.abs()));
                residual = residual.max(rel((fit.b / c.t_rho - delta).abs(), delta.abs()));
                match &fit.form {
                    Some(w) => {
                        let unit = c.t.scale(1.0 / libm::sqrt(c.t_rho));
                        residual = residual.max((w - &unit).max_abs().min((w + &unit).max_abs()));
                    }
                    None => residual = residual.max(1.0),
                }
                if !fit.accepted {
                    residual = residual.max(1.0);
                }
                info = Some(rel(fit.weyl_norm, curvature.norm()));
            }
            _ => {
                let fit = pseudo_quasi_constant_fit(&curvature, g, config.tolerance)?;
                residual = residual.max(fit.residual);
                let (a0, _) = gauge_fix(coefficient, &tt.scale(delta), g, 1.0);
                residual = residual.max(rel((fit.a - a0).abs(), a0.abs()));
                // the gauge-fixed P is δ (T⊗T − T(ρ)/n g); project to read off δ
                let basis = &tt - &g.as_bilinear().scale(c.t_rho / nf);
                let d_fit = crate::linalg::dot(fit.p.as_slice(), basis.as_slice())
                    / crate::linalg::dot(basis.as_slice(), basis.as_slice());
                residual = residual.max(rel((d_fit - delta).abs(), delta.abs()));
                residual = residual.max(rel((&fit.p - &basis.scale(delta)).max_abs(), basis.max_abs() * delta.abs()));
            }
        }
        let twin = first.then(|| {
            let t = kind.brute(&mat(&c.ricci), &metric_mat(g), c.r, p);
            rel(brute::max_diff4(&t, curvature.as_slice()), curvature.max_abs())
        });
        Ok(Outcome { residual, twin, info })
    })
}

/// Writing `T = B − D` turns the `δ T⊗T` block into the `δ(BB − BD − DB + DD)` block.
fn expansion_check(config: &TrialConfig, stream: u64, spec: CheckSpec, kind: Flatness) -> Result<Vec<CheckResult>> {
    let n = config.n;
    let p = config.params;
    let nf = n as f64;
    let ratio = p.b / p.a;
    run_check(config, stream, spec, |s, first| {
        let c = draw_rank_one(s, n)?;
        let g = &c.g;
        let delta = -ratio * c.r / c.t_rho;
        let expanded = expanded_bd(&c.b, &c.d, delta);
        let tt = Bilinear::outer(&c.t, &c.t);
        let curvature = kind.reconstruct(&c.ricci, g, c.r, p)?;
        let (coefficient, lhs, rhs, fit) = match kind {
            Flatness::QuasiConformal => (
                c.r / nf * (1.0 / (nf - 1.0) + 2.0 * ratio),
                hyper_shape(g, &expanded)?,
                quasi_constant_shape(g, &c.t)?.scale(delta),
                hyper_quasi_constant_fit(&curvature, g, config.tolerance)?,
            ),
            _ => (
                c.r / (p.a * nf) * (p.a / (nf - 1.0) + p.b),
                pseudo_shape(g, &expanded)?,
                pseudo_shape(g, &tt)?.scale(delta),
                pseudo_quasi_constant_fit(&curvature, g, config.tolerance)?,
            ),
        };
        let mut residual = rel((&lhs - &rhs).max_abs(), rhs.max_abs());
        let direct = &wedge_gg(g).scale(coefficient) + &lhs;
        residual = residual.max(rel((&direct - &curvature).max_abs(), curvature.max_abs()));
        residual = residual.max(fit.residual);
        let twin = first.then(|| {
            let bm: Mat = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| delta * (c.b[i] * c.b[j] - c.b[i] * c.d[j] - c.d[i] * c.b[j] + c.d[i] * c.d[j]))
                        .collect()
                })
                .collect();
            let gm = metric_mat(g);
            let t = match kind {
                Flatness::QuasiConformal => brute::hyper_form(&gm, coefficient, &bm),
                _ => brute::pseudo_form(&gm, coefficient, &bm),
            };
            rel(brute::max_diff4(&t, curvature.as_slice()), curvature.max_abs())
        });
        Ok(Outcome { residual, twin, info: None })
    })
}

fn kappa_guard(config: &TrialConfig, stream: u64, id: &'static str) -> CheckResult {
    let n = config.n;
    let mut s = Sampler::new(config.seed, stream);
    let g = s.metric(n);
    let (b, d, w) = (s.form(n), s.form(n), s.form(n));
    // v with v(ρ₂) = 0, so A = D + v gives A(ρ₂) = D(ρ₂)
    let v = &w - &b.scale(g.inner_forms(&w, &b) / g.inner_forms(&b, &b));
    let a = &d + &v;
    let b_bar = s.form(n);
    guard_check(
        id,
        "A(rho_2) = D(rho_2) raises DegenerateDenominator",
        ricci_from_forms(&g, &a, &b, &d, &b_bar).map(|_| ()),
        |e| matches!(e, Error::DegenerateDenominator(_)),
    )
}

fn t_rho_guard(config: &TrialConfig, stream: u64, id: &'static str) -> CheckResult {
    let n = config.n;
    let mut s = Sampler::new(config.seed, stream);
    let g = s.metric(n);
    let b = s.form(n);
    // B = D, so T = B - D vanishes
    let t = OneFormSystem::new(OneForm::zeros(n), b.clone(), b).expect("forms share the dimension").t;
    guard_check(
        id,
        "T(rho) = 0 raises DegenerateDenominator",
        rank_one_ricci(&g, &t, s.nonzero_scalar()).map(|_| ()),
        |e| matches!(e, Error::DegenerateDenominator(_)),
    )
}

fn zero_scalar_guard(config: &TrialConfig, stream: u64) -> Result<CheckResult> {
    let n = config.n;
    let mut s = Sampler::new(config.seed, stream);
    let g = s.metric(n);
    let sym = s.symmetric(n);
    // trace-free Ricci gives r = 0
    let ricci = &sym - &g.as_bilinear().scale(g.trace(&sym) / n as f64);
    let r = g.trace(&ricci);
    let bundle = CurvatureBundle::from_parts(g, Tensor04::zeros(n), ricci, r)?;
    let (b, d) = (s.form(n), s.form(n));
    let direct = wrs::a_from_bd(&bundle, &b, &d);
    let barred = a_from_barred(0.0, &b, &d);
    let both = match (direct, barred) {
        (Err(e @ Error::ZeroScalarCurvature(_)), Err(Error::ZeroScalarCurvature(_))) => Err(e),
        _ => Ok(()),
    };
    Ok(guard_check(
        "g-r0",
        "r = 0 raises ZeroScalarCurvature when solving for A",
        both,
        |e| matches!(e, Error::ZeroScalarCurvature(_)),
    ))
}

fn params_guard(config: &TrialConfig, stream: u64, id: &'static str, kind: Flatness) -> CheckResult {
    let n = config.n;
    let nf = n as f64;
    let mut s = Sampler::new(config.seed, stream);
    let g = s.metric(n);
    let r = s.nonzero_scalar();
    let (params, description) = match kind {
        Flatness::QuasiConformal => (QcParams::new(nf - 2.0, -1.0), "1 + (b/a)(n-2) = 0 raises DegenerateParams"),
        _ => (QcParams::new(nf - 1.0, -1.0), "1 + (b/a)(n-1) = 0 raises DegenerateParams"),
    };
    let closed = kind.alpha(n, r, params).map(|_| ());
    let solved =
        contraction_fixed_point(&g, r, |x| ricci_contract(&kind.reconstruct(x, &g, r, params)?, &g)).map(|_| ());
    let both = match (closed, solved) {
        (Err(e @ Error::DegenerateParams(_)), Err(Error::DegenerateParams(_))) => Err(e),
        _ => Ok(()),
    };
    guard_check(id, description, both, |e| matches!(e, Error::DegenerateParams(_)))
}

fn spec(id: &'static str, description: &'static str) -> CheckSpec {
    CheckSpec {
        id,
        description,
        info_description: None,
    }
}

/// Quasi-conformally flat chain.
pub fn verify_section2(config: &TrialConfig) -> Result<HarnessReport> {
    config.validate()?;
    let mut checks = Vec::new();
    let qc = Flatness::QuasiConformal;
    checks.extend(contraction_check(
        config,
        stream(2, 1),
        spec("c1", "contraction of the quasi-conformal reconstruction forces S = alpha g"),
        qc,
    )?);
    checks.extend(forms_check(
        config,
        stream(2, 2),
        spec("c2", "S = alpha_1 A x B' + alpha_2 D x B' satisfies the rho_2 identity"),
    )?);
    checks.extend(constant_scalar_shape_check(
        config,
        stream(2, 3),
        spec("c3", "constant scalar curvature: reconstruction is of hyper quasi-constant curvature"),
        qc,
    )?);
    checks.extend(rank_one_check(
        config,
        stream(2, 4),
        spec("c4", "S = (r / T(rho)) T x T is quasi-Einstein with respect to T"),
    )?);
    checks.extend(rank_one_shape_check(
        config,
        stream(2, 5),
        CheckSpec {
            id: "c5",
            description: "reconstruction from S = alpha~ T x T is of quasi-constant curvature with l and delta",
            info_description: Some("relative Weyl norm of the reconstruction (not asserted)"),
        },
        qc,
    )?);
    checks.extend(expansion_check(
        config,
        stream(2, 6),
        spec("c6", "expanding T = B - D gives the hyper quasi-constant block delta(BB - BD - DB + DD)"),
        qc,
    )?);
    checks.push(zero_scalar_guard(config, stream(2, 40))?);
    checks.push(kappa_guard(config, stream(2, 41), "g-kappa"));
    checks.push(t_rho_guard(config, stream(2, 42), "g-trho"));
    checks.push(params_guard(config, stream(2, 43), "g-params", qc));
    Ok(HarnessReport {
        section: 2,
        config: *config,
        checks,
    })
}

/// Pseudo-projectively flat chain.
pub fn verify_section3(config: &TrialConfig) -> Result<HarnessReport> {
    config.validate()?;
    let mut checks = Vec::new();
    let pp = Flatness::PseudoProjective;
    checks.extend(contraction_check(
        config,
        stream(3, 1),
        spec("d1", "contraction of the pseudo-projective reconstruction forces S = (r/n) g"),
        pp,
    )?);
    checks.extend(forms_check(
        config,
        stream(3, 2),
        spec("d2", "S = alpha_2 A x B' + alpha_3 D x B' satisfies the rho_2 identity"),
    )?);
    checks.extend(constant_scalar_shape_check(
        config,
        stream(3, 3),
        spec("d3", "constant scalar curvature: reconstruction is of pseudo quasi-constant curvature"),
        pp,
    )?);
    checks.extend(rank_one_check(
        config,
        stream(3, 4),
        spec("d4", "S = (r / T(rho)) T x T is quasi-Einstein with respect to T"),
    )?);
    checks.extend(rank_one_shape_check(
        config,
        stream(3, 5),
        spec("d5", "reconstruction from S = alpha~_1 T x T is gamma_1 G + delta_1 T x T block"),
        pp,
    )?);
    checks.extend(expansion_check(
        config,
        stream(3, 6),
        spec("d6", "expanding T = B - D gives the pseudo quasi-constant block delta_1(BB - BD - DB + DD)"),
        pp,
    )?);
    checks.push(kappa_guard(config, stream(3, 41), "g-kappa"));
    checks.push(t_rho_guard(config, stream(3, 42), "g-trho"));
    checks.push(params_guard(config, stream(3, 43), "g-params", pp));
    Ok(HarnessReport {
        section: 3,
        config: *config,
        checks,
    })
}

/// W2-flat chain.
pub fn verify_section4(config: &TrialConfig) -> Result<HarnessReport> {
    config.validate()?;
    let mut checks = Vec::new();
    checks.extend(contraction_check(
        config,
        stream(4, 1),
        spec("e1", "contraction of the W2 reconstruction forces S = (r/n) g"),
        Flatness::W2,
    )?);
    checks.extend(forms_check(
        config,
        stream(4, 2),
        spec("e2", "S = alpha_1 A x B' + alpha_2 D x B' satisfies the rho_2 identity"),
    )?);
    checks.extend(rank_one_check(
        config,
        stream(4, 3),
        spec("e3", "S = (r / T(rho)) T x T is quasi-Einstein with q = alpha~_1 T(rho), p = 0"),
    )?);
    checks.push(kappa_guard(config, stream(4, 41), "g-kappa"));
    checks.push(t_rho_guard(config, stream(4, 42), "g-trho"));
    Ok(HarnessReport {
        section: 4,
        config: *config,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(n: usize) -> TrialConfig {
        TrialConfig {
            seed: 5,
            trials: 5,
            n,
            ..TrialConfig::default()
        }
    }

    #[test]
    fn sections_pass_on_small_runs() {
        for n in [4, 5] {
            for report in super::super::verify_all(&small(n)).unwrap() {
                for c in &report.checks {
                    assert!(c.passed || c.informational, "section {} {}: {}", report.section, c.id, c.max_residual);
                }
                assert!(report.passed());
            }
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = super::super::verify_all(&small(4)).unwrap();
        let b = super::super::verify_all(&small(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_params_propagate() {
        let config = TrialConfig {
            params: QcParams::new(2.0, -1.0),
            ..small(4)
        };
        assert!(matches!(verify_section2(&config), Err(Error::DegenerateParams(_))));
    }

    #[test]
    fn every_check_has_a_twin() {
        let report = verify_section2(&small(4)).unwrap();
        for id in ["c1", "c2", "c3", "c4", "c5", "c6"] {
            assert!(report.checks.iter().any(|c| c.id == alloc::format!("{id}-twin")));
        }
        assert_eq!(report.checks.iter().filter(|c| c.id.starts_with("g-")).count(), 4);
    }
}
