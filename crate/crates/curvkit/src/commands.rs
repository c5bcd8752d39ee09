//! The four subcommands as functions returning a [`Report`].

use std::path::Path;

use curvkit_core::chart::second_bianchi_residual;
use curvkit_core::classify::{self, QuasiEinsteinVerdict, Tolerances};
use curvkit_core::gencurv::{pseudo_projective, quasi_conformal, w2, weyl};
use curvkit_core::harness::{self, HarnessReport, TrialConfig};
use curvkit_core::wrs;
use curvkit_core::{Bilinear, OneForm, QcParams, Tensor04};
use serde_json::{json, Value};

use crate::error::Result;
use crate::manifest::Manifest;
use crate::report::{nested, Report};

/// Relative tolerance on the algebraic Riemann symmetries.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Relative tolerance on the differential Bianchi identities.
pub const BIANCHI_TOL: f64 = 1e-8;
/// Below this every curvature norm counts as zero for the flat verdict.
pub const FLAT_TOL: f64 = 1e-12;

fn manifest_input(path: &Path, m: &Manifest, points: &[Vec<f64>]) -> Value {
    let entries: Vec<Value> = m
        .entries
        .iter()
        .map(|(i, j, e)| json!({"i": m.coords[*i], "j": m.coords[*j], "expression": e}))
        .collect();
    json!({
        "manifest": path.display().to_string(),
        "dim": m.dim,
        "coords": m.coords,
        "metric": entries,
        "points": points,
    })
}

fn bilinear(b: &Bilinear) -> Value {
    nested(b.as_slice(), &[b.dim(), b.dim()])
}

fn tensor4(t: &Tensor04) -> Value {
    let n = t.dim();
    nested(t.as_slice(), &[n, n, n, n])
}

fn form(f: &OneForm) -> Value {
    json!(f.as_slice())
}

fn load(path: &Path, at: Option<&str>) -> Result<(Manifest, Vec<Vec<f64>>)> {
    let m = Manifest::load(path)?;
    let points = m.sample_points(at)?;
    Ok((m, points))
}

/// Pointwise geometry and identity residuals.
pub fn curvature(path: &Path, at: Option<&str>) -> Result<Report> {
    let (m, points) = load(path, at)?;
    let field = m.field()?;
    let n = m.dim;
    let mut report = Report::new("curvature", manifest_input(path, &m, &points));
    let mut results = Vec::new();
    let mut flat = true;
    for p in &points {
        let b = field.curvature_bundle(p)?;
        let nabla_r = field.nabla_riemann(p)?;
        let gamma = b.christoffel.as_ref().expect("chart bundles carry Christoffel symbols");
        let sym = b.riemann.riemann_symmetry();
        let r_scale = 1.0 + b.riemann.max_abs();
        report.residual("riemann.antisymmetry_first", sym.antisymmetry_first / r_scale);
        report.residual("riemann.antisymmetry_last", sym.antisymmetry_last / r_scale);
        report.residual("riemann.pair_symmetry", sym.pair_symmetry / r_scale);
        report.residual("riemann.first_bianchi", sym.first_bianchi / r_scale);
        report.residual("nabla_ricci.symmetry", b.nabla_ricci_symmetry_defect() / (1.0 + b.nabla_ricci.max_abs()));
        report.residual("bianchi.contracted", b.contracted_bianchi_residual() / (1.0 + b.dr.max_abs()));
        report.residual("bianchi.second", second_bianchi_residual(&nabla_r) / (1.0 + nabla_r.max_abs()));
        let norms = json!({
            "riemann": b.riemann.norm(),
            "ricci": b.ricci.norm(),
            "scalar": b.scalar.abs(),
            "nabla_ricci": b.nabla_ricci.norm(),
        });
        flat &= b.riemann.norm() <= FLAT_TOL && b.ricci.norm() <= FLAT_TOL && b.nabla_ricci.norm() <= FLAT_TOL;
        results.push(json!({
            "at": p,
            "metric": nested(b.metric.components().as_slice(), &[n, n]),
            "christoffel": nested(gamma.as_slice(), &[n, n, n]),
            "riemann": tensor4(&b.riemann),
            "ricci": bilinear(&b.ricci),
            "ricci_operator": nested(b.ricci_operator.matrix().as_slice(), &[n, n]),
            "scalar": b.scalar,
            "nabla_ricci": nested(b.nabla_ricci.as_slice(), &[n, n, n]),
            "dr": form(&b.dr),
            "norms": norms,
        }));
    }
    let residuals = report.residuals.clone();
    for (name, value) in &residuals {
        let tol = if name.starts_with("bianchi") { BIANCHI_TOL } else { SYMMETRY_TOL };
        report.check(name.clone(), *value, tol);
    }
    report.verdict("flat", flat);
    report.results = json!({ "points": results });
    Ok(report.finish())
}

fn quasi_einstein_json(v: &QuasiEinsteinVerdict) -> Value {
    match v {
        QuasiEinsteinVerdict::QuasiEinstein(qe) => json!({
            "verdict": "quasi-einstein",
            "p": qe.p,
            "q": qe.q,
            "omega": form(&qe.omega),
            "residual": qe.residual,
        }),
        QuasiEinsteinVerdict::Einstein { alpha, residual } => json!({
            "verdict": "einstein",
            "alpha": alpha,
            "residual": residual,
        }),
        QuasiEinsteinVerdict::NotQuasiEinstein { eigenvalues } => json!({
            "verdict": "not-quasi-einstein",
            "eigenvalues": eigenvalues,
        }),
    }
}

fn shape_json(f: &classify::ShapeFit) -> Value {
    json!({
        "accepted": f.accepted,
        "a": f.a,
        "p": bilinear(&f.p),
        "residual": f.residual,
        "kernel_dim": f.kernel_dim,
    })
}

pub struct ClassifyOptions {
    pub tolerance: f64,
    pub cluster: f64,
    pub params: QcParams,
}

/// Classification and generalized curvature tensor norms.
pub fn classify(path: &Path, at: Option<&str>, options: &ClassifyOptions) -> Result<Report> {
    let (m, points) = load(path, at)?;
    let field = m.field()?;
    let mut input = manifest_input(path, &m, &points);
    input["tolerance"] = json!(options.tolerance);
    input["cluster_tolerance"] = json!(options.cluster);
    input["a"] = json!(options.params.a);
    input["b"] = json!(options.params.b);
    let mut report = Report::new("classify", input);
    let tol = Tolerances {
        residual: options.tolerance,
        cluster: options.cluster,
    };
    let mut verdicts: Vec<(&str, bool)> = vec![
        ("einstein", true),
        ("quasi_einstein", true),
        ("quasi_constant", true),
        ("hyper_quasi_constant", true),
        ("pseudo_quasi_constant", true),
        ("conformally_flat", true),
        ("quasi_conformally_flat", true),
        ("pseudo_projectively_flat", true),
        ("w2_flat", true),
    ];
    let mut results = Vec::new();
    for p in &points {
        let b = field.curvature_bundle(p)?;
        let c = classify::classify(&b, tol)?;
        let qc = quasi_conformal(&b, options.params)?.norm();
        let pp = pseudo_projective(&b, options.params)?.norm();
        let w = w2(&b)?.norm();
        let weyl_norm = if b.dim() >= 3 { Some(weyl(&b)?.norm()) } else { None };
        let scale = 1.0 + b.riemann.norm();
        let flat_tensor = |x: f64| x <= options.tolerance * scale;
        let outcome = [
            c.einstein.passed,
            c.quasi_einstein.quasi_einstein().is_some(),
            c.quasi_constant.accepted,
            c.hyper_quasi_constant.accepted,
            c.pseudo_quasi_constant.accepted,
            c.conformal.flat,
            flat_tensor(qc),
            flat_tensor(pp),
            flat_tensor(w),
        ];
        for (slot, ok) in verdicts.iter_mut().zip(outcome) {
            slot.1 &= ok;
        }
        report.residual("einstein", c.einstein.residual);
        if let Some(qe) = c.quasi_einstein.quasi_einstein() {
            report.residual("quasi_einstein", qe.residual);
        }
        report.residual("quasi_constant", c.quasi_constant.residual);
        report.residual("hyper_quasi_constant", c.hyper_quasi_constant.residual);
        report.residual("pseudo_quasi_constant", c.pseudo_quasi_constant.residual);
        report.residual("norm.quasi_conformal", qc);
        report.residual("norm.pseudo_projective", pp);
        report.residual("norm.w2", w);
        if let Some(wn) = weyl_norm {
            report.residual("norm.weyl", wn);
        }
        let q = &c.quasi_constant;
        results.push(json!({
            "at": p,
            "einstein": {"alpha": c.einstein.alpha, "residual": c.einstein.residual, "passed": c.einstein.passed},
            "quasi_einstein": quasi_einstein_json(&c.quasi_einstein),
            "quasi_constant": {
                "accepted": q.accepted,
                "a": q.a,
                "b": q.b,
                "form": q.form.as_ref().map(form),
                "residual": q.residual,
                "weyl_norm": q.weyl_norm,
                "constant_curvature": q.constant_curvature,
            },
            "hyper_quasi_constant": shape_json(&c.hyper_quasi_constant),
            "pseudo_quasi_constant": shape_json(&c.pseudo_quasi_constant),
            "conformal": {"weyl_norm": c.conformal.weyl_norm, "flat": c.conformal.flat},
            "norms": {
                "riemann": b.riemann.norm(),
                "ricci": b.ricci.norm(),
                "scalar": b.scalar.abs(),
                "nabla_ricci": b.nabla_ricci.norm(),
                "quasi_conformal": qc,
                "pseudo_projective": pp,
                "w2": w,
                "weyl": weyl_norm,
            },
        }));
    }
    for (name, ok) in verdicts {
        report.verdict(name, ok);
    }
    report.results = json!({ "points": results });
    Ok(report)
}

/// Weakly Ricci symmetric 1-form recovery and the related identities.
pub fn wrs(path: &Path, at: Option<&str>, tolerance: f64) -> Result<Report> {
    let (m, points) = load(path, at)?;
    let field = m.field()?;
    let mut input = manifest_input(path, &m, &points);
    input["tolerance"] = json!(tolerance);
    let mut report = Report::new("wrs", input);
    let mut results = Vec::new();
    let mut symmetric = true;
    for p in &points {
        let b = field.curvature_bundle(p)?;
        let nabla_r = field.nabla_riemann(p)?;
        let rec = wrs::recover_one_forms(&b)?;
        let forms = &rec.forms;
        let weak = wrs::weak_symmetry_residual_at(&nabla_r, &b.riemann, forms)?;
        let ws_to_wrs = wrs::ws_to_wrs_condition(&b, forms)?;
        let dr_identity = wrs::check_dr_identity(&b, forms)?;
        let (t19, t111) = wrs::t_identities(&b, forms)?;
        // A from B and D needs r != 0; the flat-scalar case is reported as null
        let a_gap = match wrs::a_from_bd(&b, &forms.b, &forms.d) {
            Ok(a) => Some((&a - &forms.a).max_abs()),
            Err(curvkit_core::Error::ZeroScalarCurvature(_)) => None,
            Err(e) => return Err(e.into()),
        };
        report.residual("wrs", rec.residual);
        report.residual("lsq", rec.lsq_residual);
        report.residual("weak_symmetry", weak);
        report.residual("ws_to_wrs", ws_to_wrs);
        report.residual("dr_identity", dr_identity);
        report.residual("t_identity_trace", t19);
        report.residual("t_identity_symmetry", t111);
        if let Some(gap) = a_gap {
            report.residual("a_from_bd", gap);
        }
        symmetric &= rec.residual <= tolerance;
        let kernel: Vec<Value> = rec.kernel.iter().map(|k| json!(k)).collect();
        results.push(json!({
            "at": p,
            "forms": {"a": form(&forms.a), "b": form(&forms.b), "d": form(&forms.d), "t": form(&forms.t)},
            "rho": forms.rho(&b.metric),
            "t_of_rho": forms.t_of_rho(&b.metric),
            "residual": rec.residual,
            "lsq_residual": rec.lsq_residual,
            "kernel_dim": rec.kernel_dim,
            "kernel": kernel,
            "weak_symmetry_residual": weak,
            "ws_to_wrs_residual": ws_to_wrs,
            "dr_identity_residual": dr_identity,
            "t_identity_residuals": [t19, t111],
            "a_from_bd_gap": a_gap,
            "scalar": b.scalar,
        }));
    }
    report.verdict("weakly_ricci_symmetric", symmetric);
    report.results = json!({ "points": results });
    Ok(report.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Section {
    Two,
    Three,
    Four,
    All,
}

fn section_json(r: &HarnessReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "description": c.description,
                "trials": c.trials,
                "max_residual": c.max_residual,
                "passed": c.passed,
                "informational": c.informational,
            })
        })
        .collect();
    json!({
        "section": r.section,
        "passed": r.passed(),
        "max_residual": r.max_residual(),
        "checks": checks,
    })
}

/// Randomized theorem checks; exit status 1 unless every check passes.
pub fn verify(section: Section, config: &TrialConfig) -> Result<Report> {
    config.validate()?;
    let input = json!({
        "section": match section {
            Section::Two => json!(2),
            Section::Three => json!(3),
            Section::Four => json!(4),
            Section::All => json!("all"),
        },
        "n": config.n,
        "trials": config.trials,
        "seed": config.seed,
        "tolerance": config.tolerance,
        "a": config.params.a,
        "b": config.params.b,
    });
    let mut report = Report::new("verify", input);
    let sections = match section {
        Section::Two => vec![harness::verify_section2(config)?],
        Section::Three => vec![harness::verify_section3(config)?],
        Section::Four => vec![harness::verify_section4(config)?],
        Section::All => harness::verify_all(config)?,
    };
    let mut all = true;
    for s in &sections {
        for c in &s.checks {
            let name = format!("section{}.{}", s.section, c.id);
            report.residual(name.clone(), c.max_residual);
            if !c.informational {
                report.check(name, c.max_residual, config.tolerance);
            }
        }
        report.verdict(format!("section{}", s.section), s.passed());
        all &= s.passed();
    }
    report.verdict("all", all);
    report.exit_status = if all { 0 } else { 1 };
    report.results = json!({ "sections": sections.iter().map(section_json).collect::<Vec<_>>() });
    Ok(report)
}
