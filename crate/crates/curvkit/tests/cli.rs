use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use curvkit::manifest::Manifest;
use curvkit_core::wrs;
use serde_json::Value;

fn manifest(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("manifests")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn curvkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvkit")).args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn temp_manifest(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn report_schema() {
    for args in [
        vec!["curvature", &manifest("sphere2.metric")],
        vec!["classify", &manifest("sphere2.metric")],
        vec!["wrs", &manifest("sphere3.metric")],
        vec!["verify", "--section", "4", "--trials", "2"],
    ] {
        let out = curvkit(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let r = report(&out);
        let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["checks", "exit_status", "input", "residuals", "results", "tool_version", "verdicts"]);
        assert_eq!(r["input"]["command"], args[0]);
        assert_eq!(r["exit_status"], 0);
        assert!(r["checks"].is_array() && r["residuals"].is_object() && r["verdicts"].is_object());
    }
}

#[test]
fn sphere_scalar_curvature() {
    let out = curvkit(&["curvature", &manifest("sphere2.metric"), "--at", "pi/3,0.4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let p = &r["results"]["points"][0];
    assert!((p["scalar"].as_f64().unwrap() - 2.0).abs() < 1e-10);
    assert_eq!(p["christoffel"].as_array().unwrap().len(), 2);
    assert_eq!(p["nabla_ricci"][0][0].as_array().unwrap().len(), 2);
    assert_eq!(r["verdicts"]["flat"], false);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn euclidean_is_flat() {
    let out = curvkit(&["curvature", &manifest("euclidean4.metric")]);
    let r = report(&out);
    assert_eq!(r["verdicts"]["flat"], true);
    assert_eq!(r["results"]["points"].as_array().unwrap().len(), 2);
    let out = curvkit(&["classify", &manifest("euclidean2.metric")]);
    let r = report(&out);
    for class in ["einstein", "conformally_flat", "quasi_conformally_flat", "pseudo_projectively_flat", "w2_flat"] {
        assert_eq!(r["verdicts"][class], true, "{class}");
    }
    assert!(r["results"]["points"][0]["norms"]["weyl"].is_null());
}

#[test]
fn classify_sphere_and_generic() {
    let r = report(&curvkit(&["classify", &manifest("sphere3.metric")]));
    assert_eq!(r["verdicts"]["einstein"], true);
    assert_eq!(r["verdicts"]["quasi_constant"], false);
    let p = &r["results"]["points"][0];
    assert!(p["norms"]["quasi_conformal"].as_f64().unwrap() <= 1e-10);
    assert_eq!(p["quasi_constant"]["constant_curvature"].as_f64().unwrap(), 1.0);

    let r = report(&curvkit(&["classify", &manifest("generic4.metric")]));
    for class in ["einstein", "quasi_einstein", "quasi_constant", "conformally_flat", "w2_flat"] {
        assert_eq!(r["verdicts"][class], false, "{class}");
    }
    assert!(r["residuals"]["einstein"].as_f64().unwrap() > 1e-3);
    assert_eq!(r["exit_status"], 0);
}

#[test]
fn wrs_matches_direct_calls() {
    let path = manifest("generic4.metric");
    let r = report(&curvkit(&["wrs", &path]));
    let m = Manifest::load(path.as_ref()).unwrap();
    let b = m.field().unwrap().curvature_bundle(&m.points[0]).unwrap();
    let rec = wrs::recover_one_forms(&b).unwrap();
    let p = &r["results"]["points"][0];
    assert_eq!(p["residual"].as_f64().unwrap(), rec.residual);
    assert_eq!(p["kernel_dim"].as_u64().unwrap() as usize, rec.kernel_dim);
    assert_eq!(r["residuals"]["dr_identity"].as_f64().unwrap(), wrs::check_dr_identity(&b, &rec.forms).unwrap());
    assert_eq!(r["verdicts"]["weakly_ricci_symmetric"], false);

    // parallel Ricci tensor: every form vanishes
    let r = report(&curvkit(&["wrs", &manifest("sphere3.metric")]));
    let forms = &r["results"]["points"][0]["forms"];
    for key in ["a", "b", "d"] {
        assert!(forms[key].as_array().unwrap().iter().all(|v| v.as_f64().unwrap().abs() < 1e-12));
    }
    assert_eq!(r["verdicts"]["weakly_ricci_symmetric"], true);
}

#[test]
fn verify_exit_codes() {
    let out = curvkit(&["verify", "--section", "3", "--n", "5", "--trials", "3", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verdicts"]["all"], true);
    assert!(r["residuals"].as_object().unwrap().keys().all(|k| k.starts_with("section3.")));

    // an unreachable tolerance fails every non-guard check
    let out = curvkit(&["verify", "--section", "2", "--trials", "2", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["exit_status"], 1);

    for args in [
        &["verify", "--n", "3"][..],
        &["verify", "--trials", "0"],
        &["verify", "--a", "2", "--b", "-1", "--trials", "2"],
        &["verify", "--section", "7"],
        &["frobnicate"],
    ] {
        let out = curvkit(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn input_errors_exit_2() {
    let mismatch = temp_manifest("dim: 3\ncoords: x, y\ng: x,x = 1\n");
    let no_point = temp_manifest("dim: 2\ncoords: x, y\ng: x,x = 1\ng: y,y = 1\n");
    let singular = temp_manifest("dim: 2\ncoords: x, y\ng: x,x = 1\nat: 0, 0\n");
    let flat = temp_manifest("dim: 2\ncoords: x, y\ng: x,x = 1\ng: y,y = 1\nat: 0, 0\n");
    let cases: Vec<Vec<String>> = vec![
        vec!["curvature".into(), mismatch.path().display().to_string()],
        vec!["curvature".into(), no_point.path().display().to_string()],
        vec!["curvature".into(), singular.path().display().to_string()],
        vec!["curvature".into(), "/nonexistent/manifest".into()],
        vec!["curvature".into(), manifest("sphere2.metric"), "--at".into(), "1,2,3".into()],
        vec!["wrs".into(), flat.path().display().to_string()],
    ];
    for args in &cases {
        let out = curvkit(&args.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("curvkit: "), "{args:?}");
    }
    let err = String::from_utf8(curvkit(&["curvature", &mismatch.path().display().to_string()]).stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn deterministic_output() {
    for args in [
        vec!["classify".to_string(), manifest("conformal4.metric")],
        vec!["verify".into(), "--trials".into(), "3".into(), "--seed".into(), "11".into()],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(curvkit(&args).stdout, curvkit(&args).stdout);
    }
    let a = curvkit(&["verify", "--section", "4", "--trials", "3", "--seed", "1"]).stdout;
    let b = curvkit(&["verify", "--section", "4", "--trials", "3", "--seed", "2"]).stdout;
    assert_ne!(a, b);
}

#[test]
fn text_format() {
    let out = curvkit(&["curvature", &manifest("sphere2.metric"), "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("curvkit "));
    assert!(text.contains("[pass] bianchi.contracted"));
    assert!(text.ends_with("exit status: 0\n"));
}
