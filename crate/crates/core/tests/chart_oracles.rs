use curvkit_core::chart::second_bianchi_residual;
use curvkit_core::classify::conformally_flat_check;
use curvkit_core::gencurv::{pseudo_projective, quasi_conformal, w2, weyl};
use curvkit_core::{MetricField, QcParams};

struct Golden {
    name: &'static str,
    coords: &'static [&'static str],
    entries: &'static [(usize, usize, &'static str)],
    point: &'static [f64],
}

const GOLDEN: &[Golden] = &[
    Golden {
        name: "euclidean2",
        coords: &["x", "y"],
        entries: &[(0, 0, "1"), (1, 1, "1")],
        point: &[0.3, -0.2],
    },
    Golden {
        name: "euclidean4",
        coords: &["x", "y", "z", "w"],
        entries: &[(0, 0, "1"), (1, 1, "1"), (2, 2, "1"), (3, 3, "1")],
        point: &[0.1, 0.2, 0.3, 0.4],
    },
    Golden {
        name: "sphere2",
        coords: &["theta", "phi"],
        entries: &[(0, 0, "1"), (1, 1, "sin(theta)^2")],
        point: &[1.0471975511965976, 0.4],
    },
    Golden {
        name: "sphere3",
        coords: &["chi", "theta", "phi"],
        entries: &[(0, 0, "1"), (1, 1, "sin(chi)^2"), (2, 2, "sin(chi)^2*sin(theta)^2")],
        point: &[0.9, 1.2, 0.3],
    },
    Golden {
        name: "conformal4",
        coords: &["x", "y", "z", "w"],
        entries: &[(0, 0, "exp(2*x)"), (1, 1, "exp(2*x)"), (2, 2, "exp(2*x)"), (3, 3, "exp(2*x)")],
        point: &[0.2, -0.1, 0.4, 0.3],
    },
    Golden {
        name: "generic3",
        coords: &["x", "y", "z"],
        entries: &[
            (0, 0, "2 + x^2"),
            (0, 1, "0.3*x*y"),
            (0, 2, "0.1*z"),
            (1, 1, "2 + sin(y)*cos(x)"),
            (1, 2, "0.2*sin(x*z)"),
            (2, 2, "1 + exp(0.3*x)"),
        ],
        point: &[0.4, 0.7, -0.3],
    },
    Golden {
        name: "generic4",
        coords: &["x", "y", "z", "w"],
        entries: &[
            (0, 0, "3 + x*y"),
            (0, 1, "0.2*sin(z)"),
            (0, 3, "0.1*x*w"),
            (1, 1, "2 + cos(x + w)"),
            (1, 2, "0.3*y^2"),
            (2, 2, "2 + exp(0.2*y*z)"),
            (2, 3, "0.1*x"),
            (3, 3, "3 + z^2"),
        ],
        point: &[0.5, 0.2, -0.4, 0.6],
    },
];

fn field(m: &Golden) -> MetricField {
    MetricField::from_entries(m.coords, m.entries).unwrap()
}

fn shifted(p: &[f64], index: usize, t: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    q[index] += t;
    q
}

/// Five-point central difference of a vector valued function.
fn fd(f: impl Fn(&[f64]) -> Vec<f64>, p: &[f64], index: usize) -> Vec<f64> {
    let h = 1e-3;
    let (a, b, c, d) = (
        f(&shifted(p, index, 2.0 * h)),
        f(&shifted(p, index, h)),
        f(&shifted(p, index, -h)),
        f(&shifted(p, index, -2.0 * h)),
    );
    (0..a.len()).map(|i| (-a[i] + 8.0 * b[i] - 8.0 * c[i] + d[i]) / (12.0 * h)).collect()
}

fn assert_close(name: &str, what: &str, got: &[f64], want: &[f64], rel: f64) {
    let scale = want.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let err = got.iter().zip(want).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(err <= rel * (1.0 + scale), "{name} {what}: error {err:e} at scale {scale:e}");
}

#[test]
fn christoffel_matches_metric_differences() {
    for m in GOLDEN {
        let f = field(m);
        let n = f.dim();
        let p = m.point;
        let metric = |q: &[f64]| f.metric_at(q).unwrap().components().as_slice().to_vec();
        let dg: Vec<Vec<f64>> = (0..n).map(|l| fd(metric, p, l)).collect();
        let g = f.metric_at(p).unwrap();
        let gamma = f.christoffel(p).unwrap();
        let mut oracle = vec![0.0; n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0.0;
                    for l in 0..n {
                        acc += 0.5 * g.inv(k, l) * (dg[i][j * n + l] + dg[j][i * n + l] - dg[l][i * n + j]);
                    }
                    oracle[(k * n + i) * n + j] = acc;
                }
            }
        }
        assert_close(m.name, "christoffel", gamma.as_slice(), &oracle, 1e-8);
    }
}

#[test]
fn riemann_matches_christoffel_differences() {
    for m in GOLDEN {
        let f = field(m);
        let n = f.dim();
        let p = m.point;
        let christoffel = |q: &[f64]| f.christoffel(q).unwrap().as_slice().to_vec();
        let dgamma: Vec<Vec<f64>> = (0..n).map(|i| fd(christoffel, p, i)).collect();
        let gamma = f.christoffel(p).unwrap();
        let g = f.metric_at(p).unwrap();
        let at = |k: usize, i: usize, j: usize| (k * n + i) * n + j;
        let mut oracle = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        // R(e_i, e_j) e_k = (∂_i Γ^m_jk − ∂_j Γ^m_ik + Γ^p_jk Γ^m_ip − Γ^p_ik Γ^m_jp) e_m
                        let mut acc = 0.0;
                        for mm in 0..n {
                            let mut v = dgamma[i][at(mm, j, k)] - dgamma[j][at(mm, i, k)];
                            for q in 0..n {
                                v += gamma[[q, j, k]] * gamma[[mm, i, q]] - gamma[[q, i, k]] * gamma[[mm, j, q]];
                            }
                            acc += g.g(mm, l) * v;
                        }
                        oracle[((i * n + j) * n + k) * n + l] = acc;
                    }
                }
            }
        }
        let bundle = f.curvature_bundle(p).unwrap();
        assert_close(m.name, "riemann", bundle.riemann.as_slice(), &oracle, 1e-7);
    }
}

#[test]
fn covariant_derivatives_match_differences() {
    for m in GOLDEN {
        let f = field(m);
        let n = f.dim();
        let p = m.point;
        let bundle = f.curvature_bundle(p).unwrap();
        let gamma = f.christoffel(p).unwrap();
        let riemann = |q: &[f64]| f.curvature_bundle(q).unwrap().riemann.as_slice().to_vec();
        let ricci = |q: &[f64]| f.curvature_bundle(q).unwrap().ricci.as_slice().to_vec();
        let scalar = |q: &[f64]| vec![f.curvature_bundle(q).unwrap().scalar];
        let r4 = |i: usize, j: usize, k: usize, l: usize| bundle.riemann[[i, j, k, l]];
        let s2 = |i: usize, j: usize| bundle.ricci[(i, j)];

        let mut nabla_r = vec![0.0; n.pow(5)];
        let mut nabla_s = vec![0.0; n.pow(3)];
        let mut dr = vec![0.0; n];
        for mm in 0..n {
            let dr4 = fd(riemann, p, mm);
            let ds = fd(ricci, p, mm);
            dr[mm] = fd(scalar, p, mm)[0];
            for i in 0..n {
                for j in 0..n {
                    let mut v = ds[i * n + j];
                    for q in 0..n {
                        v -= gamma[[q, mm, i]] * s2(q, j) + gamma[[q, mm, j]] * s2(i, q);
                    }
                    nabla_s[(mm * n + i) * n + j] = v;
                    for k in 0..n {
                        for l in 0..n {
                            let mut v = dr4[((i * n + j) * n + k) * n + l];
                            for q in 0..n {
                                v -= gamma[[q, mm, i]] * r4(q, j, k, l)
                                    + gamma[[q, mm, j]] * r4(i, q, k, l)
                                    + gamma[[q, mm, k]] * r4(i, j, q, l)
                                    + gamma[[q, mm, l]] * r4(i, j, k, q);
                            }
                            nabla_r[(((mm * n + i) * n + j) * n + k) * n + l] = v;
                        }
                    }
                }
            }
        }
        let symbolic = f.nabla_riemann(p).unwrap();
        assert_close(m.name, "nabla riemann", symbolic.as_slice(), &nabla_r, 1e-6);
        assert_close(m.name, "nabla ricci", bundle.nabla_ricci.as_slice(), &nabla_s, 1e-6);
        assert_close(m.name, "dr", bundle.dr.as_slice(), &dr, 1e-6);
    }
}

#[test]
fn bianchi_identities_hold_on_golden_metrics() {
    for m in GOLDEN {
        let f = field(m);
        let bundle = f.curvature_bundle(m.point).unwrap();
        let contracted = bundle.contracted_bianchi_residual();
        assert!(contracted <= 1e-8, "{} contracted: {contracted:e}", m.name);
        let second = second_bianchi_residual(&f.nabla_riemann(m.point).unwrap());
        assert!(second <= 1e-8, "{} second: {second:e}", m.name);
        assert!(bundle.riemann.is_riemann_like(1e-10), "{}", m.name);
        assert!(bundle.nabla_ricci_symmetry_defect() <= 1e-10, "{}", m.name);
    }
}

#[test]
fn round_spheres_have_scalar_curvature_n_times_n_minus_one() {
    for (name, r) in [("sphere2", 2.0), ("sphere3", 6.0)] {
        let m = GOLDEN.iter().find(|m| m.name == name).unwrap();
        let f = field(m);
        let bundle = f.curvature_bundle(m.point).unwrap();
        assert!((bundle.scalar - r).abs() <= 1e-8, "{name}: {}", bundle.scalar);
        let n = f.dim() as f64;
        let einstein = &bundle.ricci - &bundle.metric.as_bilinear().scale(n - 1.0);
        assert!(einstein.max_abs() <= 1e-8);
    }
}

#[test]
fn sphere3_generalized_tensors_vanish() {
    let m = GOLDEN.iter().find(|m| m.name == "sphere3").unwrap();
    let bundle = field(m).curvature_bundle(m.point).unwrap();
    let params = QcParams::new(1.0, 1.0);
    assert!(quasi_conformal(&bundle, params).unwrap().max_abs() <= 1e-9);
    assert!(pseudo_projective(&bundle, params).unwrap().max_abs() <= 1e-9);
    assert!(w2(&bundle).unwrap().max_abs() <= 1e-9);
}

#[test]
fn conformal_metric_is_weyl_flat_and_generic_is_not() {
    let conformal = GOLDEN.iter().find(|m| m.name == "conformal4").unwrap();
    let bundle = field(conformal).curvature_bundle(conformal.point).unwrap();
    assert!(weyl(&bundle).unwrap().max_abs() <= 1e-8);
    assert!(conformally_flat_check(&bundle, 1e-8).unwrap().flat);
    assert!(bundle.riemann.max_abs() > 1e-3);

    let generic = GOLDEN.iter().find(|m| m.name == "generic4").unwrap();
    let bundle = field(generic).curvature_bundle(generic.point).unwrap();
    let check = conformally_flat_check(&bundle, 1e-8).unwrap();
    assert!(!check.flat && check.weyl_norm > 1e-4, "{}", check.weyl_norm);
}
