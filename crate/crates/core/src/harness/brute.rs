//! Fully expanded index loops over plain nested vectors.
//!
//! Nothing here calls the tensor builders; each run certifies the
//! optimized path on one trial per check.

use alloc::vec;
use alloc::vec::Vec;

pub type Mat = Vec<Vec<f64>>;
pub type T4 = Vec<Vec<Vec<Vec<f64>>>>;

pub fn zeros4(n: usize) -> T4 {
    vec![vec![vec![vec![0.0; n]; n]; n]; n]
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn inverse(g: &Mat) -> Mat {
    let n = g.len();
    let mut a: Mat = g.clone();
    let mut inv: Mat = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for row in 0..n {
            if row != col {
                let f = a[row][col];
                for j in 0..n {
                    a[row][j] -= f * a[col][j];
                    inv[row][j] -= f * inv[col][j];
                }
            }
        }
    }
    inv
}

/// `−(b/a)[S_jk g_il − S_ik g_jl + g_jk S_il − g_ik S_jl] + (r/n)(1/(n−1) + 2b/a)(g_jk g_il − g_ik g_jl)`.
pub fn reconstruct_qc(s: &Mat, g: &Mat, r: f64, a: f64, b: f64) -> T4 {
    let n = g.len();
    let nf = n as f64;
    let mut out = zeros4(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let block = s[j][k] * g[i][l] - s[i][k] * g[j][l] + g[j][k] * s[i][l] - g[i][k] * s[j][l];
                    let wedge = g[j][k] * g[i][l] - g[i][k] * g[j][l];
                    out[i][j][k][l] = -(b / a) * block + r / nf * (1.0 / (nf - 1.0) + 2.0 * b / a) * wedge;
                }
            }
        }
    }
    out
}

/// `−(b/a)[S_jk g_il − S_ik g_jl] + (r/(a n))(a/(n−1) + b)(g_jk g_il − g_ik g_jl)`.
pub fn reconstruct_pp(s: &Mat, g: &Mat, r: f64, a: f64, b: f64) -> T4 {
    let n = g.len();
    let nf = n as f64;
    let mut out = zeros4(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let block = s[j][k] * g[i][l] - s[i][k] * g[j][l];
                    let wedge = g[j][k] * g[i][l] - g[i][k] * g[j][l];
                    out[i][j][k][l] = -(b / a) * block + r / (a * nf) * (a / (nf - 1.0) + b) * wedge;
                }
            }
        }
    }
    out
}

/// `(1/(n−1))[g_jk S_il − g_ik S_jl]`.
pub fn reconstruct_w2(s: &Mat, g: &Mat) -> T4 {
    let n = g.len();
    let mut out = zeros4(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    out[i][j][k][l] = (g[j][k] * s[i][l] - g[i][k] * s[j][l]) / (n as f64 - 1.0);
                }
            }
        }
    }
    out
}

/// `g^il R_ijkl`.
pub fn contract(r: &T4, g_inv: &Mat) -> Mat {
    let n = g_inv.len();
    let mut s = vec![vec![0.0; n]; n];
    for j in 0..n {
        for k in 0..n {
            let mut acc = 0.0;
            for i in 0..n {
                for l in 0..n {
                    acc += g_inv[i][l] * r[i][j][k][l];
                }
            }
            s[j][k] = acc;
        }
    }
    s
}

/// `a (g_jk g_il − g_ik g_jl) + [g_il P_jk − g_ik P_jl + g_jk P_il − g_jl P_ik]`.
pub fn hyper_form(g: &Mat, a: f64, p: &Mat) -> T4 {
    let n = g.len();
    let mut out = zeros4(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    out[i][j][k][l] = a * (g[j][k] * g[i][l] - g[i][k] * g[j][l]) + g[i][l] * p[j][k]
                        - g[i][k] * p[j][l]
                        + g[j][k] * p[i][l]
                        - g[j][l] * p[i][k];
                }
            }
        }
    }
    out
}

/// `a (g_jk g_il − g_ik g_jl) + P_jk g_il − P_ik g_jl`.
pub fn pseudo_form(g: &Mat, a: f64, p: &Mat) -> T4 {
    let n = g.len();
    let mut out = zeros4(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    out[i][j][k][l] =
                        a * (g[j][k] * g[i][l] - g[i][k] * g[j][l]) + p[j][k] * g[i][l] - p[i][k] * g[j][l];
                }
            }
        }
    }
    out
}

/// `S(X,Y) = [A(X) − D(X)] B̄(Y) / (A(ρ₂) − D(ρ₂))` and the residual of
/// `[A(X) − D(X)] B(QY) − S(X,Y)[A(ρ₂) − D(ρ₂)]` recomputed from it.
pub fn forms_chain(g: &Mat, a: &[f64], b: &[f64], d: &[f64], b_bar: &[f64]) -> (Mat, f64) {
    let n = g.len();
    let gi = inverse(g);
    let mut rho2 = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            rho2[i] += gi[i][j] * b[j];
        }
    }
    let mut k = 0.0;
    for i in 0..n {
        k += (a[i] - d[i]) * rho2[i];
    }
    let mut s = vec![vec![0.0; n]; n];
    for x in 0..n {
        for y in 0..n {
            s[x][y] = (a[x] - d[x]) * b_bar[y] / k;
        }
    }
    let mut worst: f64 = 0.0;
    for x in 0..n {
        for y in 0..n {
            let mut bq = 0.0;
            for m in 0..n {
                bq += rho2[m] * s[m][y];
            }
            worst = worst.max(((a[x] - d[x]) * bq - s[x][y] * k).abs());
        }
    }
    (s, worst)
}

/// `(r / g^ij T_i T_j) T⊗T`.
pub fn rank_one(g: &Mat, t: &[f64], r: f64) -> Mat {
    let n = g.len();
    let gi = inverse(g);
    let mut t_rho = 0.0;
    for i in 0..n {
        for j in 0..n {
            t_rho += gi[i][j] * t[i] * t[j];
        }
    }
    (0..n).map(|i| (0..n).map(|j| r / t_rho * t[i] * t[j]).collect()).collect()
}

pub fn max_diff4(a: &T4, flat: &[f64]) -> f64 {
    let n = a.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    worst = worst.max((a[i][j][k][l] - flat[((i * n + j) * n + k) * n + l]).abs());
                }
            }
        }
    }
    worst
}

pub fn max_diff2(a: &Mat, flat: &[f64]) -> f64 {
    let n = a.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((a[i][j] - flat[i * n + j]).abs());
        }
    }
    worst
}
