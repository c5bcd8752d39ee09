//! Chart-level geometry of a symbolic metric.
//!
//! Partial derivatives of the metric components up to third order are
//! built symbolically once, when the [`MetricField`] is constructed. At a
//! point they are evaluated and pushed exactly (product rule, no finite
//! differences) through the inverse metric, the Christoffel symbols, the
//! Riemann and Ricci tensors and the scalar curvature. Third derivatives of
//! `g` are needed because `∇R̄` and `∇S` contain `∂∂Γ`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::expr::{self, Expression, Node};
use crate::tensor::{self, Bilinear, Grid, LinearMap, Metric, OneForm, Tensor04};

/// A metric `g_ij(x)` given by expressions in chart coordinates.
#[derive(Debug, Clone)]
pub struct MetricField {
    coords: Vec<String>,
    // All four arrays are fully populated; symmetric slots share subtrees.
    g: Vec<Expression>,
    d1: Vec<Expression>,
    d2: Vec<Expression>,
    d3: Vec<Expression>,
}

fn sorted<const K: usize>(mut idx: [usize; K]) -> [usize; K] {
    idx.sort_unstable();
    idx
}

impl MetricField {
    /// Build from an upper-triangle generator `(i, j) ↦ g_ij`, `i ≤ j`.
    pub fn from_upper(coords: Vec<String>, mut entry: impl FnMut(usize, usize) -> Expression) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::InvalidConfig("a chart needs at least one coordinate".into()));
        }
        let names: Vec<&str> = coords.iter().map(String::as_str).collect();
        // Validates names and uniqueness.
        expr::parse("0", &names)?;

        let zero = Expression::constant(0.0);
        let mut g = vec![zero.clone(); n * n];
        for i in 0..n {
            for j in i..n {
                let e = entry(i, j);
                g[i * n + j] = e.clone();
                g[j * n + i] = e;
            }
        }

        let mut d1 = vec![zero.clone(); n * n * n];
        let mut d2 = vec![zero.clone(); n * n * n * n];
        let mut d3 = vec![zero; n * n * n * n * n];
        for i in 0..n {
            for j in i..n {
                let base = i * n + j;
                for a in 0..n {
                    d1[base * n + a] = g[base].differentiate(a);
                    for b in a..n {
                        d2[(base * n + a) * n + b] = d1[base * n + a].differentiate(b);
                        for c in b..n {
                            d3[((base * n + a) * n + b) * n + c] = d2[(base * n + a) * n + b].differentiate(c);
                        }
                    }
                }
            }
        }
        // Fill every index permutation from the canonical (sorted) entry.
        for i in 0..n {
            for j in 0..n {
                let src = { let [p, q] = sorted([i, j]); p * n + q };
                let dst = i * n + j;
                for a in 0..n {
                    d1[dst * n + a] = d1[src * n + a].clone();
                    for b in 0..n {
                        let [p, q] = sorted([a, b]);
                        d2[(dst * n + a) * n + b] = d2[(src * n + p) * n + q].clone();
                        for c in 0..n {
                            let [p, q, r] = sorted([a, b, c]);
                            d3[((dst * n + a) * n + b) * n + c] = d3[((src * n + p) * n + q) * n + r].clone();
                        }
                    }
                }
            }
        }
        Ok(MetricField { coords, g, d1, d2, d3 })
    }

    /// Build from `(i, j, expression)` triples; missing entries are zero and
    /// an entry given for `(j, i)` fills `(i, j)`.
    pub fn from_entries(coords: &[&str], entries: &[(usize, usize, &str)]) -> Result<Self> {
        let n = coords.len();
        let mut upper: Vec<Option<Expression>> = vec![None; n * n];
        for &(i, j, text) in entries {
            if i >= n || j >= n {
                return Err(Error::dim(n, i.max(j) + 1));
            }
            let (p, q) = if i <= j { (i, j) } else { (j, i) };
            if upper[p * n + q].is_some() {
                return Err(Error::InvalidConfig(format!("metric entry ({p}, {q}) given twice")));
            }
            upper[p * n + q] = Some(expr::parse(text, coords)?);
        }
        let owned = coords.iter().map(|c| String::from(*c)).collect();
        MetricField::from_upper(owned, |i, j| {
            upper[i * n + j].clone().unwrap_or_else(|| Expression::constant(0.0))
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    /// The expression for `g_ij`.
    pub fn component(&self, i: usize, j: usize) -> &Expression {
        &self.g[i * self.dim() + j]
    }

    fn eval_all(exprs: &[Expression], point: &[f64]) -> Result<Vec<f64>> {
        // Symmetric slots share one node; evaluate each node once.
        let mut seen: BTreeMap<*const Node, f64> = BTreeMap::new();
        let mut out = Vec::with_capacity(exprs.len());
        for e in exprs {
            let v = match e.as_const() {
                Some(c) => c,
                None => {
                    let key = e.node() as *const Node;
                    match seen.get(&key) {
                        Some(v) => *v,
                        None => {
                            let v = e.evaluate(point)?;
                            seen.insert(key, v);
                            v
                        }
                    }
                }
            };
            out.push(v);
        }
        Ok(out)
    }

    pub fn metric_at(&self, point: &[f64]) -> Result<Metric> {
        check_dim(self.dim(), point.len())?;
        let n = self.dim();
        let values = MetricField::eval_all(&self.g, point)?;
        Metric::from_fn(n, |i, j| values[i * n + j])
    }

    /// Christoffel symbols of the second kind, `[k, i, j]` = Γ^k_ij.
    pub fn christoffel(&self, point: &[f64]) -> Result<Grid<3>> {
        let metric = self.metric_at(point)?;
        let d1 = MetricField::eval_all(&self.d1, point)?;
        Ok(christoffel_from(&metric, &d1))
    }

    fn jets(&self, point: &[f64]) -> Result<Jets> {
        let metric = self.metric_at(point)?;
        let d1 = MetricField::eval_all(&self.d1, point)?;
        let d2 = MetricField::eval_all(&self.d2, point)?;
        let d3 = MetricField::eval_all(&self.d3, point)?;
        Ok(Jets::new(metric, d1, d2, d3))
    }

    /// Full pointwise curvature data at `point`.
    pub fn curvature_bundle(&self, point: &[f64]) -> Result<CurvatureBundle> {
        let jets = self.jets(point)?;
        let (riemann, d_riemann) = jets.riemann_with_derivative();
        Ok(jets.bundle(point, riemann, &d_riemann))
    }

    /// Covariant derivative of the (0,4) curvature tensor,
    /// `[m, i, j, k, l]` = (∇_m R̄)_ijkl.
    pub fn nabla_riemann(&self, point: &[f64]) -> Result<Grid<5>> {
        let jets = self.jets(point)?;
        let (riemann, d_riemann) = jets.riemann_with_derivative();
        Ok(jets.nabla_riemann(&riemann, &d_riemann))
    }
}

fn christoffel_from(metric: &Metric, d1: &[f64]) -> Grid<3> {
    let n = metric.dim();
    let dg = |i: usize, j: usize, a: usize| d1[(i * n + j) * n + a];
    let mut gamma = Grid::<3>::zeros(n);
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += metric.inv(k, l) * (dg(j, l, i) + dg(i, l, j) - dg(i, j, l));
                }
                gamma[[k, i, j]] = 0.5 * s;
                gamma[[k, j, i]] = 0.5 * s;
            }
        }
    }
    gamma
}

/// Metric derivatives at a point and the Christoffel symbols with their
/// first and second partial derivatives.
struct Jets {
    n: usize,
    metric: Metric,
    d1: Vec<f64>,
    d_inv: Vec<f64>,
    /// `[k, i, j]` = Γ^k_ij
    gamma: Grid<3>,
    /// `[k, i, j, a]` = ∂_a Γ^k_ij
    d_gamma: Grid<4>,
    /// `[k, i, j, a, b]` = ∂_a ∂_b Γ^k_ij
    dd_gamma: Grid<5>,
}

impl Jets {
    fn new(metric: Metric, d1: Vec<f64>, d2: Vec<f64>, d3: Vec<f64>) -> Self {
        let n = metric.dim();
        let i3 = |i: usize, j: usize, a: usize| (i * n + j) * n + a;
        let i4 = |i: usize, j: usize, a: usize, b: usize| ((i * n + j) * n + a) * n + b;
        let i5 = |i: usize, j: usize, a: usize, b: usize, c: usize| (((i * n + j) * n + a) * n + b) * n + c;

        // ∂ g^-1 = -g^-1 (∂g) g^-1
        let inv = |i: usize, j: usize| metric.inv(i, j);
        let mut d_inv = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for a in 0..n {
                    let mut s = 0.0;
                    for p in 0..n {
                        for q in 0..n {
                            s += inv(i, p) * d1[i3(p, q, a)] * inv(q, j);
                        }
                    }
                    d_inv[i3(i, j, a)] = -s;
                }
            }
        }
        // ∂_b ∂_a g^-1 = -(∂_b g^-1 ∂_a g g^-1 + g^-1 ∂_a∂_b g g^-1 + g^-1 ∂_a g ∂_b g^-1)
        let mut dd_inv = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        let mut s = 0.0;
                        for p in 0..n {
                            for q in 0..n {
                                s += d_inv[i3(i, p, b)] * d1[i3(p, q, a)] * inv(q, j)
                                    + inv(i, p) * d2[i4(p, q, a, b)] * inv(q, j)
                                    + inv(i, p) * d1[i3(p, q, a)] * d_inv[i3(q, j, b)];
                            }
                        }
                        dd_inv[i4(i, j, a, b)] = -s;
                    }
                }
            }
        }

        // Christoffel symbols of the first kind Γ_lij = ½(∂_i g_jl + ∂_j g_il - ∂_l g_ij)
        // and their first two derivatives.
        let first = |l: usize, i: usize, j: usize| 0.5 * (d1[i3(j, l, i)] + d1[i3(i, l, j)] - d1[i3(i, j, l)]);
        let d_first = |l: usize, i: usize, j: usize, a: usize| {
            0.5 * (d2[i4(j, l, i, a)] + d2[i4(i, l, j, a)] - d2[i4(i, j, l, a)])
        };
        let dd_first = |l: usize, i: usize, j: usize, a: usize, b: usize| {
            0.5 * (d3[i5(j, l, i, a, b)] + d3[i5(i, l, j, a, b)] - d3[i5(i, j, l, a, b)])
        };

        let mut gamma = Grid::<3>::zeros(n);
        let mut d_gamma = Grid::<4>::zeros(n);
        let mut dd_gamma = Grid::<5>::zeros(n);
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let mut v = 0.0;
                    for l in 0..n {
                        v += inv(k, l) * first(l, i, j);
                    }
                    gamma[[k, i, j]] = v;
                    gamma[[k, j, i]] = v;
                    for a in 0..n {
                        let mut da = 0.0;
                        for l in 0..n {
                            da += d_inv[i3(k, l, a)] * first(l, i, j) + inv(k, l) * d_first(l, i, j, a);
                        }
                        d_gamma[[k, i, j, a]] = da;
                        d_gamma[[k, j, i, a]] = da;
                        for b in a..n {
                            let mut dab = 0.0;
                            for l in 0..n {
                                dab += dd_inv[i4(k, l, a, b)] * first(l, i, j)
                                    + d_inv[i3(k, l, a)] * d_first(l, i, j, b)
                                    + d_inv[i3(k, l, b)] * d_first(l, i, j, a)
                                    + inv(k, l) * dd_first(l, i, j, a, b);
                            }
                            for (x, y) in [(a, b), (b, a)] {
                                dd_gamma[[k, i, j, x, y]] = dab;
                                dd_gamma[[k, j, i, x, y]] = dab;
                            }
                        }
                    }
                }
            }
        }
        Jets {
            n,
            metric,
            d1,
            d_inv,
            gamma,
            d_gamma,
            dd_gamma,
        }
    }

    fn dg(&self, i: usize, j: usize, a: usize) -> f64 {
        let n = self.n;
        self.d1[(i * n + j) * n + a]
    }

    /// R̄_ijkl and ∂_a R̄_ijkl (as `[a, i, j, k, l]`).
    fn riemann_with_derivative(&self) -> (Tensor04, Grid<5>) {
        let n = self.n;
        let (gm, dgm, ddgm) = (&self.gamma, &self.d_gamma, &self.dd_gamma);
        // (1,3) curvature R(∂_i, ∂_j)∂_k = Rc^l_ijk ∂_l, stored [l, i, j, k]:
        // Rc^l_ijk = ∂_i Γ^l_jk - ∂_j Γ^l_ik + Γ^l_im Γ^m_jk - Γ^l_jm Γ^m_ik
        let mut rc = Grid::<4>::zeros(n);
        let mut d_rc = Grid::<5>::zeros(n);
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut v = dgm[[l, j, k, i]] - dgm[[l, i, k, j]];
                        for m in 0..n {
                            v += gm[[l, i, m]] * gm[[m, j, k]] - gm[[l, j, m]] * gm[[m, i, k]];
                        }
                        rc[[l, i, j, k]] = v;
                        for a in 0..n {
                            let mut d = ddgm[[l, j, k, i, a]] - ddgm[[l, i, k, j, a]];
                            for m in 0..n {
                                d += dgm[[l, i, m, a]] * gm[[m, j, k]] + gm[[l, i, m]] * dgm[[m, j, k, a]]
                                    - dgm[[l, j, m, a]] * gm[[m, i, k]]
                                    - gm[[l, j, m]] * dgm[[m, i, k, a]];
                            }
                            d_rc[[a, l, i, j, k]] = d;
                        }
                    }
                }
            }
        }
        // R̄_ijkl = g_lm Rc^m_ijk
        let g = &self.metric;
        let mut riemann = Tensor04::zeros(n);
        let mut d_riemann = Grid::<5>::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut v = 0.0;
                        for m in 0..n {
                            v += g.g(l, m) * rc[[m, i, j, k]];
                        }
                        riemann[[i, j, k, l]] = v;
                        for a in 0..n {
                            let mut d = 0.0;
                            for m in 0..n {
                                d += self.dg(l, m, a) * rc[[m, i, j, k]] + g.g(l, m) * d_rc[[a, m, i, j, k]];
                            }
                            d_riemann[[a, i, j, k, l]] = d;
                        }
                    }
                }
            }
        }
        (riemann, d_riemann)
    }

    fn bundle(&self, point: &[f64], riemann: Tensor04, d_riemann: &Grid<5>) -> CurvatureBundle {
        let n = self.n;
        let g = &self.metric;
        let ricci = tensor::ricci_contract(&riemann, g).expect("dimensions agree");
        // ∂_a S_jk = ∂_a g^il R̄_ijkl + g^il ∂_a R̄_ijkl
        let mut d_ricci = Grid::<3>::zeros(n);
        for a in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut s = 0.0;
                    for i in 0..n {
                        for l in 0..n {
                            s += self.d_inv[(i * n + l) * n + a] * riemann[[i, j, k, l]]
                                + g.inv(i, l) * d_riemann[[a, i, j, k, l]];
                        }
                    }
                    d_ricci[[a, j, k]] = s;
                }
            }
        }
        let scalar = g.trace(&ricci);
        let dr = OneForm::from_fn(n, |a| {
            let mut s = 0.0;
            for j in 0..n {
                for k in 0..n {
                    s += self.d_inv[(j * n + k) * n + a] * ricci[(j, k)] + g.inv(j, k) * d_ricci[[a, j, k]];
                }
            }
            s
        });
        // (∇_i S)_jk = ∂_i S_jk - Γ^l_ij S_lk - Γ^l_ik S_jl
        let mut nabla_ricci = Grid::<3>::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut v = d_ricci[[i, j, k]];
                    for l in 0..n {
                        v -= self.gamma[[l, i, j]] * ricci[(l, k)] + self.gamma[[l, i, k]] * ricci[(j, l)];
                    }
                    nabla_ricci[[i, j, k]] = v;
                }
            }
        }
        let ricci_operator = tensor::ricci_operator(&ricci, g).expect("dimensions agree");
        CurvatureBundle {
            point: point.to_vec(),
            metric: g.clone(),
            christoffel: Some(self.gamma.clone()),
            riemann,
            ricci,
            ricci_operator,
            scalar,
            nabla_ricci,
            dr,
        }
    }

    fn nabla_riemann(&self, riemann: &Tensor04, d_riemann: &Grid<5>) -> Grid<5> {
        let n = self.n;
        let gm = &self.gamma;
        let mut out = Grid::<5>::zeros(n);
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let mut v = d_riemann[[m, i, j, k, l]];
                            for p in 0..n {
                                v -= gm[[p, m, i]] * riemann[[p, j, k, l]]
                                    + gm[[p, m, j]] * riemann[[i, p, k, l]]
                                    + gm[[p, m, k]] * riemann[[i, j, p, l]]
                                    + gm[[p, m, l]] * riemann[[i, j, k, p]];
                            }
                            out[[m, i, j, k, l]] = v;
                        }
                    }
                }
            }
        }
        out
    }
}

/// Pointwise curvature package.
///
/// The scalar curvature is stored once; both `γ` and `r` in the classical
/// notation refer to it.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureBundle {
    pub point: Vec<f64>,
    pub metric: Metric,
    /// Present when the bundle came from a chart.
    pub christoffel: Option<Grid<3>>,
    pub riemann: Tensor04,
    pub ricci: Bilinear,
    pub ricci_operator: LinearMap,
    pub scalar: f64,
    /// `[i, j, k]` = (∇_i S)_jk
    pub nabla_ricci: Grid<3>,
    pub dr: OneForm,
}

impl CurvatureBundle {
    /// Pointwise bundle from a metric and a curvature tensor; Ricci data is
    /// contracted from `riemann`, derivatives start at zero.
    pub fn from_riemann(metric: Metric, riemann: Tensor04) -> Result<Self> {
        let ricci = tensor::ricci_contract(&riemann, &metric)?;
        let scalar = metric.trace(&ricci);
        CurvatureBundle::from_parts(metric, riemann, ricci, scalar)
    }

    /// Bundle with independently supplied Ricci tensor and scalar curvature.
    /// Nothing forces them to agree with `riemann`.
    pub fn from_parts(metric: Metric, riemann: Tensor04, ricci: Bilinear, scalar: f64) -> Result<Self> {
        let n = metric.dim();
        check_dim(n, riemann.dim())?;
        let ricci_operator = tensor::ricci_operator(&ricci, &metric)?;
        Ok(CurvatureBundle {
            point: Vec::new(),
            metric,
            christoffel: None,
            riemann,
            ricci,
            ricci_operator,
            scalar,
            nabla_ricci: Grid::zeros(n),
            dr: OneForm::zeros(n),
        })
    }

    pub fn with_nabla_ricci(mut self, nabla_ricci: Grid<3>) -> Result<Self> {
        check_dim(self.dim(), nabla_ricci.dim())?;
        self.nabla_ricci = nabla_ricci;
        Ok(self)
    }

    pub fn with_dr(mut self, dr: OneForm) -> Result<Self> {
        check_dim(self.dim(), dr.dim())?;
        self.dr = dr;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// Largest `|(∇_i S)_jk - (∇_i S)_kj|`.
    pub fn nabla_ricci_symmetry_defect(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in j + 1..n {
                    m = m.max((self.nabla_ricci[[i, j, k]] - self.nabla_ricci[[i, k, j]]).abs());
                }
            }
        }
        m
    }

    /// Residual of the contracted second Bianchi identity
    /// `dr_i = 2 g^jk (∇_j S)_ik`, as the largest absolute violation.
    pub fn contracted_bianchi_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let mut div = 0.0;
            for j in 0..n {
                for k in 0..n {
                    div += self.metric.inv(j, k) * self.nabla_ricci[[j, i, k]];
                }
            }
            worst = worst.max((self.dr[i] - 2.0 * div).abs());
        }
        worst
    }
}

/// Residual of the second Bianchi identity
/// `(∇_m R̄)_ijkl + (∇_i R̄)_jmkl + (∇_j R̄)_mikl = 0`.
pub fn second_bianchi_residual(nabla_riemann: &Grid<5>) -> f64 {
    let n = nabla_riemann.dim();
    let mut worst: f64 = 0.0;
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = nabla_riemann[[m, i, j, k, l]]
                            + nabla_riemann[[i, j, m, k, l]]
                            + nabla_riemann[[j, m, i, k, l]];
                        worst = worst.max(v.abs());
                    }
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use core::f64::consts::PI;

    fn sphere2() -> MetricField {
        MetricField::from_entries(&["theta", "phi"], &[(0, 0, "1"), (1, 1, "sin(theta)^2")]).unwrap()
    }

    fn euclidean(n: usize) -> MetricField {
        let coords: Vec<String> = (0..n).map(|i| alloc::format!("x{i}")).collect();
        MetricField::from_upper(coords, |i, j| Expression::constant(if i == j { 1.0 } else { 0.0 })).unwrap()
    }

    #[test]
    fn flat_space_has_no_curvature() {
        for n in 2..=4 {
            let b = euclidean(n).curvature_bundle(&vec![0.3; n]).unwrap();
            assert_eq!(b.riemann.max_abs(), 0.0);
            assert_eq!(b.ricci.max_abs(), 0.0);
            assert_eq!(b.scalar, 0.0);
            assert_eq!(b.nabla_ricci.max_abs(), 0.0);
            assert_eq!(b.dr.max_abs(), 0.0);
            assert_eq!(b.christoffel.unwrap().max_abs(), 0.0);
        }
    }

    #[test]
    fn sphere_christoffel_closed_form() {
        let gamma = sphere2().christoffel(&[PI / 4.0, 0.2]).unwrap();
        assert!((gamma[[0, 1, 1]] + 0.5).abs() < 1e-15);
        assert!((gamma[[1, 0, 1]] - 1.0).abs() < 1e-15);
        assert!((gamma[[1, 1, 0]] - 1.0).abs() < 1e-15);
        assert_eq!(gamma[[0, 0, 0]], 0.0);
    }

    #[test]
    fn sphere_scalar_curvature_is_two() {
        let b = sphere2().curvature_bundle(&[PI / 3.0, 1.0]).unwrap();
        assert!((b.scalar - 2.0).abs() < 1e-12);
        assert!((&b.ricci - &b.metric.as_bilinear()).max_abs() < 1e-12);
        assert!(b.dr.max_abs() < 1e-12);
        assert!(b.nabla_ricci.max_abs() < 1e-12);
    }

    #[test]
    fn degenerate_chart_point_is_singular() {
        assert!(matches!(sphere2().curvature_bundle(&[0.0, 1.0]), Err(Error::SingularMetric(_))));
    }

    #[test]
    fn domain_errors_propagate() {
        let m = MetricField::from_entries(&["x", "y"], &[(0, 0, "log(x)"), (1, 1, "1")]).unwrap();
        assert!(matches!(m.curvature_bundle(&[-1.0, 0.0]), Err(Error::Expr(_))));
    }

    #[test]
    fn point_dimension_is_checked() {
        assert!(matches!(sphere2().metric_at(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn duplicate_entries_rejected() {
        let r = MetricField::from_entries(&["x", "y"], &[(0, 1, "1"), (1, 0, "2")]);
        assert!(matches!(r, Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn components_are_symmetric() {
        let m = MetricField::from_entries(&["x", "y"], &[(0, 0, "2"), (1, 0, "x*y"), (1, 1, "3")]).unwrap();
        assert_eq!(m.component(0, 1).to_string(), "x*y");
        assert_eq!(m.component(1, 0).to_string(), "x*y");
    }
}
