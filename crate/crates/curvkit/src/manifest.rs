//! Line-oriented metric manifests.
//!
//! ```text
//! # unit 2-sphere
//! dim: 2
//! coords: theta, phi
//! g: theta,theta = 1
//! g: phi,phi = sin(theta)^2
//! at: pi/3, 0.4
//! ```
//!
//! Index pairs name coordinates (or give 0-based integers). Missing
//! entries are zero; `g: j,i` fills `g_ij`. Each `at:` line adds a sample
//! point whose components are constant expressions.

use std::path::Path;

use curvkit_core::expr;
use curvkit_core::MetricField;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub dim: usize,
    pub coords: Vec<String>,
    /// Upper-triangle entries `(i, j, expression)` with `i <= j`, in the
    /// order given.
    pub entries: Vec<(usize, usize, String)>,
    pub points: Vec<Vec<f64>>,
}

struct RawEntry {
    line: usize,
    i: String,
    j: String,
    text: String,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Manifest::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut dim: Option<(usize, usize)> = None;
        let mut coords: Option<(usize, Vec<String>)> = None;
        let mut raw = Vec::new();
        let mut raw_points = Vec::new();
        for (index, full) in text.lines().enumerate() {
            let line = index + 1;
            let content = full.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once(':')
                .ok_or_else(|| CliError::manifest(line, "expected `key: value`"))?;
            let value = value.trim();
            match key.trim() {
                "dim" => {
                    if dim.is_some() {
                        return Err(CliError::manifest(line, "`dim` given twice"));
                    }
                    let n = value
                        .parse::<usize>()
                        .map_err(|_| CliError::manifest(line, format!("invalid dimension `{value}`")))?;
                    if n == 0 {
                        return Err(CliError::manifest(line, "dimension must be positive"));
                    }
                    dim = Some((line, n));
                }
                "coords" => {
                    if coords.is_some() {
                        return Err(CliError::manifest(line, "`coords` given twice"));
                    }
                    let names: Vec<String> = value.split(',').map(|c| c.trim().to_string()).collect();
                    for name in &names {
                        expr::validate_coordinate(name)
                            .map_err(|_| CliError::manifest(line, format!("invalid coordinate name `{name}`")))?;
                    }
                    coords = Some((line, names));
                }
                "g" => {
                    let (pair, expression) = value
                        .split_once('=')
                        .ok_or_else(|| CliError::manifest(line, "expected `g: i,j = expression`"))?;
                    let (i, j) = pair
                        .split_once(',')
                        .ok_or_else(|| CliError::manifest(line, "expected an index pair `i,j`"))?;
                    raw.push(RawEntry {
                        line,
                        i: i.trim().to_string(),
                        j: j.trim().to_string(),
                        text: expression.trim().to_string(),
                    });
                }
                "at" => raw_points.push((line, value.to_string())),
                other => return Err(CliError::manifest(line, format!("unknown key `{other}`"))),
            }
        }

        let (_, n) = dim.ok_or_else(|| CliError::manifest(0, "missing `dim`"))?;
        let (coords_line, coords) = coords.ok_or_else(|| CliError::manifest(0, "missing `coords`"))?;
        if coords.len() != n {
            return Err(CliError::manifest(
                coords_line,
                format!("dim is {n} but {} coordinates are listed", coords.len()),
            ));
        }
        for (k, c) in coords.iter().enumerate() {
            if coords[..k].contains(c) {
                return Err(CliError::manifest(coords_line, format!("coordinate `{c}` listed twice")));
            }
        }
        let names: Vec<&str> = coords.iter().map(String::as_str).collect();
        let resolve = |line: usize, token: &str| -> Result<usize> {
            if let Some(k) = names.iter().position(|c| *c == token) {
                return Ok(k);
            }
            match token.parse::<usize>() {
                Ok(k) if k < n => Ok(k),
                _ => Err(CliError::manifest(line, format!("unknown index `{token}`"))),
            }
        };

        let mut entries: Vec<(usize, usize, String)> = Vec::new();
        for e in raw {
            let (i, j) = (resolve(e.line, &e.i)?, resolve(e.line, &e.j)?);
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            if entries.iter().any(|(p, q, _)| (*p, *q) == (i, j)) {
                return Err(CliError::manifest(e.line, format!("entry ({}, {}) given twice", names[i], names[j])));
            }
            expr::parse(&e.text, &names).map_err(|err| CliError::manifest(e.line, err.to_string()))?;
            entries.push((i, j, e.text));
        }

        let mut points = Vec::new();
        for (line, text) in raw_points {
            points.push(parse_point(&text, n).map_err(|err| CliError::manifest(line, err.to_string()))?);
        }
        Ok(Manifest {
            dim: n,
            coords,
            entries,
            points,
        })
    }

    pub fn field(&self) -> Result<MetricField> {
        let names: Vec<&str> = self.coords.iter().map(String::as_str).collect();
        let entries: Vec<(usize, usize, &str)> = self.entries.iter().map(|(i, j, t)| (*i, *j, t.as_str())).collect();
        Ok(MetricField::from_entries(&names, &entries)?)
    }

    /// The explicit point if given, otherwise every `at:` point.
    pub fn sample_points(&self, explicit: Option<&str>) -> Result<Vec<Vec<f64>>> {
        match explicit {
            Some(text) => Ok(vec![parse_point(text, self.dim)?]),
            None if self.points.is_empty() => Err(CliError::Usage(
                "no evaluation point: pass --at or add an `at:` line to the manifest".into(),
            )),
            None => Ok(self.points.clone()),
        }
    }
}

/// Comma-separated constant expressions, e.g. `pi/3, 0.4`.
pub fn parse_point(text: &str, dim: usize) -> Result<Vec<f64>> {
    let mut point = Vec::new();
    for part in text.split(',') {
        let e = expr::parse(part.trim(), &[])?;
        let v = e.evaluate(&[])?;
        if !v.is_finite() {
            return Err(CliError::Usage(format!("point component `{}` is not finite", part.trim())));
        }
        point.push(v);
    }
    if point.len() != dim {
        return Err(CliError::Usage(format!("point has {} components, manifest dimension is {dim}", point.len())));
    }
    Ok(point)
}
