//! File formats and inline argument syntax shared by the CLI and tests.
//!
//! JSON carries structured inputs (curve descriptions, maps, curvature
//! specs, reports); CSV carries sampled data (positions, profiles, frame
//! traces). All CSV numbers are written with 17 significant digits so a
//! round trip through text is exact.

use crate::curve::{make_catalog, CurveProvider, PolynomialCurve, SampledCurve};
use crate::equivalence::EquivalenceReport;
use crate::error::{Error, Result};
use crate::group::{make_map, SpecialAffineMap};
use crate::invariants::InvariantProfile;
use crate::linalg::{Mat, Vector};
use crate::reconstruct::{Channel, CurvatureSpec, ReconstructedCurve};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// 17 significant digits; exact text round trip for f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{origin}: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialization of plain data cannot fail")
}

/// Map file: `{"n": int, "B": [[row-major rows]], "tau": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapFile {
    pub n: usize,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    pub tau: Vec<f64>,
}

impl MapFile {
    pub fn from_map(map: &SpecialAffineMap) -> Self {
        Self {
            n: map.dim(),
            b: map.linear().rows(),
            tau: map.translation().as_slice().to_vec(),
        }
    }

    pub fn build(&self) -> Result<SpecialAffineMap> {
        if self.b.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: self.b.len(),
            });
        }
        make_map(Mat::from_rows(&self.b)?, Vector::new(self.tau.clone())?)
    }
}

pub fn map_to_json(map: &SpecialAffineMap) -> String {
    to_json(&MapFile::from_map(map))
}

pub fn map_from_json(text: &str, origin: &str) -> Result<SpecialAffineMap> {
    parse_json::<MapFile>(text, origin)?.build()
}

/// Curve description file, dispatched on `kind`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveSpecFile {
    Catalog {
        name: String,
        params: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
    Polynomial {
        n: usize,
        coeffs: Vec<Vec<f64>>,
        domain: [f64; 2],
    },
    Sampled {
        n: usize,
        t0: f64,
        h: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fd_order: Option<usize>,
        points: Vec<Vec<f64>>,
    },
}

impl CurveSpecFile {
    pub fn build(&self, default_fd_order: usize) -> Result<Box<dyn CurveProvider>> {
        match self {
            CurveSpecFile::Catalog {
                name,
                params,
                domain,
            } => {
                let mut c = make_catalog(name, params)?;
                if let Some([a, b]) = domain {
                    c = c.with_domain(*a, *b)?;
                }
                Ok(Box::new(c))
            }
            CurveSpecFile::Polynomial { n, coeffs, domain } => {
                if coeffs.len() != *n {
                    return Err(Error::DimensionMismatch {
                        expected: *n,
                        got: coeffs.len(),
                    });
                }
                Ok(Box::new(PolynomialCurve::new(
                    coeffs.clone(),
                    (domain[0], domain[1]),
                )?))
            }
            CurveSpecFile::Sampled {
                n,
                t0,
                h,
                fd_order,
                points,
            } => {
                let pts = points
                    .iter()
                    .map(|p| {
                        if p.len() != *n {
                            return Err(Error::DimensionMismatch {
                                expected: *n,
                                got: p.len(),
                            });
                        }
                        Vector::new(p.clone())
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Box::new(SampledCurve::new(
                    *t0,
                    *h,
                    pts,
                    fd_order.unwrap_or(default_fd_order),
                )?))
            }
        }
    }
}

/// Curvature-spec file:
/// `{"n": int, "L": real, "channels": [{"kind": ...}, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvatureSpecFile {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub channels: Vec<ChannelSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelSpec {
    Const { value: f64 },
    Poly { coeffs: Vec<f64> },
    Table { s: Vec<f64>, values: Vec<f64> },
}

impl CurvatureSpecFile {
    pub fn build(&self) -> Result<CurvatureSpec> {
        let channels = self
            .channels
            .iter()
            .map(|c| match c {
                ChannelSpec::Const { value } => Ok(Channel::Const(*value)),
                ChannelSpec::Poly { coeffs } => Ok(Channel::Poly(coeffs.clone())),
                ChannelSpec::Table { s, values } => Channel::table(s.clone(), values.clone()),
            })
            .collect::<Result<Vec<_>>>()?;
        CurvatureSpec::new(self.n, self.l, channels)
    }
}

pub fn curvature_spec_from_json(text: &str, origin: &str) -> Result<CurvatureSpec> {
    parse_json::<CurvatureSpecFile>(text, origin)?.build()
}

/// Equivalence report JSON:
/// `{"equivalent", "deviations", "map": {...}|null, "residual", "tol"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub equivalent: bool,
    pub deviations: Vec<f64>,
    pub map: Option<MapFile>,
    pub residual: f64,
    pub tol: f64,
}

impl ReportFile {
    pub fn from_report(report: &EquivalenceReport) -> Self {
        Self {
            equivalent: report.equivalent,
            deviations: report.deviations.clone(),
            map: report.map.as_ref().map(MapFile::from_map),
            residual: report.residual,
            tol: report.tol,
        }
    }
}

pub fn report_to_json(report: &EquivalenceReport) -> String {
    to_json(&ReportFile::from_report(report))
}

/// Profile CSV with header `s,chi_1,...,chi_{n-1}`.
pub fn profile_to_csv(profile: &InvariantProfile) -> String {
    let mut out = String::from("s");
    for i in 1..profile.dim() {
        out.push_str(&format!(",chi_{i}"));
    }
    out.push('\n');
    for j in 0..profile.npts() {
        out.push_str(&fmt17(profile.grid()[j]));
        for i in 0..profile.num_channels() {
            out.push(',');
            out.push_str(&fmt17(profile.channel(i)[j]));
        }
        out.push('\n');
    }
    out
}

fn parse_float(field: &str, origin: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{origin}: line {line}: not a number: {field:?}")))
}

pub fn profile_from_csv(text: &str, origin: &str) -> Result<InvariantProfile> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse(format!("{origin}: empty profile")))?;
    let cols = header.split(',').count();
    if cols < 2 {
        return Err(Error::Parse(format!(
            "{origin}: profile header needs s plus at least one channel"
        )));
    }
    let n = cols; // s plus n-1 channels
    let mut s = Vec::new();
    let mut channels = vec![Vec::new(); cols - 1];
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols {
            return Err(Error::Parse(format!(
                "{origin}: line {}: expected {cols} fields, got {}",
                idx + 1,
                fields.len()
            )));
        }
        s.push(parse_float(fields[0], origin, idx + 1)?);
        for (i, ch) in channels.iter_mut().enumerate() {
            ch.push(parse_float(fields[i + 1], origin, idx + 1)?);
        }
    }
    InvariantProfile::new(n, s, channels)
}

/// Sample CSV with header `<label>,x_1,...,x_n` and a uniform first column.
pub fn samples_to_csv(label: &str, ts: &[f64], points: &[Vector]) -> String {
    let n = points.first().map(|p| p.dim()).unwrap_or(0);
    let mut out = String::from(label);
    for i in 1..=n {
        out.push_str(&format!(",x_{i}"));
    }
    out.push('\n');
    for (t, p) in ts.iter().zip(points) {
        out.push_str(&fmt17(*t));
        for v in p.as_slice() {
            out.push(',');
            out.push_str(&fmt17(*v));
        }
        out.push('\n');
    }
    out
}

/// Parse a sample CSV back into a finite-difference curve. The first
/// column must be uniformly spaced.
pub fn samples_from_csv(text: &str, origin: &str, fd_order: usize) -> Result<SampledCurve> {
    let mut ts: Vec<f64> = Vec::new();
    let mut points: Vec<Vector> = Vec::new();
    let mut width = 0usize;
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 || line.trim().is_empty() {
            continue; // header
        }
        let fields: Vec<&str> = line.split(',').collect();
        if width == 0 {
            width = fields.len();
            if width < 3 {
                return Err(Error::Parse(format!(
                    "{origin}: need a parameter column plus at least two components"
                )));
            }
        } else if fields.len() != width {
            return Err(Error::Parse(format!(
                "{origin}: line {}: expected {width} fields, got {}",
                idx + 1,
                fields.len()
            )));
        }
        ts.push(parse_float(fields[0], origin, idx + 1)?);
        let coords = fields[1..]
            .iter()
            .map(|f| parse_float(f, origin, idx + 1))
            .collect::<Result<Vec<_>>>()?;
        points.push(Vector::new(coords)?);
    }
    if ts.len() < 2 {
        return Err(Error::InsufficientSamples {
            have: ts.len(),
            need: 2,
        });
    }
    let h = ts[1] - ts[0];
    if !(h > 0.0) {
        return Err(Error::NonMonotone { index: 1 });
    }
    let tol = 1e-9 * (ts[ts.len() - 1] - ts[0]).abs().max(1.0);
    for (k, w) in ts.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > tol {
            return Err(Error::Parse(format!(
                "{origin}: non-uniform grid at row {}: step {} vs {}",
                k + 2,
                w[1] - w[0],
                h
            )));
        }
    }
    SampledCurve::new(ts[0], h, points, fd_order)
}

/// Frame-trace CSV: `s,det,f_1_1,...,f_n_n` (row-major frame entries).
pub fn trace_to_csv(rec: &ReconstructedCurve) -> String {
    let n = rec.dim();
    let mut out = String::from("s,det");
    for i in 1..=n {
        for j in 1..=n {
            out.push_str(&format!(",f_{i}_{j}"));
        }
    }
    out.push('\n');
    for state in rec.trace() {
        out.push_str(&fmt17(state.s));
        out.push(',');
        out.push_str(&fmt17(crate::linalg::det(&state.f)));
        for row in state.f.rows() {
            for v in row {
                out.push(',');
                out.push_str(&fmt17(v));
            }
        }
        out.push('\n');
    }
    out
}

/// Resolve a curve argument: `catalog:name:p1:p2...`, `csv:path[:fd_order]`,
/// or a path to a curve JSON file.
pub fn parse_curve_arg(arg: &str, default_fd_order: usize) -> Result<Box<dyn CurveProvider>> {
    if let Some(rest) = arg.strip_prefix("catalog:") {
        let mut parts = rest.split(':');
        let name = parts
            .next()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::Parse(format!("{arg:?}: missing catalog name")))?;
        let params = parts
            .map(|p| {
                p.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("{arg:?}: bad parameter {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(Box::new(make_catalog(name, &params)?));
    }
    if let Some(rest) = arg.strip_prefix("csv:") {
        let (path, fd_order) = match rest.rsplit_once(':') {
            Some((p, ord)) if ord.chars().all(|c| c.is_ascii_digit()) && !ord.is_empty() => {
                let ord = ord
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("{arg:?}: bad fd order {ord:?}")))?;
                (p, ord)
            }
            _ => (rest, default_fd_order),
        };
        let text = read_file(Path::new(path))?;
        return Ok(Box::new(samples_from_csv(&text, path, fd_order)?));
    }
    let text = read_file(Path::new(arg))?;
    curve_from_json(&text, arg, default_fd_order)
}

/// Build a curve from spec JSON text; `origin` labels parse errors.
pub fn curve_from_json(
    text: &str,
    origin: &str,
    default_fd_order: usize,
) -> Result<Box<dyn CurveProvider>> {
    let spec: CurveSpecFile = parse_json(text, origin)?;
    spec.build(default_fd_order)
}

/// Parse a comma-separated vector such as `1,0,-2.5`.
pub fn parse_vector_arg(arg: &str) -> Result<Vector> {
    let coords = arg
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad vector component {p:?} in {arg:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Vector::new(coords)
}

/// Parse a frame JSON file: row-major `[[...], ...]`.
pub fn frame_from_json(text: &str, origin: &str) -> Result<Mat> {
    let rows: Vec<Vec<f64>> = parse_json(text, origin)?;
    Mat::from_rows(&rows)
}
