//! Curve descriptions and derivative-jet evaluation.
//!
//! A jet carries the position and the first n+1 derivative vectors of a
//! curve in R^n at one parameter value, which is exactly the material every
//! invariant formula consumes. Polynomial and catalog curves produce exact
//! jets; sampled curves produce finite-difference jets.

use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};
use crate::stencil::fornberg_weights;
use std::f64::consts::{FRAC_PI_2, PI};

/// Position and derivatives C^(1)..C^(n+1) of a curve at one parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeJet {
    n: usize,
    t: f64,
    /// `derivs[k-1]` holds C^(k), k = 1..=n+1
    derivs: Vec<Vector>,
    position: Option<Vector>,
}

impl DerivativeJet {
    pub fn new(n: usize, t: f64, derivs: Vec<Vector>, position: Option<Vector>) -> Result<Self> {
        if derivs.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                got: derivs.len(),
            });
        }
        for d in derivs.iter().chain(position.iter()) {
            if d.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: d.dim(),
                });
            }
            for (index, &value) in d.as_slice().iter().enumerate() {
                if !value.is_finite() {
                    return Err(Error::NonFinite { index, value });
                }
            }
        }
        if !t.is_finite() {
            return Err(Error::NonFinite { index: 0, value: t });
        }
        Ok(Self {
            n,
            t,
            derivs,
            position,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// C^(k), 1-based, k in 1..=n+1.
    pub fn deriv(&self, k: usize) -> &Vector {
        &self.derivs[k - 1]
    }

    pub fn derivs(&self) -> &[Vector] {
        &self.derivs
    }

    pub fn position(&self) -> Option<&Vector> {
        self.position.as_ref()
    }

    /// The matrix (C', C'', ..., C^(n)) with derivatives as columns.
    pub fn frame_columns(&self) -> Mat {
        Mat::from_columns(&self.derivs[..self.n]).expect("jet invariant: square by construction")
    }

    /// Largest derivative norm among C^(1)..C^(n); the size scale used by
    /// relative degeneracy thresholds.
    pub fn scale(&self) -> f64 {
        self.derivs[..self.n]
            .iter()
            .fold(0.0, |m, d| f64::max(m, d.norm_inf()))
    }

    /// Apply a linear map to every derivative and (with offset) the position.
    pub fn map_linear(&self, b: &Mat, offset: Option<&Vector>) -> Result<Self> {
        if b.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: b.dim(),
            });
        }
        let derivs = self
            .derivs
            .iter()
            .map(|d| b.mat_vec(d))
            .collect::<Result<Vec<_>>>()?;
        let position = match (&self.position, offset) {
            (Some(p), Some(tau)) => Some(b.mat_vec(p)?.add(tau)),
            (Some(p), None) => Some(b.mat_vec(p)?),
            (None, _) => None,
        };
        Ok(Self {
            n: self.n,
            t: self.t,
            derivs,
            position,
        })
    }
}

/// A curve presented through its jets.
///
/// Providers are immutable and evaluation is pure, so they can be shared
/// freely across threads.
pub trait CurveProvider: Send + Sync {
    /// Ambient dimension n.
    fn dim(&self) -> usize;

    /// Nominal parameter interval [a, b].
    fn domain(&self) -> (f64, f64);

    /// Interval on which `jet_at` is actually computable. Closed-form curves
    /// extend beyond their nominal domain; sampled curves do not.
    fn eval_range(&self) -> (f64, f64) {
        self.domain()
    }

    /// Distance from the ends of `eval_range` within which jets lose
    /// accuracy to one-sided differencing. Zero for exact providers;
    /// stencils built on top of jets stay this far inside when they can.
    fn edge_margin(&self) -> f64 {
        0.0
    }

    /// Jet at `t` without the nominal-domain gate (still limited to
    /// `eval_range`). The pipeline uses this internally where stencils and
    /// quadrature need room around the endpoints.
    fn jet_at(&self, t: f64) -> Result<DerivativeJet>;

    /// Jet at `t` in the nominal domain (with a tiny relative slack for
    /// endpoint rounding).
    fn jet(&self, t: f64) -> Result<DerivativeJet> {
        let (a, b) = self.domain();
        let slack = 1e-9 * (b - a).abs().max(1.0);
        if t < a - slack || t > b + slack {
            return Err(Error::OutOfDomain { t, a, b });
        }
        self.jet_at(t)
    }

    /// Position C(t); available for every provider in this crate.
    fn position(&self, t: f64) -> Result<Vector> {
        let jet = self.jet(t)?;
        jet.position().cloned().ok_or_else(|| {
            Error::BadParams("curve provider produced a jet without position".into())
        })
    }
}

impl<P: CurveProvider + ?Sized> CurveProvider for Box<P> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn domain(&self) -> (f64, f64) {
        (**self).domain()
    }
    fn eval_range(&self) -> (f64, f64) {
        (**self).eval_range()
    }
    fn edge_margin(&self) -> f64 {
        (**self).edge_margin()
    }
    fn jet_at(&self, t: f64) -> Result<DerivativeJet> {
        (**self).jet_at(t)
    }
    fn jet(&self, t: f64) -> Result<DerivativeJet> {
        (**self).jet(t)
    }
    fn position(&self, t: f64) -> Result<Vector> {
        (**self).position(t)
    }
}

impl<P: CurveProvider + ?Sized> CurveProvider for &P {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn domain(&self) -> (f64, f64) {
        (**self).domain()
    }
    fn eval_range(&self) -> (f64, f64) {
        (**self).eval_range()
    }
    fn edge_margin(&self) -> f64 {
        (**self).edge_margin()
    }
    fn jet_at(&self, t: f64) -> Result<DerivativeJet> {
        (**self).jet_at(t)
    }
    fn jet(&self, t: f64) -> Result<DerivativeJet> {
        (**self).jet(t)
    }
    fn position(&self, t: f64) -> Result<Vector> {
        (**self).position(t)
    }
}

/// A curve with polynomial components, coefficients in ascending degree.
#[derive(Debug, Clone)]
pub struct PolynomialCurve {
    n: usize,
    coeffs: Vec<Vec<f64>>,
    domain: (f64, f64),
}

impl PolynomialCurve {
    pub fn new(coeffs: Vec<Vec<f64>>, domain: (f64, f64)) -> Result<Self> {
        let n = coeffs.len();
        if n < 2 {
            return Err(Error::BadParams(format!(
                "polynomial curve needs dimension >= 2, got {n}"
            )));
        }
        let nonconstant = coeffs
            .iter()
            .any(|c| c.iter().skip(1).any(|&v| v != 0.0));
        if !nonconstant {
            return Err(Error::BadParams(
                "polynomial curve must have a component of degree >= 1".into(),
            ));
        }
        for c in &coeffs {
            for (index, &value) in c.iter().enumerate() {
                if !value.is_finite() {
                    return Err(Error::NonFinite { index, value });
                }
            }
        }
        if !(domain.0 < domain.1) {
            return Err(Error::BadParams(format!(
                "invalid domain [{}, {}]",
                domain.0, domain.1
            )));
        }
        Ok(Self { n, coeffs, domain })
    }

    /// k-th derivative of one component at t (k = 0 is the value).
    fn component_deriv(&self, comp: usize, k: usize, t: f64) -> f64 {
        let c = &self.coeffs[comp];
        if k >= c.len() {
            return 0.0;
        }
        // Horner on the k-times differentiated coefficients
        let mut acc = 0.0;
        for j in (k..c.len()).rev() {
            let mut f = c[j];
            for i in 0..k {
                f *= (j - i) as f64;
            }
            acc = acc * t + f;
        }
        acc
    }
}

impl CurveProvider for PolynomialCurve {
    fn dim(&self) -> usize {
        self.n
    }

    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn eval_range(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn jet_at(&self, t: f64) -> Result<DerivativeJet> {
        let position = Vector::from_raw(
            (0..self.n)
                .map(|c| self.component_deriv(c, 0, t))
                .collect(),
        );
        let derivs = (1..=self.n + 1)
            .map(|k| {
                Vector::from_raw(
                    (0..self.n)
                        .map(|c| self.component_deriv(c, k, t))
                        .collect(),
                )
            })
            .collect();
        DerivativeJet::new(self.n, t, derivs, Some(position))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum CatalogKind {
    Circle { r: f64 },
    Ellipse { a: f64, b: f64 },
    Moment { degree: usize },
    Helix { a: f64, b: f64, c: f64 },
    Parabola,
}

/// Closed-form curves with exact jets; the oracle layer every analytic test
/// runs on.
#[derive(Debug, Clone)]
pub struct CatalogCurve {
    kind: CatalogKind,
    domain: (f64, f64),
}

impl CatalogCurve {
    pub fn circle(r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::BadParams(format!("circle radius must be > 0, got {r}")));
        }
        Ok(Self {
            kind: CatalogKind::Circle { r },
            domain: (0.0, 2.0 * PI),
        })
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::BadParams(format!(
                "ellipse axes must be > 0, got ({a}, {b})"
            )));
        }
        Ok(Self {
            kind: CatalogKind::Ellipse { a, b },
            domain: (0.0, 2.0 * PI),
        })
    }

    /// The moment curve t -> (t, t^2, ..., t^degree) in R^degree.
    pub fn moment(degree: usize) -> Result<Self> {
        if degree < 2 {
            return Err(Error::BadParams(format!(
                "moment curve needs degree >= 2, got {degree}"
            )));
        }
        Ok(Self {
            kind: CatalogKind::Moment { degree },
            domain: (0.0, 1.0),
        })
    }

    pub fn helix(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && c > 0.0) {
            return Err(Error::BadParams(format!(
                "helix parameters must be > 0, got ({a}, {b}, {c})"
            )));
        }
        Ok(Self {
            kind: CatalogKind::Helix { a, b, c },
            domain: (0.0, 2.0 * PI),
        })
    }

    pub fn parabola() -> Result<Self> {
        Ok(Self {
            kind: CatalogKind::Parabola,
            domain: (0.0, 1.0),
        })
    }

    pub fn with_domain(mut self, a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::BadParams(format!("invalid domain [{a}, {b}]")));
        }
        self.domain = (a, b);
        Ok(self)
    }

    fn kind_dim(&self) -> usize {
        match self.kind {
            CatalogKind::Circle { .. } | CatalogKind::Ellipse { .. } | CatalogKind::Parabola => 2,
            CatalogKind::Moment { degree } => degree,
            CatalogKind::Helix { .. } => 3,
        }
    }
}

/// d^k/dt^k of t^degree (falling factorial times the power).
fn monomial_deriv(degree: usize, k: usize, t: f64) -> f64 {
    if k > degree {
        return 0.0;
    }
    let mut f = 1.0;
    for i in 0..k {
        f *= (degree - i) as f64;
    }
    f * t.powi((degree - k) as i32)
}

impl CurveProvider for CatalogCurve {
    fn dim(&self) -> usize {
        self.kind_dim()
    }

    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn eval_range(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn jet_at(&self, t: f64) -> Result<DerivativeJet> {
        let n = self.dim();
        let comp = |k: usize| -> Vec<f64> {
            match self.kind {
                CatalogKind::Circle { r } => {
                    let phase = t + k as f64 * FRAC_PI_2;
                    vec![r * phase.cos(), r * phase.sin()]
                }
                CatalogKind::Ellipse { a, b } => {
                    let phase = t + k as f64 * FRAC_PI_2;
                    vec![a * phase.cos(), b * phase.sin()]
                }
                CatalogKind::Moment { degree } => {
                    (1..=degree).map(|j| monomial_deriv(j, k, t)).collect()
                }
                CatalogKind::Helix { a, b, c } => {
                    let phase = t + k as f64 * FRAC_PI_2;
                    let z = match k {
                        0 => c * t,
                        1 => c,
                        _ => 0.0,
                    };
                    vec![a * phase.cos(), b * phase.sin(), z]
                }
                CatalogKind::Parabola => vec![monomial_deriv(1, k, t), monomial_deriv(2, k, t)],
            }
        };
        let position = Vector::from_raw(comp(0));
        let derivs = (1..=n + 1).map(|k| Vector::from_raw(comp(k))).collect();
        DerivativeJet::new(n, t, derivs, Some(position))
    }
}

/// Build a catalog curve from its name and parameter list.
pub fn make_catalog(name: &str, params: &[f64]) -> Result<CatalogCurve> {
    let expect = |k: usize| -> Result<()> {
        if params.len() != k {
            return Err(Error::BadParams(format!(
                "catalog curve {name:?} takes {k} parameter(s), got {}",
                params.len()
            )));
        }
        Ok(())
    };
    match name {
        "circle" => {
            expect(1)?;
            CatalogCurve::circle(params[0])
        }
        "ellipse" => {
            expect(2)?;
            CatalogCurve::ellipse(params[0], params[1])
        }
        "moment" => {
            expect(1)?;
            let d = params[0];
            if d.fract() != 0.0 || !(d >= 1.0) {
                return Err(Error::BadParams(format!(
                    "moment degree must be a positive integer, got {d}"
                )));
            }
            CatalogCurve::moment(d as usize)
        }
        "helix" => {
            expect(3)?;
            CatalogCurve::helix(params[0], params[1], params[2])
        }
        "parabola" => {
            expect(0)?;
            CatalogCurve::parabola()
        }
        other => Err(Error::UnknownCatalogName(other.to_string())),
    }
}

/// A curve given by uniform samples; jets come from central finite
/// differences of the chosen accuracy order. Densely sampled data is
/// strided so the stencil spacing stays near the floating-point optimum
/// for the highest derivative, instead of amplifying rounding noise at
/// the raw grid resolution.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    n: usize,
    t0: f64,
    h: f64,
    points: Vec<Vector>,
    fd_order: usize,
    /// jet window half-width in stencil nodes
    half_width: usize,
    /// node spacing in grid steps
    stride: usize,
}

impl SampledCurve {
    pub fn new(t0: f64, h: f64, points: Vec<Vector>, fd_order: usize) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() || !t0.is_finite() {
            return Err(Error::BadParams(format!("invalid grid: t0 = {t0}, h = {h}")));
        }
        if !matches!(fd_order, 2 | 4 | 6) {
            return Err(Error::UnsupportedOrder(fd_order));
        }
        let n = points.first().map(|p| p.dim()).unwrap_or(0);
        if n < 2 {
            return Err(Error::BadParams(format!(
                "sampled curve needs dimension >= 2, got {n}"
            )));
        }
        for p in &points {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.dim(),
                });
            }
        }
        let need = (n + 1) + fd_order + 2;
        if points.len() < need {
            return Err(Error::InsufficientSamples {
                have: points.len(),
                need,
            });
        }
        // window holding >= (n+1) + fd_order nodes keeps every derivative up
        // to n+1 at the requested accuracy, on or off the grid
        let half_width = (n + 1 + fd_order) / 2;
        // truncation ~ (stride h)^p against rounding ~ eps / (stride h)^d
        // balances near eps^(1/(d+p)); the leading factor folds in stencil
        // weight sums, which inflate the rounding side faster for higher
        // derivatives. Never stride wider than the data.
        let factor = 1.0 + 0.5 * (n + 1) as f64;
        let target = factor * f64::EPSILON.powf(1.0 / (n + 1 + fd_order) as f64);
        let max_stride = (points.len() - 1) / (2 * half_width);
        let stride = ((target / h).round() as i64).clamp(1, max_stride.max(1) as i64) as usize;
        Ok(Self {
            n,
            t0,
            h,
            points,
            fd_order,
            half_width,
            stride,
        })
    }

    pub fn fd_order(&self) -> usize {
        self.fd_order
    }

    fn t_end(&self) -> f64 {
        self.t0 + (self.points.len() - 1) as f64 * self.h
    }
}

impl CurveProvider for SampledCurve {
    fn dim(&self) -> usize {
        self.n
    }

    fn domain(&self) -> (f64, f64) {
        (self.t0, self.t_end())
    }

    fn edge_margin(&self) -> f64 {
        (self.half_width * self.stride) as f64 * self.h
    }

    fn jet_at(&self, t: f64) -> Result<DerivativeJet> {
        let (lo, hi) = self.eval_range();
        let slack = 1e-9 * (hi - lo).max(1.0);
        if t < lo - slack || t > hi + slack {
            return Err(Error::OutOfDomain { t, a: lo, b: hi });
        }
        let len = self.points.len() as i64;
        let ic = ((t - self.t0) / self.h).round() as i64;
        let hw = self.half_width as i64;
        let step = self.stride as i64;
        // center on the nearest node, then shift the window whole into the
        // data; near the ends this degrades gracefully to one-sided nodes
        let first = (ic - hw * step).clamp(0, len - 1 - 2 * hw * step);
        let width = 2 * self.half_width + 1;

        let index = |j: usize| (first + j as i64 * step) as usize;
        let nodes: Vec<f64> = (0..width)
            .map(|j| self.t0 + index(j) as f64 * self.h)
            .collect();
        let w = fornberg_weights(&nodes, t, self.n + 1);

        let vector_for = |k: usize| -> Vector {
            let mut v = vec![0.0; self.n];
            for (j, wk) in w[k].iter().enumerate() {
                if *wk == 0.0 {
                    continue;
                }
                let p = &self.points[index(j)];
                for (vi, pi) in v.iter_mut().zip(p.as_slice()) {
                    *vi += wk * pi;
                }
            }
            Vector::from_raw(v)
        };

        let position = vector_for(0);
        let derivs = (1..=self.n + 1).map(vector_for).collect();
        DerivativeJet::new(self.n, t, derivs, Some(position))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_samples(r: f64, t0: f64, h: f64, count: usize) -> Vec<Vector> {
        (0..count)
            .map(|i| {
                let t = t0 + i as f64 * h;
                Vector::from_raw(vec![r * t.cos(), r * t.sin()])
            })
            .collect()
    }

    #[test]
    fn moment_jet_is_the_factorial_pattern() {
        let c = CatalogCurve::moment(3).unwrap();
        let jet = c.jet(0.0).unwrap();
        assert_eq!(jet.deriv(1).as_slice(), &[1.0, 0.0, 0.0]);
        assert_eq!(jet.deriv(2).as_slice(), &[0.0, 2.0, 0.0]);
        assert_eq!(jet.deriv(3).as_slice(), &[0.0, 0.0, 6.0]);
        assert_eq!(jet.deriv(4).as_slice(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn moment4_high_derivatives() {
        let c = CatalogCurve::moment(4).unwrap();
        assert_eq!(c.domain(), (0.0, 1.0));
        let jet = c.jet(0.5).unwrap();
        assert_eq!(jet.deriv(4).as_slice(), &[0.0, 0.0, 0.0, 24.0]);
        assert_eq!(jet.deriv(5).as_slice(), &[0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn ellipse_jet_at_zero() {
        let c = CatalogCurve::ellipse(1.0, 2.0).unwrap();
        let (a, b) = (1.0, 2.0);
        let jet = c.jet(0.0).unwrap();
        assert!(jet.deriv(1).max_abs_diff(&Vector::from_raw(vec![0.0, b])) < 1e-15);
        assert!(jet.deriv(2).max_abs_diff(&Vector::from_raw(vec![-a, 0.0])) < 1e-15);
        assert!(jet.deriv(3).max_abs_diff(&Vector::from_raw(vec![0.0, -b])) < 1e-15);
    }

    #[test]
    fn circle_position_and_domain() {
        let c = make_catalog("circle", &[1.0]).unwrap();
        assert_eq!(c.domain(), (0.0, 2.0 * PI));
        let p = c.position(1.0).unwrap();
        assert!((p[0] - 1.0f64.cos()).abs() < 1e-15);
        assert!((p[1] - 1.0f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn degenerate_catalog_params_rejected() {
        assert!(matches!(
            make_catalog("ellipse", &[2.0, 0.0]),
            Err(Error::BadParams(_))
        ));
        assert!(matches!(
            make_catalog("nonsense", &[1.0]),
            Err(Error::UnknownCatalogName(_))
        ));
        assert!(matches!(
            make_catalog("circle", &[1.0, 2.0]),
            Err(Error::BadParams(_))
        ));
    }

    #[test]
    fn polynomial_jet_is_exact() {
        // (t + 2t^3, 1 - t^2)
        let c = PolynomialCurve::new(
            vec![vec![0.0, 1.0, 0.0, 2.0], vec![1.0, 0.0, -1.0]],
            (0.0, 1.0),
        )
        .unwrap();
        let t = 0.3;
        let jet = c.jet(t).unwrap();
        assert!((jet.position().unwrap()[0] - (t + 2.0 * t.powi(3))).abs() < 1e-15);
        assert!((jet.deriv(1)[0] - (1.0 + 6.0 * t * t)).abs() < 1e-15);
        assert!((jet.deriv(1)[1] - (-2.0 * t)).abs() < 1e-15);
        assert!((jet.deriv(2)[0] - 12.0 * t).abs() < 1e-15);
        assert!((jet.deriv(3)[0] - 12.0).abs() < 1e-15);
        assert_eq!(jet.deriv(3).as_slice()[1], 0.0);
    }

    #[test]
    fn out_of_domain_rejected() {
        let c = CatalogCurve::moment(2).unwrap();
        assert!(matches!(c.jet(1.5), Err(Error::OutOfDomain { .. })));
        // eval_range is wider for closed forms
        assert!(c.jet_at(1.5).is_ok());
    }

    #[test]
    fn sampled_circle_first_derivative_error() {
        let h = 1e-3;
        let count = 4001;
        let s = SampledCurve::new(0.0, h, circle_samples(1.0, 0.0, h, count), 4).unwrap();
        let exact = CatalogCurve::circle(1.0).unwrap();
        let (lo, hi) = s.domain();
        let mut worst: f64 = 0.0;
        for k in 0..40 {
            let t = lo + (hi - lo) * k as f64 / 39.0;
            let jfd = s.jet(t).unwrap();
            let jex = exact.jet_at(t).unwrap();
            worst = worst.max(jfd.deriv(1).max_abs_diff(jex.deriv(1)));
        }
        assert!(worst <= 1e-8, "first-derivative error {worst}");
    }

    #[test]
    fn sampled_jets_converge_at_the_stencil_order() {
        let exact = CatalogCurve::circle(1.0).unwrap();
        let err_at = |h: f64| -> f64 {
            let count = (4.0 / h) as usize;
            let s = SampledCurve::new(-2.0, h, circle_samples(1.0, -2.0, h, count), 4).unwrap();
            let mut worst: f64 = 0.0;
            for k in 0..20 {
                let t = -0.8 + 1.6 * k as f64 / 19.0;
                let jfd = s.jet(t).unwrap();
                let jex = exact.jet_at(t).unwrap();
                for d in 1..=3 {
                    worst = worst.max(jfd.deriv(d).max_abs_diff(jex.deriv(d)));
                }
            }
            worst
        };
        let e1 = err_at(0.05);
        let e2 = err_at(0.025);
        let slope = (e1 / e2).log2();
        assert!(
            (slope - 4.0).abs() <= 0.15 * 4.0,
            "convergence slope {slope} (errors {e1:.3e} -> {e2:.3e})"
        );
    }

    #[test]
    fn sampled_covers_full_range_with_one_sided_edges() {
        let h = 0.01;
        let s = SampledCurve::new(0.0, h, circle_samples(1.0, 0.0, h, 50), 4).unwrap();
        assert_eq!(s.domain(), (0.0, 0.49));
        let jet = s.jet(0.0).unwrap();
        assert!((jet.deriv(1)[0] - 0.0).abs() < 1e-7);
        assert!((jet.deriv(1)[1] - 1.0).abs() < 1e-7);
        assert!(matches!(s.jet(-0.02), Err(Error::OutOfDomain { .. })));
        assert!(matches!(s.jet(0.52), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn dense_samples_stride_to_stable_spacing() {
        // raw spacing 1e-4 would put the third derivative at the rounding
        // floor; the strided window keeps it accurate
        let h = 1e-4;
        let s = SampledCurve::new(0.0, h, circle_samples(1.0, 0.0, h, 20_001), 4).unwrap();
        let jet = s.jet(1.0).unwrap();
        let want = [1.0f64.sin(), -(1.0f64.cos())];
        for (got, want) in jet.deriv(3).as_slice().iter().zip(want) {
            assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
    }

    #[test]
    fn sampled_needs_enough_points() {
        let h = 0.1;
        assert!(matches!(
            SampledCurve::new(0.0, h, circle_samples(1.0, 0.0, h, 7), 4),
            Err(Error::InsufficientSamples { .. })
        ));
    }
}
