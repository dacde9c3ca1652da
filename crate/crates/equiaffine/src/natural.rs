//! Arc length and natural reparametrization.
//!
//! The natural parameter s makes the frame determinant identically 1 and
//! kills the last frame coefficient, which is what turns the remaining
//! coefficients into curvatures. `NaturalCurve` wraps any provider and
//! serves jets in s through the inverse parameter map.

use crate::chain::{compose_jet, inverse_derivatives};
use crate::curve::{CurveProvider, DerivativeJet};
use crate::error::{Error, Result};
use crate::interp::Pchip;
use crate::invariants::{density, density_deriv};
use crate::linalg::Vector;
use crate::stencil::fornberg_weights;

/// Cumulative arc length sampled on a uniform parameter grid.
///
/// Each step adds a three-point Simpson increment using the step midpoint,
/// so the table is strictly increasing whenever the density is positive.
#[derive(Debug, Clone)]
pub struct ArcLengthTable {
    ts: Vec<f64>,
    sigma: Vec<f64>,
    rho: Vec<f64>,
}

impl ArcLengthTable {
    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn t(&self, i: usize) -> f64 {
        self.ts[i]
    }

    pub fn sigma(&self, i: usize) -> f64 {
        self.sigma[i]
    }

    pub fn rho(&self, i: usize) -> f64 {
        self.rho[i]
    }

    /// Total arc length over the tabulated domain.
    pub fn total(&self) -> f64 {
        *self.sigma.last().unwrap()
    }

    /// Largest index k with sigma[k] <= s (clamped to len - 2).
    fn bracket(&self, s: f64) -> usize {
        match self
            .sigma
            .binary_search_by(|v| v.partial_cmp(&s).unwrap())
        {
            Ok(k) => k.min(self.len() - 2),
            Err(0) => 0,
            Err(k) => (k - 1).min(self.len() - 2),
        }
    }
}

/// Tabulate cumulative arc length on `npts` uniform nodes (forced odd, at
/// least 3).
pub fn arc_length<C: CurveProvider + ?Sized>(curve: &C, npts: usize) -> Result<ArcLengthTable> {
    let npts = if npts < 3 {
        3
    } else if npts.is_multiple_of(2) {
        npts + 1
    } else {
        npts
    };
    let (a, b) = curve.domain();
    let h = (b - a) / (npts - 1) as f64;
    let rho_at = |t: f64| -> Result<f64> { density(&curve.jet(t)?) };

    let mut ts = Vec::with_capacity(npts);
    let mut rho = Vec::with_capacity(npts);
    for i in 0..npts {
        let t = a + h * i as f64;
        ts.push(t);
        rho.push(rho_at(t)?);
    }
    let mut sigma = Vec::with_capacity(npts);
    sigma.push(0.0);
    for i in 0..npts - 1 {
        let mid = rho_at(0.5 * (ts[i] + ts[i + 1]))?;
        let inc = h / 6.0 * (rho[i] + 4.0 * mid + rho[i + 1]);
        sigma.push(sigma[i] + inc);
    }
    Ok(ArcLengthTable { ts, sigma, rho })
}

/// A curve re-expressed in its natural parameter.
///
/// Jets are exact in structure: the frame determinant of every served jet
/// is 1 up to roundoff. Accuracy of the top derivative rests on a small
/// centered stencil over the analytic density derivative.
pub struct NaturalCurve<P> {
    base: P,
    n: usize,
    table: ArcLengthTable,
    /// monotone interpolant s -> t used as the Newton starting guess
    inverse: Pchip,
    /// step for the stencil over the density
    h_rho: f64,
    /// interval admissible for stencil nodes, inset by the base curve's
    /// edge margin so every node sees full-accuracy jets
    rho_span: (f64, f64),
}

/// Build the natural reparametrization of `base` from an arc-length table
/// with `npts` nodes.
pub fn reparametrize<P: CurveProvider>(base: P, npts: usize) -> Result<NaturalCurve<P>> {
    NaturalCurve::new(base, npts)
}

impl<P: CurveProvider> NaturalCurve<P> {
    pub fn new(base: P, npts: usize) -> Result<Self> {
        let n = base.dim();
        let table = arc_length(&base, npts)?;
        let inverse = Pchip::new(
            (0..table.len()).map(|i| table.sigma(i)).collect(),
            (0..table.len()).map(|i| table.t(i)).collect(),
        )?;
        let (a, b) = base.domain();
        let hw = (n + 4) / 2;
        let margin = base.edge_margin();
        let (lo, hi) = base.eval_range();
        // spacing well above the edge margin keeps noise from finite-
        // difference providers below the stencil's amplification, which
        // grows steeply once the stencil extrapolates past its last node
        let mut h_rho = ((b - a) / 64.0).max(2.0 * margin);
        let mut rho_span = (lo, hi);
        if lo.is_finite() && hi.is_finite() {
            let span = 2 * hw;
            let guarded = (hi - margin) - (lo + margin);
            if guarded >= span as f64 * h_rho {
                rho_span = (lo + margin, hi - margin);
            } else {
                h_rho = h_rho.min((hi - lo) / span as f64);
            }
        }
        Ok(Self {
            base,
            n,
            table,
            inverse,
            h_rho,
            rho_span,
        })
    }

    pub fn base(&self) -> &P {
        &self.base
    }

    pub fn into_base(self) -> P {
        self.base
    }

    pub fn table(&self) -> &ArcLengthTable {
        &self.table
    }

    pub fn total_length(&self) -> f64 {
        self.table.total()
    }

    fn rho_at(&self, t: f64) -> Result<f64> {
        density(&self.base.jet_at(t)?)
    }

    /// Invert s = sigma(t): interpolated guess, then a few Newton steps on
    /// the same per-step Simpson rule that built the table.
    pub fn t_of_s(&self, s: f64) -> Result<f64> {
        let total = self.table.total();
        let s = s.clamp(0.0, total);
        let k = self.table.bracket(s);
        let (tk, tk1) = (self.table.t(k), self.table.t(k + 1));
        let rho_k = self.table.rho(k);
        let target = s - self.table.sigma(k);

        let mut t = self.inverse.eval(s).clamp(tk, tk1);
        for _ in 0..3 {
            let rho_mid = self.rho_at(0.5 * (tk + t))?;
            let rho_t = self.rho_at(t)?;
            let g = (t - tk) / 6.0 * (rho_k + 4.0 * rho_mid + rho_t) - target;
            let step = g / rho_t;
            t = (t - step).clamp(tk, tk1);
        }
        Ok(t)
    }

    /// sigma', sigma'', and stencil-extended higher derivatives at t, up to
    /// order n + 1.
    ///
    /// sigma' and sigma'' come from the jet in closed form. The rest are
    /// density derivatives from a stencil, routed by jet quality: exact
    /// providers differentiate the closed-form density derivative, while
    /// finite-difference providers differentiate density values, which
    /// only need derivatives 1..n of the curve and so stay clean when the
    /// top jet entry is noisy.
    fn sigma_jet(&self, t: f64, jet: &DerivativeJet) -> Result<Vec<f64>> {
        let n = self.n;
        let mut sig = Vec::with_capacity(n + 1);
        sig.push(density(jet)?);
        sig.push(density_deriv(jet)?);

        let exact = self.base.edge_margin() == 0.0;
        let hw = if exact { (n + 3) / 2 } else { (n + 4) / 2 };
        let width = 2 * hw + 1;
        let mut first = t - hw as f64 * self.h_rho;
        let (lo, hi) = self.rho_span;
        let span = (width - 1) as f64 * self.h_rho;
        if lo.is_finite() && first < lo {
            first = lo;
        }
        if hi.is_finite() && first + span > hi {
            first = hi - span;
        }
        let nodes: Vec<f64> = (0..width)
            .map(|j| first + j as f64 * self.h_rho)
            .collect();
        let mut values = Vec::with_capacity(width);
        for &node in &nodes {
            let node_jet = self.base.jet_at(node)?;
            values.push(if exact {
                density_deriv(&node_jet)?
            } else {
                density(&node_jet)?
            });
        }
        if exact {
            let w = fornberg_weights(&nodes, t, n - 1);
            for d in 1..n {
                sig.push(w[d].iter().zip(&values).map(|(wi, vi)| wi * vi).sum());
            }
        } else {
            let w = fornberg_weights(&nodes, t, n);
            for d in 2..=n {
                sig.push(w[d].iter().zip(&values).map(|(wi, vi)| wi * vi).sum());
            }
        }
        Ok(sig)
    }
}

impl<P: CurveProvider> CurveProvider for NaturalCurve<P> {
    fn dim(&self) -> usize {
        self.n
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, self.table.total())
    }

    fn jet_at(&self, s: f64) -> Result<DerivativeJet> {
        let t = self.t_of_s(s)?;
        let base_jet = self.base.jet_at(t)?;
        let sigma = self.sigma_jet(t, &base_jet)?;
        if !(sigma[0] > 0.0) {
            return Err(Error::DegenerateCurve { t, det: sigma[0] });
        }
        let u = inverse_derivatives(&sigma);
        let derivs = compose_jet(base_jet.derivs(), &u);
        DerivativeJet::new(self.n, s, derivs, base_jet.position().cloned())
    }

    fn position(&self, s: f64) -> Result<Vector> {
        let (a, b) = self.domain();
        let slack = 1e-9 * (b - a).abs().max(1.0);
        if s < a - slack || s > b + slack {
            return Err(Error::OutOfDomain { t: s, a, b });
        }
        let t = self.t_of_s(s)?;
        let jet = self.base.jet_at(t)?;
        jet.position().cloned().ok_or_else(|| {
            Error::BadParams("curve provider produced a jet without position".into())
        })
    }
}
