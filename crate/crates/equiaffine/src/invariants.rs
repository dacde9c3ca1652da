//! Differential invariants under volume- and orientation-preserving affine
//! maps: regularity, the unimodular moving frame, its structure
//! coefficients, and curvature profiles.

use crate::curve::{CurveProvider, DerivativeJet};
use crate::error::{Error, Result};
use crate::linalg::{det, Mat, Vector};

/// Determinant of (C', ..., C^(n)); positive on regular, correctly oriented
/// curves and invariant under the group action.
pub fn gram_det(jet: &DerivativeJet) -> f64 {
    det(&jet.frame_columns())
}

/// Size-relative threshold below which the frame determinant counts as
/// degenerate.
pub fn degeneracy_threshold(jet: &DerivativeJet) -> f64 {
    let scale = jet.scale().max(1.0);
    1e-9 * scale.powi(jet.dim() as i32)
}

/// Frame determinant, rejected when degenerate or negatively oriented.
pub fn checked_gram_det(jet: &DerivativeJet) -> Result<f64> {
    let d = gram_det(jet);
    let eps = degeneracy_threshold(jet);
    if d.abs() <= eps {
        return Err(Error::DegenerateCurve { t: jet.t(), det: d });
    }
    if d < 0.0 {
        return Err(Error::OrientationViolation { t: jet.t(), det: d });
    }
    Ok(d)
}

/// Outcome of a regularity scan over the parameter domain.
#[derive(Debug, Clone)]
pub struct RegularityReport {
    pub samples: usize,
    pub min_det: f64,
    pub argmin_t: f64,
}

/// Sample the frame determinant on a uniform grid and fail on the worst
/// point if it is degenerate or negatively oriented.
pub fn check_regular<C: CurveProvider + ?Sized>(
    curve: &C,
    samples: usize,
) -> Result<RegularityReport> {
    if samples < 2 {
        return Err(Error::BadParams(format!(
            "regularity scan needs >= 2 samples, got {samples}"
        )));
    }
    let (a, b) = curve.domain();
    let mut min_det = f64::INFINITY;
    let mut argmin_t = a;
    let mut worst: Option<Error> = None;
    for i in 0..samples {
        let t = a + (b - a) * i as f64 / (samples - 1) as f64;
        let jet = curve.jet(t)?;
        let d = gram_det(&jet);
        if d < min_det {
            min_det = d;
            argmin_t = t;
        }
        if worst.is_none() {
            if let Err(e) = checked_gram_det(&jet) {
                worst = Some(e);
            }
        }
    }
    match worst {
        Some(e) => Err(e),
        None => Ok(RegularityReport {
            samples,
            min_det,
            argmin_t,
        }),
    }
}

/// The unimodular frame (C', ..., C^(n)) / det^(1/n), an SL(n) matrix.
pub fn frame_alpha(jet: &DerivativeJet) -> Result<Mat> {
    let d = checked_gram_det(jet)?;
    let f = jet.frame_columns();
    let alpha = f.scale(d.powf(-1.0 / jet.dim() as f64));
    debug_assert!((det(&alpha) - 1.0).abs() <= 1e-9 * det(&alpha).abs().max(1.0));
    Ok(alpha)
}

/// Coefficients X with (C', ..., C^(n)) X = C^(n+1), by determinant ratios:
/// X_i is the determinant with column i replaced by C^(n+1), over the frame
/// determinant.
pub fn cramer_coeffs(jet: &DerivativeJet) -> Result<Vector> {
    let n = jet.dim();
    let d = checked_gram_det(jet)?;
    let mut x = vec![0.0; n];
    let mut cols: Vec<Vector> = jet.derivs()[..n].to_vec();
    for i in 0..n {
        let saved = std::mem::replace(&mut cols[i], jet.deriv(n + 1).clone());
        let m = Mat::from_columns(&cols)?;
        x[i] = det(&m) / d;
        cols[i] = saved;
    }
    Ok(Vector::from_raw(x))
}

/// The frame's logarithmic derivative alpha^-1 alpha', which is
/// [e_2, ..., e_n, X] + a I with a = -X_n / n. Trace-free by construction.
#[derive(Debug, Clone)]
pub struct PullbackMatrix {
    n: usize,
    a: f64,
    x: Vector,
    mat: Mat,
}

impl PullbackMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Scalar multiple of the identity split off the companion part.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// The coefficient vector X.
    pub fn x(&self) -> &Vector {
        &self.x
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }
}

pub fn pullback(jet: &DerivativeJet) -> Result<PullbackMatrix> {
    let n = jet.dim();
    let x = cramer_coeffs(jet)?;
    let a = -x[n - 1] / n as f64;
    let mut mat = Mat::zeros(n);
    for j in 0..n - 1 {
        mat[(j + 1, j)] = 1.0;
    }
    mat.set_col(n - 1, &x);
    for i in 0..n {
        mat[(i, i)] += a;
    }
    Ok(PullbackMatrix { n, a, x, mat })
}

/// Arc-length density det(C', ..., C^(n))^(2 / (n (n+1))).
pub fn density(jet: &DerivativeJet) -> Result<f64> {
    let n = jet.dim() as f64;
    let d = checked_gram_det(jet)?;
    Ok(d.powf(2.0 / (n * (n + 1.0))))
}

/// Parameter derivative of the density, in closed form from the jet: the
/// only nonzero term of the determinant's derivative replaces the last
/// column with C^(n+1).
pub fn density_deriv(jet: &DerivativeJet) -> Result<f64> {
    let n = jet.dim();
    let d = checked_gram_det(jet)?;
    let mut cols: Vec<Vector> = jet.derivs()[..n].to_vec();
    cols[n - 1] = jet.deriv(n + 1).clone();
    let d_prime = det(&Mat::from_columns(&cols)?);
    let expo = 2.0 / (n as f64 * (n as f64 + 1.0));
    Ok(expo * d.powf(expo - 1.0) * d_prime)
}

/// Tolerance on the natural-parametrization witnesses: unit frame
/// determinant and vanishing last coefficient.
pub const NATURAL_TOL: f64 = 1e-6;

/// Curvatures (X_1, ..., X_{n-1}) of a naturally parametrized jet.
///
/// Fails with `NotNaturalParameter` when the jet does not satisfy the
/// witnesses of natural parametrization.
pub fn curvatures(jet: &DerivativeJet) -> Result<Vector> {
    let d = checked_gram_det(jet)?;
    if (d - 1.0).abs() > NATURAL_TOL {
        return Err(Error::NotNaturalParameter {
            reason: "frame determinant must equal 1",
            value: d,
            tol: NATURAL_TOL,
        });
    }
    let x = cramer_coeffs(jet)?;
    let n = jet.dim();
    if x[n - 1].abs() > NATURAL_TOL {
        return Err(Error::NotNaturalParameter {
            reason: "last frame coefficient must vanish",
            value: x[n - 1],
            tol: NATURAL_TOL,
        });
    }
    Ok(Vector::from_raw(x.as_slice()[..n - 1].to_vec()))
}

/// Curvature channels sampled on a uniform arc-length grid.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantProfile {
    n: usize,
    s: Vec<f64>,
    /// channels[i][j] = chi_{i+1} at s[j]
    channels: Vec<Vec<f64>>,
}

impl InvariantProfile {
    pub fn new(n: usize, s: Vec<f64>, channels: Vec<Vec<f64>>) -> Result<Self> {
        if channels.len() != n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                got: channels.len(),
            });
        }
        if s.len() < 2 {
            return Err(Error::InsufficientSamples {
                have: s.len(),
                need: 2,
            });
        }
        for ch in &channels {
            if ch.len() != s.len() {
                return Err(Error::GridMismatch {
                    left: s.len(),
                    right: ch.len(),
                });
            }
        }
        for w in s.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::NonMonotone { index: 1 });
            }
        }
        Ok(Self { n, s, channels })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Arc length spanned by the grid.
    pub fn length(&self) -> f64 {
        self.s[self.s.len() - 1] - self.s[0]
    }

    pub fn grid(&self) -> &[f64] {
        &self.s
    }

    pub fn npts(&self) -> usize {
        self.s.len()
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    /// Channel i (0-based, holds chi_{i+1}).
    pub fn channel(&self, i: usize) -> &[f64] {
        &self.channels[i]
    }

    pub fn channel_max_abs(&self, i: usize) -> f64 {
        self.channels[i].iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Sample the curvatures of a naturally parametrized curve on a uniform
/// grid over its domain.
pub fn invariant_profile<C: CurveProvider + ?Sized>(
    curve: &C,
    npts: usize,
) -> Result<InvariantProfile> {
    if npts < 2 {
        return Err(Error::InsufficientSamples {
            have: npts,
            need: 2,
        });
    }
    let n = curve.dim();
    let (a, b) = curve.domain();
    let mut s = Vec::with_capacity(npts);
    let mut channels = vec![Vec::with_capacity(npts); n - 1];
    for j in 0..npts {
        let sj = a + (b - a) * j as f64 / (npts - 1) as f64;
        let jet = curve.jet(sj)?;
        let chi = curvatures(&jet)?;
        for (i, ch) in channels.iter_mut().enumerate() {
            ch.push(chi[i]);
        }
        s.push(sj);
    }
    InvariantProfile::new(n, s, channels)
}
