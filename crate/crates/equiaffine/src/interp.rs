//! Shape-preserving piecewise-cubic interpolation (Fritsch-Carlson slopes).
//!
//! Used for the inverse arc-length map and for tabulated curvature channels.
//! On monotone data the interpolant is monotone, which is the property the
//! inverse map relies on.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    /// node derivatives
    d: Vec<f64>,
}

impl Pchip {
    /// Nodes must be strictly increasing, at least two of them.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::GridMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        if x.len() < 2 {
            return Err(Error::BadParams(
                "interpolation needs at least two nodes".into(),
            ));
        }
        for i in 1..x.len() {
            if !(x[i] > x[i - 1]) {
                return Err(Error::NonMonotone { index: i });
            }
        }
        let d = fritsch_carlson_slopes(&x, &y);
        Ok(Self { x, y, d })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    /// Index of the interval containing `t` (clamped to the end intervals).
    fn bracket(&self, t: f64) -> usize {
        match self.x.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.x.len() - 2),
        }
    }

    /// Cubic Hermite evaluation; linear continuation outside the node range.
    pub fn eval(&self, t: f64) -> f64 {
        let (a, b) = self.domain();
        if t < a {
            return self.y[0] + self.d[0] * (t - a);
        }
        if t > b {
            let m = self.x.len() - 1;
            return self.y[m] + self.d[m] * (t - b);
        }
        let i = self.bracket(t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
    }
}

fn fritsch_carlson_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 2 {
        let s = (y[1] - y[0]) / (x[1] - x[0]);
        return vec![s, s];
    }
    let h: Vec<f64> = (0..n - 1).map(|i| x[i + 1] - x[i]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![0.0; n];

    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] <= 0.0 {
            d[i] = 0.0;
        } else {
            // weighted harmonic mean of the neighboring secants
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// Three-point one-sided estimate, clipped so the end interval cannot
/// overshoot (standard Fritsch-Carlson end treatment).
fn endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s * d0 <= 0.0 {
        0.0
    } else if d0 * d1 < 0.0 && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}
