//! Finite-difference differentiation weights.
//!
//! The generator is Fornberg's recursion, which yields weights for any
//! derivative order at an arbitrary evaluation point inside an arbitrary
//! node set. Classical central stencils fall out as the special case of a
//! symmetric integer grid evaluated at its center.

use crate::error::{Error, Result};

/// Weights for derivatives 0..=max_deriv of a function known at `nodes`,
/// evaluated at `z`. Returns `w` with `w[k][j]` the weight of `nodes[j]`
/// for the k-th derivative: f^(k)(z) ~= sum_j w[k][j] f(nodes[j]).
pub fn fornberg_weights(nodes: &[f64], z: f64, max_deriv: usize) -> Vec<Vec<f64>> {
    let nn = nodes.len();
    assert!(nn > max_deriv, "need more nodes than the derivative order");
    let mut w = vec![vec![0.0; nn]; max_deriv + 1];

    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    w[0][0] = 1.0;
    for i in 1..nn {
        let mn = i.min(max_deriv);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    w[k][i] = c1 * (k as f64 * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
                }
                w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                w[k][j] = (c4 * w[k][j] - k as f64 * w[k - 1][j]) / c3;
            }
            w[0][j] = c4 * w[0][j] / c3;
        }
        c1 = c2;
    }
    w
}

/// A central-difference stencil on the symmetric unit grid -hw..=hw.
///
/// `coeffs[j]` multiplies the sample at offset `j - half_width`; the full
/// approximation of the d-th derivative is `h^-d * sum_j coeffs[j] f(x + (j-hw) h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    pub deriv: usize,
    pub order: usize,
    pub half_width: usize,
    pub coeffs: Vec<f64>,
}

impl Stencil {
    /// Apply to uniformly spaced samples centered at the evaluation point.
    pub fn apply(&self, samples: &[f64], h: f64) -> f64 {
        debug_assert_eq!(samples.len(), self.coeffs.len());
        let s: f64 = self
            .coeffs
            .iter()
            .zip(samples)
            .map(|(c, f)| c * f)
            .sum();
        s / h.powi(self.deriv as i32)
    }
}

/// Minimal symmetric node half-width for the d-th derivative at accuracy
/// order p (central stencils gain one order from symmetry for the relevant
/// parity, which is what makes this width sufficient).
pub fn central_half_width(deriv: usize, order: usize) -> usize {
    deriv.div_ceil(2) + order / 2 - 1
}

/// Central-difference coefficients for the requested derivative and
/// accuracy order (2, 4 or 6).
pub fn fd_stencil(order: usize, deriv: usize) -> Result<Stencil> {
    if !matches!(order, 2 | 4 | 6) {
        return Err(Error::UnsupportedOrder(order));
    }
    if deriv == 0 {
        return Err(Error::BadParams(
            "stencil derivative order must be >= 1".into(),
        ));
    }
    let hw = central_half_width(deriv, order);
    let nodes: Vec<f64> = (-(hw as i64)..=hw as i64).map(|i| i as f64).collect();
    let w = fornberg_weights(&nodes, 0.0, deriv);
    Ok(Stencil {
        deriv,
        order,
        half_width: hw,
        coeffs: w[deriv].clone(),
    })
}
