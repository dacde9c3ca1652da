//! Higher-order chain rule machinery: partial Bell polynomials, derivative
//! composition (Faa di Bruno), and derivatives of an inverse function.
//!
//! Reparametrization needs all three: a curve in a new parameter is the
//! composition of the old curve with the inverse of the parameter change.

use crate::linalg::Vector;

fn binomial(n: usize, k: usize) -> f64 {
    let mut b = 1.0;
    for i in 0..k.min(n - k) {
        b = b * (n - i) as f64 / (i + 1) as f64;
    }
    b
}

/// Table of partial Bell polynomials B_{m,k}(x_1..x_{m-k+1}) for
/// m, k <= m_max, with `x[j]` holding x_{j+1}. `table[m][k]` is B_{m,k}.
pub fn bell_table(x: &[f64], m_max: usize) -> Vec<Vec<f64>> {
    assert!(x.len() >= m_max);
    let mut b = vec![vec![0.0; m_max + 1]; m_max + 1];
    b[0][0] = 1.0;
    for m in 1..=m_max {
        for k in 1..=m {
            let mut s = 0.0;
            for j in 1..=m - k + 1 {
                s += binomial(m - 1, j - 1) * x[j - 1] * b[m - j][k - 1];
            }
            b[m][k] = s;
        }
    }
    b
}

/// Derivatives of the composition f(g(t)) from the derivatives of the parts.
///
/// `outer[k-1]` is f^(k) evaluated at g(t); `inner[j-1]` is g^(j)(t). The
/// result holds the composed derivatives of orders 1..=inner.len(), and the
/// outer derivatives must reach at least that order.
pub fn compose_jet(outer: &[Vector], inner: &[f64]) -> Vec<Vector> {
    let m_max = inner.len();
    assert!(outer.len() >= m_max);
    let dim = outer[0].dim();
    let bell = bell_table(inner, m_max);
    let mut out = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let mut acc = Vector::zeros(dim);
        for k in 1..=m {
            let w = bell[m][k];
            if w != 0.0 {
                acc = acc.add(&outer[k - 1].scale(w));
            }
        }
        out.push(acc);
    }
    out
}

/// Derivatives of u = sigma^(-1) at s, given the derivatives of sigma at
/// u(s) (`sigma[k-1]` = sigma^(k), sigma' nonzero). Returns u^(1..=m).
///
/// Uses the identity sum_k sigma^(k) B_{m,k}(u', u'', ...) = 0 for m >= 2,
/// solved recursively for u^(m).
pub fn inverse_derivatives(sigma: &[f64]) -> Vec<f64> {
    let m_max = sigma.len();
    let sp = sigma[0];
    debug_assert!(sp != 0.0);
    let mut u = vec![0.0; m_max];
    u[0] = 1.0 / sp;
    for m in 2..=m_max {
        let bell = bell_table(&u, m);
        let mut s = 0.0;
        for k in 2..=m {
            s += sigma[k - 1] * bell[m][k];
        }
        u[m - 1] = -s / sp;
    }
    u
}
