//! Dense small-matrix kernel: determinant, linear solve, inverse, product.
//!
//! Everything here targets the n <= ~8 matrices that curve frames produce.
//! Matrices are column-major; where a matrix is built from curve derivatives,
//! the derivative vectors are its columns. This convention is shared by every
//! module in the crate.

use crate::error::{Error, Result};
use std::ops::{Index, IndexMut};

/// Relative singularity threshold for `solve`/`inv`.
///
/// Scales with the matrix so that uniformly scaled inputs are not falsely
/// declared singular.
pub fn singularity_threshold(m: &Mat) -> f64 {
    1e-12 * m.norm_inf().powi(m.dim() as i32)
}

/// A real vector of fixed dimension with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    data: Vec<f64>,
}

impl Vector {
    pub fn new(data: Vec<f64>) -> Result<Self> {
        for (index, &value) in data.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
        }
        Ok(Self { data })
    }

    /// Construction without the finiteness check, for values produced by
    /// internal arithmetic.
    pub(crate) fn from_raw(data: Vec<f64>) -> Self {
        Self { data }
    }

    pub fn zeros(n: usize) -> Self {
        Self { data: vec![0.0; n] }
    }

    /// Standard basis vector e_k (0-based index).
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.data[k] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn norm_inf(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
    }

    pub fn scale(&self, k: f64) -> Vector {
        Vector::from_raw(self.data.iter().map(|x| k * x).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector::from_raw(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector::from_raw(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn max_abs_diff(&self, other: &Vector) -> f64 {
        self.sub(other).norm_inf()
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.data[i]
    }
}

/// A square real matrix with finite entries, stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    n: usize,
    /// `data[col * n + row]`
    data: Vec<f64>,
}

impl Mat {
    /// Build from column-major storage of length n*n.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        for (index, &value) in data.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
        }
        Ok(Self { n, data })
    }

    pub(crate) fn from_raw(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_columns(cols: &[Vector]) -> Result<Self> {
        let n = cols.len();
        let mut data = Vec::with_capacity(n * n);
        for c in cols {
            if c.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.dim(),
                });
            }
            data.extend_from_slice(c.as_slice());
        }
        Ok(Self { n, data })
    }

    /// Build from row-major rows, the layout used in map JSON files.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        index: i * n + j,
                        value: v,
                    });
                }
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn col(&self, j: usize) -> Vector {
        Vector::from_raw(self.data[j * self.n..(j + 1) * self.n].to_vec())
    }

    pub fn set_col(&mut self, j: usize, v: &Vector) {
        debug_assert_eq!(v.dim(), self.n);
        self.data[j * self.n..(j + 1) * self.n].copy_from_slice(v.as_slice());
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)]).collect())
            .collect()
    }

    /// Induced infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, k: f64) -> Mat {
        Mat::from_raw(self.n, self.data.iter().map(|x| k * x).collect())
    }

    pub fn add(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.n, other.n);
        Mat::from_raw(
            self.n,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.n, other.n);
        Mat::from_raw(
            self.n,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn mat_vec(&self, v: &Vector) -> Result<Vector> {
        if v.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.dim(),
            });
        }
        let mut out = vec![0.0; self.n];
        for j in 0..self.n {
            let x = v[j];
            for i in 0..self.n {
                out[i] += self.data[j * self.n + i] * x;
            }
        }
        Ok(Vector::from_raw(out))
    }

    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        debug_assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs()))
    }

    fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|j| (j + 1..self.n).all(|i| self[(i, j)] == 0.0))
    }

    fn is_lower_triangular(&self) -> bool {
        (0..self.n).all(|j| (0..j).all(|i| self[(i, j)] == 0.0))
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[c * self.n + r]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[c * self.n + r]
    }
}

/// LU factorization with partial pivoting. Returns (packed LU, row
/// permutation, pivot sign). A zero pivot column leaves a zero on the
/// diagonal; `det` of such a factorization is exactly 0.
struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
}

fn factorize(m: &Mat) -> Lu {
    let n = m.dim();
    let mut lu = m.data.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;

    for k in 0..n {
        // pivot: largest magnitude in column k at or below the diagonal
        let mut p = k;
        let mut best = lu[k * n + k].abs();
        for i in k + 1..n {
            let v = lu[k * n + i].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            continue; // exactly singular; diagonal entry stays 0
        }
        if p != k {
            for j in 0..n {
                lu.swap(j * n + k, j * n + p);
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = lu[k * n + k];
        for i in k + 1..n {
            let factor = lu[k * n + i] / pivot;
            lu[k * n + i] = factor;
            for j in k + 1..n {
                lu[j * n + i] -= factor * lu[j * n + k];
            }
        }
    }

    Lu { n, lu, perm, sign }
}

impl Lu {
    fn det(&self) -> f64 {
        let mut d = self.sign;
        for k in 0..self.n {
            d *= self.lu[k * self.n + k];
        }
        d
    }

    fn solve(&self, b: &Vector) -> Vector {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        // forward substitution (unit lower triangle)
        for i in 1..n {
            for j in 0..i {
                x[i] -= self.lu[j * n + i] * x[j];
            }
        }
        // back substitution
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[j * n + i] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        Vector::from_raw(x)
    }
}

/// Determinant by partially pivoted elimination.
///
/// Exactly triangular inputs take a direct diagonal product, so their sign
/// and value carry no elimination rounding.
pub fn det(m: &Mat) -> f64 {
    if m.is_upper_triangular() || m.is_lower_triangular() {
        return (0..m.dim()).map(|i| m[(i, i)]).product();
    }
    factorize(m).det()
}

/// Solve m x = b. Fails with `SingularMatrix` when |det| is at or below the
/// relative singularity threshold.
pub fn solve(m: &Mat, b: &Vector) -> Result<Vector> {
    if b.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            got: b.dim(),
        });
    }
    let lu = factorize(m);
    let d = lu.det();
    let threshold = singularity_threshold(m);
    if d.abs() <= threshold {
        return Err(Error::SingularMatrix {
            det: d,
            threshold,
        });
    }
    Ok(lu.solve(b))
}

/// Matrix inverse via the LU factors, column by column.
pub fn inv(m: &Mat) -> Result<Mat> {
    let n = m.dim();
    let lu = factorize(m);
    let d = lu.det();
    let threshold = singularity_threshold(m);
    if d.abs() <= threshold {
        return Err(Error::SingularMatrix {
            det: d,
            threshold,
        });
    }
    let mut out = Mat::zeros(n);
    for j in 0..n {
        let col = lu.solve(&Vector::basis(n, j));
        out.set_col(j, &col);
    }
    Ok(out)
}

/// Standard matrix product a * b.
pub fn matmul(a: &Mat, b: &Mat) -> Result<Mat> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.dim(),
        });
    }
    let mut out = Mat::zeros(n);
    for j in 0..n {
        for k in 0..n {
            let f = b[(k, j)];
            if f == 0.0 {
                continue;
            }
            for i in 0..n {
                out[(i, j)] += a[(i, k)] * f;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> Mat {
        Mat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Independent Cramer-rule solver used as an oracle against `solve`.
    fn cramer_solve(m: &Mat, b: &Vector) -> Vector {
        let n = m.dim();
        let d = det(m);
        let mut x = Vector::zeros(n);
        for i in 0..n {
            let mut mi = m.clone();
            mi.set_col(i, b);
            x[i] = det(&mi) / d;
        }
        x
    }

    #[test]
    fn det_identity() {
        assert_eq!(det(&Mat::identity(3)), 1.0);
    }

    #[test]
    fn det_diagonal() {
        assert_eq!(det(&mat(&[&[2.0, 0.0], &[0.0, 3.0]])), 6.0);
    }

    #[test]
    fn det_repeated_columns() {
        assert_eq!(det(&mat(&[&[1.0, 1.0], &[1.0, 1.0]])), 0.0);
    }

    #[test]
    fn det_triangular_sign_exact() {
        // direct diagonal product, no elimination rounding
        let m = mat(&[&[-3.0, 0.0, 0.0], &[7.0, 0.1, 0.0], &[1.0, 2.0, -5.0]]);
        assert_eq!(det(&m), -3.0 * 0.1 * -5.0);
    }

    #[test]
    fn solve_identity() {
        let b = Vector::new(vec![1.0, 2.0, 3.0]).unwrap();
        let x = solve(&Mat::identity(3), &b).unwrap();
        assert_eq!(x.as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn solve_matches_cramer_oracle() {
        // expected value frozen from the Cramer oracle: x = (1, 1)
        let m = mat(&[&[1.0, 0.0], &[2.0, 2.0]]);
        let b = Vector::new(vec![1.0, 4.0]).unwrap();
        let x = solve(&m, &b).unwrap();
        assert!(x.max_abs_diff(&cramer_solve(&m, &b)) < 1e-14);
        assert!((x[0] - 1.0).abs() < 1e-14);
        assert!((x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn solve_singular_is_an_error() {
        let m = mat(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let b = Vector::new(vec![1.0, 0.0]).unwrap();
        assert!(matches!(
            solve(&m, &b),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn inv_identity_and_diagonal() {
        assert_eq!(inv(&Mat::identity(4)).unwrap(), Mat::identity(4));
        let m = mat(&[&[2.0, 0.0], &[0.0, 4.0]]);
        let mi = inv(&m).unwrap();
        assert!((mi[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((mi[(1, 1)] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn scaled_input_is_not_falsely_singular() {
        let m = mat(&[&[1e-7, 0.0], &[0.0, 1e-7]]);
        // det = 1e-14 but the threshold scales down with the matrix norm
        assert!(solve(&m, &Vector::new(vec![1e-7, 2e-7]).unwrap()).is_ok());
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(
            Mat::new(2, vec![1.0, f64::NAN, 0.0, 1.0]),
            Err(Error::NonFinite { .. })
        ));
        assert!(matches!(
            Vector::new(vec![f64::INFINITY]),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn residual_bound_on_well_conditioned_solve() {
        let m = mat(&[
            &[4.0, 1.0, -0.3],
            &[0.2, 3.5, 0.9],
            &[-1.0, 0.4, 5.1],
        ]);
        let b = Vector::new(vec![1.0, -2.0, 0.5]).unwrap();
        let x = solve(&m, &b).unwrap();
        let r = m.mat_vec(&x).unwrap().sub(&b).norm_inf();
        assert!(r <= 1e-10 * b.norm_inf());
    }

    #[test]
    fn permuted_columns_flip_det_sign() {
        // all column permutations for n <= 4 against the permutation parity
        fn permutations(n: usize) -> Vec<Vec<usize>> {
            if n == 1 {
                return vec![vec![0]];
            }
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for pos in 0..n {
                    let mut q: Vec<usize> = p.iter().map(|&v| v + 1).collect();
                    q.insert(pos, 0);
                    out.push(q);
                }
            }
            out
        }
        fn parity(p: &[usize]) -> f64 {
            let mut inv = 0;
            for i in 0..p.len() {
                for j in i + 1..p.len() {
                    if p[i] > p[j] {
                        inv += 1;
                    }
                }
            }
            if inv % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        }

        for n in 2..=4 {
            let mut m = Mat::zeros(n);
            // fixed well-conditioned test matrix
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = ((i * n + j) as f64 * 0.7).sin() + if i == j { 2.0 } else { 0.0 };
                }
            }
            let d = det(&m);
            for p in permutations(n) {
                let cols: Vec<Vector> = p.iter().map(|&j| m.col(j)).collect();
                let mp = Mat::from_columns(&cols).unwrap();
                let dp = det(&mp);
                assert!(
                    (dp - parity(&p) * d).abs() <= 1e-12 * d.abs().max(1.0),
                    "n={n} perm={p:?}"
                );
            }
        }
    }
}
