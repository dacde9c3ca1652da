//! The special affine group: maps x -> B x + tau with det B = 1, their
//! composition and inversion, seeded random sampling, and the action on
//! curves.

use crate::curve::{CurveProvider, DerivativeJet};
use crate::error::{Error, Result};
use crate::linalg::{det, inv, matmul, Mat, Vector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Tolerance on |det B - 1| for accepting a linear part.
pub const UNIMODULAR_TOL: f64 = 1e-9;

/// x -> B x + tau with unimodular B.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialAffineMap {
    n: usize,
    b: Mat,
    tau: Vector,
}

impl SpecialAffineMap {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            b: Mat::identity(n),
            tau: Vector::zeros(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn linear(&self) -> &Mat {
        &self.b
    }

    pub fn translation(&self) -> &Vector {
        &self.tau
    }

    pub fn apply_point(&self, p: &Vector) -> Result<Vector> {
        Ok(self.b.mat_vec(p)?.add(&self.tau))
    }

    /// self after `other`: (self ∘ other)(x) = self(other(x)).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(Self {
            n: self.n,
            b: matmul(&self.b, &other.b)?,
            tau: self.b.mat_vec(&other.tau)?.add(&self.tau),
        })
    }

    pub fn invert(&self) -> Result<Self> {
        let b_inv = inv(&self.b)?;
        let tau = b_inv.mat_vec(&self.tau)?.scale(-1.0);
        Ok(Self {
            n: self.n,
            b: b_inv,
            tau,
        })
    }

    /// Largest entry difference across the linear part and translation.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.b
            .max_abs_diff(&other.b)
            .max(self.tau.max_abs_diff(&other.tau))
    }
}

/// Validate (B, tau) into a map; B must have determinant 1.
pub fn make_map(b: Mat, tau: Vector) -> Result<SpecialAffineMap> {
    let n = b.dim();
    if tau.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: tau.dim(),
        });
    }
    let d = det(&b);
    if (d - 1.0).abs() > UNIMODULAR_TOL {
        return Err(Error::NotUnimodular { det: d });
    }
    Ok(SpecialAffineMap { n, b, tau })
}

/// Deterministic random matrix with determinant 1 and entries in [-3, 3]:
/// draw entries uniform in [-1, 1], flip a column if the determinant is
/// negative, redraw while |det| < 0.05, then scale by det^(-1/n). The scale
/// can push entries past the bound, in which case the draw is rejected.
pub fn random_sl(n: usize, seed: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_sl_with(n, &mut rng)
}

fn random_sl_with(n: usize, rng: &mut ChaCha8Rng) -> Mat {
    loop {
        let mut m = Mat::zeros(n);
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] = rng.gen_range(-1.0..=1.0);
            }
        }
        let mut d = det(&m);
        if d.abs() < 0.05 {
            continue;
        }
        if d < 0.0 {
            for i in 0..n {
                m[(i, 0)] = -m[(i, 0)];
            }
            d = -d;
        }
        let m = m.scale(d.powf(-1.0 / n as f64));
        if (0..n).all(|j| (0..n).all(|i| m[(i, j)].abs() <= 3.0)) {
            return m;
        }
    }
}

/// Deterministic random map: `random_sl` linear part, then a translation
/// with entries uniform in [-1, 1] from the same stream.
pub fn random_map(n: usize, seed: u64) -> SpecialAffineMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = random_sl_with(n, &mut rng);
    let tau = Vector::from_raw((0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect());
    SpecialAffineMap { n, b, tau }
}

/// The image curve of `base` under `map`: derivatives see only the linear
/// part, the position additionally picks up the translation.
#[derive(Debug, Clone)]
pub struct TransformedCurve<P> {
    map: SpecialAffineMap,
    base: P,
}

impl<P: CurveProvider> TransformedCurve<P> {
    pub fn map(&self) -> &SpecialAffineMap {
        &self.map
    }

    pub fn base(&self) -> &P {
        &self.base
    }
}

/// Act on a curve provider, producing the transformed provider.
pub fn apply<P: CurveProvider>(map: SpecialAffineMap, base: P) -> Result<TransformedCurve<P>> {
    if map.dim() != base.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            got: base.dim(),
        });
    }
    Ok(TransformedCurve { map, base })
}

impl<P: CurveProvider> CurveProvider for TransformedCurve<P> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn domain(&self) -> (f64, f64) {
        self.base.domain()
    }

    fn eval_range(&self) -> (f64, f64) {
        self.base.eval_range()
    }

    fn edge_margin(&self) -> f64 {
        self.base.edge_margin()
    }

    fn jet_at(&self, t: f64) -> Result<DerivativeJet> {
        self.base
            .jet_at(t)?
            .map_linear(self.map.linear(), Some(self.map.translation()))
    }
}
