//! Seedable random ensembles: Haar pure states, Ginibre-induced density
//! matrices, product states, Haar local unitaries.
//!
//! Everything is driven by (seed, stream) pairs; parallel workers derive
//! per-task generators by offsetting the stream, so results never depend on
//! scheduling order.

use crate::linalg::ComplexMatrix;
use crate::states::{BipartiteDims, DensityMatrix, PureState};
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("rank {rank} outside 1..={max}")]
    BadRank { rank: usize, max: usize },
}

/// Base seed plus sub-stream index. Identical specs reproduce identical
/// samples bit-for-bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSpec {
    pub seed: u64,
    pub stream: u64,
}

impl SeedSpec {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    /// Sub-stream for task `delta` relative to this one.
    pub fn offset(self, delta: u64) -> Self {
        Self {
            stream: self.stream.wrapping_add(delta),
            ..self
        }
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Uniform in [0, 1), 53-bit resolution.
pub(crate) fn uniform01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform in (0, 1]; safe under log.
fn uniform_open01(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard complex Gaussian (E|z|^2 = 1) via one Box-Muller pair.
pub(crate) fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let radius = (-uniform_open01(rng).ln()).sqrt();
    let angle = 2.0 * std::f64::consts::PI * uniform01(rng);
    Complex64::new(radius * angle.cos(), radius * angle.sin())
}

fn gaussian_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..len).map(|_| complex_gaussian(rng)).collect();
        if v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 0.0 {
            return v;
        }
    }
}

/// Haar-random normalized pure state.
pub fn haar_pure(dims: BipartiteDims, s: SeedSpec) -> PureState {
    let mut rng = s.rng();
    let amps = gaussian_vector(&mut rng, dims.total());
    PureState::new(amps, dims)
        .expect("nonzero by construction")
        .normalized()
}

/// Trace-1 density matrix G G^dag / tr with G of shape mn x rank filled
/// row-major with complex Gaussians; rank mn gives the Hilbert-Schmidt
/// ensemble.
pub fn ginibre_mixed(
    dims: BipartiteDims,
    rank: usize,
    s: SeedSpec,
) -> Result<DensityMatrix, SampleError> {
    let total = dims.total();
    if rank < 1 || rank > total {
        return Err(SampleError::BadRank { rank, max: total });
    }
    let mut rng = s.rng();
    let g: Vec<Vec<Complex64>> = (0..total)
        .map(|_| (0..rank).map(|_| complex_gaussian(&mut rng)).collect())
        .collect();
    let mut mat = ComplexMatrix::zeros(total);
    for i in 0..total {
        for j in 0..total {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..rank {
                acc += g[i][k] * g[j][k].conj();
            }
            mat[(i, j)] = acc;
        }
    }
    let tr = mat.trace().re;
    for i in 0..total {
        for j in 0..total {
            mat[(i, j)] /= tr;
        }
    }
    Ok(DensityMatrix::new_unchecked(mat, dims))
}

/// Normalized product state e (x) f with Haar-random factors (e drawn first).
pub fn random_product_state(dims: BipartiteDims, s: SeedSpec) -> PureState {
    product_state_from(&mut s.rng(), dims)
}

pub(crate) fn product_state_from(rng: &mut ChaCha8Rng, dims: BipartiteDims) -> PureState {
    let e = normalize(gaussian_vector(rng, dims.m()));
    let f = normalize(gaussian_vector(rng, dims.n()));
    let mut amps = Vec::with_capacity(dims.total());
    for ei in &e {
        for fj in &f {
            amps.push(ei * fj);
        }
    }
    PureState::new(amps, dims).expect("nonzero by construction")
}

fn normalize(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
    v
}

/// Haar-random unitary: Gram-Schmidt applied to a square Gaussian matrix,
/// columns orthonormal.
pub fn haar_unitary(dim: usize, s: SeedSpec) -> ComplexMatrix {
    let mut rng = s.rng();
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| gaussian_vector(&mut rng, dim))
        .collect();
    for k in 0..dim {
        for prev in 0..k {
            let proj: Complex64 = cols[prev]
                .iter()
                .zip(&cols[k])
                .map(|(p, v)| p.conj() * v)
                .sum();
            for i in 0..dim {
                let sub = cols[prev][i] * proj;
                cols[k][i] -= sub;
            }
        }
        cols[k] = normalize(std::mem::take(&mut cols[k]));
    }
    let mut u = ComplexMatrix::zeros(dim);
    for (k, col) in cols.iter().enumerate() {
        for i in 0..dim {
            u[(i, k)] = col[i];
        }
    }
    u
}

/// Random pure state with exactly `rank` Schmidt modes: Gaussian-magnitude
/// coefficients on Haar-rotated local bases.
pub fn pure_with_schmidt_rank(
    dims: BipartiteDims,
    rank: usize,
    s: SeedSpec,
) -> Result<PureState, SampleError> {
    let limit = dims.m().min(dims.n());
    if rank < 1 || rank > limit {
        return Err(SampleError::BadRank { rank, max: limit });
    }
    let mut rng = s.rng();
    let mut coeffs: Vec<f64> = (0..rank)
        .map(|_| complex_gaussian(&mut rng).norm())
        .collect();
    let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    for c in coeffs.iter_mut() {
        *c /= norm;
    }
    let u = haar_unitary(dims.m(), SeedSpec::new(rng.next_u64()));
    let v = haar_unitary(dims.n(), SeedSpec::new(rng.next_u64()));
    let mut amps = vec![Complex64::new(0.0, 0.0); dims.total()];
    for (k, lam) in coeffs.iter().enumerate() {
        for i in 0..dims.m() {
            for j in 0..dims.n() {
                amps[dims.joint(i, j)] += u[(i, k)] * v[(j, k)] * *lam;
            }
        }
    }
    Ok(PureState::new(amps, dims).expect("nonzero by construction"))
}
