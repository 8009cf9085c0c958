//! Product-vector extraction from a subspace by alternating maximization.
//!
//! Any subspace of dimension (m-1)(n-1)+1 in m (x) n contains a product
//! vector; this module looks for one empirically by maximizing the squared
//! projection of e (x) f onto the span, alternating between the A and B
//! factors. Failure is expected and legal for smaller subspaces.

use super::AnalysisError;
use crate::linalg::{hermitian_eigensystem, ComplexMatrix};
use crate::sampling::{complex_gaussian, SeedSpec};
use crate::states::{BipartiteDims, StateError};
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct ProductSearchConfig {
    pub restarts: u32,
    pub iters: u32,
    pub tol: f64,
}

impl Default for ProductSearchConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            iters: 200,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProductVectorOutcome {
    /// True when overlap reached 1 - tol.
    pub found: bool,
    pub e: Vec<Complex64>,
    pub f: Vec<Complex64>,
    /// Squared norm of the projection of e (x) f onto the span.
    pub overlap: f64,
    pub restarts_used: u32,
}

impl ProductVectorOutcome {
    /// The joint vector e (x) f in row-major joint indexing.
    pub fn vector(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.e.len() * self.f.len());
        for a in &self.e {
            for b in &self.f {
                out.push(a * b);
            }
        }
        out
    }
}

const ORTHONORMALITY_TOL: f64 = 1e-10;

fn check_basis(basis: &[Vec<Complex64>], dims: BipartiteDims) -> Result<(), AnalysisError> {
    let total = dims.total();
    for v in basis {
        if v.len() != total {
            return Err(StateError::DimensionMismatch {
                expected: total,
                got: v.len(),
            }
            .into());
        }
    }
    let mut deviation = 0.0f64;
    for (k, vk) in basis.iter().enumerate() {
        for (l, vl) in basis.iter().enumerate() {
            let g: Complex64 = vk.iter().zip(vl).map(|(a, b)| a.conj() * b).sum();
            let target = if k == l { 1.0 } else { 0.0 };
            deviation = deviation.max((g - target).norm());
        }
    }
    if deviation > ORTHONORMALITY_TOL {
        return Err(AnalysisError::NonOrthonormalBasis { deviation });
    }
    Ok(())
}

fn random_unit(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..len).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

fn top_eigenvector(mat: &ComplexMatrix) -> Result<(f64, Vec<Complex64>), AnalysisError> {
    let es = hermitian_eigensystem(mat, true)?;
    let top = es.values.len() - 1;
    Ok((es.values[top], es.vectors[top].clone()))
}

/// One restart from the given B-side start vector. Returns (overlap, e, f).
fn alternate(
    basis: &[Vec<Complex64>],
    dims: BipartiteDims,
    config: &ProductSearchConfig,
    mut f: Vec<Complex64>,
) -> Result<(f64, Vec<Complex64>, Vec<Complex64>), AnalysisError> {
    let (m, n) = (dims.m(), dims.n());
    let mut e = vec![Complex64::new(0.0, 0.0); m];
    e[0] = Complex64::new(1.0, 0.0);
    let mut overlap = 0.0f64;
    for _ in 0..config.iters {
        // fix f: overlap is e^H M e with M built from w_k[i] = sum_j conj(V_k[i,j]) f_j
        let mut big_m = ComplexMatrix::zeros(m);
        for vk in basis {
            let wbar: Vec<Complex64> = (0..m)
                .map(|i| {
                    (0..n)
                        .map(|j| vk[dims.joint(i, j)] * f[j].conj())
                        .sum::<Complex64>()
                })
                .collect();
            big_m.add_scaled_outer(&wbar, 1.0);
        }
        let (_, top_e) = top_eigenvector(&big_m)?;
        e = top_e;
        // fix e: overlap is f^H N f with c_k[j] = sum_i V_k[i,j] conj(e_i)
        let mut big_n = ComplexMatrix::zeros(n);
        for vk in basis {
            let c: Vec<Complex64> = (0..n)
                .map(|j| {
                    (0..m)
                        .map(|i| vk[dims.joint(i, j)] * e[i].conj())
                        .sum::<Complex64>()
                })
                .collect();
            big_n.add_scaled_outer(&c, 1.0);
        }
        let (val, top_f) = top_eigenvector(&big_n)?;
        f = top_f;
        let prev = overlap;
        overlap = val;
        if overlap >= 1.0 - config.tol || overlap - prev <= config.tol * 1e-2 {
            break;
        }
    }
    Ok((overlap, e, f))
}

/// Look for a product vector e (x) f whose projection onto span(basis) has
/// squared norm at least 1 - tol. Restart r derives its PRNG stream from
/// s.offset(r); restarts stop early on success. On failure the best attempt
/// is returned with found = false.
pub fn find_product_vector(
    basis: &[Vec<Complex64>],
    dims: BipartiteDims,
    config: &ProductSearchConfig,
    s: SeedSpec,
) -> Result<ProductVectorOutcome, AnalysisError> {
    check_basis(basis, dims)?;
    let mut best: Option<(f64, Vec<Complex64>, Vec<Complex64>)> = None;
    let mut used = 0;
    for r in 0..config.restarts.max(1) {
        used = r + 1;
        let mut rng = s.offset(r as u64).rng();
        let start = random_unit(&mut rng, dims.n());
        let attempt = alternate(basis, dims, config, start)?;
        let better = match &best {
            Some((b, _, _)) => attempt.0 > *b,
            None => true,
        };
        if better {
            best = Some(attempt);
        }
        if best.as_ref().map(|(b, _, _)| *b).unwrap_or(0.0) >= 1.0 - config.tol {
            break;
        }
    }
    let (overlap, e, f) = best.expect("at least one restart runs");
    Ok(ProductVectorOutcome {
        found: overlap >= 1.0 - config.tol,
        e,
        f,
        overlap,
        restarts_used: used,
    })
}
