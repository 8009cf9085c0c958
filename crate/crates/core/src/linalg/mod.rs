//! Dense complex-matrix primitives: storage, Hermitian eigensolving, cubic roots.

use num_complex::Complex64;
use thiserror::Error;

pub mod cubic;

pub use cubic::{cubic_real_roots, two_negative_roots_rule, CubicCoeffs, CubicError};

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("expected {expected} entries for a {dim}x{dim} matrix, got {got}")]
    BadShape { dim: usize, expected: usize, got: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds tolerance {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },
    #[error("Jacobi iteration did not converge: best off-diagonal residual {residual:.3e}")]
    ConvergenceFailure { residual: f64 },
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if dim == 0 || data.len() != dim * dim {
            return Err(LinalgError::BadShape {
                dim,
                expected: dim * dim,
                got: data.len(),
            });
        }
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFiniteEntry {
                    row: k / dim,
                    col: k % dim,
                });
            }
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max over (i, j) of |A_ij - conj(A_ji)|.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// (A + A^dag) / 2.
    pub fn symmetrized(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for i in 0..self.dim {
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, x) in row.iter().zip(v) {
                acc += a * x;
            }
            out[i] = acc;
        }
        out
    }

    /// A += weight * v v^dag.
    pub fn add_scaled_outer(&mut self, v: &[Complex64], weight: f64) {
        assert_eq!(v.len(), self.dim);
        for i in 0..self.dim {
            if v[i] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..self.dim {
                self[(i, j)] += v[i] * v[j].conj() * weight;
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Spectral decomposition of a Hermitian matrix.
///
/// `vectors` is empty when eigenvectors were not requested; `residual` is then
/// the final off-diagonal Frobenius norm of the Jacobi iteration (a bound on
/// the eigenvalue error) instead of the eigenpair residual.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
    pub residual: f64,
}

fn off_diag_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            s += a[(p, q)].norm_sqr();
        }
    }
    (2.0 * s).sqrt()
}

/// Eigenvalues (ascending) and optionally eigenvectors of a Hermitian matrix,
/// by cyclic Jacobi with phase-adjusted rotations.
///
/// The input is symmetrized as (H + H^dag)/2 before iterating; inputs whose
/// Hermitian deviation exceeds 1e-12 * max|entry| are rejected instead.
pub fn hermitian_eigensystem(
    h: &ComplexMatrix,
    want_vectors: bool,
) -> Result<EigenSystem, LinalgError> {
    let n = h.dim();
    let max_abs = h.max_abs();
    let herm_tol = 1e-12 * max_abs;
    let dev = h.hermitian_deviation();
    if dev > herm_tol {
        return Err(LinalgError::NotHermitian {
            deviation: dev,
            tolerance: herm_tol,
        });
    }

    let sym = h.symmetrized();
    let mut a = sym.clone();
    let mut v = if want_vectors {
        Some(ComplexMatrix::identity(n))
    } else {
        None
    };

    let scale = a.fro_norm();
    let target = f64::EPSILON * scale;
    let skip = target / (10.0 * n as f64);
    let mut off = off_diag_norm(&a);
    let mut prev_off = f64::INFINITY;
    let mut sweeps = 0usize;
    while off > target && sweeps < 60 {
        // rounding noise floor reached, further sweeps cannot help
        if sweeps >= 6 && off >= prev_off {
            break;
        }
        prev_off = off;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= skip {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                a[(p, p)] = Complex64::new(app - t * mag, 0.0);
                a[(q, q)] = Complex64::new(aqq + t * mag, 0.0);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                let s_ph = phase * s;
                let s_ph_conj = phase.conj() * s;
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    let new_p = aip * c - aiq * s_ph_conj;
                    let new_q = aip * s_ph + aiq * c;
                    a[(i, p)] = new_p;
                    a[(i, q)] = new_q;
                    a[(p, i)] = new_p.conj();
                    a[(q, i)] = new_q.conj();
                }
                if let Some(vm) = v.as_mut() {
                    for i in 0..n {
                        let vip = vm[(i, p)];
                        let viq = vm[(i, q)];
                        vm[(i, p)] = vip * c - viq * s_ph_conj;
                        vm[(i, q)] = vip * s_ph + viq * c;
                    }
                }
            }
        }
        off = off_diag_norm(&a);
        sweeps += 1;
    }

    let fail_tol = 1e-10 * (n as f64) * max_abs.max(f64::MIN_POSITIVE);
    if off > fail_tol && off > target {
        return Err(LinalgError::ConvergenceFailure { residual: off });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();

    let (vectors, residual) = match v {
        Some(vm) => {
            let vectors: Vec<Vec<Complex64>> = order
                .iter()
                .map(|&col| (0..n).map(|row| vm[(row, col)]).collect())
                .collect();
            let mut res: f64 = 0.0;
            for (val, vec) in values.iter().zip(&vectors) {
                let hv = sym.mul_vec(vec);
                let r: f64 = hv
                    .iter()
                    .zip(vec)
                    .map(|(hv_i, v_i)| (hv_i - v_i * val).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                res = res.max(r);
            }
            (vectors, res)
        }
        None => (Vec::new(), off),
    };

    Ok(EigenSystem {
        values,
        vectors,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_eigenvalues() {
        let m = ComplexMatrix::identity(3);
        let es = hermitian_eigensystem(&m, false).unwrap();
        assert_eq!(es.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let mut m = ComplexMatrix::zeros(3);
        m[(0, 0)] = c(3.0, 0.0);
        m[(1, 1)] = c(1.0, 0.0);
        m[(2, 2)] = c(2.0, 0.0);
        let es = hermitian_eigensystem(&m, false).unwrap();
        assert_eq!(es.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_y() {
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 1)] = c(0.0, -1.0);
        m[(1, 0)] = c(0.0, 1.0);
        let es = hermitian_eigensystem(&m, true).unwrap();
        assert_abs_diff_eq!(es.values[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(es.values[1], 1.0, epsilon = 1e-14);
        assert!(es.residual < 1e-12);
    }

    #[test]
    fn known_3x3_hermitian() {
        // reference values from an independent LAPACK run
        let data = vec![
            c(2.0, 0.0), c(1.0, 1.0), c(0.0, 0.0),
            c(1.0, -1.0), c(3.0, 0.0), c(0.0, 1.0),
            c(0.0, 0.0), c(0.0, -1.0), c(1.0, 0.0),
        ];
        let m = ComplexMatrix::new(3, data).unwrap();
        let es = hermitian_eigensystem(&m, true).unwrap();
        let expect = [
            3.2486912943335383e-1,
            1.4608111271891107e0,
            4.2143197433775352e0,
        ];
        for (got, want) in es.values.iter().zip(expect) {
            assert_abs_diff_eq!(got, &want, epsilon = 1e-12);
        }
    }

    #[test]
    fn known_4x4_hermitian() {
        let re = [
            [4.0, 1.0, 2.0, 0.0],
            [1.0, 3.0, 0.0, 1.0],
            [2.0, 0.0, 2.0, 1.0],
            [0.0, 1.0, 1.0, 1.0],
        ];
        let im = [
            [0.0, 1.0, -1.0, 0.0],
            [-1.0, 0.0, 0.0, 2.0],
            [1.0, 0.0, 0.0, 1.0],
            [0.0, -2.0, -1.0, 0.0],
        ];
        let mut m = ComplexMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = c(re[i][j], im[i][j]);
            }
        }
        let es = hermitian_eigensystem(&m, true).unwrap();
        let expect = [
            -1.2524594461293379e0,
            9.4467106207249651e-1,
            4.0553289379275075e0,
            6.2524594461293397e0,
        ];
        for (got, want) in es.values.iter().zip(expect) {
            assert_abs_diff_eq!(got, &want, epsilon = 1e-12);
        }
        // eigenvalue sum equals the trace
        let sum: f64 = es.values.iter().sum();
        assert_abs_diff_eq!(sum, 10.0, epsilon = 1e-12);
    }

    #[test]
    fn vectors_orthonormal_and_accurate() {
        let data = vec![
            c(1.0, 0.0), c(0.5, 0.25), c(0.0, -0.75),
            c(0.5, -0.25), c(-2.0, 0.0), c(1.0, 0.5),
            c(0.0, 0.75), c(1.0, -0.5), c(0.5, 0.0),
        ];
        let m = ComplexMatrix::new(3, data).unwrap();
        let es = hermitian_eigensystem(&m, true).unwrap();
        assert!(es.residual <= 1e-10 * 3.0 * m.max_abs());
        for i in 0..3 {
            for j in 0..3 {
                let dot: Complex64 = es.vectors[i]
                    .iter()
                    .zip(&es.vectors[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot.norm() - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 1)] = c(1.0, 0.0);
        m[(1, 0)] = c(0.5, 0.0);
        assert!(matches!(
            hermitian_eigensystem(&m, false),
            Err(LinalgError::NotHermitian { .. })
        ));
    }

    #[test]
    fn rejects_non_finite() {
        let data = vec![c(f64::NAN, 0.0); 4];
        assert!(matches!(
            ComplexMatrix::new(2, data),
            Err(LinalgError::NonFiniteEntry { .. })
        ));
    }

    #[test]
    fn rejects_bad_shape() {
        assert!(matches!(
            ComplexMatrix::new(3, vec![c(0.0, 0.0); 8]),
            Err(LinalgError::BadShape { .. })
        ));
    }

    #[test]
    fn one_by_one() {
        let m = ComplexMatrix::new(1, vec![c(-2.5, 0.0)]).unwrap();
        let es = hermitian_eigensystem(&m, true).unwrap();
        assert_eq!(es.values, vec![-2.5]);
    }
}
