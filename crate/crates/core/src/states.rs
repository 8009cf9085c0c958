//! Bipartite state model: partial transposition, PT spectra, negativity,
//! Schmidt decomposition.

use crate::linalg::{hermitian_eigensystem, ComplexMatrix, LinalgError};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("subsystem dimensions {m}x{n} invalid (need m >= 1, n >= 1)")]
    BadDims { m: usize, n: usize },
    #[error("matrix dimension {got} does not match subsystem product {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not Hermitian: deviation {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("trace {trace:.6e} is not positive")]
    NonPositiveTrace { trace: f64 },
    #[error("matrix has eigenvalue {min_eigenvalue:.3e} below the PSD tolerance")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("state vector has zero norm")]
    ZeroVector,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Local dimensions (m, n) of a bipartite system A (x) B; the joint basis is
/// row-major, |i>_A |j>_B -> index i*n + j.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteDims {
    m: usize,
    n: usize,
}

impl BipartiteDims {
    pub fn new(m: usize, n: usize) -> Result<Self, StateError> {
        if m < 1 || n < 1 {
            return Err(StateError::BadDims { m, n });
        }
        Ok(Self { m, n })
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn total(&self) -> usize {
        self.m * self.n
    }

    #[inline]
    pub fn joint(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.m && j < self.n);
        i * self.n + j
    }

    /// Largest possible number of negative partial-transpose eigenvalues,
    /// (m-1)(n-1).
    #[inline]
    pub fn neg_count_bound(&self) -> usize {
        (self.m - 1) * (self.n - 1)
    }

    pub fn swapped(&self) -> Self {
        Self { m: self.n, n: self.m }
    }
}

impl serde::Serialize for BipartiteDims {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BipartiteDims", 2)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("n", &self.n)?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for BipartiteDims {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            m: usize,
            n: usize,
        }
        let raw = Raw::deserialize(d)?;
        BipartiteDims::new(raw.m, raw.n).map_err(serde::de::Error::custom)
    }
}

/// Move subsystem indices so the named factor is transposed: for A,
/// out[(i n + b, j n + d)] = in[(j n + b, i n + d)]; for B,
/// out[(i n + b, j n + d)] = in[(i n + d, j n + b)].
///
/// Entries are copied, not recomputed, so applying the map twice restores the
/// input bit-for-bit and the diagonal (hence the trace) is untouched.
pub fn partial_transpose(
    mat: &ComplexMatrix,
    dims: BipartiteDims,
    part: Subsystem,
) -> Result<ComplexMatrix, StateError> {
    if mat.dim() != dims.total() {
        return Err(StateError::DimensionMismatch {
            expected: dims.total(),
            got: mat.dim(),
        });
    }
    let (m, n) = (dims.m, dims.n);
    let mut out = ComplexMatrix::zeros(dims.total());
    for i in 0..m {
        for j in 0..m {
            for b in 0..n {
                for d in 0..n {
                    let dst = (i * n + b, j * n + d);
                    let src = match part {
                        Subsystem::A => (j * n + b, i * n + d),
                        Subsystem::B => (i * n + d, j * n + b),
                    };
                    out[dst] = mat[src];
                }
            }
        }
    }
    Ok(out)
}

/// Sorted partial-transpose eigenvalues with the negativity bookkeeping
/// attached.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PtSpectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues below -tolerance.
    pub neg_count: usize,
    /// |sum of the negative eigenvalues|.
    pub negativity: f64,
    /// Counting threshold tau = mn * eps * max(1, |lambda|_max).
    pub tolerance: f64,
}

impl PtSpectrum {
    /// Classify an eigenvalue list for a system of `total` levels. The input
    /// need not be sorted; the stored list is.
    pub fn from_values(mut values: Vec<f64>, total: usize) -> Self {
        values.sort_by(f64::total_cmp);
        let max_mag = values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        let tolerance = total as f64 * f64::EPSILON * max_mag.max(1.0);
        let neg: f64 = values.iter().take_while(|&&v| v < -tolerance).sum();
        let neg_count = values.iter().take_while(|&&v| v < -tolerance).count();
        Self {
            eigenvalues: values,
            neg_count,
            negativity: -neg,
            tolerance,
        }
    }
}

/// Bipartite density matrix: Hermitian, PSD within tolerance, positive trace.
/// Not necessarily normalized; `trace` caches the actual trace and
/// `normalized` divides it out.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: BipartiteDims,
    trace: f64,
}

impl DensityMatrix {
    /// Validates shape, Hermiticity, positive trace, and positive
    /// semidefiniteness (eigenvalues >= -1e-10 * trace).
    pub fn new(mat: ComplexMatrix, dims: BipartiteDims) -> Result<Self, StateError> {
        if mat.dim() != dims.total() {
            return Err(StateError::DimensionMismatch {
                expected: dims.total(),
                got: mat.dim(),
            });
        }
        let dev = mat.hermitian_deviation();
        if dev > 1e-12 * mat.max_abs().max(1.0) {
            return Err(StateError::NotHermitian { deviation: dev });
        }
        let trace = mat.trace().re;
        if trace <= 0.0 {
            return Err(StateError::NonPositiveTrace { trace });
        }
        let es = hermitian_eigensystem(&mat, false)?;
        let min = es.values[0];
        if min < -1e-10 * trace {
            return Err(StateError::NotPositiveSemidefinite { min_eigenvalue: min });
        }
        Ok(Self { mat, dims, trace })
    }

    /// For matrices valid by construction; skips the eigenvalue check.
    pub(crate) fn new_unchecked(mat: ComplexMatrix, dims: BipartiteDims) -> Self {
        debug_assert_eq!(mat.dim(), dims.total());
        let trace = mat.trace().re;
        debug_assert!(trace > 0.0);
        Self { mat, dims, trace }
    }

    #[inline]
    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    #[inline]
    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    #[inline]
    pub fn trace(&self) -> f64 {
        self.trace
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// Same state scaled to trace 1.
    pub fn normalized(&self) -> DensityMatrix {
        let d = self.dims.total();
        let mut mat = ComplexMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                mat[(i, j)] = self.mat[(i, j)] / self.trace;
            }
        }
        DensityMatrix {
            mat,
            dims: self.dims,
            trace: 1.0,
        }
    }

    pub fn partial_transpose(&self, part: Subsystem) -> ComplexMatrix {
        partial_transpose(&self.mat, self.dims, part).expect("dims checked at construction")
    }

    /// Spectrum of the chosen partial transpose of the stored matrix, as-is:
    /// no normalization is applied, so unnormalized families report their raw
    /// eigenvalues.
    pub fn pt_spectrum(&self, part: Subsystem) -> Result<PtSpectrum, StateError> {
        let pt = self.partial_transpose(part);
        let es = hermitian_eigensystem(&pt, false)?;
        Ok(PtSpectrum::from_values(es.values, self.dims.total()))
    }

    /// |sum of negative PT eigenvalues| of the trace-normalized state.
    pub fn negativity(&self, part: Subsystem) -> Result<f64, StateError> {
        let spec = self.pt_spectrum(part)?;
        let scaled: Vec<f64> = spec.eigenvalues.iter().map(|v| v / self.trace).collect();
        Ok(PtSpectrum::from_values(scaled, self.dims.total()).negativity)
    }
}

/// Bipartite pure state; amplitudes are stored as given, with the Euclidean
/// norm cached.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Vec<Complex64>,
    dims: BipartiteDims,
    norm: f64,
}

impl PureState {
    pub fn new(amps: Vec<Complex64>, dims: BipartiteDims) -> Result<Self, StateError> {
        if amps.len() != dims.total() {
            return Err(StateError::DimensionMismatch {
                expected: dims.total(),
                got: amps.len(),
            });
        }
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() {
            return Err(StateError::Linalg(LinalgError::NonFiniteEntry { row: 0, col: 0 }));
        }
        if norm_sq <= 0.0 {
            return Err(StateError::ZeroVector);
        }
        Ok(Self {
            amps,
            dims,
            norm: norm_sq.sqrt(),
        })
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    #[inline]
    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Same ray with norm 1.
    pub fn normalized(&self) -> PureState {
        PureState {
            amps: self.amps.iter().map(|z| z / self.norm).collect(),
            dims: self.dims,
            norm: 1.0,
        }
    }

    /// The projector onto the stored amplitudes; trace = norm^2.
    pub fn density(&self) -> DensityMatrix {
        let d = self.dims.total();
        let mut mat = ComplexMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                mat[(i, j)] = self.amps[i] * self.amps[j].conj();
            }
        }
        DensityMatrix::new_unchecked(mat, self.dims)
    }
}

/// Reduced matrix of |psi><psi| on one factor, from raw amplitudes. The trace
/// equals the squared norm of the input; no normalization is applied.
pub fn reduced_density(
    amps: &[Complex64],
    dims: BipartiteDims,
    keep: Subsystem,
) -> Result<ComplexMatrix, StateError> {
    if amps.len() != dims.total() {
        return Err(StateError::DimensionMismatch {
            expected: dims.total(),
            got: amps.len(),
        });
    }
    let (m, n) = (dims.m, dims.n);
    match keep {
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(m);
            for i in 0..m {
                for j in 0..m {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..n {
                        acc += amps[i * n + b] * amps[j * n + b].conj();
                    }
                    out[(i, j)] = acc;
                }
            }
            Ok(out)
        }
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(n);
            for b in 0..n {
                for d in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..m {
                        acc += amps[i * n + b] * amps[i * n + d].conj();
                    }
                    out[(b, d)] = acc;
                }
            }
            Ok(out)
        }
    }
}

/// Schmidt form of a normalized pure state: coefficients descending with
/// squares summing to 1, plus the orthonormal local bases realizing
/// sum_i coeff_i |a_i> (x) |b_i>.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtVector {
    coeffs: Vec<f64>,
    basis_a: Vec<Vec<Complex64>>,
    basis_b: Vec<Vec<Complex64>>,
}

impl SchmidtVector {
    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn basis_a(&self) -> &[Vec<Complex64>] {
        &self.basis_a
    }

    #[inline]
    pub fn basis_b(&self) -> &[Vec<Complex64>] {
        &self.basis_b
    }

    /// Reassemble the amplitudes sum_i coeff_i |a_i>|b_i>.
    pub fn reconstruct(&self, dims: BipartiteDims) -> Vec<Complex64> {
        let (m, n) = (dims.m(), dims.n());
        let mut amps = vec![Complex64::new(0.0, 0.0); m * n];
        for ((lam, a), b) in self.coeffs.iter().zip(&self.basis_a).zip(&self.basis_b) {
            for i in 0..m {
                for j in 0..n {
                    amps[i * n + j] += a[i] * b[j] * *lam;
                }
            }
        }
        amps
    }
}

/// Modes whose reduced-state weight falls below this are treated as
/// numerically zero and dropped from the Schmidt form.
const SCHMIDT_WEIGHT_CUTOFF: f64 = 1e-12;

/// Schmidt decomposition via the eigensystem of the reduced state on A. The
/// input is normalized first; coefficients come out descending.
pub fn schmidt(psi: &PureState) -> Result<SchmidtVector, StateError> {
    let psin = psi.normalized();
    let dims = psi.dims;
    let (m, n) = (dims.m, dims.n);
    let red = reduced_density(psin.amplitudes(), dims, Subsystem::A)?;
    let es = hermitian_eigensystem(&red, true)?;

    let mut coeffs = Vec::new();
    let mut basis_a = Vec::new();
    let mut basis_b = Vec::new();
    for idx in (0..m).rev() {
        let w = es.values[idx];
        if w <= SCHMIDT_WEIGHT_CUTOFF {
            continue;
        }
        let lam = w.sqrt();
        let a_vec = es.vectors[idx].clone();
        let mut b_vec = vec![Complex64::new(0.0, 0.0); n];
        for (c, b_c) in b_vec.iter_mut().enumerate() {
            for (r, a_r) in a_vec.iter().enumerate() {
                *b_c += a_r.conj() * psin.amps[r * n + c];
            }
            *b_c /= lam;
        }
        coeffs.push(lam);
        basis_a.push(a_vec);
        basis_b.push(b_vec);
    }
    // renormalize away the dropped tail
    let total: f64 = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    for c in coeffs.iter_mut() {
        *c /= total;
    }
    Ok(SchmidtVector {
        coeffs,
        basis_a,
        basis_b,
    })
}

/// Partial-transpose spectrum of a pure state assembled directly from its
/// Schmidt coefficients: each coeff_i^2 once, +-coeff_i coeff_j per pair
/// i < j, zero-padded to the full dimension mn.
pub fn pure_pt_spectrum_closed_form(
    sv: &SchmidtVector,
    dims: BipartiteDims,
) -> Result<PtSpectrum, StateError> {
    let d = sv.rank();
    let limit = dims.m.min(dims.n);
    if d > limit {
        return Err(StateError::DimensionMismatch {
            expected: limit,
            got: d,
        });
    }
    let total = dims.total();
    let mut values = Vec::with_capacity(total);
    for i in 0..d {
        values.push(sv.coeffs[i] * sv.coeffs[i]);
        for j in (i + 1)..d {
            let prod = sv.coeffs[i] * sv.coeffs[j];
            values.push(prod);
            values.push(-prod);
        }
    }
    values.resize(total, 0.0);
    Ok(PtSpectrum::from_values(values, total))
}
