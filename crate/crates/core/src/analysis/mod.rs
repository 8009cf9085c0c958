//! Bound verification, grid sweeps, maximal-negative-count search, NPT
//! robustness trials and the product-vector finder.

use crate::families::FamilyError;
use crate::linalg::{hermitian_eigensystem, LinalgError};
use crate::sampling::{product_state_from, uniform01, SampleError, SeedSpec};
use crate::states::{BipartiteDims, DensityMatrix, StateError, Subsystem};
use serde::Serialize;
use thiserror::Error;

pub mod product;
pub mod search;
pub mod sweep;

pub use product::{find_product_vector, ProductSearchConfig, ProductVectorOutcome};
pub use search::{search_max_neg, SearchResult, Strategy};
pub use sweep::{sweep, GridSpec, SweepFamily, SweepOutcome, SweepRecord, SweepSpec};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("matrix has eigenvalue {min_eigenvalue:.3e} below the PSD tolerance")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("PT has {neg_count} negative eigenvalues; the robustness setup needs at least 2")]
    InsufficientNegatives { neg_count: usize },
    #[error("basis is not orthonormal: deviation {deviation:.3e}")]
    NonOrthonormalBasis { deviation: f64 },
    #[error("grid has {points} points, above the full-enumeration cap {cap}; use subsampling")]
    GridTooLarge { points: u64, cap: u64 },
    #[error("family takes {expected} sweep parameters, spec provides {got}")]
    ParamCountMismatch { expected: usize, got: usize },
    #[error("empty grid axis {axis}")]
    EmptyAxis { axis: usize },
    #[error("family cannot be swept: {0}")]
    UnsupportedFamily(String),
    #[error("search budget must be at least 1")]
    EmptyBudget,
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Result of checking one state against both spectral bounds: the count bound
/// (m-1)(n-1) and the eigenvalue range [-1/2, 1].
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub dims: BipartiteDims,
    pub neg_count: usize,
    pub bound: usize,
    pub min_eig: f64,
    pub max_eig: f64,
    pub within_bounds: bool,
    pub tolerance: f64,
}

fn bound_report(rho: &DensityMatrix) -> Result<BoundReport, AnalysisError> {
    let rhon = rho.normalized();
    let es = hermitian_eigensystem(rhon.mat(), false)?;
    if es.values[0] < -1e-10 {
        return Err(AnalysisError::NotPositiveSemidefinite {
            min_eigenvalue: es.values[0],
        });
    }
    let spec = rhon.pt_spectrum(Subsystem::A)?;
    let dims = rho.dims();
    let bound = dims.neg_count_bound();
    let min_eig = spec.eigenvalues[0];
    let max_eig = *spec.eigenvalues.last().expect("nonempty spectrum");
    let within_bounds = spec.neg_count <= bound
        && min_eig >= -0.5 - spec.tolerance
        && max_eig <= 1.0 + spec.tolerance;
    Ok(BoundReport {
        dims,
        neg_count: spec.neg_count,
        bound,
        min_eig,
        max_eig,
        within_bounds,
        tolerance: spec.tolerance,
    })
}

/// Check the negative-count bound neg_count <= (m-1)(n-1) on the normalized
/// state. `within_bounds` false for PSD input indicates a numerical fault,
/// not a counterexample.
pub fn verify_neg_count_bound(rho: &DensityMatrix) -> Result<BoundReport, AnalysisError> {
    bound_report(rho)
}

/// Check that every PT eigenvalue of the normalized state lies in
/// [-1/2 - tau, 1 + tau].
pub fn verify_spectral_range(rho: &DensityMatrix) -> Result<BoundReport, AnalysisError> {
    bound_report(rho)
}

/// Outcome of mixing random product states into an NPT state.
#[derive(Debug, Clone, Serialize)]
pub struct RobustnessReport {
    pub dims: BipartiteDims,
    /// One fewer than the state's negative count: the number of product
    /// states mixed in per trial.
    pub k: usize,
    pub trials: u64,
    /// Smallest negative count observed over all K-state trials.
    pub min_neg_count: usize,
    pub all_npt: bool,
    /// Out of the same number of informational trials mixing K+1 product
    /// states, how many came out PPT.
    pub ppt_with_one_more: u64,
    pub seed: SeedSpec,
}

const MIX_WEIGHT_LOG10_MIN: f64 = -3.0;
const MIX_WEIGHT_LOG10_MAX: f64 = 1.0;

fn mixed_neg_count(
    rho: &DensityMatrix,
    count: usize,
    s: SeedSpec,
) -> Result<usize, AnalysisError> {
    let mut rng = s.rng();
    let dims = rho.dims();
    let mut mat = rho.mat().clone();
    for _ in 0..count {
        let psi = product_state_from(&mut rng, dims);
        let span = MIX_WEIGHT_LOG10_MAX - MIX_WEIGHT_LOG10_MIN;
        let weight = 10f64.powf(MIX_WEIGHT_LOG10_MIN + span * uniform01(&mut rng));
        mat.add_scaled_outer(psi.amplitudes(), weight);
    }
    // PSD by construction: PSD plus projectors with positive weights
    let mixed = DensityMatrix::new_unchecked(mat, dims).normalized();
    Ok(mixed.pt_spectrum(Subsystem::A)?.neg_count)
}

/// Mix K random product states (K + 1 = neg_count of the input) with
/// log-uniform weights into the state, `trials` times, and record whether
/// every mixture stayed NPT. A second, informational pass does the same with
/// K + 1 product states and reports how many mixtures became PPT.
pub fn npt_robustness_check(
    rho: &DensityMatrix,
    trials: u64,
    s: SeedSpec,
) -> Result<RobustnessReport, AnalysisError> {
    let rhon = rho.normalized();
    let neg_count = rhon.pt_spectrum(Subsystem::A)?.neg_count;
    if neg_count < 2 {
        return Err(AnalysisError::InsufficientNegatives { neg_count });
    }
    let k = neg_count - 1;
    let mut min_neg = usize::MAX;
    for t in 0..trials {
        let neg = mixed_neg_count(&rhon, k, s.offset(t))?;
        min_neg = min_neg.min(neg);
    }
    let mut ppt_with_one_more = 0;
    for t in 0..trials {
        if mixed_neg_count(&rhon, k + 1, s.offset(trials + t))? == 0 {
            ppt_with_one_more += 1;
        }
    }
    Ok(RobustnessReport {
        dims: rho.dims(),
        k,
        trials,
        min_neg_count: min_neg,
        all_npt: min_neg >= 1,
        ppt_with_one_more,
        seed: s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_rho_a, RhoAParams};
    use crate::sampling::{ginibre_mixed, pure_with_schmidt_rank};
    use approx::assert_abs_diff_eq;

    fn dims(m: usize, n: usize) -> BipartiteDims {
        BipartiteDims::new(m, n).unwrap()
    }

    #[test]
    fn bell_report() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let amps = vec![
            num_complex::Complex64::new(s, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
            num_complex::Complex64::new(s, 0.0),
        ];
        let rho = crate::states::PureState::new(amps, dims(2, 2)).unwrap().density();
        let report = verify_neg_count_bound(&rho).unwrap();
        assert_eq!(report.neg_count, 1);
        assert_eq!(report.bound, 1);
        assert!(report.within_bounds);
        assert_abs_diff_eq!(report.min_eig, -0.5, epsilon = 1e-12);
    }

    #[test]
    fn rho_a_report_hits_bound() {
        let rho = build_rho_a(&RhoAParams { n: 3, a: 0.8 }).unwrap();
        let report = verify_neg_count_bound(&rho).unwrap();
        assert_eq!(report.neg_count, 4);
        assert_eq!(report.bound, 4);
        assert!(report.within_bounds);
        let range = verify_spectral_range(&rho).unwrap();
        assert!(range.min_eig >= -0.5 - range.tolerance);
        assert!(range.max_eig <= 1.0 + range.tolerance);
    }

    #[test]
    fn ginibre_reports_stay_in_bounds() {
        for k in 0..25 {
            let rho = ginibre_mixed(dims(3, 3), 9, SeedSpec::new(400).with_stream(k)).unwrap();
            assert!(verify_neg_count_bound(&rho).unwrap().within_bounds);
        }
    }

    #[test]
    fn robustness_on_rho_a() {
        let rho = build_rho_a(&RhoAParams { n: 3, a: 0.8 }).unwrap();
        let report = npt_robustness_check(&rho, 40, SeedSpec::new(1234)).unwrap();
        assert_eq!(report.k, 3);
        assert!(report.all_npt);
        assert!(report.min_neg_count >= 1);
    }

    #[test]
    fn robustness_rejects_single_negative() {
        let rho = pure_with_schmidt_rank(dims(2, 2), 2, SeedSpec::new(5))
            .unwrap()
            .density();
        assert!(matches!(
            npt_robustness_check(&rho, 10, SeedSpec::new(1)),
            Err(AnalysisError::InsufficientNegatives { neg_count: 1 })
        ));
    }
}
