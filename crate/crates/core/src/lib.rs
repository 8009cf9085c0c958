//! Partial-transpose spectra of bipartite quantum states.
//!
//! Builds density matrices (parametric families, random ensembles, file
//! input), computes partial transposes and their full spectra, checks the
//! spectral bounds that constrain them, and runs parameter sweeps and
//! searches for states with many negative partial-transpose eigenvalues.

pub mod analysis;
pub mod families;
pub mod io;
pub mod linalg;
pub mod sampling;
pub mod states;

pub use analysis::{
    find_product_vector, search_max_neg, sweep, npt_robustness_check, verify_neg_count_bound,
    verify_spectral_range, AnalysisError, BoundReport, GridSpec, ProductSearchConfig,
    ProductVectorOutcome, RobustnessReport, SearchResult, Strategy, SweepFamily, SweepOutcome,
    SweepRecord, SweepSpec,
};
pub use families::{
    build_cyclic_family, build_max_witness, build_min_witness, build_rho_a, build_three_qutrit,
    cubic_factor_coeffs, rho_a_spectrum_closed_form, CyclicFamilyParams, ExtremalParams,
    FamilyError, RhoAParams, ThreeQutritParams,
};
pub use linalg::{
    cubic_real_roots, hermitian_eigensystem, two_negative_roots_rule, ComplexMatrix, CubicCoeffs,
    CubicError, EigenSystem, LinalgError,
};
pub use sampling::{
    ginibre_mixed, haar_pure, haar_unitary, pure_with_schmidt_rank, random_product_state,
    SampleError, SeedSpec,
};
pub use states::{
    partial_transpose, pure_pt_spectrum_closed_form, schmidt, BipartiteDims, DensityMatrix,
    PtSpectrum, PureState, SchmidtVector, StateError, Subsystem,
};
