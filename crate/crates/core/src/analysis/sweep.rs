//! Deterministic parameter sweeps over the state families, with neg-count
//! histograms as the summary output.

use super::AnalysisError;
use crate::families::{
    build_cyclic_family, build_rho_a, build_three_qutrit, CyclicFamilyParams, RhoAParams,
    ThreeQutritParams,
};
use crate::sampling::{uniform01, SeedSpec};
use crate::states::{BipartiteDims, DensityMatrix, PtSpectrum, Subsystem};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Families whose free real parameters can be laid on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SweepFamily {
    RhoA { n: usize },
    ThreeQutrit,
    Cyclic { n: usize },
}

impl SweepFamily {
    pub fn param_count(&self) -> usize {
        match self {
            SweepFamily::RhoA { .. } => 1,
            SweepFamily::ThreeQutrit => 6,
            SweepFamily::Cyclic { n } => n * (n - 1),
        }
    }

    pub fn dims(&self) -> Result<BipartiteDims, AnalysisError> {
        let n = match self {
            SweepFamily::RhoA { n } => *n,
            SweepFamily::ThreeQutrit => 3,
            SweepFamily::Cyclic { n } => *n,
        };
        Ok(BipartiteDims::new(n, n)?)
    }

    pub fn build(&self, params: &[f64]) -> Result<DensityMatrix, AnalysisError> {
        if params.len() != self.param_count() {
            return Err(AnalysisError::ParamCountMismatch {
                expected: self.param_count(),
                got: params.len(),
            });
        }
        let rho = match self {
            SweepFamily::RhoA { n } => build_rho_a(&RhoAParams { n: *n, a: params[0] })?,
            SweepFamily::ThreeQutrit => build_three_qutrit(&ThreeQutritParams::real(
                params[0], params[1], params[2], params[3], params[4], params[5],
            ))?,
            SweepFamily::Cyclic { n } => {
                let weights: Vec<Vec<Complex64>> = params
                    .chunks(n - 1)
                    .map(|row| row.iter().map(|&w| Complex64::new(w, 0.0)).collect())
                    .collect();
                build_cyclic_family(&CyclicFamilyParams { n: *n, weights })?
            }
        };
        Ok(rho)
    }
}

/// Axes of parameter values, one per family parameter, enumerated with the
/// first axis most significant. `subsample` switches from full enumeration to
/// that many uniform draws from the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsample: Option<u64>,
}

/// Full enumeration is refused above this many points.
pub const FULL_ENUMERATION_CAP: u64 = 1_000_000;

impl GridSpec {
    pub fn cardinality(&self) -> u64 {
        self.axes
            .iter()
            .try_fold(1u64, |acc, axis| acc.checked_mul(axis.len() as u64))
            .unwrap_or(u64::MAX)
    }

    fn validate(&self, family: &SweepFamily) -> Result<(), AnalysisError> {
        if self.axes.len() != family.param_count() {
            return Err(AnalysisError::ParamCountMismatch {
                expected: family.param_count(),
                got: self.axes.len(),
            });
        }
        for (j, axis) in self.axes.iter().enumerate() {
            if axis.is_empty() {
                return Err(AnalysisError::EmptyAxis { axis: j });
            }
        }
        Ok(())
    }

    /// Grid point for a flat index, first axis most significant.
    pub(crate) fn decode(&self, index: u64) -> Vec<f64> {
        let mut rest = index;
        let mut params = vec![0.0; self.axes.len()];
        for (j, axis) in self.axes.iter().enumerate().rev() {
            let len = axis.len() as u64;
            params[j] = axis[(rest % len) as usize];
            rest /= len;
        }
        params
    }

    /// Independent uniform draw per axis, from the point's own sub-stream.
    pub(crate) fn draw(&self, s: SeedSpec) -> Vec<f64> {
        let mut rng = s.rng();
        self.axes
            .iter()
            .map(|axis| axis[(uniform01(&mut rng) * axis.len() as f64) as usize])
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    #[serde(flatten)]
    pub family: SweepFamily,
    pub grid: GridSpec,
    #[serde(default)]
    pub emit_eigenvalues: bool,
}

/// One evaluated grid point. Counts and eigenvalues describe the unnormalized
/// family matrix (counts are scale-invariant); `negativity` is that of the
/// trace-normalized state; `trace` recovers the raw scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub point_index: u64,
    pub params: Vec<f64>,
    pub neg_count: usize,
    pub negativity: f64,
    pub trace: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOutcome {
    pub dims: BipartiteDims,
    pub records: Vec<SweepRecord>,
    /// neg_count -> number of points; every count up to (m-1)(n-1) is keyed,
    /// including zero-count bins.
    pub histogram: BTreeMap<usize, u64>,
}

fn evaluate_point(
    family: &SweepFamily,
    point_index: u64,
    params: Vec<f64>,
    emit_eigenvalues: bool,
) -> Result<SweepRecord, AnalysisError> {
    let rho = family.build(&params)?;
    let spec: PtSpectrum = rho.pt_spectrum(Subsystem::A)?;
    Ok(SweepRecord {
        point_index,
        params,
        neg_count: spec.neg_count,
        negativity: spec.negativity / rho.trace(),
        trace: rho.trace(),
        eigenvalues: emit_eigenvalues.then_some(spec.eigenvalues),
    })
}

/// Evaluate the family on the grid. Full enumeration orders records by flat
/// grid index; subsampling orders them by draw index. Either way the stream
/// is a pure function of (spec, seed), whatever the worker count.
pub fn sweep(spec: &SweepSpec, seed: SeedSpec) -> Result<SweepOutcome, AnalysisError> {
    spec.grid.validate(&spec.family)?;
    let dims = spec.family.dims()?;
    let cardinality = spec.grid.cardinality();

    let records: Result<Vec<SweepRecord>, AnalysisError> = match spec.grid.subsample {
        None => {
            if cardinality > FULL_ENUMERATION_CAP {
                return Err(AnalysisError::GridTooLarge {
                    points: cardinality,
                    cap: FULL_ENUMERATION_CAP,
                });
            }
            (0..cardinality)
                .into_par_iter()
                .map(|t| {
                    evaluate_point(&spec.family, t, spec.grid.decode(t), spec.emit_eigenvalues)
                })
                .collect()
        }
        Some(count) => (0..count)
            .into_par_iter()
            .map(|t| {
                evaluate_point(
                    &spec.family,
                    t,
                    spec.grid.draw(seed.offset(t)),
                    spec.emit_eigenvalues,
                )
            })
            .collect(),
    };
    let records = records?;

    let mut histogram: BTreeMap<usize, u64> =
        (0..=dims.neg_count_bound()).map(|k| (k, 0)).collect();
    for rec in &records {
        *histogram.entry(rec.neg_count).or_insert(0) += 1;
    }
    Ok(SweepOutcome {
        dims,
        records,
        histogram,
    })
}
