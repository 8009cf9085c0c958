//! File formats: state JSON, family specs, basis files, sweep CSV, and the
//! report wrappers the command-line tool emits.
//!
//! Every floating-point number in JSON output is printed with 17 significant
//! digits, enough to round-trip an IEEE double exactly. CSV output is
//! RFC 4180 (CRLF rows). Reports carry a `meta` block with the tool version,
//! seed, dims, and tolerance behind the numbers.

use crate::analysis::sweep::{SweepOutcome, SweepSpec};
use crate::analysis::{BoundReport, RobustnessReport, SearchResult, Strategy};
use crate::families::{
    build_cyclic_family, build_max_witness, build_min_witness, build_rho_a,
    rho_a_spectrum_closed_form, CyclicFamilyParams, ExtremalParams, FamilyError, RhoAParams,
    ThreeQutritParams,
};
use crate::linalg::{ComplexMatrix, LinalgError};
use crate::sampling::SeedSpec;
use crate::states::{
    BipartiteDims, DensityMatrix, PtSpectrum, PureState, StateError, Subsystem,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("invalid state: {0}")]
    State(#[from] StateError),
    #[error("invalid matrix data: {0}")]
    Linalg(#[from] LinalgError),
    #[error("invalid family spec: {0}")]
    Family(#[from] FamilyError),
}

// json with every double at 17 significant digits

struct Sci17;

impl serde_json::ser::Formatter for Sci17 {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        write!(w, "{value:.16e}")
    }
}

/// Serialize to a JSON string, doubles at 17 significant digits.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String, IoError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sci17);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes utf-8"))
}

/// Write `value` as JSON (17-digit doubles) with a trailing newline.
pub fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut text = to_json_string(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

// state files

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Density,
    Pure,
}

/// On-disk state representation: row-major [re, im] pairs, (mn)^2 of them
/// for a density matrix and mn for a pure state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub m: usize,
    pub n: usize,
    pub kind: StateKind,
    pub data: Vec<[f64; 2]>,
}

/// A loaded state of either kind.
#[derive(Debug, Clone)]
pub enum StateData {
    Density(DensityMatrix),
    Pure(PureState),
}

impl StateData {
    pub fn dims(&self) -> BipartiteDims {
        match self {
            StateData::Density(d) => d.dims(),
            StateData::Pure(p) => p.dims(),
        }
    }

    /// View as a density matrix (pure states become their projector,
    /// trace = squared norm).
    pub fn to_density(&self) -> DensityMatrix {
        match self {
            StateData::Density(d) => d.clone(),
            StateData::Pure(p) => p.density(),
        }
    }

    pub fn pt_spectrum(&self, part: Subsystem) -> Result<PtSpectrum, StateError> {
        self.to_density().pt_spectrum(part)
    }
}

fn pairs(zs: &[Complex64]) -> Vec<[f64; 2]> {
    zs.iter().map(|z| [z.re, z.im]).collect()
}

impl StateFile {
    pub fn from_state(state: &StateData) -> Self {
        let dims = state.dims();
        let (kind, data) = match state {
            StateData::Density(d) => (StateKind::Density, pairs(d.mat().data())),
            StateData::Pure(p) => (StateKind::Pure, pairs(p.amplitudes())),
        };
        Self {
            m: dims.m(),
            n: dims.n(),
            kind,
            data,
        }
    }

    /// Rebuild the state, running full constructor validation.
    pub fn to_state(&self) -> Result<StateData, IoError> {
        let dims = BipartiteDims::new(self.m, self.n)?;
        let zs: Vec<Complex64> = self
            .data
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        match self.kind {
            StateKind::Density => {
                let mat = ComplexMatrix::new(dims.total(), zs)?;
                Ok(StateData::Density(DensityMatrix::new(mat, dims)?))
            }
            StateKind::Pure => Ok(StateData::Pure(PureState::new(zs, dims)?)),
        }
    }
}

pub fn state_to_json(state: &StateData) -> Result<String, IoError> {
    to_json_string(&StateFile::from_state(state))
}

pub fn state_from_json(text: &str) -> Result<StateData, IoError> {
    let file: StateFile = serde_json::from_str(text)?;
    file.to_state()
}

pub fn save_state(path: &Path, state: &StateData) -> Result<(), IoError> {
    write_json_file(path, &StateFile::from_state(state))
}

pub fn load_state(path: &Path) -> Result<StateData, IoError> {
    state_from_json(&std::fs::read_to_string(path)?)
}

// family spec files

/// A complex parameter in a spec file: either a bare real or an [re, im]
/// pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexParam(pub Complex64);

impl From<ComplexParam> for Complex64 {
    fn from(p: ComplexParam) -> Self {
        p.0
    }
}

impl Serialize for ComplexParam {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexParam {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Real(f64),
            Pair([f64; 2]),
        }
        Ok(ComplexParam(match Repr::deserialize(d)? {
            Repr::Real(re) => Complex64::new(re, 0.0),
            Repr::Pair([re, im]) => Complex64::new(re, im),
        }))
    }
}

/// Family spec file: {"family": "...", "params": {...}}.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum FamilySpec {
    RhoA {
        n: usize,
        a: f64,
    },
    ThreeQutrit {
        a1: ComplexParam,
        a2: ComplexParam,
        b1: ComplexParam,
        b2: ComplexParam,
        c1: ComplexParam,
        c2: ComplexParam,
    },
    Cyclic {
        n: usize,
        weights: Vec<Vec<ComplexParam>>,
    },
    MinWitness {
        m: usize,
        epsilon: f64,
    },
    MaxWitness {
        m: usize,
        epsilon: f64,
    },
}

impl FamilySpec {
    /// Build the state; min_witness yields a pure state, everything else a
    /// density matrix.
    pub fn build(&self) -> Result<StateData, FamilyError> {
        match self {
            FamilySpec::RhoA { n, a } => Ok(StateData::Density(build_rho_a(&RhoAParams {
                n: *n,
                a: *a,
            })?)),
            FamilySpec::ThreeQutrit {
                a1,
                a2,
                b1,
                b2,
                c1,
                c2,
            } => Ok(StateData::Density(build_three_qutrit_from(
                *a1, *a2, *b1, *b2, *c1, *c2,
            )?)),
            FamilySpec::Cyclic { n, weights } => {
                let weights = weights
                    .iter()
                    .map(|row| row.iter().map(|p| p.0).collect())
                    .collect();
                Ok(StateData::Density(build_cyclic_family(
                    &CyclicFamilyParams { n: *n, weights },
                )?))
            }
            FamilySpec::MinWitness { m, epsilon } => Ok(StateData::Pure(build_min_witness(
                &ExtremalParams {
                    m: *m,
                    epsilon: *epsilon,
                },
            )?)),
            FamilySpec::MaxWitness { m, epsilon } => Ok(StateData::Density(build_max_witness(
                &ExtremalParams {
                    m: *m,
                    epsilon: *epsilon,
                },
            )?)),
        }
    }

    /// PT spectrum: closed form where one exists, numeric otherwise.
    pub fn spectrum(&self) -> Result<PtSpectrum, IoError> {
        match self {
            FamilySpec::RhoA { n, a } => {
                Ok(rho_a_spectrum_closed_form(&RhoAParams { n: *n, a: *a })?)
            }
            _ => Ok(self.build()?.pt_spectrum(Subsystem::A)?),
        }
    }
}

fn build_three_qutrit_from(
    a1: ComplexParam,
    a2: ComplexParam,
    b1: ComplexParam,
    b2: ComplexParam,
    c1: ComplexParam,
    c2: ComplexParam,
) -> Result<DensityMatrix, FamilyError> {
    crate::families::build_three_qutrit(&ThreeQutritParams {
        a1: a1.0,
        a2: a2.0,
        b1: b1.0,
        b2: b2.0,
        c1: c1.0,
        c2: c2.0,
    })
}

pub fn load_family_spec(path: &Path) -> Result<FamilySpec, IoError> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

// basis files for the product-vector search

/// Basis file: {"m": .., "n": .., "vectors": [[[re, im], ...], ...]}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisFile {
    pub m: usize,
    pub n: usize,
    pub vectors: Vec<Vec<[f64; 2]>>,
}

pub fn load_basis(path: &Path) -> Result<(BipartiteDims, Vec<Vec<Complex64>>), IoError> {
    let file: BasisFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let dims = BipartiteDims::new(file.m, file.n)?;
    let vectors = file
        .vectors
        .iter()
        .map(|v| {
            v.iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect()
        })
        .collect();
    Ok((dims, vectors))
}

// sweep spec + outputs

pub fn load_sweep_spec(path: &Path) -> Result<SweepSpec, IoError> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Write sweep records as RFC 4180 CSV with columns
/// point_index, param_0..param_{k-1}, neg_count, negativity.
pub fn write_sweep_csv<W: std::io::Write>(w: W, outcome: &SweepOutcome) -> Result<(), IoError> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(w);
    let k = outcome.records.first().map_or(0, |r| r.params.len());
    let mut header = vec!["point_index".to_string()];
    header.extend((0..k).map(|j| format!("param_{j}")));
    header.push("neg_count".to_string());
    header.push("negativity".to_string());
    wtr.write_record(&header)?;
    for r in &outcome.records {
        let mut row = vec![r.point_index.to_string()];
        row.extend(r.params.iter().map(|p| fmt_f64(*p)));
        row.push(r.neg_count.to_string());
        row.push(fmt_f64(r.negativity));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn save_sweep_csv(path: &Path, outcome: &SweepOutcome) -> Result<(), IoError> {
    write_sweep_csv(std::fs::File::create(path)?, outcome)
}

// report wrappers

/// Reproducibility block embedded in every output.
#[derive(Debug, Clone, Serialize)]
pub struct OutputMeta {
    pub tool_version: &'static str,
    pub seed: Option<SeedSpec>,
    pub dims: BipartiteDims,
    pub tolerance: f64,
}

impl OutputMeta {
    pub fn new(dims: BipartiteDims, seed: Option<SeedSpec>, tolerance: f64) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            seed,
            dims,
            tolerance,
        }
    }
}

/// CSV cannot embed metadata, so it rides in `<output>.meta.json` next to
/// the data file. Returns the sidecar path.
pub fn save_meta_sidecar(output_path: &Path, meta: &OutputMeta) -> Result<PathBuf, IoError> {
    let name = output_path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let sidecar = output_path.with_file_name(format!("{name}.meta.json"));
    write_json_file(&sidecar, meta)?;
    Ok(sidecar)
}

#[derive(Serialize)]
pub struct SpectrumReport<'a> {
    pub meta: OutputMeta,
    #[serde(flatten)]
    pub spectrum: &'a PtSpectrum,
}

#[derive(Serialize)]
pub struct VerifyReport<'a> {
    pub meta: OutputMeta,
    #[serde(flatten)]
    pub report: &'a BoundReport,
}

#[derive(Serialize)]
pub struct RobustnessOutput<'a> {
    pub meta: OutputMeta,
    #[serde(flatten)]
    pub report: &'a RobustnessReport,
}

#[derive(Serialize)]
pub struct HistogramReport<'a> {
    pub meta: OutputMeta,
    pub neg_count_histogram: &'a BTreeMap<usize, u64>,
}

/// Product-vector search outcome with both local factors and the joint
/// vector.
#[derive(Serialize)]
pub struct ProductReport {
    pub meta: OutputMeta,
    pub found: bool,
    pub overlap: f64,
    pub restarts_used: u32,
    pub e: Vec<[f64; 2]>,
    pub f: Vec<[f64; 2]>,
    pub joint: Vec<[f64; 2]>,
}

impl ProductReport {
    pub fn from_outcome(
        dims: BipartiteDims,
        outcome: &crate::analysis::ProductVectorOutcome,
        seed: SeedSpec,
        tol: f64,
    ) -> Self {
        Self {
            meta: OutputMeta::new(dims, Some(seed), tol),
            found: outcome.found,
            overlap: outcome.overlap,
            restarts_used: outcome.restarts_used,
            e: pairs(&outcome.e),
            f: pairs(&outcome.f),
            joint: pairs(&outcome.vector()),
        }
    }
}

/// Search result with the best state embedded for re-verification.
#[derive(Serialize)]
pub struct SearchReport {
    pub meta: OutputMeta,
    pub strategy: Strategy,
    pub best_count: usize,
    pub best_negativity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_params: Option<Vec<f64>>,
    pub samples_evaluated: u64,
    pub elapsed_seconds: f64,
    pub best_state: StateFile,
}

impl SearchReport {
    pub fn from_result(res: &SearchResult) -> Result<Self, IoError> {
        let spec = res.best_state.pt_spectrum(Subsystem::A)?;
        Ok(Self {
            meta: OutputMeta::new(res.dims, Some(res.seed), spec.tolerance),
            strategy: res.strategy,
            best_count: res.best_count,
            best_negativity: res.best_negativity,
            best_params: res.best_params.clone(),
            samples_evaluated: res.samples_evaluated,
            elapsed_seconds: res.elapsed.as_secs_f64(),
            best_state: StateFile::from_state(&StateData::Density(res.best_state.clone())),
        })
    }
}
