//! JSON report bodies emitted by the subcommands.
//!
//! Every report embeds the tolerance configuration and the input description,
//! so a result can be audited without rerunning. Field order is fixed by the
//! struct definitions and floats serialize in shortest round-trip form, which
//! makes identical runs byte-identical (modulo the optional timestamp).

use serde::Serialize;

use qic_core::config::Tolerances;
use qic_core::info::FisherReport;
use qic_core::io::VirtualQubitFile;
use qic_core::qic::{PurityCurve, QicCriteria};

#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
    pub tolerances: Tolerances,
    pub input: InputDesc,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Serialize)]
pub struct InputDesc {
    pub source: String,
    pub n_qubits: usize,
    pub theta: f64,
    pub axis: [f64; 3],
}

/// Body of `find-qic` and the haar demo.
#[derive(Serialize)]
pub struct CapsuleReport {
    pub schmidt_probs: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purity_curve: Option<PurityCurve>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling_g: Option<f64>,
    pub factorization_residual_weight: f64,
    pub capsule_bloch: [f64; 3],
    pub criteria: QicCriteria,
    pub fisher: FisherReport,
    pub operators: VirtualQubitFile,
}

/// Body of the bell demo.
#[derive(Serialize)]
pub struct BellDemoReport {
    pub fisher: FisherReport,
    /// Max deviation of the written qubit's reduced state from I/2 over the
    /// θ grid.
    pub delocalization_residual: f64,
    pub capsule: CapsuleReport,
    pub max_entanglement: MaxEntanglementReport,
}

#[derive(Serialize)]
pub struct MaxEntanglementReport {
    pub possible: bool,
    pub generator_expectation: f64,
    /// Purity of both partners at the bottom of the curve when possible,
    /// otherwise the minimum achievable partner purity.
    pub purity_a: Option<f64>,
    pub purity_b: Option<f64>,
    pub min_achievable_purity: Option<f64>,
}

/// Body of the ghz demo.
#[derive(Serialize)]
pub struct GhzDemoReport {
    pub fisher: FisherReport,
    /// Deviation of U·(written state) from w(θ)|+⟩ ⊗ (|++⟩+|−−⟩)/√2.
    pub factorization_residual: f64,
    pub capsule_1: VirtualQubitFile,
    pub capsule_2: VirtualQubitFile,
    pub extraction_1: ExtractPoint,
    pub extraction_2: ExtractPoint,
    pub capsules_equivalent: bool,
    pub inequivalence_residual: f64,
}

/// Body of `extract`.
#[derive(Serialize)]
pub struct ExtractReport {
    pub probe_state: [[f64; 2]; 2],
    pub all_capsule_ok: bool,
    pub points: Vec<ExtractPoint>,
}

#[derive(Serialize)]
pub struct ExtractPoint {
    pub theta: f64,
    pub readout_bloch: [f64; 3],
    pub readout_purity: f64,
    pub residual_fisher: f64,
    pub remainder_fisher: f64,
}

/// Body of `fisher`.
#[derive(Serialize)]
pub struct FisherBody {
    pub fisher: FisherReport,
}

/// Body of `verify`.
#[derive(Serialize)]
pub struct VerifyBody {
    pub valid: bool,
    pub dim: usize,
    pub norm_deviation: f64,
}

/// One row of the coupling sweep.
#[derive(Serialize)]
pub struct SweepRow {
    pub g: f64,
    pub predicted_purity: f64,
    pub measured_purity: f64,
}

/// Body of `sweep-g --format json`.
#[derive(Serialize)]
pub struct SweepBody {
    pub rows: Vec<SweepRow>,
}

/// One row of the evolution trajectory.
#[derive(Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub fisher: f64,
    pub purity: f64,
    pub mean_weight: f64,
    pub weights: Vec<f64>,
}

/// Body of `evolve --format json`.
#[derive(Serialize)]
pub struct TrajectoryBody {
    pub rows: Vec<TrajectoryRow>,
}
