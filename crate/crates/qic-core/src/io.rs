//! File formats: state vectors, Hamiltonians and operator exports as JSON.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::corr::VirtualQubit;
use crate::dynamics::HamiltonianSpec;
use crate::error::{Error, Result};
use crate::linalg::CVec;
use crate::pauli::PauliString;
use crate::qubit::StateVector;

/// On-disk state format: `{"n_qubits": N, "amps": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub n_qubits: usize,
    pub amps: Vec<[f64; 2]>,
}

impl From<&StateVector> for StateFile {
    fn from(psi: &StateVector) -> Self {
        Self {
            n_qubits: psi.n_qubits(),
            amps: psi.amps().entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

/// Norm slack accepted from state files before rejecting the input.
pub const STATE_FILE_NORM_SLACK: f64 = 1e-6;

impl StateFile {
    /// Validates and normalizes into a state vector. Inputs whose norm
    /// deviates from 1 by more than [`STATE_FILE_NORM_SLACK`] are rejected.
    pub fn into_state(self) -> Result<StateVector> {
        let expected = 1usize
            .checked_shl(self.n_qubits as u32)
            .ok_or_else(|| Error::InvalidState("qubit count overflow".into()))?;
        let cap = crate::config::Limits::default().max_state_dim;
        if expected > cap {
            return Err(Error::DimensionCap { dim: expected, cap });
        }
        if self.amps.len() != expected {
            return Err(Error::InvalidState(format!(
                "expected {expected} amplitudes for {} qubits, got {}",
                self.n_qubits,
                self.amps.len()
            )));
        }
        let amps = CVec::new(
            self.amps
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect(),
        );
        if !amps.is_finite() {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > STATE_FILE_NORM_SLACK {
            return Err(Error::InvalidState(format!(
                "norm {norm} deviates from 1 beyond {STATE_FILE_NORM_SLACK:.1e}"
            )));
        }
        StateVector::normalized(self.n_qubits, amps)
    }
}

pub fn load_state(path: &Path) -> Result<StateVector> {
    let text = std::fs::read_to_string(path)?;
    let file: StateFile = serde_json::from_str(&text)?;
    file.into_state()
}

pub fn save_state(psi: &StateVector, path: &Path) -> Result<()> {
    let file = StateFile::from(psi);
    std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

/// One weighted Pauli term with a real coefficient.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HamiltonianTermFile {
    pub coeff: f64,
    pub letters: String,
}

/// On-disk Hamiltonian format:
/// `{"n_qubits": N, "terms": [{"coeff": 1.0, "letters": "ZZI"}, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub n_qubits: usize,
    pub terms: Vec<HamiltonianTermFile>,
}

impl From<&HamiltonianSpec> for HamiltonianFile {
    fn from(h: &HamiltonianSpec) -> Self {
        Self {
            n_qubits: h.n_qubits(),
            terms: h
                .terms()
                .iter()
                .map(|t| HamiltonianTermFile {
                    coeff: t.coeff().re,
                    letters: t.label(),
                })
                .collect(),
        }
    }
}

impl HamiltonianFile {
    pub fn into_spec(self) -> Result<HamiltonianSpec> {
        let terms = self
            .terms
            .iter()
            .map(|t| PauliString::parse(&t.letters, Complex64::new(t.coeff, 0.0)))
            .collect::<Result<Vec<_>>>()?;
        HamiltonianSpec::new(self.n_qubits, terms)
    }
}

pub fn load_hamiltonian(path: &Path) -> Result<HamiltonianSpec> {
    let text = std::fs::read_to_string(path)?;
    let file: HamiltonianFile = serde_json::from_str(&text)?;
    file.into_spec()
}

pub fn save_hamiltonian(h: &HamiltonianSpec, path: &Path) -> Result<()> {
    let file = HamiltonianFile::from(h);
    std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

/// One weighted Pauli term with a complex coefficient, for operator exports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorTermFile {
    pub coeff: [f64; 2],
    pub letters: String,
}

/// A Hermitian operator as a Pauli-term list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorFile {
    pub terms: Vec<OperatorTermFile>,
}

impl OperatorFile {
    pub fn from_terms(terms: &[PauliString]) -> Self {
        Self {
            terms: terms
                .iter()
                .map(|t| OperatorTermFile {
                    coeff: [t.coeff().re, t.coeff().im],
                    letters: t.label(),
                })
                .collect(),
        }
    }
}

/// A virtual-qubit triple exported as Pauli-term lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VirtualQubitFile {
    pub label: String,
    pub x: OperatorFile,
    pub y: OperatorFile,
    pub z: OperatorFile,
}

/// Export cutoff: Pauli coefficients at or below this magnitude are omitted.
pub const EXPORT_COEFF_CUTOFF: f64 = 1e-12;

impl From<&VirtualQubit> for VirtualQubitFile {
    fn from(v: &VirtualQubit) -> Self {
        let [x, y, z] = v.to_pauli_terms(EXPORT_COEFF_CUTOFF);
        Self {
            label: v.label().to_string(),
            x: OperatorFile::from_terms(&x),
            y: OperatorFile::from_terms(&y),
            z: OperatorFile::from_terms(&z),
        }
    }
}
