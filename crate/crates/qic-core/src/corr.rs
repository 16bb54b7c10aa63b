//! Virtual qubits in correlation space.
//!
//! A virtual qubit is a triple of traceless Hermitian operators on the full
//! N-qubit space obeying the single-qubit Pauli product rule
//! `Σ_i Σ_j = δ_ij I + i ε_ijk Σ_k`. Expectation values of a triple define a
//! 2×2 correlation-space state; two commuting triples define a 4×4 pair state.
//! This module verifies triples, builds those states, decides the partner
//! conditions and tests operator-triple equivalence.

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{tensor, CMat};
use crate::pauli::{decompose, sigma_triple, PauliString};
use crate::qubit::{embed, StateVector};

/// Verified operator triple representing one qubit in correlation space.
#[derive(Debug, Clone)]
pub struct VirtualQubit {
    n_qubits: usize,
    ops: [CMat; 3],
    label: String,
}

/// Residuals from checking the virtual-qubit conditions.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct VerifyReport {
    /// Max `‖Σ_i − Σ_i†‖_max`.
    pub hermiticity: f64,
    /// Max `|Tr Σ_i|`.
    pub trace: f64,
    /// Max `‖Σ_iΣ_j − δ_ij I − iε_ijk Σ_k‖_max`.
    pub algebra: f64,
}

impl VerifyReport {
    pub fn passes(&self, tol: &Tolerances) -> bool {
        self.hermiticity <= tol.herm && self.trace <= tol.herm && self.algebra <= tol.alg
    }

    pub fn max_residual(&self) -> f64 {
        self.hermiticity.max(self.trace).max(self.algebra)
    }
}

impl VirtualQubit {
    /// Builds a triple after verifying the algebra; the returned value carries
    /// the verification as a type invariant.
    pub fn new(
        n_qubits: usize,
        ops: [CMat; 3],
        label: impl Into<String>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let v = Self::new_unchecked(n_qubits, ops, label);
        let report = verify_virtual_qubit(&v)?;
        if !report.passes(tol) {
            return Err(Error::InvalidTriple(format!(
                "hermiticity {:.3e}, trace {:.3e}, algebra {:.3e}",
                report.hermiticity, report.trace, report.algebra
            )));
        }
        Ok(v)
    }

    /// Builds a triple without verification (for tests and diagnostics).
    pub fn new_unchecked(n_qubits: usize, ops: [CMat; 3], label: impl Into<String>) -> Self {
        Self {
            n_qubits,
            ops,
            label: label.into(),
        }
    }

    /// The physical qubit at `site`: `{embed(σ_i, site, n)}`.
    pub fn physical(site: usize, n_qubits: usize, tol: &Tolerances) -> Result<Self> {
        let [sx, sy, sz] = sigma_triple();
        let ops = [
            embed(&sx, site, n_qubits)?,
            embed(&sy, site, n_qubits)?,
            embed(&sz, site, n_qubits)?,
        ];
        Self::new(n_qubits, ops, format!("physical qubit {site}"), tol)
    }

    /// `U† Σ_i U` for each component, re-verified.
    pub fn conjugated_by(
        &self,
        u: &CMat,
        label: impl Into<String>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let u_dag = u.adjoint();
        let ops = [
            u_dag.matmul(&self.ops[0].matmul(u)),
            u_dag.matmul(&self.ops[1].matmul(u)),
            u_dag.matmul(&self.ops[2].matmul(u)),
        ];
        Self::new(self.n_qubits, ops, label, tol)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.ops[0].rows()
    }

    pub fn ops(&self) -> &[CMat; 3] {
        &self.ops
    }

    pub fn x(&self) -> &CMat {
        &self.ops[0]
    }

    pub fn y(&self) -> &CMat {
        &self.ops[1]
    }

    pub fn z(&self) -> &CMat {
        &self.ops[2]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Bloch vector `(⟨Σ_x⟩, ⟨Σ_y⟩, ⟨Σ_z⟩)` in the given state.
    pub fn bloch(&self, psi: &StateVector) -> [f64; 3] {
        [
            psi.expectation(&self.ops[0]).re,
            psi.expectation(&self.ops[1]).re,
            psi.expectation(&self.ops[2]).re,
        ]
    }

    /// Pauli-string expansion of each component (for export and reporting).
    pub fn to_pauli_terms(&self, cutoff: f64) -> [Vec<PauliString>; 3] {
        [
            decompose(&self.ops[0], cutoff),
            decompose(&self.ops[1], cutoff),
            decompose(&self.ops[2], cutoff),
        ]
    }
}

/// Computes the verification residuals of a triple.
pub fn verify_virtual_qubit(v: &VirtualQubit) -> Result<VerifyReport> {
    let dim = 1usize
        .checked_shl(v.n_qubits as u32)
        .ok_or_else(|| Error::DimensionMismatch("qubit count overflow".into()))?;
    for op in &v.ops {
        if op.rows() != dim || op.cols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, expected {dim}x{dim}",
                op.rows(),
                op.cols()
            )));
        }
    }

    let hermiticity = v
        .ops
        .iter()
        .map(|m| m.hermiticity_residual())
        .fold(0.0, f64::max);
    let trace = v.ops.iter().map(|m| m.trace().norm()).fold(0.0, f64::max);

    let identity = CMat::identity(dim);
    let mut algebra: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let product = v.ops[i].matmul(&v.ops[j]);
            let expected = if i == j {
                identity.clone()
            } else {
                let k = 3 - i - j;
                let sign = if (i + 1) % 3 == j { 1.0 } else { -1.0 };
                v.ops[k].scaled(Complex64::new(0.0, sign))
            };
            algebra = algebra.max(product.max_abs_diff(&expected));
        }
    }

    Ok(VerifyReport {
        hermiticity,
        trace,
        algebra,
    })
}

/// A correlation-space density matrix with its purity.
#[derive(Debug, Clone)]
pub struct CorrState {
    pub rho: CMat,
    pub purity: f64,
}

impl CorrState {
    /// Residual-based validity check: Hermitian, unit trace, positive
    /// semidefinite within `tol.psd`.
    pub fn check(&self, tol: &Tolerances) -> Result<()> {
        let herm = self.rho.hermiticity_residual();
        if herm > tol.herm {
            return Err(Error::NotHermitian {
                residual: herm,
                tolerance: tol.herm,
            });
        }
        let tr = self.rho.trace();
        if (tr.re - 1.0).abs() > tol.norm || tr.im.abs() > tol.norm {
            return Err(Error::InvalidState(format!(
                "correlation state trace {tr} deviates from 1"
            )));
        }
        let (values, _) = crate::linalg::herm_eig(&self.rho, tol)?;
        if let Some(&min) = values.last() {
            if min < -tol.psd {
                return Err(Error::InvalidState(format!(
                    "correlation state has negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(())
    }

    /// Bloch vector of a single-qubit correlation state.
    pub fn bloch(&self) -> [f64; 3] {
        assert_eq!(self.rho.rows(), 2, "bloch vector of a non-qubit state");
        [
            2.0 * self.rho.get(1, 0).re,
            2.0 * self.rho.get(1, 0).im,
            (self.rho.get(0, 0) - self.rho.get(1, 1)).re,
        ]
    }
}

/// Single-virtual-qubit state: `ρ = ½ Σ_μ ⟨Σ_μ⟩ σ_μ` with `Σ_0 = I`.
pub fn corr_state_single(psi: &StateVector, v: &VirtualQubit) -> CorrState {
    assert_eq!(psi.dim(), v.dim(), "state/operator dimension mismatch");
    let bloch = v.bloch(psi);
    let mut rho = CMat::identity(2).scaled(Complex64::new(0.5, 0.0));
    for (b, sigma) in bloch.iter().zip(sigma_triple()) {
        rho = rho.add(&sigma.scaled(Complex64::new(0.5 * b, 0.0)));
    }
    let purity = 0.5 * (1.0 + bloch.iter().map(|b| b * b).sum::<f64>());
    CorrState { rho, purity }
}

/// Two-virtual-qubit state:
/// `ρ_AB = ¼ Σ_{μν} ⟨Σ_μ^(A) Σ_ν^(B)⟩ σ_μ ⊗ σ_ν` with `Σ_0 = I`.
///
/// Fails if the triples do not commute componentwise.
pub fn corr_state_pair(
    psi: &StateVector,
    a: &VirtualQubit,
    b: &VirtualQubit,
    tol: &Tolerances,
) -> Result<CorrState> {
    assert_eq!(a.dim(), b.dim(), "triples live on different spaces");
    let max_comm = max_commutator(a, b);
    if max_comm > tol.alg {
        return Err(Error::LocalityViolation(max_comm));
    }

    let identity = CMat::identity(a.dim());
    let a_ops = [&identity, a.x(), a.y(), a.z()];
    let b_ops = [&identity, b.x(), b.y(), b.z()];
    let mut sigmas = vec![CMat::identity(2)];
    sigmas.extend(sigma_triple());

    let mut rho = CMat::zeros(4, 4);
    for (nu, b_op) in b_ops.iter().enumerate() {
        let b_psi = b_op.matvec(psi.amps());
        for (mu, a_op) in a_ops.iter().enumerate() {
            let expect = psi.amps().inner(&a_op.matvec(&b_psi));
            let weight = expect * Complex64::new(0.25, 0.0);
            rho = rho.add(&tensor(&sigmas[mu], &sigmas[nu])?.scaled(weight));
        }
    }
    let purity = rho.hs_inner(&rho).re;
    Ok(CorrState { rho, purity })
}

fn max_commutator(a: &VirtualQubit, b: &VirtualQubit) -> f64 {
    let mut max: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            max = max.max(a.ops[i].commutator(&b.ops[j]).max_abs());
        }
    }
    max
}

/// Outcome of the three partner conditions.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct PartnerReport {
    pub algebra_ok: bool,
    pub locality_ok: bool,
    pub max_commutator: f64,
    /// Purity of the joint correlation-space state (NaN when the locality
    /// condition fails and the joint state is undefined).
    pub purity: f64,
    pub is_partner: bool,
}

/// Checks the partner conditions: both triples verify, they commute
/// componentwise, and their joint correlation state is pure.
pub fn check_partner(
    psi: &StateVector,
    a: &VirtualQubit,
    b: &VirtualQubit,
    tol: &Tolerances,
) -> Result<PartnerReport> {
    let algebra_ok = verify_virtual_qubit(a)?.passes(tol) && verify_virtual_qubit(b)?.passes(tol);
    let max_comm = max_commutator(a, b);
    let locality_ok = max_comm <= tol.alg;
    let purity = if locality_ok {
        corr_state_pair(psi, a, b, tol)?.purity
    } else {
        f64::NAN
    };
    let is_partner = algebra_ok && locality_ok && purity >= 1.0 - tol.pure;
    Ok(PartnerReport {
        algebra_ok,
        locality_ok,
        max_commutator: max_comm,
        purity,
        is_partner,
    })
}

/// Outcome of the triple-equivalence test.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// Max Hilbert–Schmidt norm left after projecting each component of `b`
    /// onto the span of `a`'s components.
    pub residual: f64,
    /// The 3×3 coefficient matrix of the projection.
    pub rotation: [[f64; 3]; 3],
}

/// Two triples are physically the same virtual qubit iff each component of
/// one lies in the span of the other's components and the coefficient matrix
/// is a proper rotation.
///
/// Conjugating a triple by a unitary generated by itself acts on the triple's
/// span as an SO(3) rotation, so span membership plus a proper-rotation
/// coefficient matrix decides equivalence without quantifying over unitaries.
pub fn check_equivalence(
    a: &VirtualQubit,
    b: &VirtualQubit,
    tol: &Tolerances,
) -> EquivalenceReport {
    assert_eq!(a.dim(), b.dim(), "triples live on different spaces");
    let dim = a.dim() as f64;
    let mut rotation = [[0.0f64; 3]; 3];
    let mut residual: f64 = 0.0;
    let mut imag_noise: f64 = 0.0;

    for (i, b_op) in b.ops.iter().enumerate() {
        for (j, a_op) in a.ops.iter().enumerate() {
            let coeff = a_op.hs_inner(b_op) / Complex64::new(dim, 0.0);
            rotation[i][j] = coeff.re;
            imag_noise = imag_noise.max(coeff.im.abs());
        }
        let mut projected = CMat::zeros(a.dim(), a.dim());
        for (j, a_op) in a.ops.iter().enumerate() {
            projected = projected.add(&a_op.scaled(Complex64::new(rotation[i][j], 0.0)));
        }
        let leftover = b_op.sub(&projected);
        residual = residual.max((leftover.hs_inner(&leftover).re / dim).sqrt());
    }

    let gram = mat3_mul(&rotation, &mat3_transpose(&rotation));
    let orthogonality = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| (gram[i][j] - if i == j { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    let det = mat3_det(&rotation);
    let equivalent = residual <= tol.alg
        && imag_noise <= tol.alg
        && orthogonality <= tol.alg
        && (det - 1.0).abs() <= tol.alg;

    EquivalenceReport {
        equivalent,
        residual,
        rotation,
    }
}

fn mat3_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn mat3_transpose(a: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

fn mat3_det(a: &[[f64; 3]; 3]) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}
