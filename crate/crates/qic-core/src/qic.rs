//! Construction of information capsules.
//!
//! Starting from the first-qubit Schmidt decomposition
//! `|Ψ⟩ = Σ_i √p_i |φ_i⟩|ψ_i⟩`, the Schmidt partner of the written qubit and
//! its phase-adjusted variant generate a one-parameter family of disentangling
//! unitaries `U(g) = e^{-ig Σ_z^(A) Σ̃_y^(B)}`. Along the family the partner
//! purity follows `½(1 + a + (1−a)cos(4g−d))`; at `g = d/4` the partner is
//! pure, the conjugated first-qubit triple confines the whole write, and at
//! `g = (d+π)/4` the pair is as entangled as the state allows.
//!
//! The Schmidt-partner operators act on the two-dimensional span of the rest
//! factors. Their extension to the full space (required for the operator
//! algebra to hold globally) pairs up a deterministically completed basis of
//! the orthogonal complement into further qubit blocks; expectation values in
//! the state are unaffected because the state lives in the span.

use num_complex::Complex64;

use crate::config::{theta_grid, Tolerances};
use crate::corr::{corr_state_single, verify_virtual_qubit, VerifyReport, VirtualQubit};
use crate::error::{Error, Result};
use crate::info::{
    apply_write, axis_frame_rotation, axis_generator, extract, written_qubit_bloch, WriteOp,
};
use crate::linalg::{complete_orthonormal_basis, tensor, CMat, CVec};
use crate::pauli::PauliString;
use crate::qubit::{embed, schmidt_first_qubit, SchmidtData, StateVector};

/// Coefficients of the partner-purity curve
/// `Tr(ρ²) = ½(1 + a + (1−a)cos(4g − d))`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct PurityCurve {
    /// Offset; also the minimum achievable partner purity.
    pub a: f64,
    /// cos(4g) coefficient of the squared Bloch length.
    pub b: f64,
    /// sin(4g) coefficient of the squared Bloch length.
    pub c: f64,
    /// Phase angle in (−π, π] with `cos d = b/(1−a)`, `sin d = c/(1−a)`.
    pub d: f64,
    /// Leading Schmidt weight of the underlying state.
    pub p0: f64,
    /// `|⟨0|φ_0⟩|²` of the leading first-qubit factor.
    pub overlap_sqr: f64,
}

impl PurityCurve {
    /// Predicted partner purity at coupling angle `g`.
    pub fn predicted_purity(&self, g: f64) -> f64 {
        0.5 * (1.0 + self.a + (1.0 - self.a) * (4.0 * g - self.d).cos())
    }

    /// Predicted partner Bloch vector at coupling angle `g`.
    pub fn predicted_partner_bloch(&self, g: f64) -> [f64; 3] {
        let (p0, q) = (self.p0, self.overlap_sqr);
        let cross = 4.0 * (p0 * (1.0 - p0)).max(0.0).sqrt() * (q * (1.0 - q)).max(0.0).sqrt();
        [
            (2.0 * q - 1.0) * (2.0 * g).sin(),
            0.0,
            (2.0 * p0 - 1.0) * (2.0 * g).cos() - cross * (2.0 * g).sin(),
        ]
    }

    /// Coupling angle at which the partner becomes pure.
    pub fn capsule_g(&self) -> f64 {
        self.d / 4.0
    }

    /// Coupling angle at which the partner purity reaches its minimum `a`.
    pub fn min_purity_g(&self) -> f64 {
        (self.d + std::f64::consts::PI) / 4.0
    }
}

/// Purity-curve coefficients from Schmidt data.
pub fn purity_curve_params(s: &SchmidtData) -> Result<PurityCurve> {
    if s.rank < 2 {
        return Err(Error::RankDeficient);
    }
    let p0 = s.probs[0];
    let q = s.first_overlap_sqr().clamp(0.0, 1.0);
    let u = (2.0 * p0 - 1.0) * (2.0 * p0 - 1.0);
    let w = (2.0 * q - 1.0) * (2.0 * q - 1.0);
    let a = 0.5 * (1.0 + u * w);
    let b = u - a;
    let c = -4.0
        * (2.0 * p0 - 1.0)
        * (p0 * (1.0 - p0)).max(0.0).sqrt()
        * (q * (1.0 - q)).max(0.0).sqrt();
    // Flush noise-level c (including −0.0) to +0.0 so the branch angle lands
    // on +π rather than −π when b < 0.
    let c = if c.abs() <= 1e-14 * (1.0 - a).abs() {
        0.0
    } else {
        c
    };
    // When a = 1 the curve is constant and the phase is immaterial.
    let d = if 1.0 - a > 1e-15 { c.atan2(b) } else { 0.0 };
    Ok(PurityCurve {
        a,
        b,
        c,
        d,
        p0,
        overlap_sqr: q,
    })
}

/// The disentangler parameters: curve coefficients, the chosen coupling angle
/// and the materialized unitary.
#[derive(Debug, Clone)]
pub struct DisentanglerParams {
    pub curve: PurityCurve,
    pub g: f64,
    pub unitary: CMat,
}

/// A conjugated partner pair along the disentangler family.
#[derive(Debug, Clone)]
pub struct PartnerPair {
    /// The written-side virtual qubit A′.
    pub qubit_a: VirtualQubit,
    /// The partner B′.
    pub qubit_b: VirtualQubit,
    pub params: DisentanglerParams,
    /// Measured purity of B′ in the state the pair was built for.
    pub entanglement_purity: f64,
}

// Builds the triple of rest-space operators over qubit blocks: the Schmidt
// pair carries the relative phase `beta`, complement pairs are plain.
fn block_triple(pairs: &[(CVec, CVec)], beta: Complex64) -> [CMat; 3] {
    let dim = pairs[0].0.dim();
    let mut x = CMat::zeros(dim, dim);
    let mut y = CMat::zeros(dim, dim);
    let mut z = CMat::zeros(dim, dim);
    for (idx, (va, vb)) in pairs.iter().enumerate() {
        let phase = if idx == 0 {
            beta
        } else {
            Complex64::new(1.0, 0.0)
        };
        let ab = va.outer(vb);
        let ba = vb.outer(va);
        x = x.add(&ab.scaled(phase)).add(&ba.scaled(phase.conj()));
        y = y
            .add(&ab.scaled(phase * Complex64::new(0.0, -1.0)))
            .add(&ba.scaled(phase.conj() * Complex64::new(0.0, 1.0)));
        z = z
            .add(&va.outer(va))
            .add(&vb.outer(vb).scaled(Complex64::new(-1.0, 0.0)));
    }
    [x, y, z]
}

// Schmidt pair plus paired-up complement basis, covering the full rest space.
fn rest_space_pairs(s: &SchmidtData) -> Vec<(CVec, CVec)> {
    let rest_dim = s.rest_factors[0].dim();
    let seed = [s.rest_factors[0].clone(), s.rest_factors[1].clone()];
    let extra = complete_orthonormal_basis(&seed, rest_dim);
    let mut pairs = vec![(seed[0].clone(), seed[1].clone())];
    for chunk in extra.chunks(2) {
        pairs.push((chunk[0].clone(), chunk[1].clone()));
    }
    pairs
}

fn lift_rest_triple(triple: [CMat; 3]) -> Result<[CMat; 3]> {
    let id = CMat::identity(2);
    Ok([
        tensor(&id, &triple[0])?,
        tensor(&id, &triple[1])?,
        tensor(&id, &triple[2])?,
    ])
}

/// The Schmidt partner of the first qubit:
/// `Σ_x = I ⊗ (|ψ_0⟩⟨ψ_1| + |ψ_1⟩⟨ψ_0|)` and companions, extended from the
/// rest-factor span to a full virtual qubit.
pub fn partner_ops_from_schmidt(
    s: &SchmidtData,
    n_qubits: usize,
    tol: &Tolerances,
) -> Result<VirtualQubit> {
    if s.rank < 2 {
        return Err(Error::RankDeficient);
    }
    let ops = lift_rest_triple(block_triple(&rest_space_pairs(s), Complex64::new(1.0, 0.0)))?;
    VirtualQubit::new(n_qubits, ops, "schmidt partner", tol)
}

/// The phase-adjusted partner:
/// `Σ̃_x = I ⊗ (α_0 α_1* |ψ_0⟩⟨ψ_1| + α_0* α_1 |ψ_1⟩⟨ψ_0|)` and companions,
/// with `Σ̃_z` unchanged. The phases make the partner expectations real so the
/// disentangler family reaches a pure partner.
pub fn tilde_ops(s: &SchmidtData, n_qubits: usize, tol: &Tolerances) -> Result<VirtualQubit> {
    if s.rank < 2 {
        return Err(Error::RankDeficient);
    }
    let beta = s.phases[0] * s.phases[1].conj();
    let ops = lift_rest_triple(block_triple(&rest_space_pairs(s), beta))?;
    VirtualQubit::new(n_qubits, ops, "phase-adjusted partner", tol)
}

/// The coupling unitary `e^{-ig Σ_z^(A) Σ̃_y^(B)}`.
///
/// The generator squares to `I ⊗ P` (the rest-span projector), not to the
/// identity, so the exact exponential is
/// `I + (cos g − 1)(I ⊗ P) − i sin g · Σ_z^(A) Σ̃_y^(B)` with the span-
/// restricted `Σ̃_y`. This is unitary on the whole space and commutes with the
/// write generator.
pub fn disentangler(s: &SchmidtData, g: f64) -> Result<CMat> {
    if s.rank < 2 {
        return Err(Error::RankDeficient);
    }
    let beta = s.phases[0] * s.phases[1].conj();
    let psi0 = &s.rest_factors[0];
    let psi1 = &s.rest_factors[1];
    let span_projector = psi0.outer(psi0).add(&psi1.outer(psi1));
    let tilde_y_restricted = psi0
        .outer(psi1)
        .scaled(beta * Complex64::new(0.0, -1.0))
        .add(
            &psi1
                .outer(psi0)
                .scaled(beta.conj() * Complex64::new(0.0, 1.0)),
        );

    let id2 = CMat::identity(2);
    let dim = 2 * psi0.dim();
    let mut u = CMat::identity(dim);
    u = u.add(&tensor(&id2, &span_projector)?.scaled(Complex64::new(g.cos() - 1.0, 0.0)));
    u = u.add(
        &tensor(&crate::pauli::sigma_z(), &tilde_y_restricted)?
            .scaled(Complex64::new(0.0, -g.sin())),
    );
    Ok(u)
}

/// Builds the conjugated partner pair `(A′, B′)` at coupling angle `g` for an
/// already-written state.
pub fn build_partner_family(
    psi_theta: &StateVector,
    g: f64,
    tol: &Tolerances,
) -> Result<PartnerPair> {
    let n = psi_theta.n_qubits();
    let s = schmidt_first_qubit(psi_theta, tol);
    let curve = purity_curve_params(&s)?;
    let unitary = disentangler(&s, g)?;

    let physical = VirtualQubit::physical(0, n, tol)?;
    let qubit_a = physical.conjugated_by(&unitary, "written-side partner", tol)?;
    let tilde = tilde_ops(&s, n, tol)?;
    let qubit_b = tilde.conjugated_by(&unitary, format!("partner at g={g:.6}"), tol)?;
    let entanglement_purity = corr_state_single(psi_theta, &qubit_b).purity;

    Ok(PartnerPair {
        qubit_a,
        qubit_b,
        params: DisentanglerParams { curve, g, unitary },
        entanglement_purity,
    })
}

/// A located information capsule with the context needed to audit it and to
/// construct alternatives.
#[derive(Debug, Clone)]
pub struct Qic {
    /// The capsule triple.
    pub qubit: VirtualQubit,
    /// The single-qubit state carried by the capsule at θ = 0 (the write
    /// evolves it as `e^{-iθσ_z}` in the capsule's own frame).
    pub capsule_state: CVec,
    /// Rest factor of the factorized state.
    pub rest_state: CVec,
    /// Transformation `T` with `T|Ψ⟩ = |capsule⟩ ⊗ |rest⟩`; the capsule triple
    /// is the conjugation of the first physical qubit by `T`.
    pub transform: CMat,
    /// Single-qubit rotation aligning the write axis with ẑ (identity for ẑ).
    pub frame_rotation: CMat,
    /// Disentangler data; absent for product states, where the physical first
    /// qubit already confines the write.
    pub params: Option<DisentanglerParams>,
    /// First-qubit Schmidt weights of the input state (in the rotated frame).
    pub schmidt_probs: [f64; 2],
    /// Leftover Schmidt weight of the factorized state; zero up to numerical
    /// noise when the construction succeeded.
    pub residual_weight: f64,
}

/// Locates an information capsule for `psi` and a write about `axis` on the
/// first qubit.
///
/// Product states return the (frame-aligned) physical first qubit. Entangled
/// states go through the disentangler at `g = d/4`, where the partner purity
/// curve reaches 1 and the conjugated first-qubit triple confines the write.
pub fn find_qic(psi: &StateVector, axis: [f64; 3], tol: &Tolerances) -> Result<Qic> {
    let n = psi.n_qubits();
    let rotation = axis_frame_rotation(axis)?;
    let rotated = psi.apply_one_qubit(&rotation.adjoint(), 0)?;
    let s = schmidt_first_qubit(&rotated, tol);
    let frame_embed_dag = embed(&rotation.adjoint(), 0, n)?;

    if s.rank < 2 {
        // Already a product across the cut: the frame-aligned physical qubit
        // confines trivially.
        let sigmas = crate::pauli::sigma_triple();
        let mut ops = Vec::with_capacity(3);
        for sigma in &sigmas {
            let aligned = rotation.matmul(&sigma.matmul(&rotation.adjoint()));
            ops.push(embed(&aligned, 0, n)?);
        }
        let qubit = VirtualQubit::new(
            n,
            [ops[0].clone(), ops[1].clone(), ops[2].clone()],
            "physical capsule",
            tol,
        )?;
        return Ok(Qic {
            qubit,
            capsule_state: s.first_factors[0].clone(),
            rest_state: s.rest_factors[0].clone(),
            transform: frame_embed_dag,
            frame_rotation: rotation,
            params: None,
            schmidt_probs: s.probs,
            residual_weight: s.probs[1],
        });
    }

    let curve = purity_curve_params(&s)?;
    let g = curve.capsule_g();
    let unitary = disentangler(&s, g)?;
    let transform = unitary.matmul(&frame_embed_dag);

    let physical = VirtualQubit::physical(0, n, tol)?;
    let qubit = physical.conjugated_by(&transform, "information capsule", tol)?;

    let factorized = rotated.apply_matrix(&unitary);
    let split = schmidt_first_qubit(&factorized, tol);

    Ok(Qic {
        qubit,
        capsule_state: split.first_factors[0].clone(),
        rest_state: split.rest_factors[0].clone(),
        transform,
        frame_rotation: rotation,
        params: Some(DisentanglerParams { curve, g, unitary }),
        schmidt_probs: s.probs,
        residual_weight: split.probs[1],
    })
}

/// Purity and Bloch agreement of a capsule over a θ grid.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ConfinementReport {
    pub min_purity: f64,
    pub max_bloch_deviation: f64,
}

/// Checks confinement of a state family against the expected written capsule
/// state, over the given θ grid.
pub fn confinement_over_grid<F>(
    family: F,
    qubit: &VirtualQubit,
    capsule_state: &CVec,
    thetas: &[f64],
) -> Result<ConfinementReport>
where
    F: Fn(f64) -> Result<StateVector>,
{
    let mut min_purity = f64::INFINITY;
    let mut max_dev: f64 = 0.0;
    for &theta in thetas {
        let state = family(theta)?;
        let corr = corr_state_single(&state, qubit);
        min_purity = min_purity.min(corr.purity);
        let expected = written_qubit_bloch(capsule_state, theta);
        let got = corr.bloch();
        for i in 0..3 {
            max_dev = max_dev.max((expected[i] - got[i]).abs());
        }
    }
    Ok(ConfinementReport {
        min_purity,
        max_bloch_deviation: max_dev,
    })
}

/// Full capsule audit: algebra, generator match, confinement over the θ grid,
/// and the Fisher residual after a swap extraction.
#[derive(Debug, Clone, serde::Serialize)]
pub struct QicCriteria {
    pub verify: VerifyReport,
    pub algebra_ok: bool,
    /// `‖Q_z − embed(n·σ, 0, N)‖_max`.
    pub generator_residual: f64,
    pub confinement: ConfinementReport,
    /// Post-swap Fisher information left outside the readout.
    pub residual_fisher: f64,
    pub passes: bool,
}

/// Probe angle used for the extraction leg of the audit.
pub const CRITERIA_PROBE_THETA: f64 = 0.3;

/// Runs the four capsule criteria for `qic` on the pre-write state `psi`.
pub fn check_qic_criteria(
    psi: &StateVector,
    axis: [f64; 3],
    qic: &Qic,
    tol: &Tolerances,
) -> Result<QicCriteria> {
    let n = psi.n_qubits();
    let verify = verify_virtual_qubit(&qic.qubit)?;
    let algebra_ok = verify.passes(tol);

    let target = embed(&axis_generator(axis), 0, n)?;
    let generator_residual = qic.qubit.z().max_abs_diff(&target);

    let thetas = theta_grid();
    let family = |theta: f64| apply_write(psi, &WriteOp::new(theta, axis, 0)?);
    let confinement = confinement_over_grid(family, &qic.qubit, &qic.capsule_state, &thetas)?;

    let probe = WriteOp::new(CRITERIA_PROBE_THETA, axis, 0)?;
    let extraction = extract(psi, &probe, &qic.qubit, &CVec::basis(2, 0), tol)?;
    let residual_fisher = extraction.residual_fisher;

    let passes = algebra_ok
        && generator_residual <= tol.alg
        && confinement.min_purity >= 1.0 - tol.pure
        && confinement.max_bloch_deviation <= tol.pure
        && residual_fisher.abs() <= tol.pure;

    Ok(QicCriteria {
        verify,
        algebra_ok,
        generator_residual,
        confinement,
        residual_fisher,
        passes,
    })
}

/// Result of asking for a maximally entangled partner pair.
#[derive(Debug, Clone)]
pub enum MaxEntanglement {
    /// Pair at `g = (d+π)/4`, both sides maximally mixed.
    Pair(Box<PartnerPair>),
    /// The write generator has nonzero expectation; the best reachable
    /// partner purity is `min_purity` (= the curve offset `a`).
    NotPossible {
        generator_expectation: f64,
        min_purity: f64,
    },
}

/// Maximally entangled partners exist iff the write-generator expectation
/// vanishes; then the bottom of the purity curve reaches 1/2.
pub fn max_entangled_partner(psi_theta: &StateVector, tol: &Tolerances) -> Result<MaxEntanglement> {
    let s = schmidt_first_qubit(psi_theta, tol);
    let curve = purity_curve_params(&s)?;
    let gen_state = psi_theta.apply_one_qubit(&crate::pauli::sigma_z(), 0)?;
    let expectation = psi_theta.amps().inner(gen_state.amps()).re;

    if expectation.abs() <= tol.max_ent {
        let pair = build_partner_family(psi_theta, curve.min_purity_g(), tol)?;
        Ok(MaxEntanglement::Pair(Box::new(pair)))
    } else {
        Ok(MaxEntanglement::NotPossible {
            generator_expectation: expectation,
            min_purity: curve.a,
        })
    }
}

/// Witness for the non-uniqueness of capsules: an involution on the rest
/// factor producing an inequivalent capsule.
#[derive(Debug, Clone)]
pub struct InequivWitness {
    /// Hermitian involution `O` on the N−1 rest qubits fixing the rest state.
    pub involution: CMat,
    pub alt_qic: VirtualQubit,
}

/// Builds the capsule triple `{T†(σ_x⊗O)T, T†(σ_y⊗O)T, T†(σ_z⊗I)T}` for any
/// involution `O` fixing the rest factor of the factorized state.
pub fn qic_with_involution(
    transform: &CMat,
    involution: &CMat,
    n_qubits: usize,
    tol: &Tolerances,
) -> Result<VirtualQubit> {
    let rest_dim = 1usize << (n_qubits - 1);
    if involution.rows() != rest_dim || involution.cols() != rest_dim {
        return Err(Error::DimensionMismatch(format!(
            "involution is {}x{} but the rest space has dimension {rest_dim}",
            involution.rows(),
            involution.cols()
        )));
    }
    let sigmas = crate::pauli::sigma_triple();
    let ops = [
        tensor(&sigmas[0], involution)?.conjugated_by(transform),
        tensor(&sigmas[1], involution)?.conjugated_by(transform),
        tensor(&sigmas[2], &CMat::identity(rest_dim))?.conjugated_by(transform),
    ];
    VirtualQubit::new(n_qubits, ops, "alternate capsule", tol)
}

/// Constructs an inequivalent capsule from a located one using the default
/// involution `O = 2|rest⟩⟨rest| − I`.
pub fn alternate_qic(qic: &Qic, tol: &Tolerances) -> Result<InequivWitness> {
    let n = qic.qubit.n_qubits();
    if n < 2 {
        return Err(Error::NoComplement);
    }
    let rest = qic.rest_state.normalized();
    let rest_dim = rest.dim();
    let involution = rest
        .outer(&rest)
        .scaled(Complex64::new(2.0, 0.0))
        .sub(&CMat::identity(rest_dim));
    let alt_qic = qic_with_involution(&qic.transform, &involution, n, tol)?;
    Ok(InequivWitness {
        involution,
        alt_qic,
    })
}

/// The worked three-qubit example: the Hadamard-basis GHZ state, the explicit
/// factorizing unitary, and its two exchange-related capsules.
#[derive(Debug, Clone)]
pub struct GhzFixture {
    pub state: StateVector,
    /// `U = I⊗|+⟩⟨+|⊗I + σ_z⊗|−⟩⟨−|⊗I`, mapping the written GHZ state to
    /// `w(θ)|+⟩ ⊗ (|++⟩+|−−⟩)/√2`.
    pub factorizing_unitary: CMat,
    /// `{σ_x⊗σ_x⊗I, σ_y⊗σ_x⊗I, σ_z⊗I⊗I}`.
    pub qic1: VirtualQubit,
    /// `{σ_x⊗I⊗σ_x, σ_y⊗I⊗σ_x, σ_z⊗I⊗I}`.
    pub qic2: VirtualQubit,
}

/// Builds the GHZ fixture with exact matrix entries.
pub fn ghz_fixture(tol: &Tolerances) -> Result<GhzFixture> {
    let one = Complex64::new(1.0, 0.0);
    let string_triple = |labels: [&str; 3]| -> Result<[CMat; 3]> {
        Ok([
            PauliString::parse(labels[0], one)?.materialize(),
            PauliString::parse(labels[1], one)?.materialize(),
            PauliString::parse(labels[2], one)?.materialize(),
        ])
    };
    let qic1 = VirtualQubit::new(
        3,
        string_triple(["XXI", "YXI", "ZII"])?,
        "ghz capsule 1",
        tol,
    )?;
    let qic2 = VirtualQubit::new(
        3,
        string_triple(["XIX", "YIX", "ZII"])?,
        "ghz capsule 2",
        tol,
    )?;

    let half = Complex64::new(0.5, 0.0);
    let plus_proj = CMat::new(2, 2, vec![half, half, half, half]);
    let minus_proj = CMat::new(2, 2, vec![half, -half, -half, half]);
    let id2 = CMat::identity(2);
    let factorizing_unitary = tensor(&tensor(&id2, &plus_proj)?, &id2)?.add(&tensor(
        &tensor(&crate::pauli::sigma_z(), &minus_proj)?,
        &id2,
    )?);

    Ok(GhzFixture {
        state: StateVector::ghz(),
        factorizing_unitary,
        qic1,
        qic2,
    })
}
