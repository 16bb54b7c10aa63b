//! N-qubit states, operator embedding, first-qubit Schmidt decomposition,
//! reduced density matrices and seeded Haar sampling.
//!
//! Qubit 0 is the most significant bit of the computational-basis index, so
//! `embed(op, 0, n)` is `op ⊗ I^{⊗n−1}` and the "first qubit" receiving write
//! operations is the leftmost tensor factor.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{svd, tensor, CMat, CVec};

/// Normalized pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: CVec,
}

impl StateVector {
    /// Builds a state from amplitudes, requiring unit norm within `tol.norm`.
    pub fn new(n_qubits: usize, amps: CVec, tol: &Tolerances) -> Result<Self> {
        let dim = 1usize
            .checked_shl(n_qubits as u32)
            .ok_or(Error::InvalidState(format!("{n_qubits} qubits overflow")))?;
        if amps.dim() != dim {
            return Err(Error::InvalidState(format!(
                "expected {dim} amplitudes for {n_qubits} qubits, got {}",
                amps.dim()
            )));
        }
        if !amps.is_finite() {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > tol.norm {
            return Err(Error::InvalidState(format!(
                "norm {norm} deviates from 1 beyond {:.1e}",
                tol.norm
            )));
        }
        Ok(Self {
            n_qubits,
            amps: amps.normalized(),
        })
    }

    /// Builds a state from amplitudes, rescaling whatever norm they have.
    pub fn normalized(n_qubits: usize, amps: CVec) -> Result<Self> {
        if amps.dim() != 1usize << n_qubits {
            return Err(Error::InvalidState(format!(
                "expected {} amplitudes for {n_qubits} qubits, got {}",
                1usize << n_qubits,
                amps.dim()
            )));
        }
        if !amps.is_finite() || amps.norm() == 0.0 {
            return Err(Error::InvalidState(
                "amplitudes must be finite and not all zero".into(),
            ));
        }
        Ok(Self {
            n_qubits,
            amps: amps.normalized(),
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        Self {
            n_qubits,
            amps: CVec::basis(1 << n_qubits, index),
        }
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn bell() -> Self {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = CVec::zeros(4);
        amps.entries_mut()[0] = Complex64::new(inv, 0.0);
        amps.entries_mut()[3] = Complex64::new(inv, 0.0);
        Self { n_qubits: 2, amps }
    }

    /// Three-qubit GHZ state in the Hadamard basis:
    /// `(|+++⟩ + |−−−⟩)/√2`.
    pub fn ghz() -> Self {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let plus = CVec::new(vec![Complex64::new(inv, 0.0), Complex64::new(inv, 0.0)]);
        let minus = CVec::new(vec![Complex64::new(inv, 0.0), Complex64::new(-inv, 0.0)]);
        let ppp = plus.tensor(&plus).tensor(&plus);
        let mmm = minus.tensor(&minus).tensor(&minus);
        let amps = ppp.add(&mmm).scaled(Complex64::new(inv, 0.0));
        Self { n_qubits: 3, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.dim()
    }

    pub fn amps(&self) -> &CVec {
        &self.amps
    }

    /// `⟨self|op|self⟩`.
    pub fn expectation(&self, op: &CMat) -> Complex64 {
        self.amps.inner(&op.matvec(&self.amps))
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &StateVector) -> Complex64 {
        self.amps.inner(&other.amps)
    }

    /// Applies a full-dimension operator (assumed norm-preserving).
    pub fn apply_matrix(&self, op: &CMat) -> StateVector {
        assert_eq!(op.cols(), self.dim(), "operator/state dimension mismatch");
        StateVector {
            n_qubits: self.n_qubits,
            amps: op.matvec(&self.amps),
        }
    }

    /// Applies a 2×2 operator to one site without materializing the embedding.
    pub fn apply_one_qubit(&self, op: &CMat, site: usize) -> Result<StateVector> {
        if site >= self.n_qubits {
            return Err(Error::SiteOutOfRange {
                site,
                n_qubits: self.n_qubits,
            });
        }
        assert_eq!((op.rows(), op.cols()), (2, 2));
        let mask = 1usize << (self.n_qubits - 1 - site);
        let mut out = self.amps.clone();
        let entries = out.entries_mut();
        for i0 in 0..self.dim() {
            if i0 & mask != 0 {
                continue;
            }
            let i1 = i0 | mask;
            let a = self.amps[i0];
            let b = self.amps[i1];
            entries[i0] = op.get(0, 0) * a + op.get(0, 1) * b;
            entries[i1] = op.get(1, 0) * a + op.get(1, 1) * b;
        }
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amps: out,
        })
    }

    /// Density matrix `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> CMat {
        self.amps.outer(&self.amps)
    }
}

/// First-qubit-vs-rest Schmidt decomposition of a pure state.
///
/// `|Ψ⟩ = Σ_i √(probs[i]) |first_factors[i]⟩ ⊗ |rest_factors[i]⟩` with the
/// factor pairs phase-fixed so the largest-modulus entry of each first factor
/// is real positive.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    /// Schmidt weights, descending; they sum to 1.
    pub probs: [f64; 2],
    /// Single-qubit factors (dimension 2), orthonormal.
    pub first_factors: [CVec; 2],
    /// Rest factors (dimension 2^{N−1}), orthonormal.
    pub rest_factors: [CVec; 2],
    /// Unit-modulus phases of `⟨0|first_factors[i]⟩` (1 when that overlap
    /// vanishes).
    pub phases: [Complex64; 2],
    /// Number of weights above the rank threshold (1 or 2).
    pub rank: usize,
}

impl SchmidtData {
    /// Reassembles the state from the decomposition.
    pub fn reconstruct(&self) -> CVec {
        let mut out = CVec::zeros(2 * self.rest_factors[0].dim());
        for i in 0..2 {
            let weighted = self.first_factors[i]
                .tensor(&self.rest_factors[i])
                .scaled(Complex64::new(self.probs[i].sqrt(), 0.0));
            out = out.add(&weighted);
        }
        out
    }

    /// `|⟨0|first_factors[0]⟩|²`, the overlap parameter of the purity curve.
    pub fn first_overlap_sqr(&self) -> f64 {
        self.first_factors[0][0].norm_sqr()
    }
}

/// Schmidt decomposition across the first-qubit / rest cut.
pub fn schmidt_first_qubit(psi: &StateVector, tol: &Tolerances) -> SchmidtData {
    let rest_dim = psi.dim() / 2;
    let coeff = CMat::from_fn(2, rest_dim, |a, b| psi.amps()[a * rest_dim + b]);
    let (u, s, v) = svd(&coeff).expect("schmidt SVD failed to converge");

    let mut first = Vec::with_capacity(2);
    let mut rest = Vec::with_capacity(2);
    let mut probs = [0.0f64; 2];
    for i in 0..2 {
        if i < s.len() {
            probs[i] = s[i] * s[i];
            first.push(CVec::new(vec![u.get(0, i), u.get(1, i)]));
            rest.push(CVec::new(
                (0..rest_dim).map(|b| v.get(b, i).conj()).collect(),
            ));
        } else {
            // Single-column SVD (N = 1): complete the qubit factor and pad the
            // one-dimensional rest factor with zero.
            let phi0 = &first[0];
            first.push(CVec::new(vec![-phi0[1].conj(), phi0[0].conj()]));
            rest.push(CVec::zeros(rest_dim));
        }
    }

    // Phase convention: rotate each pair so the largest-modulus entry of the
    // first factor is real positive.
    for i in 0..2 {
        let phi = &first[i];
        let pick = if phi[0].norm() >= phi[1].norm() { 0 } else { 1 };
        let mag = phi[pick].norm();
        if mag > tol.rank {
            let phase = phi[pick] / Complex64::new(mag, 0.0);
            first[i] = phi.scaled(phase.conj());
            rest[i] = rest[i].scaled(phase);
        }
    }

    let phases = [
        phase_of_overlap(&first[0], tol),
        phase_of_overlap(&first[1], tol),
    ];
    let rank = probs.iter().filter(|&&p| p > tol.rank).count();

    SchmidtData {
        probs,
        first_factors: [first[0].clone(), first[1].clone()],
        rest_factors: [rest[0].clone(), rest[1].clone()],
        phases,
        rank,
    }
}

fn phase_of_overlap(phi: &CVec, tol: &Tolerances) -> Complex64 {
    let overlap = phi[0];
    if overlap.norm() > tol.rank {
        overlap / Complex64::new(overlap.norm(), 0.0)
    } else {
        Complex64::new(1.0, 0.0)
    }
}

/// `I^{⊗site} ⊗ op ⊗ I^{⊗n−site−1}` for a 2×2 operator.
pub fn embed(op: &CMat, site: usize, n: usize) -> Result<CMat> {
    if site >= n {
        return Err(Error::SiteOutOfRange { site, n_qubits: n });
    }
    assert_eq!(
        (op.rows(), op.cols()),
        (2, 2),
        "embed expects a 2x2 operator"
    );
    let left = tensor(&CMat::identity(1 << site), op)?;
    tensor(&left, &CMat::identity(1 << (n - site - 1)))
}

/// Reduced density matrix over the `keep` sites (ascending site order in the
/// result's index).
pub fn reduced_density(psi: &StateVector, keep: &[usize]) -> Result<CMat> {
    let n = psi.n_qubits();
    let mut keep_sorted: Vec<usize> = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    if let Some(&bad) = keep_sorted.iter().find(|&&s| s >= n) {
        return Err(Error::SiteOutOfRange {
            site: bad,
            n_qubits: n,
        });
    }
    let traced: Vec<usize> = (0..n).filter(|s| !keep_sorted.contains(s)).collect();
    let dk = 1usize << keep_sorted.len();
    let dt = 1usize << traced.len();

    let compose = |cfg: usize, sites: &[usize], base: usize| -> usize {
        let mut idx = base;
        for (pos, &site) in sites.iter().enumerate() {
            let bit = (cfg >> (sites.len() - 1 - pos)) & 1;
            idx |= bit << (n - 1 - site);
        }
        idx
    };

    let mut rho = CMat::zeros(dk, dk);
    for tc in 0..dt {
        let base = compose(tc, &traced, 0);
        for ka in 0..dk {
            let ia = compose(ka, &keep_sorted, base);
            let amp_a = psi.amps()[ia];
            if amp_a.re == 0.0 && amp_a.im == 0.0 {
                continue;
            }
            for kb in 0..dk {
                let ib = compose(kb, &keep_sorted, base);
                let val = rho.get(ka, kb) + amp_a * psi.amps()[ib].conj();
                rho.set(ka, kb, val);
            }
        }
    }
    Ok(rho)
}

/// Purity `Tr(ρ²)` of a density matrix.
pub fn purity(rho: &CMat) -> f64 {
    rho.hs_inner(rho).re
}

/// Seeded Haar-random pure state: complex Gaussian amplitudes, normalized.
pub fn haar_random_state(n_qubits: usize, seed: u64) -> StateVector {
    assert!(n_qubits >= 1, "need at least one qubit");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1usize << n_qubits;
    let mut amps = Vec::with_capacity(dim);
    for _ in 0..dim {
        let (re, im) = gaussian_pair(&mut rng);
        amps.push(Complex64::new(re, im));
    }
    StateVector::normalized(n_qubits, CVec::new(amps))
        .expect("Gaussian amplitudes are finite and nonzero")
}

// Box–Muller transform on ChaCha uniforms; avoids pulling in a distributions
// crate for a single sampler.
fn gaussian_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1: f64 = loop {
        let x = rng.gen::<f64>();
        if x > 0.0 {
            break x;
        }
    };
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let angle = 2.0 * std::f64::consts::PI * u2;
    (r * angle.cos(), r * angle.sin())
}
