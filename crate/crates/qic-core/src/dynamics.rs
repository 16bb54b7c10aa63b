//! Hamiltonian evolution and capsule tracking.
//!
//! A capsule located for the written state stays a capsule under evolution:
//! conjugating its triple as `Σ_i(t) = e^{-iHt} Σ_i e^{iHt}` keeps every
//! expectation value `⟨Ψ(θ,t)|Σ_i(t)|Ψ(θ,t)⟩` equal to its t = 0 value. Note
//! the sign: this is the time-reversed counterpart of standard Heisenberg
//! operators `e^{iHt} Σ e^{-iHt}`, which would instead undo the state's
//! evolution. The Pauli-weight profile of the evolved triple tracks how far
//! the carrier of the information has spread.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Tolerances;
use crate::corr::VirtualQubit;
use crate::error::{Error, Result};
use crate::info::{pure_state_fisher_fd, WriteOp};
use crate::linalg::{herm_eig, CMat};
use crate::pauli::{enumerate_strings, Pauli, PauliString};
use crate::qubit::StateVector;

/// A Hamiltonian as a real-weighted Pauli-string sum.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    n_qubits: usize,
    terms: Vec<PauliString>,
}

impl HamiltonianSpec {
    pub fn new(n_qubits: usize, terms: Vec<PauliString>) -> Result<Self> {
        for term in &terms {
            if term.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch(format!(
                    "term {} has {} letters, expected {n_qubits}",
                    term.label(),
                    term.n_qubits()
                )));
            }
            if term.coeff().im.abs() > 1e-12 {
                return Err(Error::InvalidState(format!(
                    "Hamiltonian term {} has a complex coefficient",
                    term.label()
                )));
            }
        }
        Ok(Self { n_qubits, terms })
    }

    /// Convenience constructor from `(coefficient, label)` pairs.
    pub fn from_labels(n_qubits: usize, terms: &[(f64, &str)]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|(coeff, label)| PauliString::parse(label, Complex64::new(*coeff, 0.0)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_qubits, parsed)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    /// Dense matrix form.
    pub fn materialize(&self) -> CMat {
        let dim = 1usize << self.n_qubits;
        let mut h = CMat::zeros(dim, dim);
        for term in &self.terms {
            for col in 0..dim {
                let (row, phase) = term.basis_action(col);
                let val = h.get(row, col) + phase;
                h.set(row, col, val);
            }
        }
        h
    }

    /// Open-boundary Ising chain in a transverse field:
    /// `J Σ Z_i Z_{i+1} + h_x Σ X_i`.
    pub fn transverse_field_ising(n_qubits: usize, j: f64, hx: f64) -> Result<Self> {
        let mut terms = Vec::new();
        for i in 0..n_qubits.saturating_sub(1) {
            terms.push(two_site_string(n_qubits, i, Pauli::Z, i + 1, Pauli::Z, j));
        }
        for i in 0..n_qubits {
            terms.push(one_site_string(n_qubits, i, Pauli::X, hx));
        }
        Self::new(n_qubits, terms)
    }

    /// Open-boundary XXZ chain: `J Σ (X_iX_{i+1} + Y_iY_{i+1}) + Δ Σ Z_iZ_{i+1}`.
    pub fn heisenberg_xxz(n_qubits: usize, j: f64, delta: f64) -> Result<Self> {
        let mut terms = Vec::new();
        for i in 0..n_qubits.saturating_sub(1) {
            terms.push(two_site_string(n_qubits, i, Pauli::X, i + 1, Pauli::X, j));
            terms.push(two_site_string(n_qubits, i, Pauli::Y, i + 1, Pauli::Y, j));
            terms.push(two_site_string(
                n_qubits,
                i,
                Pauli::Z,
                i + 1,
                Pauli::Z,
                delta,
            ));
        }
        Self::new(n_qubits, terms)
    }

    /// Seeded dense 2-local model: uniform random coefficients on every one-
    /// and two-site Pauli term.
    pub fn random_two_local(n_qubits: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let letters = [Pauli::X, Pauli::Y, Pauli::Z];
        let mut terms = Vec::new();
        for i in 0..n_qubits {
            for p in letters {
                terms.push(one_site_string(n_qubits, i, p, rng.gen_range(-1.0..1.0)));
            }
        }
        for i in 0..n_qubits {
            for j in (i + 1)..n_qubits {
                for pi in letters {
                    for pj in letters {
                        terms.push(two_site_string(
                            n_qubits,
                            i,
                            pi,
                            j,
                            pj,
                            rng.gen_range(-1.0..1.0),
                        ));
                    }
                }
            }
        }
        Self::new(n_qubits, terms)
    }
}

fn one_site_string(n: usize, site: usize, p: Pauli, coeff: f64) -> PauliString {
    let mut letters = vec![Pauli::I; n];
    letters[site] = p;
    PauliString::new(letters, Complex64::new(coeff, 0.0))
}

fn two_site_string(n: usize, a: usize, pa: Pauli, b: usize, pb: Pauli, coeff: f64) -> PauliString {
    let mut letters = vec![Pauli::I; n];
    letters[a] = pa;
    letters[b] = pb;
    PauliString::new(letters, Complex64::new(coeff, 0.0))
}

/// Eigendecomposed Hamiltonian, reusable across times.
pub struct Propagator {
    vectors: CMat,
    vectors_dag: CMat,
    energies: Vec<f64>,
}

impl Propagator {
    pub fn new(h: &HamiltonianSpec, tol: &Tolerances) -> Result<Self> {
        let (energies, vectors) = herm_eig(&h.materialize(), tol)?;
        let vectors_dag = vectors.adjoint();
        Ok(Self {
            vectors,
            vectors_dag,
            energies,
        })
    }

    /// `e^{-iHt}` as a dense matrix.
    pub fn matrix(&self, t: f64) -> CMat {
        let n = self.energies.len();
        let mut scaled = self.vectors.clone();
        for (j, energy) in self.energies.iter().enumerate() {
            let phase = Complex64::new(0.0, -energy * t).exp();
            for i in 0..n {
                let v = scaled.get(i, j) * phase;
                scaled.set(i, j, v);
            }
        }
        scaled.matmul(&self.vectors_dag)
    }

    /// `e^{-iHt}|ψ⟩` in O(dim²).
    pub fn evolve(&self, psi: &StateVector, t: f64) -> StateVector {
        let mut coeffs = self.vectors_dag.matvec(psi.amps());
        for (k, energy) in self.energies.iter().enumerate() {
            coeffs.entries_mut()[k] *= Complex64::new(0.0, -energy * t).exp();
        }
        StateVector::normalized(psi.n_qubits(), self.vectors.matvec(&coeffs))
            .expect("unitary evolution preserves the norm")
    }
}

/// `e^{-iHt}|ψ⟩` via full eigendecomposition.
pub fn evolve_state(
    psi: &StateVector,
    h: &HamiltonianSpec,
    t: f64,
    tol: &Tolerances,
) -> Result<StateVector> {
    if h.n_qubits() != psi.n_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian acts on {} qubits, state has {}",
            h.n_qubits(),
            psi.n_qubits()
        )));
    }
    Ok(Propagator::new(h, tol)?.evolve(psi, t))
}

/// A capsule triple carried along the evolution.
#[derive(Debug, Clone)]
pub struct EvolvedQic {
    pub base: VirtualQubit,
    pub time: f64,
    /// `Σ_i(t) = e^{-iHt} Σ_i e^{iHt}`, re-verified.
    pub evolved: VirtualQubit,
    /// Squared Pauli-expansion mass per weight class, summed over the three
    /// components; entries 0..=N, total 3.
    pub weight_profile: Vec<f64>,
}

/// Conjugates the triple to time `t` and profiles its spreading.
pub fn evolve_qic(
    q: &VirtualQubit,
    h: &HamiltonianSpec,
    t: f64,
    tol: &Tolerances,
) -> Result<EvolvedQic> {
    if h.n_qubits() != q.n_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian acts on {} qubits, triple on {}",
            h.n_qubits(),
            q.n_qubits()
        )));
    }
    // Σ(t) = e^{-iHt} Σ e^{iHt} = U† Σ U with U = e^{iHt}.
    let backward = Propagator::new(h, tol)?.matrix(-t);
    let evolved = q.conjugated_by(&backward, format!("{} @ t={t}", q.label()), tol)?;
    let weight_profile = triple_weight_profile(&evolved);
    Ok(EvolvedQic {
        base: q.clone(),
        time: t,
        evolved,
        weight_profile,
    })
}

/// Pauli-weight profile of a triple: for each component, expand in the
/// orthonormal Pauli-string basis, bucket squared coefficients by the number
/// of non-identity letters, and normalize each component to unit mass.
pub fn triple_weight_profile(q: &VirtualQubit) -> Vec<f64> {
    let n = q.n_qubits();
    let mut profile = vec![0.0; n + 1];
    for op in q.ops() {
        let mut buckets = vec![0.0; n + 1];
        for string in enumerate_strings(n) {
            let coeff = string.expansion_coeff(op);
            buckets[string.weight()] += coeff.norm_sqr();
        }
        let mass: f64 = buckets.iter().sum();
        for (slot, bucket) in profile.iter_mut().zip(&buckets) {
            *slot += bucket / mass;
        }
    }
    profile
}

/// Mean Pauli weight of a profile produced by [`triple_weight_profile`].
pub fn mean_weight(profile: &[f64]) -> f64 {
    let total: f64 = profile.iter().sum();
    profile
        .iter()
        .enumerate()
        .map(|(w, mass)| w as f64 * mass)
        .sum::<f64>()
        / total
}

/// Fisher information of the evolved write family at each requested time.
///
/// The family is `θ ↦ e^{-iHt} W(θ)|ψ⟩`; unitarity of the evolution makes the
/// value time-independent, which callers can assert.
pub fn fisher_conservation(
    psi: &StateVector,
    w: &WriteOp,
    h: &HamiltonianSpec,
    times: &[f64],
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    let propagator = Propagator::new(h, tol)?;
    let mut values = Vec::with_capacity(times.len());
    for &t in times {
        let family = |theta: f64| -> Result<StateVector> {
            let written = crate::info::apply_write(psi, &w.at(theta))?;
            Ok(propagator.evolve(&written, t))
        };
        values.push(pure_state_fisher_fd(
            &family,
            w.theta(),
            crate::config::FISHER_FD_STEP,
        )?);
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::theta_grid;
    use crate::info::apply_write;
    use crate::linalg::CVec;
    use crate::qic::{confinement_over_grid, find_qic, ghz_fixture};
    use crate::qubit::haar_random_state;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn rejects_mismatched_term_length() {
        assert!(HamiltonianSpec::from_labels(3, &[(1.0, "ZZ")]).is_err());
    }

    #[test]
    fn evolution_at_time_zero_is_identity() {
        let psi = haar_random_state(3, 2);
        let h = HamiltonianSpec::transverse_field_ising(3, 1.0, 0.5).unwrap();
        let evolved = evolve_state(&psi, &h, 0.0, &tol()).unwrap();
        assert!(evolved.amps().max_abs_diff(psi.amps()) < 1e-12);
    }

    #[test]
    fn single_qubit_phase_evolution_closed_form() {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::normalized(1, CVec::new(vec![c(inv, 0.), c(inv, 0.)])).unwrap();
        let h = HamiltonianSpec::from_labels(1, &[(1.0, "Z")]).unwrap();
        let t = 0.83;
        let evolved = evolve_state(&plus, &h, t, &tol()).unwrap();
        let expect = CVec::new(vec![
            c(0.0, -t).exp() * c(inv, 0.0),
            c(0.0, t).exp() * c(inv, 0.0),
        ]);
        assert!(evolved.amps().max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn evolution_composes_as_a_group() {
        let psi = haar_random_state(3, 9);
        let h = HamiltonianSpec::random_two_local(3, 77).unwrap();
        let one = evolve_state(&psi, &h, 0.6, &tol()).unwrap();
        let two = evolve_state(&one, &h, 0.9, &tol()).unwrap();
        let direct = evolve_state(&psi, &h, 1.5, &tol()).unwrap();
        assert!(two.amps().max_abs_diff(direct.amps()) < 1e-9);
    }

    #[test]
    fn evolved_triple_at_time_zero_is_the_base() {
        let fixture = ghz_fixture(&tol()).unwrap();
        let h = HamiltonianSpec::transverse_field_ising(3, 1.0, 0.5).unwrap();
        let evolved = evolve_qic(&fixture.qic1, &h, 0.0, &tol()).unwrap();
        for i in 0..3 {
            assert!(evolved.evolved.ops()[i].max_abs_diff(&fixture.qic1.ops()[i]) < 1e-10);
        }
    }

    #[test]
    fn commuting_hamiltonian_freezes_the_triple() {
        // H acts only on the second qubit; the first physical qubit's triple
        // commutes with it termwise.
        let q = VirtualQubit::physical(0, 2, &tol()).unwrap();
        let h = HamiltonianSpec::from_labels(2, &[(0.8, "IZ"), (0.3, "IX")]).unwrap();
        let evolved = evolve_qic(&q, &h, 1.7, &tol()).unwrap();
        for i in 0..3 {
            assert!(evolved.evolved.ops()[i].max_abs_diff(&q.ops()[i]) < 1e-10);
        }
    }

    #[test]
    fn evolved_ghz_capsule_still_confines() {
        let fixture = ghz_fixture(&tol()).unwrap();
        let h = HamiltonianSpec::transverse_field_ising(3, 1.0, 0.5).unwrap();
        let t = 1.0;
        let evolved = evolve_qic(&fixture.qic1, &h, t, &tol()).unwrap();

        let propagator = Propagator::new(&h, &tol()).unwrap();
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let capsule = CVec::new(vec![c(inv, 0.), c(inv, 0.)]);
        let family = |theta: f64| -> crate::error::Result<StateVector> {
            let written = apply_write(&fixture.state, &WriteOp::z_write(theta))?;
            Ok(propagator.evolve(&written, t))
        };
        let report =
            confinement_over_grid(family, &evolved.evolved, &capsule, &theta_grid()).unwrap();
        assert!(report.min_purity >= 1.0 - 1e-8, "{report:?}");
        assert!(report.max_bloch_deviation <= 1e-8, "{report:?}");
    }

    #[test]
    fn evolved_spectra_are_preserved() {
        let psi = haar_random_state(3, 31);
        let qic = find_qic(&psi, [0.0, 0.0, 1.0], &tol()).unwrap();
        let h = HamiltonianSpec::random_two_local(3, 5).unwrap();
        let evolved = evolve_qic(&qic.qubit, &h, 0.8, &tol()).unwrap();
        for op in evolved.evolved.ops() {
            let (values, _) = herm_eig(op, &tol()).unwrap();
            for (k, v) in values.iter().enumerate() {
                let expect = if k < 4 { 1.0 } else { -1.0 };
                assert!((v - expect).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn weight_profile_of_embedded_and_ghz_triples() {
        let q = VirtualQubit::physical(0, 3, &tol()).unwrap();
        let profile = triple_weight_profile(&q);
        assert!((profile[1] - 3.0).abs() < 1e-9);
        assert!(profile[0].abs() < 1e-12 && profile[2].abs() < 1e-12);

        let fixture = ghz_fixture(&tol()).unwrap();
        let ghz_profile = triple_weight_profile(&fixture.qic1);
        // Two components at weight 2, one at weight 1.
        assert!((ghz_profile[1] - 1.0).abs() < 1e-9);
        assert!((ghz_profile[2] - 2.0).abs() < 1e-9);
        let total: f64 = ghz_profile.iter().sum();
        assert!((total - 3.0).abs() < 1e-9);
        assert!((mean_weight(&ghz_profile) - 5.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn scrambling_spreads_the_profile() {
        // Reported trend, not a theorem: under a dense 2-local model the mean
        // weight of an initially local triple grows from its t = 0 value.
        let q = VirtualQubit::physical(0, 3, &tol()).unwrap();
        let h = HamiltonianSpec::random_two_local(3, 11).unwrap();
        let start = evolve_qic(&q, &h, 0.0, &tol()).unwrap();
        let later = evolve_qic(&q, &h, 2.0, &tol()).unwrap();
        assert!(mean_weight(&later.weight_profile) > mean_weight(&start.weight_profile));
    }

    #[test]
    fn fisher_is_conserved_under_evolution() {
        let psi = haar_random_state(4, 6);
        let w = WriteOp::z_write(0.4);
        let h = HamiltonianSpec::random_two_local(4, 3).unwrap();
        let times: Vec<f64> = (0..10).map(|k| k as f64 * 0.35).collect();
        let values = fisher_conservation(&psi, &w, &h, &times, &tol()).unwrap();
        let base = values[0];
        for v in &values {
            assert!((v - base).abs() < 1e-7, "drift {} at base {base}", v - base);
        }

        // Trivial Hamiltonian: exactly constant.
        let zero = HamiltonianSpec::new(4, vec![]).unwrap();
        let flat = fisher_conservation(&psi, &w, &zero, &[0.0, 1.0, 2.0], &tol()).unwrap();
        for v in &flat {
            assert!((v - base).abs() < 1e-7);
        }
    }

    #[test]
    fn ghz_fisher_stays_four_under_evolution() {
        let h = HamiltonianSpec::heisenberg_xxz(3, 1.0, 0.7).unwrap();
        let values = fisher_conservation(
            &StateVector::ghz(),
            &WriteOp::z_write(0.3),
            &h,
            &[0.0, 1.0, 2.0],
            &tol(),
        )
        .unwrap();
        for v in values {
            assert!((v - 4.0).abs() < 1e-6);
        }
    }
}
