//! Write operations, quantum Fisher information and swap-based extraction.
//!
//! A write `w(θ) = e^{-iθ n·σ}` on one site imprints a real parameter θ into
//! the state. The Fisher information `F = 4(⟨∂Ψ|∂Ψ⟩ − |⟨Ψ|∂Ψ⟩|²)` bounds the
//! precision with which θ can be estimated; for a unitary write family it
//! reduces to `4(1 − ⟨n·σ⟩²)` and is independent of θ. Extraction swaps a
//! virtual qubit's correlation-space state onto an external readout qubit and
//! audits how much information failed to transfer.

use num_complex::Complex64;

use crate::config::{Tolerances, FISHER_FD_STEP};
use crate::corr::{corr_state_single, VirtualQubit};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, tensor, CMat, CVec};
use crate::pauli::{sigma_triple, sigma_x, sigma_y, sigma_z};
use crate::qubit::{purity, reduced_density, StateVector};

/// A single-site unitary write `e^{-iθ n·σ}`.
#[derive(Debug, Clone)]
pub struct WriteOp {
    theta: f64,
    axis: [f64; 3],
    site: usize,
    matrix: CMat,
}

impl WriteOp {
    pub fn new(theta: f64, axis: [f64; 3], site: usize) -> Result<Self> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidAxis(format!(
                "axis norm {norm} deviates from 1 beyond 1e-12"
            )));
        }
        Ok(Self {
            theta,
            axis,
            site,
            matrix: rotation_matrix(theta, axis),
        })
    }

    /// Phase write about ẑ on the first qubit.
    pub fn z_write(theta: f64) -> Self {
        Self::new(theta, [0.0, 0.0, 1.0], 0).expect("ẑ is a unit vector")
    }

    /// Same axis and site, different angle.
    pub fn at(&self, theta: f64) -> Self {
        Self {
            theta,
            axis: self.axis,
            site: self.site,
            matrix: rotation_matrix(theta, self.axis),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn axis(&self) -> [f64; 3] {
        self.axis
    }

    pub fn site(&self) -> usize {
        self.site
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// The 2×2 generator `n·σ`.
    pub fn generator(&self) -> CMat {
        axis_generator(self.axis)
    }
}

/// `n·σ` for a real 3-vector.
pub fn axis_generator(axis: [f64; 3]) -> CMat {
    let mut g = CMat::zeros(2, 2);
    for (n, sigma) in axis.iter().zip(sigma_triple()) {
        g = g.add(&sigma.scaled(Complex64::new(*n, 0.0)));
    }
    g
}

// Closed form e^{-iθ n·σ} = cos θ · I − i sin θ · n·σ, exact because
// (n·σ)² = I for unit n.
fn rotation_matrix(theta: f64, axis: [f64; 3]) -> CMat {
    CMat::identity(2)
        .scaled(Complex64::new(theta.cos(), 0.0))
        .add(&axis_generator(axis).scaled(Complex64::new(0.0, -theta.sin())))
}

/// Single-qubit frame rotation `R` with `R σ_z R† = n·σ`, built from the
/// spherical angles of the axis. Returns the exact identity for `n = ẑ`.
pub fn axis_frame_rotation(axis: [f64; 3]) -> Result<CMat> {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidAxis(format!(
            "axis norm {norm} deviates from 1 beyond 1e-12"
        )));
    }
    let beta = axis[2].clamp(-1.0, 1.0).acos();
    let gamma = if axis[0] == 0.0 && axis[1] == 0.0 {
        0.0
    } else {
        axis[1].atan2(axis[0])
    };
    let c = Complex64::new;
    let rz = CMat::new(
        2,
        2,
        vec![
            c(0.0, -gamma / 2.0).exp(),
            c(0., 0.),
            c(0., 0.),
            c(0.0, gamma / 2.0).exp(),
        ],
    );
    let half = beta / 2.0;
    let ry = CMat::new(
        2,
        2,
        vec![
            c(half.cos(), 0.),
            c(-half.sin(), 0.),
            c(half.sin(), 0.),
            c(half.cos(), 0.),
        ],
    );
    Ok(rz.matmul(&ry))
}

/// Applies a write to a state.
pub fn apply_write(psi: &StateVector, w: &WriteOp) -> Result<StateVector> {
    psi.apply_one_qubit(w.matrix(), w.site())
}

/// Fisher information of the write family, analytic and finite-difference.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct FisherReport {
    /// `4(1 − ⟨n·σ⟩²)`, independent of θ.
    pub analytic: f64,
    /// Central differences of the defining formula at the report's θ.
    pub finite_diff: f64,
    /// `⟨n·σ⟩` at the write site.
    pub generator_expectation: f64,
}

/// Fisher information about θ carried by `W(θ)|ψ⟩`.
pub fn fisher_info(psi: &StateVector, w: &WriteOp) -> Result<FisherReport> {
    let gen_psi = psi.apply_one_qubit(&w.generator(), w.site())?;
    let expectation = psi.amps().inner(gen_psi.amps()).re;
    let analytic = 4.0 * (1.0 - expectation * expectation);

    let family = |theta: f64| -> Result<StateVector> { apply_write(psi, &w.at(theta)) };
    let finite_diff = pure_state_fisher_fd(&family, w.theta(), FISHER_FD_STEP)?;

    Ok(FisherReport {
        analytic,
        finite_diff,
        generator_expectation: expectation,
    })
}

/// Finite-difference Fisher information of any smooth pure-state family.
///
/// Central differences at `step` and `step/2` combined by one Richardson step
/// cancel the O(h²) truncation term.
pub fn pure_state_fisher_fd<F>(family: &F, theta: f64, step: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<StateVector>,
{
    let at = family(theta)?;
    let single = |h: f64| -> Result<f64> {
        let plus = family(theta + h)?;
        let minus = family(theta - h)?;
        let scale = Complex64::new(1.0 / (2.0 * h), 0.0);
        let deriv = plus.amps().sub(minus.amps()).scaled(scale);
        let term1 = deriv.norm_sqr();
        let term2 = at.amps().inner(&deriv).norm_sqr();
        Ok(4.0 * (term1 - term2))
    };
    let coarse = single(step)?;
    let fine = single(step / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Fisher information of a mixed-state family from the symmetric logarithmic
/// derivative: `F = 2 Σ_{kl} |⟨k|∂ρ|l⟩|² / (p_k + p_l)` over the spectral
/// decomposition of ρ(θ), with ∂ρ taken by Richardson-refined central
/// differences.
pub fn mixed_state_fisher<F>(family: &F, theta: f64, step: f64, tol: &Tolerances) -> Result<f64>
where
    F: Fn(f64) -> Result<CMat>,
{
    let rho = family(theta)?;
    let (values, vectors) = herm_eig(&rho, tol)?;
    let basis_dag = vectors.adjoint();

    let single = |h: f64| -> Result<f64> {
        let drho = family(theta + h)?
            .sub(&family(theta - h)?)
            .scaled(Complex64::new(1.0 / (2.0 * h), 0.0));
        let elems = basis_dag.matmul(&drho.matmul(&vectors));
        let mut fisher = 0.0;
        for k in 0..values.len() {
            for l in 0..values.len() {
                let weight = values[k].max(0.0) + values[l].max(0.0);
                if weight > 1e-12 {
                    fisher += 2.0 * elems.get(k, l).norm_sqr() / weight;
                }
            }
        }
        Ok(fisher)
    };
    let coarse = single(step)?;
    let fine = single(step / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Swap between a virtual qubit and one appended external qubit:
/// `U_swap = ½ Σ_μ Σ_μ ⊗ σ_μ` with `Σ_0 = I`.
pub fn swap_operator(q: &VirtualQubit) -> Result<CMat> {
    let dim = q.dim();
    let mut swap = tensor(&CMat::identity(dim), &CMat::identity(2))?;
    for (op, sigma) in q.ops().iter().zip(sigma_triple()) {
        swap = swap.add(&tensor(op, &sigma)?);
    }
    Ok(swap.scaled(Complex64::new(0.5, 0.0)))
}

/// Everything produced by one swap extraction.
#[derive(Debug, Clone)]
pub struct Extraction {
    /// Reduced state of the external readout qubit after the swap.
    pub readout: CMat,
    pub readout_bloch: [f64; 3],
    pub readout_purity: f64,
    /// Reduced state of the N system qubits after the swap.
    pub remainder: CMat,
    /// Post-swap Fisher information not captured by the readout qubit:
    /// F(post-swap family) − F(readout family). Zero when the virtual qubit
    /// confines the write.
    pub residual_fisher: f64,
    /// SLD Fisher information of the remainder family alone.
    pub remainder_fisher: f64,
    /// Minimum correlation-state purity of the virtual qubit over the θ grid.
    pub min_grid_purity: f64,
    /// True when the virtual qubit behaved as a capsule: confining purity
    /// across the grid and negligible residual Fisher information.
    pub capsule_ok: bool,
}

/// Swaps the virtual qubit's state onto an external qubit prepared in `chi0`
/// and audits the transfer.
///
/// `psi` is the pre-write state; the write `w` is applied internally so the
/// Fisher residuals can be taken with respect to θ. A failing capsule is
/// reported through `capsule_ok` and the residuals, not silently accepted.
pub fn extract(
    psi: &StateVector,
    w: &WriteOp,
    q: &VirtualQubit,
    chi0: &CVec,
    tol: &Tolerances,
) -> Result<Extraction> {
    if chi0.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "readout qubit state has dimension {}",
            chi0.dim()
        )));
    }
    if psi.dim() != q.dim() {
        return Err(Error::DimensionMismatch(
            "state and virtual qubit act on different spaces".into(),
        ));
    }
    let n = psi.n_qubits();
    let swap = swap_operator(q)?;
    let chi = chi0.normalized();

    let joint = |theta: f64| -> Result<StateVector> {
        let written = apply_write(psi, &w.at(theta))?;
        let product = StateVector::normalized(n + 1, written.amps().tensor(&chi))?;
        Ok(product.apply_matrix(&swap))
    };

    let step = FISHER_FD_STEP;
    let theta = w.theta();
    let post = joint(theta)?;

    let readout = reduced_density(&post, &[n])?;
    let system_sites: Vec<usize> = (0..n).collect();
    let remainder = reduced_density(&post, &system_sites)?;

    let readout_family = |th: f64| reduced_density(&joint(th)?, &[n]);
    let remainder_family = |th: f64| reduced_density(&joint(th)?, &system_sites);

    let total_fisher = pure_state_fisher_fd(&joint, theta, step)?;
    let readout_fisher = mixed_state_fisher(&readout_family, theta, step, tol)?;
    let remainder_fisher = mixed_state_fisher(&remainder_family, theta, step, tol)?;
    let residual_fisher = total_fisher - readout_fisher;

    let readout_purity = purity(&readout);
    let readout_bloch = [
        2.0 * readout.get(1, 0).re,
        2.0 * readout.get(1, 0).im,
        (readout.get(0, 0) - readout.get(1, 1)).re,
    ];

    let mut min_grid_purity = f64::INFINITY;
    for grid_theta in crate::config::theta_grid() {
        let written = apply_write(psi, &w.at(grid_theta))?;
        min_grid_purity = min_grid_purity.min(corr_state_single(&written, q).purity);
    }

    let capsule_ok = min_grid_purity >= 1.0 - tol.pure && residual_fisher.abs() <= tol.pure;

    Ok(Extraction {
        readout,
        readout_bloch,
        readout_purity,
        remainder,
        residual_fisher,
        remainder_fisher,
        min_grid_purity,
        capsule_ok,
    })
}

/// Bloch vector of `w(θ)|φ⟩` for a single-qubit state `φ`.
pub fn written_qubit_bloch(phi: &CVec, theta: f64) -> [f64; 3] {
    assert_eq!(phi.dim(), 2);
    let w = WriteOp::z_write(theta);
    let v = w.matrix().matvec(&phi.normalized());
    [
        v.inner(&sigma_x().matvec(&v)).re,
        v.inner(&sigma_y().matvec(&v)).re,
        v.inner(&sigma_z().matvec(&v)).re,
    ]
}
