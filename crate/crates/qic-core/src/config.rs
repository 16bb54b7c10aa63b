//! Numerical tolerances and resource limits used across the crate.
//!
//! Every "exact" statement about states and operators is checked as a residual
//! against one of these thresholds, so a single instance documents the entire
//! numerical contract of a computation. All functions take tolerances
//! explicitly or fall back to [`Tolerances::default`].

use serde::{Deserialize, Serialize};

/// Residual thresholds for the verification predicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Hermiticity and tracelessness residual (`τ_herm`).
    pub herm: f64,
    /// Reconstruction / unitarity residual (`τ_recon`).
    pub recon: f64,
    /// Operator-algebra and commutator residual (`τ_alg`).
    pub alg: f64,
    /// State-norm residual (`τ_norm`).
    pub norm: f64,
    /// Threshold below which a Schmidt weight counts as zero (`τ_rank`).
    pub rank: f64,
    /// Allowed negative part of eigenvalues in a positive-semidefinite check.
    pub psd: f64,
    /// Purity deficit below which a correlation state counts as pure.
    pub pure: f64,
    /// Agreement required between analytic and finite-difference Fisher values.
    pub fisher_fd: f64,
    /// Magnitude of the write-generator expectation below which maximally
    /// entangled partners exist.
    pub max_ent: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            recon: 1e-9,
            alg: 1e-9,
            norm: 1e-10,
            rank: 1e-12,
            psd: 1e-8,
            pure: 1e-8,
            fisher_fd: 1e-6,
            max_ent: 1e-9,
        }
    }
}

/// Dense-storage dimension caps. Exceeding them is a resource error, not a
/// numerical one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest row/column count for a full-system operator.
    pub max_operator_dim: usize,
    /// Largest entry count for a state vector.
    pub max_state_dim: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_operator_dim: 1 << 10,
            max_state_dim: 1 << 14,
        }
    }
}

/// Number of sample points used when sweeping the written phase over `[0, π)`.
pub const THETA_GRID_POINTS: usize = 32;

/// Evenly spaced phases in `[0, π)` used by the confinement checks.
pub fn theta_grid() -> Vec<f64> {
    (0..THETA_GRID_POINTS)
        .map(|k| k as f64 * std::f64::consts::PI / THETA_GRID_POINTS as f64)
        .collect()
}

/// Central-difference step for Fisher-information derivatives.
pub const FISHER_FD_STEP: f64 = 1e-4;
