//! Dense complex vectors and matrices.
//!
//! Row-major storage over `Complex64`. This kernel provides exactly what the
//! higher layers need: products, adjoints, Kronecker products, traces,
//! Hermitian eigendecomposition, SVD and Hermitian-generated unitaries.
//! Everything is immutable plain data after construction and safe to share
//! across threads.
//!
//! The eigensolver and SVD are backed by `nalgebra`; the row-major types here
//! are the crate-wide currency and conversions stay inside this module.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::config::{Limits, Tolerances};
use crate::error::{Error, Result};

/// Complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVec {
    data: Vec<Complex64>,
}

impl CVec {
    pub fn new(data: Vec<Complex64>) -> Self {
        Self { data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut v = Self::zeros(dim);
        v.data[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        self.scaled(Complex64::new(1.0 / n, 0.0))
    }

    /// Inner product `⟨self|other⟩` (conjugate-linear in `self`).
    pub fn inner(&self, other: &CVec) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Outer product `|self⟩⟨other|`.
    pub fn outer(&self, other: &CVec) -> CMat {
        let rows = self.dim();
        let cols = other.dim();
        let mut data = Vec::with_capacity(rows * cols);
        for a in &self.data {
            for b in &other.data {
                data.push(a * b.conj());
            }
        }
        CMat { rows, cols, data }
    }

    /// Kronecker product of two kets.
    pub fn tensor(&self, other: &CVec) -> CVec {
        let mut data = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        CVec { data }
    }

    pub fn add(&self, other: &CVec) -> CVec {
        assert_eq!(self.dim(), other.dim(), "vector add dimension mismatch");
        CVec {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CVec) -> CVec {
        assert_eq!(self.dim(), other.dim(), "vector sub dimension mismatch");
        CVec {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &CVec) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for CVec {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

/// Complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix storage size mismatch");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.data[i * self.cols + i]).sum()
    }

    pub fn scaled(&self, factor: Complex64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Matrix product. Zero rows of `self` are skipped, which makes products
    /// with embedded single-site operators effectively O(n²).
    pub fn matmul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows * rhs.cols];
        for i in 0..self.rows {
            let row_out = &mut out[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row_b = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in row_out.iter_mut().zip(row_b) {
                    *o += a * b;
                }
            }
        }
        CMat {
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        }
    }

    pub fn matvec(&self, v: &CVec) -> CVec {
        assert_eq!(self.cols, v.dim(), "matvec dimension mismatch");
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            out.push(
                row.iter()
                    .zip(v.entries())
                    .map(|(a, b)| a * b)
                    .sum::<Complex64>(),
            );
        }
        CVec { data: out }
    }

    /// `U† M U` for square `U` and `M`.
    pub fn conjugated_by(&self, u: &CMat) -> CMat {
        u.adjoint().matmul(&self.matmul(u))
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &CMat) -> CMat {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hilbert–Schmidt inner product `Tr(self† other)`.
    pub fn hs_inner(&self, other: &CMat) -> Complex64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `‖M − M†‖_max`.
    pub fn hermiticity_residual(&self) -> f64 {
        assert!(self.is_square());
        let mut r: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                r = r.max(d);
            }
        }
        r
    }

    /// `‖M†M − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        assert!(self.is_square());
        let product = self.adjoint().matmul(self);
        product.sub(&CMat::identity(self.rows)).max_abs()
    }

    fn to_na(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j))
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

/// Kronecker product `a ⊗ b`, checked against the default operator cap.
pub fn tensor(a: &CMat, b: &CMat) -> Result<CMat> {
    tensor_with_cap(a, b, Limits::default().max_operator_dim)
}

/// Kronecker product with an explicit dimension cap on the result.
pub fn tensor_with_cap(a: &CMat, b: &CMat, cap: usize) -> Result<CMat> {
    let rows = a.rows.checked_mul(b.rows).ok_or(Error::DimensionCap {
        dim: usize::MAX,
        cap,
    })?;
    let cols = a.cols.checked_mul(b.cols).ok_or(Error::DimensionCap {
        dim: usize::MAX,
        cap,
    })?;
    let dim = rows.max(cols);
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let mut data = vec![Complex64::new(0.0, 0.0); rows * cols];
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let fa = a.get(ia, ja);
            if fa.re == 0.0 && fa.im == 0.0 {
                continue;
            }
            for ib in 0..b.rows {
                let row = (ia * b.rows + ib) * cols + ja * b.cols;
                let brow = &b.data[ib * b.cols..(ib + 1) * b.cols];
                for (jb, fb) in brow.iter().enumerate() {
                    data[row + jb] = fa * fb;
                }
            }
        }
    }
    Ok(CMat { rows, cols, data })
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in descending order with matching eigenvector columns,
/// so `h = V diag(λ) V†`. Rejects inputs whose hermiticity residual exceeds
/// `tol.herm`.
pub fn herm_eig(h: &CMat, tol: &Tolerances) -> Result<(Vec<f64>, CMat)> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "herm_eig needs a square matrix, got {}x{}",
            h.rows, h.cols
        )));
    }
    let residual = h.hermiticity_residual();
    if residual > tol.herm {
        return Err(Error::NotHermitian {
            residual,
            tolerance: tol.herm,
        });
    }
    let eig = h.to_na().symmetric_eigen();
    let n = h.rows;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// `e^{-i h t}` for Hermitian `h`, via eigendecomposition.
pub fn unitary_from_hermitian(h: &CMat, t: f64, tol: &Tolerances) -> Result<CMat> {
    let (values, vectors) = herm_eig(h, tol)?;
    let n = h.rows;
    // V diag(e^{-iλt}) V†: scale the columns of V, then multiply by V†.
    let mut scaled = vectors.clone();
    for (j, value) in values.iter().enumerate() {
        let phase = Complex64::new(0.0, -value * t).exp();
        for i in 0..n {
            let v = scaled.get(i, j) * phase;
            scaled.set(i, j, v);
        }
    }
    Ok(scaled.matmul(&vectors.adjoint()))
}

/// Singular value decomposition `m = U diag(s) V†` with `s` descending.
///
/// Built on the Hermitian eigendecomposition of the smaller Gram matrix: its
/// eigenvalues are the squared singular values and its eigenvectors the left
/// factors; right factors follow as `m†u/s`, with orthonormal completion for
/// null directions.
pub fn svd(m: &CMat) -> Result<(CMat, Vec<f64>, CMat)> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows > cols {
        // m† = U' S V'† gives m = V' S U'†.
        let (u_adj, s, v_adj) = svd(&m.adjoint())?;
        return Ok((v_adj, s, u_adj));
    }

    let gram = m.matmul(&m.adjoint());
    // The Gram matrix is Hermitian by construction; a loose tolerance keeps
    // rounding in the product from tripping the check.
    let gram_tol = Tolerances {
        herm: 1e-12 * (1.0 + gram.max_abs()) * gram.rows() as f64,
        ..Tolerances::default()
    };
    let (lambdas, u) = herm_eig(&gram, &gram_tol)?;
    let values: Vec<f64> = lambdas.iter().map(|l| l.max(0.0).sqrt()).collect();

    let m_adj = m.adjoint();
    let scale = m.frobenius_norm();
    let cutoff = scale * 1e-14;
    let mut v_cols: Vec<CVec> = Vec::with_capacity(rows);
    for (i, s) in values.iter().enumerate() {
        if *s > cutoff {
            let u_col = CVec::new((0..rows).map(|r| u.get(r, i)).collect());
            let mut v = m_adj.matvec(&u_col).scaled(Complex64::new(1.0 / s, 0.0));
            // Guard orthonormality against rounding in near-degenerate pairs.
            for prev in &v_cols {
                let overlap = prev.inner(&v);
                v = v.sub(&prev.scaled(overlap));
            }
            v_cols.push(v.normalized());
        } else {
            let extra = complete_orthonormal_basis(&v_cols, cols);
            v_cols.push(extra.into_iter().next().ok_or(Error::SvdFailed)?);
        }
    }
    let v = CMat::from_fn(cols, rows, |i, j| v_cols[j][i]);
    Ok((u, values, v))
}

/// Reconstruction `U diag(s) V†` for checking an SVD.
pub fn svd_reconstruct(u: &CMat, s: &[f64], v: &CMat) -> CMat {
    let mut scaled = u.clone();
    for (j, sv) in s.iter().enumerate() {
        for i in 0..u.rows() {
            let val = scaled.get(i, j) * Complex64::new(*sv, 0.0);
            scaled.set(i, j, val);
        }
    }
    scaled.matmul(&v.adjoint())
}

/// Extends `seed` (orthonormal columns) to a full orthonormal basis of the
/// ambient space, deterministically. Returns only the new vectors.
pub fn complete_orthonormal_basis(seed: &[CVec], dim: usize) -> Vec<CVec> {
    let mut basis: Vec<CVec> = seed.to_vec();
    let mut extra = Vec::new();
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut cand = CVec::basis(dim, k);
        // Two Gram–Schmidt passes keep the result orthonormal to near machine
        // precision.
        for _ in 0..2 {
            for b in &basis {
                let overlap = b.inner(&cand);
                cand = cand.sub(&b.scaled(overlap));
            }
        }
        let n = cand.norm();
        if n > 1e-6 {
            let v = cand.scaled(Complex64::new(1.0 / n, 0.0));
            basis.push(v.clone());
            extra.push(v);
        }
    }
    assert_eq!(
        basis.len(),
        dim,
        "orthonormal completion came up short; seed vectors were not orthonormal"
    );
    extra
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_x() -> CMat {
        CMat::new(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    fn sigma_z() -> CMat {
        CMat::new(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMat {
        CMat::from_fn(rows, cols, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> CMat {
        let m = random_matrix(rng, dim, dim);
        m.add(&m.adjoint()).scaled(c(0.5, 0.0))
    }

    #[test]
    fn tensor_identity_case_is_noop() {
        let a = sigma_z();
        let id1 = CMat::identity(1);
        assert_eq!(tensor(&a, &id1).unwrap(), a);
        // σ_z ⊗ I₂ leaves |00⟩ with eigenvalue +1.
        let op = tensor(&sigma_z(), &CMat::identity(2)).unwrap();
        let v = op.matvec(&CVec::basis(4, 0));
        assert!(v.max_abs_diff(&CVec::basis(4, 0)) < 1e-15);
    }

    #[test]
    fn tensor_flips_both_bits() {
        let op = tensor(&sigma_x(), &sigma_x()).unwrap();
        let v = op.matvec(&CVec::basis(4, 0));
        assert!(v.max_abs_diff(&CVec::basis(4, 3)) < 1e-15);
    }

    #[test]
    fn tensor_matches_index_arithmetic_oracle() {
        // Oracle: (a⊗b)[(ia*rb+ib),(ja*cb+jb)] = a[ia,ja]·b[ib,jb], by direct
        // index arithmetic, independent of the loop layout in `tensor`.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_matrix(&mut rng, 2, 3);
        let b = random_matrix(&mut rng, 4, 2);
        let t = tensor(&a, &b).unwrap();
        assert_eq!((t.rows(), t.cols()), (8, 6));
        for ia in 0..2 {
            for ja in 0..3 {
                for ib in 0..4 {
                    for jb in 0..2 {
                        let expect = a.get(ia, ja) * b.get(ib, jb);
                        let got = t.get(ia * 4 + ib, ja * 2 + jb);
                        assert!((expect - got).norm() < 1e-15);
                    }
                }
            }
        }
        // σ_x ⊗ (σ_x ⊗ I) maps |000⟩ to |110⟩.
        let op = tensor(&sigma_x(), &tensor(&sigma_x(), &CMat::identity(2)).unwrap()).unwrap();
        let v = op.matvec(&CVec::basis(8, 0));
        assert!(v.max_abs_diff(&CVec::basis(8, 6)) < 1e-15);
    }

    #[test]
    fn tensor_respects_dimension_cap() {
        let big = CMat::identity(64);
        let err = tensor_with_cap(&big, &big, 1 << 10).unwrap_err();
        assert!(matches!(err, Error::DimensionCap { dim: 4096, .. }));
    }

    #[test]
    fn herm_eig_pauli_spectra() {
        let tol = Tolerances::default();
        let (vals, _) = herm_eig(&sigma_z(), &tol).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] + 1.0).abs() < 1e-12);

        let (vals, vecs) = herm_eig(&sigma_x(), &tol).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] + 1.0).abs() < 1e-12);
        // Eigenvector for +1 is |+⟩ up to phase.
        let plus = vecs.get(0, 0);
        assert!((vecs.get(1, 0) - plus).norm() < 1e-12);
        assert!((plus.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn herm_eig_reconstructs_random_hermitian() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = random_hermitian(&mut rng, 8);
        let (vals, vecs) = herm_eig(&h, &tol).unwrap();
        let mut recon = CMat::zeros(8, 8);
        for (k, val) in vals.iter().enumerate() {
            let col = CVec::new((0..8).map(|i| vecs.get(i, k)).collect());
            recon = recon.add(&col.outer(&col).scaled(c(*val, 0.0)));
        }
        assert!(recon.max_abs_diff(&h) < 1e-10);
        assert!(vecs.unitarity_residual() < 1e-10);
        // Descending order.
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn herm_eig_rejects_non_hermitian() {
        let tol = Tolerances::default();
        let m = CMat::new(2, 2, vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        assert!(matches!(
            herm_eig(&m, &tol),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn unitary_from_sigma_z_is_phase_gate() {
        let tol = Tolerances::default();
        let theta = 0.37;
        let u = unitary_from_hermitian(&sigma_z(), theta, &tol).unwrap();
        let expect = CMat::new(
            2,
            2,
            vec![
                c(0.0, -theta).exp(),
                c(0., 0.),
                c(0., 0.),
                c(0.0, theta).exp(),
            ],
        );
        assert!(u.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn unitary_at_time_zero_is_identity() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(&mut rng, 5);
        let u = unitary_from_hermitian(&h, 0.0, &tol).unwrap();
        assert!(u.max_abs_diff(&CMat::identity(5)) < 1e-12);
    }

    #[test]
    fn unitary_from_sigma_x_quarter_period() {
        // Closed form: e^{-i(π/2)σ_x} = cos(π/2)·I − i·sin(π/2)·σ_x = −iσ_x.
        let tol = Tolerances::default();
        let u = unitary_from_hermitian(&sigma_x(), std::f64::consts::FRAC_PI_2, &tol).unwrap();
        let expect = sigma_x().scaled(c(0.0, -1.0));
        assert!(u.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn svd_identity_and_rank_one() {
        let (_, s, _) = svd(&CMat::identity(2)).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-12 && (s[1] - 1.0).abs() < 1e-12);

        let u = CVec::new(vec![c(1., 0.), c(2., 0.), c(0., 2.)]);
        let v = CVec::new(vec![c(0., 1.), c(1., 0.)]);
        let m = u.outer(&v);
        let (_, s, _) = svd(&m).unwrap();
        assert!((s[0] - u.norm() * v.norm()).abs() < 1e-12);
        assert!(s[1].abs() < 1e-12);
    }

    #[test]
    fn svd_of_bell_coefficient_matrix() {
        // Bell state reshaped to a 2×2 coefficient matrix: diag(1,1)/√2.
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let m = CMat::new(2, 2, vec![c(inv, 0.), c(0., 0.), c(0., 0.), c(inv, 0.)]);
        let (u, s, v) = svd(&m).unwrap();
        assert!((s[0] - inv).abs() < 1e-12 && (s[1] - inv).abs() < 1e-12);
        assert!(svd_reconstruct(&u, &s, &v).max_abs_diff(&m) < 1e-12);

        // Same spectrum for the 2×4 reshape of (|000⟩ + |111⟩)/√2.
        let mut wide = CMat::zeros(2, 4);
        wide.set(0, 0, c(inv, 0.));
        wide.set(1, 3, c(inv, 0.));
        let (u, s, v) = svd(&wide).unwrap();
        assert!((s[0] - inv).abs() < 1e-12 && (s[1] - inv).abs() < 1e-12);
        assert!(svd_reconstruct(&u, &s, &v).max_abs_diff(&wide) < 1e-12);
        assert_eq!((v.rows(), v.cols()), (4, 2));
    }

    #[test]
    fn completes_orthonormal_basis_deterministically() {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let seed = vec![
            CVec::new(vec![c(inv, 0.), c(0., 0.), c(0., 0.), c(inv, 0.)]),
            CVec::new(vec![c(0., 0.), c(inv, 0.), c(inv, 0.), c(0., 0.)]),
        ];
        let extra = complete_orthonormal_basis(&seed, 4);
        assert_eq!(extra.len(), 2);
        let all: Vec<&CVec> = seed.iter().chain(extra.iter()).collect();
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let overlap = a.inner(b).norm();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((overlap - expect).abs() < 1e-12);
            }
        }
        let again = complete_orthonormal_basis(&seed, 4);
        for (a, b) in extra.iter().zip(&again) {
            assert!(a.max_abs_diff(b) == 0.0);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn tensor_mixed_product_property(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, 2, 2);
            let b = random_matrix(&mut rng, 3, 3);
            let cm = random_matrix(&mut rng, 2, 2);
            let d = random_matrix(&mut rng, 3, 3);
            let lhs = tensor(&a, &b).unwrap().matmul(&tensor(&cm, &d).unwrap());
            let rhs = tensor(&a.matmul(&cm), &b.matmul(&d)).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn unitary_times_inverse_is_identity(seed in 0u64..1000, t in -3.0f64..3.0) {
            let tol = Tolerances::default();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_hermitian(&mut rng, 6);
            let u = unitary_from_hermitian(&h, t, &tol).unwrap();
            let u_inv = unitary_from_hermitian(&h, -t, &tol).unwrap();
            prop_assert!(u.matmul(&u_inv).max_abs_diff(&CMat::identity(6)) < 1e-10);
        }

        #[test]
        fn svd_reconstruction_residual_small(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, 5, 3);
            let (u, s, v) = svd(&m).unwrap();
            prop_assert!(svd_reconstruct(&u, &s, &v).max_abs_diff(&m) < 1e-10);
            prop_assert!(s.windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(s.iter().all(|&x| x >= 0.0));
        }
    }
}
