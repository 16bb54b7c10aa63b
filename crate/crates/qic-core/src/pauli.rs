//! Pauli letters and weighted Pauli strings on N qubits.
//!
//! Qubit 0 is the most significant bit of the computational-basis index, so
//! the string `"XZI"` acts as `σ_x ⊗ σ_z ⊗ I`. Strings act on basis states as
//! a permutation with a phase, which keeps materialization, expectation values
//! and trace inner products at O(2^N) per string.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_letter(ch: char) -> Result<Self> {
        match ch {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::InvalidPauliLetter(other)),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Dense 2×2 matrix of this letter.
    pub fn matrix(self) -> CMat {
        let c = Complex64::new;
        match self {
            Pauli::I => CMat::identity(2),
            Pauli::X => CMat::new(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
            Pauli::Y => CMat::new(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
            Pauli::Z => CMat::new(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
        }
    }

    /// Action on a single bit value: `P|b⟩ = phase·|b ⊕ flip⟩`.
    fn bit_action(self, bit: usize) -> (usize, Complex64) {
        match self {
            Pauli::I => (bit, Complex64::new(1.0, 0.0)),
            Pauli::X => (bit ^ 1, Complex64::new(1.0, 0.0)),
            // σ_y|0⟩ = i|1⟩, σ_y|1⟩ = −i|0⟩.
            Pauli::Y => (
                bit ^ 1,
                if bit == 0 {
                    Complex64::new(0.0, 1.0)
                } else {
                    Complex64::new(0.0, -1.0)
                },
            ),
            Pauli::Z => (
                bit,
                if bit == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(-1.0, 0.0)
                },
            ),
        }
    }
}

/// σ_x as a dense matrix.
pub fn sigma_x() -> CMat {
    Pauli::X.matrix()
}

/// σ_y as a dense matrix.
pub fn sigma_y() -> CMat {
    Pauli::Y.matrix()
}

/// σ_z as a dense matrix.
pub fn sigma_z() -> CMat {
    Pauli::Z.matrix()
}

/// The triple (σ_x, σ_y, σ_z).
pub fn sigma_triple() -> [CMat; 3] {
    [sigma_x(), sigma_y(), sigma_z()]
}

/// A Pauli string with a complex coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    letters: Vec<Pauli>,
    coeff: Complex64,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>, coeff: Complex64) -> Self {
        Self { letters, coeff }
    }

    /// Parses a label such as `"XZI"` (qubit 0 first).
    pub fn parse(label: &str, coeff: Complex64) -> Result<Self> {
        let letters = label
            .chars()
            .map(Pauli::from_letter)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { letters, coeff })
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn coeff(&self) -> Complex64 {
        self.coeff
    }

    pub fn label(&self) -> String {
        self.letters.iter().map(|p| p.letter()).collect()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Action on a basis index: `P|col⟩ = phase·|row⟩` (coefficient included).
    pub fn basis_action(&self, col: usize) -> (usize, Complex64) {
        let (row, phase) = letters_action(&self.letters, col);
        (row, phase * self.coeff)
    }

    /// Dense matrix form (dimension 2^N).
    pub fn materialize(&self) -> CMat {
        let dim = 1usize << self.letters.len();
        let mut m = CMat::zeros(dim, dim);
        for col in 0..dim {
            let (row, phase) = self.basis_action(col);
            m.set(row, col, phase);
        }
        m
    }

    /// Applies the string to a ket without materializing the matrix.
    pub fn apply(&self, v: &CVec) -> CVec {
        let dim = 1usize << self.letters.len();
        assert_eq!(v.dim(), dim, "pauli string / state dimension mismatch");
        let mut out = CVec::zeros(dim);
        for col in 0..dim {
            let (row, phase) = self.basis_action(col);
            out.entries_mut()[row] += phase * v[col];
        }
        out
    }

    /// `Tr(P M) / 2^N` — the coefficient of this string's letters in the
    /// Pauli expansion of `M`. The string's own coefficient is ignored.
    ///
    /// `Tr(PM) = Σ_k P_{action(k),k}·M_{k,action(k)}`, since each column of a
    /// Pauli string has a single nonzero entry.
    pub fn expansion_coeff(&self, m: &CMat) -> Complex64 {
        let dim = 1usize << self.letters.len();
        assert_eq!(m.rows(), dim, "pauli string / operator dimension mismatch");
        let mut tr = Complex64::new(0.0, 0.0);
        for col in 0..dim {
            let (row, phase) = letters_action(&self.letters, col);
            tr += phase * m.get(col, row);
        }
        tr / Complex64::new(dim as f64, 0.0)
    }
}

fn letters_action(letters: &[Pauli], col: usize) -> (usize, Complex64) {
    let n = letters.len();
    let mut row = col;
    let mut phase = Complex64::new(1.0, 0.0);
    for (site, p) in letters.iter().enumerate() {
        let shift = n - 1 - site;
        let bit = (col >> shift) & 1;
        let (new_bit, factor) = p.bit_action(bit);
        if new_bit != bit {
            row ^= 1 << shift;
        }
        phase *= factor;
    }
    (row, phase)
}

/// All 4^N Pauli strings in canonical order (site 0 most significant,
/// I < X < Y < Z per site), with unit coefficients.
pub fn enumerate_strings(n_qubits: usize) -> impl Iterator<Item = PauliString> {
    let total = 4usize.pow(n_qubits as u32);
    (0..total).map(move |code| {
        let letters = (0..n_qubits)
            .map(|site| {
                let digit = (code >> (2 * (n_qubits - 1 - site))) & 3;
                match digit {
                    0 => Pauli::I,
                    1 => Pauli::X,
                    2 => Pauli::Y,
                    _ => Pauli::Z,
                }
            })
            .collect();
        PauliString::new(letters, Complex64::new(1.0, 0.0))
    })
}

/// Expands a dense operator in the Pauli-string basis, dropping terms with
/// coefficient magnitude at or below `cutoff`.
pub fn decompose(m: &CMat, cutoff: f64) -> Vec<PauliString> {
    assert!(m.is_square());
    let n = m.rows().trailing_zeros() as usize;
    assert_eq!(
        1usize << n,
        m.rows(),
        "operator dimension must be a power of 2"
    );
    enumerate_strings(n)
        .filter_map(|p| {
            let coeff = p.expansion_coeff(m);
            if coeff.norm() > cutoff {
                Some(PauliString::new(p.letters().to_vec(), coeff))
            } else {
                None
            }
        })
        .collect()
}
