//! Dual-rail qubit registers: encoding, post-selection and logical gate
//! extraction.
//!
//! Logical basis index `j` of a `k`-qubit register lists qubit 0 as the most
//! significant bit, so `|q0 q1⟩` with `q0` on the first rail pair.

use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::components::Circuit;
use crate::error::{Error, Result};
use crate::fock::{evolve_with, FockBasis, FockState, PhotonicState, SimOptions, REPORT_FLOOR};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// Rail pairs `(mode for |0⟩, mode for |1⟩)` for each qubit, over a circuit of
/// `width` modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualRailRegister {
    rails: Vec<(usize, usize)>,
    width: usize,
}

impl DualRailRegister {
    pub fn new(rails: Vec<(usize, usize)>, width: usize) -> Result<Self> {
        if rails.is_empty() {
            return Err(Error::InvalidRegister("register needs at least one qubit".into()));
        }
        let mut seen = vec![false; width];
        for &(r0, r1) in &rails {
            for m in [r0, r1] {
                if m >= width {
                    return Err(Error::ModeOutOfRange { mode: m, width });
                }
                if seen[m] {
                    return Err(Error::InvalidRegister(format!("mode {m} assigned twice")));
                }
                seen[m] = true;
            }
        }
        Ok(Self { rails, width })
    }

    /// Qubit `q` on modes `(2q, 2q+1)` of a `2k`-mode circuit.
    pub fn consecutive(qubits: usize) -> Result<Self> {
        Self::new((0..qubits).map(|q| (2 * q, 2 * q + 1)).collect(), 2 * qubits)
    }

    pub fn qubits(&self) -> usize {
        self.rails.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rails(&self) -> &[(usize, usize)] {
        &self.rails
    }

    pub fn dimension(&self) -> usize {
        1 << self.qubits()
    }

    /// Fock state for logical basis index `index`.
    pub fn basis_state(&self, index: usize) -> FockState {
        let k = self.qubits();
        let mut occ = vec![0; self.width];
        for (q, &(r0, r1)) in self.rails.iter().enumerate() {
            let bit = (index >> (k - 1 - q)) & 1;
            occ[if bit == 0 { r0 } else { r1 }] = 1;
        }
        FockState::new(occ)
    }
}

fn check_normalized<T: Real>(amplitudes: &[Complex<T>]) -> Result<()> {
    let norm_sqr = amplitudes.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
    if (norm_sqr - T::one()).abs() > T::norm_tol() {
        return Err(Error::NotNormalized { norm_sqr: norm_sqr.as_f64() });
    }
    Ok(())
}

/// One photon per rail pair, superposed with the given logical amplitudes.
pub fn encode<T: Real>(logical: &[Complex<T>], register: &DualRailRegister) -> Result<PhotonicState<T>> {
    if logical.len() != register.dimension() {
        return Err(Error::InvalidRegister(format!(
            "{} amplitudes for a {}-qubit register",
            logical.len(),
            register.qubits()
        )));
    }
    check_normalized(logical)?;
    let basis = Arc::new(FockBasis::new(register.width, register.qubits())?);
    let mut amplitudes = vec![Complex::zero(); basis.len()];
    for (j, &amp) in logical.iter().enumerate() {
        let idx = basis.index_of(&register.basis_state(j)).expect("logical state lies in the basis");
        amplitudes[idx] = amp;
    }
    PhotonicState::from_amplitudes(basis, amplitudes)
}

/// Post-selects onto one photon per rail pair.
///
/// Returns the renormalized logical amplitudes and the probability of the
/// projection. Fails only when the projection vanishes.
pub fn decode<T: Real>(state: &PhotonicState<T>, register: &DualRailRegister) -> Result<(Vec<Complex<T>>, T)> {
    if state.width() != register.width {
        return Err(Error::WidthMismatch { expected: register.width, got: state.width() });
    }
    if state.photons() != register.qubits() {
        return Err(Error::OutsideLogicalSubspace);
    }
    let floor = T::lit(REPORT_FLOOR);
    let mut projected: Vec<Complex<T>> = (0..register.dimension())
        .map(|j| state.amplitude(&register.basis_state(j)))
        .map(|z| if z.norm() < floor { Complex::zero() } else { z })
        .collect();
    let success = projected.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
    if success.is_zero() {
        return Err(Error::OutsideLogicalSubspace);
    }
    let scale = Complex::new(success.sqrt().recip(), T::zero());
    for z in &mut projected {
        *z = *z * scale;
    }
    Ok((projected, success))
}

/// Logical action of a circuit on a dual-rail register.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalGateMatrix<T: Real> {
    /// Column `j` is the renormalized post-selected image of basis state `j`.
    pub matrix: ComplexMatrix<T>,
    /// Minimum over the column success probabilities.
    pub success_probability: T,
    pub column_success: Vec<T>,
}

impl<T: Real> LogicalGateMatrix<T> {
    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, logical: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.matrix.apply(logical)
    }
}

pub fn logical_matrix<T: Real>(circuit: &Circuit<T>, register: &DualRailRegister) -> Result<LogicalGateMatrix<T>> {
    logical_matrix_with(circuit, register, &SimOptions::default())
}

pub fn logical_matrix_with<T: Real>(
    circuit: &Circuit<T>,
    register: &DualRailRegister,
    opts: &SimOptions,
) -> Result<LogicalGateMatrix<T>> {
    if circuit.width() != register.width {
        return Err(Error::WidthMismatch { expected: register.width, got: circuit.width() });
    }
    let transfer = circuit.compile()?.transfer;
    let d = register.dimension();
    let mut matrix = ComplexMatrix::zeros(d, d);
    let mut column_success = Vec::with_capacity(d);
    for j in 0..d {
        let mut e = vec![Complex::zero(); d];
        e[j] = Complex::one();
        let out = evolve_with(&transfer, &encode(&e, register)?, opts)?;
        let (column, success) = decode(&out, register)?;
        for (i, z) in column.into_iter().enumerate() {
            matrix[(i, j)] = z;
        }
        column_success.push(success);
    }
    let success_probability = column_success.iter().copied().fold(T::infinity(), T::min);
    Ok(LogicalGateMatrix { matrix, success_probability, column_success })
}

/// `|Tr(target† · actual)|² / d²`, insensitive to global phase.
pub fn process_fidelity<T: Real>(actual: &LogicalGateMatrix<T>, target: &ComplexMatrix<T>) -> Result<T> {
    matrix_fidelity(&actual.matrix, target)
}

pub fn matrix_fidelity<T: Real>(actual: &ComplexMatrix<T>, target: &ComplexMatrix<T>) -> Result<T> {
    if actual.shape() != target.shape() {
        return Err(Error::DimensionMismatch {
            op: "process_fidelity",
            left_rows: actual.rows(),
            left_cols: actual.cols(),
            right_rows: target.rows(),
            right_cols: target.cols(),
        });
    }
    let d = T::from_usize(actual.rows()).expect("dimension fits scalar");
    let overlap = target.adjoint().matmul(actual)?.trace()?;
    Ok((overlap.norm_sqr() / (d * d)).min(T::one()))
}

/// Two-qubit SWAP on the logical basis `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn swap_matrix<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
}

/// Logical permutation matrix sending qubit `i`'s state to position
/// `image[i]`.
pub fn qubit_permutation_matrix<T: Real>(image: &[usize]) -> ComplexMatrix<T> {
    let k = image.len();
    let d = 1usize << k;
    let mut m = ComplexMatrix::zeros(d, d);
    for src in 0..d {
        let mut dst = 0;
        for (q, &to) in image.iter().enumerate() {
            let bit = (src >> (k - 1 - q)) & 1;
            dst |= bit << (k - 1 - to);
        }
        m[(dst, src)] = Complex::one();
    }
    m
}
