//! Dense complex matrices and the permanent kernel.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest permanent evaluated unless a caller raises the cap explicitly.
pub const DEFAULT_PERMANENT_CAP: usize = 16;

/// Dense complex matrix stored in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries, rejecting empty shapes and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::BadShape { rows, cols, len: data.len() });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: pos / cols, col: pos % cols });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[Complex<T>]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == cols), "ragged rows");
        let data = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::new(rows.len(), cols, data).expect("valid matrix literal")
    }

    /// Real-valued matrix literal.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<Complex<T>>> =
            rows.iter().map(|r| r.as_ref().iter().map(|&x| Complex::new(T::lit(x), T::zero())).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self { rows, cols, data: vec![Complex::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn diagonal(entries: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex<T>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)];
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * factor).collect() }
    }

    pub fn trace(&self) -> Result<Complex<T>> {
        self.require_square()?;
        Ok((0..self.rows).fold(Complex::zero(), |acc, i| acc + self[(i, i)]))
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(self.mismatch("matmul", rhs));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] = out.data[r * rhs.cols + c] + a * rhs[(k, c)];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "apply",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: v.len(),
                right_cols: 1,
            });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(Complex::zero(), |acc, (&a, &b)| acc + a * b))
            .collect())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.shape() != other.shape() {
            return Err(self.mismatch("max_abs_diff", other));
        }
        Ok(self.data.iter().zip(&other.data).fold(T::zero(), |m, (&a, &b)| m.max((a - b).norm())))
    }

    /// True iff `‖u†u − I‖_max < tol`.
    pub fn is_unitary(&self, tol: T) -> Result<bool> {
        self.require_square()?;
        let gram = self.adjoint().matmul(self)?;
        Ok(gram.max_abs_diff(&Self::identity(self.rows))? < tol)
    }

    /// True iff `self = c·other` for some unit-modulus `c`, within `tol` in the
    /// max norm. The phase is read off the largest-magnitude entry of `other`.
    pub fn equal_up_to_global_phase(&self, other: &Self, tol: T) -> Result<bool> {
        if self.shape() != other.shape() {
            return Err(self.mismatch("equal_up_to_global_phase", other));
        }
        let (pivot, pivot_norm) =
            other
                .data
                .iter()
                .enumerate()
                .fold((0, T::zero()), |best, (i, z)| if z.norm() > best.1 { (i, z.norm()) } else { best });
        if pivot_norm.is_zero() {
            return Ok(self.data.iter().all(|z| z.norm() < tol));
        }
        let ratio = self.data[pivot] / other.data[pivot];
        let phase = if ratio.norm().is_zero() { Complex::one() } else { ratio / ratio.norm() };
        self.max_abs_diff(&other.scale(phase)).map(|d| d < tol)
    }

    /// Matrix permanent with the default size cap.
    pub fn permanent(&self) -> Result<Complex<T>> {
        self.permanent_with_cap(DEFAULT_PERMANENT_CAP)
    }

    pub fn permanent_with_cap(&self, cap: usize) -> Result<Complex<T>> {
        self.require_square()?;
        permanent_square(self.rows, &self.data, cap)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    fn mismatch(&self, op: &'static str, other: &Self) -> Error {
        Error::DimensionMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Real> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, " ")?;
            for z in self.row(r) {
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Permanent of the `n×n` row-major matrix `entries`.
///
/// Ryser's inclusion-exclusion formula, visiting column subsets in Gray-code
/// order so each step updates the row sums with a single column: `O(2ⁿ·n)`.
/// The empty matrix has permanent 1.
pub fn permanent_square<T: Real>(n: usize, entries: &[Complex<T>], cap: usize) -> Result<Complex<T>> {
    if entries.len() != n * n {
        return Err(Error::BadShape { rows: n, cols: n, len: entries.len() });
    }
    if n > cap {
        return Err(Error::PermanentTooLarge { size: n, cap });
    }
    match n {
        0 => return Ok(Complex::one()),
        1 => return Ok(entries[0]),
        2 => return Ok(entries[0] * entries[3] + entries[1] * entries[2]),
        _ => {}
    }

    let mut row_sums = vec![Complex::<T>::zero(); n];
    let mut in_subset = vec![false; n];
    let mut total = Complex::<T>::zero();
    for step in 1u64..(1u64 << n) {
        let col = step.trailing_zeros() as usize;
        let adding = !in_subset[col];
        in_subset[col] = adding;
        for (r, sum) in row_sums.iter_mut().enumerate() {
            let a = entries[r * n + col];
            *sum = if adding { *sum + a } else { *sum - a };
        }
        let product = row_sums.iter().fold(Complex::<T>::one(), |acc, &s| acc * s);
        // Gray code of `step` is the current subset; its popcount fixes the sign.
        let subset_size = (step ^ (step >> 1)).count_ones() as usize;
        if (n - subset_size).is_multiple_of(2) {
            total = total + product;
        } else {
            total = total - product;
        }
    }
    Ok(total)
}
