//! Fock-basis enumeration and multi-photon evolution through mode unitaries.
//!
//! Transition amplitudes follow the creation-operator substitution
//! `a_i† → Σ_j U_ji a_j†`, which reduces to permanents of submatrices of `U`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{permanent_square, ComplexMatrix, DEFAULT_PERMANENT_CAP};
use crate::scalar::Real;

/// Largest basis enumerated unless raised through [`SimOptions`].
pub const DEFAULT_BASIS_CAP: usize = 1_000_000;

/// Amplitudes smaller than this are reported as exactly zero.
pub const REPORT_FLOOR: f64 = 1e-14;

/// Resource caps for simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimOptions {
    pub permanent_cap: usize,
    pub basis_cap: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self { permanent_cap: DEFAULT_PERMANENT_CAP, basis_cap: DEFAULT_BASIS_CAP }
    }
}

/// Occupation numbers, one per mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState(Vec<usize>);

impl FockState {
    pub fn new(occupations: Vec<usize>) -> Self {
        FockState(occupations)
    }

    pub fn vacuum(width: usize) -> Self {
        FockState(vec![0; width])
    }

    /// One photon in `mode`.
    pub fn single(width: usize, mode: usize) -> Self {
        let mut occ = vec![0; width];
        occ[mode] = 1;
        FockState(occ)
    }

    pub fn occupations(&self) -> &[usize] {
        &self.0
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn photons(&self) -> usize {
        self.0.iter().sum()
    }

    /// Each mode index repeated by its occupation.
    fn mode_list(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(m, &k)| std::iter::repeat_n(m, k)).collect()
    }

    fn factorial_product(&self) -> f64 {
        self.0.iter().map(|&k| (1..=k).map(|x| x as f64).product::<f64>()).product()
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ">")
    }
}

/// `C(width + photons − 1, photons)`, saturating at `u128::MAX`.
pub fn basis_size(width: usize, photons: usize) -> u128 {
    if width == 0 {
        return u128::from(photons == 0);
    }
    let mut acc: u128 = 1;
    for k in 1..=photons as u128 {
        let top = (width as u128 - 1) + k;
        acc = match acc.checked_mul(top) {
            Some(v) => v / k,
            None => return u128::MAX,
        };
    }
    acc
}

/// All `photons`-photon states over `width` modes in lexicographically
/// descending order of occupation vectors.
pub fn enumerate_basis(width: usize, photons: usize) -> Result<Vec<FockState>> {
    enumerate_basis_with_cap(width, photons, DEFAULT_BASIS_CAP)
}

pub fn enumerate_basis_with_cap(width: usize, photons: usize, cap: usize) -> Result<Vec<FockState>> {
    if width == 0 {
        return Err(Error::InvalidParameter("mode count must be at least 1".into()));
    }
    let size = basis_size(width, photons);
    if size > cap as u128 {
        return Err(Error::BasisTooLarge { size: usize::try_from(size).unwrap_or(usize::MAX), cap });
    }
    let mut out = Vec::with_capacity(size as usize);
    let mut occ = vec![0; width];
    fill(&mut occ, 0, photons, &mut out);
    Ok(out)
}

fn fill(occ: &mut [usize], mode: usize, remaining: usize, out: &mut Vec<FockState>) {
    if mode + 1 == occ.len() {
        occ[mode] = remaining;
        out.push(FockState(occ.to_vec()));
        return;
    }
    for k in (0..=remaining).rev() {
        occ[mode] = k;
        fill(occ, mode + 1, remaining - k, out);
    }
    occ[mode] = 0;
}

/// Enumerated basis with a reverse index.
#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    width: usize,
    photons: usize,
    states: Vec<FockState>,
    index: HashMap<FockState, usize>,
}

impl FockBasis {
    pub fn new(width: usize, photons: usize) -> Result<Self> {
        Self::with_cap(width, photons, DEFAULT_BASIS_CAP)
    }

    pub fn with_cap(width: usize, photons: usize, cap: usize) -> Result<Self> {
        let states = enumerate_basis_with_cap(width, photons, cap)?;
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(Self { width, photons, states, index })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn index_of(&self, state: &FockState) -> Option<usize> {
        self.index.get(state).copied()
    }
}

/// Amplitude vector over a fixed-photon-number basis.
///
/// The squared norm is 1 for normalized states; after lossy evolution it
/// equals the probability that no photon was lost.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonicState<T: Real> {
    basis: Arc<FockBasis>,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PhotonicState<T> {
    pub fn from_amplitudes(basis: Arc<FockBasis>, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                op: "state amplitudes",
                left_rows: basis.len(),
                left_cols: 1,
                right_rows: amplitudes.len(),
                right_cols: 1,
            });
        }
        Ok(Self { basis, amplitudes })
    }

    /// The basis state `fock` with amplitude 1.
    pub fn from_fock(fock: &FockState) -> Result<Self> {
        Self::from_terms(fock.width(), fock.photons(), &[(fock.clone(), Complex::new(T::one(), T::zero()))])
    }

    /// Superposition of explicit basis terms; repeated terms add.
    pub fn from_terms(width: usize, photons: usize, terms: &[(FockState, Complex<T>)]) -> Result<Self> {
        let basis = Arc::new(FockBasis::new(width, photons)?);
        let mut amplitudes = vec![Complex::zero(); basis.len()];
        for (fock, amp) in terms {
            if fock.width() != width {
                return Err(Error::WidthMismatch { expected: width, got: fock.width() });
            }
            let idx =
                basis.index_of(fock).ok_or(Error::PhotonNumberMismatch { input: photons, output: fock.photons() })?;
            amplitudes[idx] = amplitudes[idx] + amp;
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn vacuum(width: usize) -> Result<Self> {
        Self::from_fock(&FockState::vacuum(width))
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn width(&self) -> usize {
        self.basis.width
    }

    pub fn photons(&self) -> usize {
        self.basis.photons
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, fock: &FockState) -> Complex<T> {
        self.basis.index_of(fock).map_or(Complex::zero(), |i| self.amplitudes[i])
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// Basis states paired with amplitudes, tiny magnitudes flushed to zero.
    pub fn amplitude_map(&self) -> Vec<(FockState, Complex<T>)> {
        let floor = T::lit(REPORT_FLOOR);
        self.basis
            .states
            .iter()
            .zip(&self.amplitudes)
            .map(|(s, &z)| (s.clone(), if z.norm() < floor { Complex::zero() } else { z }))
            .collect()
    }
}

/// `⟨output| Û |input⟩` for the multi-photon unitary induced by `u`.
pub fn transition_amplitude<T: Real>(
    u: &ComplexMatrix<T>,
    input: &FockState,
    output: &FockState,
) -> Result<Complex<T>> {
    transition_amplitude_with_cap(u, input, output, DEFAULT_PERMANENT_CAP)
}

pub fn transition_amplitude_with_cap<T: Real>(
    u: &ComplexMatrix<T>,
    input: &FockState,
    output: &FockState,
    cap: usize,
) -> Result<Complex<T>> {
    let width = u.rows();
    if !u.is_square() {
        return Err(Error::NotSquare { rows: u.rows(), cols: u.cols() });
    }
    for fock in [input, output] {
        if fock.width() != width {
            return Err(Error::WidthMismatch { expected: width, got: fock.width() });
        }
    }
    if input.photons() != output.photons() {
        return Err(Error::PhotonNumberMismatch { input: input.photons(), output: output.photons() });
    }
    Ok(amplitude_from_lists(u, &input.mode_list(), &output.mode_list(), cap)?
        * T::lit(1.0 / (input.factorial_product() * output.factorial_product()).sqrt()))
}

fn amplitude_from_lists<T: Real>(
    u: &ComplexMatrix<T>,
    cols: &[usize],
    rows: &[usize],
    cap: usize,
) -> Result<Complex<T>> {
    let n = cols.len();
    let mut sub = Vec::with_capacity(n * n);
    for &r in rows {
        for &c in cols {
            sub.push(u[(r, c)]);
        }
    }
    permanent_square(n, &sub, cap)
}

/// Evolves `state` through `u`, which may be sub-unitary (lossy transfer).
pub fn evolve<T: Real>(u: &ComplexMatrix<T>, state: &PhotonicState<T>) -> Result<PhotonicState<T>> {
    evolve_with(u, state, &SimOptions::default())
}

pub fn evolve_with<T: Real>(
    u: &ComplexMatrix<T>,
    state: &PhotonicState<T>,
    opts: &SimOptions,
) -> Result<PhotonicState<T>> {
    check_width(u, state)?;
    if state.photons() == 1 {
        return evolve_single_photon(u, state);
    }
    evolve_via_permanents(u, state, opts)
}

fn check_width<T: Real>(u: &ComplexMatrix<T>, state: &PhotonicState<T>) -> Result<()> {
    if !u.is_square() {
        return Err(Error::NotSquare { rows: u.rows(), cols: u.cols() });
    }
    if u.rows() != state.width() {
        return Err(Error::WidthMismatch { expected: u.rows(), got: state.width() });
    }
    Ok(())
}

// In the one-photon basis, state k is the photon in mode k, so the amplitude
// vector transforms directly by `u`.
fn evolve_single_photon<T: Real>(u: &ComplexMatrix<T>, state: &PhotonicState<T>) -> Result<PhotonicState<T>> {
    let amplitudes = u.apply(&state.amplitudes)?;
    PhotonicState::from_amplitudes(state.basis.clone(), amplitudes)
}

/// General evolution path: one permanent per (input, output) basis pair with
/// nonzero input amplitude. Output order follows the basis order.
pub fn evolve_via_permanents<T: Real>(
    u: &ComplexMatrix<T>,
    state: &PhotonicState<T>,
    opts: &SimOptions,
) -> Result<PhotonicState<T>> {
    check_width(u, state)?;
    let basis = &state.basis;
    let inputs: Vec<(Vec<usize>, f64, Complex<T>)> = basis
        .states
        .iter()
        .zip(&state.amplitudes)
        .filter(|(_, z)| !z.is_zero())
        .map(|(s, &z)| (s.mode_list(), s.factorial_product(), z))
        .collect();
    let mut out = vec![Complex::<T>::zero(); basis.len()];
    for (slot, target) in out.iter_mut().zip(&basis.states) {
        let rows = target.mode_list();
        let out_fact = target.factorial_product();
        let mut acc = Complex::zero();
        for (cols, in_fact, amp) in &inputs {
            let perm = amplitude_from_lists(u, cols, &rows, opts.permanent_cap)?;
            acc = acc + *amp * perm * T::lit(1.0 / (in_fact * out_fact).sqrt());
        }
        *slot = acc;
    }
    PhotonicState::from_amplitudes(basis.clone(), out)
}

/// `|amplitude|²` per basis state in basis order. Values under the report
/// floor come back as exactly zero.
pub fn probabilities<T: Real>(state: &PhotonicState<T>) -> Vec<(FockState, T)> {
    state.amplitude_map().into_iter().map(|(s, z)| (s, z.norm_sqr())).collect()
}

/// Detection counts from [`sample`], in basis order; states never drawn are
/// omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    pub shots: u64,
    pub entries: Vec<(FockState, u64)>,
}

impl Counts {
    pub fn get(&self, state: &FockState) -> u64 {
        self.entries.iter().find(|(s, _)| s == state).map_or(0, |(_, n)| *n)
    }
}

/// Draws `shots` outcomes from the state's distribution.
///
/// The generator is ChaCha8 seeded through `seed_from_u64(seed)`; each shot
/// takes one uniform `f64` in `[0, 1)`, scales it by the total probability and
/// inverts the cumulative distribution in basis order. Lossy states are thus
/// sampled conditioned on no loss. Identical inputs give identical counts on
/// every platform.
pub fn sample<T: Real>(state: &PhotonicState<T>, seed: u64, shots: u64) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    let probs: Vec<f64> = probabilities(state).iter().map(|(_, p)| p.as_f64()).collect();
    let mut cdf = Vec::with_capacity(probs.len());
    let mut running = 0.0;
    for p in &probs {
        running += p;
        cdf.push(running);
    }
    if running <= 0.0 {
        return Err(Error::InvalidParameter("state has zero total probability".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u: f64 = rng.random::<f64>() * running;
        let mut idx = cdf.partition_point(|&c| c <= u);
        // zero-probability states can never be selected
        while idx + 1 < probs.len() && probs[idx] == 0.0 {
            idx += 1;
        }
        tally[idx.min(probs.len() - 1)] += 1;
    }
    let entries = state.basis.states.iter().zip(tally).filter(|(_, n)| *n > 0).map(|(s, n)| (s.clone(), n)).collect();
    Ok(Counts { shots, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::u_directional_coupler;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn fs(v: &[usize]) -> FockState {
        FockState::new(v.to_vec())
    }

    fn hom_state() -> PhotonicState<f64> {
        let bs = u_directional_coupler(0.5).unwrap();
        evolve(&bs, &PhotonicState::from_fock(&fs(&[1, 1])).unwrap()).unwrap()
    }

    #[test]
    fn basis_ordering() {
        assert_eq!(enumerate_basis(2, 1).unwrap(), vec![fs(&[1, 0]), fs(&[0, 1])]);
        let b = enumerate_basis(4, 2).unwrap();
        assert_eq!(b.len(), 10);
        assert_eq!(b[0], fs(&[2, 0, 0, 0]));
        assert_eq!(b[9], fs(&[0, 0, 0, 2]));
        assert!(b.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(enumerate_basis(5, 0).unwrap(), vec![fs(&[0; 5])]);
        assert_eq!(basis_size(4, 2), 10);
        assert_eq!(basis_size(8, 3), 120);
    }

    #[test]
    fn basis_cap() {
        let err = enumerate_basis_with_cap(10, 5, 100).unwrap_err();
        assert_eq!(err, Error::BasisTooLarge { size: 2002, cap: 100 });
        assert!(err.to_string().contains("2002"));
        assert!(enumerate_basis(0, 1).is_err());
    }

    #[test]
    fn transition_examples() {
        let id = ComplexMatrix::<f64>::identity(4);
        let s = fs(&[1, 0, 1, 0]);
        assert_eq!(transition_amplitude(&id, &s, &s).unwrap(), Complex::new(1.0, 0.0));

        let bs = u_directional_coupler(0.5).unwrap();
        let coinc = transition_amplitude(&bs, &fs(&[1, 1]), &fs(&[1, 1])).unwrap();
        assert!(coinc.norm() < 1e-15);
        let bunched = transition_amplitude(&bs, &fs(&[1, 1]), &fs(&[2, 0])).unwrap();
        assert!((bunched - Complex::new(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);

        assert_eq!(
            transition_amplitude(&bs, &fs(&[1, 1]), &fs(&[1, 0])).unwrap_err(),
            Error::PhotonNumberMismatch { input: 2, output: 1 }
        );
        assert!(transition_amplitude(&bs, &fs(&[1, 1, 0]), &fs(&[1, 1, 0])).is_err());
    }

    #[test]
    fn hom_evolution_and_probabilities() {
        let out = hom_state();
        let i = Complex::new(0.0, FRAC_1_SQRT_2);
        assert!((out.amplitude(&fs(&[2, 0])) - i).norm() < 1e-15);
        assert!((out.amplitude(&fs(&[0, 2])) - i).norm() < 1e-15);
        assert!(out.amplitude(&fs(&[1, 1])).norm() < 1e-15);
        let probs = probabilities(&out);
        assert_eq!(probs.iter().map(|(s, _)| s.clone()).collect::<Vec<_>>(), enumerate_basis(2, 2).unwrap());
        assert!((probs[0].1 - 0.5).abs() < 1e-15);
        assert_eq!(probs[1].1, 0.0);
        assert!((probs[2].1 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identity_and_vacuum() {
        let terms = [(fs(&[1, 0, 1]), Complex::new(0.6, 0.0)), (fs(&[0, 2, 0]), Complex::new(0.0, 0.8))];
        let psi = PhotonicState::from_terms(3, 2, &terms).unwrap();
        let out = evolve(&ComplexMatrix::identity(3), &psi).unwrap();
        assert_eq!(out, psi);

        let vac = PhotonicState::<f64>::vacuum(3).unwrap();
        let u = crate::components::embed(&u_directional_coupler(0.3).unwrap(), &[0, 2], 3).unwrap();
        let out = evolve(&u, &vac).unwrap();
        assert_eq!(probabilities(&out), vec![(fs(&[0, 0, 0]), 1.0)]);
    }

    #[test]
    fn single_photon_fast_path_matches_permanents() {
        let u = u_directional_coupler(0.3).unwrap();
        let psi = PhotonicState::from_terms(
            2,
            1,
            &[(fs(&[1, 0]), Complex::new(0.6, 0.0)), (fs(&[0, 1]), Complex::new(0.0, 0.8))],
        )
        .unwrap();
        let fast = evolve(&u, &psi).unwrap();
        let slow = evolve_via_permanents(&u, &psi, &SimOptions::default()).unwrap();
        for (a, b) in fast.amplitudes().iter().zip(slow.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn width_mismatch() {
        let psi = PhotonicState::<f64>::from_fock(&fs(&[1, 0, 0])).unwrap();
        assert_eq!(
            evolve(&ComplexMatrix::identity(2), &psi).unwrap_err(),
            Error::WidthMismatch { expected: 2, got: 3 }
        );
    }

    #[test]
    fn permanent_cap_propagates() {
        let psi = PhotonicState::<f64>::from_fock(&fs(&[3, 0])).unwrap();
        let opts = SimOptions { permanent_cap: 2, ..SimOptions::default() };
        let err = evolve_with(&ComplexMatrix::identity(2), &psi, &opts).unwrap_err();
        assert_eq!(err, Error::PermanentTooLarge { size: 3, cap: 2 });
    }

    #[test]
    fn sampling_deterministic_state() {
        let psi = PhotonicState::<f64>::from_fock(&fs(&[0, 1, 1])).unwrap();
        let counts = sample(&psi, 99, 100).unwrap();
        assert_eq!(counts.entries, vec![(fs(&[0, 1, 1]), 100)]);
        assert!(sample(&psi, 1, 0).is_err());
    }

    #[test]
    fn sampling_hom_statistics() {
        let out = hom_state();
        let shots = 100_000u64;
        let counts = sample(&out, 2024, shots).unwrap();
        assert_eq!(counts.get(&fs(&[1, 1])), 0);
        let frac = counts.get(&fs(&[2, 0])) as f64 / shots as f64;
        let sigma = (0.25 / shots as f64).sqrt();
        assert!((frac - 0.5).abs() < 5.0 * sigma, "frac={frac}");
        assert_eq!(counts, sample(&out, 2024, shots).unwrap());
        assert_ne!(counts, sample(&out, 2025, shots).unwrap());
    }

    #[test]
    fn display() {
        assert_eq!(fs(&[1, 0, 2]).to_string(), "|1,0,2>");
    }
}
