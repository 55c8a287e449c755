//! The reconfigurable dual-rail SWAP gate, its error model, the selective
//! measurement stage built from it, and its overhead accounting.
//!
//! Gate netlist on the four rails `r1..r4` of two adjacent qubits:
//! crossing(r2, r3) → rbs(r1, r2) ∥ rbs(r3, r4) → crossing(r2, r3).
//! The swap preset sets both beam splitters to Pauli X; the identity preset
//! sets them to the identity, leaving only the self-inverse crossings.

use num_complex::Complex;
use num_traits::Zero;

use crate::components::{db_to_transmittance, Circuit, Component};
use crate::dualrail::{decode, encode, logical_matrix, process_fidelity, swap_matrix, DualRailRegister};
use crate::error::{Error, Result};
use crate::fock::{evolve, sample, FockState, PhotonicState};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// Operating point of the gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateMode {
    Swap,
    Identity,
}

impl GateMode {
    /// Logical target on two qubits.
    pub fn target<T: Real>(self) -> ComplexMatrix<T> {
        match self {
            GateMode::Swap => swap_matrix(),
            GateMode::Identity => ComplexMatrix::identity(4),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateMode::Swap => "swap",
            GateMode::Identity => "identity",
        }
    }
}

/// How the two waveguide crossings are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CrossingStyle {
    /// Ideal permutation element.
    #[default]
    Ideal,
    /// MZI with internal phase 0, which crosses the modes with an extra factor
    /// `i`. The crossing-free outer rails get a matching `π/2` shifter next to
    /// each crossing so every path accumulates the same phase.
    MziThetaZero,
}

/// Where the mismatch phase `e^{iη}` sits on the outer rail `r1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MismatchSite {
    /// Between the beam splitters and the second crossing.
    #[default]
    AfterRbs,
    /// At the gate input, before the beam splitters.
    BeforeRbs,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSettings<T: Real> {
    pub theta: T,
    pub phi: T,
    pub mismatch_eta: T,
    pub mismatch_site: MismatchSite,
    pub crossing_style: CrossingStyle,
    pub crossing_loss_db: T,
}

impl<T: Real> GateSettings<T> {
    /// θ = 0, φ = 0.
    pub fn swap() -> Self {
        Self::preset(GateMode::Swap)
    }

    /// θ = π, φ = π.
    pub fn identity() -> Self {
        Self::preset(GateMode::Identity)
    }

    pub fn preset(mode: GateMode) -> Self {
        let angle = match mode {
            GateMode::Swap => T::zero(),
            GateMode::Identity => T::PI(),
        };
        Self {
            theta: angle,
            phi: angle,
            mismatch_eta: T::zero(),
            mismatch_site: MismatchSite::default(),
            crossing_style: CrossingStyle::default(),
            crossing_loss_db: T::zero(),
        }
    }

    pub fn with_mismatch(mut self, eta: T) -> Self {
        self.mismatch_eta = eta;
        self
    }

    pub fn with_mismatch_site(mut self, site: MismatchSite) -> Self {
        self.mismatch_site = site;
        self
    }

    pub fn with_crossing_style(mut self, style: CrossingStyle) -> Self {
        self.crossing_style = style;
        self
    }

    pub fn with_crossing_loss(mut self, loss_db: T) -> Self {
        self.crossing_loss_db = loss_db;
        self
    }
}

/// Rails `[r1, r2, r3, r4]` of two adjacent qubits, lower modes first.
fn gate_rails(pair: (usize, usize), register: &DualRailRegister) -> Result<[usize; 4]> {
    let (qa, qb) = pair;
    let k = register.qubits();
    if qa >= k || qb >= k {
        return Err(Error::InvalidRegister(format!("qubit index {} out of range for {k} qubits", qa.max(qb))));
    }
    if qa.abs_diff(qb) != 1 {
        return Err(Error::NonAdjacentQubits(qa, qb));
    }
    let (a, b) = (register.rails()[qa], register.rails()[qb]);
    let (first, second) = if a.0.min(a.1) < b.0.min(b.1) { (a, b) } else { (b, a) };
    let rails = [first.0, first.1, second.0, second.1];
    let lo = *rails.iter().min().expect("four rails");
    let mut sorted = rails;
    sorted.sort_unstable();
    if sorted != [lo, lo + 1, lo + 2, lo + 3] {
        return Err(Error::NonAdjacentQubits(qa, qb));
    }
    Ok(rails)
}

fn push_crossing<T: Real>(circuit: &mut Circuit<T>, settings: &GateSettings<T>, r: &[usize; 4]) -> Result<()> {
    match settings.crossing_style {
        CrossingStyle::Ideal => {
            circuit.push(Component::crossing(r[1], r[2]).with_loss(settings.crossing_loss_db))?;
        }
        CrossingStyle::MziThetaZero => {
            let balance = T::FRAC_PI_2();
            circuit.push(Component::mzi(r[1], r[2], T::zero()).with_loss(settings.crossing_loss_db))?;
            circuit.push(Component::phase_shifter(r[0], balance))?;
            circuit.push(Component::phase_shifter(r[3], balance))?;
        }
    }
    Ok(())
}

/// Builds the gate on qubits `pair` of `register`. The qubits must be
/// neighbours whose rails cover four consecutive modes.
pub fn build_gate<T: Real>(
    settings: &GateSettings<T>,
    pair: (usize, usize),
    register: &DualRailRegister,
) -> Result<Circuit<T>> {
    let r = gate_rails(pair, register)?;
    let mut circuit = Circuit::new(register.width())?;
    let mismatch = !settings.mismatch_eta.is_zero();
    if mismatch && settings.mismatch_site == MismatchSite::BeforeRbs {
        circuit.push(Component::phase_shifter(r[0], settings.mismatch_eta))?;
    }
    push_crossing(&mut circuit, settings, &r)?;
    circuit.push(Component::rbs(r[0], r[1], settings.theta, settings.phi))?;
    circuit.push(Component::rbs(r[2], r[3], settings.theta, settings.phi))?;
    if mismatch && settings.mismatch_site == MismatchSite::AfterRbs {
        circuit.push(Component::phase_shifter(r[0], settings.mismatch_eta))?;
    }
    push_crossing(&mut circuit, settings, &r)?;
    Ok(circuit)
}

/// Fidelity of the two-qubit gate against `target` for each mismatch phase,
/// in input order.
pub fn mismatch_sweep<T: Real>(base: &GateSettings<T>, etas: &[T], target: GateMode) -> Result<Vec<(T, T)>> {
    if etas.is_empty() {
        return Err(Error::InvalidParameter("mismatch sweep needs at least one phase".into()));
    }
    let register = DualRailRegister::consecutive(2)?;
    let target_matrix = target.target();
    etas.iter()
        .map(|&eta| {
            let circuit = build_gate(&base.with_mismatch(eta), (0, 1), &register)?;
            let gate = logical_matrix(&circuit, &register)?;
            Ok((eta, process_fidelity(&gate, &target_matrix)?))
        })
        .collect()
}

/// Whether the stage routes the qubit to the detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StageMode {
    Measure,
    Bypass,
}

impl StageMode {
    pub fn name(self) -> &'static str {
        match self {
            StageMode::Measure => "measure",
            StageMode::Bypass => "bypass",
        }
    }
}

/// Selective measurement: the SWAP gate between a data qubit and an empty
/// rail pair terminated by photon-number-resolving detectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementStage<T: Real> {
    pub mode: StageMode,
    pub circuit: Circuit<T>,
    pub qubit_rails: (usize, usize),
    pub ancilla_rails: (usize, usize),
    /// Detector modes for outcomes 0 and 1.
    pub detectors: [usize; 2],
}

/// Builds the stage over `width` modes. The mismatch phase sits on the
/// qubit's `|0⟩` rail at the stage input, so it reaches the detectors in
/// measure mode and the output port in bypass mode.
pub fn build_measurement_stage<T: Real>(
    mode: StageMode,
    qubit_rails: (usize, usize),
    ancilla_rails: (usize, usize),
    width: usize,
    mismatch_eta: T,
) -> Result<MeasurementStage<T>> {
    let (first, second) = if qubit_rails.0.min(qubit_rails.1) < ancilla_rails.0.min(ancilla_rails.1) {
        (qubit_rails, ancilla_rails)
    } else {
        (ancilla_rails, qubit_rails)
    };
    let register = DualRailRegister::new(vec![first, second], width)?;
    let preset = match mode {
        StageMode::Measure => GateMode::Swap,
        StageMode::Bypass => GateMode::Identity,
    };
    let gate = build_gate(&GateSettings::preset(preset), (0, 1), &register)?;
    let mut circuit = Circuit::new(width)?;
    if !mismatch_eta.is_zero() {
        circuit.push(Component::phase_shifter(qubit_rails.0, mismatch_eta))?;
    }
    circuit.extend(&gate)?;
    Ok(MeasurementStage { mode, circuit, qubit_rails, ancilla_rails, detectors: [ancilla_rails.0, ancilla_rails.1] })
}

impl<T: Real> MeasurementStage<T> {
    /// Evolves `input` through the stage. The ancilla rails must be empty in
    /// every term of the input.
    pub fn run(&self, input: &PhotonicState<T>) -> Result<PhotonicState<T>> {
        for (fock, amp) in input.basis().states().iter().zip(input.amplitudes()) {
            if amp.is_zero() {
                continue;
            }
            for m in [self.ancilla_rails.0, self.ancilla_rails.1] {
                if fock.occupations()[m] > 0 {
                    return Err(Error::OccupiedAncilla(m));
                }
            }
        }
        evolve(&self.circuit.compile()?.transfer, input)
    }

    /// Probability of at least one photon at each detector.
    pub fn detector_probabilities(&self, output: &PhotonicState<T>) -> (T, T) {
        let mut p = (T::zero(), T::zero());
        for (fock, prob) in crate::fock::probabilities(output) {
            if fock.occupations()[self.detectors[0]] > 0 {
                p.0 = p.0 + prob;
            }
            if fock.occupations()[self.detectors[1]] > 0 {
                p.1 = p.1 + prob;
            }
        }
        p
    }
}

/// Shot-based detector counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectorCounts {
    pub shots: u64,
    pub seed: u64,
    pub zero: u64,
    pub one: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementStageReport<T: Real> {
    pub mode: StageMode,
    pub mismatch_eta: T,
    /// Detector click probabilities `(p0, p1)`.
    pub outcome_probabilities: (T, T),
    /// Amplitudes reaching the detector rails (measure mode).
    pub detected_amplitudes: Option<(Complex<T>, Complex<T>)>,
    /// Qubit amplitudes leaving the stage (bypass mode).
    pub bypass_output_amplitudes: Option<(Complex<T>, Complex<T>)>,
    pub counts: Option<DetectorCounts>,
}

/// Runs a single qubit `(alpha, beta)` through a four-mode stage with the
/// qubit on modes (0, 1) and the detectors on modes (2, 3). Counts are drawn
/// only in measure mode and only when `shots` is given.
pub fn measurement_stats<T: Real>(
    qubit: (Complex<T>, Complex<T>),
    mode: StageMode,
    mismatch_eta: T,
    shots: Option<(u64, u64)>,
) -> Result<MeasurementStageReport<T>> {
    let stage = build_measurement_stage(mode, (0, 1), (2, 3), 4, mismatch_eta)?;
    let qubit_register = DualRailRegister::new(vec![stage.qubit_rails], 4)?;
    let input = encode(&[qubit.0, qubit.1], &qubit_register)?;
    let output = stage.run(&input)?;
    let outcome_probabilities = stage.detector_probabilities(&output);

    let mut report = MeasurementStageReport {
        mode,
        mismatch_eta,
        outcome_probabilities,
        detected_amplitudes: None,
        bypass_output_amplitudes: None,
        counts: None,
    };
    match mode {
        StageMode::Measure => {
            let [d0, d1] = stage.detectors;
            report.detected_amplitudes =
                Some((output.amplitude(&FockState::single(4, d0)), output.amplitude(&FockState::single(4, d1))));
            if let Some((shots, seed)) = shots {
                let drawn = sample(&output, seed, shots)?;
                report.counts = Some(DetectorCounts {
                    shots,
                    seed,
                    zero: drawn.get(&FockState::single(4, d0)),
                    one: drawn.get(&FockState::single(4, d1)),
                });
            }
        }
        StageMode::Bypass => {
            let (amps, _) = decode(&output, &qubit_register)?;
            report.bypass_output_amplitudes = Some((amps[0], amps[1]));
        }
    }
    Ok(report)
}

/// Success probability of one heralded linear-optical CNOT.
pub const HERALDED_CNOT_SUCCESS: f64 = 1.0 / 16.0;
/// Success probability of one unheralded, ancilla-free linear-optical CNOT.
pub const UNHERALDED_CNOT_SUCCESS: f64 = 1.0 / 9.0;
/// A SWAP decomposes into three CNOTs.
pub const CNOTS_PER_SWAP: i32 = 3;
/// Beam splitters and crossings in one gate.
pub const RBS_PER_GATE: usize = 2;
pub const CROSSINGS_PER_GATE: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct OverheadReport<T: Real> {
    pub loss_db_per_crossing: T,
    /// Per-crossing power transmittance.
    pub transmittance: T,
    pub crossings_per_photon: u32,
    /// Probability that one photon survives its crossings.
    pub photon_survival: T,
    /// Probability that both photons of a two-qubit gate survive.
    pub gate_success: T,
    pub heralded_cnot_swap_success: T,
    pub unheralded_cnot_swap_success: T,
}

/// Loss budget of one gate against the three-CNOT baseline.
pub fn overhead_report<T: Real>(loss_db_per_crossing: T, crossings_per_photon: u32) -> Result<OverheadReport<T>> {
    if !(loss_db_per_crossing >= T::zero() && loss_db_per_crossing.is_finite()) {
        return Err(Error::InvalidParameter(format!("crossing loss {loss_db_per_crossing} dB must be non-negative")));
    }
    let transmittance = db_to_transmittance(loss_db_per_crossing);
    let photon_survival = transmittance.powi(crossings_per_photon as i32);
    Ok(OverheadReport {
        loss_db_per_crossing,
        transmittance,
        crossings_per_photon,
        photon_survival,
        gate_success: photon_survival * photon_survival,
        heralded_cnot_swap_success: T::lit(HERALDED_CNOT_SUCCESS).powi(CNOTS_PER_SWAP),
        unheralded_cnot_swap_success: T::lit(UNHERALDED_CNOT_SUCCESS).powi(CNOTS_PER_SWAP),
    })
}
