//! Linear-optical simulation of a deterministic, reconfigurable SWAP gate for
//! dual-rail photonic qubits.
//!
//! The crate models passive optical elements, compiles netlists into mode
//! unitaries, evolves multi-photon Fock states through them with permanents,
//! and reads results back in the dual-rail logical space. On top of that it
//! builds the two-qubit SWAP/identity gate, a selective measurement stage, and
//! nearest-neighbour SWAP networks with loss budgets.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the precision.

pub mod cli;
pub mod components;
pub mod dualrail;
pub mod error;
pub mod fock;
pub mod gate;
pub mod linalg;
pub mod netlist;
pub mod router;
pub mod scalar;

pub use components::{compile, embed, Circuit, CompiledCircuit, Component, ComponentKind};
pub use dualrail::{decode, encode, logical_matrix, process_fidelity, DualRailRegister, LogicalGateMatrix};
pub use error::{Error, Result};
pub use fock::{enumerate_basis, evolve, probabilities, sample, transition_amplitude, FockState, PhotonicState};
pub use gate::{build_gate, mismatch_sweep, overhead_report, CrossingStyle, GateMode, GateSettings, StageMode};
pub use linalg::ComplexMatrix;
pub use netlist::{parse_netlist, serialize};
pub use router::{emit_netlist, network_cost, synthesize, Permutation, SwapNetwork};
pub use scalar::Real;

pub use num_complex::{Complex, Complex32, Complex64};

pub type CMatrix = ComplexMatrix<f64>;
pub type CMatrix32 = ComplexMatrix<f32>;
pub type Circuit64 = Circuit<f64>;
pub type Circuit32 = Circuit<f32>;
pub type State64 = PhotonicState<f64>;
pub type State32 = PhotonicState<f32>;
pub type Gate64 = LogicalGateMatrix<f64>;
pub type Gate32 = LogicalGateMatrix<f32>;
pub type Settings64 = GateSettings<f64>;
pub type Settings32 = GateSettings<f32>;
