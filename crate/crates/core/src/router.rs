//! Nearest-neighbour SWAP networks on a line of qubits.
//!
//! Networks are scheduled by odd-even transposition sort: alternate layers
//! compare pairs starting at even and odd positions, and swap only pairs that
//! are out of order. Each swap removes exactly one inversion, so the swap
//! count is optimal for adjacent transpositions, and `n` layers suffice.

use std::fmt;
use std::str::FromStr;

use crate::components::{db_to_transmittance, Circuit};
use crate::dualrail::DualRailRegister;
use crate::error::{Error, Result};
use crate::gate::{build_gate, GateSettings, CROSSINGS_PER_GATE, RBS_PER_GATE};
use crate::scalar::Real;

/// Qubit permutation as an image list: qubit `i` ends at position `image[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        if image.is_empty() {
            return Err(Error::InvalidPermutation("empty permutation".into()));
        }
        let mut seen = vec![false; image.len()];
        for &x in &image {
            if x >= image.len() {
                return Err(Error::InvalidPermutation(format!("index {x} out of range for {} qubits", image.len())));
            }
            if seen[x] {
                return Err(Error::InvalidPermutation(format!("duplicate index {x}")));
            }
            seen[x] = true;
        }
        Ok(Self(image))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// `n−1, …, 1, 0`.
    pub fn reversal(n: usize) -> Self {
        Self((0..n).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Number of pairs `i < j` with `image[i] > image[j]`.
    pub fn inversions(&self) -> usize {
        let n = self.0.len();
        (0..n).map(|i| (i + 1..n).filter(|&j| self.0[i] > self.0[j]).count()).sum()
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Comma-separated 0-based image list, e.g. `3,2,1,0`.
    fn from_str(s: &str) -> Result<Self> {
        let image = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPermutation(format!("bad index '{}'", tok.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(image)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Layers of disjoint adjacent transpositions. A layer entry `i` swaps
/// positions `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapNetwork {
    qubits: usize,
    layers: Vec<Vec<usize>>,
    target: Permutation,
}

impl SwapNetwork {
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn target(&self) -> &Permutation {
        &self.target
    }

    pub fn swap_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Transpositions in application order.
    pub fn swaps(&self) -> impl Iterator<Item = usize> + '_ {
        self.layers.iter().flatten().copied()
    }

    /// Qubit held at each position after applying every layer to the identity
    /// arrangement.
    pub fn arrangement(&self) -> Vec<usize> {
        let mut arr: Vec<usize> = (0..self.qubits).collect();
        for i in self.swaps() {
            arr.swap(i, i + 1);
        }
        arr
    }

    /// Image list actually produced by the network.
    pub fn realized(&self) -> Permutation {
        let mut image = vec![0; self.qubits];
        for (pos, q) in self.arrangement().into_iter().enumerate() {
            image[q] = pos;
        }
        Permutation(image)
    }

    /// Number of gates each qubit takes part in.
    pub fn participation(&self) -> Vec<usize> {
        let mut arr: Vec<usize> = (0..self.qubits).collect();
        let mut counts = vec![0; self.qubits];
        for i in self.swaps() {
            counts[arr[i]] += 1;
            counts[arr[i + 1]] += 1;
            arr.swap(i, i + 1);
        }
        counts
    }
}

/// Odd-even transposition schedule realizing `target`.
pub fn synthesize(target: &Permutation) -> SwapNetwork {
    let n = target.len();
    // dest[pos]: final position of the qubit currently at pos
    let mut dest = target.0.clone();
    let mut layers = Vec::new();
    for round in 0..n {
        if dest.windows(2).all(|w| w[0] < w[1]) {
            break;
        }
        let layer: Vec<usize> =
            (round % 2..n.saturating_sub(1)).step_by(2).filter(|&i| dest[i] > dest[i + 1]).collect();
        for &i in &layer {
            dest.swap(i, i + 1);
        }
        if !layer.is_empty() {
            layers.push(layer);
        }
    }
    SwapNetwork { qubits: n, layers, target: target.clone() }
}

/// Per-gate hardware counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapCost {
    pub rbs_per_swap: usize,
    pub crossings_per_swap: usize,
    /// Crossings traversed by each photon of a gate set to swap.
    pub crossings_per_photon_per_swap: usize,
}

impl Default for SwapCost {
    fn default() -> Self {
        Self { rbs_per_swap: RBS_PER_GATE, crossings_per_swap: CROSSINGS_PER_GATE, crossings_per_photon_per_swap: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkCost<T: Real> {
    pub swaps: usize,
    pub depth: usize,
    pub rbs: usize,
    pub crossings: usize,
    pub loss_db_per_crossing: T,
    /// Loss of every crossing in the network, summed.
    pub total_crossing_loss_db: T,
    /// Survival of a photon that would traverse every crossing.
    pub all_crossings_survival: T,
    /// Most crossings met by a single photon along its path.
    pub worst_path_crossings: usize,
    pub worst_path_loss_db: T,
    pub worst_path_survival: T,
    /// Probability that every photon survives, all gates in swap mode.
    pub network_success: T,
}

pub fn network_cost<T: Real>(
    net: &SwapNetwork,
    per_swap: &SwapCost,
    loss_db_per_crossing: T,
) -> Result<NetworkCost<T>> {
    if !(loss_db_per_crossing >= T::zero() && loss_db_per_crossing.is_finite()) {
        return Err(Error::InvalidParameter(format!("crossing loss {loss_db_per_crossing} dB must be non-negative")));
    }
    let swaps = net.swap_count();
    let crossings = swaps * per_swap.crossings_per_swap;
    let per_photon = net.participation().into_iter().map(|p| p * per_swap.crossings_per_photon_per_swap);
    let worst_path_crossings = per_photon.clone().max().unwrap_or(0);
    let photon_crossings: usize = per_photon.sum();
    let t = db_to_transmittance(loss_db_per_crossing);
    let count = |k: usize| T::from_usize(k).expect("count fits scalar");
    let total_crossing_loss_db = loss_db_per_crossing * count(crossings);
    let worst_path_loss_db = loss_db_per_crossing * count(worst_path_crossings);
    Ok(NetworkCost {
        swaps,
        depth: net.depth(),
        rbs: swaps * per_swap.rbs_per_swap,
        crossings,
        loss_db_per_crossing,
        total_crossing_loss_db,
        all_crossings_survival: db_to_transmittance(total_crossing_loss_db),
        worst_path_crossings,
        worst_path_loss_db,
        worst_path_survival: db_to_transmittance(worst_path_loss_db),
        network_success: t.powi(photon_crossings as i32),
    })
}

/// Lowers the network to gate netlists over `2n` modes, qubit `q` on rails
/// `(2q, 2q+1)`. `settings` holds one entry per transposition in application
/// order.
pub fn emit_netlist<T: Real>(net: &SwapNetwork, settings: &[GateSettings<T>]) -> Result<Circuit<T>> {
    if settings.len() != net.swap_count() {
        return Err(Error::InvalidParameter(format!(
            "{} gate settings for {} swaps",
            settings.len(),
            net.swap_count()
        )));
    }
    let register = DualRailRegister::consecutive(net.qubits)?;
    let mut circuit = Circuit::new(register.width())?;
    for (i, s) in net.swaps().zip(settings) {
        circuit.extend(&build_gate(s, (i, i + 1), &register)?)?;
    }
    Ok(circuit)
}

/// [`emit_netlist`] with the same settings on every gate.
pub fn emit_netlist_uniform<T: Real>(net: &SwapNetwork, settings: &GateSettings<T>) -> Result<Circuit<T>> {
    emit_netlist(net, &vec![*settings; net.swap_count()])
}
