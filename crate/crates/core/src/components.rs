//! Optical elements, their placement on modes, and netlist compilation.
//!
//! Matrices act on creation operators: column `i` of a mode unitary holds the
//! output amplitudes of a photon entering mode `i`. A circuit is a netlist in
//! propagation order; compiling it yields `U = E_N ··· E_2 · E_1`.

use num_complex::Complex;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{cis, Real};

/// `[[e^{iφ}]]`.
pub fn u_phase_shifter<T: Real>(phi: T) -> ComplexMatrix<T> {
    ComplexMatrix::from_rows(&[[cis(phi)]])
}

/// Directional coupler with power transmission `eta_c`, symmetric convention
/// with `i` on the cross terms.
pub fn u_directional_coupler<T: Real>(eta_c: T) -> Result<ComplexMatrix<T>> {
    if !(eta_c >= T::zero() && eta_c <= T::one()) {
        return Err(Error::InvalidParameter(format!("coupling ratio {eta_c} outside [0, 1]")));
    }
    let t = Complex::new(eta_c.sqrt(), T::zero());
    let r = Complex::new(T::zero(), (T::one() - eta_c).sqrt());
    Ok(ComplexMatrix::from_rows(&[[t, r], [r, t]]))
}

/// Balanced MZI: coupler(½) · diag(e^{iθ}, 1) · coupler(½).
///
/// Equals `i·e^{iθ/2}·[[sin θ/2, cos θ/2], [cos θ/2, −sin θ/2]]`.
pub fn u_mzi<T: Real>(theta: T) -> ComplexMatrix<T> {
    let half = u_directional_coupler(T::lit(0.5)).expect("balanced coupler");
    let inner = ComplexMatrix::diagonal(&[cis(theta), Complex::one()]);
    half.matmul(&inner).and_then(|m| m.matmul(&half)).expect("2x2 product")
}

/// Reconfigurable beam splitter in canonical form:
/// `[[sin θ/2, cos θ/2], [e^{iφ} cos θ/2, −e^{iφ} sin θ/2]]`.
///
/// This is the matrix used for `rbs` elements everywhere in the crate.
pub fn u_rbs<T: Real>(theta: T, phi: T) -> ComplexMatrix<T> {
    let half = theta / T::lit(2.0);
    let (s, c) = (Complex::new(half.sin(), T::zero()), Complex::new(half.cos(), T::zero()));
    let e = cis(phi);
    ComplexMatrix::from_rows(&[[s, c], [e * c, -(e * s)]])
}

/// RBS as built on chip: MZI followed by an external phase shifter on the
/// second mode. Matches [`u_rbs`] up to the global phase `i·e^{iθ/2}`.
pub fn u_rbs_physical<T: Real>(theta: T, phi: T) -> ComplexMatrix<T> {
    let outer = ComplexMatrix::diagonal(&[Complex::one(), cis(phi)]);
    outer.matmul(&u_mzi(theta)).expect("2x2 product")
}

/// Ideal lossless waveguide crossing.
pub fn u_crossing<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]])
}

/// Embeds a 1×1 or 2×2 local matrix on `modes` of an `width`-mode identity.
/// The modes need not be adjacent.
pub fn embed<T: Real>(local: &ComplexMatrix<T>, modes: &[usize], width: usize) -> Result<ComplexMatrix<T>> {
    check_modes(modes, width)?;
    if local.rows() != modes.len() || local.cols() != modes.len() {
        return Err(Error::ModeArity { expected: local.rows(), got: modes.len() });
    }
    let mut out = ComplexMatrix::identity(width);
    for (a, &ra) in modes.iter().enumerate() {
        for (b, &rb) in modes.iter().enumerate() {
            out[(ra, rb)] = local[(a, b)];
        }
    }
    Ok(out)
}

fn check_modes(modes: &[usize], width: usize) -> Result<()> {
    for (k, &m) in modes.iter().enumerate() {
        if m >= width {
            return Err(Error::ModeOutOfRange { mode: m, width });
        }
        if modes[..k].contains(&m) {
            return Err(Error::DuplicateMode(m));
        }
    }
    Ok(())
}

/// Element type together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComponentKind<T: Real> {
    PhaseShifter { phi: T },
    DirectionalCoupler { eta_c: T },
    Mzi { theta: T },
    Rbs { theta: T, phi: T },
    Crossing,
}

impl<T: Real> ComponentKind<T> {
    pub fn arity(&self) -> usize {
        match self {
            ComponentKind::PhaseShifter { .. } => 1,
            _ => 2,
        }
    }

    /// Local matrix of the element.
    pub fn matrix(&self) -> Result<ComplexMatrix<T>> {
        Ok(match *self {
            ComponentKind::PhaseShifter { phi } => u_phase_shifter(phi),
            ComponentKind::DirectionalCoupler { eta_c } => u_directional_coupler(eta_c)?,
            ComponentKind::Mzi { theta } => u_mzi(theta),
            ComponentKind::Rbs { theta, phi } => u_rbs(theta, phi),
            ComponentKind::Crossing => u_crossing(),
        })
    }

    fn params(&self) -> Vec<T> {
        match *self {
            ComponentKind::PhaseShifter { phi } => vec![phi],
            ComponentKind::DirectionalCoupler { eta_c } => vec![eta_c],
            ComponentKind::Mzi { theta } => vec![theta],
            ComponentKind::Rbs { theta, phi } => vec![theta, phi],
            ComponentKind::Crossing => vec![],
        }
    }
}

/// An element placed on one or two modes (0-based), with insertion loss in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct Component<T: Real> {
    pub kind: ComponentKind<T>,
    pub modes: Vec<usize>,
    pub loss_db: T,
}

impl<T: Real> Component<T> {
    pub fn new(kind: ComponentKind<T>, modes: Vec<usize>) -> Self {
        Self { kind, modes, loss_db: T::zero() }
    }

    pub fn phase_shifter(mode: usize, phi: T) -> Self {
        Self::new(ComponentKind::PhaseShifter { phi }, vec![mode])
    }

    pub fn coupler(a: usize, b: usize, eta_c: T) -> Self {
        Self::new(ComponentKind::DirectionalCoupler { eta_c }, vec![a, b])
    }

    pub fn mzi(a: usize, b: usize, theta: T) -> Self {
        Self::new(ComponentKind::Mzi { theta }, vec![a, b])
    }

    pub fn rbs(a: usize, b: usize, theta: T, phi: T) -> Self {
        Self::new(ComponentKind::Rbs { theta, phi }, vec![a, b])
    }

    pub fn crossing(a: usize, b: usize) -> Self {
        Self::new(ComponentKind::Crossing, vec![a, b])
    }

    pub fn with_loss(mut self, loss_db: T) -> Self {
        self.loss_db = loss_db;
        self
    }

    /// Power transmittance `10^(−dB/10)`.
    pub fn transmittance(&self) -> T {
        db_to_transmittance(self.loss_db)
    }

    /// Checks arity, parameter ranges and mode indices against `width`.
    pub fn validate(&self, width: usize) -> Result<()> {
        if self.modes.len() != self.kind.arity() {
            return Err(Error::ModeArity { expected: self.kind.arity(), got: self.modes.len() });
        }
        check_modes(&self.modes, width)?;
        if self.kind.params().iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter("non-finite component parameter".into()));
        }
        if let ComponentKind::DirectionalCoupler { eta_c } = self.kind {
            u_directional_coupler(eta_c)?;
        }
        if !(self.loss_db >= T::zero() && self.loss_db.is_finite()) {
            return Err(Error::InvalidParameter(format!("loss {} dB must be finite and non-negative", self.loss_db)));
        }
        Ok(())
    }

    /// Width-`m` matrix of this element alone (lossless part).
    pub fn embedded(&self, width: usize) -> Result<ComplexMatrix<T>> {
        self.validate(width)?;
        embed(&self.kind.matrix()?, &self.modes, width)
    }
}

/// `10^(−dB/10)`.
pub fn db_to_transmittance<T: Real>(loss_db: T) -> T {
    T::lit(10.0).powf(-loss_db / T::lit(10.0))
}

/// Ordered netlist over `width` modes; elements apply first to last.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T: Real> {
    width: usize,
    elements: Vec<Component<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new(width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidParameter("circuit width must be at least 1".into()));
        }
        Ok(Self { width, elements: Vec::new() })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn elements(&self) -> &[Component<T>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn push(&mut self, component: Component<T>) -> Result<&mut Self> {
        component.validate(self.width)?;
        self.elements.push(component);
        Ok(self)
    }

    /// Builder form of [`Circuit::push`].
    pub fn with(mut self, component: Component<T>) -> Result<Self> {
        self.push(component)?;
        Ok(self)
    }

    /// Appends every element of `other`, which must have the same width.
    pub fn extend(&mut self, other: &Circuit<T>) -> Result<()> {
        if other.width != self.width {
            return Err(Error::WidthMismatch { expected: self.width, got: other.width });
        }
        self.elements.extend(other.elements.iter().cloned());
        Ok(())
    }

    /// Same elements in reverse order.
    pub fn reversed(&self) -> Self {
        Self { width: self.width, elements: self.elements.iter().rev().cloned().collect() }
    }

    pub fn total_loss_db(&self) -> T {
        self.elements.iter().fold(T::zero(), |acc, c| acc + c.loss_db)
    }

    pub fn is_lossless(&self) -> bool {
        self.elements.iter().all(|c| c.loss_db.is_zero())
    }

    pub fn compile(&self) -> Result<CompiledCircuit<T>> {
        compile(self)
    }
}

/// Result of compiling a netlist.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledCircuit<T: Real> {
    /// Lossless mode unitary.
    pub unitary: ComplexMatrix<T>,
    /// Transfer matrix with each element's `√T` amplitude factor applied to its
    /// output modes. Sub-unitary when any loss is present; evolving through it
    /// post-selects on no photon being lost.
    pub transfer: ComplexMatrix<T>,
    /// Product of `√T` over the elements touching each mode index.
    pub mode_attenuation: Vec<T>,
}

/// Multiplies the element matrix into `acc` from the left, touching only the
/// element's rows.
fn apply_left<T: Real>(acc: &mut ComplexMatrix<T>, local: &ComplexMatrix<T>, modes: &[usize], amp: T) {
    let cols = acc.cols();
    let scale = Complex::new(amp, T::zero());
    match *modes {
        [m] => {
            let f = local[(0, 0)] * scale;
            for c in 0..cols {
                acc[(m, c)] = acc[(m, c)] * f;
            }
        }
        [a, b] => {
            let (l00, l01, l10, l11) = (local[(0, 0)], local[(0, 1)], local[(1, 0)], local[(1, 1)]);
            for c in 0..cols {
                let (xa, xb) = (acc[(a, c)], acc[(b, c)]);
                acc[(a, c)] = (l00 * xa + l01 * xb) * scale;
                acc[(b, c)] = (l10 * xa + l11 * xb) * scale;
            }
        }
        _ => unreachable!("validated arity"),
    }
}

/// Compiles a netlist into its mode unitary plus loss annotations.
pub fn compile<T: Real>(circuit: &Circuit<T>) -> Result<CompiledCircuit<T>> {
    let width = circuit.width;
    let mut unitary = ComplexMatrix::identity(width);
    let mut transfer = ComplexMatrix::identity(width);
    let mut mode_attenuation = vec![T::one(); width];
    let lossless = circuit.is_lossless();
    for element in &circuit.elements {
        element.validate(width)?;
        let local = element.kind.matrix()?;
        apply_left(&mut unitary, &local, &element.modes, T::one());
        if !lossless {
            let amp = element.transmittance().sqrt();
            apply_left(&mut transfer, &local, &element.modes, amp);
            for &m in &element.modes {
                mode_attenuation[m] = mode_attenuation[m] * amp;
            }
        }
    }
    if lossless {
        transfer = unitary.clone();
    }
    Ok(CompiledCircuit { unitary, transfer, mode_attenuation })
}
