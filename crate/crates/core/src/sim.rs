//! Exact state-vector simulation.
//!
//! Amplitudes are indexed by the basis index with qubit 1 as the most
//! significant bit. Every kernel works in place through bit-masked index
//! iteration. Permutation gates never do arithmetic on amplitudes; they only
//! swap them, so permutation circuits are reproduced bit for bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::{Circuit, ControlPattern, Gate, Matrix2, Polarity};
use crate::geometry::{qubit_mask, MAX_QUBITS};

/// Largest state the dense simulator will allocate.
pub const MAX_STATE_QUBITS: usize = 30;

/// A dense `2^n` amplitude vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `qubits` qubits.
    pub fn zero(qubits: usize) -> Result<Self> {
        StateVector::basis(qubits, 0)
    }

    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        if qubits > MAX_STATE_QUBITS {
            return Err(Error::TooManyQubits { qubits, max: MAX_STATE_QUBITS });
        }
        if index >> qubits != 0 {
            return Err(Error::IndexOutOfRange { index, qubits });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { qubits, amplitudes })
    }

    /// Wraps an amplitude vector whose length is a power of two. No
    /// normalization is applied.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::BadStateLength(len));
        }
        let qubits = len.trailing_zeros() as usize;
        if qubits > MAX_STATE_QUBITS {
            return Err(Error::TooManyQubits { qubits, max: MAX_STATE_QUBITS });
        }
        Ok(StateVector { qubits, amplitudes })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        StateVector::from_amplitudes(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest elementwise distance to another state of the same width.
    pub fn max_distance(&self, other: &StateVector) -> f64 {
        assert_eq!(self.qubits, other.qubits);
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    fn check_qubit(&self, qubit: usize) -> Result<usize> {
        if qubit == 0 || qubit > self.qubits {
            Err(Error::QubitOutOfRange { qubit, width: self.qubits })
        } else {
            Ok(qubit_mask(qubit, self.qubits))
        }
    }
}

#[inline]
fn mix(u: &Matrix2, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    (u.0[0][0] * a + u.0[0][1] * b, u.0[1][0] * a + u.0[1][1] * b)
}

/// Applies `u` to one qubit.
pub fn apply_single(state: &mut StateVector, target: usize, u: &Matrix2) -> Result<()> {
    u.check_unitary()?;
    let t = state.check_qubit(target)?;
    let amps = &mut state.amplitudes;
    if u.as_permutation() == Some([1, 0]) {
        for base in (0..amps.len()).step_by(2 * t) {
            for i in base..base + t {
                amps.swap(i, i | t);
            }
        }
        return Ok(());
    }
    for base in (0..amps.len()).step_by(2 * t) {
        for i in base..base + t {
            let (lo, hi) = mix(u, amps[i], amps[i | t]);
            amps[i] = lo;
            amps[i | t] = hi;
        }
    }
    Ok(())
}

/// Applies `u` to `target` on the subspace where `control` equals `polarity`
/// (`U_C1` for polarity one, `U_C0` for polarity zero).
pub fn apply_controlled(
    state: &mut StateVector,
    u: &Matrix2,
    control: usize,
    polarity: Polarity,
    target: usize,
) -> Result<()> {
    u.check_unitary()?;
    if control == target {
        return Err(Error::ControlIsTarget(target));
    }
    let c = state.check_qubit(control)?;
    let t = state.check_qubit(target)?;
    let want = if polarity.bit() { c } else { 0 };
    let amps = &mut state.amplitudes;
    for base in (0..amps.len()).step_by(2 * t) {
        for i in base..base + t {
            if i & c != want {
                continue;
            }
            let (lo, hi) = mix(u, amps[i], amps[i | t]);
            amps[i] = lo;
            amps[i | t] = hi;
        }
    }
    Ok(())
}

/// Flips the target wherever the controls match the pattern.
///
/// Basis states are enumerated over the free qubits only (neither control
/// nor target), so a full `C^n(X_k)` pattern touches a single amplitude pair.
pub fn apply_cnx(state: &mut StateVector, pattern: &ControlPattern) -> Result<()> {
    if pattern.max_qubit() > state.qubits {
        return Err(Error::WidthMismatch { circuit: pattern.max_qubit(), state: state.qubits });
    }
    let n = state.qubits;
    let t = qubit_mask(pattern.target(), n);
    let (mask, value) = pattern.masks(n);
    let free = (state.amplitudes.len() - 1) & !(mask | t);
    let amps = &mut state.amplitudes;
    let mut sub = 0usize;
    loop {
        let i = sub | value;
        amps.swap(i, i | t);
        sub = sub.wrapping_sub(free) & free;
        if sub == 0 {
            break;
        }
    }
    Ok(())
}

/// Exchanges qubits `a` and `b`.
pub fn apply_swap(state: &mut StateVector, a: usize, b: usize) -> Result<()> {
    if a == b {
        return Err(Error::SwapSameQubit(a));
    }
    let ma = state.check_qubit(a)?;
    let mb = state.check_qubit(b)?;
    let amps = &mut state.amplitudes;
    for i in 0..amps.len() {
        if i & ma != 0 && i & mb == 0 {
            amps.swap(i, i ^ ma ^ mb);
        }
    }
    Ok(())
}

pub fn apply_gate(state: &mut StateVector, gate: &Gate) -> Result<()> {
    match gate {
        Gate::Single { target, matrix } => apply_single(state, *target, matrix),
        Gate::Controlled { control, polarity, target, matrix } => {
            apply_controlled(state, matrix, *control, *polarity, *target)
        }
        Gate::MultiControlledX(p) => apply_cnx(state, p),
        Gate::Swap { a, b } => apply_swap(state, *a, *b),
    }
}

/// Runs the gates of `circuit` in list order.
pub fn run(circuit: &Circuit, state: &mut StateVector) -> Result<()> {
    if circuit.width() != state.qubits {
        return Err(Error::WidthMismatch { circuit: circuit.width(), state: state.qubits });
    }
    for g in circuit.gates() {
        apply_gate(state, g)?;
    }
    Ok(())
}

/// Image of the basis state `|index⟩` under a gate, if it is again a basis
/// state with coefficient exactly 1.
pub fn gate_basis_image(gate: &Gate, index: usize, qubits: usize) -> Option<usize> {
    let through = |u: &Matrix2, target: usize| {
        let t = qubit_mask(target, qubits);
        let bit = (index & t != 0) as usize;
        let image = u.as_permutation()?;
        Some(if image[bit] == 1 { index | t } else { index & !t })
    };
    match gate {
        Gate::Single { target, matrix } => through(matrix, *target),
        Gate::Controlled { control, polarity, target, matrix } => {
            let fires = (index & qubit_mask(*control, qubits) != 0) == polarity.bit();
            if fires {
                through(matrix, *target)
            } else {
                Some(index)
            }
        }
        Gate::MultiControlledX(p) => {
            let (mask, value) = p.masks(qubits);
            if index & mask == value {
                Some(index ^ qubit_mask(p.target(), qubits))
            } else {
                Some(index)
            }
        }
        Gate::Swap { a, b } => {
            let (ma, mb) = (qubit_mask(*a, qubits), qubit_mask(*b, qubits));
            if (index & ma != 0) != (index & mb != 0) {
                Some(index ^ ma ^ mb)
            } else {
                Some(index)
            }
        }
    }
}

/// Pushes the basis state `|index⟩` through a whole circuit.
///
/// Fails with [`Error::NotPermutation`] on the first gate that sends it to
/// anything but a single basis state with unit coefficient.
pub fn basis_image(circuit: &Circuit, index: usize) -> Result<usize> {
    let n = circuit.width();
    if n > MAX_QUBITS || index >> n != 0 {
        return Err(Error::IndexOutOfRange { index, qubits: n });
    }
    circuit.gates().iter().try_fold(index, |i, g| gate_basis_image(g, i, n)).ok_or(Error::NotPermutation(index))
}
