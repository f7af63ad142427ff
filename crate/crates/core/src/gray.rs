//! Two-point swaps synthesized from Gray codes.
//!
//! A Gray path `s = g_1, g_2, …, g_m = t` changes one bit per step. Step `i`
//! is realized by a multi-controlled X whose target is the bit where `g_i`
//! and `g_{i+1}` differ and whose controls carry the remaining bits of
//! `g_i`; that gate exchanges exactly `|g_i⟩` and `|g_{i+1}⟩`. The sequence
//! `C_1 C_2 … C_{m-1} … C_2 C_1` walks `s` up to `t` and `g_{m-1}` back
//! down to `s`, leaving every other basis state in place, for `2m - 3` gates.

use std::fmt;

use crate::error::{Error, Result};
use crate::gate::{Circuit, ControlPattern, Gate};
use crate::geometry::{BasisIndex, MAX_QUBITS};

/// A sequence of `n`-bit strings where neighbours differ in one bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayPath {
    qubits: usize,
    elements: Vec<usize>,
}

fn check_endpoints(s: usize, t: usize, qubits: usize) -> Result<()> {
    if qubits == 0 || qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits { qubits, max: MAX_QUBITS });
    }
    for v in [s, t] {
        if v >> qubits != 0 {
            return Err(Error::IndexOutOfRange { index: v, qubits });
        }
    }
    if s == t {
        return Err(Error::SamePoints(s));
    }
    Ok(())
}

impl GrayPath {
    /// Validates an explicit list of elements.
    pub fn new(qubits: usize, elements: Vec<usize>) -> Result<Self> {
        if elements.len() < 2 {
            return Err(Error::InvalidGrayPath("needs at least two elements".into()));
        }
        for &e in &elements {
            if qubits > MAX_QUBITS || e >> qubits != 0 {
                return Err(Error::IndexOutOfRange { index: e, qubits });
            }
        }
        for (i, w) in elements.windows(2).enumerate() {
            if (w[0] ^ w[1]).count_ones() != 1 {
                return Err(Error::InvalidGrayPath(format!(
                    "elements {} and {} differ in {} bits",
                    i + 1,
                    i + 2,
                    (w[0] ^ w[1]).count_ones()
                )));
            }
        }
        Ok(GrayPath { qubits, elements })
    }

    /// Path from `s` to `t` flipping the differing bits in the given order of
    /// qubit positions; `order` must list each differing position once.
    pub fn with_flip_order(s: usize, t: usize, qubits: usize, order: &[usize]) -> Result<Self> {
        check_endpoints(s, t, qubits)?;
        let mut elements = vec![s];
        let mut cur = s;
        for &q in order {
            if q == 0 || q > qubits {
                return Err(Error::QubitOutOfRange { qubit: q, width: qubits });
            }
            cur ^= 1 << (qubits - q);
            elements.push(cur);
        }
        if cur != t {
            return Err(Error::InvalidGrayPath("flip order does not end at t".into()));
        }
        GrayPath::new(qubits, elements)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> usize {
        self.elements[0]
    }

    pub fn last(&self) -> usize {
        *self.elements.last().unwrap()
    }

    /// Qubit position changed between element `step` and `step + 1` (0-based step).
    pub fn flipped_qubit(&self, step: usize) -> usize {
        let diff = self.elements[step] ^ self.elements[step + 1];
        self.qubits - diff.trailing_zeros() as usize
    }
}

/// The canonical path: flip the differing bits in ascending qubit position.
pub fn gray_path(s: usize, t: usize, qubits: usize) -> Result<GrayPath> {
    check_endpoints(s, t, qubits)?;
    let diff = s ^ t;
    let order: Vec<usize> = (1..=qubits).filter(|&q| diff >> (qubits - q) & 1 == 1).collect();
    GrayPath::with_flip_order(s, t, qubits, &order)
}

/// One row per element, bits separated by spaces.
impl fmt::Display for GrayPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &e in &self.elements {
            let bits = BasisIndex::new(e, self.qubits).map_err(|_| fmt::Error)?.to_bits();
            let row: Vec<String> = bits.chars().map(String::from).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// The gate taking `g_step` to `g_{step+1}` (and back).
fn step_gate(path: &GrayPath, step: usize) -> Result<Gate> {
    let n = path.qubits;
    let target = path.flipped_qubit(step);
    let g = path.elements[step];
    let pattern: Vec<bool> = (1..=n).filter(|&q| q != target).map(|q| g >> (n - q) & 1 == 1).collect();
    Ok(Gate::MultiControlledX(ControlPattern::full(n, target, &pattern)?))
}

/// Circuit exchanging the endpoints of `path`, emitted literally as the
/// mirrored sequence `C_1 … C_{m-1} … C_1`.
pub fn synth_from_path(path: &GrayPath) -> Result<Circuit> {
    let m = path.len();
    let label = format!(
        "swap {}<->{}",
        BasisIndex::new(path.first(), path.qubits)?,
        BasisIndex::new(path.last(), path.qubits)?
    );
    let mut c = Circuit::new(path.qubits, label);
    let up = 0..m - 1;
    let down = (0..m - 2).rev();
    for step in up.chain(down) {
        c.push(step_gate(path, step)?)?;
    }
    Ok(c)
}

/// Two-point swap `G_T` of basis states `s` and `t` on `qubits` qubits.
pub fn synth_two_point_swap(s: usize, t: usize, qubits: usize) -> Result<Circuit> {
    synth_from_path(&gray_path(s, t, qubits)?)
}
