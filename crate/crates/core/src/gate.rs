//! Gate algebra and circuits.
//!
//! Only the gates the transformations need are modelled: single-qubit
//! unitaries, singly controlled unitaries with either control polarity,
//! multi-controlled X gates with a bit pattern on their controls, and swaps.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for the unitarity check `U·U† = I`, applied elementwise.
pub const UNITARY_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2×2 complex matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2(pub [[Complex64; 2]; 2]);

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2([[ONE, ZERO], [ZERO, ONE]]);
    pub const X: Matrix2 = Matrix2([[ZERO, ONE], [ONE, ZERO]]);

    pub fn hadamard() -> Matrix2 {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Matrix2([[h, h], [h, -h]])
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Matrix2 {
        Matrix2(m.map(|row| row.map(|v| Complex64::new(v, 0.0))))
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    /// Largest elementwise deviation of `U·U†` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let u = &self.0;
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                let entry = u[r][0] * u[c][0].conj() + u[r][1] * u[c][1].conj();
                let expected = if r == c { ONE } else { ZERO };
                worst = worst.max((entry - expected).norm());
            }
        }
        worst
    }

    pub fn check_unitary(&self) -> Result<()> {
        let finite = self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite());
        let deviation = if finite { self.unitarity_deviation() } else { f64::INFINITY };
        if deviation <= UNITARY_TOLERANCE {
            Ok(())
        } else {
            Err(Error::NonUnitary { deviation })
        }
    }

    /// For a matrix that maps each basis state to exactly one basis state
    /// with coefficient 1, the image of each column.
    pub fn as_permutation(&self) -> Option<[usize; 2]> {
        let mut image = [0usize; 2];
        for (col, slot) in image.iter_mut().enumerate() {
            match (self.0[0][col], self.0[1][col]) {
                (a, b) if a == ONE && b == ZERO => *slot = 0,
                (a, b) if a == ZERO && b == ONE => *slot = 1,
                _ => return None,
            }
        }
        (image[0] != image[1]).then_some(image)
    }
}

/// Which control value makes a controlled gate fire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Polarity {
    Zero,
    One,
}

impl Polarity {
    pub fn from_bit(bit: bool) -> Polarity {
        if bit {
            Polarity::One
        } else {
            Polarity::Zero
        }
    }

    pub fn bit(self) -> bool {
        self == Polarity::One
    }

    pub fn flipped(self) -> Polarity {
        Polarity::from_bit(!self.bit())
    }
}

impl From<Polarity> for u8 {
    fn from(p: Polarity) -> u8 {
        p.bit() as u8
    }
}

impl TryFrom<u8> for Polarity {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            0 => Ok(Polarity::Zero),
            1 => Ok(Polarity::One),
            _ => Err(format!("polarity must be 0 or 1, got {v}")),
        }
    }
}

/// One control line of a multi-controlled gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

/// Target and control pattern of a multi-controlled X gate.
///
/// The gate flips the target exactly when every control qubit carries its
/// pattern bit. A pattern over all `n - 1` other qubits is the `C^n(X_k)`
/// gate; [`on_block`](Self::on_block) builds patterns confined to a
/// contiguous qubit block, and an empty pattern is an unconditional X.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ControlPattern {
    target: usize,
    controls: Vec<Control>,
}

impl ControlPattern {
    /// Controls are sorted by qubit; duplicates and a control on the target
    /// are rejected.
    pub fn new(target: usize, mut controls: Vec<Control>) -> Result<Self> {
        if target == 0 {
            return Err(Error::QubitOutOfRange { qubit: 0, width: 0 });
        }
        controls.sort_by_key(|c| c.qubit);
        for w in controls.windows(2) {
            if w[0].qubit == w[1].qubit {
                return Err(Error::DuplicateControl(w[0].qubit));
            }
        }
        for c in &controls {
            if c.qubit == target {
                return Err(Error::ControlIsTarget(target));
            }
            if c.qubit == 0 {
                return Err(Error::QubitOutOfRange { qubit: 0, width: 0 });
            }
        }
        Ok(ControlPattern { target, controls })
    }

    /// The `C^n(X_k)` gate on `width` qubits: `pattern` lists the required
    /// bits of the non-target qubits in ascending position order.
    pub fn full(width: usize, target: usize, pattern: &[bool]) -> Result<Self> {
        if target == 0 || target > width {
            return Err(Error::QubitOutOfRange { qubit: target, width });
        }
        if pattern.len() + 1 != width {
            return Err(Error::CoordinateCount { expected: width - 1, got: pattern.len() });
        }
        let controls = (1..=width)
            .filter(|&q| q != target)
            .zip(pattern)
            .map(|(qubit, &bit)| Control { qubit, polarity: Polarity::from_bit(bit) })
            .collect();
        ControlPattern::new(target, controls)
    }

    /// Flips `target` on the block of qubits `first..first+len` whenever the
    /// other block qubits equal the corresponding bits of `block_value`
    /// (an MSB-first value of `len` bits).
    pub fn on_block(first: usize, len: usize, target: usize, block_value: usize) -> Result<Self> {
        if target < first || target >= first + len {
            return Err(Error::QubitOutOfRange { qubit: target, width: first + len - 1 });
        }
        let controls = (first..first + len)
            .filter(|&q| q != target)
            .map(|qubit| {
                let bit = block_value >> (first + len - 1 - qubit) & 1 == 1;
                Control { qubit, polarity: Polarity::from_bit(bit) }
            })
            .collect();
        ControlPattern::new(target, controls)
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    pub fn control_count(&self) -> usize {
        self.controls.len()
    }

    /// Largest qubit position referenced.
    pub fn max_qubit(&self) -> usize {
        self.controls.iter().map(|c| c.qubit).chain([self.target]).max().unwrap_or(0)
    }

    /// `(mask, value)` of the controls within an `n`-qubit basis index.
    pub fn masks(&self, qubits: usize) -> (usize, usize) {
        self.controls.iter().fold((0, 0), |(mask, value), c| {
            let bit = 1usize << (qubits - c.qubit);
            (mask | bit, if c.polarity.bit() { value | bit } else { value })
        })
    }

    /// The same pattern with every qubit position shifted by `offset`.
    pub fn shifted(&self, offset: usize) -> ControlPattern {
        ControlPattern {
            target: self.target + offset,
            controls: self.controls.iter().map(|c| Control { qubit: c.qubit + offset, polarity: c.polarity }).collect(),
        }
    }
}

/// A gate acting on 1-based qubit positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gate {
    Single { target: usize, matrix: Matrix2 },
    Controlled { control: usize, polarity: Polarity, target: usize, matrix: Matrix2 },
    MultiControlledX(ControlPattern),
    Swap { a: usize, b: usize },
}

impl Gate {
    pub fn x(target: usize) -> Gate {
        Gate::Single { target, matrix: Matrix2::X }
    }

    /// `N_C1` (polarity one) or `N_C0` (polarity zero).
    pub fn cnot(control: usize, polarity: Polarity, target: usize) -> Gate {
        Gate::Controlled { control, polarity, target, matrix: Matrix2::X }
    }

    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::Swap { a, b }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Single { target, .. } => vec![*target],
            Gate::Controlled { control, target, .. } => vec![*control, *target],
            Gate::MultiControlledX(p) => p.controls().iter().map(|c| c.qubit).chain([p.target()]).collect(),
            Gate::Swap { a, b } => vec![*a, *b],
        }
    }

    /// Checks every referenced qubit lies in `1..=width` and the gate is well formed.
    pub fn validate(&self, width: usize) -> Result<()> {
        for q in self.qubits() {
            if q == 0 || q > width {
                return Err(Error::QubitOutOfRange { qubit: q, width });
            }
        }
        match self {
            Gate::Controlled { control, target, .. } if control == target => Err(Error::ControlIsTarget(*target)),
            Gate::Swap { a, b } if a == b => Err(Error::SwapSameQubit(*a)),
            _ => Ok(()),
        }
    }

    /// Whether the gate only relocates basis states.
    pub fn is_permutation(&self) -> bool {
        match self {
            Gate::Single { matrix, .. } | Gate::Controlled { matrix, .. } => matrix.as_permutation().is_some(),
            Gate::MultiControlledX(_) | Gate::Swap { .. } => true,
        }
    }

    pub fn shifted(&self, offset: usize) -> Gate {
        match self {
            Gate::Single { target, matrix } => Gate::Single { target: target + offset, matrix: *matrix },
            Gate::Controlled { control, polarity, target, matrix } => Gate::Controlled {
                control: control + offset,
                polarity: *polarity,
                target: target + offset,
                matrix: *matrix,
            },
            Gate::MultiControlledX(p) => Gate::MultiControlledX(p.shifted(offset)),
            Gate::Swap { a, b } => Gate::Swap { a: a + offset, b: b + offset },
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |m: &Matrix2| {
            if *m == Matrix2::X {
                "X".to_string()
            } else if *m == Matrix2::IDENTITY {
                "I".to_string()
            } else {
                "U".to_string()
            }
        };
        match self {
            Gate::Single { target, matrix } => write!(f, "{} q{target}", name(matrix)),
            Gate::Controlled { control, polarity, target, matrix } => {
                write!(f, "C{}-{} q{control} -> q{target}", u8::from(*polarity), name(matrix))
            }
            Gate::MultiControlledX(p) => {
                write!(f, "MCX q{} [", p.target())?;
                for (i, c) in p.controls().iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "q{}={}", c.qubit, u8::from(c.polarity))?;
                }
                f.write_str("]")
            }
            Gate::Swap { a, b } => write!(f, "SWAP q{a} q{b}"),
        }
    }
}

/// A labelled contiguous run of gates, such as one two-point swap inside a
/// translation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub label: String,
    pub start: usize,
    pub len: usize,
}

/// An ordered gate list on a fixed number of qubits, executed first to last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    width: usize,
    label: String,
    gates: Vec<Gate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    blocks: Vec<Block>,
}

impl Circuit {
    pub fn new(width: usize, label: impl Into<String>) -> Circuit {
        Circuit { width, label: label.into(), gates: Vec::new(), blocks: Vec::new() }
    }

    pub fn from_gates(width: usize, label: impl Into<String>, gates: Vec<Gate>) -> Result<Circuit> {
        let mut c = Circuit::new(width, label);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `sub`'s gates shifted by `offset` qubits, recorded as one block.
    pub fn push_block(&mut self, sub: &Circuit, offset: usize) -> Result<()> {
        let start = self.gates.len();
        for g in sub.gates() {
            self.push(g.shifted(offset))?;
        }
        self.blocks.push(Block { label: sub.label.clone(), start, len: sub.len() });
        Ok(())
    }

    /// Gates of one block.
    pub fn block_gates(&self, block: &Block) -> &[Gate] {
        &self.gates[block.start..block.start + block.len]
    }

    /// This circuit followed by `other` (which must have the same width).
    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        if other.width != self.width {
            return Err(Error::WidthMismatch { circuit: other.width, state: self.width });
        }
        let mut out = self.clone();
        let base = out.gates.len();
        out.gates.extend(other.gates.iter().cloned());
        out.blocks.extend(other.blocks.iter().map(|b| Block {
            label: b.label.clone(),
            start: b.start + base,
            len: b.len,
        }));
        out.label = format!("{};{}", self.label, other.label);
        Ok(out)
    }

    /// The circuit repeated `times` times in sequence.
    pub fn repeated(&self, times: usize) -> Circuit {
        let mut out = Circuit::new(self.width, format!("({})^{times}", self.label));
        for _ in 0..times {
            let base = out.gates.len();
            out.gates.extend(self.gates.iter().cloned());
            out.blocks.extend(self.blocks.iter().map(|b| Block {
                label: b.label.clone(),
                start: b.start + base,
                len: b.len,
            }));
        }
        out
    }

    /// Re-checks every gate against the width, e.g. after deserializing.
    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            g.validate(self.width)?;
            if let Gate::MultiControlledX(p) = g {
                ControlPattern::new(p.target(), p.controls().to_vec())?;
            }
        }
        for b in &self.blocks {
            if b.start + b.len > self.gates.len() {
                return Err(Error::IndexOutOfRange { index: b.start + b.len, qubits: self.width });
            }
        }
        Ok(())
    }

    pub fn is_permutation(&self) -> bool {
        self.gates.iter().all(Gate::is_permutation)
    }
}

/// One gate per line, in execution order.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({} qubits, {} gates)", self.label, self.width, self.gates.len())?;
        for (i, g) in self.gates.iter().enumerate() {
            if let Some(b) = self.blocks.iter().find(|b| b.start == i && b.len > 0) {
                writeln!(f, "  [{}]", b.label)?;
            }
            writeln!(f, "    {g}")?;
        }
        Ok(())
    }
}
