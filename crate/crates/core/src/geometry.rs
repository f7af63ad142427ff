//! Image lattices, qubit layout and basis indices.
//!
//! A k-dimensional image of size `2^m_1 × … × 2^m_k` lives on `n = m_1 + … + m_k`
//! qubits. Qubits are numbered from 1, left to right, and qubit 1 is the most
//! significant bit of the basis index. Axis `j` owns a contiguous block of
//! qubits, so the basis index `i = i_1 … i_n` splits into the axis values
//! `|v_1⟩|v_2⟩…|v_k⟩`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest total qubit count a geometry may describe.
pub const MAX_QUBITS: usize = 62;

/// Axis layout of a k-dimensional image.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct ImageGeometry {
    widths: Vec<usize>,
    qubits: usize,
}

impl ImageGeometry {
    pub fn new(widths: impl Into<Vec<usize>>) -> Result<Self> {
        let widths = widths.into();
        if widths.is_empty() {
            return Err(Error::NoAxes);
        }
        if let Some(pos) = widths.iter().position(|&m| m == 0) {
            return Err(Error::ZeroWidthAxis { axis: pos + 1 });
        }
        let qubits: usize = widths.iter().sum();
        if qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { qubits, max: MAX_QUBITS });
        }
        Ok(ImageGeometry { widths, qubits })
    }

    /// Number of axes `k`.
    pub fn axis_count(&self) -> usize {
        self.widths.len()
    }

    /// Total qubit count `n`.
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    /// Number of lattice points, `2^n`.
    pub fn len(&self) -> usize {
        1usize << self.qubits
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis == 0 || axis > self.widths.len() {
            Err(Error::AxisOutOfRange { axis, count: self.widths.len() })
        } else {
            Ok(())
        }
    }

    /// Qubit width `m_j` of a 1-based axis.
    pub fn width(&self, axis: usize) -> Result<usize> {
        self.check_axis(axis)?;
        Ok(self.widths[axis - 1])
    }

    /// Number of points along an axis, `2^m_j`.
    pub fn axis_size(&self, axis: usize) -> Result<usize> {
        Ok(1usize << self.width(axis)?)
    }

    /// First and last (1-based, inclusive) qubit positions of an axis.
    pub fn axis_span(&self, axis: usize) -> Result<(usize, usize)> {
        self.check_axis(axis)?;
        let before: usize = self.widths[..axis - 1].iter().sum();
        Ok((before + 1, before + self.widths[axis - 1]))
    }

    /// Qubit positions owned by an axis, in ascending order.
    pub fn axis_qubits(&self, axis: usize) -> Result<std::ops::RangeInclusive<usize>> {
        let (first, last) = self.axis_span(axis)?;
        Ok(first..=last)
    }

    /// The axis a qubit position belongs to.
    pub fn axis_of_qubit(&self, qubit: usize) -> Result<usize> {
        if qubit == 0 || qubit > self.qubits {
            return Err(Error::QubitOutOfRange { qubit, width: self.qubits });
        }
        let mut end = 0;
        for (j, &m) in self.widths.iter().enumerate() {
            end += m;
            if qubit <= end {
                return Ok(j + 1);
            }
        }
        unreachable!("qubit already range-checked")
    }

    /// Splits a basis index into its axis values `(v_1, …, v_k)`.
    pub fn coordinates_of(&self, index: usize) -> Result<Vec<usize>> {
        if index >= self.len() {
            return Err(Error::IndexOutOfRange { index, qubits: self.qubits });
        }
        let mut coords = vec![0; self.widths.len()];
        let mut rest = index;
        for (slot, &m) in coords.iter_mut().zip(&self.widths).rev() {
            *slot = rest & ((1usize << m) - 1);
            rest >>= m;
        }
        Ok(coords)
    }

    /// Inverse of [`coordinates_of`](Self::coordinates_of).
    pub fn index_of(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.widths.len() {
            return Err(Error::CoordinateCount { expected: self.widths.len(), got: coords.len() });
        }
        let mut index = 0usize;
        for (j, (&v, &m)) in coords.iter().zip(&self.widths).enumerate() {
            if v >> m != 0 {
                return Err(Error::CoordinateOutOfRange { axis: j + 1, value: v, size: 1 << m });
            }
            index = (index << m) | v;
        }
        Ok(index)
    }
}

impl TryFrom<Vec<usize>> for ImageGeometry {
    type Error = Error;

    fn try_from(widths: Vec<usize>) -> Result<Self> {
        ImageGeometry::new(widths)
    }
}

impl From<ImageGeometry> for Vec<usize> {
    fn from(g: ImageGeometry) -> Self {
        g.widths
    }
}

/// Formats as `m1xm2x…`, the form the CLI accepts.
impl fmt::Display for ImageGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, m) in self.widths.iter().enumerate() {
            if j > 0 {
                f.write_str("x")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for ImageGeometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let widths = s
            .split(['x', 'X', ','])
            .map(|w| w.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::GeometryParse(s.to_string()))?;
        ImageGeometry::new(widths)
    }
}

/// Bit mask of a 1-based qubit position in an `n`-qubit basis index.
#[inline]
pub fn qubit_mask(qubit: usize, qubits: usize) -> usize {
    debug_assert!(qubit >= 1 && qubit <= qubits);
    1usize << (qubits - qubit)
}

/// A computational basis index together with its width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    value: usize,
    qubits: usize,
}

impl BasisIndex {
    pub fn new(value: usize, qubits: usize) -> Result<Self> {
        if qubits > MAX_QUBITS || value >> qubits != 0 {
            return Err(Error::IndexOutOfRange { index: value, qubits });
        }
        Ok(BasisIndex { value, qubits })
    }

    /// Parses an MSB-first bit string such as `"00101"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let bits = bits.trim();
        if bits.is_empty() || bits.len() > MAX_QUBITS {
            return Err(Error::InvalidBits(bits.to_string()));
        }
        let mut value = 0usize;
        for c in bits.chars() {
            value = (value << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::InvalidBits(bits.to_string())),
                };
        }
        Ok(BasisIndex { value, qubits: bits.len() })
    }

    pub fn value(self) -> usize {
        self.value
    }

    pub fn qubits(self) -> usize {
        self.qubits
    }

    /// Bit at a 1-based qubit position.
    pub fn bit(self, qubit: usize) -> bool {
        self.value & qubit_mask(qubit, self.qubits) != 0
    }

    pub fn to_bits(self) -> String {
        (1..=self.qubits).map(|q| if self.bit(q) { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bits())
    }
}
