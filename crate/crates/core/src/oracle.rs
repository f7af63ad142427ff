//! Classical reference permutations.
//!
//! [`oracle_map`] evaluates each transformation directly on lattice
//! coordinates and never looks at a circuit. [`permutation_of_circuit`] goes
//! the other way and reads off the permutation a circuit realizes, so the two
//! can be compared index by index.

use serde::{Deserialize, Serialize};

use crate::codec::{ClassicalImage, NassState};
use crate::error::{Error, Result};
use crate::gate::{Circuit, Polarity};
use crate::geometry::ImageGeometry;
use crate::sim::{basis_image, StateVector, MAX_STATE_QUBITS};
use crate::transform::{RotationAngle, TransformSpec};

/// Default width up to which circuits are checked on every basis state.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 12;

/// A bijection on `0..2^n`: basis state `i` moves to `map[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PixelPermutation {
    qubits: usize,
    map: Vec<usize>,
}

impl PixelPermutation {
    pub fn identity(qubits: usize) -> Result<Self> {
        if qubits > MAX_STATE_QUBITS {
            return Err(Error::TooManyQubits { qubits, max: MAX_STATE_QUBITS });
        }
        Ok(PixelPermutation { qubits, map: (0..1 << qubits).collect() })
    }

    /// Checks that `map` has power-of-two length and hits every index once.
    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        if !map.len().is_power_of_two() {
            return Err(Error::BadStateLength(map.len()));
        }
        let mut seen = vec![false; map.len()];
        for &j in &map {
            if j >= map.len() || std::mem::replace(&mut seen[j], true) {
                return Err(Error::NotBijection(j));
            }
        }
        Ok(PixelPermutation { qubits: map.len().trailing_zeros() as usize, map })
    }

    /// The transposition `(s t)`.
    pub fn transposition(qubits: usize, s: usize, t: usize) -> Result<Self> {
        let mut p = PixelPermutation::identity(qubits)?;
        for v in [s, t] {
            if v >= p.map.len() {
                return Err(Error::IndexOutOfRange { index: v, qubits });
            }
        }
        p.map.swap(s, t);
        Ok(p)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn get(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &PixelPermutation) -> Result<Self> {
        if self.qubits != next.qubits {
            return Err(Error::WidthMismatch { circuit: next.qubits, state: self.qubits });
        }
        Ok(PixelPermutation { qubits: self.qubits, map: self.map.iter().map(|&j| next.map[j]).collect() })
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        PixelPermutation { qubits: self.qubits, map: inv }
    }

    pub fn power(&self, k: usize) -> Self {
        let mut p = PixelPermutation { qubits: self.qubits, map: (0..self.map.len()).collect() };
        for _ in 0..k {
            p = p.then(self).expect("same width");
        }
        p
    }

    /// Smallest index where the two permutations disagree.
    pub fn first_mismatch(&self, other: &PixelPermutation) -> Option<usize> {
        if self.map.len() != other.map.len() {
            return Some(0);
        }
        self.map.iter().zip(&other.map).position(|(a, b)| a != b)
    }

    /// Moves each pixel `i` to `map[i]`.
    pub fn apply_to_image(&self, image: &ClassicalImage) -> Result<ClassicalImage> {
        let old = image.pixels();
        if old.len() != self.map.len() {
            return Err(Error::PixelCount { expected: self.map.len(), got: old.len() });
        }
        let mut new = vec![0; old.len()];
        for (i, &j) in self.map.iter().enumerate() {
            new[j] = old[i];
        }
        ClassicalImage::new(image.geometry().clone(), new)
    }

    /// Moves each amplitude `i` to `map[i]`.
    pub fn apply_to_state(&self, state: &NassState) -> Result<NassState> {
        let old = state.amplitudes();
        if old.len() != self.map.len() {
            return Err(Error::BadStateLength(old.len()));
        }
        let mut new = old.to_vec();
        for (i, &j) in self.map.iter().enumerate() {
            new[j] = old[i];
        }
        NassState::from_parts(state.geometry().clone(), StateVector::from_amplitudes(new)?, state.magnitude())
    }
}

impl TryFrom<Vec<usize>> for PixelPermutation {
    type Error = Error;

    fn try_from(map: Vec<usize>) -> Result<Self> {
        PixelPermutation::from_map(map)
    }
}

impl From<PixelPermutation> for Vec<usize> {
    fn from(p: PixelPermutation) -> Vec<usize> {
        p.map
    }
}

fn complement(v: usize, size: usize) -> usize {
    size - 1 - v
}

/// Where `spec` sends the pixel at basis index `index`, evaluated on
/// coordinates. Assumes `spec` is valid for `geometry`; see [`oracle_permutation`].
pub fn oracle_map(geometry: &ImageGeometry, spec: &TransformSpec, index: usize) -> Result<usize> {
    let mut v = geometry.coordinates_of(index)?;
    let size = |axis: usize| geometry.axis_size(axis).expect("validated axis");
    match spec {
        TransformSpec::Swap { s, t } => {
            let (s, t) = (geometry.index_of(s)?, geometry.index_of(t)?);
            return Ok(if index == s {
                t
            } else if index == t {
                s
            } else {
                index
            });
        }
        TransformSpec::Flip { fixed } => {
            for (l, c) in v.iter_mut().enumerate() {
                if l + 1 != *fixed {
                    *c = complement(*c, size(l + 1));
                }
            }
        }
        TransformSpec::LocalFlip(lf) => {
            let width = geometry.width(lf.control_axis)?;
            let shift = width - lf.bit;
            let bit = (v[lf.control_axis - 1] >> shift) & 1 == 1;
            if bit == (lf.polarity == Polarity::One) {
                for (l, c) in v.iter_mut().enumerate() {
                    let axis = l + 1;
                    if axis == lf.preserved {
                        continue;
                    }
                    let all = size(axis) - 1;
                    let mask = if axis == lf.control_axis { all & !(1 << shift) } else { all };
                    *c ^= mask;
                }
            }
        }
        TransformSpec::Rotation { x, y, angle } => {
            let s = size(*x);
            let (vx, vy) = (v[x - 1], v[y - 1]);
            let (nx, ny) = match angle {
                RotationAngle::Quarter => (vy, complement(vx, s)),
                RotationAngle::Half => (complement(vx, s), complement(vy, s)),
                RotationAngle::ThreeQuarter => (complement(vy, s), vx),
            };
            v[x - 1] = nx;
            v[y - 1] = ny;
        }
        TransformSpec::Translation { axis } => {
            v[axis - 1] = (v[axis - 1] + 1) % size(*axis);
        }
    }
    geometry.index_of(&v)
}

/// The full reference permutation of `spec` on `geometry`.
pub fn oracle_permutation(geometry: &ImageGeometry, spec: &TransformSpec) -> Result<PixelPermutation> {
    spec.validate(geometry)?;
    if geometry.qubits() > MAX_STATE_QUBITS {
        return Err(Error::TooManyQubits { qubits: geometry.qubits(), max: MAX_STATE_QUBITS });
    }
    let map = (0..geometry.len()).map(|i| oracle_map(geometry, spec, i)).collect::<Result<Vec<_>>>()?;
    PixelPermutation::from_map(map)
}

/// Runs every basis state through `circuit`; fails on circuits wider than
/// `limit` or whose output is not a basis permutation.
pub fn permutation_of_circuit(circuit: &Circuit, limit: usize) -> Result<PixelPermutation> {
    let n = circuit.width();
    if n > limit || n > MAX_STATE_QUBITS {
        return Err(Error::OverExhaustiveLimit { qubits: n, limit: limit.min(MAX_STATE_QUBITS) });
    }
    let map = (0..1usize << n).map(|i| basis_image(circuit, i)).collect::<Result<Vec<_>>>()?;
    PixelPermutation::from_map(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::Gate;
    use crate::gray::synth_two_point_swap;
    use crate::transform::{symmetric_flip, translation, LocalFlipSpec};

    fn geo(w: &[usize]) -> ImageGeometry {
        ImageGeometry::new(w.to_vec()).unwrap()
    }

    #[test]
    fn bijection_checks() {
        assert!(PixelPermutation::from_map(vec![1, 0, 3, 2]).is_ok());
        assert_eq!(PixelPermutation::from_map(vec![1, 1, 3, 2]), Err(Error::NotBijection(1)));
        assert_eq!(PixelPermutation::from_map(vec![0, 4, 3, 2]), Err(Error::NotBijection(4)));
        assert_eq!(PixelPermutation::from_map(vec![0, 1, 2]), Err(Error::BadStateLength(3)));
        let p: PixelPermutation = serde_json::from_str("[2,3,0,1]").unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "[2,3,0,1]");
        assert!(serde_json::from_str::<PixelPermutation>("[0,0]").is_err());
    }

    #[test]
    fn composition() {
        let a = PixelPermutation::from_map(vec![1, 2, 3, 0]).unwrap();
        assert_eq!(a.power(4), PixelPermutation::identity(2).unwrap());
        assert!(a.then(&a.inverse()).unwrap().is_identity());
        assert_eq!(a.power(2).map(), &[2, 3, 0, 1]);
        assert_eq!(a.first_mismatch(&a.power(5)), None);
        assert_eq!(a.first_mismatch(&a.power(2)), Some(0));
    }

    #[test]
    fn worked_maps() {
        let flip = TransformSpec::Flip { fixed: 1 };
        assert_eq!(oracle_map(&geo(&[1, 1, 1, 1, 1]), &flip, 0).unwrap(), 15);
        let t = TransformSpec::Translation { axis: 3 };
        let g = geo(&[1, 1, 1]);
        assert_eq!(oracle_map(&g, &t, 0b000).unwrap(), 0b001);
        assert_eq!(oracle_map(&g, &t, 0b001).unwrap(), 0b000);
        // quarter turn on a 2x2 plane
        let r = TransformSpec::Rotation { x: 1, y: 2, angle: RotationAngle::Quarter };
        let g = geo(&[1, 1]);
        let cycle = [[0, 0], [0, 1], [1, 1], [1, 0]];
        for k in 0..4 {
            let from = g.index_of(&cycle[k]).unwrap();
            let to = g.index_of(&cycle[(k + 1) % 4]).unwrap();
            assert_eq!(oracle_map(&g, &r, from).unwrap(), to);
        }
    }

    #[test]
    fn half_turn_complements_both_axes() {
        let g = geo(&[2, 2, 1]);
        let r = TransformSpec::Rotation { x: 1, y: 2, angle: RotationAngle::Half };
        for i in 0..32 {
            let c = g.coordinates_of(i).unwrap();
            let expected = g.index_of(&[3 - c[0], 3 - c[1], c[2]]).unwrap();
            assert_eq!(oracle_map(&g, &r, i).unwrap(), expected);
        }
    }

    #[test]
    fn local_flip_keeps_control_bit() {
        let g = geo(&[2, 3]);
        let lf =
            TransformSpec::LocalFlip(LocalFlipSpec { preserved: 1, control_axis: 2, bit: 2, polarity: Polarity::Zero });
        // v_2 = 0b101 has bit 2 = 0: bits 1 and 3 flip
        assert_eq!(oracle_map(&g, &lf, g.index_of(&[2, 0b101]).unwrap()).unwrap(), g.index_of(&[2, 0b000]).unwrap());
        assert_eq!(oracle_map(&g, &lf, g.index_of(&[2, 0b111]).unwrap()).unwrap(), g.index_of(&[2, 0b111]).unwrap());
    }

    #[test]
    fn invalid_specs_rejected() {
        let g = geo(&[2, 1]);
        assert!(oracle_permutation(&g, &TransformSpec::Rotation { x: 1, y: 2, angle: RotationAngle::Half }).is_err());
        assert!(oracle_permutation(&g, &TransformSpec::Flip { fixed: 3 }).is_err());
    }

    #[test]
    fn circuit_extraction() {
        let c = Circuit::new(3, "empty");
        assert!(permutation_of_circuit(&c, 12).unwrap().is_identity());
        let swap = synth_two_point_swap(0b00101, 0b11110, 5).unwrap();
        assert_eq!(
            permutation_of_circuit(&swap, 12).unwrap(),
            PixelPermutation::transposition(5, 0b00101, 0b11110).unwrap()
        );
        assert_eq!(
            permutation_of_circuit(&Circuit::new(13, "wide"), 12),
            Err(Error::OverExhaustiveLimit { qubits: 13, limit: 12 })
        );
        let mut h = Circuit::new(1, "h");
        h.push(Gate::Single { target: 1, matrix: crate::gate::Matrix2::hadamard() }).unwrap();
        assert_eq!(permutation_of_circuit(&h, 12), Err(Error::NotPermutation(0)));
    }

    #[test]
    fn flip_is_product_of_pairwise_swaps() {
        // 2^(n-1) swaps pairing each index with its flipped partner
        for widths in [&[1, 1, 1][..], &[2, 3], &[3, 1, 2, 2]] {
            let g = geo(widths);
            for fixed in 1..=g.axis_count() {
                let flip = permutation_of_circuit(&symmetric_flip(&g, fixed).unwrap(), 12).unwrap();
                let mut composed = PixelPermutation::identity(g.qubits()).unwrap();
                let mut swaps = 0;
                for i in 0..g.len() {
                    let partner = oracle_map(&g, &TransformSpec::Flip { fixed }, i).unwrap();
                    if i < partner {
                        let s = synth_two_point_swap(i, partner, g.qubits()).unwrap();
                        composed = composed.then(&permutation_of_circuit(&s, 12).unwrap()).unwrap();
                        swaps += 1;
                    }
                }
                if g.width(fixed).unwrap() < g.qubits() {
                    assert_eq!(swaps, 1 << (g.qubits() - 1));
                }
                assert_eq!(composed, flip);
            }
        }
    }

    #[test]
    fn translation_is_successor_built_from_swaps() {
        for m in 1..=4 {
            let g = geo(&[m]);
            let c = translation(&g, 1).unwrap();
            let p = permutation_of_circuit(&c, 12).unwrap();
            assert_eq!(p.map(), &(0..1 << m).map(|v| (v + 1) % (1 << m)).collect::<Vec<_>>()[..]);
            let top = (1usize << m) - 1;
            let mut composed = PixelPermutation::transposition(m, top, 0).unwrap();
            for j in (1..top).rev() {
                composed = composed.then(&PixelPermutation::transposition(m, j, j + 1).unwrap()).unwrap();
            }
            assert_eq!(composed, p);
        }
    }
}
