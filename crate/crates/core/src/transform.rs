//! Circuit builders for the geometric transformations.
//!
//! Every builder returns a permutation circuit over the geometry's qubits:
//!
//! * symmetric flip: X on each qubit outside the fixed axis;
//! * local flip: controlled-NOTs from one control qubit to every qubit
//!   outside the preserved axis;
//! * orthogonal rotation: qubit-wise swaps of two equal-width axes plus X
//!   gates on one of them (or X on both for a half turn);
//! * translation: `2^m - 1` two-point swaps inside one axis block, realizing
//!   the cyclic shift `v ↦ v + 1 mod 2^m`;
//! * two-point swap: a Gray-code swap of two lattice points.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::{Circuit, Gate, Polarity};
use crate::geometry::ImageGeometry;
use crate::gray::synth_two_point_swap;

/// Parameters of a local flip: pixels whose bit `bit` of axis `control_axis`
/// equals `polarity` are flipped in every axis except `preserved`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalFlipSpec {
    pub preserved: usize,
    pub control_axis: usize,
    /// 1-based bit position within the control axis, MSB first.
    pub bit: usize,
    pub polarity: Polarity,
}

impl LocalFlipSpec {
    pub fn validate(&self, geometry: &ImageGeometry) -> Result<()> {
        geometry.width(self.preserved)?;
        let width = geometry.width(self.control_axis)?;
        if self.preserved == self.control_axis {
            return Err(Error::LocalFlipSameAxis(self.preserved));
        }
        if self.bit == 0 || self.bit > width {
            return Err(Error::LocalFlipBit { axis: self.control_axis, h: self.bit, width });
        }
        Ok(())
    }

    /// Qubit position of the control bit.
    pub fn control_qubit(&self, geometry: &ImageGeometry) -> Result<usize> {
        self.validate(geometry)?;
        Ok(geometry.axis_span(self.control_axis)?.0 + self.bit - 1)
    }
}

/// Quarter, half and three-quarter turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RotationAngle {
    #[serde(rename = "pi/2")]
    Quarter,
    #[serde(rename = "pi")]
    Half,
    #[serde(rename = "3pi/2")]
    ThreeQuarter,
}

impl RotationAngle {
    pub const ALL: [RotationAngle; 3] = [RotationAngle::Quarter, RotationAngle::Half, RotationAngle::ThreeQuarter];

    pub fn radians(self) -> f64 {
        use std::f64::consts::PI;
        match self {
            RotationAngle::Quarter => PI / 2.0,
            RotationAngle::Half => PI,
            RotationAngle::ThreeQuarter => 3.0 * PI / 2.0,
        }
    }
}

impl fmt::Display for RotationAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RotationAngle::Quarter => "pi/2",
            RotationAngle::Half => "pi",
            RotationAngle::ThreeQuarter => "3pi/2",
        })
    }
}

impl FromStr for RotationAngle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace(' ', "").as_str() {
            "pi/2" | "90" => Ok(RotationAngle::Quarter),
            "pi" | "180" => Ok(RotationAngle::Half),
            "3pi/2" | "270" => Ok(RotationAngle::ThreeQuarter),
            _ => Err(Error::SpecParse { spec: s.to_string(), reason: "unknown rotation angle".into() }),
        }
    }
}

/// One geometric transformation, parameterized by 1-based axes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformSpec {
    /// Exchange the pixels at two lattice coordinates.
    Swap {
        s: Vec<usize>,
        t: Vec<usize>,
    },
    /// Complement every axis except `fixed`.
    Flip {
        fixed: usize,
    },
    LocalFlip(LocalFlipSpec),
    Rotation {
        x: usize,
        y: usize,
        angle: RotationAngle,
    },
    /// Cyclic `+1` shift along `axis`.
    Translation {
        axis: usize,
    },
}

impl TransformSpec {
    pub fn validate(&self, geometry: &ImageGeometry) -> Result<()> {
        match self {
            TransformSpec::Swap { s, t } => {
                let (a, b) = (geometry.index_of(s)?, geometry.index_of(t)?);
                if a == b {
                    return Err(Error::SamePoints(a));
                }
                Ok(())
            }
            TransformSpec::Flip { fixed } => geometry.width(*fixed).map(|_| ()),
            TransformSpec::LocalFlip(spec) => spec.validate(geometry),
            TransformSpec::Rotation { x, y, .. } => {
                let (mx, my) = (geometry.width(*x)?, geometry.width(*y)?);
                if x == y {
                    return Err(Error::SameRotationAxes(*x));
                }
                if mx != my {
                    return Err(Error::UnequalAxisWidths { x: *x, y: *y, mx, my });
                }
                Ok(())
            }
            TransformSpec::Translation { axis } => geometry.width(*axis).map(|_| ()),
        }
    }

    /// Synthesizes the circuit for this transformation.
    pub fn build(&self, geometry: &ImageGeometry) -> Result<Circuit> {
        let mut c = match self {
            TransformSpec::Swap { s, t } => {
                self.validate(geometry)?;
                synth_two_point_swap(geometry.index_of(s)?, geometry.index_of(t)?, geometry.qubits())?
            }
            TransformSpec::Flip { fixed } => symmetric_flip(geometry, *fixed)?,
            TransformSpec::LocalFlip(spec) => local_flip(geometry, spec)?,
            TransformSpec::Rotation { x, y, angle } => orthogonal_rotation(geometry, *x, *y, *angle)?,
            TransformSpec::Translation { axis } => translation(geometry, *axis)?,
        };
        c.set_label(self.to_string());
        Ok(c)
    }
}

fn parse_usize_list(body: &str, spec: &str) -> Result<Vec<usize>> {
    body.split(',')
        .map(|p| {
            p.trim().parse::<usize>().map_err(|_| Error::SpecParse {
                spec: spec.to_string(),
                reason: format!("{p:?} is not a non-negative integer"),
            })
        })
        .collect()
}

fn parse_coordinates(body: &str, spec: &str) -> Result<(Vec<usize>, Vec<usize>)> {
    let err = |reason: &str| Error::SpecParse { spec: spec.to_string(), reason: reason.to_string() };
    let body = body.trim();
    let open1 = body.strip_prefix('(').ok_or_else(|| err("expected '(' before first point"))?;
    let (first, rest) = open1.split_once(')').ok_or_else(|| err("unclosed first point"))?;
    let rest = rest.trim_start().strip_prefix(',').ok_or_else(|| err("expected ',' between points"))?;
    let open2 = rest.trim().strip_prefix('(').ok_or_else(|| err("expected '(' before second point"))?;
    let second = open2.strip_suffix(')').ok_or_else(|| err("unclosed second point"))?;
    Ok((parse_usize_list(first, spec)?, parse_usize_list(second, spec)?))
}

/// Parses the CLI mini-language: `flip:<j>`, `lflip:<x>,<j>,<h>,<m>`,
/// `rot:<x>,<y>,<pi/2|pi|3pi/2>`, `trans:<x>` and `swap:(<coords>),(<coords>)`.
impl FromStr for TransformSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let spec = s.trim();
        let err = |reason: &str| Error::SpecParse { spec: spec.to_string(), reason: reason.to_string() };
        let (kind, body) = spec.split_once(':').ok_or_else(|| err("missing ':'"))?;
        match kind.trim().to_ascii_lowercase().as_str() {
            "flip" => {
                let v = parse_usize_list(body, spec)?;
                match v[..] {
                    [fixed] => Ok(TransformSpec::Flip { fixed }),
                    _ => Err(err("flip takes one axis")),
                }
            }
            "lflip" => {
                let v = parse_usize_list(body, spec)?;
                match v[..] {
                    [preserved, control_axis, bit, m] if m <= 1 => Ok(TransformSpec::LocalFlip(LocalFlipSpec {
                        preserved,
                        control_axis,
                        bit,
                        polarity: Polarity::from_bit(m == 1),
                    })),
                    [_, _, _, _] => Err(err("local flip polarity must be 0 or 1")),
                    _ => Err(err("lflip takes x,j,h,m")),
                }
            }
            "rot" => {
                let parts: Vec<&str> = body.split(',').collect();
                if parts.len() != 3 {
                    return Err(err("rot takes x,y,angle"));
                }
                let axes = parse_usize_list(&parts[..2].join(","), spec)?;
                Ok(TransformSpec::Rotation { x: axes[0], y: axes[1], angle: parts[2].parse()? })
            }
            "trans" => {
                let v = parse_usize_list(body, spec)?;
                match v[..] {
                    [axis] => Ok(TransformSpec::Translation { axis }),
                    _ => Err(err("trans takes one axis")),
                }
            }
            "swap" => {
                let (s, t) = parse_coordinates(body, spec)?;
                Ok(TransformSpec::Swap { s, t })
            }
            _ => Err(err("unknown transform kind")),
        }
    }
}

impl fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            TransformSpec::Swap { s, t } => write!(f, "swap:({}),({})", join(s), join(t)),
            TransformSpec::Flip { fixed } => write!(f, "flip:{fixed}"),
            TransformSpec::LocalFlip(l) => {
                write!(f, "lflip:{},{},{},{}", l.preserved, l.control_axis, l.bit, u8::from(l.polarity))
            }
            TransformSpec::Rotation { x, y, angle } => write!(f, "rot:{x},{y},{angle}"),
            TransformSpec::Translation { axis } => write!(f, "trans:{axis}"),
        }
    }
}

/// X on every qubit outside axis `fixed`.
pub fn symmetric_flip(geometry: &ImageGeometry, fixed: usize) -> Result<Circuit> {
    let keep = geometry.axis_qubits(fixed)?;
    let mut c = Circuit::new(geometry.qubits(), format!("flip:{fixed}"));
    for q in (1..=geometry.qubits()).filter(|q| !keep.contains(q)) {
        c.push(Gate::x(q))?;
    }
    Ok(c)
}

/// Controlled-NOTs from the spec's control qubit onto every qubit outside
/// the preserved axis.
pub fn local_flip(geometry: &ImageGeometry, spec: &LocalFlipSpec) -> Result<Circuit> {
    let control = spec.control_qubit(geometry)?;
    let keep = geometry.axis_qubits(spec.preserved)?;
    let mut c = Circuit::new(geometry.qubits(), TransformSpec::LocalFlip(*spec).to_string());
    for q in (1..=geometry.qubits()).filter(|q| !keep.contains(q) && *q != control) {
        c.push(Gate::cnot(control, spec.polarity, q))?;
    }
    Ok(c)
}

/// Rotation in the plane of axes `x` and `y`:
/// `(v_x, v_y) ↦ (v_y, v̄_x)` for a quarter turn, `(v̄_x, v̄_y)` for a half
/// turn and `(v̄_y, v_x)` for three quarters.
pub fn orthogonal_rotation(geometry: &ImageGeometry, x: usize, y: usize, angle: RotationAngle) -> Result<Circuit> {
    TransformSpec::Rotation { x, y, angle }.validate(geometry)?;
    let xs: Vec<usize> = geometry.axis_qubits(x)?.collect();
    let ys: Vec<usize> = geometry.axis_qubits(y)?.collect();
    let mut c = Circuit::new(geometry.qubits(), format!("rot:{x},{y},{angle}"));
    match angle {
        RotationAngle::Half => {
            for &q in xs.iter().chain(&ys) {
                c.push(Gate::x(q))?;
            }
        }
        RotationAngle::Quarter | RotationAngle::ThreeQuarter => {
            for (&a, &b) in xs.iter().zip(&ys) {
                c.push(Gate::swap(a, b))?;
            }
            let negate = if angle == RotationAngle::Quarter { &ys } else { &xs };
            for &q in negate {
                c.push(Gate::x(q))?;
            }
        }
    }
    Ok(c)
}

/// Cyclic shift `v_x ↦ v_x + 1 mod 2^m` as the successive two-point swaps
/// `|2^m-1⟩↔|0⟩`, `|2^m-2⟩↔|2^m-1⟩`, …, `|1⟩↔|2⟩` on the axis block.
pub fn translation(geometry: &ImageGeometry, axis: usize) -> Result<Circuit> {
    let (first, _) = geometry.axis_span(axis)?;
    let m = geometry.width(axis)?;
    let top = (1usize << m) - 1;
    let mut c = Circuit::new(geometry.qubits(), format!("trans:{axis}"));
    let stages = std::iter::once((top, top, 0)).chain((1..top).rev().map(|j| (j, j, j + 1)));
    for (stage, a, b) in stages {
        let mut sub = synth_two_point_swap(a, b, m)?;
        sub.set_label(format!("G_T^{stage}: |{a}> <-> |{b}>"));
        c.push_block(&sub, first - 1)?;
    }
    Ok(c)
}

/// One pipeline stage: a transform applied `repeat` times in a row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub spec: TransformSpec,
    pub repeat: usize,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.repeat == 1 {
            write!(f, "{}", self.spec)
        } else {
            write!(f, "{}^{}", self.spec, self.repeat)
        }
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, repeat) = match s.rsplit_once('^') {
            Some((body, k)) => {
                let repeat = k.trim().parse::<usize>().ok().filter(|&k| k >= 1).ok_or_else(|| Error::SpecParse {
                    spec: s.to_string(),
                    reason: "repeat count must be a positive integer".into(),
                })?;
                (body, repeat)
            }
            None => (s, 1),
        };
        Ok(Stage { spec: body.parse()?, repeat })
    }
}

/// Parses `"<spec>[^k][;<spec>[^k]…]"`; empty segments are ignored.
pub fn parse_pipeline(text: &str) -> Result<Vec<Stage>> {
    let stages = text.split(';').filter(|s| !s.trim().is_empty()).map(str::parse).collect::<Result<Vec<Stage>>>()?;
    if stages.is_empty() {
        return Err(Error::SpecParse { spec: text.to_string(), reason: "empty pipeline".into() });
    }
    Ok(stages)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::ControlPattern;
    use crate::sim::basis_image;

    fn geo(w: &[usize]) -> ImageGeometry {
        ImageGeometry::new(w.to_vec()).unwrap()
    }

    #[test]
    fn flip_worked_examples() {
        let c = symmetric_flip(&geo(&[1, 1, 1, 1, 1]), 1).unwrap();
        assert_eq!(c.gates(), &[Gate::x(2), Gate::x(3), Gate::x(4), Gate::x(5)]);
        assert_eq!(basis_image(&c, 0).unwrap(), 0b01111);

        let c = symmetric_flip(&geo(&[2, 2, 1]), 1).unwrap();
        assert_eq!(c.gates(), &[Gate::x(3), Gate::x(4), Gate::x(5)]);
        assert_eq!(basis_image(&c, 0).unwrap(), 0b00111);

        assert!(symmetric_flip(&geo(&[4]), 1).unwrap().is_empty());
        assert!(symmetric_flip(&geo(&[4]), 2).is_err());
    }

    #[test]
    fn local_flip_worked_examples() {
        let spec = LocalFlipSpec { preserved: 1, control_axis: 2, bit: 1, polarity: Polarity::One };
        let c = local_flip(&geo(&[1, 1, 1, 1, 1]), &spec).unwrap();
        assert_eq!(
            c.gates(),
            &[Gate::cnot(2, Polarity::One, 3), Gate::cnot(2, Polarity::One, 4), Gate::cnot(2, Polarity::One, 5)]
        );
        // |i1>|1>|i3 i4 i5> -> |i1>|1>|~i3 ~i4 ~i5>, |i1>|0>... fixed
        for i in 0..32usize {
            let expected = if i & 0b01000 != 0 { i ^ 0b00111 } else { i };
            assert_eq!(basis_image(&c, i).unwrap(), expected);
        }

        let c = local_flip(&geo(&[2, 2, 1]), &spec).unwrap();
        assert_eq!(c.gates(), &[Gate::cnot(3, Polarity::One, 4), Gate::cnot(3, Polarity::One, 5)]);
        for i in 0..32usize {
            let expected = if i & 0b00100 != 0 { i ^ 0b00011 } else { i };
            assert_eq!(basis_image(&c, i).unwrap(), expected);
        }

        let zero = LocalFlipSpec { polarity: Polarity::Zero, ..spec };
        let c0 = local_flip(&geo(&[2, 2, 1]), &zero).unwrap();
        assert_eq!(c0.gates(), &[Gate::cnot(3, Polarity::Zero, 4), Gate::cnot(3, Polarity::Zero, 5)]);
    }

    #[test]
    fn local_flip_rejects_bad_specs() {
        let g = geo(&[2, 2, 1]);
        let same = LocalFlipSpec { preserved: 2, control_axis: 2, bit: 1, polarity: Polarity::One };
        assert_eq!(local_flip(&g, &same).unwrap_err(), Error::LocalFlipSameAxis(2));
        let bit = LocalFlipSpec { preserved: 1, control_axis: 3, bit: 2, polarity: Polarity::One };
        assert!(matches!(local_flip(&g, &bit), Err(Error::LocalFlipBit { .. })));
        let axis = LocalFlipSpec { preserved: 4, control_axis: 3, bit: 1, polarity: Polarity::One };
        assert!(local_flip(&g, &axis).is_err());
    }

    #[test]
    fn rotation_circuits() {
        let g = geo(&[2, 2, 1]);
        let q = orthogonal_rotation(&g, 1, 2, RotationAngle::Quarter).unwrap();
        assert_eq!(q.gates(), &[Gate::swap(1, 3), Gate::swap(2, 4), Gate::x(3), Gate::x(4)]);
        let h = orthogonal_rotation(&g, 1, 2, RotationAngle::Half).unwrap();
        assert_eq!(h.gates(), &[Gate::x(1), Gate::x(2), Gate::x(3), Gate::x(4)]);
        let t = orthogonal_rotation(&g, 1, 2, RotationAngle::ThreeQuarter).unwrap();
        assert_eq!(t.gates(), &[Gate::swap(1, 3), Gate::swap(2, 4), Gate::x(1), Gate::x(2)]);
        assert!(matches!(orthogonal_rotation(&g, 1, 3, RotationAngle::Half), Err(Error::UnequalAxisWidths { .. })));
        assert_eq!(orthogonal_rotation(&g, 2, 2, RotationAngle::Half).unwrap_err(), Error::SameRotationAxes(2));
    }

    #[test]
    fn quarter_turn_on_single_qubit_axes() {
        let g = geo(&[1, 1]);
        let c = orthogonal_rotation(&g, 1, 2, RotationAngle::Quarter).unwrap();
        // (0,0) -> (0,1)
        assert_eq!(basis_image(&c, 0b00).unwrap(), 0b01);
    }

    #[test]
    fn translation_single_qubit_axis_is_x() {
        let g = geo(&[1, 1, 1, 1, 1]);
        let c = translation(&g, 4).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.blocks().len(), 1);
        assert_eq!(c.gates()[0], Gate::MultiControlledX(ControlPattern::new(4, vec![]).unwrap()));
    }

    #[test]
    fn translation_three_stages_on_axis_two() {
        let g = geo(&[2, 2, 1]);
        let c = translation(&g, 2).unwrap();
        let labels: Vec<&str> = c.blocks().iter().map(|b| b.label.as_str()).collect();
        assert_eq!(labels, ["G_T^3: |3> <-> |0>", "G_T^2: |2> <-> |3>", "G_T^1: |1> <-> |2>"]);
        assert_eq!(c.blocks().iter().map(|b| b.len).collect::<Vec<_>>(), [3, 1, 3]);
        for g in c.gates() {
            assert!(g.qubits().iter().all(|q| (3..=4).contains(q)), "{g}");
        }
        for i in 0..32usize {
            let v2 = (i >> 1) & 0b11;
            let expected = (i & !0b110) | (((v2 + 1) % 4) << 1);
            assert_eq!(basis_image(&c, i).unwrap(), expected);
        }
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in [
            "flip:2",
            "lflip:1,2,1,0",
            "rot:1,2,pi/2",
            "rot:2,3,3pi/2",
            "rot:1,2,pi",
            "trans:3",
            "swap:(0,2,1),(3,3,0)",
        ] {
            let spec: TransformSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        let spec: TransformSpec = "swap:( 0, 2,1 ), (3,3,0)".parse().unwrap();
        assert_eq!(spec, TransformSpec::Swap { s: vec![0, 2, 1], t: vec![3, 3, 0] });
        for bad in ["flip", "flip:a", "lflip:1,2,1,2", "rot:1,2,pi/3", "nope:1", "swap:(0,1)", "trans:1,2"] {
            assert!(bad.parse::<TransformSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn pipelines() {
        let p = parse_pipeline("flip:1; trans:2^10 ;rot:1,2,pi/2;").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p[1], Stage { spec: TransformSpec::Translation { axis: 2 }, repeat: 10 });
        assert_eq!(p.iter().map(|s| s.to_string()).collect::<Vec<_>>(), ["flip:1", "trans:2^10", "rot:1,2,pi/2"]);
        assert!(parse_pipeline(" ; ").is_err());
        assert!(parse_pipeline("trans:1^0").is_err());
        assert!(parse_pipeline("trans:1^x").is_err());
    }

    #[test]
    fn swap_spec_builds_worked_circuit() {
        let spec: TransformSpec = "swap:(0,2,1),(3,3,0)".parse().unwrap();
        let c = spec.build(&geo(&[2, 2, 1])).unwrap();
        assert_eq!(c.len(), 7);
        assert_eq!(c.label(), "swap:(0,2,1),(3,3,0)");
        let same: TransformSpec = "swap:(1,1,1),(1,1,1)".parse().unwrap();
        assert!(same.build(&geo(&[2, 2, 1])).is_err());
    }
}
