//! Colour palettes and the NASS encoding.
//!
//! Colour `i` of an `M`-colour palette (1-based) maps to the angle
//! `φ_i = π(i-1) / (2(M-1))`. A lattice of pixels with angles `a_y` is stored
//! as the normalized amplitudes `θ_y = a_y / √S` with `S = Σ a_y²`; `S` travels
//! with the state so decoding can undo the normalization.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::Circuit;
use crate::geometry::ImageGeometry;
use crate::sim::{self, StateVector};

/// Slack allowed when a recovered angle falls just outside `[0, π/2]`.
pub const ANGLE_TOLERANCE: f64 = 1e-9;
/// Allowed deviation of a state's norm from 1.
pub const NORM_TOLERANCE: f64 = 1e-12;

const RGB_COLORS: usize = 1 << 24;

/// `φ_i` for colour `i` of `m`.
pub fn color_to_angle(i: usize, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::PaletteTooSmall(m));
    }
    if i == 0 || i > m {
        return Err(Error::PaletteIndex { index: i, count: m });
    }
    // the ratio form keeps both endpoints exact
    Ok(FRAC_PI_2 * ((i - 1) as f64 / (m - 1) as f64))
}

/// Palette index of the 24-bit colour `(x, y, z)`: `x·65536 + y·256 + z + 1`.
pub fn rgb_to_index(x: u32, y: u32, z: u32) -> Result<usize> {
    for c in [x, y, z] {
        if c > 255 {
            return Err(Error::ComponentOutOfRange(c));
        }
    }
    Ok(((x << 16) | (y << 8) | z) as usize + 1)
}

pub fn index_to_rgb(i: usize) -> Result<[u8; 3]> {
    if i == 0 || i > RGB_COLORS {
        return Err(Error::PaletteIndex { index: i, count: RGB_COLORS });
    }
    let v = i - 1;
    Ok([(v >> 16) as u8, (v >> 8) as u8, v as u8])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PaletteKind {
    /// 256 gray levels, level `g` is colour `g + 1`.
    Gray256,
    /// All 2^24 RGB triples under the index rule.
    Rgb24,
    /// An explicit ordered list.
    Custom(Vec<[u8; 3]>),
}

/// An ordered colour set, optionally enlarged by an empty colour that marks
/// lattice points outside the actual image. The empty colour is always the
/// last index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorPalette {
    kind: PaletteKind,
    empty: bool,
    lookup: HashMap<[u8; 3], usize>,
}

impl ColorPalette {
    pub fn gray256() -> ColorPalette {
        ColorPalette { kind: PaletteKind::Gray256, empty: false, lookup: HashMap::new() }
    }

    pub fn rgb24() -> ColorPalette {
        ColorPalette { kind: PaletteKind::Rgb24, empty: false, lookup: HashMap::new() }
    }

    pub fn custom(colors: Vec<[u8; 3]>) -> Result<ColorPalette> {
        if colors.len() < 2 {
            return Err(Error::PaletteTooSmall(colors.len()));
        }
        let mut lookup = HashMap::with_capacity(colors.len());
        for (i, c) in colors.iter().enumerate() {
            if lookup.insert(*c, i + 1).is_some() {
                return Err(Error::DuplicateColor(*c));
            }
        }
        Ok(ColorPalette { kind: PaletteKind::Custom(colors), empty: false, lookup })
    }

    /// Parses one colour per line as `#rrggbb` or `r g b`; blank lines and
    /// lines starting with `//` or `;` are skipped.
    pub fn parse_list(text: &str) -> Result<ColorPalette> {
        let mut colors = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with("//") || line.starts_with(';') {
                continue;
            }
            let bad = || Error::SpecParse { spec: line.to_string(), reason: "expected #rrggbb or `r g b`".into() };
            let rgb = if let Some(hex) = line.strip_prefix('#') {
                let v = u32::from_str_radix(hex, 16).map_err(|_| bad())?;
                if hex.len() != 6 {
                    return Err(bad());
                }
                [(v >> 16) as u8, (v >> 8) as u8, v as u8]
            } else {
                let parts: Vec<&str> =
                    line.split(|c: char| c.is_whitespace() || c == ',').filter(|p| !p.is_empty()).collect();
                if parts.len() != 3 {
                    return Err(bad());
                }
                let mut rgb = [0u8; 3];
                for (slot, p) in rgb.iter_mut().zip(parts) {
                    let v: u32 = p.parse().map_err(|_| bad())?;
                    *slot = u8::try_from(v).map_err(|_| Error::ComponentOutOfRange(v))?;
                }
                rgb
            };
            colors.push(rgb);
        }
        ColorPalette::custom(colors)
    }

    /// Resolves `gray256`, `rgb24` (each optionally suffixed `+empty`).
    pub fn from_id(id: &str) -> Result<ColorPalette> {
        let (base, empty) = match id.strip_suffix("+empty") {
            Some(b) => (b, true),
            None => (id, false),
        };
        let p = match base {
            "gray256" => ColorPalette::gray256(),
            "rgb24" => ColorPalette::rgb24(),
            _ => return Err(Error::SpecParse { spec: id.to_string(), reason: "unknown palette".into() }),
        };
        Ok(if empty { p.with_empty() } else { p })
    }

    /// Adds the empty colour as index `M`.
    pub fn with_empty(mut self) -> ColorPalette {
        self.empty = true;
        self
    }

    pub fn kind(&self) -> &PaletteKind {
        &self.kind
    }

    pub fn has_empty(&self) -> bool {
        self.empty
    }

    pub fn id(&self) -> String {
        let base = match self.kind {
            PaletteKind::Gray256 => "gray256",
            PaletteKind::Rgb24 => "rgb24",
            PaletteKind::Custom(_) => "custom",
        };
        if self.empty {
            format!("{base}+empty")
        } else {
            base.to_string()
        }
    }

    fn base_len(&self) -> usize {
        match &self.kind {
            PaletteKind::Gray256 => 256,
            PaletteKind::Rgb24 => RGB_COLORS,
            PaletteKind::Custom(c) => c.len(),
        }
    }

    /// Colour count `M`, including the empty colour.
    pub fn len(&self) -> usize {
        self.base_len() + usize::from(self.empty)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn empty_index(&self) -> Option<usize> {
        self.empty.then(|| self.len())
    }

    pub fn is_gray(&self) -> bool {
        self.kind == PaletteKind::Gray256
    }

    pub fn angle(&self, i: usize) -> Result<f64> {
        color_to_angle(i, self.len())
    }

    /// RGB value of colour `i`; `None` for the empty colour.
    pub fn color(&self, i: usize) -> Result<Option<[u8; 3]>> {
        if i == 0 || i > self.len() {
            return Err(Error::PaletteIndex { index: i, count: self.len() });
        }
        if Some(i) == self.empty_index() {
            return Ok(None);
        }
        Ok(Some(match &self.kind {
            PaletteKind::Gray256 => [(i - 1) as u8; 3],
            PaletteKind::Rgb24 => index_to_rgb(i)?,
            PaletteKind::Custom(c) => c[i - 1],
        }))
    }

    pub fn index_of_rgb(&self, rgb: [u8; 3]) -> Result<usize> {
        match &self.kind {
            PaletteKind::Gray256 if rgb[0] == rgb[1] && rgb[1] == rgb[2] => Ok(rgb[0] as usize + 1),
            PaletteKind::Gray256 => Err(Error::ColorNotInPalette(rgb)),
            PaletteKind::Rgb24 => rgb_to_index(rgb[0].into(), rgb[1].into(), rgb[2].into()),
            PaletteKind::Custom(_) => self.lookup.get(&rgb).copied().ok_or(Error::ColorNotInPalette(rgb)),
        }
    }

    pub fn index_of_gray(&self, level: u8) -> Result<usize> {
        self.index_of_rgb([level; 3])
    }

    /// Palette index whose angle is closest to `angle`, preferring the lower
    /// index on a tie. `None` when the angle lies outside `[0, π/2]` by more
    /// than [`ANGLE_TOLERANCE`].
    pub fn nearest_index(&self, angle: f64) -> Option<usize> {
        if !(-ANGLE_TOLERANCE..=FRAC_PI_2 + ANGLE_TOLERANCE).contains(&angle) {
            return None;
        }
        let m = self.len();
        let step = FRAC_PI_2 / (m - 1) as f64;
        let lo = ((angle.clamp(0.0, FRAC_PI_2) / step).floor() as usize).min(m - 2) + 1;
        let phi = |i: usize| color_to_angle(i, m).expect("index in range");
        if (phi(lo + 1) - angle).abs() < (angle - phi(lo)).abs() {
            Some(lo + 1)
        } else {
            Some(lo)
        }
    }
}

/// Palette indices on a lattice, stored in basis-index order (axis 1 slowest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalImage {
    geometry: ImageGeometry,
    pixels: Vec<usize>,
}

impl ClassicalImage {
    pub fn new(geometry: ImageGeometry, pixels: Vec<usize>) -> Result<Self> {
        if pixels.len() != geometry.len() {
            return Err(Error::PixelCount { expected: geometry.len(), got: pixels.len() });
        }
        if let Some(&bad) = pixels.iter().find(|&&p| p == 0) {
            return Err(Error::PaletteIndex { index: bad, count: 0 });
        }
        Ok(ClassicalImage { geometry, pixels })
    }

    /// Builds an image by evaluating `f` at every lattice coordinate.
    pub fn from_fn(geometry: ImageGeometry, mut f: impl FnMut(&[usize]) -> usize) -> Result<Self> {
        let pixels = (0..geometry.len()).map(|i| f(&geometry.coordinates_of(i).expect("index in range"))).collect();
        ClassicalImage::new(geometry, pixels)
    }

    /// Places an image of the given `extent` (size per axis) at the origin of
    /// the lattice and fills the remaining points with `fill`, typically the
    /// palette's empty colour.
    pub fn embed(
        geometry: ImageGeometry,
        extent: &[usize],
        fill: usize,
        mut f: impl FnMut(&[usize]) -> usize,
    ) -> Result<Self> {
        if extent.len() != geometry.axis_count() {
            return Err(Error::CoordinateCount { expected: geometry.axis_count(), got: extent.len() });
        }
        for (j, &e) in extent.iter().enumerate() {
            let size = geometry.axis_size(j + 1)?;
            if e > size {
                return Err(Error::CoordinateOutOfRange { axis: j + 1, value: e, size });
            }
        }
        ClassicalImage::from_fn(geometry, |c| if c.iter().zip(extent).all(|(v, e)| v < e) { f(c) } else { fill })
    }

    pub fn geometry(&self) -> &ImageGeometry {
        &self.geometry
    }

    pub fn pixels(&self) -> &[usize] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<usize> {
        self.pixels
    }

    pub fn get(&self, coords: &[usize]) -> Result<usize> {
        Ok(self.pixels[self.geometry.index_of(coords)?])
    }
}

/// A normalized amplitude vector together with its magnitude constant `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct NassState {
    geometry: ImageGeometry,
    state: StateVector,
    magnitude: f64,
}

impl NassState {
    pub fn encode(image: &ClassicalImage, palette: &ColorPalette) -> Result<NassState> {
        let angles = image.pixels.iter().map(|&p| palette.angle(p)).collect::<Result<Vec<f64>>>()?;
        let magnitude: f64 = angles.iter().map(|a| a * a).sum();
        if magnitude == 0.0 {
            return Err(Error::ZeroMagnitude);
        }
        let root = magnitude.sqrt();
        let theta: Vec<f64> = angles.iter().map(|a| a / root).collect();
        NassState::from_parts(image.geometry.clone(), StateVector::from_real(&theta)?, magnitude)
    }

    /// Validates and wraps a state; the norm must be 1 within [`NORM_TOLERANCE`].
    pub fn from_parts(geometry: ImageGeometry, state: StateVector, magnitude: f64) -> Result<NassState> {
        if state.qubits() != geometry.qubits() {
            return Err(Error::WidthMismatch { circuit: geometry.qubits(), state: state.qubits() });
        }
        if !(magnitude.is_finite() && magnitude > 0.0) {
            return Err(Error::BadMagnitude(magnitude));
        }
        let norm = state.norm();
        if norm.is_nan() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(NassState { geometry, state, magnitude })
    }

    pub fn geometry(&self) -> &ImageGeometry {
        &self.geometry
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.state.amplitudes()
    }

    /// The constant `S = Σ a_y²`.
    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    /// Runs a circuit on the amplitudes; `S` is unchanged.
    pub fn apply(&mut self, circuit: &Circuit) -> Result<()> {
        sim::run(circuit, &mut self.state)
    }

    pub fn decode(&self, palette: &ColorPalette) -> Result<ClassicalImage> {
        let root = self.magnitude.sqrt();
        let pixels = self
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, z)| {
                if z.im.abs() > ANGLE_TOLERANCE {
                    return Err(Error::ComplexAmplitude(i));
                }
                let angle = z.re * root;
                palette.nearest_index(angle).ok_or(Error::AngleOutOfRange { index: i, angle })
            })
            .collect::<Result<Vec<_>>>()?;
        ClassicalImage::new(self.geometry.clone(), pixels)
    }

    pub fn to_dump(&self) -> StateDump {
        let amps = self.amplitudes();
        let imag = amps.iter().any(|z| z.im != 0.0).then(|| amps.iter().map(|z| z.im).collect());
        StateDump {
            geometry: self.geometry.clone(),
            magnitude: self.magnitude,
            amplitudes: amps.iter().map(|z| z.re).collect(),
            imag,
        }
    }

    pub fn from_dump(dump: StateDump) -> Result<NassState> {
        let amps: Vec<Complex64> = match &dump.imag {
            Some(im) if im.len() != dump.amplitudes.len() => return Err(Error::BadStateLength(im.len())),
            Some(im) => dump.amplitudes.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect(),
            None => dump.amplitudes.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        };
        if amps.len() != dump.geometry.len() {
            return Err(Error::BadStateLength(amps.len()));
        }
        NassState::from_parts(dump.geometry, StateVector::from_amplitudes(amps)?, dump.magnitude)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_dump())?)
    }

    pub fn from_json(text: &str) -> Result<NassState> {
        NassState::from_dump(serde_json::from_str(text)?)
    }
}

/// On-disk form of a [`NassState`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDump {
    pub geometry: ImageGeometry,
    #[serde(rename = "S")]
    pub magnitude: f64,
    /// Real parts in basis-index order.
    pub amplitudes: Vec<f64>,
    /// Imaginary parts, present only when some are non-zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imag: Option<Vec<f64>>,
}

/// JSON lattice for images with more than two axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub geometry: ImageGeometry,
    pub palette_id: String,
    pub pixels: Vec<usize>,
}

impl LatticeFile {
    pub fn from_image(image: &ClassicalImage, palette: &ColorPalette) -> LatticeFile {
        LatticeFile { geometry: image.geometry.clone(), palette_id: palette.id(), pixels: image.pixels.clone() }
    }

    pub fn into_image(self) -> Result<ClassicalImage> {
        ClassicalImage::new(self.geometry, self.pixels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn geo(w: &[usize]) -> ImageGeometry {
        ImageGeometry::new(w.to_vec()).unwrap()
    }

    #[test]
    fn angle_endpoints_are_exact() {
        for m in [2, 3, 5, 256, 1 << 24] {
            assert_eq!(color_to_angle(1, m).unwrap(), 0.0);
            assert_eq!(color_to_angle(m, m).unwrap(), FRAC_PI_2);
        }
        assert_eq!(color_to_angle(2, 3).unwrap(), std::f64::consts::FRAC_PI_4);
        assert_eq!(color_to_angle(1, 1), Err(Error::PaletteTooSmall(1)));
        assert!(color_to_angle(0, 4).is_err());
        assert!(color_to_angle(5, 4).is_err());
    }

    #[test]
    fn rgb_index_rule() {
        assert_eq!(rgb_to_index(0, 0, 0).unwrap(), 1);
        assert_eq!(rgb_to_index(255, 255, 255).unwrap(), 16_777_216);
        assert_eq!(rgb_to_index(0, 1, 0).unwrap(), 257);
        assert_eq!(rgb_to_index(256, 0, 0), Err(Error::ComponentOutOfRange(256)));
        assert_eq!(index_to_rgb(257).unwrap(), [0, 1, 0]);
        assert!(index_to_rgb(0).is_err());
        assert!(index_to_rgb(16_777_217).is_err());
    }

    #[test]
    fn palettes() {
        let g = ColorPalette::gray256();
        assert_eq!(g.len(), 256);
        assert_eq!(g.color(1).unwrap(), Some([0, 0, 0]));
        assert_eq!(g.index_of_gray(200).unwrap(), 201);
        assert!(g.index_of_rgb([1, 2, 3]).is_err());

        let e = ColorPalette::gray256().with_empty();
        assert_eq!((e.len(), e.empty_index(), e.id()), (257, Some(257), "gray256+empty".to_string()));
        assert_eq!(e.color(257).unwrap(), None);
        assert_eq!(e.angle(257).unwrap(), FRAC_PI_2);
        assert_eq!(ColorPalette::from_id("gray256+empty").unwrap(), e);

        let c = ColorPalette::parse_list("#ff0000\n// comment\n0 255 0\n\n0,0,255\n").unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.index_of_rgb([0, 255, 0]).unwrap(), 2);
        assert_eq!(c.color(3).unwrap(), Some([0, 0, 255]));
        assert!(ColorPalette::parse_list("#ff0000\n#ff0000").is_err());
        assert!(ColorPalette::parse_list("#ff0000").is_err());
        assert!(ColorPalette::parse_list("1 2\n3 4 5").is_err());
        assert!(ColorPalette::from_id("cmyk").is_err());
    }

    #[test]
    fn nearest_angle_prefers_lower_index_on_ties() {
        let p = ColorPalette::custom(vec![[0; 3], [1; 3], [2; 3]]).unwrap();
        let quarter = std::f64::consts::FRAC_PI_4;
        assert_eq!(p.nearest_index(quarter / 2.0), Some(1));
        assert_eq!(p.nearest_index(quarter / 2.0 + 1e-6), Some(2));
        assert_eq!(p.nearest_index(FRAC_PI_2 + 1e-10), Some(3));
        assert_eq!(p.nearest_index(-1e-10), Some(1));
        assert_eq!(p.nearest_index(FRAC_PI_2 + 1e-6), None);
        assert_eq!(p.nearest_index(f64::NAN), None);
    }

    #[test]
    fn two_equal_pixels() {
        let p = ColorPalette::custom(vec![[0; 3], [1; 3], [2; 3]]).unwrap();
        let s = NassState::encode(&ClassicalImage::new(geo(&[1]), vec![2, 2]).unwrap(), &p).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for z in s.amplitudes() {
            assert!((z.re - h).abs() < 1e-15 && z.im == 0.0);
        }
    }

    #[test]
    fn uniform_image_is_uniform_state() {
        let p = ColorPalette::gray256();
        for w in [&[3][..], &[2, 3], &[1, 2, 1]] {
            let g = geo(w);
            let n = g.qubits();
            let s = NassState::encode(&ClassicalImage::new(g.clone(), vec![77; g.len()]).unwrap(), &p).unwrap();
            let expect = 2f64.powf(-(n as f64) / 2.0);
            assert!(s.amplitudes().iter().all(|z| (z.re - expect).abs() < 1e-15));
        }
    }

    #[test]
    fn all_black_image_is_rejected() {
        let img = ClassicalImage::new(geo(&[2]), vec![1; 4]).unwrap();
        assert_eq!(NassState::encode(&img, &ColorPalette::gray256()), Err(Error::ZeroMagnitude));
    }

    #[test]
    fn matches_straight_line_evaluation() {
        // 4x8 image over 5 colours, amplitudes evaluated term by term
        let mut rng = StdRng::seed_from_u64(11);
        let colors: Vec<[u8; 3]> = (0..5u8).map(|i| [i, 0, 0]).collect();
        let p = ColorPalette::custom(colors).unwrap();
        let g = geo(&[2, 3]);
        let pixels: Vec<usize> = (0..32).map(|_| rng.random_range(1..=5)).collect();
        let s = NassState::encode(&ClassicalImage::new(g, pixels.clone()).unwrap(), &p).unwrap();
        let mut sum = 0.0;
        for &k in &pixels {
            let a = std::f64::consts::PI * (k as f64 - 1.0) / (2.0 * 4.0);
            sum += a * a;
        }
        assert!((s.magnitude() - sum).abs() < 1e-12);
        for (y, &k) in pixels.iter().enumerate() {
            let a = std::f64::consts::PI * (k as f64 - 1.0) / 8.0;
            assert!((s.amplitudes()[y].re - a / sum.sqrt()).abs() < 1e-12);
        }
        assert!((s.state().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn four_by_eight_layout() {
        // pixel at row r, column c sits at basis |r>|c>
        let g = geo(&[2, 3]);
        let img = ClassicalImage::from_fn(g, |c| 1 + c[0] * 8 + c[1]).unwrap();
        let s = NassState::encode(&img, &ColorPalette::gray256()).unwrap();
        let root = s.magnitude().sqrt();
        for r in 0..4 {
            for c in 0..8 {
                let expect = color_to_angle(1 + r * 8 + c, 256).unwrap() / root;
                assert_eq!(s.amplitudes()[(r << 3) | c].re, expect);
            }
        }
    }

    #[test]
    fn decode_inverts_encode() {
        let mut rng = StdRng::seed_from_u64(3);
        for case in 0..200 {
            let n = rng.random_range(1..=10usize);
            let mut widths = Vec::new();
            let mut left = n;
            while left > 0 {
                let w = rng.random_range(1..=left);
                widths.push(w);
                left -= w;
            }
            let p = match case % 3 {
                0 => ColorPalette::gray256(),
                1 => ColorPalette::rgb24(),
                _ => ColorPalette::custom((0..7u8).map(|i| [i, i, 9]).collect()).unwrap().with_empty(),
            };
            let g = geo(&widths);
            let mut pixels: Vec<usize> = (0..g.len()).map(|_| rng.random_range(1..=p.len())).collect();
            pixels[0] = p.len();
            let img = ClassicalImage::new(g, pixels).unwrap();
            let s = NassState::encode(&img, &p).unwrap();
            assert!((s.state().norm() - 1.0).abs() <= NORM_TOLERANCE);
            assert_eq!(s.decode(&p).unwrap(), img);
        }
    }

    #[test]
    fn uniform_top_angle_decodes_to_last_colour() {
        let g = geo(&[1, 2]);
        let amp = 1.0 / (g.len() as f64).sqrt();
        let magnitude = g.len() as f64 * FRAC_PI_2 * FRAC_PI_2;
        let s =
            NassState::from_parts(g.clone(), StateVector::from_real(&vec![amp; g.len()]).unwrap(), magnitude).unwrap();
        let p = ColorPalette::gray256();
        assert_eq!(s.decode(&p).unwrap().pixels(), &vec![256; g.len()][..]);
    }

    #[test]
    fn decode_rejects_out_of_range_angles() {
        let g = geo(&[1]);
        let s = NassState::from_parts(g, StateVector::from_real(&[-0.6, 0.8]).unwrap(), 1.0).unwrap();
        assert!(matches!(s.decode(&ColorPalette::gray256()), Err(Error::AngleOutOfRange { index: 0, .. })));
        let g = geo(&[1]);
        let s = NassState::from_parts(g, StateVector::from_real(&[0.6, 0.8]).unwrap(), 100.0).unwrap();
        assert!(matches!(s.decode(&ColorPalette::gray256()), Err(Error::AngleOutOfRange { index: 0, .. })));
    }

    #[test]
    fn from_parts_checks() {
        let g = geo(&[1]);
        let unit = StateVector::from_real(&[0.6, 0.8]).unwrap();
        assert!(matches!(
            NassState::from_parts(g.clone(), StateVector::from_real(&[0.6, 0.7]).unwrap(), 1.0),
            Err(Error::NotNormalized { .. })
        ));
        assert_eq!(NassState::from_parts(g.clone(), unit.clone(), 0.0), Err(Error::BadMagnitude(0.0)));
        assert!(NassState::from_parts(geo(&[2]), unit, 1.0).is_err());
    }

    #[test]
    fn dump_round_trip() {
        let img = ClassicalImage::new(geo(&[1, 1]), vec![1, 5, 9, 200]).unwrap();
        let s = NassState::encode(&img, &ColorPalette::gray256()).unwrap();
        let json = s.to_json().unwrap();
        assert!(json.starts_with("{\"geometry\":[1,1],\"S\":"));
        assert!(!json.contains("imag"));
        assert_eq!(NassState::from_json(&json).unwrap(), s);

        let mut dump = s.to_dump();
        dump.imag = Some(vec![0.0, 0.0, 0.0]);
        assert!(NassState::from_dump(dump).is_err());
    }

    #[test]
    fn embed_fills_outside_extent() {
        let p = ColorPalette::gray256().with_empty();
        let img = ClassicalImage::embed(geo(&[2, 2]), &[3, 2], p.empty_index().unwrap(), |c| 10 + c[0]).unwrap();
        assert_eq!(img.get(&[2, 1]).unwrap(), 12);
        assert_eq!(img.get(&[3, 0]).unwrap(), 257);
        assert_eq!(img.get(&[0, 2]).unwrap(), 257);
        assert!(ClassicalImage::embed(geo(&[2, 2]), &[5, 2], 1, |_| 1).is_err());
    }

    #[test]
    fn lattice_file() {
        let img = ClassicalImage::new(geo(&[1, 1, 1]), (1..=8).collect()).unwrap();
        let lf = LatticeFile::from_image(&img, &ColorPalette::gray256());
        let text = serde_json::to_string(&lf).unwrap();
        assert_eq!(text, r#"{"geometry":[1,1,1],"palette_id":"gray256","pixels":[1,2,3,4,5,6,7,8]}"#);
        let back: LatticeFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_image().unwrap(), img);
    }
}
