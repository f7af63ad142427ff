use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("geometry needs at least one axis")]
    NoAxes,
    #[error("axis {axis} has width 0; every axis needs at least one qubit")]
    ZeroWidthAxis { axis: usize },
    #[error("geometry uses {qubits} qubits, more than the supported {max}")]
    TooManyQubits { qubits: usize, max: usize },
    #[error("axis {axis} out of range 1..={count}")]
    AxisOutOfRange { axis: usize, count: usize },
    #[error("qubit {qubit} out of range 1..={width}")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("basis index {index} out of range for {qubits} qubits")]
    IndexOutOfRange { index: usize, qubits: usize },
    #[error("coordinate {value} on axis {axis} exceeds axis size {size}")]
    CoordinateOutOfRange { axis: usize, value: usize, size: usize },
    #[error("expected {expected} coordinates, got {got}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("invalid bit string {0:?}")]
    InvalidBits(String),

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NonUnitary { deviation: f64 },
    #[error("control and target are the same qubit {0}")]
    ControlIsTarget(usize),
    #[error("swap needs two distinct qubits, got {0} twice")]
    SwapSameQubit(usize),
    #[error("duplicate control on qubit {0}")]
    DuplicateControl(usize),
    #[error("width mismatch: circuit has {circuit} qubits, state has {state}")]
    WidthMismatch { circuit: usize, state: usize },
    #[error("state length {0} is not a power of two")]
    BadStateLength(usize),

    #[error("a palette needs at least two colors, got {0}")]
    PaletteTooSmall(usize),
    #[error("palette index {index} out of range 1..={count}")]
    PaletteIndex { index: usize, count: usize },
    #[error("color component {0} out of range 0..=255")]
    ComponentOutOfRange(u32),
    #[error("color {0:?} is not in the palette")]
    ColorNotInPalette([u8; 3]),
    #[error("custom palette colors must be distinct; {0:?} repeats")]
    DuplicateColor([u8; 3]),
    #[error("image has {got} pixels, geometry needs {expected}")]
    PixelCount { expected: usize, got: usize },
    #[error("every pixel maps to angle 0, so the state cannot be normalized")]
    ZeroMagnitude,
    #[error("state norm {norm} differs from 1")]
    NotNormalized { norm: f64 },
    #[error("recovered angle {angle} at basis index {index} lies outside [0, pi/2]")]
    AngleOutOfRange { index: usize, angle: f64 },
    #[error("amplitude at basis index {0} has a non-zero imaginary part")]
    ComplexAmplitude(usize),
    #[error("magnitude constant S must be positive and finite, got {0}")]
    BadMagnitude(f64),

    #[error("two-point swap needs distinct points, got {0} twice")]
    SamePoints(usize),
    #[error("invalid Gray path: {0}")]
    InvalidGrayPath(String),
    #[error("rotation axes must differ, got {0} twice")]
    SameRotationAxes(usize),
    #[error("rotation axes {x} and {y} have different widths ({mx} vs {my})")]
    UnequalAxisWidths { x: usize, y: usize, mx: usize, my: usize },
    #[error("local flip control axis must differ from the preserved axis {0}")]
    LocalFlipSameAxis(usize),
    #[error("local flip bit {h} out of range 1..={width} for axis {axis}")]
    LocalFlipBit { axis: usize, h: usize, width: usize },
    #[error("cannot parse transform spec {spec:?}: {reason}")]
    SpecParse { spec: String, reason: String },
    #[error("cannot parse geometry {0:?}")]
    GeometryParse(String),

    #[error("circuit is not a permutation: basis state {0} maps to a superposition")]
    NotPermutation(usize),
    #[error("width {qubits} exceeds the exhaustive limit {limit}")]
    OverExhaustiveLimit { qubits: usize, limit: usize },
    #[error("map is not a bijection: {0} is hit twice")]
    NotBijection(usize),

    #[error("i/o error: {0}")]
    Io(String),
    #[error("image error: {0}")]
    Image(String),
    #[error("json error: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<image::ImageError> for Error {
    fn from(e: image::ImageError) -> Self {
        Error::Image(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
