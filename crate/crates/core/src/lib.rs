//! Geometric transformations of images stored in normal arbitrary
//! superposition state (NASS).
//!
//! An image with colours drawn from a palette of `M` values is stored on
//! `n = Σ m_j` qubits. Axis `j` of the lattice owns a contiguous block of
//! `m_j` qubits and pixel colours are carried by real amplitudes. Every
//! transformation here is a permutation of basis states, so it moves pixels
//! without touching the colour metadata.

pub mod codec;
pub mod count;
pub mod error;
pub mod gate;
pub mod geometry;
pub mod gray;
pub mod io;
pub mod oracle;
pub mod sim;
pub mod testimage;
pub mod transform;
pub mod verify;

pub use codec::{color_to_angle, rgb_to_index, ClassicalImage, ColorPalette, LatticeFile, NassState, StateDump};
pub use count::{count_gates, CostModel, GateCountReport};
pub use error::{Error, Result};
pub use gate::{Circuit, Control, ControlPattern, Gate, Matrix2, Polarity};
pub use geometry::{BasisIndex, ImageGeometry};
pub use gray::{gray_path, synth_two_point_swap, GrayPath};
pub use oracle::{oracle_permutation, permutation_of_circuit, PixelPermutation};
pub use sim::StateVector;
pub use transform::{parse_pipeline, LocalFlipSpec, RotationAngle, Stage, TransformSpec};
pub use verify::{verify_circuit, verify_spec, VerifyOptions, VerifyReport};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/encoding.md")]
    pub mod encoding {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    pub mod circuits {}
    #[doc = include_str!("../../../book/src/two-point-swap.md")]
    pub mod two_point_swap {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    pub mod transforms {}
    #[doc = include_str!("../../../book/src/verification.md")]
    pub mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
