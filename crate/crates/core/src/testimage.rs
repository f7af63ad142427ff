//! A deterministic gray test picture with no symmetry, so every flip,
//! rotation and shift of it is distinguishable from the original.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::codec::{ClassicalImage, ColorPalette};
use crate::error::Result;
use crate::geometry::ImageGeometry;

/// Seed used for the picture shipped with the experiments.
pub const DEFAULT_SEED: u64 = 0x5eed_0128;

/// Gray levels (0..=255) for a `rows × cols` picture: a diagonal gradient, an
/// off-centre disc, an L-shaped bar in the upper left, a marker square near
/// the lower right and light seeded noise.
pub fn gray_levels(rows: usize, cols: usize, seed: u64) -> Vec<u8> {
    let mut rng = StdRng::seed_from_u64(seed);
    let (h, w) = (rows as f64, cols as f64);
    let mut out = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let (y, x) = (r as f64 / h, c as f64 / w);
            let mut v = 40.0 + 120.0 * (0.7 * x + 0.3 * y);
            let (dy, dx) = (y - 0.3, x - 0.65);
            if dy * dy + dx * dx < 0.04 {
                v = 235.0 - 60.0 * x;
            }
            let in_bar = (y > 0.1 && y < 0.6 && x > 0.1 && x < 0.18) || (y > 0.52 && y < 0.6 && x > 0.1 && x < 0.4);
            if in_bar {
                v = 15.0;
            }
            if y > 0.78 && y < 0.86 && x > 0.8 && x < 0.9 {
                v = 250.0;
            }
            v += rng.random_range(-6.0..6.0);
            out.push(v.round().clamp(1.0, 255.0) as u8);
        }
    }
    out
}

/// The test picture on a two-axis geometry, as gray-palette indices.
pub fn test_image(geometry: &ImageGeometry, seed: u64) -> Result<ClassicalImage> {
    let (rows, cols) = crate::io::raster_shape(geometry)?;
    let palette = ColorPalette::gray256();
    let levels = gray_levels(rows as usize, cols as usize, seed);
    let pixels = levels.iter().map(|&l| palette.index_of_gray(l)).collect::<Result<Vec<_>>>()?;
    ClassicalImage::new(geometry.clone(), pixels)
}
