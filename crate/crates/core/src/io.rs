//! Reading and writing lattice images.
//!
//! Two-axis geometries use raster files: axis 1 indexes rows and axis 2
//! indexes columns, so a `(7, 7)` geometry is a 128×128 picture. Other
//! geometries, and any path ending in `.json`, use [`LatticeFile`].

use std::fs;
use std::io::Cursor;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, GrayImage, ImageEncoder, ImageFormat, ImageReader, RgbImage};

use crate::codec::{ClassicalImage, ColorPalette, LatticeFile};
use crate::error::{Error, Result};
use crate::geometry::ImageGeometry;

/// Raster dimensions `(rows, columns)` of a two-axis geometry.
pub fn raster_shape(geometry: &ImageGeometry) -> Result<(u32, u32)> {
    if geometry.axis_count() != 2 {
        return Err(Error::Image(format!(
            "raster files need a two-axis geometry, got {geometry}; use a .json lattice instead"
        )));
    }
    let rows = u32::try_from(geometry.axis_size(1)?).map_err(|_| Error::Image("too many rows".into()))?;
    let cols = u32::try_from(geometry.axis_size(2)?).map_err(|_| Error::Image("too many columns".into()))?;
    Ok((rows, cols))
}

/// Converts a decoded raster to palette indices.
pub fn from_raster(raster: &DynamicImage, geometry: &ImageGeometry, palette: &ColorPalette) -> Result<ClassicalImage> {
    let (rows, cols) = raster_shape(geometry)?;
    if (raster.height(), raster.width()) != (rows, cols) {
        return Err(Error::Image(format!(
            "image is {}x{} (w x h) but geometry {geometry} needs {cols}x{rows}",
            raster.width(),
            raster.height()
        )));
    }
    let pixels = if palette.is_gray() {
        raster.to_luma8().pixels().map(|p| palette.index_of_gray(p.0[0])).collect::<Result<Vec<_>>>()?
    } else {
        raster.to_rgb8().pixels().map(|p| palette.index_of_rgb(p.0)).collect::<Result<Vec<_>>>()?
    };
    ClassicalImage::new(geometry.clone(), pixels)
}

/// Renders palette indices as a raster; the empty colour becomes black.
pub fn to_raster(image: &ClassicalImage, palette: &ColorPalette) -> Result<DynamicImage> {
    let (rows, cols) = raster_shape(image.geometry())?;
    let colors =
        image.pixels().iter().map(|&p| Ok(palette.color(p)?.unwrap_or([0, 0, 0]))).collect::<Result<Vec<[u8; 3]>>>()?;
    Ok(if palette.is_gray() {
        let buf: Vec<u8> = colors.iter().map(|c| c[0]).collect();
        DynamicImage::ImageLuma8(GrayImage::from_raw(cols, rows, buf).expect("buffer size"))
    } else {
        let buf: Vec<u8> = colors.iter().flatten().copied().collect();
        DynamicImage::ImageRgb8(RgbImage::from_raw(cols, rows, buf).expect("buffer size"))
    })
}

/// Output encodings for raster files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RasterFormat {
    Png,
    /// Binary PPM (P6).
    Ppm,
    /// Plain-text PPM (P3).
    PpmAscii,
}

impl RasterFormat {
    /// Chooses by extension: `.png`, otherwise PPM.
    pub fn for_path(path: &Path, ascii: bool) -> RasterFormat {
        let png = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("png"));
        match (png, ascii) {
            (true, _) => RasterFormat::Png,
            (false, true) => RasterFormat::PpmAscii,
            (false, false) => RasterFormat::Ppm,
        }
    }
}

/// Encodes an image to bytes. PPM output always carries RGB triplets and
/// gray images repeat the level in each channel.
pub fn encode_raster(image: &ClassicalImage, palette: &ColorPalette, format: RasterFormat) -> Result<Vec<u8>> {
    let raster = to_raster(image, palette)?;
    let mut out = Vec::new();
    match format {
        RasterFormat::Png => raster.write_to(&mut Cursor::new(&mut out), ImageFormat::Png)?,
        RasterFormat::Ppm | RasterFormat::PpmAscii => {
            let encoding = if format == RasterFormat::Ppm { SampleEncoding::Binary } else { SampleEncoding::Ascii };
            let rgb = raster.to_rgb8();
            PnmEncoder::new(&mut out).with_subtype(PnmSubtype::Pixmap(encoding)).write_image(
                rgb.as_raw(),
                rgb.width(),
                rgb.height(),
                ExtendedColorType::Rgb8,
            )?;
        }
    }
    Ok(out)
}

pub fn decode_raster(bytes: &[u8], geometry: &ImageGeometry, palette: &ColorPalette) -> Result<ClassicalImage> {
    let raster = ImageReader::new(Cursor::new(bytes)).with_guessed_format()?.decode()?;
    from_raster(&raster, geometry, palette)
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Reads a raster file or a JSON lattice; the result must match `geometry`.
pub fn read_image(path: &Path, geometry: &ImageGeometry, palette: &ColorPalette) -> Result<ClassicalImage> {
    let bytes = fs::read(path)?;
    if is_json(path) || geometry.axis_count() != 2 {
        let lattice: LatticeFile = serde_json::from_slice(&bytes)?;
        if &lattice.geometry != geometry {
            return Err(Error::Image(format!("lattice geometry {} does not match {geometry}", lattice.geometry)));
        }
        let image = lattice.into_image()?;
        for &p in image.pixels() {
            palette.color(p)?;
        }
        return Ok(image);
    }
    decode_raster(&bytes, geometry, palette)
}

/// Writes a raster file for two-axis images (PNG by extension, else PPM)
/// and a JSON lattice otherwise or when the path ends in `.json`.
pub fn write_image(path: &Path, image: &ClassicalImage, palette: &ColorPalette, ascii_ppm: bool) -> Result<()> {
    let bytes = if is_json(path) || image.geometry().axis_count() != 2 {
        serde_json::to_vec(&LatticeFile::from_image(image, palette))?
    } else {
        encode_raster(image, palette, RasterFormat::for_path(path, ascii_ppm))?
    };
    fs::write(path, bytes)?;
    Ok(())
}
