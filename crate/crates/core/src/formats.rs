//! On-disk formats: binary PGM (P5) rasters and the marked-container file.
//!
//! Container layout, all integers big-endian:
//!
//! ```text
//! magic "RDHE" | version u8 = 1 | mode u8 in {1, 2} | width u32 | height u32
//! | trailing-pixel flag u8 in {0, 1} | body bytes
//! ```
//!
//! The body holds one 3-byte triple per pixel pair plus, when the pixel
//! count is odd, one verbatim trailing cipher byte. Reads and writes are
//! exact inverses and byte-stable.

use crate::codec::EmbedMode;
use crate::error::{Error, Result};
use crate::pipeline::MarkedContainer;

/// Container magic bytes.
pub const CONTAINER_MAGIC: &[u8; 4] = b"RDHE";
/// Current container format version.
pub const CONTAINER_VERSION: u8 = 1;
const CONTAINER_HEADER_LEN: usize = 15;

/// An 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayRaster {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl GrayRaster {
    pub fn new(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ImageTooSmall { pixels: 0, min: 1 });
        }
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(Error::LengthMismatch {
                data: expected,
                stream: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixel_count(&self) -> usize {
        self.pixels.len()
    }
}

/// Parse a binary PGM (P5) image with maxval 255.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayRaster> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::Parse("not a binary PGM (missing P5 magic)".into()));
    }
    let mut pos = 2;
    let width = read_header_number(bytes, &mut pos)?;
    let height = read_header_number(bytes, &mut pos)?;
    let maxval = read_header_number(bytes, &mut pos)?;
    if maxval != 255 {
        return Err(Error::Parse(format!(
            "unsupported maxval {maxval}, only 8-bit (255) rasters are handled"
        )));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::Parse("missing whitespace after maxval".into())),
    }
    let needed = width as usize * height as usize;
    let data = &bytes[pos..];
    if data.len() < needed {
        return Err(Error::Parse(format!(
            "truncated raster: header claims {needed} pixels, {} present",
            data.len()
        )));
    }
    GrayRaster::new(width, height, data[..needed].to_vec())
}

/// Serialize a raster as binary PGM. `read_pgm(write_pgm(r)) == r`.
pub fn write_pgm(raster: &GrayRaster) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", raster.width(), raster.height());
    let mut out = Vec::with_capacity(header.len() + raster.pixel_count());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(raster.pixels());
    out
}

fn read_header_number(bytes: &[u8], pos: &mut usize) -> Result<u32> {
    // Skip whitespace and '#' comments running to end of line.
    loop {
        match bytes.get(*pos) {
            Some(b) if b.is_ascii_whitespace() => *pos += 1,
            Some(b'#') => {
                while let Some(&b) = bytes.get(*pos) {
                    *pos += 1;
                    if b == b'\n' {
                        break;
                    }
                }
            }
            _ => break,
        }
    }
    let start = *pos;
    while matches!(bytes.get(*pos), Some(b) if b.is_ascii_digit()) {
        *pos += 1;
    }
    if *pos == start {
        return Err(Error::Parse(
            "expected a decimal value in PGM header".into(),
        ));
    }
    std::str::from_utf8(&bytes[start..*pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse("PGM header value out of range".into()))
}

/// Serialize a container to its wire format.
pub fn write_container(container: &MarkedContainer) -> Vec<u8> {
    let mut out = Vec::with_capacity(CONTAINER_HEADER_LEN + container.body().len());
    out.extend_from_slice(CONTAINER_MAGIC);
    out.push(CONTAINER_VERSION);
    out.push(container.mode().bits_per_symbol());
    out.extend_from_slice(&container.width().to_be_bytes());
    out.extend_from_slice(&container.height().to_be_bytes());
    out.push(u8::from(container.has_trailing_pixel()));
    out.extend_from_slice(container.body());
    out
}

/// Parse a container from its wire format, validating the header and the
/// exact body length.
pub fn read_container(bytes: &[u8]) -> Result<MarkedContainer> {
    if bytes.len() < CONTAINER_HEADER_LEN {
        return Err(Error::Parse(format!(
            "container too short: {} bytes, header alone is {CONTAINER_HEADER_LEN}",
            bytes.len()
        )));
    }
    if &bytes[..4] != CONTAINER_MAGIC {
        return Err(Error::Parse("bad container magic".into()));
    }
    if bytes[4] != CONTAINER_VERSION {
        return Err(Error::Parse(format!(
            "unsupported container version {}",
            bytes[4]
        )));
    }
    let mode = EmbedMode::from_bits(bytes[5])?;
    let width = u32::from_be_bytes(bytes[6..10].try_into().unwrap());
    let height = u32::from_be_bytes(bytes[10..14].try_into().unwrap());
    let trailing = match bytes[14] {
        0 => false,
        1 => true,
        other => {
            return Err(Error::Parse(format!(
                "trailing-pixel flag must be 0 or 1, got {other}"
            )))
        }
    };
    let pixel_count = width as u64 * height as u64;
    if trailing != (pixel_count % 2 == 1) {
        return Err(Error::Parse(format!(
            "trailing-pixel flag {} inconsistent with {pixel_count} pixels",
            u8::from(trailing)
        )));
    }
    let expected = 3 * (pixel_count / 2) + u64::from(trailing);
    let body = &bytes[CONTAINER_HEADER_LEN..];
    if body.len() as u64 != expected {
        return Err(Error::Parse(format!(
            "malformed payload: body is {} bytes, expected {expected}",
            body.len()
        )));
    }
    MarkedContainer::new(width, height, mode, trailing, body.to_vec())
}
