use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the toolkit.
///
/// Rejected-input variants (`IdOutOfRange`, `IdModeMismatch`,
/// `SecretOutOfRange`, ...) indicate an argument that violates a documented
/// precondition. `Corruption` means well-formed input whose content is
/// arithmetically inconsistent, which signals tampering or a key/id/mode
/// mismatch.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Public identity outside the 4-bit representable range.
    #[error("public id {0} out of range (must be 2..=15)")]
    IdOutOfRange(u8),

    /// Public identity incompatible with the embedding mode.
    #[error("id {id} is invalid for {bits}-bit embedding")]
    IdModeMismatch { id: u8, bits: u8 },

    /// Secret symbols outside the mode alphabet.
    #[error("secret pair (s2={s2}, s1={s1}) outside the {bits}-bit alphabet")]
    SecretOutOfRange { s2: u8, s1: u8, bits: u8 },

    /// Key material must be non-empty.
    #[error("key material must not be empty")]
    EmptyKey,

    /// Input image below the minimum supported size.
    #[error("image has {pixels} pixels, need at least {min}")]
    ImageTooSmall { pixels: usize, min: usize },

    /// Two buffers that must match in length do not.
    #[error("length mismatch: data is {data} bytes, stream is {stream} bytes")]
    LengthMismatch { data: usize, stream: usize },

    /// Two rasters that must match in dimensions do not.
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),

    /// Raster too small for the requested window size.
    #[error("raster {0}x{1} is smaller than the {2}x{2} analysis window")]
    WindowTooLarge(u32, u32, u32),

    /// A ratio with a zero denominator was requested.
    #[error("denominator must be positive")]
    ZeroDenominator,

    /// Payload does not fit the container.
    #[error("payload needs {needed} bits but capacity is {available} bits")]
    CapacityExceeded { needed: usize, available: usize },

    /// Input bytes do not form a valid PGM image or container.
    #[error("parse error: {0}")]
    Parse(String),

    /// The embedded payload framing is inconsistent.
    #[error("malformed payload: {0}")]
    MalformedPayload(String),

    /// Arithmetic consistency check failed; data was tampered with or the
    /// wrong id/mode was supplied.
    #[error("corruption detected: {0}")]
    Corruption(String),
}
