//! Reversible data hiding in encrypted images via polynomial coding
//! mod 256.
//!
//! An image provider stream-encrypts a grayscale raster and encodes each
//! pair of cipher pixels as the three coefficients of a quadratic with a
//! known root at the shared public id. A data hider then adds secret
//! symbols onto two of the coefficients without holding the encryption
//! key, and a receiver separately extracts the exact message (hiding key)
//! and restores the original image bit-for-bit (encryption key).
//!
//! Module map:
//! - [`codec`]: the pure mod-256 polynomial encode/embed/extract/recover
//!   arithmetic;
//! - [`keystream`]: keys, ChaCha20 keystream derivation and XOR helpers;
//! - [`pipeline`]: the three roles end to end, payload framing, capacity;
//! - [`formats`]: PGM rasters and the container wire format;
//! - [`metrics`]: PSNR/SSIM, histogram, entropy, correlation, expansion;
//! - [`bits`]: MSB-first bit packing shared by the above.
//!
//! ```
//! use rdhe_core::codec::{EmbedMode, PublicId};
//! use rdhe_core::keystream::{EncryptionKey, HidingKey};
//! use rdhe_core::pipeline::{hider_embed, provider_encrypt, receiver_process};
//! use rdhe_core::GrayRaster;
//!
//! let image = GrayRaster::new(8, 8, (0..64).collect())?;
//! let ke = EncryptionKey::from_text("provider secret");
//! let kw = HidingKey::from_text("hider secret");
//! let id = PublicId::new(9)?;
//!
//! let (container, beta) = provider_encrypt(&image, &ke, id, EmbedMode::TwoBit)?;
//! let marked = hider_embed(&container, beta, &[1, 0, 1, 1], &kw)?;
//!
//! let out = receiver_process(&marked, Some(&ke), Some(&kw))?;
//! assert_eq!(out.image.unwrap(), image);
//! assert_eq!(out.message_bits.unwrap(), vec![1, 0, 1, 1]);
//! # Ok::<(), rdhe_core::Error>(())
//! ```

pub mod bits;
pub mod codec;
pub mod error;
pub mod formats;
pub mod keystream;
pub mod metrics;
pub mod pipeline;

pub use codec::{EmbedMode, EncodedTriple, MarkedTriple, PlainGroup, PublicId, SecretPair};
pub use error::{Error, Result};
pub use formats::GrayRaster;
pub use keystream::{EncryptionKey, HidingKey, KeystreamMatrix};
pub use metrics::{Psnr, QualityReport, SecurityReport};
pub use pipeline::{Beta, Capacity, EmbeddedPayload, MarkedContainer, ReceiverOutput};
