//! Keyed keystream derivation and XOR encryption.
//!
//! Keystreams are pinned to one construction so that independent
//! implementations produce bit-identical output: the ChaCha20 key is
//! SHA-256 of the raw key material and the 96-bit nonce is the first 12
//! bytes of SHA-256 of a context label. Distinct labels give independent
//! streams from the same key; [`IMAGE_CONTEXT`] covers pixels and
//! [`MESSAGE_CONTEXT`] covers secret-message bits.

use chacha20::cipher::{KeyIvInit, StreamCipher};
use chacha20::ChaCha20;
use sha2::{Digest, Sha256};

use crate::bits;
use crate::error::{Error, Result};

/// Context label for the pixel keystream matrix.
pub const IMAGE_CONTEXT: &str = "image";
/// Context label for the secret-message keystream.
pub const MESSAGE_CONTEXT: &str = "message";

/// Raw key material for keystream derivation. Implemented by both key
/// types so [`derive_keystream`] can serve either role.
pub trait KeystreamKey {
    fn material(&self) -> &[u8];
}

macro_rules! key_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq)]
        pub struct $name(Vec<u8>);

        impl $name {
            /// Use raw bytes as key material. Must be non-empty.
            pub fn from_bytes(material: impl Into<Vec<u8>>) -> Result<Self> {
                let material = material.into();
                if material.is_empty() {
                    return Err(Error::EmptyKey);
                }
                Ok(Self(material))
            }

            /// Derive key material from a text passphrase as SHA-256 of its
            /// UTF-8 bytes. This is the fixed text-to-key rule the CLI uses.
            pub fn from_text(text: &str) -> Self {
                Self(Sha256::digest(text.as_bytes()).to_vec())
            }
        }

        impl KeystreamKey for $name {
            fn material(&self) -> &[u8] {
                &self.0
            }
        }

        impl std::fmt::Debug for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                write!(f, concat!(stringify!($name), "({} bytes)"), self.0.len())
            }
        }
    };
}

key_type!(
    /// The image-encryption key, shared between provider and receiver.
    EncryptionKey
);
key_type!(
    /// The data-hiding key, shared between hider and receiver.
    HidingKey
);

/// Deterministic pseudo-random bytes from `(key, context, length)`.
pub fn derive_keystream<K: KeystreamKey>(key: &K, length: usize, context: &str) -> Vec<u8> {
    let cipher_key: [u8; 32] = Sha256::digest(key.material()).into();
    let label_hash: [u8; 32] = Sha256::digest(context.as_bytes()).into();
    let mut nonce = [0u8; 12];
    nonce.copy_from_slice(&label_hash[..12]);
    let mut stream = vec![0u8; length];
    ChaCha20::new(&cipher_key.into(), &nonce.into()).apply_keystream(&mut stream);
    stream
}

/// The pseudo-random matrix used to encrypt pixels, generated row-major
/// over the image so entry `(i, j)` covers pixel `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeystreamMatrix {
    width: u32,
    height: u32,
    bytes: Vec<u8>,
}

impl KeystreamMatrix {
    /// Generate the matrix for an image of `width * height` pixels.
    pub fn generate(key: &EncryptionKey, width: u32, height: u32) -> Self {
        let len = width as usize * height as usize;
        Self {
            width,
            height,
            bytes: derive_keystream(key, len, IMAGE_CONTEXT),
        }
    }

    /// Wrap caller-provided keystream bytes. Intended for interoperability
    /// tests and worked examples; the normal path is [`Self::generate`].
    pub fn from_bytes(width: u32, height: u32, bytes: Vec<u8>) -> Result<Self> {
        let expected = width as usize * height as usize;
        if bytes.len() != expected {
            return Err(Error::LengthMismatch {
                data: expected,
                stream: bytes.len(),
            });
        }
        Ok(Self {
            width,
            height,
            bytes,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }
}

/// Element-wise XOR of two equal-length buffers. Applying the same stream
/// twice restores the input.
pub fn xor_bytes(data: &[u8], stream: &[u8]) -> Result<Vec<u8>> {
    if data.len() != stream.len() {
        return Err(Error::LengthMismatch {
            data: data.len(),
            stream: stream.len(),
        });
    }
    Ok(data.iter().zip(stream).map(|(d, s)| d ^ s).collect())
}

/// XOR a bit sequence with the message keystream of `key`. Self-inverse.
pub fn encrypt_message_bits(message: &[u8], key: &HidingKey) -> Vec<u8> {
    let stream = derive_keystream(key, message.len().div_ceil(8), MESSAGE_CONTEXT);
    let stream_bits = bits::bytes_to_bits(&stream);
    message
        .iter()
        .zip(stream_bits)
        .map(|(&bit, k)| bit ^ k)
        .collect()
}

/// Inverse of [`encrypt_message_bits`] (the XOR is an involution).
pub fn decrypt_message_bits(message: &[u8], key: &HidingKey) -> Vec<u8> {
    encrypt_message_bits(message, key)
}
