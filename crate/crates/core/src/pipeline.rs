//! End-to-end orchestration of the three roles.
//!
//! The provider XOR-encrypts the image, encodes consecutive cipher-pixel
//! pairs into 3-byte triples and stamps the 4-bit public id into the LSBs
//! of the first four body bytes, handing the displaced LSBs (beta) to the
//! hider. The hider frames `beta || length || encrypted message bits` and
//! adds the resulting symbols into the data triples. The receiver reads the
//! id from the stamp, extracts every secret pair, and separately decrypts
//! the message (hiding key) and/or restores the exact original raster
//! (encryption key).
//!
//! Layout invariants:
//! - the first three triples (9 bytes) are reserved and never carry
//!   secrets, so the id stamp in bytes 0..4 cannot collide with payload;
//! - payload symbols start at triple 3, two symbols per triple (s2 first);
//! - an odd trailing pixel is appended verbatim after the triples and
//!   carries no capacity.

use crate::bits;
use crate::codec::{
    embed_secret, encode_group, extract_secret, recover_group, strip_secret, validate_mode_id,
    EmbedMode, EncodedTriple, MarkedTriple, PlainGroup, PublicId, SecretPair,
};
use crate::error::{Error, Result};
use crate::formats::GrayRaster;
use crate::keystream::{
    decrypt_message_bits, encrypt_message_bits, xor_bytes, EncryptionKey, HidingKey,
    KeystreamMatrix,
};

/// Smallest supported image, in pixels.
pub const MIN_PIXELS: usize = 8;
/// Leading triples that never carry payload.
pub const RESERVED_TRIPLES: usize = 3;
/// Payload framing overhead in bits: 4 beta bits plus the 32-bit length.
pub const OVERHEAD_BITS: usize = 36;

const BETA_BITS: usize = 4;

/// The four original LSBs displaced by the id stamp, kept in body-byte
/// order (bit 0 of the array belongs to body byte 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Beta(u8);

impl Beta {
    /// Build from a nibble whose most significant bit belongs to body
    /// byte 0.
    pub fn from_nibble(nibble: u8) -> Result<Self> {
        if nibble > 0x0F {
            return Err(Error::Parse(format!("beta is 4 bits, got {nibble:#x}")));
        }
        Ok(Self(nibble))
    }

    /// Collect the LSBs of the first four body bytes.
    pub fn from_lsbs(bytes: &[u8]) -> Self {
        debug_assert!(bytes.len() >= BETA_BITS);
        let mut nibble = 0;
        for byte in &bytes[..BETA_BITS] {
            nibble = (nibble << 1) | (byte & 1);
        }
        Self(nibble)
    }

    /// Original LSB of body byte `index` (0..4).
    pub fn bit(self, index: usize) -> u8 {
        assert!(index < BETA_BITS);
        (self.0 >> (BETA_BITS - 1 - index)) & 1
    }

    pub fn bits(self) -> [u8; BETA_BITS] {
        [self.bit(0), self.bit(1), self.bit(2), self.bit(3)]
    }

    pub fn nibble(self) -> u8 {
        self.0
    }
}

/// The framed byte stream produced by the provider and annotated by the
/// hider: encoded triples, the in-band id stamp, and the optional trailing
/// cipher byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedContainer {
    width: u32,
    height: u32,
    mode: EmbedMode,
    trailing_pixel: bool,
    body: Vec<u8>,
}

impl MarkedContainer {
    pub fn new(
        width: u32,
        height: u32,
        mode: EmbedMode,
        trailing_pixel: bool,
        body: Vec<u8>,
    ) -> Result<Self> {
        let pixel_count = width as u64 * height as u64;
        if trailing_pixel != (pixel_count % 2 == 1) {
            return Err(Error::Parse(format!(
                "trailing-pixel flag {} inconsistent with {pixel_count} pixels",
                u8::from(trailing_pixel)
            )));
        }
        let expected = 3 * (pixel_count / 2) + u64::from(trailing_pixel);
        if body.len() as u64 != expected {
            return Err(Error::Parse(format!(
                "malformed payload: body is {} bytes, expected {expected}",
                body.len()
            )));
        }
        Ok(Self {
            width,
            height,
            mode,
            trailing_pixel,
            body,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn mode(&self) -> EmbedMode {
        self.mode
    }

    pub fn has_trailing_pixel(&self) -> bool {
        self.trailing_pixel
    }

    pub fn body(&self) -> &[u8] {
        &self.body
    }

    /// Pixel count of the original image.
    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Number of 3-byte triples in the body.
    pub fn triple_count(&self) -> usize {
        self.pixel_count() / 2
    }

    /// The trailing cipher byte for odd-sized images.
    pub fn trailing_byte(&self) -> Option<u8> {
        self.trailing_pixel.then(|| *self.body.last().unwrap())
    }

    fn triple_at(&self, index: usize) -> MarkedTriple {
        let at = 3 * index;
        MarkedTriple {
            c2: self.body[at],
            c1: self.body[at + 1],
            c0: self.body[at + 2],
        }
    }

    /// The public id stamped into the LSBs of the first four body bytes,
    /// most significant bit first.
    pub fn stamped_id(&self) -> Result<PublicId> {
        if self.body.len() < BETA_BITS {
            return Err(Error::MalformedPayload(
                "container too small to carry side information".into(),
            ));
        }
        let value = Beta::from_lsbs(&self.body).nibble();
        PublicId::new(value)
            .map_err(|_| Error::Corruption(format!("stamped id {value} out of range 2..=15")))
    }

    /// View the body as a raster for statistical analysis: one row per
    /// image row when the body divides evenly, otherwise a single row.
    pub fn body_as_raster(&self) -> GrayRaster {
        let len = self.body.len() as u64;
        let (w, h) = if self.height > 0 && len.is_multiple_of(u64::from(self.height)) {
            ((len / u64::from(self.height)) as u32, self.height)
        } else {
            (len as u32, 1)
        };
        GrayRaster::new(w, h, self.body.clone()).expect("body length matches chosen dimensions")
    }
}

/// Embedding capacity budget for an image and mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capacity {
    /// Raw secret-symbol bits across all data triples.
    pub total_bits: usize,
    /// Bits consumed by framing: beta and the length field.
    pub reserved_overhead_bits: usize,
    /// Message bits a caller may actually embed.
    pub usable_message_bits: usize,
}

/// Capacity of an `width x height` image under `mode`:
/// `(floor(w*h/2) - 3)` data triples, two symbols per triple.
pub fn capacity_of(width: u32, height: u32, mode: EmbedMode) -> Result<Capacity> {
    let pixels = width as usize * height as usize;
    if pixels < MIN_PIXELS {
        return Err(Error::ImageTooSmall {
            pixels,
            min: MIN_PIXELS,
        });
    }
    let data_triples = (pixels / 2).saturating_sub(RESERVED_TRIPLES);
    let total_bits = data_triples * 2 * usize::from(mode.bits_per_symbol());
    Ok(Capacity {
        total_bits,
        reserved_overhead_bits: OVERHEAD_BITS,
        usable_message_bits: total_bits.saturating_sub(OVERHEAD_BITS),
    })
}

/// The bit-level frame carried by the data triples: beta, a 32-bit
/// big-endian message length, then the encrypted message bits. Trailing
/// zero bits of the frame are interchangeable with untouched triples, so a
/// short frame in a small container and a zero-padded frame in a large one
/// extract identically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedPayload {
    pub beta: Beta,
    /// Message bits after hiding-key encryption.
    pub message_bits: Vec<u8>,
}

impl EmbeddedPayload {
    /// Value of the 32-bit length field.
    pub fn length_field(&self) -> u32 {
        self.message_bits.len() as u32
    }

    /// Frame as a bit sequence: `beta || length || message`.
    pub fn to_frame_bits(&self) -> Vec<u8> {
        let mut frame = Vec::with_capacity(OVERHEAD_BITS + self.message_bits.len());
        frame.extend_from_slice(&self.beta.bits());
        frame.extend_from_slice(&bits::u32_to_bits(self.length_field()));
        frame.extend_from_slice(&self.message_bits);
        frame
    }

    /// Parse a frame back out of the extracted slot bits. Slots beyond the
    /// frame hold zeros; slots missing from a short container are treated
    /// as zeros.
    pub fn from_slot_bits(slot_bits: &[u8]) -> Result<Self> {
        let bit = |i: usize| slot_bits.get(i).copied().unwrap_or(0);
        let mut nibble = 0u8;
        for i in 0..BETA_BITS {
            nibble = (nibble << 1) | bit(i);
        }
        let mut length_bits = [0u8; 32];
        for (k, b) in length_bits.iter_mut().enumerate() {
            *b = bit(BETA_BITS + k);
        }
        let length = bits::bits_to_u32(&length_bits) as usize;
        let available = slot_bits.len().saturating_sub(OVERHEAD_BITS);
        if length > available {
            return Err(Error::MalformedPayload(format!(
                "length field claims {length} message bits but only {available} fit"
            )));
        }
        let message_bits = if length == 0 {
            Vec::new()
        } else {
            slot_bits[OVERHEAD_BITS..OVERHEAD_BITS + length].to_vec()
        };
        Ok(Self {
            beta: Beta::from_nibble(nibble).expect("4 collected bits"),
            message_bits,
        })
    }
}

/// Group payload bits into mode-sized symbols, most significant bit first;
/// in 2-bit mode consecutive bit pairs become one decimal symbol.
pub fn pack_symbols(payload_bits: &[u8], mode: EmbedMode) -> Vec<u8> {
    match mode {
        EmbedMode::OneBit => payload_bits.to_vec(),
        EmbedMode::TwoBit => payload_bits
            .chunks(2)
            .map(|pair| (pair[0] << 1) | pair.get(1).copied().unwrap_or(0))
            .collect(),
    }
}

/// Inverse of [`pack_symbols`].
pub fn unpack_symbols(symbols: &[u8], mode: EmbedMode) -> Vec<u8> {
    match mode {
        EmbedMode::OneBit => symbols.to_vec(),
        EmbedMode::TwoBit => symbols
            .iter()
            .flat_map(|&s| [(s >> 1) & 1, s & 1])
            .collect(),
    }
}

/// Encrypt an image and encode it into an (unembedded) container, deriving
/// the keystream matrix from the encryption key.
pub fn provider_encrypt(
    image: &GrayRaster,
    key: &EncryptionKey,
    id: PublicId,
    mode: EmbedMode,
) -> Result<(MarkedContainer, Beta)> {
    let matrix = KeystreamMatrix::generate(key, image.width(), image.height());
    provider_encrypt_with_keystream(image, &matrix, id, mode)
}

/// [`provider_encrypt`] with an explicit keystream matrix.
///
/// Cipher pixels pair up in row-major scan order; within each pair the
/// second cipher byte is the leading coefficient source `p2` and the first
/// is `p1`, which makes the worked two-pixel example come out to
/// `(90, 123, 88)`.
pub fn provider_encrypt_with_keystream(
    image: &GrayRaster,
    matrix: &KeystreamMatrix,
    id: PublicId,
    mode: EmbedMode,
) -> Result<(MarkedContainer, Beta)> {
    if image.pixel_count() < MIN_PIXELS {
        return Err(Error::ImageTooSmall {
            pixels: image.pixel_count(),
            min: MIN_PIXELS,
        });
    }
    if !validate_mode_id(mode, id) {
        return Err(Error::IdModeMismatch {
            id: id.value(),
            bits: mode.bits_per_symbol(),
        });
    }
    if matrix.width() != image.width() || matrix.height() != image.height() {
        return Err(Error::DimensionMismatch(
            image.width(),
            image.height(),
            matrix.width(),
            matrix.height(),
        ));
    }

    let encrypted = xor_bytes(image.pixels(), matrix.bytes())?;
    let mut body = Vec::with_capacity(3 * (encrypted.len() / 2) + encrypted.len() % 2);
    let pairs = encrypted.chunks_exact(2);
    let remainder = pairs.remainder();
    for pair in pairs {
        let triple = encode_group(
            PlainGroup {
                p2: pair[1],
                p1: pair[0],
            },
            id,
        );
        body.extend_from_slice(&[triple.a2, triple.a1, triple.a0]);
    }

    let beta = Beta::from_lsbs(&body);
    for (i, byte) in body[..BETA_BITS].iter_mut().enumerate() {
        *byte = (*byte & 0xFE) | ((id.value() >> (BETA_BITS - 1 - i)) & 1);
    }
    if let [last] = remainder {
        body.push(*last);
    }

    let container = MarkedContainer::new(
        image.width(),
        image.height(),
        mode,
        !remainder.is_empty(),
        body,
    )?;
    Ok((container, beta))
}

/// Embed `beta` and a message into the container's data triples, without
/// touching the reserved prefix or the encryption key.
pub fn hider_embed(
    container: &MarkedContainer,
    beta: Beta,
    message_bits: &[u8],
    key: &HidingKey,
) -> Result<MarkedContainer> {
    let mode = container.mode();
    let id = container.stamped_id()?;
    let capacity = capacity_of(container.width(), container.height(), mode)?;
    if message_bits.len() > capacity.usable_message_bits {
        return Err(Error::CapacityExceeded {
            needed: OVERHEAD_BITS + message_bits.len(),
            available: capacity.total_bits,
        });
    }
    // Even an empty frame must fit its four beta bits.
    if message_bits.is_empty() && capacity.total_bits < BETA_BITS {
        return Err(Error::CapacityExceeded {
            needed: BETA_BITS,
            available: capacity.total_bits,
        });
    }

    let payload = EmbeddedPayload {
        beta,
        message_bits: encrypt_message_bits(message_bits, key),
    };
    let mut symbols = pack_symbols(&payload.to_frame_bits(), mode);
    let slot_symbols = 2 * (container.triple_count() - RESERVED_TRIPLES);
    if symbols.len() > slot_symbols {
        // Only the all-zero tail of an empty-message frame may overflow.
        debug_assert!(symbols[slot_symbols..].iter().all(|&s| s == 0));
        symbols.truncate(slot_symbols);
    }

    let mut body = container.body().to_vec();
    for (k, chunk) in symbols.chunks(2).enumerate() {
        let secret = SecretPair::new(chunk[0], chunk.get(1).copied().unwrap_or(0), mode, id)?;
        let at = 3 * (RESERVED_TRIPLES + k);
        let triple = EncodedTriple {
            a2: body[at],
            a1: body[at + 1],
            a0: body[at + 2],
        };
        let marked = embed_secret(triple, secret);
        body[at] = marked.c2;
        body[at + 1] = marked.c1;
        body[at + 2] = marked.c0;
    }

    MarkedContainer::new(
        container.width(),
        container.height(),
        mode,
        container.has_trailing_pixel(),
        body,
    )
}

/// What a receiver produced from a container given the keys it holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceiverOutput {
    /// The exact original raster; present only with the encryption key.
    pub image: Option<GrayRaster>,
    /// The decrypted message bits; present only with the hiding key.
    pub message_bits: Option<Vec<u8>>,
}

/// Extract and/or recover, depending on which keys are supplied.
///
/// With only the hiding key the message is decrypted and no pixel data is
/// touched; with only the encryption key the raster is restored and the
/// message stays encrypted; with both, both come back. Payload extraction
/// itself is keyless.
pub fn receiver_process(
    container: &MarkedContainer,
    encryption_key: Option<&EncryptionKey>,
    hiding_key: Option<&HidingKey>,
) -> Result<ReceiverOutput> {
    let matrix = encryption_key
        .map(|key| KeystreamMatrix::generate(key, container.width(), container.height()));
    receiver_process_with_keystream(container, matrix.as_ref(), hiding_key)
}

/// [`receiver_process`] with an explicit keystream matrix in place of the
/// encryption key.
pub fn receiver_process_with_keystream(
    container: &MarkedContainer,
    matrix: Option<&KeystreamMatrix>,
    hiding_key: Option<&HidingKey>,
) -> Result<ReceiverOutput> {
    let mode = container.mode();
    let id = container.stamped_id()?;
    if !validate_mode_id(mode, id) {
        return Err(Error::Corruption(format!(
            "stamped id {} is invalid for {}-bit mode",
            id.value(),
            mode.bits_per_symbol()
        )));
    }

    let triple_count = container.triple_count();
    let mut secrets = Vec::with_capacity(triple_count.saturating_sub(RESERVED_TRIPLES));
    let mut symbols = Vec::with_capacity(2 * secrets.capacity());
    for index in RESERVED_TRIPLES..triple_count {
        let secret = extract_secret(container.triple_at(index), id, mode)?;
        symbols.push(secret.s2());
        symbols.push(secret.s1());
        secrets.push(secret);
    }
    let payload = EmbeddedPayload::from_slot_bits(&unpack_symbols(&symbols, mode))?;

    let message_bits = hiding_key.map(|key| decrypt_message_bits(&payload.message_bits, key));

    let image = match matrix {
        None => None,
        Some(matrix) => {
            if matrix.width() != container.width() || matrix.height() != container.height() {
                return Err(Error::DimensionMismatch(
                    container.width(),
                    container.height(),
                    matrix.width(),
                    matrix.height(),
                ));
            }
            let mut body = container.body()[..3 * triple_count].to_vec();
            for (i, byte) in body[..BETA_BITS].iter_mut().enumerate() {
                *byte = (*byte & 0xFE) | payload.beta.bit(i);
            }
            let mut encrypted = Vec::with_capacity(container.pixel_count());
            for index in 0..triple_count {
                let at = 3 * index;
                let marked = MarkedTriple {
                    c2: body[at],
                    c1: body[at + 1],
                    c0: body[at + 2],
                };
                let encoded = if index < RESERVED_TRIPLES {
                    // Reserved triples never carried secrets.
                    EncodedTriple {
                        a2: marked.c2,
                        a1: marked.c1,
                        a0: marked.c0,
                    }
                } else {
                    strip_secret(marked, secrets[index - RESERVED_TRIPLES])
                };
                let group = recover_group(encoded, id)?;
                encrypted.push(group.p1);
                encrypted.push(group.p2);
            }
            if let Some(byte) = container.trailing_byte() {
                encrypted.push(byte);
            }
            let pixels = xor_bytes(&encrypted, matrix.bytes())?;
            Some(GrayRaster::new(
                container.width(),
                container.height(),
                pixels,
            )?)
        }
    };

    Ok(ReceiverOutput {
        image,
        message_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(v: u8) -> PublicId {
        PublicId::new(v).unwrap()
    }

    fn raster(width: u32, height: u32, seed: u8) -> GrayRaster {
        let n = width as usize * height as usize;
        let pixels = (0..n)
            .map(|i| (i as u8).wrapping_mul(31).wrapping_add(seed))
            .collect();
        GrayRaster::new(width, height, pixels).unwrap()
    }

    fn zero_matrix(width: u32, height: u32) -> KeystreamMatrix {
        KeystreamMatrix::from_bytes(width, height, vec![0; width as usize * height as usize])
            .unwrap()
    }

    #[test]
    fn beta_bit_order() {
        let beta = Beta::from_lsbs(&[1, 0, 1, 1]);
        assert_eq!(beta.nibble(), 0b1011);
        assert_eq!(beta.bits(), [1, 0, 1, 1]);
        assert!(Beta::from_nibble(16).is_err());
    }

    #[test]
    fn capacity_matches_frozen_figures() {
        let c = capacity_of(512, 512, EmbedMode::TwoBit).unwrap();
        assert_eq!(c.total_bits, 524_276);
        assert_eq!(c.reserved_overhead_bits, 36);
        assert_eq!(c.usable_message_bits, 524_240);

        let c = capacity_of(512, 512, EmbedMode::OneBit).unwrap();
        assert_eq!(c.usable_message_bits, 262_102);

        // Degenerate minimum: one data triple, clamped to zero usable bits.
        let c = capacity_of(4, 2, EmbedMode::TwoBit).unwrap();
        assert_eq!(c.total_bits, 4);
        assert_eq!(c.usable_message_bits, 0);

        assert!(matches!(
            capacity_of(7, 1, EmbedMode::TwoBit),
            Err(Error::ImageTooSmall { pixels: 7, min: 8 })
        ));
    }

    #[test]
    fn symbol_packing_follows_msb_first_pairs() {
        // Bits "11 01" become decimal symbols (3, 1).
        assert_eq!(pack_symbols(&[1, 1, 0, 1], EmbedMode::TwoBit), [3, 1]);
        assert_eq!(unpack_symbols(&[3, 1], EmbedMode::TwoBit), [1, 1, 0, 1]);
        // 1-bit mode is the identity.
        assert_eq!(pack_symbols(&[1, 0, 1], EmbedMode::OneBit), [1, 0, 1]);
        // Odd bit counts pad the final symbol with zero.
        assert_eq!(pack_symbols(&[1, 1, 1], EmbedMode::TwoBit), [3, 2]);
    }

    #[test]
    fn provider_zero_image_zero_keystream() {
        let image = GrayRaster::new(4, 2, vec![0; 8]).unwrap();
        let (container, beta) =
            provider_encrypt_with_keystream(&image, &zero_matrix(4, 2), id(8), EmbedMode::TwoBit)
                .unwrap();
        assert_eq!(beta.nibble(), 0);
        // Zero triples everywhere, then the id stamped into the first LSBs.
        assert_eq!(container.body(), [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(container.stamped_id().unwrap(), id(8));
    }

    #[test]
    fn provider_pairing_matches_worked_example() {
        // First two pixels (132, 35) under keystream (95, 121) encrypt to
        // (219, 90) and must encode as the triple (90, 123, 88).
        let mut pixels = vec![0u8; 8];
        pixels[0] = 132;
        pixels[1] = 35;
        let image = GrayRaster::new(8, 1, pixels).unwrap();
        let mut stream = vec![0u8; 8];
        stream[0] = 95;
        stream[1] = 121;
        let matrix = KeystreamMatrix::from_bytes(8, 1, stream).unwrap();
        let (container, _) =
            provider_encrypt_with_keystream(&image, &matrix, id(8), EmbedMode::TwoBit).unwrap();
        // LSB stamp for id 8 = 1000 over bytes 0..4.
        let mut expected_first = [90u8, 123, 88];
        expected_first[0] = (expected_first[0] & 0xFE) | 1;
        expected_first[1] &= 0xFE;
        expected_first[2] &= 0xFE;
        assert_eq!(&container.body()[..3], &expected_first);
    }

    #[test]
    fn provider_rejects_undersized_or_mismatched_input() {
        let image = GrayRaster::new(3, 2, vec![0; 6]).unwrap();
        assert!(matches!(
            provider_encrypt_with_keystream(&image, &zero_matrix(3, 2), id(9), EmbedMode::TwoBit),
            Err(Error::ImageTooSmall { pixels: 6, min: 8 })
        ));
        let image = raster(4, 2, 1);
        assert!(matches!(
            provider_encrypt_with_keystream(&image, &zero_matrix(4, 2), id(12), EmbedMode::TwoBit),
            Err(Error::IdModeMismatch { id: 12, bits: 2 })
        ));
        assert!(matches!(
            provider_encrypt_with_keystream(&image, &zero_matrix(2, 4), id(9), EmbedMode::TwoBit),
            Err(Error::DimensionMismatch(4, 2, 2, 4))
        ));
    }

    #[test]
    fn expansion_is_exactly_three_halves() {
        for (w, h) in [(4u32, 2u32), (3, 3), (16, 16), (33, 7), (512, 1)] {
            let image = raster(w, h, 3);
            let key = EncryptionKey::from_text("expansion");
            let (container, _) = provider_encrypt(&image, &key, id(9), EmbedMode::TwoBit).unwrap();
            let n = (w * h) as usize;
            assert_eq!(container.body().len(), 3 * (n / 2) + n % 2);
            assert_eq!(container.has_trailing_pixel(), n % 2 == 1);
        }
    }

    #[test]
    fn hider_leaves_reserved_prefix_untouched() {
        let image = raster(16, 16, 7);
        let key = EncryptionKey::from_text("prefix");
        let hiding = HidingKey::from_text("hider");
        let (container, beta) = provider_encrypt(&image, &key, id(9), EmbedMode::TwoBit).unwrap();
        let message = vec![1u8; 64];
        let marked = hider_embed(&container, beta, &message, &hiding).unwrap();
        assert_eq!(&marked.body()[..9], &container.body()[..9]);
        // Middle coefficients are never modified anywhere.
        for t in 0..container.triple_count() {
            assert_eq!(marked.body()[3 * t + 1], container.body()[3 * t + 1]);
        }
    }

    #[test]
    fn hider_empty_message_embeds_only_frame() {
        let image = raster(16, 16, 9);
        let key = EncryptionKey::from_text("frame");
        let hiding = HidingKey::from_text("hider");
        let (container, beta) = provider_encrypt(&image, &key, id(7), EmbedMode::TwoBit).unwrap();
        let marked = hider_embed(&container, beta, &[], &hiding).unwrap();
        // 36 frame bits = 18 symbols = 9 data triples; everything after
        // triple 11 is bit-identical.
        assert_eq!(&marked.body()[3 * 12..], &container.body()[3 * 12..]);
        let out = receiver_process(&marked, None, Some(&hiding)).unwrap();
        assert_eq!(out.message_bits.unwrap(), Vec::<u8>::new());
    }

    #[test]
    fn hider_rejects_overfull_payload() {
        let image = raster(8, 1, 11);
        let key = EncryptionKey::from_text("full");
        let hiding = HidingKey::from_text("hider");
        let (container, beta) = provider_encrypt(&image, &key, id(9), EmbedMode::TwoBit).unwrap();
        // 4 slot bits, 0 usable.
        assert!(matches!(
            hider_embed(&container, beta, &[1], &hiding),
            Err(Error::CapacityExceeded { .. })
        ));
        // The empty frame still fits: beta occupies exactly the 4 slots.
        assert!(hider_embed(&container, beta, &[], &hiding).is_ok());
    }

    #[test]
    fn one_bit_mode_minimum_image_carries_beta() {
        // 8 pixels give only 2 slot bits in 1-bit mode: beta cannot fit.
        let image = raster(8, 1, 13);
        let key = EncryptionKey::from_text("tiny");
        let hiding = HidingKey::from_text("hider");
        let (container, beta) = provider_encrypt(&image, &key, id(3), EmbedMode::OneBit).unwrap();
        assert!(matches!(
            hider_embed(&container, beta, &[], &hiding),
            Err(Error::CapacityExceeded {
                needed: 4,
                available: 2
            })
        ));
        // 10 pixels give 4 slot bits: the empty frame fits.
        let image = raster(10, 1, 13);
        let (container, beta) = provider_encrypt(&image, &key, id(3), EmbedMode::OneBit).unwrap();
        assert!(hider_embed(&container, beta, &[], &hiding).is_ok());
    }

    #[test]
    fn round_trip_both_keys() {
        let image = raster(32, 9, 17); // odd pixel count
        let key = EncryptionKey::from_text("ke");
        let hiding = HidingKey::from_text("kw");
        let (container, beta) = provider_encrypt(&image, &key, id(5), EmbedMode::TwoBit).unwrap();
        let message: Vec<u8> = (0..200).map(|i| (i % 2) as u8).collect();
        let marked = hider_embed(&container, beta, &message, &hiding).unwrap();
        let out = receiver_process(&marked, Some(&key), Some(&hiding)).unwrap();
        assert_eq!(out.image.unwrap(), image);
        assert_eq!(out.message_bits.unwrap(), message);
    }

    #[test]
    fn unembedded_zero_container_recovers_by_plain_decryption() {
        // With an all-zero image and all-zero keystream the stamp displaces
        // zero LSBs, so even a never-embedded container restores exactly.
        let image = GrayRaster::new(4, 2, vec![0; 8]).unwrap();
        let matrix = zero_matrix(4, 2);
        let (container, _) =
            provider_encrypt_with_keystream(&image, &matrix, id(8), EmbedMode::TwoBit).unwrap();
        let out = receiver_process_with_keystream(&container, Some(&matrix), None).unwrap();
        assert_eq!(out.image.unwrap(), image);
        assert!(out.message_bits.is_none());
    }

    #[test]
    fn separability_of_the_two_keys() {
        let image = raster(24, 24, 23);
        let key = EncryptionKey::from_text("separate-ke");
        let hiding = HidingKey::from_text("separate-kw");
        let (container, beta) = provider_encrypt(&image, &key, id(6), EmbedMode::TwoBit).unwrap();
        let message = vec![1, 0, 1, 1, 0, 1, 0, 0, 1];
        let marked = hider_embed(&container, beta, &message, &hiding).unwrap();

        let with_kw = receiver_process(&marked, None, Some(&hiding)).unwrap();
        assert!(with_kw.image.is_none());
        assert_eq!(with_kw.message_bits.unwrap(), message);

        let with_ke = receiver_process(&marked, Some(&key), None).unwrap();
        assert!(with_ke.message_bits.is_none());
        assert_eq!(with_ke.image.unwrap(), image);

        let with_neither = receiver_process(&marked, None, None).unwrap();
        assert!(with_neither.image.is_none() && with_neither.message_bits.is_none());
    }

    #[test]
    fn receiver_rejects_tampered_data_triple() {
        let image = raster(16, 16, 29);
        let key = EncryptionKey::from_text("tamper");
        let hiding = HidingKey::from_text("tamper-kw");
        let (container, beta) = provider_encrypt(&image, &key, id(9), EmbedMode::TwoBit).unwrap();
        let marked = hider_embed(&container, beta, &[1, 0, 1], &hiding).unwrap();
        let mut body = marked.body().to_vec();
        // Shifting c0 of a data triple by 4 pushes s1 out of the 2-bit
        // alphabet for id 9.
        body[3 * RESERVED_TRIPLES + 2] = body[3 * RESERVED_TRIPLES + 2].wrapping_add(4);
        let tampered = MarkedContainer::new(16, 16, EmbedMode::TwoBit, false, body).unwrap();
        assert!(matches!(
            receiver_process(&tampered, Some(&key), Some(&hiding)),
            Err(Error::Corruption(_))
        ));
    }

    #[test]
    fn receiver_rejects_oversized_length_field() {
        let image = raster(16, 16, 31);
        let key = EncryptionKey::from_text("lenfield");
        let hiding = HidingKey::from_text("lenfield-kw");
        let (container, beta) = provider_encrypt(&image, &key, id(9), EmbedMode::TwoBit).unwrap();
        // Hand-embed a forged frame whose length field claims far more
        // message bits than the container can hold.
        let mut forged_bits = vec![0u8; OVERHEAD_BITS];
        forged_bits[..4].copy_from_slice(&beta.bits());
        forged_bits[4..36].copy_from_slice(&bits::u32_to_bits(1 << 20));
        let symbols = pack_symbols(&forged_bits, EmbedMode::TwoBit);
        let mut body = container.body().to_vec();
        let idv = container.stamped_id().unwrap();
        for (k, chunk) in symbols.chunks(2).enumerate() {
            let at = 3 * (RESERVED_TRIPLES + k);
            let triple = EncodedTriple {
                a2: body[at],
                a1: body[at + 1],
                a0: body[at + 2],
            };
            let secret = SecretPair::new(chunk[0], chunk[1], EmbedMode::TwoBit, idv).unwrap();
            let m = embed_secret(triple, secret);
            body[at] = m.c2;
            body[at + 1] = m.c1;
            body[at + 2] = m.c0;
        }
        let forged = MarkedContainer::new(16, 16, EmbedMode::TwoBit, false, body).unwrap();
        assert!(matches!(
            receiver_process(&forged, None, Some(&hiding)),
            Err(Error::MalformedPayload(_))
        ));
    }

    #[test]
    fn body_raster_analysis_view() {
        let image = raster(16, 4, 37);
        let key = EncryptionKey::from_text("view");
        let (container, _) = provider_encrypt(&image, &key, id(9), EmbedMode::TwoBit).unwrap();
        let view = container.body_as_raster();
        assert_eq!((view.width(), view.height()), (24, 4));
        assert_eq!(view.pixels(), container.body());
    }
}
