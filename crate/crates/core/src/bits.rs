//! Bit-sequence helpers.
//!
//! Bit sequences are `&[u8]` slices whose elements are 0 or 1. All
//! conversions are most-significant-bit first, matching the bit order used
//! for pixel decomposition, the in-band id stamp and the payload length
//! field.

/// Unpack bytes into bits, MSB first.
pub fn bytes_to_bits(bytes: &[u8]) -> Vec<u8> {
    let mut bits = Vec::with_capacity(bytes.len() * 8);
    for &byte in bytes {
        for k in (0..8).rev() {
            bits.push((byte >> k) & 1);
        }
    }
    bits
}

/// Pack bits into bytes, MSB first. A trailing partial byte is zero-padded
/// on the right.
pub fn bits_to_bytes(bits: &[u8]) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(bits.len().div_ceil(8));
    for chunk in bits.chunks(8) {
        let mut byte = 0u8;
        for (k, &bit) in chunk.iter().enumerate() {
            debug_assert!(bit <= 1, "bit sequences hold only 0 or 1");
            byte |= (bit & 1) << (7 - k);
        }
        bytes.push(byte);
    }
    bytes
}

/// Big-endian 32-bit value as 32 bits, MSB first.
pub fn u32_to_bits(value: u32) -> [u8; 32] {
    let mut bits = [0u8; 32];
    for (k, bit) in bits.iter_mut().enumerate() {
        *bit = ((value >> (31 - k)) & 1) as u8;
    }
    bits
}

/// Inverse of [`u32_to_bits`]. `bits` must hold exactly 32 bits.
pub fn bits_to_u32(bits: &[u8]) -> u32 {
    assert_eq!(bits.len(), 32, "length field is exactly 32 bits");
    bits.iter()
        .fold(0u32, |acc, &bit| (acc << 1) | u32::from(bit & 1))
}
