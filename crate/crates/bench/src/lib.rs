//! Deterministic fixtures shared by the benchmarks.

use rdhe_core::codec::{EmbedMode, PublicId};
use rdhe_core::keystream::{EncryptionKey, HidingKey};
use rdhe_core::GrayRaster;

/// Standard benchmark configuration: 2-bit mode with id 9.
pub fn bench_mode_and_id() -> (EmbedMode, PublicId) {
    (EmbedMode::TwoBit, PublicId::new(9).unwrap())
}

pub fn bench_keys() -> (EncryptionKey, HidingKey) {
    (
        EncryptionKey::from_text("bench encryption key"),
        HidingKey::from_text("bench hiding key"),
    )
}

/// Deterministic pseudo-random raster (xorshift-mixed).
pub fn bench_image(width: u32, height: u32) -> GrayRaster {
    let mut state = 0x0123_4567_89AB_CDEFu64 | 1;
    let pixels = (0..width as usize * height as usize)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 24) as u8
        })
        .collect();
    GrayRaster::new(width, height, pixels).unwrap()
}

/// Alternating bit sequence of the given length.
pub fn bench_message(len: usize) -> Vec<u8> {
    (0..len).map(|i| (i % 2) as u8).collect()
}
