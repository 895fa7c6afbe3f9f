//! Shared fixtures for the integration suites.
//!
//! Each test binary compiles its own copy and uses a subset of these.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;

use rdhe_core::GrayRaster;

/// Deterministic stand-in for a natural photograph: smooth low-frequency
/// content, a mild gradient and a little texture noise. Neighboring pixels
/// stay strongly correlated and the histogram is far from uniform.
pub fn natural_image(width: u32, height: u32, seed: u64) -> GrayRaster {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let mut noise = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 60) as i32 - 8 // -8..=7
    };
    let phase = (seed % 7) as f64;
    let mut pixels = Vec::with_capacity(width as usize * height as usize);
    for y in 0..height {
        for x in 0..width {
            let fx = f64::from(x);
            let fy = f64::from(y);
            let value = 128.0
                + 70.0 * (fx / 41.0 + phase).sin() * (fy / 53.0).cos()
                + 25.0 * ((fx + fy) / 17.0 + phase).sin()
                + 30.0 * fy / f64::from(height.max(1))
                + f64::from(noise());
            pixels.push(value.clamp(0.0, 255.0) as u8);
        }
    }
    GrayRaster::new(width, height, pixels).unwrap()
}

/// Uniformly random raster.
pub fn random_raster(rng: &mut StdRng, width: u32, height: u32) -> GrayRaster {
    let pixels = (0..width as usize * height as usize)
        .map(|_| rng.random())
        .collect();
    GrayRaster::new(width, height, pixels).unwrap()
}

/// Random bit sequence of the given length.
pub fn random_bits(rng: &mut StdRng, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.random_range(0..=1)).collect()
}

/// Random key material of 1..=48 bytes.
pub fn random_key_material(rng: &mut StdRng) -> Vec<u8> {
    let len = rng.random_range(1..=48);
    (0..len).map(|_| rng.random()).collect()
}
