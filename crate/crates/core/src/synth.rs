//! Seeded synthetic test images.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::resample::GrayImage;

/// Fine checkerboard (4-pixel cells) with uniform noise: content near Nyquist.
pub fn checker_noise(width: usize, height: usize, seed: u64) -> Result<GrayImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise: Vec<f64> = (0..width * height).map(|_| rng.gen_range(-24.0..24.0)).collect();
    GrayImage::from_fn(width, height, |x, y| {
        let base = if (x / 4 + y / 4) % 2 == 0 { 64.0 } else { 192.0 };
        base + noise[y * width + x]
    })
}

/// Sum of a few random low-frequency plane waves.
pub fn smooth(width: usize, height: usize, seed: u64) -> Result<GrayImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<(f64, f64, f64, f64)> = (0..6)
        .map(|_| {
            (
                rng.gen_range(-0.08..0.08),
                rng.gen_range(-0.08..0.08),
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(8.0..20.0),
            )
        })
        .collect();
    GrayImage::from_fn(width, height, |x, y| {
        let (x, y) = (x as f64, y as f64);
        128.0
            + waves
                .iter()
                .map(|&(fx, fy, ph, a)| a * (std::f64::consts::TAU * (fx * x + fy * y) + ph).cos())
                .sum::<f64>()
    })
}
