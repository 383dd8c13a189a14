//! Deterministic randomness.
//!
//! Every stochastic path in the crate draws from a ChaCha8 stream seeded
//! from an explicit 64-bit seed. Gaussian variates use the Marsaglia polar
//! method so results only depend on the uniform stream and `libm`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type DetRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seeded generator on an explicit ChaCha stream; distinct streams of the
/// same seed never overlap.
pub fn seeded_stream(seed: u64, stream: u64) -> DetRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer. A bijection on `u64`.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed for cell `(outer, inner)` of a two-level experiment grid.
///
/// For a fixed master seed this is injective in `(outer, inner)`: packing is
/// injective, xor with a constant is a bijection and so is [`mix64`].
pub fn derive_seed(master: u64, outer: u32, inner: u32) -> u64 {
    let packed = ((outer as u64) << 32) | inner as u64;
    mix64(master ^ packed)
}

/// Standard normal sampler (Marsaglia polar method). Keeps the second
/// variate of each accepted pair for the next call.
#[derive(Debug, Clone, Default)]
pub struct PolarNormal {
    spare: Option<f64>,
}

impl PolarNormal {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * rng.random::<f64>() - 1.0;
            let v = 2.0 * rng.random::<f64>() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = libm::sqrt(-2.0 * libm::log(s) / s);
                self.spare = Some(v * factor);
                return u * factor;
            }
        }
    }
}
