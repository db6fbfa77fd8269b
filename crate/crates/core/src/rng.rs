//! Counter-based randomness: every `(seed, round, consumer)` triple owns an
//! independent ChaCha stream, so what one consumer draws never shifts the
//! draws of another.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Consumer slot of the row learner.
pub const ROW_STREAM: u64 = 0;
/// Consumer slot of the column learner.
pub const COL_STREAM: u64 = 1;
/// Consumer slot of the reward noise.
pub const NOISE_STREAM: u64 = 2;

const CONSUMERS: u64 = 16;

#[derive(Debug, Clone, Copy)]
pub struct Streams {
    key: [u8; 32],
}

impl Streams {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        let mut state = seed;
        for chunk in key.chunks_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        Self { key }
    }

    pub fn stream(&self, round: u64, consumer: u64) -> StreamRng {
        assert!(consumer < CONSUMERS, "consumer slot {consumer} out of range");
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(round.wrapping_mul(CONSUMERS).wrapping_add(consumer));
        rng
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw in `[0, 1)` built from the top 53 bits of one `u64`.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal draw via the cosine branch of Box-Muller.
pub fn standard_normal(rng: &mut impl RngCore) -> f64 {
    let u1 = 1.0 - uniform(rng); // (0, 1]
    let u2 = uniform(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn normal(rng: &mut impl RngCore, mean: f64, sd: f64) -> f64 {
    mean + sd * standard_normal(rng)
}
