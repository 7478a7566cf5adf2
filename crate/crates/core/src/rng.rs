//! Seeded random streams.
//!
//! Every stream is a ChaCha8 keystream: the 256-bit key is expanded from the
//! master seed and the 64-bit ChaCha stream word selects the substream. Two
//! streams with the same `(master_seed, stream_id)` produce the same variates
//! no matter which thread draws them.

use rand_chacha::ChaCha8Rng;
use rand_core::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

/// Algorithm name recorded in output metadata and cache keys.
pub const RNG_ALGORITHM: &str = "chacha8/seed_from_u64+stream";

/// Identifies one reproducible random substream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self {
            master_seed,
            stream_id,
        }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn generator(&self) -> UniformSource {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        UniformSource { rng }
    }

    /// Derives a child stream from a domain tag and a list of coordinates.
    pub fn derive(master_seed: u64, parts: &[u64]) -> Self {
        Self::new(master_seed, stream_key(parts))
    }
}

/// Uniform variate source over a single stream.
pub struct UniformSource {
    rng: ChaCha8Rng,
}

impl UniformSource {
    /// Uniform on [0, 1) with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive 64-bit mix of a coordinate tuple.
pub fn stream_key(parts: &[u64]) -> u64 {
    parts.iter().fold(0x243F_6A88_85A3_08D3u64, |acc, &p| {
        splitmix64(acc ^ splitmix64(p))
    })
}

/// FNV-1a over a string, used to turn labels into stream coordinates.
pub fn label_key(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}
