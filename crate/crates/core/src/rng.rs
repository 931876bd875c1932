//! Counter-based pseudo-random streams.
//!
//! Every random quantity in the library is drawn from an [`RngStream`],
//! a SplitMix64 generator keyed by `(base_seed, stream_id)`. The output
//! sequence depends only on that pair and on the draw counter, so any
//! stream can be replayed on any platform and streams for independent
//! trials can be created without coordination.

use crate::error::{Error, Result};

/// Weyl increment of SplitMix64 (golden-ratio constant).
const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
/// Finalizer multipliers of SplitMix64 (Stafford mix 13).
const MIX_A: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX_B: u64 = 0x94D0_49BB_1331_11EB;
/// FNV-1a 64-bit offset basis and prime, used for purpose-tag hashing.
const FNV_OFFSET: u64 = 0xCBF2_9CE4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01B3;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX_A);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_B);
    z ^ (z >> 31)
}

/// A value-type random stream. Copy it freely into worker tasks; identical
/// `(base_seed, stream_id)` pairs yield identical draw sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    base_seed: u64,
    stream_id: u64,
    state: u64,
}

impl RngStream {
    pub fn new(base_seed: u64, stream_id: u64) -> Self {
        // Key the counter with both identifiers through one mixing round
        // each so that nearby seeds map to distant states.
        let state = mix(base_seed.wrapping_add(GAMMA)) ^ mix(stream_id.wrapping_mul(GAMMA) ^ FNV_OFFSET);
        RngStream { base_seed, stream_id, state }
    }

    /// Derive the stream id for a named purpose and trial index.
    pub fn derive_stream_id(purpose: &str, index: u64) -> u64 {
        let mut h = FNV_OFFSET;
        for b in purpose.as_bytes() {
            h ^= u64::from(*b);
            h = h.wrapping_mul(FNV_PRIME);
        }
        mix(h ^ index.wrapping_mul(GAMMA))
    }

    /// Convenience: stream for `(base_seed, purpose, index)`.
    pub fn for_purpose(base_seed: u64, purpose: &str, index: u64) -> Self {
        RngStream::new(base_seed, Self::derive_stream_id(purpose, index))
    }

    pub fn base_seed(&self) -> u64 {
        self.base_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Uniform draw on the half-open-at-zero interval (0, 1].
    ///
    /// The 53 high bits are used; the +1 shift excludes 0 so that
    /// `-ln(u)` is always finite.
    pub fn next_unit_open_closed(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw on [0, 1).
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..bound`. Rejection-free modulo is fine here:
    /// bounds in this crate are far below 2^32 so the bias is untestable.
    pub fn next_below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }
}

/// Inverse-CDF exponential sample: `-ln(U)/rate` with `U` uniform on (0,1].
pub fn sample_exponential(rate: f64, rng: &mut RngStream) -> Result<f64> {
    if !rate.is_finite() || rate <= 0.0 {
        return Err(Error::InvalidArgument(format!("exponential rate must be positive, got {rate}")));
    }
    Ok(-rng.next_unit_open_closed().ln() / rate)
}
