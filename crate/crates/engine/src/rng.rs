//! Counter-based random draws keyed by simulation events.
//!
//! Every random decision in a run is a pure function of (scenario seed,
//! stream, event coordinates). Draws are stateless, so simulation phases can
//! enumerate events in any order, skip work for agents that cannot matter, or
//! recompute a draw without advancing hidden state, and the trajectory stays
//! byte-identical. The mixer is the splitmix64 finalizer applied after each
//! absorbed word; its avalanche quality is what decorrelates neighboring
//! event coordinates.

/// Independent random streams; each simulation phase owns one so that draws
/// with identical coordinates never collide across phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Placement = 1,
    Outbreak = 2,
    RiskAversion = 3,
    Movement = 4,
    Transmission = 5,
    /// Breaks ties when several transmitters succeed on the same day.
    TransmissionPick = 6,
    Recovery = 7,
    LockdownSelect = 8,
}

#[inline]
fn mix(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^= x >> 31;
    x
}

/// Keyed generator for one scenario run.
#[derive(Debug, Clone, Copy)]
pub struct KeyedRng {
    base: u64,
}

impl KeyedRng {
    pub fn new(seed: u64) -> Self {
        Self { base: mix(seed ^ 0x9e37_79b9_7f4a_7c15) }
    }

    /// Raw 64 random bits for the event (stream, a, b, c).
    #[inline]
    pub fn bits(&self, stream: Stream, a: u64, b: u64, c: u64) -> u64 {
        let mut h = self.base;
        h = mix(h ^ (stream as u64).wrapping_mul(0xa076_1d64_78bd_642f));
        h = mix(h ^ a.wrapping_mul(0xe703_7ed1_a0b4_28db));
        h = mix(h ^ b.wrapping_mul(0x8ebc_6af0_9c88_c6e3));
        h = mix(h ^ c.wrapping_mul(0x5899_65cc_7537_4cc3));
        h
    }

    /// Uniform draw in [0, 1) with 53-bit resolution.
    #[inline]
    pub fn unit(&self, stream: Stream, a: u64, b: u64, c: u64) -> f64 {
        (self.bits(stream, a, b, c) >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform draw in (0, 1], safe as a logarithm argument.
    #[inline]
    pub fn unit_open_low(&self, stream: Stream, a: u64, b: u64, c: u64) -> f64 {
        ((self.bits(stream, a, b, c) >> 11) + 1) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard normal deviate for the event, via Box-Muller.
    #[inline]
    pub fn standard_normal(&self, stream: Stream, a: u64, b: u64, c: u64) -> f64 {
        let u1 = self.unit_open_low(stream, a, b, c.wrapping_mul(2));
        let u2 = self.unit(stream, a, b, c.wrapping_mul(2).wrapping_add(1));
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}
