//! Deterministic, platform-independent pseudo-random number generator.
//!
//! A single fixed algorithm is used everywhere so that identical seeds yield
//! identical artifacts on every platform: Marsaglia/Vigna xorshift64* with the
//! published multiplier `0x2545F4914F6CDD1D`, seeded through one round of the
//! SplitMix64 finalizer. The generator state is a single nonzero 64-bit word.

/// Seedable 64-bit xorshift* generator.
///
/// Equal seeds produce byte-identical output sequences; this is relied on by
/// every sampling pipeline in the crate.
#[derive(Debug, Clone)]
pub struct Prng {
    state: u64,
}

const XORSHIFT_MULT: u64 = 0x2545_F491_4F6C_DD1D;

/// SplitMix64 finalizer (Steele, Lea & Flood constants).
fn splitmix_mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Prng {
    /// Creates a generator from a 64-bit seed. Any seed is valid.
    pub fn new(seed: u64) -> Self {
        let mut state = splitmix_mix(seed);
        if state == 0 {
            state = 0x9E37_79B9_7F4A_7C15;
        }
        Prng { state }
    }

    /// Seed for worker `index` derived from a base seed, used when sampling
    /// work is split across parallel workers. The rule is fixed: mix the
    /// worker index, XOR with the base seed, mix again.
    pub fn derive_seed(seed: u64, index: u64) -> u64 {
        splitmix_mix(seed ^ splitmix_mix(index))
    }

    /// Next raw 64-bit value.
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(XORSHIFT_MULT)
    }

    /// Uniform double in [0, 1), using the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, bound) by rejection; `bound` must be nonzero.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "next_below: bound must be nonzero");
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Unit-rate exponential variate, -ln(1 - u).
    pub fn next_exp(&mut self) -> f64 {
        -(-self.next_f64()).ln_1p()
    }
}
