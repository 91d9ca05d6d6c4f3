use serde::{Deserialize, Serialize};

/// Knobs shared by every sampled or exhaustive check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Options {
    /// Seed for the ChaCha8 stream that drives sampling.
    pub seed: u64,
    /// Number of random samples when a check cannot be exhaustive.
    pub samples: usize,
    /// Largest search space that is enumerated exhaustively.
    pub enum_cap: u64,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 128;
pub const DEFAULT_ENUM_CAP: u64 = 1 << 20;

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            enum_cap: DEFAULT_ENUM_CAP,
        }
    }
}

impl Options {
    pub fn rng(&self) -> rand_chacha::ChaCha8Rng {
        rand::SeedableRng::seed_from_u64(self.seed)
    }
}

/// `base^exp` when it does not exceed `cap`.
pub(crate) fn bounded_pow(base: u64, exp: usize, cap: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
        if acc > cap {
            return None;
        }
    }
    Some(acc)
}
