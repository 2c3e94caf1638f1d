//! Session configuration: the prime, reproducibility seed and capacity caps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp;

/// Largest prime accepted for Witt-vector coefficient arithmetic.
pub const MAX_PRIME: u64 = 97;

/// Default seed for all randomized checks; override for fresh samples.
pub const DEFAULT_SEED: u64 = 0x5eed_cafe;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionConfig {
    /// The characteristic. Prime, `2 <= p <= MAX_PRIME`.
    pub prime: u64,
    /// Additive margin around the default degree box. `None` means rank + 1.
    pub box_margin: Option<i64>,
    /// Seed for every randomized check; identical seeds give identical runs.
    pub seed: u64,
    /// Column count above which rank computations switch to the sparse path.
    pub max_dense_cols: usize,
    /// Cap on the number of grades swept in one Čech computation.
    pub max_box_points: usize,
    /// Cap on intermediate ray counts in dual-cone enumeration.
    pub max_rays: usize,
}

impl SessionConfig {
    pub fn new(prime: u64) -> Self {
        SessionConfig {
            prime,
            box_margin: None,
            seed: DEFAULT_SEED,
            max_dense_cols: 4096,
            max_box_points: 2_000_000,
            max_rays: 4096,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !fp::is_prime(self.prime) || self.prime > MAX_PRIME {
            return Err(Error::InvalidInput(format!(
                "prime must be a prime in 2..={}, got {}",
                MAX_PRIME, self.prime
            )));
        }
        Ok(())
    }

    /// Margin used when expanding the default degree box for rank `n`.
    pub fn margin_for_rank(&self, rank: usize) -> i64 {
        self.box_margin.unwrap_or(rank as i64 + 1)
    }
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig::new(2)
    }
}
