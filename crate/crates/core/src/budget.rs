//! Memory guard for exact enumeration.

use crate::error::{Error, Result};

/// Upper bound on the bytes an exact computation may hold at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub bytes: u64,
}

impl Budget {
    pub const DEFAULT_BYTES: u64 = 2 << 30;

    pub const fn new(bytes: u64) -> Self {
        Budget { bytes }
    }

    pub const fn unlimited() -> Self {
        Budget { bytes: u64::MAX }
    }

    /// Fails with `BudgetExceeded` when `required` is over the limit.
    pub fn check(&self, required: u64) -> Result<()> {
        if required > self.bytes {
            Err(Error::BudgetExceeded {
                required,
                budget: self.bytes,
            })
        } else {
            Ok(())
        }
    }

    /// Bytes for `count` dense complex `dim x dim` matrices, saturating.
    pub fn dense_states(count: u64, dim: u64) -> u64 {
        count
            .saturating_mul(dim.saturating_mul(dim))
            .saturating_mul(16)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_BYTES)
    }
}
