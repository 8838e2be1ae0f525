use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Resource limits shared by the enumeration and reduction engines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of elements of one length in one `W_a`-coset.
    pub max_level_size: usize,
    /// Largest number of reduction nodes one engine may expand.
    pub max_nodes: u64,
    /// Largest number of memoized class decompositions.
    pub max_memo_entries: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_level_size: 500_000,
            max_nodes: 20_000_000,
            max_memo_entries: 5_000_000,
        }
    }
}

/// Counts work against a budget.
#[derive(Debug, Default)]
pub struct Budget {
    used: AtomicU64,
}

impl Budget {
    pub fn charge(&self, limit: u64, what: &str) -> Result<()> {
        let n = self.used.fetch_add(1, Ordering::Relaxed) + 1;
        if n > limit {
            return Err(Error::Resource(format!("{what}: more than {limit} nodes")));
        }
        Ok(())
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }
}
