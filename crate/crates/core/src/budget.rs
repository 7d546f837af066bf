//! Node and wall-clock budgets shared by the exact searches.

use std::cell::Cell;
use std::time::{Duration, Instant};

use thiserror::Error;

/// Default node budget per call.
pub const DEFAULT_NODES: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("search budget exhausted after {nodes} nodes")]
pub struct BudgetExhausted {
    pub nodes: u64,
}

/// A search budget. Not `Sync`: each solve owns its budget.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    deadline: Option<Instant>,
    used: Cell<u64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::nodes(DEFAULT_NODES)
    }
}

impl Clone for Budget {
    /// Clones the limits with a fresh counter.
    fn clone(&self) -> Self {
        Budget {
            limit: self.limit,
            deadline: self.deadline,
            used: Cell::new(0),
        }
    }
}

impl Budget {
    pub fn nodes(limit: u64) -> Self {
        Budget {
            limit,
            deadline: None,
            used: Cell::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Budget::nodes(u64::MAX)
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.deadline = Some(Instant::now() + limit);
        self
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    #[inline]
    pub fn tick(&self) -> Result<(), BudgetExhausted> {
        let used = self.used.get() + 1;
        self.used.set(used);
        if used > self.limit {
            return Err(BudgetExhausted { nodes: used });
        }
        if used & 0xfff == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(BudgetExhausted { nodes: used });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_limit() {
        let b = Budget::nodes(3);
        assert!(b.tick().is_ok());
        assert!(b.tick().is_ok());
        assert!(b.tick().is_ok());
        assert_eq!(b.tick(), Err(BudgetExhausted { nodes: 4 }));
        assert_eq!(b.clone().used(), 0);
    }
}
