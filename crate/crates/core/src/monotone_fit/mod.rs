//! Order-restricted maximum-likelihood fitting.
//!
//! [`fit_nondecreasing`] pools consecutive levels into blocks: starting at
//! level `a`, the block ends at the largest `k` attaining the minimum prefix
//! mean `μ[a..=k]`, and the block value is that mean. The result is the unique
//! likelihood maximizer among non-decreasing parameter vectors for every
//! family in [`crate::family`]; no family is consulted while fitting.
//!
//! Level indices in this module are 0-based and ranges are inclusive.

mod brute;
mod likelihood;
pub mod pava;
mod prefix;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::ObservationTable;

pub use brute::{brute_force_fit, BruteForceFit, BRUTE_FORCE_MAX_LEVELS};
pub use likelihood::{binomial_log_coefficient, log_likelihood};
pub use prefix::{block_end, fit_nondecreasing, PrefixStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    NonDecreasing,
    NonIncreasing,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::NonDecreasing => "nondecreasing",
            Direction::NonIncreasing => "nonincreasing",
        }
    }
}

/// A run of consecutive levels `start..=end` sharing the fitted value `value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub start: usize,
    pub end: usize,
    pub value: f64,
    /// Number of observations pooled in the block.
    pub count: u64,
    /// Sum of the pooled observations.
    pub sum: f64,
}

impl Block {
    pub fn levels(&self) -> usize {
        self.end - self.start + 1
    }
}

/// A fitted monotone compound estimate, stored as its block partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneEstimate {
    direction: Direction,
    levels: usize,
    blocks: Vec<Block>,
}

impl MonotoneEstimate {
    /// Builds an estimate, checking that the blocks partition `0..levels` and
    /// that block values are strictly monotone in `direction`.
    pub fn new(direction: Direction, levels: usize, blocks: Vec<Block>) -> Result<Self> {
        let estimate = Self {
            direction,
            levels,
            blocks,
        };
        estimate.check()?;
        Ok(estimate)
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Structural(msg));
        let (Some(first), Some(last)) = (self.blocks.first(), self.blocks.last()) else {
            return bad("estimate has no blocks".into());
        };
        if first.start != 0 || last.end + 1 != self.levels {
            return bad(format!("blocks do not cover 0..{}", self.levels));
        }
        for b in &self.blocks {
            if b.start > b.end {
                return bad(format!("empty block {}..={}", b.start, b.end));
            }
        }
        for w in self.blocks.windows(2) {
            if w[1].start != w[0].end + 1 {
                return bad(format!("blocks not consecutive at level {}", w[0].end));
            }
            let ordered = match self.direction {
                Direction::NonDecreasing => w[0].value < w[1].value,
                Direction::NonIncreasing => w[0].value > w[1].value,
            };
            if !ordered {
                return bad(format!(
                    "block values {} and {} not strictly {}",
                    w[0].value,
                    w[1].value,
                    self.direction.as_str()
                ));
            }
        }
        Ok(())
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Number of levels `m`.
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// The expanded per-level parameter vector φ.
    pub fn phi(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.value, b.levels()))
            .collect()
    }

    pub fn value_at(&self, level: usize) -> f64 {
        self.blocks
            .iter()
            .find(|b| b.start <= level && level <= b.end)
            .map(|b| b.value)
            .expect("level within estimate")
    }

    pub fn first_value(&self) -> f64 {
        self.blocks[0].value
    }

    pub fn last_value(&self) -> f64 {
        self.blocks[self.blocks.len() - 1].value
    }

    /// Re-expresses an estimate fitted on a reversed table in the original
    /// level order, flipping its direction.
    pub(crate) fn reversed(self) -> Self {
        let m = self.levels;
        let direction = match self.direction {
            Direction::NonDecreasing => Direction::NonIncreasing,
            Direction::NonIncreasing => Direction::NonDecreasing,
        };
        let blocks = self
            .blocks
            .into_iter()
            .rev()
            .map(|b| Block {
                start: m - 1 - b.end,
                end: m - 1 - b.start,
                ..b
            })
            .collect();
        Self {
            direction,
            levels: m,
            blocks,
        }
    }

    /// Checks that this estimate has the shape of `table`.
    pub fn check_matches(&self, table: &ObservationTable) -> Result<()> {
        if self.levels != table.len() {
            return Err(Error::Structural(format!(
                "estimate has {} levels, table has {}",
                self.levels,
                table.len()
            )));
        }
        for b in &self.blocks {
            let count: usize = (b.start..=b.end).map(|i| table.level(i).count()).sum();
            if count as u64 != b.count {
                return Err(Error::Structural(format!(
                    "block {}..={} pools {} observations, table has {}",
                    b.start, b.end, b.count, count
                )));
            }
        }
        Ok(())
    }
}

/// Maximum-likelihood non-increasing estimate: the non-decreasing fit of the
/// reversed table, mapped back to the original level order.
pub fn fit_nonincreasing(table: &ObservationTable) -> Result<MonotoneEstimate> {
    Ok(fit_nondecreasing(&table.reversed())?.reversed())
}

pub fn fit(table: &ObservationTable, direction: Direction) -> Result<MonotoneEstimate> {
    match direction {
        Direction::NonDecreasing => fit_nondecreasing(table),
        Direction::NonIncreasing => fit_nonincreasing(table),
    }
}
