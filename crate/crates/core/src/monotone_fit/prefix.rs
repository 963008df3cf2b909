use crate::error::{Error, Result};
use crate::table::ObservationTable;

use super::{Block, Direction, MonotoneEstimate};

/// Cumulative sums `S_k` and counts `N_k`, `k = 0..=m`, with `S_0 = N_0 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixStats {
    sums: Vec<f64>,
    counts: Vec<u64>,
}

impl PrefixStats {
    pub fn new(table: &ObservationTable) -> Self {
        let mut sums = Vec::with_capacity(table.len() + 1);
        let mut counts = Vec::with_capacity(table.len() + 1);
        let (mut s, mut n) = (0.0, 0u64);
        sums.push(s);
        counts.push(n);
        for level in table.levels() {
            s += level.sum();
            n += level.count() as u64;
            sums.push(s);
            counts.push(n);
        }
        Self { sums, counts }
    }

    /// Number of levels `m`.
    pub fn levels(&self) -> usize {
        self.sums.len() - 1
    }

    fn check_range(&self, start: usize, end: usize) -> Result<()> {
        if start > end || end >= self.levels() {
            return Err(Error::IndexOutOfRange {
                start,
                end,
                levels: self.levels(),
            });
        }
        Ok(())
    }

    /// Sum and count of the observations in levels `start..=end`.
    pub fn range_totals(&self, start: usize, end: usize) -> Result<(f64, u64)> {
        self.check_range(start, end)?;
        Ok(self.totals(start, end))
    }

    fn totals(&self, start: usize, end: usize) -> (f64, u64) {
        (
            self.sums[end + 1] - self.sums[start],
            self.counts[end + 1] - self.counts[start],
        )
    }

    /// Sample mean `μ[start..=end]` of all observations in those levels.
    pub fn mean(&self, start: usize, end: usize) -> Result<f64> {
        let (s, n) = self.range_totals(start, end)?;
        Ok(s / n as f64)
    }
}

/// End of the block starting at `start` and its value.
///
/// Returns the largest `end` whose mean `μ[start..=end]` equals the minimum
/// over all ends, together with that minimum. Means are compared by
/// cross-multiplying unreduced sums and counts, so ties are detected exactly
/// whenever the sums are exactly representable.
pub fn block_end(stats: &PrefixStats, start: usize) -> Result<(usize, f64)> {
    stats.check_range(start, start)?;
    let (mut best_sum, mut best_count) = stats.totals(start, start);
    let mut best_end = start;
    for end in start + 1..stats.levels() {
        let (s, n) = stats.totals(start, end);
        // s/n <= best_sum/best_count, ties move the end forward
        if s * best_count as f64 <= best_sum * n as f64 {
            best_sum = s;
            best_count = n;
            best_end = end;
        }
    }
    Ok((best_end, best_sum / best_count as f64))
}

/// Maximum-likelihood non-decreasing estimate of the per-level means.
pub fn fit_nondecreasing(table: &ObservationTable) -> Result<MonotoneEstimate> {
    let stats = PrefixStats::new(table);
    let m = stats.levels();
    let mut blocks: Vec<Block> = Vec::new();
    let mut start = 0;
    while start < m {
        let (end, value) = block_end(&stats, start)?;
        let (sum, count) = stats.totals(start, end);
        if let Some(prev) = blocks.last() {
            assert!(
                prev.value < value,
                "block values not strictly increasing: {} then {} at level {start}",
                prev.value,
                value
            );
        }
        blocks.push(Block {
            start,
            end,
            value,
            count,
            sum,
        });
        start = end + 1;
    }
    MonotoneEstimate::new(Direction::NonDecreasing, m, blocks)
}
