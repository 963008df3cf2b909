//! Pool-adjacent-violators, used as an independent cross-check of the
//! prefix-mean construction.

use crate::error::Result;
use crate::table::ObservationTable;

use super::{Block, Direction, MonotoneEstimate};

/// Non-decreasing fit by a stack of weighted blocks, merging the top two while
/// they are not strictly increasing.
pub fn pava_nondecreasing(table: &ObservationTable) -> Result<MonotoneEstimate> {
    let mut stack: Vec<Block> = Vec::with_capacity(table.len());
    for (i, level) in table.levels().iter().enumerate() {
        let mut top = Block {
            start: i,
            end: i,
            value: 0.0,
            count: level.count() as u64,
            sum: level.sum(),
        };
        while let Some(prev) = stack.last() {
            // prev mean >= top mean
            if prev.sum * top.count as f64 >= top.sum * prev.count as f64 {
                let prev = stack.pop().unwrap();
                top = Block {
                    start: prev.start,
                    end: top.end,
                    value: 0.0,
                    count: prev.count + top.count,
                    sum: prev.sum + top.sum,
                };
            } else {
                break;
            }
        }
        stack.push(top);
    }
    for b in &mut stack {
        b.value = b.sum / b.count as f64;
    }
    MonotoneEstimate::new(Direction::NonDecreasing, table.len(), stack)
}
