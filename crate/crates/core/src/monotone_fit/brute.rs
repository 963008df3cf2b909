//! Exhaustive search over consecutive-block partitions.
//!
//! Every partition of `0..m` into runs is tried with each run set to its own
//! sample mean; candidates whose run values are strictly increasing are scored
//! by the compound log-likelihood. Block means are summed directly from the
//! observations, not from prefix sums.

use crate::error::{Error, Result};
use crate::family::Family;
use crate::table::ObservationTable;

use super::{log_likelihood, Block, Direction, MonotoneEstimate};

/// Largest table the exhaustive search accepts (`2^(m-1)` partitions).
pub const BRUTE_FORCE_MAX_LEVELS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceFit {
    pub estimate: MonotoneEstimate,
    pub log_likelihood: f64,
    /// Log-likelihood of the second-best candidate, if there was one.
    pub runner_up: Option<f64>,
    /// Number of strictly increasing candidates scored.
    pub candidates: usize,
}

fn candidate_blocks(table: &ObservationTable, cuts: u32) -> Vec<Block> {
    let m = table.len();
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 0..m {
        let closes = i + 1 == m || cuts & (1 << i) != 0;
        if closes {
            let (sum, count) = table.levels()[start..=i]
                .iter()
                .flat_map(|l| l.values.iter())
                .fold((0.0, 0u64), |(s, n), &v| (s + v, n + 1));
            blocks.push(Block {
                start,
                end: i,
                value: sum / count as f64,
                count,
                sum,
            });
            start = i + 1;
        }
    }
    blocks
}

/// Likelihood maximizer among non-decreasing candidates, found exhaustively
/// under `family`. Fails with [`Error::NotUnique`] if the best candidate does
/// not beat the runner-up strictly.
pub fn brute_force_fit(table: &ObservationTable, family: &Family) -> Result<BruteForceFit> {
    let m = table.len();
    if m > BRUTE_FORCE_MAX_LEVELS {
        return Err(Error::TooLarge {
            levels: m,
            limit: BRUTE_FORCE_MAX_LEVELS,
        });
    }
    family.validate_observable(table)?;

    let mut best: Option<(f64, Vec<Block>)> = None;
    let mut runner_up: Option<f64> = None;
    let mut candidates = 0;
    for cuts in 0..1u32 << (m - 1) {
        let blocks = candidate_blocks(table, cuts);
        if !blocks.windows(2).all(|w| w[0].value < w[1].value) {
            continue;
        }
        candidates += 1;
        let phi: Vec<f64> = blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.value, b.levels()))
            .collect();
        let ll = log_likelihood(family, &phi, table)?;
        match &best {
            Some((best_ll, _)) if ll <= *best_ll => {
                runner_up = Some(runner_up.map_or(ll, |r| r.max(ll)));
            }
            _ => {
                if let Some((prev, _)) = best.take() {
                    runner_up = Some(runner_up.map_or(prev, |r| r.max(prev)));
                }
                best = Some((ll, blocks));
            }
        }
    }

    let (ll, blocks) = best.expect("the all-pooled partition is always a candidate");
    assert!(ll > f64::NEG_INFINITY, "maximum likelihood is zero");
    if let Some(r) = runner_up {
        if r >= ll {
            return Err(Error::NotUnique { margin: ll - r });
        }
    }
    Ok(BruteForceFit {
        estimate: MonotoneEstimate::new(Direction::NonDecreasing, m, blocks)?,
        log_likelihood: ll,
        runner_up,
        candidates,
    })
}
