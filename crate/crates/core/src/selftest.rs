//! Randomized cross-check of the fitting algorithm against the exhaustive
//! search and the pool-adjacent-violators implementation.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::family::Family;
use crate::monotone_fit::pava::pava_nondecreasing;
use crate::monotone_fit::{brute_force_fit, fit_nondecreasing, MonotoneEstimate};
use crate::simulation::replicate_rng;
use crate::table::{Level, ObservationTable};

pub const SELFTEST_FAMILIES: [Family; 3] =
    [Family::Bernoulli, Family::Poisson, Family::Exponential];

/// Random table with `1..=max_levels` levels of `1..=max_count` observations
/// drawn from `family` with independent per-level parameters.
pub fn random_table<R: Rng + ?Sized>(
    family: &Family,
    max_levels: usize,
    max_count: usize,
    rng: &mut R,
) -> ObservationTable {
    let m = rng.random_range(1..=max_levels);
    let levels = (0..m)
        .map(|_| {
            let theta = match family {
                Family::Bernoulli => *[0.0, 0.25, 0.5, 0.75, 1.0].choose(rng).unwrap(),
                Family::Poisson | Family::Geometric => rng.random_range(0.0..3.0),
                Family::Normal { .. } => rng.random_range(-2.0..2.0),
                Family::Exponential => rng.random_range(0.2..3.0),
            };
            let n = rng.random_range(1..=max_count);
            Level {
                label: None,
                values: (0..n)
                    .map(|_| family.sample_unchecked(theta, rng))
                    .collect(),
            }
        })
        .collect();
    ObservationTable::new(levels).expect("non-empty levels")
}

/// Same partition, values within `tolerance`.
pub fn same_blocks(a: &MonotoneEstimate, b: &MonotoneEstimate, tolerance: f64) -> bool {
    a.direction() == b.direction()
        && a.blocks().len() == b.blocks().len()
        && a.blocks().iter().zip(b.blocks()).all(|(x, y)| {
            x.start == y.start && x.end == y.end && (x.value - y.value).abs() <= tolerance
        })
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SelftestSummary {
    pub tables: usize,
    pub brute_force_mismatches: usize,
    pub pava_mismatches: usize,
    pub max_value_difference: f64,
    /// Description of the first mismatching table, if any.
    pub first_failure: Option<String>,
}

impl SelftestSummary {
    pub fn passed(&self) -> bool {
        self.brute_force_mismatches == 0 && self.pava_mismatches == 0
    }
}

pub const SELFTEST_TOLERANCE: f64 = 1e-12;

/// Compares the fit with both reference algorithms on `tables` random tables
/// (at most 8 levels of at most 4 observations each).
pub fn run(tables: usize, seed: u64) -> Result<SelftestSummary> {
    let mut summary = SelftestSummary {
        tables,
        ..Default::default()
    };
    for i in 0..tables {
        let mut rng = replicate_rng(seed, i as u64);
        let family = SELFTEST_FAMILIES[i % SELFTEST_FAMILIES.len()];
        let table = random_table(&family, 8, 4, &mut rng);
        let fit = fit_nondecreasing(&table)?;
        let oracle = brute_force_fit(&table, &family)?.estimate;
        let pava = pava_nondecreasing(&table)?;
        for b in oracle.blocks() {
            let diff = (fit.value_at(b.start) - b.value).abs();
            summary.max_value_difference = summary.max_value_difference.max(diff);
        }
        let brute_ok = same_blocks(&fit, &oracle, SELFTEST_TOLERANCE);
        let pava_ok = same_blocks(&fit, &pava, SELFTEST_TOLERANCE);
        summary.brute_force_mismatches += usize::from(!brute_ok);
        summary.pava_mismatches += usize::from(!pava_ok);
        if (!brute_ok || !pava_ok) && summary.first_failure.is_none() {
            summary.first_failure = Some(format!("table {i} ({family}): {:?}", table.levels()));
        }
    }
    Ok(summary)
}
