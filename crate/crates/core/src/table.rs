//! Grouped observations: ordered levels, each with one or more values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub label: Option<String>,
    pub values: Vec<f64>,
}

impl Level {
    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.count() as f64
    }
}

/// Ordered levels `1..=m`, each holding `n_i >= 1` observations.
///
/// The order of `levels` is the order of the explanatory variable; it is never
/// re-sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationTable {
    levels: Vec<Level>,
}

impl ObservationTable {
    pub fn new(levels: Vec<Level>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Structural("table has no levels".into()));
        }
        if let Some(i) = levels.iter().position(|l| l.values.is_empty()) {
            return Err(Error::Structural(format!("level {i} has no observations")));
        }
        if let Some((i, _)) = levels
            .iter()
            .enumerate()
            .find(|(_, l)| l.values.iter().any(|v| !v.is_finite()))
        {
            return Err(Error::Structural(format!(
                "level {i} has a non-finite value"
            )));
        }
        Ok(Self { levels })
    }

    /// Unlabelled table from per-level value lists.
    pub fn from_values(values: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(
            values
                .into_iter()
                .map(|values| Level {
                    label: None,
                    values,
                })
                .collect(),
        )
    }

    /// 0/1 table from `(label, total, successes)` rows. Ones come first in each level.
    pub fn from_counts<L: Into<String>>(
        rows: impl IntoIterator<Item = (L, usize, usize)>,
    ) -> Result<Self> {
        let mut levels = Vec::new();
        for (i, (label, total, ones)) in rows.into_iter().enumerate() {
            if ones > total {
                return Err(Error::Structural(format!(
                    "level {i}: successes {ones} exceed total {total}"
                )));
            }
            let mut values = vec![1.0; ones];
            values.resize(total, 0.0);
            levels.push(Level {
                label: Some(label.into()),
                values,
            });
        }
        Self::new(levels)
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &Level {
        &self.levels[i]
    }

    /// Number of levels `m`.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(Level::count).collect()
    }

    pub fn total_count(&self) -> usize {
        self.levels.iter().map(Level::count).sum()
    }

    pub fn total_sum(&self) -> f64 {
        self.levels.iter().map(Level::sum).sum()
    }

    /// Display label for level `i`: the stored label, or the 1-based position.
    pub fn label(&self, i: usize) -> String {
        self.levels[i]
            .label
            .clone()
            .unwrap_or_else(|| (i + 1).to_string())
    }

    pub fn has_labels(&self) -> bool {
        self.levels.iter().all(|l| l.label.is_some())
    }

    pub fn is_binary(&self) -> bool {
        self.values().all(|v| v == 0.0 || v == 1.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.levels.iter().flat_map(|l| l.values.iter().copied())
    }

    /// The same table with level order reversed.
    pub fn reversed(&self) -> Self {
        Self {
            levels: self.levels.iter().rev().cloned().collect(),
        }
    }
}
