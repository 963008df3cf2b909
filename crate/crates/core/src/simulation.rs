//! Monte-Carlo significance studies on replicate tables.
//!
//! Replicate `r` draws from its own ChaCha8 stream: the generator is seeded
//! from the master seed and switched to stream `r`, so every replicate is
//! independent of evaluation order and thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::monotone_fit::{
    binomial_log_coefficient, fit_nondecreasing, fit_nonincreasing, log_likelihood,
};
use crate::table::{Level, ObservationTable};

/// Per-level parameters and counts from which replicate tables are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisSpec {
    family: Family,
    theta: Vec<f64>,
    counts: Vec<usize>,
    labels: Vec<Option<String>>,
}

impl HypothesisSpec {
    pub fn new(family: Family, theta: Vec<f64>, template: &ObservationTable) -> Result<Self> {
        if theta.len() != template.len() {
            return Err(Error::Config(format!(
                "hypothesis has {} parameters, template has {} levels",
                theta.len(),
                template.len()
            )));
        }
        for &t in &theta {
            family.check_parameter(t)?;
        }
        Ok(Self {
            family,
            theta,
            counts: template.counts(),
            labels: template.levels().iter().map(|l| l.label.clone()).collect(),
        })
    }

    /// Every level at the template's grand mean.
    pub fn null_constant(family: Family, template: &ObservationTable) -> Result<Self> {
        let mean = template.total_sum() / template.total_count() as f64;
        Self::new(family, vec![mean; template.len()], template)
    }

    /// The template's own non-decreasing maximum-likelihood fit.
    pub fn alternative_fit(family: Family, template: &ObservationTable) -> Result<Self> {
        let phi = fit_nondecreasing(template)?.phi();
        Self::new(family, phi, template)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }
}

/// A table with the hypothesis' shape, each value drawn independently.
pub fn generate_table<R: Rng + ?Sized>(
    hypothesis: &HypothesisSpec,
    rng: &mut R,
) -> ObservationTable {
    let levels = hypothesis
        .theta
        .iter()
        .zip(&hypothesis.counts)
        .zip(&hypothesis.labels)
        .map(|((&theta, &n), label)| Level {
            label: label.clone(),
            values: (0..n)
                .map(|_| hypothesis.family.sample_unchecked(theta, rng))
                .collect(),
        })
        .collect();
    ObservationTable::new(levels).expect("hypothesis counts are positive")
}

/// Spread of the non-decreasing fit between the extreme levels minus the
/// spread of the non-increasing fit.
pub fn delta_statistic(table: &ObservationTable) -> Result<f64> {
    let up = fit_nondecreasing(table)?;
    let down = fit_nonincreasing(table)?;
    Ok((up.last_value() - up.first_value()) - (down.first_value() - down.last_value()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    Delta,
    /// Log-likelihood at the hypothesis' fixed parameter vector.
    LogLikelihood,
    /// Log-likelihood at each table's own non-decreasing fit.
    LogLikelihoodRefit,
    /// Binomial log-likelihood of the per-level counts at the hypothesis'
    /// fixed parameters: the Bernoulli log-likelihood plus `ln ∏ C(n_i, d_i)`.
    /// Bernoulli hypotheses only.
    BinomialLogLikelihood,
}

impl Statistic {
    pub fn as_str(self) -> &'static str {
        match self {
            Statistic::Delta => "delta",
            Statistic::LogLikelihood => "loglik",
            Statistic::LogLikelihoodRefit => "loglik-refit",
            Statistic::BinomialLogLikelihood => "binomial-loglik",
        }
    }

    pub fn evaluate(self, table: &ObservationTable, hypothesis: &HypothesisSpec) -> Result<f64> {
        match self {
            Statistic::Delta => delta_statistic(table),
            Statistic::LogLikelihood => {
                log_likelihood(&hypothesis.family, &hypothesis.theta, table)
            }
            Statistic::LogLikelihoodRefit => {
                let phi = fit_nondecreasing(table)?.phi();
                log_likelihood(&hypothesis.family, &phi, table)
            }
            Statistic::BinomialLogLikelihood => Ok(log_likelihood(
                &hypothesis.family,
                &hypothesis.theta,
                table,
            )? + binomial_log_coefficient(table)?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StudyConfig {
    pub replicates: usize,
    pub master_seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub statistic: Statistic,
    pub family: Family,
    pub replicate_count: usize,
    pub master_seed: u64,
    pub observed: f64,
    /// Fraction of replicates strictly below `observed`.
    pub quantile_rank: f64,
    pub count_below: usize,
    pub count_equal: usize,
    pub count_at_or_above: usize,
    pub values: Vec<f64>,
}

impl SimulationReport {
    fn new(
        statistic: Statistic,
        family: Family,
        config: &StudyConfig,
        observed: f64,
        values: Vec<f64>,
    ) -> Self {
        let count_below = values.iter().filter(|&&v| v < observed).count();
        let count_equal = values.iter().filter(|&&v| v == observed).count();
        Self {
            statistic,
            family,
            replicate_count: values.len(),
            master_seed: config.master_seed,
            observed,
            quantile_rank: count_below as f64 / values.len() as f64,
            count_below,
            count_equal,
            count_at_or_above: values.len() - count_below,
            values,
        }
    }
}

/// Generator for replicate `replicate` under `master_seed`.
pub fn replicate_rng(master_seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replicate);
    rng
}

/// Ranks the template's statistic among replicate tables drawn under `hypothesis`.
pub fn run_study(
    template: &ObservationTable,
    hypothesis: &HypothesisSpec,
    statistic: Statistic,
    config: &StudyConfig,
) -> Result<SimulationReport> {
    if config.replicates == 0 {
        return Err(Error::Config("replicates must be at least 1".into()));
    }
    if template.counts() != hypothesis.counts {
        return Err(Error::Config(
            "hypothesis level counts differ from the template".into(),
        ));
    }
    if statistic == Statistic::BinomialLogLikelihood && hypothesis.family != Family::Bernoulli {
        return Err(Error::Config(format!(
            "binomial-loglik statistic needs a bernoulli hypothesis, got {}",
            hypothesis.family
        )));
    }
    if statistic != Statistic::Delta {
        hypothesis
            .family
            .validate_observable(template)
            .map_err(|e| Error::Config(format!("{} statistic: {e}", statistic.as_str())))?;
    }
    let observed = statistic.evaluate(template, hypothesis)?;

    let replicate = |r: usize| -> Result<f64> {
        let mut rng = replicate_rng(config.master_seed, r as u64);
        let table = generate_table(hypothesis, &mut rng);
        statistic.evaluate(&table, hypothesis)
    };
    let compute = || {
        (0..config.replicates)
            .into_par_iter()
            .map(replicate)
            .collect::<Result<Vec<f64>>>()
    };
    let values = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(compute)?,
        None => compute()?,
    };
    Ok(SimulationReport::new(
        statistic,
        hypothesis.family,
        config,
        observed,
        values,
    ))
}
