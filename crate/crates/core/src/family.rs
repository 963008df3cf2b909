//! One-parameter PDF families parameterized by their means.
//!
//! Each family satisfies the unimodal-likelihood contract the fitting relies on:
//! for observable data `y`, the likelihood `L(θ | y)` strictly increases for
//! `θ <= ȳ` and strictly decreases for `θ >= ȳ`. Boundary parameters that make a
//! likelihood factor vanish are kept and yield `-inf` rather than an error.
//!
//! For binomial data supplied as counts, the Bernoulli compound likelihood is
//! used. It differs from the binomial likelihood by the constant factor
//! `∏ C(n_i, d_i)`, which does not depend on the parameters and is not included
//! in fit log-likelihoods. The binomial form is available as a simulation
//! statistic (`Statistic::BinomialLogLikelihood`).

use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Exp, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::ObservationTable;

/// Integrality tolerance for the count-valued families.
pub const INTEGER_TOLERANCE: f64 = 1e-9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Standard deviation of the fixed-σ normal family. Always finite and positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Sigma(f64);

impl Sigma {
    pub fn new(sigma: f64) -> Result<Self> {
        if sigma.is_finite() && sigma > 0.0 {
            Ok(Self(sigma))
        } else {
            Err(Error::Config(format!(
                "sigma must be finite and > 0, got {sigma}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Sigma {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Sigma> for f64 {
    fn from(s: Sigma) -> f64 {
        s.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Bernoulli,
    Poisson,
    Geometric,
    Normal { sigma: Sigma },
    Exponential,
}

/// A real interval with independently open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamInterval {
    pub lower: f64,
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl ParamInterval {
    pub fn contains(&self, x: f64) -> bool {
        if x.is_nan() || x.is_infinite() {
            return false;
        }
        let above = if self.lower_closed {
            x >= self.lower
        } else {
            x > self.lower
        };
        let below = if self.upper_closed {
            x <= self.upper
        } else {
            x < self.upper
        };
        above && below
    }
}

impl fmt::Display for ParamInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lower_closed { '[' } else { '(' };
        let close = if self.upper_closed { ']' } else { ')' };
        let end = |v: f64| {
            if v == f64::INFINITY {
                "inf".to_string()
            } else if v == f64::NEG_INFINITY {
                "-inf".to_string()
            } else {
                v.to_string()
            }
        };
        write!(f, "{open}{}, {}{close}", end(self.lower), end(self.upper))
    }
}

fn as_count(x: f64) -> Option<u64> {
    let r = x.round();
    if r >= 0.0 && (x - r).abs() <= INTEGER_TOLERANCE && r < u64::MAX as f64 {
        Some(r as u64)
    } else {
        None
    }
}

impl Family {
    pub fn normal(sigma: f64) -> Result<Self> {
        Ok(Family::Normal {
            sigma: Sigma::new(sigma)?,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Bernoulli => "bernoulli",
            Family::Poisson => "poisson",
            Family::Geometric => "geometric",
            Family::Normal { .. } => "normal",
            Family::Exponential => "exponential",
        }
    }

    /// The parameter interval Θ.
    pub fn parameter_interval(&self) -> ParamInterval {
        let (lower, upper, lower_closed, upper_closed) = match self {
            Family::Bernoulli => (0.0, 1.0, true, true),
            Family::Poisson | Family::Geometric => (0.0, f64::INFINITY, true, false),
            Family::Normal { .. } => (f64::NEG_INFINITY, f64::INFINITY, false, false),
            Family::Exponential => (0.0, f64::INFINITY, false, false),
        };
        ParamInterval {
            lower,
            upper,
            lower_closed,
            upper_closed,
        }
    }

    pub fn check_parameter(&self, theta: f64) -> Result<()> {
        let interval = self.parameter_interval();
        if interval.contains(theta) {
            Ok(())
        } else {
            Err(Error::Domain {
                family: self.name(),
                value: theta,
                interval: interval.to_string(),
            })
        }
    }

    /// Membership in the observable set D.
    pub fn is_observable(&self, x: f64) -> bool {
        match self {
            Family::Bernoulli => x == 0.0 || x == 1.0,
            Family::Poisson | Family::Geometric => x.is_finite() && as_count(x).is_some(),
            Family::Normal { .. } => x.is_finite(),
            Family::Exponential => x.is_finite() && x > 0.0,
        }
    }

    /// `ln f(x | theta)`, with `-inf` exactly where the density vanishes.
    pub fn log_pdf(&self, x: f64, theta: f64) -> Result<f64> {
        self.check_parameter(theta)?;
        Ok(self.log_pdf_unchecked(x, theta))
    }

    pub(crate) fn log_pdf_unchecked(&self, x: f64, theta: f64) -> f64 {
        match *self {
            Family::Bernoulli => {
                if x == 1.0 {
                    theta.ln()
                } else if x == 0.0 {
                    (1.0 - theta).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            Family::Poisson => match as_count(x) {
                None => f64::NEG_INFINITY,
                Some(0) => -theta,
                Some(_) if theta == 0.0 => f64::NEG_INFINITY,
                Some(k) => {
                    let k = k as f64;
                    -theta + k * theta.ln() - libm::lgamma(k + 1.0)
                }
            },
            Family::Geometric => match as_count(x) {
                None => f64::NEG_INFINITY,
                Some(0) if theta == 0.0 => 0.0,
                Some(_) if theta == 0.0 => f64::NEG_INFINITY,
                Some(k) => {
                    // f = (1-p)^k p with p = 1/(1+θ)
                    let ln_one_plus = theta.ln_1p();
                    k as f64 * (theta.ln() - ln_one_plus) - ln_one_plus
                }
            },
            Family::Normal { sigma } => {
                let s = sigma.get();
                let z = (x - theta) / s;
                -LN_SQRT_2PI - s.ln() - 0.5 * z * z
            }
            Family::Exponential => {
                if x > 0.0 {
                    -theta.ln() - x / theta
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// `Σ ln f(y | theta)` over a sample.
    pub fn sample_log_likelihood(&self, ys: &[f64], theta: f64) -> Result<f64> {
        self.check_parameter(theta)?;
        Ok(ys.iter().map(|&y| self.log_pdf_unchecked(y, theta)).sum())
    }

    /// One draw from `f(· | theta)`.
    pub fn sample<R: Rng + ?Sized>(&self, theta: f64, rng: &mut R) -> Result<f64> {
        self.check_parameter(theta)?;
        Ok(self.sample_unchecked(theta, rng))
    }

    pub(crate) fn sample_unchecked<R: Rng + ?Sized>(&self, theta: f64, rng: &mut R) -> f64 {
        match *self {
            Family::Bernoulli => {
                if rng.random::<f64>() < theta {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Poisson => {
                if theta == 0.0 {
                    0.0
                } else {
                    Poisson::new(theta)
                        .expect("positive finite Poisson mean")
                        .sample(rng)
                }
            }
            Family::Geometric => {
                if theta == 0.0 {
                    return 0.0;
                }
                // Inversion: P(X >= k) = q^k with q = 1 - p = θ/(1+θ).
                let ln_q = theta.ln() - theta.ln_1p();
                let u = 1.0 - rng.random::<f64>();
                (u.ln() / ln_q).floor()
            }
            Family::Normal { sigma } => Normal::new(theta, sigma.get())
                .expect("finite normal parameters")
                .sample(rng),
            Family::Exponential => Exp::new(1.0 / theta)
                .expect("positive exponential rate")
                .sample(rng),
        }
    }

    /// Every observation must lie in D. Reports the first offender.
    pub fn validate_observable(&self, table: &ObservationTable) -> Result<()> {
        for (level, l) in table.levels().iter().enumerate() {
            if l.values.is_empty() {
                return Err(Error::Structural(format!(
                    "level {level} has no observations"
                )));
            }
            if let Some((index, &value)) = l
                .values
                .iter()
                .enumerate()
                .find(|(_, &v)| !self.is_observable(v))
            {
                return Err(Error::NotObservable {
                    family: self.name(),
                    level,
                    index,
                    value,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Normal { sigma } => write!(f, "normal(sigma={})", sigma.get()),
            other => f.write_str(other.name()),
        }
    }
}
