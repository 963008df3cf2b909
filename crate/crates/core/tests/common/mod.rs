//! Oracles shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use monotone_mle::{Family, MonotoneEstimate, ObservationTable};
use rand::Rng;

pub const NORMAL_SIGMA: f64 = 1.3;

pub fn all_families() -> [Family; 5] {
    [
        Family::Bernoulli,
        Family::Poisson,
        Family::Geometric,
        Family::normal(NORMAL_SIGMA).unwrap(),
        Family::Exponential,
    ]
}

/// A random observable sample of size 1..=20.
pub fn random_sample<R: Rng>(family: &Family, rng: &mut R) -> Vec<f64> {
    let t = rng.random_range(1..=20);
    let theta = match family {
        Family::Bernoulli => match rng.random_range(0..5) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.random_range(0.0..1.0),
        },
        Family::Poisson | Family::Geometric => {
            if rng.random_bool(0.2) {
                0.0
            } else {
                rng.random_range(0.0..6.0)
            }
        }
        Family::Normal { .. } => rng.random_range(-5.0..5.0),
        Family::Exponential => rng.random_range(0.1..5.0),
    };
    (0..t).map(|_| family.sample(theta, rng).unwrap()).collect()
}

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (points - 1) as f64
            }
        })
        .collect()
}

/// Checks strict increase of the sample log-likelihood on a grid up to the
/// mean and strict decrease beyond it; each step must move by more than
/// `tolerance`. Returns a description of the first violation.
pub fn unimodality_violation(family: &Family, ys: &[f64], tolerance: f64) -> Option<String> {
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let (lo, hi) = match family {
        Family::Bernoulli => (0.0, 1.0),
        Family::Poisson | Family::Geometric => (0.0, 3.0 * mean + 2.0),
        Family::Normal { sigma } => (mean - 4.0 * sigma.get(), mean + 4.0 * sigma.get()),
        Family::Exponential => (mean / 20.0, mean * 20.0),
    };
    let ll = |theta: f64| family.sample_log_likelihood(ys, theta).unwrap();
    if mean > lo {
        let below = grid(lo, mean, 9);
        for w in below.windows(2) {
            let (a, b) = (ll(w[0]), ll(w[1]));
            let rises = b - a > tolerance;
            if !rises {
                return Some(format!(
                    "{family}: L({}) = {a} !< L({}) = {b} for {ys:?}",
                    w[0], w[1]
                ));
            }
        }
    }
    if hi > mean {
        let above = grid(mean, hi, 9);
        for w in above.windows(2) {
            let (a, b) = (ll(w[0]), ll(w[1]));
            let falls = a - b > tolerance;
            if !falls {
                return Some(format!(
                    "{family}: L({}) = {a} !> L({}) = {b} for {ys:?}",
                    w[0], w[1]
                ));
            }
        }
    }
    None
}

/// The likelihood at the sample mean is finite and beats `mean ± δ`.
pub fn mean_maximum_violation(family: &Family, ys: &[f64]) -> Option<String> {
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let at_mean = family.sample_log_likelihood(ys, mean).ok()?;
    if !at_mean.is_finite() {
        return Some(format!(
            "{family}: non-finite likelihood at mean for {ys:?}"
        ));
    }
    for delta in [1e-3, 1e-1] {
        for eta in [mean - delta, mean + delta] {
            if family.check_parameter(eta).is_err() {
                continue;
            }
            let other = family.sample_log_likelihood(ys, eta).unwrap();
            let beats = at_mean > other;
            if !beats {
                return Some(format!(
                    "{family}: L(mean) = {at_mean} <= L({eta}) = {other}"
                ));
            }
        }
    }
    None
}

/// Random non-decreasing parameter vector inside Θ, either spread over a
/// data-dependent range or a monotone perturbation of `phi`.
pub fn random_nondecreasing<R: Rng>(
    family: &Family,
    table: &ObservationTable,
    phi: &[f64],
    rng: &mut R,
) -> Vec<f64> {
    let max = table.values().fold(f64::NEG_INFINITY, f64::max);
    let min = table.values().fold(f64::INFINITY, f64::min);
    let (lo, hi) = match family {
        Family::Bernoulli => (0.0, 1.0),
        Family::Poisson | Family::Geometric => (0.0, max + 1.0),
        Family::Normal { .. } => (min - 1.0, max + 1.0),
        Family::Exponential => (min / 2.0, max * 2.0),
    };
    let mut lambda: Vec<f64> = if rng.random_bool(0.5) {
        (0..phi.len()).map(|_| rng.random_range(lo..=hi)).collect()
    } else {
        phi.iter()
            .map(|&p| (p + rng.random_range(-0.05..0.05)).clamp(lo, hi))
            .collect()
    };
    lambda.sort_by(f64::total_cmp);
    if let Family::Exponential = family {
        for l in &mut lambda {
            *l = l.max(1e-9);
        }
    }
    lambda
}

/// Index-reversed copy of an estimate's per-level values.
pub fn reversed_phi(estimate: &MonotoneEstimate) -> Vec<f64> {
    let mut phi = estimate.phi();
    phi.reverse();
    phi
}
