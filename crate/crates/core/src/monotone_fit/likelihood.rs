use crate::error::{Error, Result};
use crate::family::Family;
use crate::table::ObservationTable;

/// Compound log-likelihood `Σ_i Σ_j ln f(x_ij | phi_i)`; `-inf` when any
/// factor vanishes.
pub fn log_likelihood(family: &Family, phi: &[f64], table: &ObservationTable) -> Result<f64> {
    if phi.len() != table.len() {
        return Err(Error::Structural(format!(
            "parameter vector has {} entries, table has {} levels",
            phi.len(),
            table.len()
        )));
    }
    let mut total = 0.0;
    for (&theta, level) in phi.iter().zip(table.levels()) {
        total += family.sample_log_likelihood(&level.values, theta)?;
    }
    Ok(total)
}

/// `ln ∏ C(n_i, d_i)` for a 0/1 table, `d_i` the number of ones in level `i`.
///
/// Adding it to the Bernoulli log-likelihood gives the binomial log-likelihood
/// of the per-level counts. It does not depend on the parameters, so it never
/// changes a maximizer, but it does vary between tables.
pub fn binomial_log_coefficient(table: &ObservationTable) -> Result<f64> {
    if !table.is_binary() {
        return Err(Error::Structural(
            "binomial coefficient needs 0/1 observations".into(),
        ));
    }
    Ok(table
        .levels()
        .iter()
        .map(|l| {
            let n = l.count() as f64;
            let d = l.sum();
            libm::lgamma(n + 1.0) - libm::lgamma(d + 1.0) - libm::lgamma(n - d + 1.0)
        })
        .sum())
}
