//! Maximum-likelihood monotone compound estimates for grouped observations.
//!
//! Observations arrive in ordered levels (an explanatory variable), each level
//! drawn from a one-parameter family `f(x | θ)` parameterized by its mean. The
//! non-decreasing estimate that maximizes the compound likelihood is the same
//! for every such family: consecutive runs of levels pooled to their sample
//! means, found by repeatedly taking the minimum prefix mean.
//!
//! ```
//! use monotone_mle::{dataset, fit_nondecreasing};
//!
//! let table = dataset::sat_r();
//! let fit = fit_nondecreasing(&table).unwrap();
//! assert_eq!(fit.blocks().len(), 8);
//! ```

pub mod dataset;
pub mod error;
pub mod family;
pub mod io;
pub mod monotone_fit;
pub mod selftest;
pub mod simulation;
pub mod table;

pub use error::{Error, Result};
pub use family::{Family, ParamInterval, Sigma};
pub use monotone_fit::{
    block_end, brute_force_fit, fit, fit_nondecreasing, fit_nonincreasing, log_likelihood, Block,
    Direction, MonotoneEstimate, PrefixStats,
};
pub use table::{Level, ObservationTable};
