//! Marshall-Olkin extended generalized Gompertz (MOEGG) lifetime
//! distribution: evaluation, sampling, analytical properties,
//! maximum-likelihood fitting with analytic score and observed
//! information, goodness-of-fit statistics, and a multi-model
//! comparison harness.

pub mod error;
pub mod quad;
pub mod specialfn;

pub use error::{MoeggError, Result};
