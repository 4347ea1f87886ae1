//! Quantum nearest-centroid classification in simulation.
//!
//! Vectors are compiled into angle trees ([`angles`]), turned into
//! logarithmic-depth unary loader circuits ([`circuit`]), and paired into
//! distance-estimation circuits ([`distance`]) whose shot statistics drive a
//! nearest-centroid classifier ([`classifier`]). The [`sim`] module executes
//! circuits exactly or with coherent and depolarizing noise, and
//! [`noise_analysis`] inverts that noise model.

pub mod angles;
pub mod circuit;
pub mod classifier;
pub mod data;
pub mod distance;
pub mod error;
pub mod noise_analysis;
pub mod rng;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};
