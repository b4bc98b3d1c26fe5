//! Generalized Birnbaum-Saunders fatigue-life distributions built on
//! symmetric α-stable laws, with tail-index and scale estimators, the
//! Mallows distance, and a first-passage Monte Carlo harness.

pub mod error;
pub mod estimation;
pub mod gbs;
pub mod ks;
pub mod mallows;
pub mod quadrature;
pub mod rng;
pub mod roots;
pub mod sim;
pub mod special;
pub mod stable;

pub use error::{Error, Result};
pub use gbs::{ClassicalBsParams, GbsParams};
pub use quadrature::QuadratureConfig;
pub use stable::StableParams;
