//! Numerical machinery for integrating functionals over infinite-dimensional
//! function spaces by taking mean values over finite-dimensional sphere
//! sections, together with the classical constructions that surround that
//! idea: Gaussian limits of sphere marginals, natural density on the
//! integers, Brownian first passage to a sphere, and the Green three-term
//! potential decomposition on a spherical boundary.
//!
//! The crate is organised around pure functions over immutable data. All
//! Monte Carlo entry points take an explicit [`rng::SeedPath`], so results
//! are reproducible and independent of thread scheduling.

pub mod brownian;
pub mod density;
pub mod error;
pub mod functional;
pub mod integral;
pub mod potential;
pub mod quadrature;
pub mod rng;
pub mod sphere;
pub mod stats;

pub use error::Error;
pub use integral::{ConvergenceReport, MeanEstimate, MeanMethod, SectionMethod};
pub use functional::{Functional, StepFunction};

pub use rng::{RandomStream, SeedPath};
pub use sphere::{MarginalConvention, SphereSection};
pub use stats::RunningMoments;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
