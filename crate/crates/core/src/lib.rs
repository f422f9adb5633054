//! Causal structure of Minkowski charts `ℝ^{1,d}` (`d ∈ {1, 2}`) and of the
//! future cone `I⁺(0)`.
//!
//! * [`minkowski`]: the causal order, `J±`/`I±` of finite clouds, diamonds.
//! * [`surfaces`]: Lipschitz graphs, the `Σ₋`/`Σ₊` envelopes, foliations,
//!   surface deformation through prescribed events, slice bounds.
//! * [`setlib`]: example sets with exact membership predicates.
//! * [`classifier`]: three-valued compactness verdicts with certificates and
//!   refutation witnesses.
//! * [`wavekit`]: a 1+1 leapfrog wave solver with retarded/advanced
//!   operators, Cauchy evolution and support-class bookkeeping.

pub mod classifier;
pub mod error;
pub mod export;
pub mod minkowski;
pub mod setlib;
pub mod surfaces;
pub mod wavekit;

pub use error::{Error, Result};
