//! Trend-structure analysis with logistic wavelets.
//!
//! The crate decomposes a time series into logistic waves by running a
//! continuous wavelet transform with the normalized second-order logistic
//! wavelet over the second differences of the aggregated series, refines the
//! resulting multilogistic-plus-linear model against the observed data, and
//! ships the supporting closed-form machinery: KdV soliton solutions with
//! finite-difference residual checks, and the Shannon entropy / mutual
//! redundancy calculus over small joint distributions.
//!
//! Module map:
//!
//! - [`infocalc`]: entropy, mutual and configurational information, mutual redundancy.
//! - [`soliton`]: single and N-soliton solutions, KdV residuals, Lambert W.
//! - [`logwave`]: Bernoulli numbers, logistic wavelets, the Index sum and scalograms.
//! - [`decompose`]: aggregation, second differences and iterative wave extraction.
//! - [`fit`]: the multilogistic model, its derivative, simplex refinement and R².

pub mod decompose;
pub mod error;
pub mod fit;
pub mod infocalc;
pub mod logwave;
pub mod quad;
pub mod simplex;
pub mod soliton;

pub use error::{Error, Result};
