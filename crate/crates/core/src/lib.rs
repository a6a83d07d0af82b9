//! Sparsity-aware distortion analysis for Rademacher random projections.
//!
//! A Rademacher projection compresses an `n`-dimensional vector `x` to `m`
//! dimensions with a matrix of IID `±1/√m` entries. The relative squared-norm
//! error of the embedding, `E(x) = ‖Φx‖²/‖x‖² − 1`, concentrates around zero,
//! and how tightly it concentrates depends on how spread out the input is:
//! the flat vector with `K = ‖x‖₀` equal nonzero components is the worst case
//! among all inputs of the same norm and sparsity.
//!
//! This crate provides
//!
//! - exact closed-form moments of the worst-case distortion, expressed through
//!   the standardized symmetric binomial ([`moments`]),
//! - an independent brute-force oracle that enumerates sign assignments to
//!   recover the same moments and full distortion laws for small instances
//!   ([`oracle`]),
//! - majorization utilities (Robin-Hood transfers, flattening) on squared
//!   weight profiles ([`majorization`]),
//! - moment-method tail bounds and prior-work comparison curves ([`bounds`]),
//! - reproducible Monte Carlo simulation of distortion samples and empirical
//!   CCDFs ([`projections`]),
//! - sparse dataset ingestion (MatrixMarket, CSV) and CSV emission
//!   ([`dataio`]),
//! - seeded verification suites that cross-check the closed forms against the
//!   oracle ([`verify`]).
//!
//! All moment computations are exact over arbitrary-precision rationals; a
//! floating-point fast path takes over where exact arithmetic would be
//! pointless (very large `K` or moment order).

pub mod bounds;
pub mod dataio;
pub mod error;
pub mod majorization;
pub mod moments;
mod numeric;
pub mod oracle;
pub mod projections;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
pub use majorization::WeightProfile;
pub use moments::{ChaosMomentTable, DistortionMomentTable, Exactness, Partition};
pub use oracle::{DiscreteLaw, OracleConfig};
pub use bounds::{Method, TailCurve};
pub use projections::{DistortionSample, Scheme, SignMatrix};

/// Exact rational scalar used throughout the moment engine.
pub type Rational = num_rational::BigRational;
