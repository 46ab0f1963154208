//! # depspec
//!
//! Dependency spectra of Boolean block codes and what they say about
//! correlation between distributed encoders.
//!
//! - [`bitlattice`]: subset masks, coordinate permutations, product sources.
//! - [`decomposition`]: centered real form, additive decomposition and
//!   dependency spectrum of a Boolean function.
//! - [`corrbounds`]: spectral bounds on the disagreement of two functions fed
//!   correlated inputs, with exact and Monte-Carlo disagreement.
//! - [`slcs`]: typicality-encoding random codes and checks of their
//!   single-letter properties.
//! - [`experiments`]: variance concentration, correlation collapse and the
//!   interference-channel agreement experiment.
//! - [`cli`]: the `depspec` command-line front end.

pub mod bitlattice;
pub mod cli;
pub mod corrbounds;
pub mod decomposition;
pub mod error;
pub mod experiments;
pub mod seed;
pub mod slcs;

pub use bitlattice::{CorrelatedPairSource, Permutation, ProductSource, SubsetMask};
pub use corrbounds::{collapse_threshold, disagreement_bounds, exact_disagreement, mc_disagreement, CorrelationReport};
pub use decomposition::{center, BooleanFunction, Decomposition, DependencySpectrum, RealCenteredFunction};
pub use error::{Error, Result};
