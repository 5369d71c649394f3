//! Higher-order signed approximation schemes for lattice random variables
//! that converge mod-φ, with exact reference laws and asymptotic predictions.
//!
//! The crate is organised bottom-up:
//! - [`lattice_measure`]: signed measures, distances, Fourier tools, schemes;
//! - [`symfun`]: partitions, power sums and elementary symmetric functions;
//! - [`hermite_asymptotics`]: Hermite constants and leading-term predictions;
//! - [`bounds`]: classical Poisson bounds and the Wiener-norm estimate;
//! - [`models`]: concrete random variables with exact laws and alphabets.

// Parameter checks are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod hermite_asymptotics;
pub mod lattice_measure;
pub mod models;
pub mod quadrature;
pub mod symfun;

pub use error::{Error, Result};
pub use lattice_measure::{
    Distance, FourierGrid, LaurentResidue, LevyExponent, SignedLatticeMeasure,
};
pub use symfun::{FormalAlphabet, IntegerPartition};
