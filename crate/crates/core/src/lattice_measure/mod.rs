//! Signed measures on `Z` and `Z²`: convolution, Fourier sampling,
//! Wiener-algebra norms, the three distances, and scheme measures built from
//! a compound-Poisson exponent and a polynomial residue.

mod exponent;
mod fourier;
mod measure;
mod residue;

pub use exponent::{
    compound_poisson_measure, poisson_tail_chernoff, poisson_truncation, poisson_weights,
    LevyExponent,
};
pub use fourier::{
    default_grid_size, fourier_coefficients, fourier_sample, inverse_fourier_1d, wiener_norm,
    FourierGrid,
};
pub use measure::{
    distance_kolmogorov, distance_local, distance_tv, Distance, SignedLatticeMeasure,
    ZERO_THRESHOLD,
};
pub use residue::{charlier_scheme_values, residue_atoms, scheme_measure, LaurentResidue};
