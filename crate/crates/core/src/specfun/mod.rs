//! Special functions: Bessel functions of the first kind, the Gaussian-regularized
//! energy delta, and the triple-Bessel overlap integral.

mod bessel;
mod gaussian;
mod triple;

pub use bessel::bessel_j;
pub use gaussian::{gaussian_delta, GaussianDelta};
pub use triple::{
    partial_sum_limit, richardson_to_zero, triple_bessel_closed, triple_bessel_extrapolated,
    triple_bessel_oracle, DampedLimit, DEFAULT_DAMPINGS, TAIL_DECAY_LENGTHS,
};
