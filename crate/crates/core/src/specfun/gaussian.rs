use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A normalized Gaussian standing in for the energy-conservation delta function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianDelta {
    sigma_e: f64,
}

impl GaussianDelta {
    pub fn new(sigma_e: f64) -> Result<Self> {
        if !(sigma_e.is_finite() && sigma_e > 0.0) {
            return Err(Error::Config(format!(
                "Gaussian width must be positive and finite, got {sigma_e}"
            )));
        }
        Ok(Self { sigma_e })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma_e
    }

    /// Density at energy offset `e`, in inverse energy units.
    pub fn eval(&self, e: f64) -> f64 {
        let s = self.sigma_e;
        (-0.5 * (e / s) * (e / s)).exp() / ((2.0 * PI).sqrt() * s)
    }
}

/// Free-function form of [`GaussianDelta::eval`].
pub fn gaussian_delta(e: f64, delta: &GaussianDelta) -> f64 {
    delta.eval(e)
}
