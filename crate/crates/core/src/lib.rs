//! Photon emission by hydrogen-like atoms whose center of mass is a plane
//! wave or a twisted (Bessel) wave.
//!
//! The crate is organised bottom-up: [`specfun`] and [`quadrature`] supply
//! numerics, [`kinematics`] the momentum bookkeeping, [`emission`] the
//! photon densities and scans, [`coincidence`] the twisted → plane-wave
//! channel and [`verify`] a self-check suite built from independent oracles.

// `!(x > 0.0)` is used on purpose so that NaN is rejected together with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coincidence;
pub mod emission;
pub mod error;
pub mod kinematics;
pub mod quadrature;
pub mod specfun;
pub mod verify;

pub use coincidence::{
    allowed_kappa_p, coincidence_density, ring_geometry, sample_ring, tw_pw_matrix_element,
    DetectorWindow, RingGeometry, TwPwAmplitude,
};
pub use emission::{
    channel_density, default_grid, master_integral_exact, master_integral_quad, planewave_density,
    scan, twisted_density, twisted_pair_weight, uniform_grid, Channel, EmissionProblem,
    MasterIntegralMode, ScanResult,
};
pub use error::{Error, Result};
pub use kinematics::{
    beam_energy, make_triangle, recoil_state, theta_pw, BeamKind, BeamState, PhotonMode,
    RecoilState, TransitionLine, TriangleGeom, TriangleShape,
};
pub use quadrature::{integrate, integrate_hinted, Estimate, Hints, QuadratureConfig, Spike};
pub use specfun::{
    bessel_j, gaussian_delta, triple_bessel_closed, triple_bessel_oracle, GaussianDelta,
};
