//! The overlap integral `∫₀^∞ J_{m_b}(κ_b ρ) J_{m_a}(κ_a ρ) J_{m_a−m_b}(κ_p ρ) ρ dρ`.

use std::f64::consts::{PI, TAU};

use super::bessel::j_int;
use crate::error::{Error, Result};
use crate::kinematics::TriangleGeom;
use crate::quadrature::{integrate_panels, QuadratureConfig};

/// Damping sequence used when none is supplied.
pub const DEFAULT_DAMPINGS: [f64; 3] = [4e-2, 2e-2, 1e-2];

/// Upper limit of the damped integral in units of `1/damping` (`e^{-36} ≈ 2e-16`).
pub const TAIL_DECAY_LENGTHS: f64 = 36.0;

/// Closed form `cos(m_a δ_x − m_b δ_b) / (2πΔ)` inside the triangle domain, zero outside.
pub fn triple_bessel_closed(m_a: i32, m_b: i32, tri: &TriangleGeom) -> Result<f64> {
    let Some(shape) = tri.shape else {
        return Ok(0.0);
    };
    if shape.area == 0.0 {
        return Err(Error::SingularGeometry(format!(
            "degenerate triangle ({}, {}, {})",
            tri.kappa_a, tri.kappa_b, tri.kappa_p
        )));
    }
    let phase = f64::from(m_a) * shape.delta_x - f64::from(m_b) * shape.delta_b;
    Ok(phase.cos() / (TAU * shape.area))
}

fn difference_order(m_a: i32, m_b: i32) -> Result<i32> {
    m_a.checked_sub(m_b)
        .ok_or_else(|| Error::Domain(format!("order difference {m_a} - {m_b} overflows")))
}

/// `∫₀^{ρ_max} J_{m_b}(κ_b ρ) J_{m_a}(κ_a ρ) J_{m_a−m_b}(κ_p ρ) ρ e^{−damping·ρ} dρ`.
///
/// The range is cut into panels of two periods of the fastest oscillation
/// before adaptive refinement.
pub fn triple_bessel_oracle(
    m_a: i32,
    m_b: i32,
    kappa_a: f64,
    kappa_b: f64,
    kappa_p: f64,
    damping: f64,
    rho_max: f64,
) -> Result<f64> {
    let m_p = difference_order(m_a, m_b)?;
    for v in [kappa_a, kappa_b, kappa_p] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain(format!(
                "wave numbers must be positive, got {v}"
            )));
        }
    }
    if !(damping.is_finite() && damping > 0.0) {
        return Err(Error::Domain(format!(
            "damping must be positive, got {damping}"
        )));
    }
    if !(rho_max.is_finite() && rho_max > 0.0) {
        return Err(Error::Domain(format!(
            "rho_max must be positive, got {rho_max}"
        )));
    }
    let panel = 2.0 * TAU / (kappa_a + kappa_b + kappa_p);
    let n_panels = (rho_max / panel).ceil().max(1.0) as usize;
    let points: Vec<f64> = (0..=n_panels)
        .map(|i| (i as f64 * panel).min(rho_max))
        .collect();
    let integrand = |rho: f64| {
        j_int(m_b, kappa_b * rho)
            * j_int(m_a, kappa_a * rho)
            * j_int(m_p, kappa_p * rho)
            * rho
            * (-damping * rho).exp()
    };
    let cfg = QuadratureConfig {
        rel_tol: 1e-10,
        abs_tol: 1e-12,
        max_subdivisions: 4 * n_panels + 2000,
        endpoint_inset: 0.0,
    };
    Ok(integrate_panels(integrand, &points, &cfg)?.value)
}

/// Damped estimates and their extrapolation to zero damping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampedLimit {
    pub dampings: [f64; 3],
    pub estimates: [f64; 3],
    pub limit: f64,
}

/// Evaluate the oracle at three decreasing dampings and extrapolate to zero,
/// assuming `F(ε) = F(0) + c₁ε + c₂ε² + …`.
pub fn triple_bessel_extrapolated(
    m_a: i32,
    m_b: i32,
    kappa_a: f64,
    kappa_b: f64,
    kappa_p: f64,
    dampings: [f64; 3],
) -> Result<DampedLimit> {
    if !(dampings[0] > dampings[1] && dampings[1] > dampings[2] && dampings[2] > 0.0) {
        return Err(Error::Config(
            "dampings must be positive and strictly decreasing".into(),
        ));
    }
    let mut estimates = [0.0; 3];
    for (est, &eps) in estimates.iter_mut().zip(&dampings) {
        *est = triple_bessel_oracle(
            m_a,
            m_b,
            kappa_a,
            kappa_b,
            kappa_p,
            eps,
            TAIL_DECAY_LENGTHS / eps,
        )?;
    }
    let limit = richardson_to_zero(&dampings, &estimates)?;
    Ok(DampedLimit {
        dampings,
        estimates,
        limit,
    })
}

/// Quadratic Lagrange extrapolation of `(ε_i, F_i)` to `ε = 0`.
pub fn richardson_to_zero(eps: &[f64; 3], values: &[f64; 3]) -> Result<f64> {
    let d1 = values[1] - values[0];
    let d2 = values[2] - values[1];
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let noise = 1e-12 * scale.max(1e-300);
    // with a shrinking damping the raw sequence must settle, not spread
    let step_ratio = (eps[1] - eps[2]) / (eps[0] - eps[1]);
    if d2.abs() > noise && d2.abs() > 2.0 * step_ratio * d1.abs() + noise {
        return Err(Error::Convergence(format!(
            "damped estimates spread: differences {d1:e} then {d2:e}"
        )));
    }
    let mut limit = 0.0;
    for i in 0..3 {
        let mut w = 1.0;
        for j in 0..3 {
            if j != i {
                w *= eps[j] / (eps[j] - eps[i]);
            }
        }
        limit += w * values[i];
    }
    Ok(limit)
}

/// Large-`N` value of `Σ_{|m_b|≤N} |closed form|² / (2N + 1)`: `1/(2(2πΔ)²)`,
/// since `cos²` averages to one half over equidistributed phases.
pub fn partial_sum_limit(area: f64) -> f64 {
    let inv = 1.0 / (2.0 * PI * area);
    0.5 * inv * inv
}
