//! Twisted → plane-wave channel: the recoiling atom is detected as a plane
//! wave, which pins the photon's transverse momentum to a displaced circle.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::kinematics::{BeamKind, BeamState, PhotonMode, TransitionLine};
use crate::specfun::GaussianDelta;

/// Relative tolerance on `κ_a = x₀` for the matrix element to be on shell.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-9;

/// Photon transverse momenta allowed once the atom's transverse momentum is
/// fixed: the circle `(κ_x + κ_b)² + κ_y² = κ_a²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingGeometry {
    pub center_x: f64,
    pub center_y: f64,
    pub radius: f64,
}

impl RingGeometry {
    /// `(κ_x − c_x)² + (κ_y − c_y)² − r²`.
    pub fn residual(&self, kappa_x: f64, kappa_y: f64) -> f64 {
        let dx = kappa_x - self.center_x;
        let dy = kappa_y - self.center_y;
        dx * dx + dy * dy - self.radius * self.radius
    }
}

/// A small atom detector accepting transverse momenta `κ_b ± Δκ_b/2` at azimuth `φ_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorWindow {
    kappa_b: f64,
    d_kappa_b: f64,
    phi_b: f64,
}

impl DetectorWindow {
    /// Requires `0 < Δκ_b < 0.1 κ_b`.
    pub fn new(kappa_b: f64, d_kappa_b: f64, phi_b: f64) -> Result<Self> {
        if !(kappa_b.is_finite() && d_kappa_b.is_finite() && phi_b.is_finite()) {
            return Err(Error::Config(
                "detector window parameters must be finite".into(),
            ));
        }
        if !(d_kappa_b > 0.0 && d_kappa_b < 0.1 * kappa_b) {
            return Err(Error::Config(format!(
                "detector window needs 0 < d_kappa_b < 0.1 kappa_b, got kappa_b = {kappa_b}, d_kappa_b = {d_kappa_b}"
            )));
        }
        Ok(Self {
            kappa_b,
            d_kappa_b,
            phi_b: phi_b.rem_euclid(TAU),
        })
    }

    pub fn kappa_b(&self) -> f64 {
        self.kappa_b
    }

    pub fn d_kappa_b(&self) -> f64 {
        self.d_kappa_b
    }

    pub fn phi_b(&self) -> f64 {
        self.phi_b
    }
}

/// On-shell twisted → plane-wave center-of-mass amplitude, delta factors excluded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwPwAmplitude {
    /// `(2π)^{3/2} / √(4 E_a E_b κ_a)`.
    pub magnitude: f64,
    /// `m_a φ_{x₀}` reduced to `[0, 2π)`.
    pub phase: f64,
}

fn transverse_kappa(beam: &BeamState) -> Result<f64> {
    if beam.kind() != BeamKind::Twisted {
        return Err(Error::Config(
            "the coincidence channel needs a twisted beam".into(),
        ));
    }
    let kappa_a = beam.transverse_momentum();
    if kappa_a > 0.0 {
        Ok(kappa_a)
    } else {
        Err(Error::DegenerateBeam(
            "twisted beam has zero transverse momentum".into(),
        ))
    }
}

/// `x₀ = κ_p + κ_b` as a transverse vector.
fn x0_vector(kappa_b: f64, phi_b: f64, photon: &PhotonMode) -> (f64, f64) {
    let kp = photon.kappa();
    let (sp, cp) = photon.phi().sin_cos();
    let (sb, cb) = phi_b.sin_cos();
    (kp * cp + kappa_b * cb, kp * sp + kappa_b * sb)
}

fn final_energy(beam: &BeamState, kappa_b: f64, photon: &PhotonMode) -> Result<f64> {
    let pz_b = beam.longitudinal_momentum() - photon.k_z();
    let e_b = (kappa_b * kappa_b + pz_b * pz_b) / (2.0 * beam.mass());
    if e_b > 0.0 {
        Ok(e_b)
    } else {
        Err(Error::SingularKinematics("final atom is at rest".into()))
    }
}

/// Amplitude for a detected plane-wave atom with transverse momentum `κ_b` at `φ_b`.
///
/// `None` unless the radial constraint `κ_a = |κ_p + κ_b|` holds. The OAM
/// projection enters the phase only.
pub fn tw_pw_matrix_element(
    beam: &BeamState,
    kappa_b: f64,
    phi_b: f64,
    photon: &PhotonMode,
) -> Result<Option<TwPwAmplitude>> {
    let kappa_a = transverse_kappa(beam)?;
    if !(kappa_b.is_finite() && kappa_b >= 0.0 && phi_b.is_finite()) {
        return Err(Error::Domain(format!(
            "invalid final transverse momentum {kappa_b} at {phi_b}"
        )));
    }
    let (x, y) = x0_vector(kappa_b, phi_b, photon);
    let x0 = x.hypot(y);
    if (kappa_a - x0).abs() > CONSTRAINT_TOLERANCE * kappa_a {
        return Ok(None);
    }
    let e_a = beam.energy();
    let e_b = final_energy(beam, kappa_b, photon)?;
    let magnitude = TAU.powf(1.5) / (4.0 * e_a * e_b * kappa_a).sqrt();
    let phase = (f64::from(beam.oam()) * y.atan2(x)).rem_euclid(TAU);
    Ok(Some(TwPwAmplitude { magnitude, phase }))
}

/// Non-negative roots of `κ_p² + 2κ_bκ_p cos φ_p + κ_b² − κ_a² = 0`, ascending.
pub fn allowed_kappa_p(kappa_a: f64, kappa_b: f64, phi_p: f64) -> Vec<f64> {
    let (s, c) = phi_p.sin_cos();
    let h = kappa_b * c;
    let reach = kappa_a * kappa_a - (kappa_b * s).powi(2);
    if !(reach >= 0.0) {
        return Vec::new();
    }
    let root = reach.sqrt();
    // roots −h ± √reach; form the larger-magnitude one first to avoid cancellation
    let q = -(h + root.copysign(h));
    let product = (kappa_b - kappa_a) * (kappa_b + kappa_a);
    let mut roots = if q == 0.0 {
        vec![0.0]
    } else {
        vec![q, product / q]
    };
    roots.retain(|r| *r >= 0.0);
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    roots
}

pub fn ring_geometry(kappa_a: f64, kappa_b: f64) -> Result<RingGeometry> {
    if !(kappa_a.is_finite() && kappa_a > 0.0) {
        return Err(Error::DegenerateBeam(format!(
            "ring radius must be positive, got {kappa_a}"
        )));
    }
    if !kappa_b.is_finite() {
        return Err(Error::Domain(format!(
            "ring displacement must be finite, got {kappa_b}"
        )));
    }
    Ok(RingGeometry {
        center_x: -kappa_b,
        center_y: 0.0,
        radius: kappa_a,
    })
}

/// `n` points on the ring, uniform in angle, starting at angle zero.
pub fn sample_ring(geometry: &RingGeometry, n: usize) -> Result<Vec<(f64, f64)>> {
    if n == 0 {
        return Err(Error::Config(
            "ring sampling needs at least one point".into(),
        ));
    }
    Ok((0..n)
        .map(|k| {
            let (s, c) = (TAU * k as f64 / n as f64).sin_cos();
            (
                geometry.center_x + geometry.radius * c,
                geometry.center_y + geometry.radius * s,
            )
        })
        .collect())
}

/// Reduced coincidence density per `dω dΩ` for a photon and an atom in `window`.
///
/// The radial delta `δ(κ_a − x₀)` is a Gaussian of width `Δκ_b`; the box
/// regulators `L_z/2π` and `R/π` are dropped.
pub fn coincidence_density(
    beam: &BeamState,
    line: &TransitionLine,
    window: &DetectorWindow,
    photon: &PhotonMode,
    delta: &GaussianDelta,
) -> Result<f64> {
    let kappa_a = transverse_kappa(beam)?;
    let kappa_b = window.kappa_b();
    let (x, y) = x0_vector(kappa_b, window.phi_b(), photon);
    let x0 = x.hypot(y);
    let e_a = beam.energy();
    let e_b = final_energy(beam, kappa_b, photon)?;
    let omega = photon.omega();
    let energy_argument = line.eps_a + e_a - line.eps_b - e_b - omega;
    let w = window.d_kappa_b();
    let radial = (-0.5 * ((kappa_a - x0) / w).powi(2)).exp() / ((2.0 * PI).sqrt() * w);
    let phase_space = 0.5 * omega;
    let prefactor = line.se2 / (TAU * TAU) / (2.0 * e_a);
    Ok(
        prefactor * phase_space * delta.eval(energy_argument) * radial / kappa_a
            * TAU
            * kappa_b
            * w
            / (2.0 * e_b),
    )
}
