//! Center-of-mass, photon and transition kinematics in natural units (ħ = c = 1).

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};

/// Slack allowed on arccos arguments before they are treated as inconsistent.
pub const ARCCOS_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BeamKind {
    PlaneWave,
    Twisted,
}

/// Center-of-mass state of the atom.
///
/// A twisted (Bessel) state is a cone of plane waves with opening angle
/// `θ_a`, so its momentum splits into `P_z = P cos θ_a` and `κ = P sin θ_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamState {
    kind: BeamKind,
    mass: f64,
    momentum: f64,
    opening_angle: f64,
    oam: i32,
}

impl BeamState {
    pub fn plane_wave(mass: f64, momentum: f64) -> Result<Self> {
        Self::checked(BeamKind::PlaneWave, mass, momentum, 0.0, 0)
    }

    pub fn twisted(mass: f64, momentum: f64, opening_angle: f64, oam: i32) -> Result<Self> {
        Self::checked(BeamKind::Twisted, mass, momentum, opening_angle, oam)
    }

    fn checked(
        kind: BeamKind,
        mass: f64,
        momentum: f64,
        opening_angle: f64,
        oam: i32,
    ) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::Config(format!("mass must be positive, got {mass}")));
        }
        if !(momentum.is_finite() && momentum >= 0.0) {
            return Err(Error::Config(format!(
                "momentum must be non-negative, got {momentum}"
            )));
        }
        if !(opening_angle.is_finite() && (0.0..FRAC_PI_2).contains(&opening_angle)) {
            return Err(Error::Config(format!(
                "opening angle must lie in [0, π/2), got {opening_angle}"
            )));
        }
        Ok(Self {
            kind,
            mass,
            momentum,
            opening_angle,
            oam,
        })
    }

    pub fn kind(&self) -> BeamKind {
        self.kind
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Total momentum magnitude `P`.
    pub fn momentum(&self) -> f64 {
        self.momentum
    }

    pub fn opening_angle(&self) -> f64 {
        self.opening_angle
    }

    /// Angular momentum projection; carries no weight for plane waves.
    pub fn oam(&self) -> i32 {
        self.oam
    }

    pub fn longitudinal_momentum(&self) -> f64 {
        self.momentum * self.opening_angle.cos()
    }

    pub fn transverse_momentum(&self) -> f64 {
        self.momentum * self.opening_angle.sin()
    }

    pub fn energy(&self) -> f64 {
        beam_energy(self)
    }

    /// Plane-wave beam with the same mass and total momentum, directed along z.
    pub fn plane_wave_equivalent(&self) -> Self {
        Self {
            kind: BeamKind::PlaneWave,
            opening_angle: 0.0,
            oam: 0,
            ..*self
        }
    }
}

/// Kinetic energy of the center of mass, `P²/(2M) = (κ² + P_z²)/(2M)`.
pub fn beam_energy(beam: &BeamState) -> f64 {
    beam.momentum * beam.momentum / (2.0 * beam.mass)
}

/// Electronic emission line `a → b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionLine {
    pub eps_a: f64,
    pub eps_b: f64,
    /// Squared electron matrix element; a constant weight.
    pub se2: f64,
}

impl TransitionLine {
    pub fn new(eps_a: f64, eps_b: f64, se2: f64) -> Result<Self> {
        if !(eps_a.is_finite() && eps_b.is_finite() && eps_a > eps_b) {
            return Err(Error::Config(format!(
                "emission line needs eps_a > eps_b, got {eps_a} and {eps_b}"
            )));
        }
        if !(se2.is_finite() && se2 >= 0.0) {
            return Err(Error::Config(format!(
                "|S_e|² must be non-negative, got {se2}"
            )));
        }
        Ok(Self { eps_a, eps_b, se2 })
    }

    /// Line with `eps_b = 0` whose spacing exceeds `omega` by `detuning`.
    pub fn from_detuning(detuning: f64, omega: f64, se2: f64) -> Result<Self> {
        Self::new(detuning + omega, 0.0, se2)
    }

    pub fn spacing(&self) -> f64 {
        self.eps_a - self.eps_b
    }

    /// `ε_a − ε_b − ω`.
    pub fn detuning(&self, omega: f64) -> f64 {
        self.spacing() - omega
    }
}

/// Emitted photon with wave vector split into `k_z = ω cos θ` and `κ_p = ω sin θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonMode {
    omega: f64,
    theta: f64,
    phi: f64,
}

impl PhotonMode {
    /// `phi` is wrapped into `[0, 2π)`.
    pub fn new(omega: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::Config(format!(
                "photon energy must be positive, got {omega}"
            )));
        }
        if !(theta.is_finite() && (0.0..=PI).contains(&theta)) {
            return Err(Error::Config(format!(
                "polar angle must lie in [0, π], got {theta}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::Config(format!("azimuth must be finite, got {phi}")));
        }
        let phi = phi.rem_euclid(TAU);
        Ok(Self { omega, theta, phi })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn k_z(&self) -> f64 {
        self.omega * self.theta.cos()
    }

    pub fn kappa(&self) -> f64 {
        self.omega * self.theta.sin()
    }
}

/// Area and phases of a valid transverse-momentum triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleShape {
    pub area: f64,
    pub delta_b: f64,
    pub delta_x: f64,
}

/// The triangle `(κ_a, κ_b, κ_p)`; `shape` is `None` when the triangle inequality fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleGeom {
    pub kappa_a: f64,
    pub kappa_b: f64,
    pub kappa_p: f64,
    pub shape: Option<TriangleShape>,
}

impl TriangleGeom {
    pub fn is_valid(&self) -> bool {
        self.shape.is_some()
    }

    /// Valid with strictly positive area.
    pub fn is_proper(&self) -> bool {
        self.shape.is_some_and(|s| s.area > 0.0)
    }
}

/// Build the momentum triangle.
///
/// `Δ = ¼ √(4κ_b²κ_p² − (κ_a² − κ_b² − κ_p²)²)`, evaluated as the product
/// `((κ_b + κ_p)² − κ_a²)(κ_a² − (κ_b − κ_p)²)` to keep precision near
/// degeneracy. `δ_b` and `δ_x` are reported in `[0, π]`.
pub fn make_triangle(kappa_a: f64, kappa_b: f64, kappa_p: f64) -> Result<TriangleGeom> {
    for (name, v) in [
        ("kappa_a", kappa_a),
        ("kappa_b", kappa_b),
        ("kappa_p", kappa_p),
    ] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::Domain(format!(
                "{name} must be finite and non-negative, got {v}"
            )));
        }
    }
    let valid = (kappa_a - kappa_p).abs() <= kappa_b && kappa_b <= kappa_a + kappa_p;
    if !valid {
        return Ok(TriangleGeom {
            kappa_a,
            kappa_b,
            kappa_p,
            shape: None,
        });
    }
    let (a2, b2, p2) = (kappa_a * kappa_a, kappa_b * kappa_b, kappa_p * kappa_p);
    let sum = kappa_b + kappa_p;
    let diff = kappa_b - kappa_p;
    let sixteen_area_sq = (sum - kappa_a) * (sum + kappa_a) * (kappa_a - diff) * (kappa_a + diff);
    let area = 0.25 * sixteen_area_sq.max(0.0).sqrt();

    let delta_b = phase(a2 - b2 - p2, 2.0 * kappa_b * kappa_p, "delta_b")?;
    let delta_x = phase(a2 + p2 - b2, 2.0 * kappa_a * kappa_p, "delta_x")?;
    Ok(TriangleGeom {
        kappa_a,
        kappa_b,
        kappa_p,
        shape: Some(TriangleShape {
            area,
            delta_b,
            delta_x,
        }),
    })
}

fn phase(num: f64, den: f64, name: &str) -> Result<f64> {
    if den == 0.0 {
        // a zero-length side leaves the angle undefined; the triangle is degenerate anyway
        return Ok(0.0);
    }
    let c = num / den;
    if c.abs() > 1.0 + ARCCOS_CLAMP {
        return Err(Error::Consistency(format!(
            "{name}: arccos argument {c} outside [-1, 1] for a valid triangle"
        )));
    }
    Ok(c.clamp(-1.0, 1.0).acos())
}

/// Final center-of-mass state fixed by energy and longitudinal momentum conservation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoilState {
    pub kappa_b: f64,
    pub energy: f64,
}

/// `κ̃_b² = 2M(ε_a − ε_b − ω) + P_a² − (P_z,a − ω cos θ_p)²`, possibly negative.
pub fn recoil_kappa_sq(beam: &BeamState, line: &TransitionLine, omega: f64, theta_p: f64) -> f64 {
    let pz_b = beam.longitudinal_momentum() - omega * theta_p.cos();
    2.0 * beam.mass * line.detuning(omega) + beam.momentum * beam.momentum - pz_b * pz_b
}

/// Recoil kinematics, or `None` when the channel is closed (`κ̃_b² < 0`).
pub fn recoil_state(
    beam: &BeamState,
    line: &TransitionLine,
    photon: &PhotonMode,
) -> Option<RecoilState> {
    let kappa_sq = recoil_kappa_sq(beam, line, photon.omega, photon.theta);
    if kappa_sq < 0.0 {
        return None;
    }
    let pz_b = beam.longitudinal_momentum() - photon.k_z();
    Some(RecoilState {
        kappa_b: kappa_sq.sqrt(),
        energy: (kappa_sq + pz_b * pz_b) / (2.0 * beam.mass),
    })
}

/// Polar angle where the plane-wave energy-conservation argument
/// `ε_a − ε_b − ω + P_z ω cos θ / M − ω²/(2M)` vanishes.
pub fn theta_pw(beam: &BeamState, line: &TransitionLine, omega: f64) -> Result<f64> {
    let pz = beam.longitudinal_momentum();
    let m = beam.mass;
    let cosine = m * (omega * omega / (2.0 * m) - line.detuning(omega)) / (pz * omega);
    if !cosine.is_finite() || cosine.abs() > 1.0 {
        return Err(Error::NoPeak { cosine });
    }
    Ok(cosine.acos())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_line() -> TransitionLine {
        TransitionLine::from_detuning(1e-3, 0.1, 1.0).unwrap()
    }

    #[test]
    fn right_triangle() {
        let t = make_triangle(5.0, 4.0, 3.0).unwrap();
        let s = t.shape.unwrap();
        assert!((s.area - 6.0).abs() < 1e-12);
        assert!((s.delta_b - FRAC_PI_2).abs() < 1e-12);
        assert!((s.delta_x - 0.6f64.acos()).abs() < 1e-12);
        assert!((s.delta_x - 0.927_295).abs() < 1e-6);
    }

    #[test]
    fn collinear_is_valid_and_flat() {
        let t = make_triangle(2.0, 1.0, 1.0).unwrap();
        assert!(t.is_valid());
        assert!(!t.is_proper());
        assert_eq!(t.shape.unwrap().area, 0.0);
    }

    #[test]
    fn inequality_violation() {
        let t = make_triangle(5.0, 1.0, 1.0).unwrap();
        assert!(!t.is_valid());
    }

    #[test]
    fn triangle_rejects_negative_sides() {
        assert!(make_triangle(-1.0, 1.0, 1.0).is_err());
        assert!(make_triangle(1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn beam_energy_ignores_opening_angle() {
        let tw = BeamState::twisted(1.0, 1.0, PI / 6.0, 2).unwrap();
        assert!((beam_energy(&tw) - 0.5).abs() < 1e-15);
        let pw = BeamState::plane_wave(1.0, 1.0).unwrap();
        assert_eq!(beam_energy(&pw), 0.5);
        assert_eq!(beam_energy(&BeamState::plane_wave(1.0, 0.0).unwrap()), 0.0);
    }

    #[test]
    fn momentum_split_is_pythagorean() {
        let b = BeamState::twisted(2.0, 1.7, 0.9, 0).unwrap();
        let (pz, k) = (b.longitudinal_momentum(), b.transverse_momentum());
        assert!(((pz * pz + k * k) - 1.7 * 1.7).abs() < 1e-14 * 1.7 * 1.7);
        assert_eq!(b.plane_wave_equivalent().opening_angle(), 0.0);
    }

    #[test]
    fn beam_validation() {
        assert!(BeamState::plane_wave(0.0, 1.0).is_err());
        assert!(BeamState::plane_wave(1.0, -1.0).is_err());
        assert!(BeamState::twisted(1.0, 1.0, FRAC_PI_2, 0).is_err());
    }

    #[test]
    fn photon_components() {
        let p = PhotonMode::new(0.1, 1.2, -0.5).unwrap();
        assert!((p.k_z().powi(2) + p.kappa().powi(2) - 0.01).abs() < 1e-14 * 0.01);
        assert!((p.phi() - (TAU - 0.5)).abs() < 1e-15);
        assert!(PhotonMode::new(0.1, 3.5, 0.0).is_err());
        assert!(PhotonMode::new(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn theta_pw_examples() {
        let line = reference_line();
        let pw = BeamState::plane_wave(1.0, 1.0).unwrap();
        let t = theta_pw(&pw, &line, 0.1).unwrap();
        assert!((t - 0.04f64.acos()).abs() < 1e-12);
        assert!((t - 1.530_786).abs() < 1e-6);

        let tw = BeamState::twisted(1.0, 1.0, PI / 6.0, 0).unwrap();
        let t = theta_pw(&tw, &line, 0.1).unwrap();
        assert!((t.cos() - 0.04 / (PI / 6.0).cos()).abs() < 1e-12);
        assert!((t - 1.524_592).abs() < 1e-6);

        // detuning equal to the recoil shift puts the peak at π/2
        let line = TransitionLine::from_detuning(0.005, 0.1, 1.0).unwrap();
        assert!((theta_pw(&pw, &line, 0.1).unwrap() - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn theta_pw_residual_vanishes() {
        let line = reference_line();
        let pw = BeamState::plane_wave(1.0, 1.0).unwrap();
        let t = theta_pw(&pw, &line, 0.1).unwrap();
        let residual = line.detuning(0.1) + 1.0 * 0.1 * t.cos() - 0.01 / 2.0;
        assert!(residual.abs() < 1e-12);
    }

    #[test]
    fn theta_pw_out_of_range() {
        let line = TransitionLine::from_detuning(0.5, 0.1, 1.0).unwrap();
        let pw = BeamState::plane_wave(1.0, 1.0).unwrap();
        assert!(matches!(
            theta_pw(&pw, &line, 0.1),
            Err(Error::NoPeak { .. })
        ));
    }

    #[test]
    fn recoil_without_photon_keeps_transverse_momentum() {
        let beam = BeamState::twisted(1.0, 1.0, PI / 6.0, 0).unwrap();
        let omega = 1e-9;
        let line = TransitionLine::from_detuning(0.0, omega, 1.0).unwrap();
        let photon = PhotonMode::new(omega, 0.7, 0.0).unwrap();
        let r = recoil_state(&beam, &line, &photon).unwrap();
        assert!((r.kappa_b - beam.transverse_momentum()).abs() < 1e-8);
        assert!((r.energy - beam.energy()).abs() < 1e-8);
    }

    #[test]
    fn recoil_at_the_peak_lies_in_the_triangle_window() {
        let beam = BeamState::twisted(1.0, 1.0, PI / 6.0, 0).unwrap();
        let line = reference_line();
        let theta = theta_pw(&beam.plane_wave_equivalent(), &line, 0.1).unwrap();
        let photon = PhotonMode::new(0.1, theta, 0.0).unwrap();
        let r = recoil_state(&beam, &line, &photon).unwrap();
        let (ka, kp) = (beam.transverse_momentum(), photon.kappa());
        let k2 = r.kappa_b * r.kappa_b;
        assert!(k2 >= (ka - kp).powi(2) && k2 <= (ka + kp).powi(2));
        // final energy is the initial one shifted by the detuning
        assert!((r.energy - (beam.energy() + line.detuning(0.1))).abs() < 1e-14);
    }

    #[test]
    fn closed_channel() {
        // large negative detuning: no recoil momentum can conserve energy
        let beam = BeamState::twisted(1.0, 1.0, 0.3, 0).unwrap();
        let line = TransitionLine::new(0.1, 0.0, 1.0).unwrap();
        let omega = 0.099;
        let photon = PhotonMode::new(omega, PI, 0.0).unwrap();
        // κ̃² = 2(0.001) + 1 − (P_z + ω)² < 0
        assert!(recoil_kappa_sq(&beam, &line, omega, PI) < 0.0);
        assert!(recoil_state(&beam, &line, &photon).is_none());
    }
}
