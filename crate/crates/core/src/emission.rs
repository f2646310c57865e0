//! Reduced photon emission densities `dw_r/(dω dΩ)` for plane-wave and twisted
//! centers of mass, angular scans over the photon polar angle, and peak extraction.
//!
//! All densities are independent of the photon azimuth, so none of the
//! functions take one. Overall volume regulators are dropped; the relative
//! `(2π)²` between the plane-wave and twisted channels is kept.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::kinematics::{
    recoil_kappa_sq, theta_pw, BeamKind, BeamState, TransitionLine, TriangleGeom,
};
use crate::quadrature::{integrate_hinted, Hints, QuadratureConfig, Spike};
use crate::specfun::GaussianDelta;

/// Relative width of the band around a triangle-domain edge treated as "on" the edge.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Peaks are strict local maxima above this fraction of the scan maximum.
pub const PEAK_THRESHOLD: f64 = 0.5;

/// Everything that fixes an angular scan at one photon energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionProblem {
    pub beam: BeamState,
    pub line: TransitionLine,
    pub omega: f64,
    pub delta: GaussianDelta,
}

impl EmissionProblem {
    /// Validates that at least one photon direction leaves `κ̃_b² ≥ 0`.
    pub fn new(
        beam: BeamState,
        line: TransitionLine,
        omega: f64,
        delta: GaussianDelta,
    ) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::Config(format!(
                "photon energy must be positive, got {omega}"
            )));
        }
        // κ̃_b² is largest where (P_z − ω cos θ)² is smallest
        let pz = beam.longitudinal_momentum();
        let closest = (pz.abs() - omega).max(0.0);
        let best =
            2.0 * beam.mass() * line.detuning(omega) + beam.momentum().powi(2) - closest * closest;
        if best < 0.0 {
            return Err(Error::Config(format!(
                "no photon direction conserves energy at omega = {omega} (max κ̃_b² = {best:e})"
            )));
        }
        Ok(Self {
            beam,
            line,
            omega,
            delta,
        })
    }

    /// The synthetic reference set: `P = 1`, `ω = 0.1`, `M = 1`,
    /// `ε_a − ε_b − ω = 10⁻³`, `θ_a = π/6`, `σ_E = 5·10⁻⁴`.
    pub fn reference() -> Self {
        let beam = BeamState::twisted(1.0, 1.0, PI / 6.0, 0).expect("reference beam");
        let line = TransitionLine::from_detuning(1e-3, 0.1, 1.0).expect("reference line");
        let delta = GaussianDelta::new(5e-4).expect("reference width");
        Self::new(beam, line, 0.1, delta).expect("reference problem")
    }

    pub fn detuning(&self) -> f64 {
        self.line.detuning(self.omega)
    }

    /// Same problem with the plane-wave beam of equal total momentum.
    pub fn plane_wave_counterpart(&self) -> Self {
        Self {
            beam: self.beam.plane_wave_equivalent(),
            ..*self
        }
    }

    pub fn with_beam(&self, beam: BeamState) -> Result<Self> {
        Self::new(beam, self.line, self.omega, self.delta)
    }

    /// Plane-wave emission peak `θ_p^PW` for a beam of this total momentum.
    pub fn peak_angle(&self) -> Result<f64> {
        theta_pw(&self.beam.plane_wave_equivalent(), &self.line, self.omega)
    }

    /// Polar angles where the twisted density is discontinuous, `θ_p^PW ∓ θ_a`.
    ///
    /// Empty for plane-wave beams.
    pub fn discontinuities(&self) -> Result<Vec<f64>> {
        if self.beam.kind() == BeamKind::PlaneWave {
            return Ok(Vec::new());
        }
        let center = self.peak_angle()?;
        let theta_a = self.beam.opening_angle();
        Ok([center - theta_a, center + theta_a]
            .into_iter()
            .filter(|t| (0.0..=PI).contains(t))
            .collect())
    }
}

fn require_kind(p: &EmissionProblem, kind: BeamKind) -> Result<()> {
    if p.beam.kind() != kind {
        return Err(Error::Config(format!(
            "density requires a {kind:?} beam, got {:?}",
            p.beam.kind()
        )));
    }
    Ok(())
}

fn initial_energy(p: &EmissionProblem) -> Result<f64> {
    let e = p.beam.energy();
    if e > 0.0 {
        Ok(e)
    } else {
        Err(Error::SingularKinematics(
            "initial center-of-mass energy is zero".into(),
        ))
    }
}

/// Plane-wave → plane-wave density per `dω dΩ`, with the energy delta
/// replaced by the Gaussian.
pub fn planewave_density(p: &EmissionProblem, theta_p: f64) -> Result<f64> {
    require_kind(p, BeamKind::PlaneWave)?;
    let e_a = initial_energy(p)?;
    let (m, w, pz) = (p.beam.mass(), p.omega, p.beam.longitudinal_momentum());
    let c = theta_p.cos();
    let argument = p.detuning() + pz * w * c / m - w * w / (2.0 * m);
    let final_energy = pz * pz / (2.0 * m) - pz * w * c / m + w * w / (2.0 * m);
    if !(final_energy > 0.0) {
        return Err(Error::SingularKinematics(format!(
            "final energy factor {final_energy:e} at theta = {theta_p}"
        )));
    }
    let prefactor = p.line.se2 / (TAU * TAU) / (8.0 * e_a);
    Ok(prefactor * p.delta.eval(argument) / final_energy * w)
}

/// Squared edges `(κ_a − κ_p)²`, `(κ_a + κ_p)²` of the allowed `κ_b²` window.
fn window_sq(kappa_a: f64, kappa_p: f64) -> (f64, f64) {
    ((kappa_a - kappa_p).powi(2), (kappa_a + kappa_p).powi(2))
}

/// Closed-form master integral `I₁ = 4M / (Ẽ_b √(4κ̃_b²κ_p² − (κ_a² − κ̃_b² − κ_p²)²))`.
///
/// Zero when `κ̃_b²` lies outside the triangle window; a singular-geometry
/// error on its edges.
pub fn master_integral_exact(p: &EmissionProblem, theta_p: f64) -> Result<f64> {
    require_kind(p, BeamKind::Twisted)?;
    let m = p.beam.mass();
    let kappa_a = p.beam.transverse_momentum();
    let kappa_p = p.omega * theta_p.sin();
    let k2 = recoil_kappa_sq(&p.beam, &p.line, p.omega, theta_p);
    let (lower, upper) = window_sq(kappa_a, kappa_p);
    let tol = BOUNDARY_TOLERANCE * upper.max(f64::MIN_POSITIVE);
    if (k2 - lower).abs() <= tol || (k2 - upper).abs() <= tol {
        return Err(Error::SingularGeometry(format!(
            "theta = {theta_p} sits on the triangle-domain edge"
        )));
    }
    if k2 < lower || k2 > upper {
        return Ok(0.0);
    }
    let pz_b = p.beam.longitudinal_momentum() - p.omega * theta_p.cos();
    let e_b = (k2 + pz_b * pz_b) / (2.0 * m);
    if !(e_b > 0.0) {
        return Err(Error::SingularKinematics(format!(
            "final energy {e_b:e} at theta = {theta_p}"
        )));
    }
    // 4κ̃²κ_p² − (κ_a² − κ̃² − κ_p²)² = (upper − κ̃²)(κ̃² − lower)
    Ok(4.0 * m / (e_b * ((upper - k2) * (k2 - lower)).sqrt()))
}

/// Master integral evaluated by quadrature over `κ_b ∈ [|κ_a − κ_p|, κ_a + κ_p]`.
pub fn master_integral_quad(p: &EmissionProblem, theta_p: f64) -> Result<f64> {
    master_integral_quad_with(p, theta_p, &QuadratureConfig::default())
}

pub fn master_integral_quad_with(
    p: &EmissionProblem,
    theta_p: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    require_kind(p, BeamKind::Twisted)?;
    let m = p.beam.mass();
    let e_a = p.beam.energy();
    let detuning = p.detuning();
    let kappa_a = p.beam.transverse_momentum();
    let kappa_p = p.omega * theta_p.sin();
    let lo = (kappa_a - kappa_p).abs();
    let hi = kappa_a + kappa_p;
    if !(hi > lo) {
        return Ok(0.0);
    }
    let pz_b = p.beam.longitudinal_momentum() - p.omega * theta_p.cos();
    let pz_term = pz_b * pz_b;
    let integrand = |kb: f64| {
        let e_b = (kb * kb + pz_term) / (2.0 * m);
        // 4κ_b²κ_p² − (κ_a² − κ_b² − κ_p²)², factored around the window edges
        let product = (hi - kb) * (hi + kb) * (kb - lo) * (kb + lo);
        4.0 * p.delta.eval(detuning + e_a - e_b) * kb / (e_b * product.sqrt())
    };
    let k2 = recoil_kappa_sq(&p.beam, &p.line, p.omega, theta_p);
    let spike = (k2 > 0.0).then(|| {
        let center = k2.sqrt();
        Spike {
            center,
            width: m * p.delta.sigma() / center,
        }
    });
    let hints = Hints {
        spike,
        singular_start: true,
        singular_end: true,
    };
    Ok(integrate_hinted(integrand, lo, hi, &hints, cfg)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MasterIntegralMode {
    Exact,
    Quadrature,
}

/// Twisted → (undetected) twisted density per `dω dΩ`:
/// `|S_e|²/(2π)⁴ · 1/(8E_a) · I₁/(2π) · ω`. Independent of the OAM projection.
pub fn twisted_density(p: &EmissionProblem, theta_p: f64, mode: MasterIntegralMode) -> Result<f64> {
    require_kind(p, BeamKind::Twisted)?;
    let e_a = initial_energy(p)?;
    let i1 = match mode {
        MasterIntegralMode::Exact => master_integral_exact(p, theta_p)?,
        MasterIntegralMode::Quadrature => master_integral_quad(p, theta_p)?,
    };
    let prefactor = p.line.se2 / TAU.powi(4) / (8.0 * e_a);
    Ok(prefactor * i1 / TAU * p.omega)
}

/// `(2π)² · twisted (quadrature) / plane-wave` at one angle; tends to one as `θ_a → 0`.
pub fn plane_wave_limit_ratio(p: &EmissionProblem, theta_p: f64) -> Result<f64> {
    let tw = twisted_density(p, theta_p, MasterIntegralMode::Quadrature)?;
    let pw = planewave_density(&p.plane_wave_counterpart(), theta_p)?;
    Ok(TAU * TAU * tw / pw)
}

/// Angular-geometric factor `[1 + cos(2m_aδ_x − 2m_bδ_b)] κ_b/(4Δ)` of the
/// fully differential twisted → twisted probability.
pub fn twisted_pair_weight(m_a: i32, m_b: i32, tri: &TriangleGeom) -> Result<f64> {
    let Some(shape) = tri.shape else {
        return Err(Error::Domain(format!(
            "triangle ({}, {}, {}) violates the triangle inequality",
            tri.kappa_a, tri.kappa_b, tri.kappa_p
        )));
    };
    if shape.area == 0.0 {
        return Err(Error::SingularGeometry(
            "pair weight on a degenerate triangle".into(),
        ));
    }
    let phase = 2.0 * f64::from(m_a) * shape.delta_x - 2.0 * f64::from(m_b) * shape.delta_b;
    Ok((1.0 + phase.cos()) * tri.kappa_b / (4.0 * shape.area))
}

/// Plane-wave points at or above this normalized density form the limit-comparison grid.
pub const LIMIT_SAFE_LEVEL: f64 = 0.5;

/// Largest `|(2π)² tw/pw − 1|` over grid points where the normalized plane-wave
/// density is at least [`LIMIT_SAFE_LEVEL`]. `None` if no point qualifies.
pub fn max_limit_deviation(p: &EmissionProblem, grid: &[f64]) -> Result<Option<f64>> {
    let pw_problem = p.plane_wave_counterpart();
    let pw = grid
        .iter()
        .map(|&t| planewave_density(&pw_problem, t))
        .collect::<Result<Vec<_>>>()?;
    let top = pw.iter().copied().fold(0.0_f64, f64::max);
    if !(top > 0.0) {
        return Ok(None);
    }
    let mut worst: Option<f64> = None;
    for (&t, &v) in grid.iter().zip(&pw) {
        if v < LIMIT_SAFE_LEVEL * top {
            continue;
        }
        let tw = twisted_density(p, t, MasterIntegralMode::Quadrature)?;
        let dev = (TAU * TAU * tw / v - 1.0).abs();
        worst = Some(worst.map_or(dev, |w| w.max(dev)));
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    PlaneWave,
    TwistedExact,
    TwistedQuad,
}

impl Channel {
    pub fn name(self) -> &'static str {
        match self {
            Channel::PlaneWave => "planewave",
            Channel::TwistedExact => "twisted-exact",
            Channel::TwistedQuad => "twisted-quad",
        }
    }
}

/// Density of one channel at one angle. The plane-wave channel of a twisted
/// problem uses the plane-wave beam with the same total momentum.
pub fn channel_density(p: &EmissionProblem, channel: Channel, theta_p: f64) -> Result<f64> {
    match channel {
        Channel::PlaneWave => planewave_density(&p.plane_wave_counterpart(), theta_p),
        Channel::TwistedExact => twisted_density(p, theta_p, MasterIntegralMode::Exact),
        Channel::TwistedQuad => twisted_density(p, theta_p, MasterIntegralMode::Quadrature),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub thetas: Vec<f64>,
    /// Densities before normalization.
    pub raw: Vec<f64>,
    pub values: Vec<f64>,
    pub normalized: bool,
    pub peaks: Vec<f64>,
}

/// Evaluate a channel on a grid, normalize to the maximum and extract peaks.
pub fn scan(p: &EmissionProblem, channel: Channel, grid: &[f64]) -> Result<ScanResult> {
    validate_grid(grid)?;
    let raw = grid
        .iter()
        .map(|&t| channel_density(p, channel, t))
        .collect::<Result<Vec<_>>>()?;
    ScanResult::from_raw(grid.to_vec(), raw)
}

impl ScanResult {
    /// Normalize precomputed densities.
    pub fn from_raw(thetas: Vec<f64>, raw: Vec<f64>) -> Result<Self> {
        if thetas.len() != raw.len() {
            return Err(Error::Config(
                "angle and density columns differ in length".into(),
            ));
        }
        let max = raw.iter().copied().fold(0.0_f64, f64::max);
        if !(max > 0.0) {
            return Err(Error::EmptyChannel);
        }
        let values: Vec<f64> = raw.iter().map(|v| v / max).collect();
        let peaks = find_peaks(&thetas, &values, PEAK_THRESHOLD);
        Ok(Self {
            thetas,
            raw,
            values,
            normalized: true,
            peaks,
        })
    }
}

/// Interior strict local maxima whose value exceeds `threshold`.
pub fn find_peaks(thetas: &[f64], values: &[f64], threshold: f64) -> Vec<f64> {
    values
        .windows(3)
        .enumerate()
        .filter(|(_, w)| w[1] > threshold && w[1] > w[0] && w[1] > w[2])
        .map(|(i, _)| thetas[i + 1])
        .collect()
}

pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Config("empty angular grid".into()));
    }
    if grid.iter().any(|t| !(0.0..=PI).contains(t)) {
        return Err(Error::Config("grid angles must lie in [0, π]".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// `n` equally spaced angles from `min` to `max` inclusive.
pub fn uniform_grid(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Config(format!(
            "grid needs at least two points, got {n}"
        )));
    }
    if !(0.0 <= min && min < max && max <= PI) {
        return Err(Error::Config(format!(
            "grid range must satisfy 0 ≤ min < max ≤ π, got [{min}, {max}]"
        )));
    }
    let step = (max - min) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                max
            } else {
                min + step * i as f64
            }
        })
        .collect())
}

/// Push grid points lying within `inset` of a discontinuity out to exactly `inset` away,
/// on the side they were on.
pub fn apply_inset(grid: &[f64], discontinuities: &[f64], inset: f64) -> Vec<f64> {
    let mut out: Vec<f64> = grid
        .iter()
        .map(|&t| {
            discontinuities.iter().fold(t, |t, &d| {
                if (t - d).abs() < inset {
                    if t >= d {
                        d + inset
                    } else {
                        d - inset
                    }
                } else {
                    t
                }
            })
        })
        .map(|t| t.clamp(0.0, PI))
        .collect();
    out.dedup();
    out
}

/// Symmetric window of half-width `2θ_a` around `θ_p^PW`, clipped to `[0, π]`,
/// with points near the twisted discontinuities pushed out by `inset`.
///
/// Plane-wave beams use a half-width of 0.1 rad.
pub fn default_grid(p: &EmissionProblem, n: usize, inset: f64) -> Result<Vec<f64>> {
    let (min, max) = default_window(p)?;
    let grid = uniform_grid(min, max, n)?;
    Ok(apply_inset(&grid, &p.discontinuities()?, inset))
}

/// Range `θ_p^PW ± 2θ_a` (± 0.1 rad for plane-wave beams), clipped to `[0, π]`.
pub fn default_window(p: &EmissionProblem) -> Result<(f64, f64)> {
    let center = p.peak_angle()?;
    let half = match p.beam.kind() {
        BeamKind::Twisted if p.beam.opening_angle() > 0.0 => 2.0 * p.beam.opening_angle(),
        _ => 0.1,
    };
    Ok(((center - half).max(0.0), (center + half).min(PI)))
}

/// Angles at least `margin` away from every discontinuity.
pub fn safe_points(grid: &[f64], discontinuities: &[f64], margin: f64) -> Vec<f64> {
    grid.iter()
        .copied()
        .filter(|t| discontinuities.iter().all(|d| (t - d).abs() >= margin))
        .collect()
}
