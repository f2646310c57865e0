//! Self-check suite: every building block against an independent oracle.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use crate::emission::{
    max_limit_deviation, safe_points, twisted_density, uniform_grid, EmissionProblem,
    MasterIntegralMode,
};
use crate::error::Result;
use crate::kinematics::{make_triangle, BeamState, TriangleGeom};
use crate::quadrature::{integrate_hinted, Hints, QuadratureConfig, Spike};
use crate::specfun::{
    bessel_j, partial_sum_limit, triple_bessel_closed, triple_bessel_extrapolated, GaussianDelta,
    DEFAULT_DAMPINGS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Fast,
    Full,
}

/// Signature of the closed-form triple-Bessel integral, swappable for mutation testing.
pub type ClosedForm = fn(i32, i32, &TriangleGeom) -> Result<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckResult {
    fn new(name: &'static str, measured: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name,
            measured,
            tolerance,
            passed: measured.is_finite() && measured < tolerance,
            detail,
            seconds: 0.0,
        }
    }

    fn failed(name: &'static str, tolerance: f64, detail: String) -> Self {
        Self {
            name,
            measured: f64::NAN,
            tolerance,
            passed: false,
            detail,
            seconds: 0.0,
        }
    }
}

/// Closed-form triple-Bessel test cases `(m_a, m_b, (κ_a, κ_b, κ_p))`.
pub const TRIPLE_CASES: [(i32, i32, (f64, f64, f64)); 12] = [
    (0, 0, (5.0, 4.0, 3.0)),
    (1, 2, (5.0, 4.0, 3.0)),
    (0, 1, (2.0, 2.0, 2.0)),
    (2, -1, (5.0, 4.0, 3.0)),
    (3, 1, (3.0, 2.5, 1.7)),
    (1, 1, (2.0, 1.5, 1.0)),
    (0, 2, (1.2, 1.0, 0.8)),
    (-1, 1, (4.0, 3.0, 2.0)),
    (2, 2, (3.0, 3.0, 3.0)),
    (1, 0, (2.5, 2.0, 1.2)),
    (1, -2, (1.5, 2.5, 2.0)),
    (1, 0, (5.0, 1.0, 1.0)),
];

/// Absolute tolerance used where the closed form vanishes (outside the triangle domain).
pub const TRIPLE_ZERO_TOLERANCE: f64 = 1e-6;

/// Outcome of one closed-form versus damped-oracle comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleComparison {
    pub m_a: i32,
    pub m_b: i32,
    pub sides: (f64, f64, f64),
    pub closed: f64,
    pub oracle: f64,
    /// Relative error, or absolute error where the closed form is zero.
    pub error: f64,
}

pub fn compare_triple(
    m_a: i32,
    m_b: i32,
    sides: (f64, f64, f64),
    closed: ClosedForm,
) -> Result<TripleComparison> {
    let (ka, kb, kp) = sides;
    let tri = make_triangle(ka, kb, kp)?;
    let c = closed(m_a, m_b, &tri)?;
    let oracle = triple_bessel_extrapolated(m_a, m_b, ka, kb, kp, DEFAULT_DAMPINGS)?.limit;
    let error = if c == 0.0 {
        oracle.abs()
    } else {
        ((oracle - c) / c).abs()
    };
    Ok(TripleComparison {
        m_a,
        m_b,
        sides,
        closed: c,
        oracle,
        error,
    })
}

/// One integral of the quadrature honesty suite.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticCase {
    pub name: &'static str,
    pub f: fn(f64) -> f64,
    pub a: f64,
    pub b: f64,
    pub exact: f64,
    pub spike: Option<Spike>,
}

fn narrow_gaussian(x: f64) -> f64 {
    (-0.5 * (x / 1e-3).powi(2)).exp() / ((2.0 * PI).sqrt() * 1e-3)
}

/// Twenty integrals with known values, covering smooth, oscillatory,
/// endpoint-singular, kinked and spiked integrands.
pub fn analytic_suite() -> Vec<AnalyticCase> {
    let case = |name, f, a, b, exact| AnalyticCase {
        name,
        f,
        a,
        b,
        exact,
        spike: None,
    };
    let e = std::f64::consts::E;
    vec![
        case("x^2", |x| x * x, 0.0, 1.0, 1.0 / 3.0),
        case("sin", f64::sin, 0.0, PI, 2.0),
        case("exp", f64::exp, 0.0, 1.0, e - 1.0),
        case("x^-1/2", |x| 1.0 / x.sqrt(), 0.0, 1.0, 2.0),
        case("(1-x)^-1/2", |x| 1.0 / (1.0 - x).sqrt(), 0.0, 1.0, 2.0),
        case(
            "(x(1-x))^-1/2",
            |x| 1.0 / (x * (1.0 - x)).sqrt(),
            0.0,
            1.0,
            PI,
        ),
        case("ln", f64::ln, 0.0, 1.0, -1.0),
        case("1/(1+x^2)", |x| 1.0 / (1.0 + x * x), 0.0, 1.0, PI / 4.0),
        case(
            "cos 10x",
            |x| (10.0 * x).cos(),
            0.0,
            1.0,
            10f64.sin() / 10.0,
        ),
        case("x sin x", |x| x * x.sin(), 0.0, PI, PI),
        case("exp(-x^2)", |x| (-x * x).exp(), -10.0, 10.0, PI.sqrt()),
        case("1/x", |x| 1.0 / x, 1.0, e, 1.0),
        case("sqrt", f64::sqrt, 0.0, 1.0, 2.0 / 3.0),
        AnalyticCase {
            spike: Some(Spike {
                center: 0.0,
                width: 1e-3,
            }),
            ..case("narrow gaussian", narrow_gaussian, -1.0, 1.0, 1.0)
        },
        case("x^5-2x^3", |x| x.powi(5) - 2.0 * x.powi(3), -1.0, 2.0, 3.0),
        case("(1+x)^-2", |x| 1.0 / (1.0 + x).powi(2), 0.0, 9.0, 0.9),
        case("cos^2", |x| x.cos().powi(2), 0.0, TAU, PI),
        case(
            "exp(-x) sin x",
            |x| (-x).exp() * x.sin(),
            0.0,
            20.0,
            0.5 * (1.0 - (-20f64).exp() * (20f64.sin() + 20f64.cos())),
        ),
        case(
            "x^-1/2 exp(-x)",
            |x| (-x).exp() / x.sqrt(),
            0.0,
            1.0,
            1.493_648_265_624_854,
        ),
        case("|x-0.3|", |x| (x - 0.3).abs(), 0.0, 1.0, 0.29),
    ]
}

/// Worst ratio `true error / (10 × estimated error)` over the analytic suite; honest iff < 1.
pub fn quadrature_honesty() -> Result<(f64, &'static str)> {
    let cfg = QuadratureConfig::default();
    let mut worst = (0.0_f64, "");
    for c in analytic_suite() {
        let hints = Hints {
            spike: c.spike,
            ..Hints::default()
        };
        let est = integrate_hinted(c.f, c.a, c.b, &hints, &cfg)?;
        let truth = (est.value - c.exact).abs();
        let ratio = if truth == 0.0 {
            0.0
        } else {
            truth / (10.0 * est.error)
        };
        if ratio > worst.0 || worst.1.is_empty() {
            worst = (ratio.max(worst.0), c.name);
        }
    }
    Ok(worst)
}

/// Largest `|J_{m−1} + J_{m+1} − (2m/x) J_m|` for `|m| ≤ max_order` on a grid of `x ∈ (0, x_max]`.
pub fn bessel_recurrence_residual(max_order: i32, x_max: f64, points: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for i in 1..=points {
        let x = x_max * i as f64 / points as f64;
        for m in -max_order..=max_order {
            let r = bessel_j(m - 1, x)? + bessel_j(m + 1, x)?
                - 2.0 * f64::from(m) / x * bessel_j(m, x)?;
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}

/// `|∫ g − 1|` for the Gaussian delta over ±20σ.
pub fn gaussian_normalization_error(sigma: f64) -> Result<f64> {
    let d = GaussianDelta::new(sigma)?;
    let hints = Hints {
        spike: Some(Spike {
            center: 0.0,
            width: sigma,
        }),
        ..Hints::default()
    };
    let cfg = QuadratureConfig {
        rel_tol: 1e-12,
        ..QuadratureConfig::default()
    };
    let r = integrate_hinted(|e| d.eval(e), -20.0 * sigma, 20.0 * sigma, &hints, &cfg)?;
    Ok((r.value - 1.0).abs())
}

/// Exact versus quadrature master integral on `grid`, away from the discontinuities.
///
/// Returns the worst relative deviation over points where the exact value is
/// positive, and the worst quadrature value relative to the smallest in-domain
/// exact value over points where the exact value is zero.
pub fn exact_vs_quad(p: &EmissionProblem, grid: &[f64], margin: f64) -> Result<(f64, f64)> {
    let safe = safe_points(grid, &p.discontinuities()?, margin);
    let mut pairs = Vec::with_capacity(safe.len());
    for &t in &safe {
        let exact = twisted_density(p, t, MasterIntegralMode::Exact)?;
        let quad = twisted_density(p, t, MasterIntegralMode::Quadrature)?;
        pairs.push((exact, quad));
    }
    let floor = pairs
        .iter()
        .map(|x| x.0)
        .filter(|&e| e > 0.0)
        .fold(f64::INFINITY, f64::min);
    let mut inside = 0.0_f64;
    let mut outside = 0.0_f64;
    for (exact, quad) in pairs {
        if exact > 0.0 {
            inside = inside.max(((quad - exact) / exact).abs());
        } else {
            outside = outside.max(quad.abs() / floor);
        }
    }
    Ok((inside, outside))
}

/// `Σ_{|m_b|≤n} |closed form|² / (2n + 1)` relative to its large-`n` limit, minus one.
pub fn partial_sum_deviation(
    m_a: i32,
    tri: &TriangleGeom,
    n: i32,
    closed: ClosedForm,
) -> Result<f64> {
    let mut sum = 0.0;
    for m_b in -n..=n {
        sum += closed(m_a, m_b, tri)?.powi(2);
    }
    let area = tri.shape.map_or(0.0, |s| s.area);
    Ok((sum / f64::from(2 * n + 1) / partial_sum_limit(area) - 1.0).abs())
}

/// Grid used for the plane-wave limit: `θ_p^PW ± 0.02` rad.
pub fn limit_grid(p: &EmissionProblem, n: usize) -> Result<Vec<f64>> {
    let c = p.peak_angle()?;
    uniform_grid((c - 0.02).max(0.0), (c + 0.02).min(PI), n)
}

/// Reference problem with the opening angle replaced.
pub fn reference_with_opening(theta_a: f64) -> Result<EmissionProblem> {
    let r = EmissionProblem::reference();
    r.with_beam(BeamState::twisted(
        r.beam.mass(),
        r.beam.momentum(),
        theta_a,
        r.beam.oam(),
    )?)
}

fn timed(f: impl FnOnce() -> CheckResult) -> CheckResult {
    let start = Instant::now();
    let mut r = f();
    r.seconds = start.elapsed().as_secs_f64();
    r
}

fn or_failed(name: &'static str, tol: f64, r: Result<CheckResult>) -> CheckResult {
    r.unwrap_or_else(|e| CheckResult::failed(name, tol, e.to_string()))
}

/// Run the suite with the library closed form.
pub fn run(level: Level) -> Vec<CheckResult> {
    run_with(level, triple_bessel_closed)
}

/// Run the suite with a caller-supplied closed form.
pub fn run_with(level: Level, closed: ClosedForm) -> Vec<CheckResult> {
    let full = level == Level::Full;
    let mut out = Vec::new();

    out.push(timed(|| {
        let tol = 1e-10;
        or_failed(
            "bessel recurrence",
            tol,
            bessel_recurrence_residual(64, 100.0, if full { 1000 } else { 200 }).map(|r| {
                CheckResult::new(
                    "bessel recurrence",
                    r,
                    tol,
                    "|m| <= 64, 0 < x <= 100".into(),
                )
            }),
        )
    }));

    out.push(timed(|| {
        let tol = 1e-8;
        or_failed(
            "gaussian normalization",
            tol,
            gaussian_normalization_error(5e-4).map(|r| {
                CheckResult::new("gaussian normalization", r, tol, "sigma_E = 5e-4".into())
            }),
        )
    }));

    out.push(timed(|| {
        let tol = 1.0;
        or_failed(
            "quadrature honesty",
            tol,
            quadrature_honesty().map(|(r, name)| {
                CheckResult::new(
                    "quadrature honesty",
                    r,
                    tol,
                    format!("true/(10 x estimate), worst: {name}"),
                )
            }),
        )
    }));

    out.push(timed(|| {
        let tol = 1e-3;
        let cases: &[_] = if full {
            &TRIPLE_CASES
        } else {
            &TRIPLE_CASES[..3]
        };
        let run = || -> Result<CheckResult> {
            let mut worst = 0.0_f64;
            for &(ma, mb, sides) in cases {
                worst = worst.max(compare_triple(ma, mb, sides, closed)?.error);
            }
            Ok(CheckResult::new(
                "triple-bessel closed form",
                worst,
                tol,
                format!("{} cases against the damped oracle", cases.len()),
            ))
        };
        or_failed("triple-bessel closed form", tol, run())
    }));

    out.push(timed(|| {
        let tol = 0.02;
        let run = || -> Result<CheckResult> {
            let p = EmissionProblem::reference();
            let c = p.peak_angle()?;
            let n = if full { 2000 } else { 200 };
            let grid = uniform_grid(c - 2.0 * PI / 6.0, c + 2.0 * PI / 6.0, n)?;
            let (inside, outside) = exact_vs_quad(&p, &grid, 0.05)?;
            Ok(CheckResult::new(
                "master integral exact vs quadrature",
                inside.max(outside),
                tol,
                format!("{n} points, >= 0.05 rad from the discontinuities"),
            ))
        };
        or_failed("master integral exact vs quadrature", tol, run())
    }));

    out.push(timed(|| {
        let tol = 0.01;
        let run = || -> Result<CheckResult> {
            let p = reference_with_opening(1e-3)?;
            let grid = limit_grid(&p, if full { 401 } else { 101 })?;
            let dev = max_limit_deviation(&p, &grid)?.unwrap_or(f64::NAN);
            Ok(CheckResult::new(
                "plane-wave limit",
                dev,
                tol,
                "theta_a = 1e-3, max |(2pi)^2 tw/pw - 1|".into(),
            ))
        };
        or_failed("plane-wave limit", tol, run())
    }));

    out.push(timed(|| {
        let tol = 0.05;
        let n = if full { 10_000 } else { 1_000 };
        let run = || -> Result<CheckResult> {
            let tri = make_triangle(3.0, 2.5, 1.7)?;
            let dev = partial_sum_deviation(1, &tri, n, closed)?;
            Ok(CheckResult::new(
                "partial-sum scaling",
                dev,
                tol,
                format!("N = {n}, triangle (3, 2.5, 1.7)"),
            ))
        };
        or_failed("partial-sum scaling", tol, run())
    }));

    out
}
