//! One-dimensional globally adaptive Gauss–Kronrod integration.
//!
//! Integrable inverse-square-root endpoint singularities are removed with the
//! substitution `x = a + u²` (or `x = b − u²`), and a caller-declared narrow
//! spike is bracketed by fixed breakpoints before adaptation starts.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections beyond the initial segments.
    pub max_subdivisions: usize,
    /// Fraction of the interval cut away at a singular endpoint. Zero selects
    /// the square-root substitution instead.
    pub endpoint_inset: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            endpoint_inset: 0.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.rel_tol) || !positive(self.abs_tol) {
            return Err(Error::Config(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be at least 1".into()));
        }
        if !(self.endpoint_inset.is_finite() && (0.0..0.5).contains(&self.endpoint_inset)) {
            return Err(Error::Config("endpoint_inset must lie in [0, 0.5)".into()));
        }
        Ok(())
    }
}

/// An integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// A narrow feature of the integrand at a known location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spike {
    pub center: f64,
    pub width: f64,
}

impl Spike {
    /// Breakpoints placed around a spike, in units of its width.
    pub const OFFSETS: [f64; 3] = [1.0, 3.0, 10.0];
}

/// Extra knowledge about the integrand supplied by the caller.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Hints {
    pub spike: Option<Spike>,
    /// Integrable `1/√(x − a)` behaviour at the lower limit.
    pub singular_start: bool,
    /// Integrable `1/√(b − x)` behaviour at the upper limit.
    pub singular_end: bool,
}

/// Integrate `f` over `[a, b]`, detecting singular endpoints from non-finite `f(a)`, `f(b)`.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    integrate_hinted(f, a, b, &Hints::default(), cfg)
}

/// Like [`integrate`], with caller-declared spike and endpoint behaviour.
pub fn integrate_hinted<F>(
    f: F,
    a: f64,
    b: f64,
    hints: &Hints,
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    check_limits(a, b)?;

    let singular_start = hints.singular_start || !f(a).is_finite();
    let singular_end = hints.singular_end || !f(b).is_finite();

    let (mut lo, mut hi) = (a, b);
    let inset = cfg.endpoint_inset * (b - a);
    if inset > 0.0 {
        if singular_start {
            lo += inset;
        }
        if singular_end {
            hi -= inset;
        }
    }
    let substitute = inset == 0.0;

    let mut points = vec![lo];
    if let Some(spike) = hints.spike {
        if !(spike.width.is_finite() && spike.width > 0.0 && spike.center.is_finite()) {
            return Err(Error::Config(
                "spike needs a finite center and positive width".into(),
            ));
        }
        let mut inner: Vec<f64> = Spike::OFFSETS
            .iter()
            .flat_map(|k| {
                [
                    spike.center - k * spike.width,
                    spike.center + k * spike.width,
                ]
            })
            .chain(std::iter::once(spike.center))
            .filter(|x| *x > lo && *x < hi)
            .collect();
        inner.sort_by(f64::total_cmp);
        inner.dedup();
        points.extend(inner);
    }
    points.push(hi);
    if substitute && singular_start && singular_end && points.len() == 2 {
        points.insert(1, 0.5 * (lo + hi));
    }

    let last = points.len() - 2;
    let segments = points
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let map = if substitute && singular_start && i == 0 {
                Map::SqrtStart(w[0])
            } else if substitute && singular_end && i == last {
                Map::SqrtEnd(w[1])
            } else {
                Map::Identity
            };
            map.piece(w[0], w[1])
        })
        .collect::<Vec<_>>();
    adapt(&f, segments, cfg)
}

/// Integrate a regular integrand over consecutive panels `points[i]..points[i+1]`.
///
/// Useful for long oscillatory ranges, where the panels fix the resolution up front.
pub fn integrate_panels<F>(f: F, points: &[f64], cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    if points.len() < 2 {
        return Err(Error::Config("need at least two breakpoints".into()));
    }
    for w in points.windows(2) {
        check_limits(w[0], w[1])?;
    }
    let segments = points
        .windows(2)
        .map(|w| Map::Identity.piece(w[0], w[1]))
        .collect();
    adapt(&f, segments, cfg)
}

fn check_limits(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "integration limits must be finite: [{a}, {b}]"
        )));
    }
    if a >= b {
        return Err(Error::Domain(format!(
            "integration limits must satisfy a < b: [{a}, {b}]"
        )));
    }
    Ok(())
}

/// Variable change applied on one piece of the integration range.
#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// `x = a + u²`, `dx = 2u du`.
    SqrtStart(f64),
    /// `x = b − u²`, `dx = 2u du`.
    SqrtEnd(f64),
}

impl Map {
    /// Parameter range in the mapped variable covering `[x0, x1]`.
    fn piece(self, x0: f64, x1: f64) -> (Map, f64, f64) {
        match self {
            Map::Identity => (self, x0, x1),
            Map::SqrtStart(a) => (self, 0.0, (x1 - a).sqrt()),
            Map::SqrtEnd(b) => (self, 0.0, (b - x0).sqrt()),
        }
    }

    #[inline]
    fn eval<F: Fn(f64) -> f64>(self, f: &F, t: f64) -> (f64, f64) {
        match self {
            Map::Identity => (t, f(t)),
            Map::SqrtStart(a) => {
                // for tiny u, a + u² can round back onto the singular endpoint
                let x = (a + t * t).max(a + ulp_step(a));
                (x, 2.0 * t * f(x))
            }
            Map::SqrtEnd(b) => {
                let x = (b - t * t).min(b - ulp_step(b));
                (x, 2.0 * t * f(x))
            }
        }
    }
}

/// Smallest step that moves `x` to a different float.
fn ulp_step(x: f64) -> f64 {
    (x.abs() * f64::EPSILON).max(f64::MIN_POSITIVE)
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    map: Map,
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    pieces: Vec<(Map, f64, f64)>,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let mut segments = Vec::with_capacity(pieces.len() + 2 * cfg.max_subdivisions.min(4096));
    for (map, lo, hi) in pieces {
        if hi > lo {
            segments.push(kronrod21(f, map, lo, hi)?);
        }
    }
    let mut subdivisions = 0;
    loop {
        let (value, error) = totals(&segments);
        if error <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
            return Ok(Estimate { value, error });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment when error is positive");
        let seg = segments[worst];
        let mid = 0.5 * (seg.lo + seg.hi);
        if subdivisions >= cfg.max_subdivisions || mid <= seg.lo || mid >= seg.hi {
            return Err(Error::Accuracy {
                value,
                error,
                subdivisions,
            });
        }
        segments[worst] = kronrod21(f, seg.map, seg.lo, mid)?;
        segments.push(kronrod21(f, seg.map, mid, seg.hi)?);
        subdivisions += 1;
    }
}

fn totals(segments: &[Segment]) -> (f64, f64) {
    segments
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error))
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// 21-point Kronrod rule with the embedded 10-point Gauss rule, QUADPACK error scaling.
fn kronrod21<F: Fn(f64) -> f64>(f: &F, map: Map, lo: f64, hi: f64) -> Result<Segment> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let sample = |t: f64| -> Result<f64> {
        let (x, v) = map.eval(f, t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!(
                "integrand is not finite at x = {x}: {v}"
            )))
        }
    };

    let fc = sample(center)?;
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = sample(center - dx)?;
        let f2 = sample(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let error = rescale_error((kronrod - gauss) * half, res_abs, res_asc);
    Ok(Segment {
        map,
        lo,
        hi,
        value,
        error,
    })
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}
