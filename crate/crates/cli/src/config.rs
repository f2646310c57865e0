//! Run configuration: built-in defaults, a flat `key = value` file, then flags.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use twisted_emission::{BeamState, Channel, EmissionProblem, GaussianDelta, TransitionLine};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelArg {
    Planewave,
    TwistedExact,
    TwistedQuad,
}

impl From<ChannelArg> for Channel {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Planewave => Channel::PlaneWave,
            ChannelArg::TwistedExact => Channel::TwistedExact,
            ChannelArg::TwistedQuad => Channel::TwistedQuad,
        }
    }
}

/// `min:max:n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, n] = parts[..] else {
            return Err(format!("grid must look like min:max:n, got {s:?}"));
        };
        let min: f64 = min.trim().parse().map_err(|e| format!("grid min: {e}"))?;
        let max: f64 = max.trim().parse().map_err(|e| format!("grid max: {e}"))?;
        let n: usize = n.trim().parse().map_err(|e| format!("grid size: {e}"))?;
        if n < 2 {
            return Err(format!("grid needs at least 2 points, got {n}"));
        }
        if !(0.0 <= min && min < max && max <= PI) {
            return Err(format!(
                "grid range must satisfy 0 <= min < max <= pi, got {min}:{max}"
            ));
        }
        Ok(Self { min, max, n })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.n)
    }
}

/// Values that may come from the config file or the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub momentum: Option<f64>,
    pub mass: Option<f64>,
    pub omega: Option<f64>,
    pub detuning: Option<f64>,
    pub theta_a: Option<f64>,
    pub m_oam: Option<i32>,
    pub sigma_e: Option<f64>,
    pub grid: Option<GridSpec>,
    pub inset: Option<f64>,
    pub kappa_b: Option<f64>,
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub channel: Option<ChannelArg>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub momentum: f64,
    pub mass: f64,
    pub omega: f64,
    pub detuning: f64,
    pub theta_a: f64,
    pub m_oam: i32,
    pub sigma_e: f64,
    /// `None` selects the window around the plane-wave peak.
    pub grid: Option<GridSpec>,
    pub inset: f64,
    pub kappa_b: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub channel: ChannelArg,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            momentum: 1.0,
            mass: 1.0,
            omega: 0.1,
            detuning: 1e-3,
            theta_a: PI / 6.0,
            m_oam: 0,
            sigma_e: 5e-4,
            grid: None,
            inset: 1e-6,
            kappa_b: 0.0,
            n_samples: 360,
            seed: 0,
            format: Format::Csv,
            out: None,
            channel: ChannelArg::TwistedExact,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Config(format!("{key} = {value:?}: {e}")))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, CliError> {
    T::from_str(value, true).map_err(|e| CliError::Config(format!("{key} = {value:?}: {e}")))
}

impl Overrides {
    /// Parse a flat config file: one `key = value` per line, `#` starts a comment.
    pub fn from_file_contents(text: &str) -> Result<Self, CliError> {
        let mut o = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "line {}: expected key = value",
                    lineno + 1
                )));
            };
            let key = key.trim().replace('-', "_").to_lowercase();
            let value = value.trim();
            match key.as_str() {
                "p" => o.momentum = Some(parse(&key, value)?),
                "m" => o.mass = Some(parse(&key, value)?),
                "omega" => o.omega = Some(parse(&key, value)?),
                "detuning" => o.detuning = Some(parse(&key, value)?),
                "theta_a" => o.theta_a = Some(parse(&key, value)?),
                "m_oam" => o.m_oam = Some(parse(&key, value)?),
                "sigma_e" => o.sigma_e = Some(parse(&key, value)?),
                "grid" => o.grid = Some(parse(&key, value)?),
                "inset" => o.inset = Some(parse(&key, value)?),
                "kappa_b" => o.kappa_b = Some(parse(&key, value)?),
                "n_samples" => o.n_samples = Some(parse(&key, value)?),
                "seed" => o.seed = Some(parse(&key, value)?),
                "format" => o.format = Some(parse_enum(&key, value)?),
                "out" => o.out = Some(PathBuf::from(value)),
                "channel" => o.channel = Some(parse_enum(&key, value)?),
                _ => {
                    return Err(CliError::Config(format!(
                        "line {}: unknown key {key:?}",
                        lineno + 1
                    )));
                }
            }
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_file_contents(&text)
    }
}

impl RunConfig {
    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = o.$field.clone() {
                    self.$field = v;
                })*
            };
        }
        take!(
            momentum, mass, omega, detuning, theta_a, m_oam, sigma_e, inset, kappa_b, n_samples,
            seed, format, channel
        );
        if o.grid.is_some() {
            self.grid = o.grid;
        }
        if o.out.is_some() {
            self.out = o.out.clone();
        }
    }

    /// Defaults, then the file (if any), then the flags.
    pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        if let Some(path) = file {
            cfg.apply(&Overrides::from_file(path)?);
        }
        cfg.apply(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.inset.is_finite() && self.inset >= 0.0) {
            return Err(CliError::Config(format!(
                "inset must be non-negative, got {}",
                self.inset
            )));
        }
        if !(self.kappa_b.is_finite() && self.kappa_b >= 0.0) {
            return Err(CliError::Config(format!(
                "kappa_b must be non-negative, got {}",
                self.kappa_b
            )));
        }
        if self.n_samples == 0 {
            return Err(CliError::Config("n_samples must be at least 1".into()));
        }
        Ok(())
    }

    pub fn problem(&self) -> Result<EmissionProblem, CliError> {
        let beam = BeamState::twisted(self.mass, self.momentum, self.theta_a, self.m_oam)?;
        let line = TransitionLine::from_detuning(self.detuning, self.omega, 1.0)?;
        let delta = GaussianDelta::new(self.sigma_e)?;
        Ok(EmissionProblem::new(beam, line, self.omega, delta)?)
    }

    /// Ordered `key=value` echo used as the output header.
    pub fn echo(&self) -> Vec<(String, String)> {
        let channel = Channel::from(self.channel).name();
        let grid = self
            .grid
            .map_or_else(|| "default".to_string(), |g| g.to_string());
        [
            ("P", self.momentum.to_string()),
            ("M", self.mass.to_string()),
            ("omega", self.omega.to_string()),
            ("detuning", self.detuning.to_string()),
            ("theta_a", self.theta_a.to_string()),
            ("m_oam", self.m_oam.to_string()),
            ("sigma_e", self.sigma_e.to_string()),
            ("grid", grid),
            ("inset", self.inset.to_string()),
            ("kappa_b", self.kappa_b.to_string()),
            ("n_samples", self.n_samples.to_string()),
            ("seed", self.seed.to_string()),
            ("channel", channel.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}
