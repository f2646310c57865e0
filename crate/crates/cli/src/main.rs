mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use twisted_emission::coincidence::{ring_geometry, sample_ring};
use twisted_emission::emission::{
    apply_inset, default_window, max_limit_deviation, uniform_grid, Channel, EmissionProblem,
    ScanResult,
};
use twisted_emission::verify::{self, Level};
use twisted_emission::{channel_density, triple_bessel_closed, Error, TriangleGeom};

use config::{ChannelArg, Format, GridSpec, Overrides, RunConfig};
use output::{emit, fmt_float, Table};

/// Default number of grid points when no `--grid` is given.
const DEFAULT_POINTS: usize = 2000;

/// `compare` reports the plane-wave-limit deviation for opening angles up to this.
const LIMIT_REPORT_BELOW: f64 = 0.01;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Numerical(Error),
    #[error("{0} check(s) failed")]
    Verify(usize),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(msg) => CliError::Config(msg),
            other => CliError::Numerical(other),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "twisted-emission",
    version,
    about = "Photon emission by plane-wave and twisted atoms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Angular scan of one channel.
    Scan(RunArgs),
    /// Plane-wave, twisted (quadrature) and twisted (exact) on one grid.
    Compare(RunArgs),
    /// Photon ring seen in coincidence with a plane-wave atom.
    Ring(RunArgs),
    /// Run the oracle suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// Total center-of-mass momentum.
    #[arg(long = "P")]
    momentum: Option<f64>,
    /// Atom mass.
    #[arg(long = "M")]
    mass: Option<f64>,
    /// Photon energy.
    #[arg(long)]
    omega: Option<f64>,
    /// ε_a − ε_b − ω.
    #[arg(long, allow_hyphen_values = true)]
    detuning: Option<f64>,
    /// Opening angle of the twisted beam (rad).
    #[arg(long)]
    theta_a: Option<f64>,
    /// OAM projection of the twisted beam.
    #[arg(long, allow_hyphen_values = true)]
    m_oam: Option<i32>,
    /// Width of the Gaussian energy delta.
    #[arg(long)]
    sigma_e: Option<f64>,
    /// Angular grid `min:max:n` (rad).
    #[arg(long)]
    grid: Option<GridSpec>,
    /// Distance kept from the twisted discontinuities in the exact channel (rad).
    #[arg(long)]
    inset: Option<f64>,
    /// Transverse momentum of the detected atom.
    #[arg(long)]
    kappa_b: Option<f64>,
    /// Number of ring points.
    #[arg(long)]
    n_samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat `key = value` configuration file.
    #[arg(long, env = "TWISTED_EMISSION_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    channel: Option<ChannelArg>,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let flags = Overrides {
            momentum: self.momentum,
            mass: self.mass,
            omega: self.omega,
            detuning: self.detuning,
            theta_a: self.theta_a,
            m_oam: self.m_oam,
            sigma_e: self.sigma_e,
            grid: self.grid,
            inset: self.inset,
            kappa_b: self.kappa_b,
            n_samples: self.n_samples,
            seed: self.seed,
            format: self.format,
            out: self.out.clone(),
            channel: self.channel,
        };
        RunConfig::resolve(self.config.as_deref(), &flags)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "fast")]
    level: LevelArg,
    /// Mutation check: use a closed form with the triangle area negated.
    #[arg(long, hide = true)]
    corrupt_closed_form: bool,
}

/// Grid for a run; points near the discontinuities are pushed out when the exact channel is involved.
fn build_grid(cfg: &RunConfig, p: &EmissionProblem, exact: bool) -> Result<Vec<f64>, CliError> {
    let grid = match cfg.grid {
        Some(g) => uniform_grid(g.min, g.max, g.n)?,
        None => {
            let (min, max) = default_window(p)?;
            uniform_grid(min, max, DEFAULT_POINTS)?
        }
    };
    Ok(if exact && cfg.inset > 0.0 {
        apply_inset(&grid, &p.discontinuities()?, cfg.inset)
    } else {
        grid
    })
}

fn channel_scan(
    p: &EmissionProblem,
    channel: Channel,
    grid: &[f64],
) -> Result<ScanResult, CliError> {
    let raw = grid
        .iter()
        .map(|&t| channel_density(p, channel, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ScanResult::from_raw(grid.to_vec(), raw)?)
}

fn summary_line(key: &str, values: &[f64]) -> String {
    let v: Vec<String> = values.iter().map(|x| fmt_float(*x)).collect();
    format!("{key}={}", v.join(","))
}

/// Text for the user; goes to stdout when the table went to a file, stderr otherwise.
fn report(cfg: &RunConfig, lines: &[String]) {
    for l in lines {
        if cfg.out.is_some() {
            println!("{l}");
        } else {
            eprintln!("{l}");
        }
    }
}

fn cmd_scan(args: &RunArgs) -> Result<(), CliError> {
    let cfg = args.resolve()?;
    let p = cfg.problem()?;
    let channel = Channel::from(cfg.channel);
    let grid = build_grid(&cfg, &p, channel == Channel::TwistedExact)?;
    let s = channel_scan(&p, channel, &grid)?;
    let theta_pw = p.peak_angle()?;
    let table = Table {
        meta: cfg.echo(),
        columns: vec![
            ("theta_p".into(), s.thetas.clone()),
            ("density_raw".into(), s.raw.clone()),
            ("density_normalized".into(), s.values.clone()),
        ],
        peaks: s.peaks.clone(),
        theta_pw: Some(theta_pw),
    };
    emit(&table.render(cfg.format), cfg.out.as_deref())?;
    report(
        &cfg,
        &[
            summary_line("theta_pw", &[theta_pw]),
            summary_line("peaks", &s.peaks),
        ],
    );
    Ok(())
}

fn cmd_compare(args: &RunArgs) -> Result<(), CliError> {
    let cfg = args.resolve()?;
    let p = cfg.problem()?;
    let grid = build_grid(&cfg, &p, true)?;
    let pw = channel_scan(&p, Channel::PlaneWave, &grid)?;
    let quad = channel_scan(&p, Channel::TwistedQuad, &grid)?;
    let exact = channel_scan(&p, Channel::TwistedExact, &grid)?;
    let theta_pw = p.peak_angle()?;
    let mut lines = vec![
        summary_line("theta_pw", &[theta_pw]),
        summary_line("peaks_pw", &pw.peaks),
        summary_line("peaks_tw_quad", &quad.peaks),
        summary_line("peaks_tw_exact", &exact.peaks),
    ];
    if cfg.theta_a <= LIMIT_REPORT_BELOW {
        if let Some(dev) = max_limit_deviation(&p, &grid)? {
            lines.push(summary_line("limit_deviation", &[dev]));
        }
    }
    let mut peaks = pw.peaks.clone();
    peaks.extend(&quad.peaks);
    peaks.extend(&exact.peaks);
    let table = Table {
        meta: cfg.echo(),
        columns: vec![
            ("theta_p".into(), grid),
            ("pw".into(), pw.values),
            ("tw_quad".into(), quad.values),
            ("tw_exact".into(), exact.values),
        ],
        peaks,
        theta_pw: Some(theta_pw),
    };
    emit(&table.render(cfg.format), cfg.out.as_deref())?;
    report(&cfg, &lines);
    Ok(())
}

fn cmd_ring(args: &RunArgs) -> Result<(), CliError> {
    let cfg = args.resolve()?;
    let p = cfg.problem()?;
    let kappa_a = p.beam.transverse_momentum();
    let ring = ring_geometry(kappa_a, cfg.kappa_b)?;
    let points = sample_ring(&ring, cfg.n_samples)?;
    let mut meta = cfg.echo();
    meta.push(("center_x".into(), ring.center_x.to_string()));
    meta.push(("center_y".into(), ring.center_y.to_string()));
    meta.push(("radius".into(), ring.radius.to_string()));
    let table = Table {
        meta,
        columns: vec![
            ("kappa_x".into(), points.iter().map(|p| p.0).collect()),
            ("kappa_y".into(), points.iter().map(|p| p.1).collect()),
        ],
        peaks: Vec::new(),
        theta_pw: None,
    };
    emit(&table.render(cfg.format), cfg.out.as_deref())?;
    report(
        &cfg,
        &[
            summary_line("center", &[ring.center_x, ring.center_y]),
            summary_line("radius", &[ring.radius]),
        ],
    );
    Ok(())
}

fn negated_area_closed_form(
    m_a: i32,
    m_b: i32,
    tri: &TriangleGeom,
) -> twisted_emission::Result<f64> {
    let mut t = *tri;
    if let Some(shape) = t.shape.as_mut() {
        shape.area = -shape.area;
    }
    triple_bessel_closed(m_a, m_b, &t)
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let level = match args.level {
        LevelArg::Fast => Level::Fast,
        LevelArg::Full => Level::Full,
    };
    let closed: verify::ClosedForm = if args.corrupt_closed_form {
        negated_area_closed_form
    } else {
        triple_bessel_closed
    };
    let results = verify::run_with(level, closed);
    println!(
        "{:<38} {:>10} {:>24} {:>10}  detail",
        "check", "status", "measured", "tolerance"
    );
    for r in &results {
        println!(
            "{:<38} {:>10} {:>24} {:>10.1e}  {}",
            r.name,
            if r.passed { "pass" } else { "FAIL" },
            fmt_float(r.measured),
            r.tolerance,
            r.detail
        );
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Verify(failed))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Scan(a) => cmd_scan(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Ring(a) => cmd_ring(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
