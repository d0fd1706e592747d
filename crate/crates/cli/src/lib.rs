//! Command-line front end: sweeps, revival reports, intra/inter comparisons,
//! non-Markovian traces and the seeded verification suite.

pub mod format;
pub mod verify;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entangle_core::{
    analyze, compare_intra_inter, nonmarkov_trace, parse_state, sweep, ChannelKind, Error, Locality, NonMarkovParams,
    PGrid, PureState4,
};
use serde::Serialize;
use thiserror::Error as ThisError;

use crate::format::{fmt12, fmt12_opt, round12, round12_opt};

pub const EXIT_OK: u8 = 0;
pub const EXIT_TOLERANCE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_STATE: u8 = 3;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("invalid state: {0}")]
    State(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => EXIT_CONFIG,
            CliError::State(_) => EXIT_STATE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ZeroVector
            | Error::NotNormalized { .. }
            | Error::InvalidDensity(_)
            | Error::NotHermitian { .. }
            | Error::NotPsd { .. }
            | Error::ComplexStateUnsupported => CliError::State(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Channel {
    Ad,
    Pd,
    Dp,
}

impl From<Channel> for ChannelKind {
    fn from(c: Channel) -> Self {
        match c {
            Channel::Ad => ChannelKind::AmplitudeDamping,
            Channel::Pd => ChannelKind::PhaseDamping,
            Channel::Dp => ChannelKind::Depolarizing,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum LocalityArg {
    Intra,
    Inter,
}

impl From<LocalityArg> for Locality {
    fn from(l: LocalityArg) -> Self {
        match l {
            LocalityArg::Intra => Locality::Intraparticle,
            LocalityArg::Inter => Locality::Interparticle,
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "entangle", version, about = "Concurrence of two-qubit states under Kraus noise channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concurrence along a grid of P, numeric and closed form.
    Sweep(SweepArgs),
    /// Sudden death, revival extrema and trajectory class as JSON.
    Analyze(AnalyzeArgs),
    /// Intraparticle and interparticle concurrence on one grid.
    Compare(CompareArgs),
    /// Interparticle amplitude damping along the non-Markovian P(t).
    Nonmarkov(NonMarkovArgs),
    /// Seeded check of the closed forms and channel invariants.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// `a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im` or
    /// `polar:|a|,theta_a,|b|,theta_b,|c|,theta_c,|d|,theta_d` (degrees)
    #[arg(long, allow_hyphen_values = true)]
    pub state: String,
    /// Rescale the amplitudes to unit norm instead of rejecting them.
    #[arg(long)]
    pub normalize: bool,
}

impl StateArgs {
    fn parse(&self) -> Result<PureState4, CliError> {
        parse_state(&self.state, self.normalize).map_err(|e| match e {
            Error::Parse(m) => CliError::Config(m),
            other => CliError::from(other),
        })
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.0)]
    pub p_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p_max: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
}

impl GridArgs {
    fn grid(&self) -> Result<PGrid, CliError> {
        Ok(PGrid::new(self.p_min, self.p_max, self.steps)?)
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub channel: Channel,
    #[arg(long, value_enum, default_value = "intra")]
    pub locality: LocalityArg,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long, value_enum)]
    pub channel: Channel,
    #[arg(long, value_enum, default_value = "intra")]
    pub locality: LocalityArg,
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, value_enum)]
    pub channel: Channel,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NonMarkovArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long)]
    pub big_gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub small_gamma: f64,
    #[arg(long)]
    pub t_max: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, value_enum)]
    pub channel: Option<Channel>,
    #[arg(long, value_enum)]
    pub locality: Option<LocalityArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Rendered output and the exit status it should produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub exit_code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, exit_code: EXIT_OK }
    }
}

impl Command {
    pub fn out_path(&self) -> Option<&PathBuf> {
        match self {
            Command::Sweep(a) => a.out.as_ref(),
            Command::Analyze(a) => a.out.as_ref(),
            Command::Compare(a) => a.out.as_ref(),
            Command::Nonmarkov(a) => a.out.as_ref(),
            Command::Verify(a) => a.out.as_ref(),
        }
    }
}

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Sweep(a) => run_sweep(a).map(Outcome::ok),
        Command::Analyze(a) => run_analyze(a).map(Outcome::ok),
        Command::Compare(a) => run_compare(a).map(Outcome::ok),
        Command::Nonmarkov(a) => run_nonmarkov(a).map(Outcome::ok),
        Command::Verify(a) => run_verify(a),
    }
}

#[derive(Serialize)]
struct SweepRow {
    #[serde(rename = "P")]
    p: f64,
    #[serde(rename = "C_numeric")]
    c_numeric: f64,
    #[serde(rename = "C_analytic")]
    c_analytic: Option<f64>,
}

#[derive(Serialize)]
struct SweepJson<'a> {
    channel: &'a str,
    locality: &'a str,
    rows: Vec<SweepRow>,
}

pub fn run_sweep(a: &SweepArgs) -> Result<String, CliError> {
    let s = a.state.parse()?;
    let kind: ChannelKind = a.channel.into();
    let loc: Locality = a.locality.into();
    let series = sweep(&s, kind, loc, &a.grid.grid()?)?;
    let rows = series.p_values.iter().zip(&series.c_numeric).zip(&series.c_analytic);
    match a.format {
        OutputFormat::Csv => {
            let mut out = String::from("P,C_numeric,C_analytic\n");
            for ((&p, &n), &an) in rows {
                writeln!(out, "{},{},{}", fmt12(p), fmt12(n), fmt12_opt(an)).unwrap();
            }
            Ok(out)
        }
        OutputFormat::Json => {
            let rows = rows
                .map(|((&p, &n), &an)| SweepRow { p: round12(p), c_numeric: round12(n), c_analytic: round12_opt(an) })
                .collect();
            let doc = SweepJson { channel: kind.as_str(), locality: loc.as_str(), rows };
            Ok(serde_json::to_string_pretty(&doc).expect("sweep serializes") + "\n")
        }
    }
}

#[derive(Serialize)]
struct AnalyzeJson {
    esd_p: Option<f64>,
    p_minus: Option<f64>,
    c_minus: Option<f64>,
    p_plus: Option<f64>,
    c_plus: Option<f64>,
    c_tilde: Option<f64>,
    classification: &'static str,
    delta_theta: Option<f64>,
}

pub fn run_analyze(a: &AnalyzeArgs) -> Result<String, CliError> {
    let s = a.state.parse()?;
    let r = analyze(&s, a.channel.into(), a.locality.into())?;
    let doc = AnalyzeJson {
        esd_p: round12_opt(r.esd_p),
        p_minus: round12_opt(r.p_minus),
        c_minus: round12_opt(r.c_minus),
        p_plus: round12_opt(r.p_plus),
        c_plus: round12_opt(r.c_plus),
        c_tilde: round12_opt(r.c_tilde),
        classification: r.classification.as_str(),
        delta_theta: round12_opt(r.delta_theta),
    };
    Ok(serde_json::to_string_pretty(&doc).expect("report serializes") + "\n")
}

pub fn run_compare(a: &CompareArgs) -> Result<String, CliError> {
    let s = a.state.parse()?;
    let pair = compare_intra_inter(&s, a.channel.into(), &a.grid.grid()?)?;
    let mut out = String::from("P,C_intra,C_inter\n");
    for ((&p, &x), &y) in pair.intra.p_values.iter().zip(&pair.intra.c_numeric).zip(&pair.inter.c_numeric) {
        writeln!(out, "{},{},{}", fmt12(p), fmt12(x), fmt12(y)).unwrap();
    }
    Ok(out)
}

pub fn run_nonmarkov(a: &NonMarkovArgs) -> Result<String, CliError> {
    NonMarkovParams::new(a.big_gamma, a.small_gamma, 0.0)?;
    if !(a.t_max.is_finite() && a.t_max > 0.0) {
        return Err(CliError::Config(format!("--t-max must be positive, got {}", a.t_max)));
    }
    if a.steps < 2 {
        return Err(CliError::Config(format!("--steps must be at least 2, got {}", a.steps)));
    }
    let s = a.state.parse()?;
    let last = (a.steps - 1) as f64;
    let times: Vec<f64> = (0..a.steps).map(|i| a.t_max * (i as f64 / last)).collect();
    let trace = nonmarkov_trace(&s, a.big_gamma, a.small_gamma, &times)?;
    let mut out = String::from("t,P,C_inter_numeric\n");
    for pt in trace {
        writeln!(out, "{},{},{}", fmt12(pt.t), fmt12(pt.p), fmt12(pt.c)).unwrap();
    }
    Ok(out)
}

pub fn run_verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    if a.trials == 0 {
        return Err(CliError::Config("--trials must be at least 1".into()));
    }
    let report = verify::run(a.seed, a.trials, a.channel.map(Into::into), a.locality.map(Into::into))?;
    Ok(Outcome { text: report.render(), exit_code: if report.passed() { EXIT_OK } else { EXIT_TOLERANCE } })
}
