//! Command-line front end: single-instance solves, algorithm traces, plot
//! data as CSV, and the randomized verification run.
//!
//! CSV goes to `--out` when given and to stdout otherwise. Human-readable
//! summaries go to stdout in the first case and to stderr in the second, so
//! piped CSV stays clean.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};
use thiserror::Error;

use crate::analysis;
use crate::centralized::{self, Strategy};
use crate::channel::{ChannelGains, SymmetricChannel};
use crate::oracle::GridSpec;
use crate::sim::{self, SimConfig, DEFAULT_PERIODS, DEFAULT_STEPS_PER_PERIOD};
use crate::symmetric;
use crate::verify::{self, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Invalid(#[from] crate::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) | CliError::Csv(_) => EXIT_FAILURE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sicrate",
    version,
    about = "Sum-rate optimization and decentralized rate oscillation on the two-user interference channel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the centralized problem for one channel.
    Solve(SolveArgs),
    /// Optimal architecture over the (epsilon, mu) grid.
    Regions(GridArgs),
    /// Simulate the decentralized algorithm and report its events.
    Trace(TraceArgs),
    /// Efficiency of the oscillating algorithm over the (epsilon, mu) grid.
    Surface(GridArgs),
    /// Efficiency of oscillation, greedy and orthogonal access along epsilon.
    Compare(CompareArgs),
    /// Randomized checks of the closed forms against brute force.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub g11: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub g12: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub g21: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub g22: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma1_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma2_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    pub step: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Sawtooth period in seconds.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub period: f64,
    /// Time step; defaults to period / 1000.
    #[arg(long, allow_hyphen_values = true)]
    pub dt: Option<f64>,
    /// Steady-state periods to simulate.
    #[arg(long, default_value_t = DEFAULT_PERIODS)]
    pub periods: usize,
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub include_init: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.2, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    pub step: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random instances per suite.
    #[arg(long, default_value_t = 200)]
    pub instances: usize,
    #[arg(long, default_value_t = 201)]
    pub grid_points: usize,
    /// Scales every numeric tolerance; for exercising the harness itself.
    #[arg(long, default_value_t = 1.0, hide = true, allow_hyphen_values = true)]
    pub tolerance_scale: f64,
}

/// Where CSV rows and summary lines go.
struct Sinks {
    csv: Box<dyn Write>,
    summary: Box<dyn Write>,
}

impl Sinks {
    fn open(out: Option<&PathBuf>) -> Result<Self, CliError> {
        Ok(match out {
            Some(path) => Self {
                csv: Box::new(BufWriter::new(File::create(path)?)),
                summary: Box::new(io::stdout()),
            },
            None => Self {
                csv: Box::new(BufWriter::new(io::stdout())),
                summary: Box::new(io::stderr()),
            },
        })
    }

    fn csv_writer(&mut self) -> csv::Writer<&mut dyn Write> {
        csv::Writer::from_writer(self.csv.as_mut())
    }
}

fn fields<const N: usize>(values: [&dyn std::fmt::Display; N]) -> [String; N] {
    values.map(|v| v.to_string())
}

/// Runs one subcommand and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Regions(a) => cmd_regions(&a),
        Command::Trace(a) => cmd_trace(&a),
        Command::Surface(a) => cmd_surface(&a),
        Command::Compare(a) => cmd_compare(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

fn solve_gains(a: &SolveArgs) -> Result<ChannelGains, CliError> {
    let gain_flags = [a.g11, a.g12, a.g21, a.g22, a.gamma1_max, a.gamma2_max];
    let sym_flags = [a.epsilon, a.mu, a.gamma];
    let any_gain = gain_flags.iter().any(Option::is_some);
    let any_sym = sym_flags.iter().any(Option::is_some);
    match (any_gain, any_sym) {
        (true, false) => match gain_flags {
            [Some(g11), Some(g12), Some(g21), Some(g22), Some(m1), Some(m2)] => {
                Ok(ChannelGains::new(g11, g12, g21, g22, m1, m2)?)
            }
            _ => Err(CliError::Usage(
                "--g11 --g12 --g21 --g22 --gamma1-max --gamma2-max must all be given".into(),
            )),
        },
        (false, true) => match sym_flags {
            [Some(e), Some(m), Some(g)] => Ok(SymmetricChannel::new(e, m, g)?.to_gains()),
            _ => Err(CliError::Usage(
                "--epsilon --mu --gamma must all be given".into(),
            )),
        },
        _ => Err(CliError::Usage(
            "give either the six gain flags or --epsilon --mu --gamma".into(),
        )),
    }
}

fn cmd_solve(a: &SolveArgs) -> Result<i32, CliError> {
    let gains = solve_gains(a)?;
    let best = centralized::solve_global(&gains);
    let mut out = io::stdout().lock();
    writeln!(out, "strategy: {}", best.strategy.description())?;
    writeln!(out, "gamma1: {}", best.gamma1)?;
    writeln!(out, "gamma2: {}", best.gamma2)?;
    writeln!(out, "r1: {}", best.r1)?;
    writeln!(out, "r2: {}", best.r2)?;
    writeln!(out, "sum_rate: {}", best.sum_rate)?;
    for alloc in centralized::solve_all(&gains) {
        writeln!(out, "  {}: {}", alloc.strategy, alloc.sum_rate)?;
    }
    Ok(EXIT_OK)
}

fn cmd_regions(a: &GridArgs) -> Result<i32, CliError> {
    let q = symmetric::diagonal_intersection_q(a.gamma)?;
    let axis = analysis::grid_axis(a.step)?;
    let mut sinks = Sinks::open(a.out.as_ref())?;
    {
        let mut w = sinks.csv_writer();
        w.write_record(["epsilon", "mu", "strategy", "r_ns", "r_pi", "r_pii"])?;
        for &e in &axis {
            for &m in &axis {
                let sym = SymmetricChannel::new(e, m, a.gamma)?;
                w.write_record(fields([
                    &e,
                    &m,
                    &symmetric::classify_region(&sym),
                    &symmetric::sum_rate_no_sic(&sym),
                    &symmetric::sum_rate_partial_i(&sym),
                    &symmetric::sum_rate_partial_ii(&sym),
                ]))?;
            }
        }
        w.flush()?;
    }
    writeln!(sinks.summary, "q = {q}")?;
    Ok(EXIT_OK)
}

fn fmt_event(t: Option<f64>) -> String {
    t.map_or_else(|| "none".to_string(), |t| format!("{t:.3}"))
}

fn cmd_trace(a: &TraceArgs) -> Result<i32, CliError> {
    let sym = SymmetricChannel::new(a.epsilon, a.mu, a.gamma)?;
    let base = SimConfig::new(sym, a.period)?;
    let cfg = SimConfig {
        dt: a.dt.unwrap_or(a.period / DEFAULT_STEPS_PER_PERIOD as f64),
        n_periods: a.periods,
        include_init: a.include_init,
        ..base
    };
    let traj = sim::simulate(&cfg)?;
    let mut sinks = Sinks::open(a.out.as_ref())?;
    {
        let mut w = sinks.csv_writer();
        w.write_record([
            "t",
            "r1",
            "r2",
            "r1_decoded",
            "r2_decoded",
            "sic_at_R1",
            "phase",
        ])?;
        for s in traj.samples() {
            w.write_record(fields([
                &s.t,
                &s.r1,
                &s.r2,
                &s.r1_decoded,
                &s.r2_decoded,
                &s.sic_at_r1,
                &s.phase,
            ]))?;
        }
        w.flush()?;
    }

    let ev = traj.events();
    let roles = traj.roles();
    let (g, s) = (roles.greedy, roles.sawtooth());
    let out = &mut sinks.summary;
    writeln!(out, "greedy transmitter: T{g}")?;
    writeln!(
        out,
        "first R{s} decode: {}",
        fmt_event(ev.first_decode_sawtooth)
    )?;
    writeln!(
        out,
        "first R{g} decode: {}",
        fmt_event(ev.first_decode_greedy)
    )?;
    writeln!(out, "T{g} switch: {}", fmt_event(ev.greedy_switch))?;
    writeln!(out, "SIC loss at R{g}: {}", fmt_event(ev.sic_loss))?;
    writeln!(out, "T{s} ramp jump: {}", fmt_event(ev.ramp_jump))?;
    Ok(EXIT_OK)
}

fn cmd_surface(a: &GridArgs) -> Result<i32, CliError> {
    let rows = analysis::sweep(a.gamma, a.step, None)?;
    let mut sinks = Sinks::open(a.out.as_ref())?;
    let mut w = sinks.csv_writer();
    w.write_record(["epsilon", "mu", "e_sum", "r_opt", "rho_osc"])?;
    for r in &rows {
        w.write_record(fields([&r.epsilon, &r.mu, &r.e_osc, &r.r_opt, &r.rho_osc]))?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

/// Coarse architecture label: the two Partial-SIC orientations are one
/// region along a sweep that crosses the diagonal.
pub fn region_label(strategy: Strategy) -> &'static str {
    match strategy {
        Strategy::NoSic => "NoSic",
        Strategy::PartialSicR1 | Strategy::PartialSicR2 => "PartialSic",
        Strategy::FullSic => "FullSic",
    }
}

fn cmd_compare(a: &CompareArgs) -> Result<i32, CliError> {
    let rows = analysis::sweep(a.gamma, a.step, Some(a.mu))?;
    let mut sinks = Sinks::open(a.out.as_ref())?;
    {
        let mut w = sinks.csv_writer();
        w.write_record(["epsilon", "rho_osc", "rho_greedy", "rho_orth", "region"])?;
        for r in &rows {
            w.write_record(fields([
                &r.epsilon,
                &r.rho_osc,
                &r.rho_greedy,
                &r.rho_orth,
                &region_label(r.region),
            ]))?;
        }
        w.flush()?;
    }
    let mut transitions = 0;
    for pair in rows.windows(2) {
        let (from, to) = (region_label(pair[0].region), region_label(pair[1].region));
        if from != to {
            transitions += 1;
            writeln!(
                sinks.summary,
                "region transition between epsilon = {} and {}: {from} -> {to}",
                pair[0].epsilon, pair[1].epsilon
            )?;
        }
    }
    if transitions == 0 {
        writeln!(sinks.summary, "no region transition along the sweep")?;
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32, CliError> {
    let cfg = VerifyConfig {
        tolerance_scale: a.tolerance_scale,
        grid: GridSpec::new(a.grid_points)?,
        ..VerifyConfig::new(a.seed, a.instances)
    };
    if a.instances == 0 {
        eprintln!("warning: zero instances requested; every suite passes vacuously");
    }
    let reports = verify::run_all(&cfg);
    let mut out = io::stdout().lock();
    for r in &reports {
        writeln!(out, "{r}")?;
    }
    let ok = reports.iter().all(|r| r.ok());
    writeln!(out, "{}", if ok { "all suites passed" } else { "FAILED" })?;
    Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
}
