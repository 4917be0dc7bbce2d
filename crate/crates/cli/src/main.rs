use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chiral_diode::diode::{numeric_zero_scan, working_area_single_res, working_area_two_res, TwoResOptions};
use chiral_diode::export;
use chiral_diode::grid::Grid;
use chiral_diode::single_photon::sweep_single;
use chiral_diode::two_photon::{MapChannels, TwoPhotonField};
use chiral_diode::verification::{self, Suite};
use chiral_diode::{Direction, Resonance, TwoPhotonIn};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

mod config;
mod figures;

use config::{grid_or, resolve_rates, RateFlags, RunConfig};

const THREADS_VAR: &str = "CHIRAL_DIODE_THREADS";

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Verification(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Verification(m) | CliError::Io(m) => m,
        }
    }
}

impl From<chiral_diode::Error> for CliError {
    fn from(e: chiral_diode::Error) -> Self {
        match e {
            chiral_diode::Error::Lattice(m) => CliError::Verification(m),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResonanceArg {
    SinglePhoton,
    TwoPhoton,
}

impl From<ResonanceArg> for Resonance {
    fn from(r: ResonanceArg) -> Self {
        match r {
            ResonanceArg::SinglePhoton => Resonance::SinglePhoton,
            ResonanceArg::TwoPhoton => Resonance::TwoPhoton,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionArg {
    Left,
    Right,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Left => Direction::LeftIncident,
            DirectionArg::Right => Direction::RightIncident,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    Bin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Channels {
    Tt,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Closed-form working-area equations
    Analytic,
    /// Numerical search for minima of |ψ_tt|²
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteArg {
    Residual,
    Lattice,
    Pair,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Residual => Suite::Residual,
            SuiteArg::Lattice => Suite::Lattice,
            SuiteArg::Pair => Suite::Pair,
            SuiteArg::All => Suite::All,
        }
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    s.parse().map_err(|e: chiral_diode::Error| e.to_string())
}

/// Photon scattering off a cavity chirally coupled to a waveguide.
#[derive(Debug, Parser)]
#[command(name = "chiral-diode", version)]
struct Cli {
    /// JSON file with run settings; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Single-photon T, R and loss over detuning and γ1/Γ
    Single {
        #[command(flatten)]
        rates: RateFlags,
        /// Detuning (ω_k − ω_a)/Γ, `lo:hi:count` [default: -4:4:401]
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        detuning: Option<Grid>,
        /// γ1/Γ, a value or `lo:hi:count` [default: 1]
        #[arg(long, value_parser = parse_grid)]
        gamma1: Option<Grid>,
        #[arg(long, value_enum)]
        direction: Option<DirectionArg>,
        /// Output file [default: stdout]
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// csv or json
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Two-photon density map |ψ(x1, x2)|² (x in units of 1/Γ)
    Twomap {
        #[command(flatten)]
        rates: RateFlags,
        /// γ1/Γ [default: 1]
        #[arg(long)]
        gamma1: Option<f64>,
        #[arg(long, value_enum)]
        resonance: Option<ResonanceArg>,
        #[arg(long, value_enum)]
        direction: Option<DirectionArg>,
        /// Γx1 and Γx2 axis, `lo:hi:count` [default: -5:5:401]
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        x: Option<Grid>,
        /// tt, or all to add the reflected channels
        #[arg(long, value_enum)]
        channels: Option<Channels>,
        /// Output file [default: stdout]
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// csv or bin (bin needs --output and carries |ψ_tt|² only)
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Positions Γ|x| at which left-incident transmission vanishes
    WorkingArea {
        #[command(flatten)]
        rates: RateFlags,
        #[arg(long, value_enum)]
        resonance: Option<ResonanceArg>,
        /// analytic or scan
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// γ1/Γ grid [default: 0:1:401]
        #[arg(long, value_parser = parse_grid)]
        gamma1: Option<Grid>,
        /// Γ|x| grid searched by the scan [default: 0:20:2001]
        #[arg(long, value_parser = parse_grid)]
        gamma_x: Option<Grid>,
        /// Largest Γ|x| reported at two-photon resonance [default: 20]
        #[arg(long)]
        ceiling: Option<f64>,
        /// Output file [default: stdout]
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// csv or json
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run the verification oracles; exits 2 if a gating check fails
    Verify {
        #[arg(long, value_enum)]
        suite: Option<SuiteArg>,
        /// Seed of the residual draws
        #[arg(long)]
        seed: Option<u64>,
        /// Where to write the JSON report [default: stdout]
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Regenerate the data behind one figure, plus a manifest
    Reproduce {
        #[arg(value_enum)]
        figure: figures::Figure,
        /// Points along each dense axis [default: 401]
        #[arg(long)]
        grid: Option<usize>,
        /// Output directory [default: figures]
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_VAR} must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Single {
            rates,
            detuning,
            gamma1,
            direction,
            output,
            format,
        } => {
            let (params, block_fraction) = resolve_rates(&rates, &cfg)?;
            let fallback = block_fraction.map_or("1".to_string(), |f| format!("{f:?}"));
            let gamma1 = grid_or(gamma1, &cfg.gamma1, "gamma1", &fallback)?;
            let detuning = grid_or(detuning, &cfg.detuning, "detuning", "-4:4:401")?;
            let direction = direction.or(cfg.direction).unwrap_or(DirectionArg::Left).into();
            let rows = sweep_single(&params, &detuning, &gamma1, direction)?;
            let output = output.or(cfg.output);
            match format.or(cfg.format).unwrap_or(Format::Csv) {
                Format::Csv => emit(output.as_deref(), |w| export::write_sweep_csv(w, &rows)),
                Format::Json => emit(output.as_deref(), |w| json_to(w, &rows)),
                Format::Bin => Err(CliError::Validation("single supports csv or json".into())),
            }
        }
        Command::Twomap {
            rates,
            gamma1,
            resonance,
            direction,
            x,
            channels,
            output,
            format,
        } => {
            let (base, block_fraction) = resolve_rates(&rates, &cfg)?;
            let fraction = match (gamma1, &cfg.gamma1) {
                (Some(f), _) => f,
                (None, Some(g)) => {
                    let g = g.to_grid("gamma1")?;
                    if g.count != 1 {
                        return Err(CliError::Validation("twomap takes a single gamma1 value".into()));
                    }
                    g.lo
                }
                (None, None) => block_fraction.unwrap_or(1.0),
            };
            let params = base.with_gamma1_fraction(fraction)?;
            let case: Resonance = resonance.or(cfg.resonance).unwrap_or(ResonanceArg::SinglePhoton).into();
            let direction = direction.or(cfg.direction).unwrap_or(DirectionArg::Left).into();
            let x = grid_or(x, &cfg.x, "x", "-5:5:401")?;
            let channels = match channels.or(cfg.channels).unwrap_or(Channels::Tt) {
                Channels::Tt => MapChannels::Transmitted,
                Channels::All => MapChannels::All,
            };
            let field = TwoPhotonField::new(&params, &TwoPhotonIn::at_resonance(&params, direction, case));
            let map = figures::scaled_map(&field, &x, channels)?;
            let output = output.or(cfg.output);
            match format.or(cfg.format).unwrap_or(Format::Csv) {
                Format::Csv => emit(output.as_deref(), |w| export::write_map_csv(w, &map)),
                Format::Bin => match output {
                    Some(p) => emit(Some(&p), |w| export::write_map_binary(w, &map)),
                    None => Err(CliError::Validation("binary maps need --output".into())),
                },
                Format::Json => Err(CliError::Validation("twomap supports csv or bin".into())),
            }
        }
        Command::WorkingArea {
            rates,
            resonance,
            method,
            gamma1,
            gamma_x,
            ceiling,
            output,
            format,
        } => {
            let (base, _) = resolve_rates(&rates, &cfg)?;
            let case: Resonance = resonance.or(cfg.resonance).unwrap_or(ResonanceArg::SinglePhoton).into();
            let method = method.or(cfg.method).unwrap_or(Method::Analytic);
            let format = format.or(cfg.format).unwrap_or(Format::Csv);
            let output = output.or(cfg.output);
            let fractions = grid_or(gamma1, &cfg.gamma1, "gamma1", "0:1:401")?;
            if format == Format::Bin {
                return Err(CliError::Validation("working-area supports csv or json".into()));
            }
            match method {
                Method::Analytic => {
                    let curve = match case {
                        Resonance::SinglePhoton => working_area_single_res(&base, &fractions),
                        Resonance::TwoPhoton => {
                            let ceiling = ceiling.or(cfg.ceiling).unwrap_or(TwoResOptions::default().ceiling);
                            if !(ceiling.is_finite() && ceiling > 0.0) {
                                return Err(CliError::Validation("ceiling must be finite and > 0".into()));
                            }
                            working_area_two_res(&base, &TwoResOptions { ceiling, ..Default::default() })
                        }
                    };
                    match format {
                        Format::Csv => emit(output.as_deref(), |w| export::write_curve_csv(w, &curve)),
                        _ => emit(output.as_deref(), |w| json_to(w, &curve)),
                    }
                }
                Method::Scan => {
                    let gx = grid_or(gamma_x, &cfg.gamma_x, "gamma_x", "0:20:2001")?;
                    let input = TwoPhotonIn::at_resonance(&base, Direction::LeftIncident, case);
                    let scan = numeric_zero_scan(&base, &input, &fractions, &gx, &Default::default())?;
                    match format {
                        Format::Csv => {
                            let rows: Vec<Vec<f64>> = scan
                                .minima
                                .iter()
                                .map(|m| {
                                    vec![
                                        m.gamma1_over_gamma,
                                        m.gamma_abs_x,
                                        m.density,
                                        f64::from(u8::from(m.below_threshold)),
                                    ]
                                })
                                .collect();
                            emit(output.as_deref(), |w| {
                                export::write_table(w, "gamma1_over_Gamma,Gamma_abs_x,psi_tt_sq,below_threshold", &rows)
                            })
                        }
                        _ => emit(output.as_deref(), |w| json_to(w, &scan)),
                    }
                }
            }
        }
        Command::Verify { suite, seed, output } => {
            let suite: Suite = suite.or(cfg.suite).unwrap_or(SuiteArg::Residual).into();
            let seed = seed.or(cfg.seed).unwrap_or(verification::DEFAULT_SEED);
            let report = verification::run_suite(suite, seed)?;
            emit(output.or(cfg.output).as_deref(), |w| json_to(w, &report))?;
            if report.passed {
                Ok(())
            } else {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| c.gating && !c.pass)
                    .map(|c| c.name.as_str())
                    .collect();
                Err(CliError::Verification(format!("failed checks: {}", failed.join(", "))))
            }
        }
        Command::Reproduce { figure, grid, out_dir } => {
            let count = grid.or(cfg.grid).unwrap_or(401);
            if count < 2 {
                return Err(CliError::Validation("--grid must be at least 2".into()));
            }
            let dir = out_dir.or(cfg.output).unwrap_or_else(|| PathBuf::from("figures"));
            figures::reproduce(figure, count, &dir)
        }
    }
}

fn json_to<W: Write, T: serde::Serialize>(mut w: W, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)
}

/// Write to `path`, or stdout when absent.
pub fn emit<F>(path: Option<&Path>, write: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write(&mut w).and_then(|_| w.flush()).map_err(CliError::from)
        }
    }
}
