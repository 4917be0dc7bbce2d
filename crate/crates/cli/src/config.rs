//! Optional JSON run configuration. Any key may be omitted; command-line
//! flags take precedence over the file, and the file over built-in defaults.

use std::path::{Path, PathBuf};

use chiral_diode::grid::Grid;
use chiral_diode::model::{make_params, ParamsConfig};
use chiral_diode::ModelParams;
use serde::Deserialize;

use crate::{CliError, Channels, DirectionArg, Format, Method, ResonanceArg, SuiteArg};

/// A grid given either as `"lo:hi:count"` or as a bare number.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridArg {
    Value(f64),
    Text(String),
}

impl GridArg {
    pub fn to_grid(&self, field: &str) -> Result<Grid, CliError> {
        let g = match self {
            GridArg::Value(v) => Grid::point(*v),
            GridArg::Text(s) => s.parse(),
        };
        g.map_err(|e| CliError::Validation(format!("config `{field}`: {e}")))
    }
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Absolute rates with the library's keys; `gamma1`/`gamma2` fix Γ and γ1/Γ.
    pub params: Option<ParamsConfig>,
    pub omega_a: Option<f64>,
    pub kappa: Option<f64>,
    #[serde(rename = "U")]
    pub u: Option<f64>,
    pub gamma: Option<f64>,
    pub gamma1: Option<GridArg>,
    pub detuning: Option<GridArg>,
    pub x: Option<GridArg>,
    pub gamma_x: Option<GridArg>,
    pub resonance: Option<ResonanceArg>,
    pub direction: Option<DirectionArg>,
    pub channels: Option<Channels>,
    pub method: Option<Method>,
    pub ceiling: Option<f64>,
    pub suite: Option<SuiteArg>,
    pub seed: Option<u64>,
    pub grid: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }
}

/// Rate flags shared by every computing subcommand. All values are in the
/// same units; `--gamma` is the total coupling Γ = γ1 + γ2.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct RateFlags {
    /// Cavity frequency ω_a
    #[arg(long, allow_hyphen_values = true)]
    pub omega_a: Option<f64>,
    /// Intrinsic cavity dissipation κ
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    /// Kerr strength U
    #[arg(long = "u", allow_hyphen_values = true)]
    pub u: Option<f64>,
    /// Total coupling Γ
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
}

/// Model rates after merging flags, file and defaults (ω_a = 0, κ = 1,
/// U = 10, Γ = 1). Also returns γ1/Γ when the file's `params` block fixes it.
pub fn resolve_rates(flags: &RateFlags, cfg: &RunConfig) -> Result<(ModelParams, Option<f64>), CliError> {
    let from_block = match &cfg.params {
        Some(p) => Some(ModelParams::try_from(*p).map_err(|e| CliError::Validation(format!("config `params`: {e}")))?),
        None => None,
    };
    let pick = |flag: Option<f64>, flat: Option<f64>, block: Option<f64>, default: f64| {
        flag.or(flat).or(block).unwrap_or(default)
    };
    let omega_a = pick(flags.omega_a, cfg.omega_a, from_block.map(|p| p.omega_a()), 0.0);
    let kappa = pick(flags.kappa, cfg.kappa, from_block.map(|p| p.kappa()), 1.0);
    let u = pick(flags.u, cfg.u, from_block.map(|p| p.u()), 10.0);
    let gamma = pick(flags.gamma, cfg.gamma, from_block.map(|p| p.gamma()), 1.0);
    let fraction = from_block.filter(|p| p.gamma() > 0.0).map(|p| p.gamma1() / p.gamma());
    let params = make_params(omega_a, kappa, u, gamma, 0.0).map_err(|e| CliError::Validation(e.to_string()))?;
    Ok((params, fraction))
}

/// Flag, then file value, then fallback.
pub fn grid_or(flag: Option<Grid>, file: &Option<GridArg>, field: &str, fallback: &str) -> Result<Grid, CliError> {
    match (flag, file) {
        (Some(g), _) => Ok(g),
        (None, Some(a)) => a.to_grid(field),
        (None, None) => Ok(fallback.parse().expect("built-in grid")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> RunConfig {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn flag_beats_flat_key_beats_block() {
        let c = cfg(r#"{"params": {"omega_a": 0, "kappa": 2, "U": 3, "gamma1": 1.5, "gamma2": 0.5}, "kappa": 0.5}"#);
        let (p, frac) = resolve_rates(&RateFlags::default(), &c).unwrap();
        assert_eq!((p.kappa(), p.u(), p.gamma()), (0.5, 3.0, 2.0));
        assert_eq!(frac, Some(0.75));

        let flags = RateFlags {
            kappa: Some(0.1),
            ..RateFlags::default()
        };
        assert_eq!(resolve_rates(&flags, &c).unwrap().0.kappa(), 0.1);
    }

    #[test]
    fn defaults_without_config() {
        let (p, frac) = resolve_rates(&RateFlags::default(), &RunConfig::default()).unwrap();
        assert_eq!((p.omega_a(), p.kappa(), p.u(), p.gamma(), p.gamma1()), (0.0, 1.0, 10.0, 1.0, 1.0));
        assert_eq!(frac, None);
    }

    #[test]
    fn grids_from_numbers_or_text() {
        let c = cfg(r#"{"gamma1": 0.25, "x": "-1:1:3"}"#);
        assert_eq!(grid_or(None, &c.gamma1, "gamma1", "0:1:5").unwrap().values(), vec![0.25]);
        assert_eq!(grid_or(None, &c.x, "x", "0:1:5").unwrap().values(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(grid_or(None, &None, "x", "0:1:2").unwrap().values(), vec![0.0, 1.0]);
        assert!(cfg(r#"{"x": "0:1:0"}"#).x.unwrap().to_grid("x").is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"kapa": 1}"#).is_err());
    }
}
