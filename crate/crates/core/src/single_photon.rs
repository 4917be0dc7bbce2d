//! Closed-form single-photon scattering.
//!
//! Only the even combination of right and left movers couples to the cavity.
//! Its transmission `t` fixes everything else: the chiral amplitudes are
//! `t̄ = (γ1·t + γ2)/Γ`, `t̃ = (γ2·t + γ1)/Γ` and `r = γ·(t − 1)/Γ` with
//! γ = √(γ1γ2), written out below in their reduced rational form.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::grid::Grid;
use crate::model::{Direction, ModelParams, PhotonIn, RATE_TOLERANCE};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Resonant denominator Δ + i(κ+Γ)/2.
fn denom(params: &ModelParams, omega_k: f64) -> Complex64 {
    Complex64::new(omega_k - params.omega_a(), params.half_linewidth())
}

/// Even-mode transmission amplitude at frequency `omega_k`.
pub fn even_mode_t(params: &ModelParams, omega_k: f64) -> Complex64 {
    let num = Complex64::new(omega_k - params.omega_a(), 0.5 * (params.kappa() - params.gamma()));
    num / denom(params, omega_k)
}

/// Cavity amplitude driven by a unit even-mode plane wave, √Γ/(Δ + i(κ+Γ)/2).
pub fn even_mode_cavity(params: &ModelParams, omega_k: f64) -> Complex64 {
    params.gamma().sqrt() / denom(params, omega_k)
}

/// Reflection amplitude; identical for both incidence directions.
pub fn reflection(params: &ModelParams, omega_k: f64) -> Complex64 {
    -I * (params.gamma1() * params.gamma2()).sqrt() / denom(params, omega_k)
}

/// Transmission amplitude for a photon entering from `direction`.
pub fn transmission(params: &ModelParams, omega_k: f64, direction: Direction) -> Complex64 {
    let asym = match direction {
        Direction::LeftIncident => params.gamma1() - params.gamma2(),
        Direction::RightIncident => params.gamma2() - params.gamma1(),
    };
    let num = Complex64::new(omega_k - params.omega_a(), 0.5 * (params.kappa() - asym));
    num / denom(params, omega_k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatterCoeffs {
    pub t: Complex64,
    pub r: Complex64,
    #[serde(rename = "T")]
    pub transmittance: f64,
    #[serde(rename = "R")]
    pub reflectance: f64,
    pub loss: f64,
}

impl ScatterCoeffs {
    fn from_amplitudes(t: Complex64, r: Complex64) -> Self {
        let transmittance = t.norm_sqr();
        let reflectance = r.norm_sqr();
        Self {
            t,
            r,
            transmittance,
            reflectance,
            loss: 1.0 - transmittance - reflectance,
        }
    }
}

pub fn chiral_coeffs(params: &ModelParams, photon: PhotonIn) -> ScatterCoeffs {
    ScatterCoeffs::from_amplitudes(
        transmission(params, photon.omega_k, photon.direction),
        reflection(params, photon.omega_k),
    )
}

/// Which direction, if any, has an exact transmission zero on resonance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiodeCondition {
    BlocksLeftIncident,
    BlocksRightIncident,
    NoBlock,
}

pub fn diode_condition(params: &ModelParams) -> DiodeCondition {
    let tol = RATE_TOLERANCE * params.gamma();
    let diff = params.gamma1() - params.gamma2();
    let k = params.kappa();
    // κ = |γ1 − γ2| = 0 is the symmetric lossless point: both directions
    // give t = -1, nothing is blocked.
    if diff.abs() <= tol {
        return DiodeCondition::NoBlock;
    }
    if (k - diff).abs() <= tol {
        DiodeCondition::BlocksLeftIncident
    } else if (k + diff).abs() <= tol {
        DiodeCondition::BlocksRightIncident
    } else {
        DiodeCondition::NoBlock
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub detuning_over_gamma: f64,
    pub gamma1_over_gamma: f64,
    #[serde(rename = "T")]
    pub transmittance: f64,
    #[serde(rename = "R")]
    pub reflectance: f64,
    pub loss: f64,
}

/// Transmittance, reflectance and loss over a grid of Δ/Γ and γ1/Γ.
///
/// Γ and κ are taken from `params`; γ2 follows as Γ − γ1. Rows are ordered
/// with detuning as the outer loop regardless of how the work is scheduled.
pub fn sweep_single(
    params: &ModelParams,
    detuning: &Grid,
    gamma1_fraction: &Grid,
    direction: Direction,
) -> Result<Vec<SweepRow>> {
    let g = params.gamma();
    let fractions = gamma1_fraction.values();
    let variants = fractions
        .iter()
        .map(|&f| params.with_gamma1_fraction(f))
        .collect::<Result<Vec<_>>>()?;
    let detunings = detuning.values();
    let n = fractions.len();
    let rows = (0..detunings.len() * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let p = &variants[j];
            let photon = PhotonIn {
                direction,
                omega_k: p.omega_a() + detunings[i] * g,
            };
            let c = chiral_coeffs(p, photon);
            SweepRow {
                detuning_over_gamma: detunings[i],
                gamma1_over_gamma: fractions[j],
                transmittance: c.transmittance,
                reflectance: c.reflectance,
                loss: c.loss,
            }
        })
        .collect();
    Ok(rows)
}
