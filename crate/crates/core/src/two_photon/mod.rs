//! Two-photon scattering state of the chiral Kerr cavity.
//!
//! [`TwoPhotonField`] evaluates the outgoing wavefunctions in the chiral
//! channels (both transmitted, both reflected, one of each) for either
//! incidence direction. [`EvenOdd`] gives the underlying amplitudes in the
//! even/odd basis, including the cavity components, and is what the residual
//! oracle checks.

mod even_odd;

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::model::{Direction, ModelParams, Resonance, TwoPhotonIn, RATE_TOLERANCE};
use crate::single_photon;

pub use even_odd::{even_odd_amplitudes, EvenOdd, EvenOddAmplitudes, Lim, Side, Val};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Constants of the two-photon bound state. They depend on Γ, κ, U and the
/// incident frequencies but not on how Γ splits between γ1 and γ2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundStateCoeffs {
    pub m_a1: Complex64,
    pub m_a2: Complex64,
    pub chi: Complex64,
    pub rho: Complex64,
    #[serde(rename = "D")]
    pub d: Complex64,
    pub beta_k1: Complex64,
    pub beta_k2: Complex64,
    pub sigma_k1: Complex64,
    pub sigma_k2: Complex64,
    pub phi_aa: Complex64,
}

pub fn bound_coeffs(params: &ModelParams, input: &TwoPhotonIn) -> BoundStateCoeffs {
    let g = params.gamma();
    let sg = g.sqrt();
    let k = params.half_linewidth();
    let d1 = input.omega_k1() - params.omega_a();
    let d2 = input.omega_k2() - params.omega_a();
    let u = params.u();

    let m_a1 = sg / (2.0 * PI * Complex64::new(d2, k));
    let m_a2 = sg / (2.0 * PI * Complex64::new(d1, k));
    // ω_a − ω/2 + U − i(κ+Γ)/2
    let q = Complex64::new(u - 0.5 * (d1 + d2), -k);
    let chi = 4.0 * PI * I * sg * u * m_a1 * m_a2 / q;
    let d = -I * (0.5 * g).sqrt() * chi;
    let rho = Complex64::new(input.omega() - params.omega_a(), k);
    let t1 = single_photon::even_mode_t(params, input.omega_k1());
    let t2 = single_photon::even_mode_t(params, input.omega_k2());
    let phi_aa = -sg * (m_a1 + m_a2) / (SQRT_2 * q);

    BoundStateCoeffs {
        m_a1,
        m_a2,
        chi,
        rho,
        d,
        beta_k1: m_a1 * t1,
        beta_k2: m_a2 * t2,
        sigma_k1: m_a1 / SQRT_2,
        sigma_k2: m_a2 / SQRT_2,
        phi_aa,
    }
}

/// Symmetrised two-photon plane wave,
/// (e^{i(k1x1+k2x2)} + e^{i(k1x2+k2x1)})/(2√2π).
pub fn plane_pair(k1: f64, k2: f64, x1: f64, x2: f64) -> Complex64 {
    let a = Complex64::from_polar(1.0, k1 * x1 + k2 * x2);
    let b = Complex64::from_polar(1.0, k1 * x2 + k2 * x1);
    (a + b) / (2.0 * SQRT_2 * PI)
}

/// Plane-wave normalisation of the mixed (one reflected, one transmitted)
/// channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum RtConvention {
    /// Obtained by transforming the even/odd amplitudes to the chiral basis:
    /// (1/2π)[t1·r2·e^{i(k1x1−k2x2)} + r1·t2·e^{i(k2x1−k1x2)}] for left incidence.
    #[default]
    Derived,
    /// (1/4π)[φ_k(x1,−x2)·t1·r2 + φ_k(−x2,x1)·r1·t2] for left incidence.
    Printed,
}

/// Outgoing two-photon wavefunction for a fixed parameter set and input.
///
/// All amplitudes are cached at construction; point evaluation does not
/// allocate.
#[derive(Debug, Clone, Copy)]
pub struct TwoPhotonField {
    params: ModelParams,
    input: TwoPhotonIn,
    coeffs: BoundStateCoeffs,
    t: [Complex64; 2],
    r: [Complex64; 2],
    /// +1 for left incidence, −1 for right incidence.
    sign: f64,
    /// i(ω − 2ω_a) − (κ + Γ)
    a: Complex64,
    pref_tt: f64,
    pref_rr: f64,
    pref_rt: f64,
}

impl TwoPhotonField {
    pub fn new(params: &ModelParams, input: &TwoPhotonIn) -> Self {
        let dir = input.direction();
        let (w1, w2) = (input.omega_k1(), input.omega_k2());
        let t = [
            single_photon::transmission(params, w1, dir),
            single_photon::transmission(params, w2, dir),
        ];
        let r = [single_photon::reflection(params, w1), single_photon::reflection(params, w2)];
        let g = params.gamma();
        let (g_in, g_out) = match dir {
            Direction::LeftIncident => (params.gamma1(), params.gamma2()),
            Direction::RightIncident => (params.gamma2(), params.gamma1()),
        };
        Self {
            params: *params,
            input: *input,
            coeffs: bound_coeffs(params, input),
            t,
            r,
            sign: match dir {
                Direction::LeftIncident => 1.0,
                Direction::RightIncident => -1.0,
            },
            a: Complex64::new(-(params.kappa() + g), input.omega() - 2.0 * params.omega_a()),
            pref_tt: g_in * g_in / (g * g),
            pref_rr: params.gamma1() * params.gamma2() / (g * g),
            pref_rt: (2.0 * g_in.powi(3) * g_out).sqrt() / (g * g),
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn input(&self) -> &TwoPhotonIn {
        &self.input
    }

    pub fn coeffs(&self) -> &BoundStateCoeffs {
        &self.coeffs
    }

    /// Single-photon transmission amplitudes at ω_k1 and ω_k2 for this direction.
    pub fn transmission(&self) -> [Complex64; 2] {
        self.t
    }

    pub fn reflection(&self) -> [Complex64; 2] {
        self.r
    }

    fn k(&self) -> (f64, f64) {
        (self.input.omega_k1(), self.input.omega_k2())
    }

    /// Bound envelope e^{a|s|/2}·D; `s` is x or 2·x_c depending on channel.
    fn envelope(&self, s: f64) -> Complex64 {
        self.coeffs.d * (self.a * (0.5 * s.abs())).exp()
    }

    /// Plane-wave and bound parts of ψ_tt, separately.
    pub fn psi_tt_parts(&self, x1: f64, x2: f64) -> (Complex64, Complex64) {
        let (k1, k2) = self.k();
        let s = self.sign;
        let plane = plane_pair(k1, k2, s * x1, s * x2) * self.t[0] * self.t[1];
        let xc = 0.5 * (x1 + x2);
        let phase = Complex64::from_polar(1.0, s * self.input.omega() * xc);
        let bound = self.pref_tt * phase * self.envelope(x2 - x1);
        (plane, bound)
    }

    pub fn psi_tt(&self, x1: f64, x2: f64) -> Complex64 {
        let (p, b) = self.psi_tt_parts(x1, x2);
        p + b
    }

    pub fn psi_rr_parts(&self, x1: f64, x2: f64) -> (Complex64, Complex64) {
        let (k1, k2) = self.k();
        let s = self.sign;
        let plane = plane_pair(k1, k2, -s * x1, -s * x2) * self.r[0] * self.r[1];
        let xc = 0.5 * (x1 + x2);
        let phase = Complex64::from_polar(1.0, -s * self.input.omega() * xc);
        let bound = self.pref_rr * phase * self.envelope(x2 - x1);
        (plane, bound)
    }

    pub fn psi_rr(&self, x1: f64, x2: f64) -> Complex64 {
        let (p, b) = self.psi_rr_parts(x1, x2);
        p + b
    }

    /// Mixed channel: x1 is the transmitted photon, x2 the reflected one.
    pub fn psi_rt_parts(&self, x1: f64, x2: f64, conv: RtConvention) -> (Complex64, Complex64) {
        let (k1, k2) = self.k();
        let s = self.sign;
        let (t, r) = (self.t, self.r);
        let plane = match conv {
            RtConvention::Derived => {
                let a = Complex64::from_polar(1.0, s * (k1 * x1 - k2 * x2));
                let b = Complex64::from_polar(1.0, s * (k2 * x1 - k1 * x2));
                (t[0] * r[1] * a + r[0] * t[1] * b) / (2.0 * PI)
            }
            RtConvention::Printed => {
                (plane_pair(k1, k2, s * x1, -s * x2) * t[0] * r[1]
                    + plane_pair(k1, k2, -s * x2, s * x1) * r[0] * t[1])
                    / (4.0 * PI)
            }
        };
        let phase = Complex64::from_polar(1.0, -s * 0.5 * self.input.omega() * (x2 - x1));
        let bound = self.pref_rt * phase * self.envelope(x1 + x2);
        (plane, bound)
    }

    pub fn psi_rt_with(&self, x1: f64, x2: f64, conv: RtConvention) -> Complex64 {
        let (p, b) = self.psi_rt_parts(x1, x2, conv);
        p + b
    }

    pub fn psi_rt(&self, x1: f64, x2: f64) -> Complex64 {
        self.psi_rt_with(x1, x2, RtConvention::Derived)
    }
}

/// Free-function forms of the channel evaluators.
pub fn psi_tt(field: &TwoPhotonField, x1: f64, x2: f64) -> Complex64 {
    field.psi_tt(x1, x2)
}

pub fn psi_rr(field: &TwoPhotonField, x1: f64, x2: f64) -> Complex64 {
    field.psi_rr(x1, x2)
}

pub fn psi_rt(field: &TwoPhotonField, x1: f64, x2: f64) -> Complex64 {
    field.psi_rt(x1, x2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Asymptote {
    pub amplitude_sq: f64,
    pub decay_rate: f64,
}

/// Long-distance bound-state density for left incidence at γ1 = Γ:
/// |ψ_tt|² → amplitude_sq·e^{−decay_rate·|x|} wherever the plane part vanishes.
pub fn bound_asymptote(params: &ModelParams, case: Resonance) -> Result<Asymptote> {
    let g = params.gamma();
    if (params.gamma1() - g).abs() > RATE_TOLERANCE * g {
        return Err(Error::Domain(format!(
            "bound asymptote is defined for gamma1 = Gamma, got gamma1/Gamma = {}",
            params.gamma1() / g
        )));
    }
    let c = params.kappa() + g;
    let u2 = params.u() * params.u();
    let shift = match case {
        Resonance::SinglePhoton => 4.0 * u2,
        Resonance::TwoPhoton => 16.0 * u2,
    };
    Ok(Asymptote {
        amplitude_sq: 32.0 * g.powi(4) * u2 / (PI * PI * c.powi(4) * (shift + c * c)),
        decay_rate: c,
    })
}

/// Which densities to include in a map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MapChannels {
    #[default]
    Transmitted,
    All,
}

/// Densities on a square grid; entry (i, j) sits at (x[i], x[j]).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonMap {
    pub x: Vec<f64>,
    pub tt: Vec<f64>,
    pub rr: Option<Vec<f64>>,
    pub rt: Option<Vec<f64>>,
}

impl TwoPhotonMap {
    pub fn size(&self) -> usize {
        self.x.len()
    }

    pub fn tt_at(&self, i: usize, j: usize) -> f64 {
        self.tt[i * self.x.len() + j]
    }
}

pub fn map_two_photon(field: &TwoPhotonField, x_grid: &Grid, channels: MapChannels) -> TwoPhotonMap {
    let x = x_grid.values();
    let n = x.len();
    let all = channels == MapChannels::All;
    let rows: Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> = x
        .par_iter()
        .map(|&x1| {
            let mut tt = Vec::with_capacity(n);
            let mut rr = Vec::new();
            let mut rt = Vec::new();
            for &x2 in &x {
                tt.push(field.psi_tt(x1, x2).norm_sqr());
                if all {
                    rr.push(field.psi_rr(x1, x2).norm_sqr());
                    rt.push(field.psi_rt(x1, x2).norm_sqr());
                }
            }
            (tt, rr, rt)
        })
        .collect();
    let mut tt = Vec::with_capacity(n * n);
    let mut rr = Vec::with_capacity(if all { n * n } else { 0 });
    let mut rt = Vec::with_capacity(if all { n * n } else { 0 });
    for (a, b, c) in rows {
        tt.extend(a);
        rr.extend(b);
        rt.extend(c);
    }
    TwoPhotonMap {
        x,
        tt,
        rr: all.then_some(rr),
        rt: all.then_some(rt),
    }
}

#[cfg(test)]
mod tests;
