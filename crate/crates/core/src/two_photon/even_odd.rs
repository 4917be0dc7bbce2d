//! Two-photon amplitudes in the even/odd basis.
//!
//! Every amplitude is a finite sum of exponentials inside each region bounded
//! by the lines x1 = 0, x2 = 0 and x1 = x2, so alongside each value we return
//! the action of the transport operator −i(∂1 + ∂2) (or −i d/dx for the
//! one-photon-in-cavity amplitudes), computed term by term.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use super::{bound_coeffs, BoundStateCoeffs};
use crate::model::{ModelParams, TwoPhotonIn};
use crate::single_photon;

/// Which side of a discontinuity a coordinate is approached from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Below,
    /// On the line itself; step functions take the midpoint value 1/2.
    At,
    Above,
}

/// A coordinate together with the side it is approached from. Only matters
/// when the coordinate lies exactly on a discontinuity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lim {
    pub x: f64,
    pub side: Side,
}

impl Lim {
    pub fn at(x: f64) -> Self {
        Self { x, side: Side::At }
    }

    pub fn below(x: f64) -> Self {
        Self { x, side: Side::Below }
    }

    pub fn above(x: f64) -> Self {
        Self { x, side: Side::Above }
    }

    fn offset(self) -> i8 {
        match self.side {
            Side::Below => -1,
            Side::At => 0,
            Side::Above => 1,
        }
    }

    /// `self − other`, keeping track of the approach direction.
    fn minus(self, other: Lim) -> Lim {
        let side = match (self.offset() - other.offset()).signum() {
            -1 => Side::Below,
            0 => Side::At,
            _ => Side::Above,
        };
        Lim { x: self.x - other.x, side }
    }
}

impl From<f64> for Lim {
    fn from(x: f64) -> Self {
        Lim::at(x)
    }
}

/// Heaviside step with θ(0) = 1/2 unless a side is given.
fn theta(l: Lim) -> f64 {
    if l.x > 0.0 {
        1.0
    } else if l.x < 0.0 {
        0.0
    } else {
        match l.side {
            Side::Below => 0.0,
            Side::At => 0.5,
            Side::Above => 1.0,
        }
    }
}

/// An amplitude value and the transport operator applied to it.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Val {
    pub value: Complex64,
    pub transport: Complex64,
}

impl std::ops::Add for Val {
    type Output = Val;
    fn add(self, o: Val) -> Val {
        Val {
            value: self.value + o.value,
            transport: self.transport + o.transport,
        }
    }
}

impl std::ops::Mul<f64> for Val {
    type Output = Val;
    fn mul(self, s: f64) -> Val {
        Val {
            value: self.value * s,
            transport: self.transport * s,
        }
    }
}

/// c·e^{iqx}; −i d/dx gives q times the value.
fn wave(c: Complex64, q: Complex64, x: f64) -> Val {
    let value = c * (I * q * x).exp();
    Val {
        value,
        transport: q * value,
    }
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Evaluator for all even/odd amplitudes of one (params, input) pair.
///
/// These do not depend on the direction of incidence; the chiral channels
/// for right incidence follow from mirroring the coordinates.
#[derive(Debug, Clone, Copy)]
pub struct EvenOdd {
    k: [f64; 2],
    t: [Complex64; 2],
    omega: f64,
    /// i(ω − 2ω_a) − (κ + Γ)
    a: Complex64,
    c: BoundStateCoeffs,
}

impl EvenOdd {
    pub fn new(params: &ModelParams, input: &TwoPhotonIn) -> Self {
        let (w1, w2) = (input.omega_k1(), input.omega_k2());
        Self {
            k: [w1, w2],
            t: [
                single_photon::even_mode_t(params, w1),
                single_photon::even_mode_t(params, w2),
            ],
            omega: input.omega(),
            a: Complex64::new(-(params.kappa() + params.gamma()), input.omega() - 2.0 * params.omega_a()),
            c: bound_coeffs(params, input),
        }
    }

    pub fn coeffs(&self) -> &BoundStateCoeffs {
        &self.c
    }

    /// Even-mode single-photon factor θ(−x) + t·θ(x), without the phase.
    fn w(&self, i: usize, x: Lim) -> Complex64 {
        let th = theta(x);
        Complex64::new(1.0 - th, 0.0) + self.t[i] * th
    }

    /// Symmetrised plane-wave product with per-photon weights.
    /// Both exponentials carry total wavenumber ω, so transport = ω·value.
    fn pair(&self, w_a: Complex64, w_b: Complex64, x1: f64, x2: f64) -> Val {
        let [k1, k2] = self.k;
        let value = (w_a * Complex64::from_polar(1.0, k1 * x1 + k2 * x2)
            + w_b * Complex64::from_polar(1.0, k2 * x1 + k1 * x2))
            / (2.0 * SQRT_2 * PI);
        Val {
            value,
            transport: self.omega * value,
        }
    }

    /// Bound term D·e^{iω(x1+x2)/2}·e^{a(x2−x1)/2}, used for x2 ≥ x1.
    fn bound(&self, x1: f64, x2: f64) -> Val {
        let value = self.c.d * Complex64::from_polar(1.0, 0.5 * self.omega * (x1 + x2)) * (self.a * (0.5 * (x2 - x1))).exp();
        Val {
            value,
            transport: self.omega * value,
        }
    }

    /// φ_ee(x1, x2), two photons in the even mode.
    pub fn phi_ee(&self, x1: impl Into<Lim>, x2: impl Into<Lim>) -> Val {
        let (l1, l2) = (x1.into(), x2.into());
        let mut out = self.pair(
            self.w(0, l1) * self.w(1, l2),
            self.w(0, l2) * self.w(1, l1),
            l1.x,
            l2.x,
        );
        let upper = theta(l2.minus(l1)) * theta(l1);
        if upper != 0.0 {
            out = out + self.bound(l1.x, l2.x) * upper;
        }
        let lower = theta(l1.minus(l2)) * theta(l2);
        if lower != 0.0 {
            out = out + self.bound(l2.x, l1.x) * lower;
        }
        out
    }

    /// φ_ae(x), one even-mode photon and one cavity photon.
    pub fn phi_ae(&self, x: impl Into<Lim>) -> Val {
        let l = x.into();
        let th = theta(l);
        let [k1, k2] = self.k.map(|k| Complex64::new(k, 0.0));
        let mut out = Val::default();
        if th != 1.0 {
            out = out + (wave(self.c.m_a1, k1, l.x) + wave(self.c.m_a2, k2, l.x)) * (1.0 - th);
        }
        if th != 0.0 {
            out = out
                + (wave(self.c.beta_k1, k1, l.x) + wave(self.c.beta_k2, k2, l.x) + wave(self.c.chi, self.c.rho, l.x))
                    * th;
        }
        out
    }

    /// φ_oe(x1, x2): x1 in the odd mode, x2 in the even mode.
    pub fn phi_oe(&self, x1: impl Into<Lim>, x2: impl Into<Lim>) -> Val {
        let (l1, l2) = (x1.into(), x2.into());
        self.pair(self.w(1, l2), self.w(0, l2), l1.x, l2.x)
    }

    /// φ_eo(x1, x2) = φ_oe(x2, x1).
    pub fn phi_eo(&self, x1: impl Into<Lim>, x2: impl Into<Lim>) -> Val {
        self.phi_oe(x2, x1)
    }

    /// φ_oo(x1, x2), free symmetrised plane waves.
    pub fn phi_oo(&self, x1: f64, x2: f64) -> Val {
        let one = Complex64::new(1.0, 0.0);
        self.pair(one, one, x1, x2)
    }

    /// φ_oa(x), one odd-mode photon and one cavity photon.
    pub fn phi_oa(&self, x: f64) -> Val {
        let [k1, k2] = self.k.map(|k| Complex64::new(k, 0.0));
        wave(self.c.sigma_k1, k1, x) + wave(self.c.sigma_k2, k2, x)
    }

    pub fn phi_aa(&self) -> Complex64 {
        self.c.phi_aa
    }
}

/// Snapshot of every even/odd amplitude at one coordinate pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvenOddAmplitudes {
    pub phi_ee: Complex64,
    /// φ_ae at x1 and at x2.
    pub phi_ae: [Complex64; 2],
    pub phi_oe: Complex64,
    pub phi_eo: Complex64,
    pub phi_oo: Complex64,
    /// φ_oa at x1 and at x2.
    pub phi_oa: [Complex64; 2],
    pub phi_aa: Complex64,
}

/// All even/odd amplitudes at (x1, x2), with θ(0) = 1/2 on discontinuities.
pub fn even_odd_amplitudes(params: &ModelParams, input: &TwoPhotonIn, x1: f64, x2: f64) -> EvenOddAmplitudes {
    let e = EvenOdd::new(params, input);
    EvenOddAmplitudes {
        phi_ee: e.phi_ee(x1, x2).value,
        phi_ae: [e.phi_ae(x1).value, e.phi_ae(x2).value],
        phi_oe: e.phi_oe(x1, x2).value,
        phi_eo: e.phi_eo(x1, x2).value,
        phi_oo: e.phi_oo(x1, x2).value,
        phi_oa: [e.phi_oa(x1).value, e.phi_oa(x2).value],
        phi_aa: e.phi_aa(),
    }
}
