//! Discretised waveguide for one excitation.
//!
//! Each chiral channel is a chain of time bins of width dx. With v_c = 1 and
//! dt = dx, free propagation is an exact one-site shift, so there is neither
//! numerical dispersion nor diffusion. Between shifts the cavity exchanges
//! amplitude with the two bins sitting at the coupling point; that local
//! problem is integrated exactly through a matrix exponential. The only
//! approximation is the O(dt) splitting between the two steps.
//!
//! Nothing here uses the closed-form amplitudes; only [`ModelParams`] is
//! shared with the rest of the crate.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Direction, ModelParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Geometry and input packet of a lattice run.
///
/// The time step equals `dx` (see the module docs), so it is not a separate
/// field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeSpec {
    /// Sites per chiral channel; the cavity couples at site `n_sites / 2`.
    pub n_sites: usize,
    pub dx: f64,
    /// Spatial standard deviation σ of the input |ψ|² (spectral width 1/(2σ)).
    pub packet_width: f64,
    /// Sites in the absorbing ramp at the outgoing end of each channel.
    pub absorber_width: usize,
}

impl LatticeSpec {
    pub fn dt(&self) -> f64 {
        self.dx
    }

    pub fn center(&self) -> usize {
        self.n_sites / 2
    }

    /// Spec for a single-photon transmission measurement: packet narrow in
    /// frequency compared with the cavity linewidth (κ+Γ)/2.
    pub fn narrowband(params: &ModelParams) -> Self {
        let dx = 0.01 / params.gamma();
        let k = params.half_linewidth();
        // spectral width 1/(2σ) at most 2.5% of the half linewidth, σ ≥ 5/Γ
        let sigma = (20.0 / k).max(5.0 / params.gamma()).min(40.0 / params.gamma());
        let half = (10.0 * sigma / dx).ceil() as usize + 64;
        Self {
            n_sites: 2 * half,
            dx,
            packet_width: sigma,
            absorber_width: 32,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.check_geometry()?;
        self.check_room(10.0)
    }

    pub(crate) fn check_geometry(&self) -> Result<()> {
        if !(self.dx.is_finite() && self.dx > 0.0) {
            return Err(Error::param("dx", "must be finite and > 0"));
        }
        if !(self.packet_width.is_finite() && self.packet_width >= 4.0 * self.dx) {
            return Err(Error::param("packet_width", "must be at least 4 lattice spacings"));
        }
        if self.n_sites < 16 {
            return Err(Error::param("n_sites", "need at least 16 sites"));
        }
        if self.absorber_width == 0 || self.absorber_width >= self.n_sites / 4 {
            return Err(Error::param("absorber_width", "must be in 1..n_sites/4"));
        }
        Ok(())
    }

    /// The half lattice must hold `widths` packet widths.
    pub(crate) fn check_room(&self, widths: f64) -> Result<()> {
        let room = self.center() as f64 * self.dx;
        if room < widths * self.packet_width {
            return Err(Error::param(
                "n_sites",
                format!(
                    "half lattice {room} is shorter than {widths} packet widths ({})",
                    widths * self.packet_width
                ),
            ));
        }
        Ok(())
    }

    /// Ramp factor applied once per step at `depth` sites from the outgoing
    /// end (0 = last site, which is cleared completely).
    pub(crate) fn ramp(&self, depth: usize) -> f64 {
        let w = self.absorber_width as f64;
        let s = (w - depth as f64) / w;
        1.0 - s * s
    }
}

/// Gaussian packet amplitude at position x (centre x0, spatial σ, carrier q).
pub(crate) fn packet(x: f64, x0: f64, sigma: f64, q: f64) -> Complex64 {
    let d = x - x0;
    Complex64::from_polar((-d * d / (4.0 * sigma * sigma)).exp(), q * x)
}

/// Propagator for one step of the local problem {cavity, r bin, l bin} in the
/// frame rotating at ω_a.
pub(crate) fn local_propagator(params: &ModelParams, dt: f64) -> Matrix3<Complex64> {
    let g1 = Complex64::new((params.gamma1() / dt).sqrt(), 0.0);
    let g2 = Complex64::new((params.gamma2() / dt).sqrt(), 0.0);
    let z = Complex64::new(0.0, 0.0);
    let m = Matrix3::new(
        Complex64::new(0.0, -0.5 * params.kappa()),
        g1,
        g2,
        g1,
        z,
        z,
        g2,
        z,
        z,
    );
    (m * (-I * dt)).exp()
}

/// Chain stored as a ring buffer so that shifting is an offset change.
#[derive(Debug, Clone)]
pub(crate) struct Chain {
    data: Vec<Complex64>,
    offset: usize,
    rightward: bool,
}

impl Chain {
    pub(crate) fn new(n: usize, rightward: bool) -> Self {
        Self {
            data: vec![Complex64::new(0.0, 0.0); n],
            offset: 0,
            rightward,
        }
    }

    pub(crate) fn scale(&mut self, f: f64) {
        for v in &mut self.data {
            *v *= f;
        }
    }

    pub(crate) fn index(&self, site: usize) -> usize {
        let n = self.data.len();
        if self.rightward {
            (site + n - self.offset % n) % n
        } else {
            (site + self.offset) % n
        }
    }

    pub(crate) fn get(&self, site: usize) -> Complex64 {
        self.data[self.index(site)]
    }

    pub(crate) fn set(&mut self, site: usize, v: Complex64) {
        let i = self.index(site);
        self.data[i] = v;
    }

    /// Advance one site downstream. The site that wraps around must already
    /// be zero; the absorber guarantees that.
    pub(crate) fn shift(&mut self) {
        self.offset += 1;
    }

    /// Site at `depth` from the outgoing end.
    pub(crate) fn outgoing_site(&self, depth: usize) -> usize {
        if self.rightward {
            self.data.len() - 1 - depth
        } else {
            depth
        }
    }

    /// Apply the absorbing ramp; returns the norm removed.
    pub(crate) fn absorb(&mut self, spec: &LatticeSpec) -> f64 {
        let mut lost = 0.0;
        for depth in 0..spec.absorber_width {
            let site = self.outgoing_site(depth);
            let f = spec.ramp(depth);
            let v = self.get(site);
            lost += v.norm_sqr() * (1.0 - f * f);
            self.set(site, v * f);
        }
        lost
    }

    /// Norm on sites `range`.
    pub(crate) fn norm_over(&self, range: std::ops::Range<usize>) -> f64 {
        range.map(|s| self.get(s).norm_sqr()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeResult {
    #[serde(rename = "T")]
    pub transmittance: f64,
    #[serde(rename = "R")]
    pub reflectance: f64,
    pub loss: f64,
    /// Norm taken out by the absorbers (already counted in T and R).
    pub absorbed: f64,
    pub steps: usize,
}

/// One excitation on the lattice: two chains and the cavity.
#[derive(Debug, Clone)]
pub(crate) struct OnePhoton {
    pub(crate) r: Chain,
    pub(crate) l: Chain,
    pub(crate) cav: Complex64,
    pub(crate) absorbed_r: f64,
    pub(crate) absorbed_l: f64,
    prop: Matrix3<Complex64>,
}

impl OnePhoton {
    /// Normalised packet with carrier detuning `q` = ω_k − ω_a, centred half
    /// way between the upstream end and the cavity.
    pub(crate) fn launch(spec: &LatticeSpec, params: &ModelParams, q: f64, direction: Direction) -> Self {
        let n = spec.n_sites;
        let c = spec.center();
        let x0 = 0.5 * c as f64 * spec.dx;
        let mut r = Chain::new(n, true);
        let mut l = Chain::new(n, false);
        let mut norm = 0.0;
        for s in 0..n {
            let x = (s as f64 - c as f64) * spec.dx;
            match direction {
                Direction::LeftIncident if s < c => {
                    let v = packet(x, -x0, spec.packet_width, q);
                    norm += v.norm_sqr();
                    r.set(s, v);
                }
                Direction::RightIncident if s > c => {
                    let v = packet(x, x0, spec.packet_width, -q);
                    norm += v.norm_sqr();
                    l.set(s, v);
                }
                _ => {}
            }
        }
        let scale = 1.0 / norm.sqrt();
        r.scale(scale);
        l.scale(scale);
        Self {
            r,
            l,
            cav: Complex64::new(0.0, 0.0),
            absorbed_r: 0.0,
            absorbed_l: 0.0,
            prop: local_propagator(params, spec.dt()),
        }
    }

    /// Shift, absorb, then let the cavity interact with the bins at the centre.
    pub(crate) fn step(&mut self, spec: &LatticeSpec) {
        let c = spec.center();
        self.r.shift();
        self.l.shift();
        self.absorbed_r += self.r.absorb(spec);
        self.absorbed_l += self.l.absorb(spec);
        let v = self.prop * Vector3::new(self.cav, self.r.get(c), self.l.get(c));
        self.cav = v[0];
        self.r.set(c, v[1]);
        self.l.set(c, v[2]);
    }

    /// Norm still upstream of the cavity or inside it.
    pub(crate) fn pending(&self, spec: &LatticeSpec) -> f64 {
        let c = spec.center();
        self.cav.norm_sqr() + self.r.norm_over(0..c) + self.l.norm_over(c + 1..spec.n_sites)
    }
}

/// Send a narrow Gaussian packet with carrier frequency `omega_k` at the
/// cavity and measure the transmitted, reflected and lost fractions once
/// the packet and the cavity field have cleared.
pub fn lattice_transmission(
    spec: &LatticeSpec,
    params: &ModelParams,
    omega_k: f64,
    direction: Direction,
) -> Result<LatticeResult> {
    spec.validate()?;
    if !omega_k.is_finite() {
        return Err(Error::param("omega_k", "must be finite"));
    }
    let n = spec.n_sites;
    let c = spec.center();
    let mut state = OnePhoton::launch(spec, params, omega_k - params.omega_a(), direction);
    let min_steps = c / 2 + (5.0 * spec.packet_width / spec.dx).ceil() as usize;
    let max_steps = 64 * n;
    let mut steps = 0;
    loop {
        state.step(spec);
        steps += 1;
        if steps >= min_steps && steps % 64 == 0 {
            let pending = state.pending(spec);
            if pending < 1e-12 {
                break;
            }
            if steps >= max_steps {
                return Err(Error::Lattice(format!(
                    "packet not cleared after {steps} steps (remaining norm {pending:e})"
                )));
            }
        }
    }

    let forward = state.r.norm_over(c..n) + state.absorbed_r;
    let backward = state.l.norm_over(0..c + 1) + state.absorbed_l;
    let (t, rr) = match direction {
        Direction::LeftIncident => (forward, backward),
        Direction::RightIncident => (backward, forward),
    };
    Ok(LatticeResult {
        transmittance: t,
        reflectance: rr,
        loss: 1.0 - t - rr,
        absorbed: state.absorbed_r + state.absorbed_l,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_params;

    fn quick() -> LatticeSpec {
        LatticeSpec {
            n_sites: 4000,
            dx: 0.05,
            packet_width: 8.0,
            absorber_width: 16,
        }
    }

    #[test]
    fn chain_shift_and_wrap() {
        let mut r = Chain::new(5, true);
        r.set(1, Complex64::new(1.0, 0.0));
        r.shift();
        assert_eq!(r.get(2), Complex64::new(1.0, 0.0));
        assert_eq!(r.get(1), Complex64::new(0.0, 0.0));
        let mut l = Chain::new(5, false);
        l.set(3, Complex64::new(2.0, 0.0));
        l.shift();
        assert_eq!(l.get(2), Complex64::new(2.0, 0.0));
        assert_eq!(l.outgoing_site(0), 0);
        assert_eq!(r.outgoing_site(0), 4);
    }

    #[test]
    fn lossless_local_step_is_unitary() {
        let p = make_params(0.0, 0.0, 0.0, 0.3, 0.8).unwrap();
        let u = local_propagator(&p, 0.01);
        let id = u.adjoint() * u;
        assert!((id - Matrix3::identity()).norm() < 1e-12);
    }

    #[test]
    fn uncoupled_direction_passes_freely() {
        let p = make_params(0.0, 1.0, 0.0, 1.0, 0.0).unwrap();
        let res = lattice_transmission(&quick(), &p, 0.0, Direction::RightIncident).unwrap();
        assert!((res.transmittance - 1.0).abs() < 1e-12);
        assert!(res.reflectance < 1e-20);
    }

    #[test]
    fn lossless_norm_is_conserved() {
        let p = make_params(0.0, 0.0, 0.0, 0.5, 0.5).unwrap();
        let res = lattice_transmission(&quick(), &p, 0.3, Direction::LeftIncident).unwrap();
        assert!(res.loss.abs() < 1e-8, "{res:?}");
    }

    #[test]
    fn rejects_cramped_lattice() {
        let p = make_params(0.0, 1.0, 0.0, 1.0, 0.0).unwrap();
        let spec = LatticeSpec {
            n_sites: 200,
            dx: 0.05,
            packet_width: 8.0,
            absorber_width: 8,
        };
        assert!(matches!(
            lattice_transmission(&spec, &p, 0.0, Direction::LeftIncident),
            Err(Error::InvalidParameter { field: "n_sites", .. })
        ));
    }

    #[test]
    fn ideal_diode_blocks_left_incidence() {
        let p = make_params(0.0, 1.0, 0.0, 1.0, 0.0).unwrap();
        let spec = LatticeSpec::narrowband(&p);
        let res = lattice_transmission(&spec, &p, 0.0, Direction::LeftIncident).unwrap();
        assert!(res.transmittance < 0.02 && res.reflectance < 1e-4, "{res:?}");
        let res = lattice_transmission(&spec, &p, 0.0, Direction::RightIncident).unwrap();
        assert!(res.transmittance > 0.98, "{res:?}");
    }

    #[test]
    fn lossless_symmetric_cavity_reflects() {
        let p = make_params(0.0, 0.0, 0.0, 0.5, 0.5).unwrap();
        let res = lattice_transmission(&LatticeSpec::narrowband(&p), &p, 0.0, Direction::LeftIncident).unwrap();
        assert!(res.reflectance > 0.97 && res.transmittance < 0.03, "{res:?}");
    }

    #[test]
    fn norm_never_grows() {
        let total = |s: &OnePhoton, n: usize| {
            s.cav.norm_sqr() + s.r.norm_over(0..n) + s.l.norm_over(0..n) + s.absorbed_r + s.absorbed_l
        };
        let spec = quick();
        for kappa in [0.7, 0.0] {
            let p = make_params(0.0, kappa, 0.0, 0.6, 0.4).unwrap();
            let mut s = OnePhoton::launch(&spec, &p, 0.1, Direction::LeftIncident);
            let start = total(&s, spec.n_sites);
            let mut prev = start;
            for _ in 0..3000 {
                s.step(&spec);
                let now = total(&s, spec.n_sites);
                assert!(now <= prev + 1e-13);
                prev = now;
            }
            if kappa == 0.0 {
                assert!((prev - start).abs() < 1e-8);
            } else {
                assert!(prev < start - 1e-3);
            }
        }
    }
}
