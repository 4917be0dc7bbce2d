//! Two excitations on the discretised waveguide, Kerr term included.
//!
//! Same time-bin picture as the one-photon lattice: both photons shift by one
//! site per step and then interact with the cavity at the centre site. Pair
//! amplitudes are stored as full symmetric (or, for one photon in each
//! channel, rectangular) arrays A with Σ|A|² = 1 over all index pairs.
//!
//! The collision step factorises into independent blocks. A photon sitting
//! away from the centre is a spectator, and the other excitation sees the
//! one-photon propagator. When both excitations are local, a 6×6 block on
//! {2 in cavity, r+cavity, l+cavity, 2 r, r+l, 2 l} carries the Kerr shift 2U.
//!
//! Right incidence is run as left incidence with γ1 and γ2 exchanged.

use nalgebra::{Matrix3, Matrix6, Vector3, Vector6};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::SQRT_2;

use super::lattice::{local_propagator, packet, LatticeSpec};
use crate::error::{Error, Result};
use crate::model::{Direction, ModelParams, TwoPhotonIn};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest chain the pair arrays are built for.
pub const MAX_PAIR_SITES: usize = 256;

/// Transmitted pair density along the relative coordinate, through the
/// point of highest coincidence density.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoLatticeResult {
    /// Photon separation |x1 − x2|.
    pub separation: Vec<f64>,
    /// Pair density |A_tt|² at that separation, normalised to 1 at zero.
    pub density: Vec<f64>,
    /// Slope of −ln(density) over (κ+Γ)|x| ∈ [0.5, 4].
    pub fitted_decay: f64,
    /// density(0) / density at (κ+Γ)|x| = 3.
    pub bunching_ratio: f64,
    /// Norm left in the both-transmitted sector.
    pub transmitted_norm: f64,
}

impl LatticeSpec {
    /// Compact spec for the pair lattice: 256 sites, dx = 0.1/Γ.
    pub fn pair(params: &ModelParams) -> Self {
        let g = params.gamma();
        Self {
            n_sites: MAX_PAIR_SITES,
            dx: 0.1 / g,
            packet_width: 1.5 / g,
            absorber_width: 8,
        }
    }
}

/// Square pair array whose two indices move in the directions given.
#[derive(Debug, Clone)]
pub(crate) struct Pair {
    n: usize,
    data: Vec<Complex64>,
    // +1 rightward, -1 leftward, per index
    dirs: (isize, isize),
}

impl Pair {
    fn new(n: usize, dirs: (isize, isize)) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
            dirs,
        }
    }

    pub(crate) fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    fn shift(&mut self) {
        let n = self.n as isize;
        let mut next = vec![ZERO; self.data.len()];
        for i in 0..n {
            let si = i - self.dirs.0;
            if !(0..n).contains(&si) {
                continue;
            }
            for j in 0..n {
                let sj = j - self.dirs.1;
                if (0..n).contains(&sj) {
                    next[(i * n + j) as usize] = self.data[(si * n + sj) as usize];
                }
            }
        }
        self.data = next;
    }

    fn absorb(&mut self, f_r: &[f64], f_l: &[f64]) -> f64 {
        let fi = if self.dirs.0 > 0 { f_r } else { f_l };
        let fj = if self.dirs.1 > 0 { f_r } else { f_l };
        let mut lost = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let f = fi[i] * fj[j];
                if f != 1.0 {
                    let k = i * self.n + j;
                    lost += self.data[k].norm_sqr() * (1.0 - f * f);
                    self.data[k] *= f;
                }
            }
        }
        lost
    }

    pub(crate) fn norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// Both-excitation propagator on {E, C_r(c), C_l(c), A_rr(c,c), A_rl(c,c), A_ll(c,c)}.
fn pair_propagator(params: &ModelParams, dt: f64) -> Matrix6<Complex64> {
    let g1 = (params.gamma1() / dt).sqrt();
    let g2 = (params.gamma2() / dt).sqrt();
    let half = Complex64::new(0.0, -0.5 * params.kappa());
    let mut m = Matrix6::<Complex64>::zeros();
    m[(0, 0)] = 2.0 * half + 2.0 * params.u();
    m[(1, 1)] = half;
    m[(2, 2)] = half;
    let mut link = |a: usize, b: usize, g: f64| {
        m[(a, b)] = Complex64::new(g, 0.0);
        m[(b, a)] = Complex64::new(g, 0.0);
    };
    link(0, 1, SQRT_2 * g1);
    link(0, 2, SQRT_2 * g2);
    link(1, 3, SQRT_2 * g1);
    link(1, 4, g2);
    link(2, 4, g1);
    link(2, 5, SQRT_2 * g2);
    (m * (-I * dt)).exp()
}

/// Two excitations: pairs in the waveguide, one photon plus cavity, or both
/// in the cavity.
#[derive(Debug, Clone)]
pub(crate) struct TwoPhoton {
    pub(crate) rr: Pair,
    pub(crate) rl: Pair,
    pub(crate) ll: Pair,
    cav_r: Vec<Complex64>,
    cav_l: Vec<Complex64>,
    cav2: Complex64,
    pub(crate) absorbed: f64,
    one: Matrix3<Complex64>,
    two: Matrix6<Complex64>,
    ramp_r: Vec<f64>,
    ramp_l: Vec<f64>,
}

impl TwoPhoton {
    /// Two right-moving packets with carriers q1, q2 (relative to ω_a),
    /// centred half way between the left end and the cavity.
    pub(crate) fn launch(spec: &LatticeSpec, params: &ModelParams, q1: f64, q2: f64) -> Self {
        let n = spec.n_sites;
        let c = spec.center();
        let x0 = 0.5 * c as f64 * spec.dx;
        let pos = |s: usize| (s as f64 - c as f64) * spec.dx;
        let p1: Vec<Complex64> = (0..n)
            .map(|s| if s < c { packet(pos(s), -x0, spec.packet_width, q1) } else { ZERO })
            .collect();
        let p2: Vec<Complex64> = (0..n)
            .map(|s| if s < c { packet(pos(s), -x0, spec.packet_width, q2) } else { ZERO })
            .collect();
        let mut rr = Pair::new(n, (1, 1));
        for i in 0..n {
            for j in 0..n {
                rr.set(i, j, p1[i] * p2[j] + p2[i] * p1[j]);
            }
        }
        let scale = 1.0 / rr.norm().sqrt();
        rr.data.iter_mut().for_each(|v| *v *= scale);

        let mut ramp_r = vec![1.0; n];
        let mut ramp_l = vec![1.0; n];
        for depth in 0..spec.absorber_width {
            ramp_r[n - 1 - depth] = spec.ramp(depth);
            ramp_l[depth] = spec.ramp(depth);
        }
        Self {
            rr,
            rl: Pair::new(n, (1, -1)),
            ll: Pair::new(n, (-1, -1)),
            cav_r: vec![ZERO; n],
            cav_l: vec![ZERO; n],
            cav2: ZERO,
            absorbed: 0.0,
            one: local_propagator(params, spec.dt()),
            two: pair_propagator(params, spec.dt()),
            ramp_r,
            ramp_l,
        }
    }

    #[cfg(test)]
    fn norm(&self) -> f64 {
        let cav: f64 = self.cav_r.iter().chain(&self.cav_l).map(|v| v.norm_sqr()).sum();
        self.rr.norm() + self.rl.norm() + self.ll.norm() + cav + self.cav2.norm_sqr()
    }

    pub(crate) fn step(&mut self, spec: &LatticeSpec) {
        let n = spec.n_sites;
        let c = spec.center();
        self.rr.shift();
        self.rl.shift();
        self.ll.shift();
        self.cav_r.rotate_right(1);
        self.cav_r[0] = ZERO;
        self.cav_l.rotate_left(1);
        self.cav_l[n - 1] = ZERO;

        self.absorbed += self.rr.absorb(&self.ramp_r, &self.ramp_l)
            + self.rl.absorb(&self.ramp_r, &self.ramp_l)
            + self.ll.absorb(&self.ramp_r, &self.ramp_l);
        for s in 0..n {
            let (fr, fl) = (self.ramp_r[s], self.ramp_l[s]);
            self.absorbed += self.cav_r[s].norm_sqr() * (1.0 - fr * fr) + self.cav_l[s].norm_sqr() * (1.0 - fl * fl);
            self.cav_r[s] *= fr;
            self.cav_l[s] *= fl;
        }

        for y in (0..n).filter(|&y| y != c) {
            // spectator r photon at y
            let v = self.one * Vector3::new(self.cav_r[y], SQRT_2 * self.rr.get(c, y), self.rl.get(y, c));
            self.cav_r[y] = v[0];
            self.rr.set(c, y, v[1] / SQRT_2);
            self.rr.set(y, c, v[1] / SQRT_2);
            self.rl.set(y, c, v[2]);
            // spectator l photon at y
            let v = self.one * Vector3::new(self.cav_l[y], self.rl.get(c, y), SQRT_2 * self.ll.get(c, y));
            self.cav_l[y] = v[0];
            self.rl.set(c, y, v[1]);
            self.ll.set(c, y, v[2] / SQRT_2);
            self.ll.set(y, c, v[2] / SQRT_2);
        }
        let v = self.two
            * Vector6::new(
                self.cav2,
                self.cav_r[c],
                self.cav_l[c],
                self.rr.get(c, c),
                self.rl.get(c, c),
                self.ll.get(c, c),
            );
        self.cav2 = v[0];
        self.cav_r[c] = v[1];
        self.cav_l[c] = v[2];
        self.rr.set(c, c, v[3]);
        self.rl.set(c, c, v[4]);
        self.ll.set(c, c, v[5]);
    }
}

/// Scatter a photon pair off the cavity and return the transmitted pair
/// density along the relative coordinate.
pub fn lattice_two_photon(spec: &LatticeSpec, params: &ModelParams, input: &TwoPhotonIn) -> Result<TwoLatticeResult> {
    spec.check_geometry()?;
    spec.check_room(8.0)?;
    if spec.n_sites > MAX_PAIR_SITES {
        return Err(Error::param("n_sites", format!("pair lattice is limited to {MAX_PAIR_SITES} sites")));
    }
    let params = match input.direction() {
        Direction::LeftIncident => *params,
        Direction::RightIncident => params.swapped(),
    };
    let q1 = input.omega_k1() - params.omega_a();
    let q2 = input.omega_k2() - params.omega_a();
    let mut state = TwoPhoton::launch(spec, &params, q1, q2);
    let c = spec.center();
    for _ in 0..c {
        state.step(spec);
    }
    profile(spec, &params, &state.rr)
}

fn profile(spec: &LatticeSpec, params: &ModelParams, rr: &Pair) -> Result<TwoLatticeResult> {
    let n = spec.n_sites;
    let c = spec.center();
    let lo = c + 1;
    let mut transmitted_norm = 0.0;
    for i in lo..n {
        for j in lo..n {
            transmitted_norm += rr.get(i, j).norm_sqr();
        }
    }
    let ic = (lo..n)
        .max_by(|&a, &b| rr.get(a, a).norm_sqr().total_cmp(&rr.get(b, b).norm_sqr()))
        .ok_or_else(|| Error::Lattice("empty transmitted region".into()))?;
    let reach = (ic - lo).min(n - 1 - ic);
    let peak = rr.get(ic, ic).norm_sqr();
    if peak <= 0.0 {
        return Err(Error::Lattice("no transmitted coincidences".into()));
    }
    let separation: Vec<f64> = (0..=reach).map(|m| 2.0 * m as f64 * spec.dx).collect();
    let density: Vec<f64> = (0..=reach).map(|m| rr.get(ic - m, ic + m).norm_sqr() / peak).collect();

    let rate = params.kappa() + params.gamma();
    let (mut sx, mut sy, mut sxx, mut sxy, mut k) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (x, d) in separation.iter().zip(&density) {
        let s = rate * x;
        if (0.5..=4.0).contains(&s) && *d > 0.0 {
            let y = d.ln();
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            k += 1.0;
        }
    }
    if k < 3.0 {
        return Err(Error::Lattice(format!("only {k} samples in the fit window")));
    }
    let slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    let at3 = separation
        .iter()
        .enumerate()
        .min_by(|a, b| (rate * a.1 - 3.0).abs().total_cmp(&(rate * b.1 - 3.0).abs()))
        .map(|(m, _)| m)
        .unwrap_or(0);
    Ok(TwoLatticeResult {
        bunching_ratio: density[0] / density[at3],
        fitted_decay: -slope,
        separation,
        density,
        transmitted_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_params, Resonance};
    use crate::verification::lattice::OnePhoton;

    #[test]
    fn lossless_pair_step_is_unitary() {
        let p = make_params(0.0, 0.0, 7.0, 0.3, 0.8).unwrap();
        let u = pair_propagator(&p, 0.1);
        assert!((u.adjoint() * u - Matrix6::identity()).norm() < 1e-12);
    }

    #[test]
    fn linear_cavity_factorises() {
        let p = make_params(0.0, 0.6, 0.0, 0.7, 0.3).unwrap();
        let spec = LatticeSpec::pair(&p);
        let mut two = TwoPhoton::launch(&spec, &p, 0.2, 0.2);
        let mut one = OnePhoton::launch(&spec, &p, 0.2, Direction::LeftIncident);
        for _ in 0..spec.center() {
            two.step(&spec);
            one.step(&spec);
        }
        let n = spec.n_sites;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let rr = one.r.get(i) * one.r.get(j);
                let ll = one.l.get(i) * one.l.get(j);
                let rl = SQRT_2 * one.r.get(i) * one.l.get(j);
                worst = worst
                    .max((two.rr.get(i, j) - rr).norm())
                    .max((two.ll.get(i, j) - ll).norm())
                    .max((two.rl.get(i, j) - rl).norm());
            }
        }
        assert!(worst < 1e-13, "{worst}");
    }

    #[test]
    fn lossless_norm_is_kept() {
        let p = make_params(0.0, 0.0, 10.0, 0.6, 0.4).unwrap();
        let spec = LatticeSpec::pair(&p);
        let mut s = TwoPhoton::launch(&spec, &p, 0.0, 0.0);
        for _ in 0..spec.center() {
            s.step(&spec);
        }
        assert!((s.norm() + s.absorbed - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ideal_point_shows_bound_ridge() {
        let p = make_params(0.0, 1.0, 10.0, 1.0, 0.0).unwrap();
        let input = TwoPhotonIn::at_resonance(&p, Direction::LeftIncident, Resonance::SinglePhoton);
        let res = lattice_two_photon(&LatticeSpec::pair(&p), &p, &input).unwrap();
        assert!((res.fitted_decay - 2.0).abs() < 0.2, "{}", res.fitted_decay);
        assert!(res.bunching_ratio > 5.0, "{}", res.bunching_ratio);
    }

    #[test]
    fn oversized_pair_lattice_is_rejected() {
        let p = make_params(0.0, 1.0, 10.0, 1.0, 0.0).unwrap();
        let spec = LatticeSpec {
            n_sites: 512,
            ..LatticeSpec::pair(&p)
        };
        let input = TwoPhotonIn::at_resonance(&p, Direction::LeftIncident, Resonance::SinglePhoton);
        assert!(lattice_two_photon(&spec, &p, &input).is_err());
    }
}
