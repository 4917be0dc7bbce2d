//! Where the two-photon diode works: loci in (γ1/Γ, Γ|x|) at which the
//! transmitted two-photon density vanishes, and scalar nonreciprocity
//! measures.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::grid::Grid;
use crate::model::{Direction, ModelParams, Resonance, TwoPhotonIn, RATE_TOLERANCE};
use crate::roots::{bracketed_root, golden_min};
use crate::two_photon::TwoPhotonField;

/// Free two-photon density 1/(2π²); null thresholds are quoted relative to it.
pub const FREE_DENSITY: f64 = 1.0 / (2.0 * PI * PI);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub gamma1_over_gamma: f64,
    /// Γ|x|; infinite when `diverges` is set.
    pub gamma_abs_x: f64,
    /// tan branch n for the two-photon-resonance curve, 0 otherwise.
    pub branch: u32,
    pub diverges: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkingAreaCurve {
    pub case: Resonance,
    pub params: ModelParams,
    pub points: Vec<CurvePoint>,
}

impl WorkingAreaCurve {
    /// Points with a finite separation.
    pub fn finite(&self) -> impl Iterator<Item = &CurvePoint> {
        self.points.iter().filter(|p| !p.diverges)
    }
}

/// Large-U working area at single-photon resonance,
/// |x| = (2/(κ+Γ))·ln[4γ1²/(κ+Γ−2γ1)²] on (κ+Γ)/4 ≤ γ1 ≤ Γ.
///
/// Grid values outside the domain are dropped. The point γ1 = (κ+Γ)/2, where
/// the logarithm blows up, is kept and flagged.
pub fn working_area_single_res(params: &ModelParams, gamma1_fraction: &Grid) -> WorkingAreaCurve {
    let g = params.gamma();
    let c = params.kappa() + g;
    let tol = RATE_TOLERANCE * g;
    let points = gamma1_fraction
        .values()
        .into_iter()
        .filter_map(|f| {
            let g1 = f * g;
            if g1 < 0.25 * c - tol || g1 > g + tol {
                return None;
            }
            let gap = c - 2.0 * g1;
            if gap.abs() <= tol {
                return Some(CurvePoint {
                    gamma1_over_gamma: f,
                    gamma_abs_x: f64::INFINITY,
                    branch: 0,
                    diverges: true,
                });
            }
            let x = (2.0 / c) * (4.0 * g1 * g1 / (gap * gap)).ln();
            Some(CurvePoint {
                gamma1_over_gamma: f,
                gamma_abs_x: (g * x).max(0.0),
                branch: 0,
                diverges: false,
            })
        })
        .collect();
    WorkingAreaCurve {
        case: Resonance::SinglePhoton,
        params: *params,
        points,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoResOptions {
    /// Largest Γ|x| reported.
    pub ceiling: f64,
    /// Sign-change probes per tan branch.
    pub probes: usize,
    /// Absolute tolerance on |x| in the root finder.
    pub x_tol: f64,
}

impl Default for TwoResOptions {
    fn default() -> Self {
        Self {
            ceiling: 20.0,
            probes: 64,
            x_tol: 1e-13,
        }
    }
}

/// γ1 on the branch γ1 ∈ (c/2, c] that satisfies
/// |x| = (2/c)·ln[2γ1²/((2γ1 − c)c)], together with s = c − 2γ1.
///
/// Written so that s stays accurate when γ1 is close to c/2.
fn gamma1_of_x(c: f64, x: f64) -> Option<(f64, f64)> {
    let arg = (0.5 * c * x).exp();
    if !(arg >= 2.0) || !arg.is_finite() {
        return None;
    }
    let q = (1.0 - 2.0 / arg).sqrt();
    let g1 = c / (1.0 + q);
    let s = -2.0 * c / (arg * (1.0 + q) * (1.0 + q));
    Some((g1, s))
}

/// Exact working area at two-photon resonance (ω_k1 = ω_a, ω_k2 = ω_a + 2U).
///
/// Solves |x| = (2/c)·ln[2γ1²/((2γ1−c)c)] together with
/// tan(U|x|) = (c − 2γ1)/(4U), c = κ + Γ, on c/2 < γ1 ≤ Γ. The first relation
/// gives γ1 as a function of |x|, so each tan branch U|x| ∈ (nπ − π/2, nπ + π/2)
/// is searched in |x| and the root is mapped back to γ1. Branches are scanned
/// in full and only then clipped at the ceiling, so raising the ceiling keeps
/// every earlier point. The γ1 → c/2 limit is appended as a diverging point
/// when it lies inside the domain.
pub fn working_area_two_res(params: &ModelParams, opts: &TwoResOptions) -> WorkingAreaCurve {
    let g = params.gamma();
    let c = params.kappa() + g;
    let u = params.u().abs();
    let mut curve = WorkingAreaCurve {
        case: Resonance::TwoPhoton,
        params: *params,
        points: Vec::new(),
    };
    // Domain c/2 < γ1 ≤ Γ is empty unless κ < Γ; U = 0 has no bound state.
    if c >= 2.0 * g || u == 0.0 {
        return curve;
    }
    // Smallest |x| compatible with γ1 ≤ Γ.
    let x_min = (2.0 / c) * (2.0 * g * g / ((2.0 * g - c) * c)).ln();
    let x_max = opts.ceiling / g;

    let mismatch = |n: u32, x: f64| -> f64 {
        match gamma1_of_x(c, x) {
            Some((_, s)) => u * x - n as f64 * PI - (s / (4.0 * u)).atan(),
            None => f64::NAN,
        }
    };

    let mut n = 1u32;
    loop {
        let lo_w = (n as f64 * PI - FRAC_PI_2) / u;
        let hi_w = (n as f64 * PI + FRAC_PI_2) / u;
        if lo_w > x_max {
            break;
        }
        let lo = lo_w.max(x_min);
        if lo < hi_w {
            let probes = opts.probes.max(2);
            let xs: Vec<f64> = (0..=probes)
                .map(|i| lo + (hi_w - lo) * i as f64 / probes as f64)
                .collect();
            for w in xs.windows(2) {
                let (a, b) = (w[0], w[1]);
                let (fa, fb) = (mismatch(n, a), mismatch(n, b));
                if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() && fa != 0.0 {
                    continue;
                }
                // A zero exactly on a probe is owned by the interval it starts.
                if fb == 0.0 && b < hi_w {
                    continue;
                }
                if let Some(x) = bracketed_root(|x| mismatch(n, x), a, b, opts.x_tol) {
                    if let Some((g1, _)) = gamma1_of_x(c, x) {
                        if g1 <= g * (1.0 + RATE_TOLERANCE) && g * x <= opts.ceiling {
                            curve.points.push(CurvePoint {
                                gamma1_over_gamma: (g1 / g).min(1.0),
                                gamma_abs_x: g * x,
                                branch: n,
                                diverges: false,
                            });
                        }
                    }
                }
            }
        }
        n += 1;
    }
    curve.points.push(CurvePoint {
        gamma1_over_gamma: 0.5 * c / g,
        gamma_abs_x: f64::INFINITY,
        branch: 0,
        diverges: true,
    });
    curve
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroMinimum {
    pub gamma1_over_gamma: f64,
    pub gamma_abs_x: f64,
    /// |ψ_tt|² at the refined minimum.
    pub density: f64,
    pub below_threshold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroScan {
    pub minima: Vec<ZeroMinimum>,
    /// γ1/Γ values at which the density is below threshold over the whole
    /// x grid, i.e. the transmitted channel is empty everywhere.
    pub full_null: Vec<f64>,
    pub threshold: f64,
}

impl ZeroScan {
    pub fn degenerate_full_null(&self) -> bool {
        !self.full_null.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroScanOptions {
    /// Threshold in units of the free density 1/(2π²).
    pub threshold_rel: f64,
    /// Golden-section tolerance on Γ|x|.
    pub x_tol: f64,
}

impl Default for ZeroScanOptions {
    fn default() -> Self {
        Self {
            threshold_rel: 1e-8,
            x_tol: 1e-11,
        }
    }
}

/// Transmitted density at x_c = 0 and Γ|x| = `gx`.
fn density_at(field: &TwoPhotonField, g: f64, gx: f64) -> f64 {
    let x = gx / g;
    field.psi_tt(-0.5 * x, 0.5 * x).norm_sqr()
}

/// Scan |ψ_tt|² over Γ|x| at x_c = 0 for each γ1/Γ and refine every local
/// minimum by golden-section search.
///
/// `x_grid` holds Γ|x| values in increasing order. All refined minima are
/// returned; `below_threshold` marks the ones that are numerically zero. A
/// minimum on the first grid node is kept (the density can vanish at x = 0),
/// one on the last node is not, since it may continue past the grid.
pub fn numeric_zero_scan(
    params: &ModelParams,
    input: &TwoPhotonIn,
    gamma1_fraction: &Grid,
    x_grid: &Grid,
    opts: &ZeroScanOptions,
) -> Result<ZeroScan> {
    let g = params.gamma();
    let threshold = opts.threshold_rel * FREE_DENSITY;
    let xs = x_grid.values();
    let fractions = gamma1_fraction.values();
    let variants = fractions
        .iter()
        .map(|&f| params.with_gamma1_fraction(f))
        .collect::<Result<Vec<_>>>()?;

    let per_gamma: Vec<(Vec<ZeroMinimum>, Option<f64>)> = fractions
        .par_iter()
        .zip(variants.par_iter())
        .map(|(&f, p)| {
            let field = TwoPhotonField::new(p, input);
            let dens: Vec<f64> = xs.iter().map(|&gx| density_at(&field, g, gx)).collect();
            if dens.iter().all(|&d| d <= threshold) {
                return (Vec::new(), Some(f));
            }
            let mut found = Vec::new();
            let n = xs.len();
            for i in 0..n.saturating_sub(1) {
                let left_ok = i == 0 || dens[i] < dens[i - 1];
                if !(left_ok && dens[i] <= dens[i + 1]) {
                    continue;
                }
                let a = if i == 0 { xs[0] } else { xs[i - 1] };
                let b = xs[i + 1];
                let (gx, d) = golden_min(|gx| density_at(&field, g, gx), a, b, opts.x_tol);
                found.push(ZeroMinimum {
                    gamma1_over_gamma: f,
                    gamma_abs_x: gx,
                    density: d,
                    below_threshold: d <= threshold,
                });
            }
            (found, None)
        })
        .collect();

    let mut scan = ZeroScan {
        minima: Vec::new(),
        full_null: Vec::new(),
        threshold,
    };
    for (m, null) in per_gamma {
        scan.minima.extend(m);
        scan.full_null.extend(null);
    }
    Ok(scan)
}

/// (|ψ_tt|² − |ψ̃_tt|²)/(|ψ_tt|² + |ψ̃_tt|²), with ψ_tt for left incidence at
/// (x1, x2) and ψ̃_tt for right incidence at the mirrored outgoing point
/// (−x1, −x2). The direction stored in `input` is ignored; 0/0 gives 0.
pub fn nonreciprocity_contrast(params: &ModelParams, input: &TwoPhotonIn, x1: f64, x2: f64) -> f64 {
    let l = TwoPhotonField::new(params, &input.with_direction(Direction::LeftIncident));
    let r = TwoPhotonField::new(params, &input.with_direction(Direction::RightIncident));
    let a = l.psi_tt(x1, x2).norm_sqr();
    let b = r.psi_tt(-x1, -x2).norm_sqr();
    let sum = a + b;
    if sum == 0.0 {
        0.0
    } else {
        (a - b) / sum
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionalDensity {
    pub gamma1_over_gamma: f64,
    pub gamma_x: f64,
    pub left: f64,
    pub right: f64,
}

/// |ψ_tt|² (left incidence) and |ψ̃_tt|² (right incidence) at x_c = 0 over
/// a γ1/Γ × Γx grid. Rows run over γ1 (outer) then Γx (inner).
pub fn directional_densities(
    params: &ModelParams,
    case: Resonance,
    gamma1_fraction: &Grid,
    gamma_x: &Grid,
) -> Result<Vec<DirectionalDensity>> {
    let g = params.gamma();
    let fractions = gamma1_fraction.values();
    let variants = fractions
        .iter()
        .map(|&f| params.with_gamma1_fraction(f))
        .collect::<Result<Vec<_>>>()?;
    let xs = gamma_x.values();
    let rows: Vec<Vec<DirectionalDensity>> = fractions
        .par_iter()
        .zip(variants.par_iter())
        .map(|(&f, p)| {
            let l = TwoPhotonField::new(p, &TwoPhotonIn::at_resonance(p, Direction::LeftIncident, case));
            let r = TwoPhotonField::new(p, &TwoPhotonIn::at_resonance(p, Direction::RightIncident, case));
            xs.iter()
                .map(|&gx| {
                    let x = gx / g;
                    DirectionalDensity {
                        gamma1_over_gamma: f,
                        gamma_x: gx,
                        left: l.psi_tt(-0.5 * x, 0.5 * x).norm_sqr(),
                        right: r.psi_tt(-0.5 * x, 0.5 * x).norm_sqr(),
                    }
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}
