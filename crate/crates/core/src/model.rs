//! Physical parameters and incident-photon descriptions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used when comparing rates that should coincide exactly,
/// e.g. κ = γ1 − γ2 or γ1 = Γ. Scaled by Γ at the call site.
pub const RATE_TOLERANCE: f64 = 1e-12;

/// Cavity frequency, loss, Kerr strength and the two chiral coupling rates.
///
/// Fields are private so every instance has passed validation: rates are
/// finite, κ, γ1, γ2 are non-negative and Γ = γ1 + γ2 is strictly positive.
/// The group velocity is carried for documentation only and is always 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    omega_a: f64,
    kappa: f64,
    #[serde(rename = "U")]
    u: f64,
    gamma1: f64,
    gamma2: f64,
    v_c: f64,
}

/// Shorthand for [`ModelParams::new`].
pub fn make_params(omega_a: f64, kappa: f64, u: f64, gamma1: f64, gamma2: f64) -> Result<ModelParams> {
    ModelParams::new(omega_a, kappa, u, gamma1, gamma2)
}

impl ModelParams {
    pub fn new(omega_a: f64, kappa: f64, u: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        Self::with_group_velocity(omega_a, kappa, u, gamma1, gamma2, 1.0)
    }

    /// Constructor that also accepts the group velocity. Only `v_c = 1` is
    /// supported; anything else is rejected rather than silently rescaled.
    pub fn with_group_velocity(
        omega_a: f64,
        kappa: f64,
        u: f64,
        gamma1: f64,
        gamma2: f64,
        v_c: f64,
    ) -> Result<Self> {
        finite("omega_a", omega_a)?;
        finite("kappa", kappa)?;
        finite("U", u)?;
        finite("gamma1", gamma1)?;
        finite("gamma2", gamma2)?;
        finite("v_c", v_c)?;
        if kappa < 0.0 {
            return Err(Error::param("kappa", format!("must be >= 0, got {kappa}")));
        }
        if gamma1 < 0.0 {
            return Err(Error::param("gamma1", format!("must be >= 0, got {gamma1}")));
        }
        if gamma2 < 0.0 {
            return Err(Error::param("gamma2", format!("must be >= 0, got {gamma2}")));
        }
        if gamma1 + gamma2 <= 0.0 {
            return Err(Error::param(
                "gamma1",
                "gamma1 + gamma2 must be > 0 (reduced units are undefined without coupling)",
            ));
        }
        if v_c != 1.0 {
            return Err(Error::param("v_c", format!("only v_c = 1 is supported, got {v_c}")));
        }
        Ok(Self {
            omega_a,
            kappa,
            u,
            gamma1,
            gamma2,
            v_c,
        })
    }

    pub fn omega_a(&self) -> f64 {
        self.omega_a
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Kerr nonlinearity U.
    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn v_c(&self) -> f64 {
        self.v_c
    }

    /// Total coupling Γ = γ1 + γ2.
    pub fn gamma(&self) -> f64 {
        self.gamma1 + self.gamma2
    }

    /// Half of the total cavity linewidth, (κ + Γ)/2.
    pub fn half_linewidth(&self) -> f64 {
        0.5 * (self.kappa + self.gamma())
    }

    /// Same Γ, with γ1 = `fraction`·Γ and γ2 = Γ − γ1.
    pub fn with_gamma1_fraction(&self, fraction: f64) -> Result<Self> {
        finite("gamma1", fraction)?;
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::param(
                "gamma1",
                format!("gamma1/Gamma must lie in [0, 1], got {fraction}"),
            ));
        }
        let g = self.gamma();
        let gamma1 = fraction * g;
        Self::new(self.omega_a, self.kappa, self.u, gamma1, (g - gamma1).max(0.0))
    }

    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        Self::new(self.omega_a, kappa, self.u, self.gamma1, self.gamma2)
    }

    pub fn with_u(&self, u: f64) -> Result<Self> {
        Self::new(self.omega_a, self.kappa, u, self.gamma1, self.gamma2)
    }

    /// Exchange the right- and left-mover couplings.
    pub fn swapped(&self) -> Self {
        Self {
            gamma1: self.gamma2,
            gamma2: self.gamma1,
            ..*self
        }
    }

    /// Coupling seen by photons travelling in `direction`.
    pub fn coupling_along(&self, direction: Direction) -> f64 {
        match direction {
            Direction::LeftIncident => self.gamma1,
            Direction::RightIncident => self.gamma2,
        }
    }
}

fn finite(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::param(field, format!("must be finite, got {value}")))
    }
}

/// Parameter record as it appears in JSON configuration files.
///
/// Values are quoted in units of `gamma_scale` (default 1) and multiplied
/// through on conversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub omega_a: f64,
    pub kappa: f64,
    #[serde(rename = "U")]
    pub u: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    #[serde(default = "unit_scale")]
    pub gamma_scale: f64,
}

fn unit_scale() -> f64 {
    1.0
}

impl TryFrom<ParamsConfig> for ModelParams {
    type Error = Error;

    fn try_from(cfg: ParamsConfig) -> Result<Self> {
        finite("gamma_scale", cfg.gamma_scale)?;
        if cfg.gamma_scale <= 0.0 {
            return Err(Error::param("gamma_scale", "must be > 0"));
        }
        let s = cfg.gamma_scale;
        ModelParams::new(cfg.omega_a * s, cfg.kappa * s, cfg.u * s, cfg.gamma1 * s, cfg.gamma2 * s)
    }
}

impl From<ModelParams> for ParamsConfig {
    fn from(p: ModelParams) -> Self {
        Self {
            omega_a: p.omega_a,
            kappa: p.kappa,
            u: p.u,
            gamma1: p.gamma1,
            gamma2: p.gamma2,
            gamma_scale: 1.0,
        }
    }
}

/// Side of the waveguide the photons come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// Injected from the left, travelling right (couples with γ1).
    LeftIncident,
    /// Injected from the right, travelling left (couples with γ2).
    RightIncident,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::LeftIncident => Direction::RightIncident,
            Direction::RightIncident => Direction::LeftIncident,
        }
    }
}

/// A single incident photon of frequency ω_k (= k since v_c = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonIn {
    pub direction: Direction,
    pub omega_k: f64,
}

impl PhotonIn {
    pub fn new(direction: Direction, omega_k: f64) -> Result<Self> {
        finite("omega_k", omega_k)?;
        Ok(Self { direction, omega_k })
    }
}

/// Which incident frequencies a two-photon quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Resonance {
    /// ω_k1 = ω_k2 = ω_a.
    SinglePhoton,
    /// ω_k1 = ω_a, ω_k2 = ω_a + 2U.
    TwoPhoton,
}

/// Two incident photons from the same side. Amplitudes are symmetric in the
/// two frequencies, so they are stored sorted (ω_k1 ≤ ω_k2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPhotonIn {
    direction: Direction,
    omega_k1: f64,
    omega_k2: f64,
}

impl TwoPhotonIn {
    pub fn new(direction: Direction, omega_k1: f64, omega_k2: f64) -> Result<Self> {
        finite("omega_k1", omega_k1)?;
        finite("omega_k2", omega_k2)?;
        let (lo, hi) = if omega_k1 <= omega_k2 {
            (omega_k1, omega_k2)
        } else {
            (omega_k2, omega_k1)
        };
        Ok(Self {
            direction,
            omega_k1: lo,
            omega_k2: hi,
        })
    }

    /// Incident frequencies for one of the two standard resonance conditions.
    pub fn at_resonance(params: &ModelParams, direction: Direction, case: Resonance) -> Self {
        let wa = params.omega_a();
        let (w1, w2) = match case {
            Resonance::SinglePhoton => (wa, wa),
            Resonance::TwoPhoton => (wa, wa + 2.0 * params.u()),
        };
        // Finite by construction of ModelParams.
        Self::new(direction, w1, w2).expect("finite resonance frequencies")
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn omega_k1(&self) -> f64 {
        self.omega_k1
    }

    pub fn omega_k2(&self) -> f64 {
        self.omega_k2
    }

    /// Total two-photon frequency ω = ω_k1 + ω_k2.
    pub fn omega(&self) -> f64 {
        self.omega_k1 + self.omega_k2
    }

    pub fn with_direction(&self, direction: Direction) -> Self {
        Self { direction, ..*self }
    }
}
