//! Few-photon scattering through a one-dimensional waveguide chirally coupled
//! to a dissipative Kerr-nonlinear cavity.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] holds the validated parameter set and incident-photon records.
//! * [`single_photon`] gives closed-form one-photon amplitudes and the
//!   single-photon diode classification.
//! * [`two_photon`] evaluates the two-photon scattering state, both in the
//!   chiral (transmitted/reflected) channels and in the even/odd basis.
//! * [`diode`] locates the working areas of the two-photon diode, analytically
//!   and by direct minimisation.
//! * [`verification`] contains oracles that do not trust the closed forms:
//!   residuals of the stationary equations and a time-bin lattice simulator.
//! * [`export`] writes the CSV and binary formats used by the command line tool.
//!
//! Frequencies and rates share one unit and the group velocity is fixed to 1.
//! Everything downstream is homogeneous, so quoting values in units of
//! Γ = γ1 + γ2 is a convention rather than a requirement.

pub mod diode;
pub mod error;
pub mod export;
pub mod grid;
pub mod model;
pub mod roots;
pub mod single_photon;
pub mod two_photon;
pub mod verification;

pub use error::{Error, Result};
pub use model::{Direction, ModelParams, PhotonIn, Resonance, TwoPhotonIn};
pub use num_complex::Complex64;
