//! Simulation toolkit for a slow-light / matter-wave hybrid Sagnac gyroscope.
//!
//! A probe beam is slowed by electromagnetically induced transparency (EIT) in a
//! ring of ultra-cold three-level (Λ) atoms. The resulting dark-state polariton
//! carries part of its excitation as a matter wave and therefore picks up a
//! rotational phase that is enhanced over the bare optical Sagnac phase by up to
//! the rest-energy ratio `mc²/ħω`.
//!
//! The crate is organised bottom-up:
//!
//! * [`params`]: SI inputs (atom, fields, ring geometry) and derived scales
//!   (recoil velocity, coupling constant, radiative rates).
//! * [`ring`]: azimuthal mode spectrum on the ring, condensate vs. thermal ground
//!   state, and the preparation gate deciding whether the matter-wave term survives.
//! * [`bloch`]: local 9×9 density-matrix generator of the Λ system, constrained
//!   steady state and the first-order drift correction in `v_rec`.
//! * [`polariton`]: mixing angle, group velocity, `ξ`, saturated susceptibility
//!   and absorption.
//! * [`propagation`]: integration of the probe around the ring in both directions
//!   and the differential signal phase split into light and matter parts.
//! * [`sensitivity`]: shot noise, SNR, optimum operating point, prefactor `f`,
//!   minimum detectable rotation rate and the two ring-trap case studies.
//! * [`cli`]: JSON configuration, result envelopes and CSV tables used by the
//!   `slgyro` binary.

pub mod bloch;
pub mod cli;
pub mod constants;
pub mod error;
pub mod params;
pub mod polariton;
pub mod propagation;
pub mod ring;
pub mod sensitivity;

mod diagnostics;

pub use diagnostics::Warning;
pub use error::{Error, Result};
