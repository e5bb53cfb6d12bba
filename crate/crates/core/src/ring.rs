//! Azimuthal mode spectrum of an atom on a ring in the co-rotating frame.
//!
//! In the rotating frame a free atom on a ring of radius `R` has winding
//! modes `exp(i n x/R)` with energies `ε_n = nħΩ + n²ħ²/(2mR²)` (the small
//! centrifugal shift is dropped). A condensate stays in the integer mode
//! nearest the parabola minimum and carries no rotational phase, while a
//! thermal gas averages over many modes and co-rotates with the trap.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, K_B};
use crate::error::{Error, Result};
use crate::Warning;

/// One winding mode of the ring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingMode {
    pub n: i64,
    /// ε_n, J.
    pub energy: f64,
}

impl RingMode {
    pub fn new(n: i64, rotation_rate: f64, radius: f64, mass: f64) -> Self {
        RingMode {
            n,
            energy: mode_energy(n, rotation_rate, radius, mass),
        }
    }
}

/// How the atoms in state |1⟩ are held along the propagation direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MediumPreparation {
    /// Condensate in a ring trap with periodic boundary conditions.
    SuperfluidRing,
    /// Normal gas in a ring trap, equilibrated with the rotating walls.
    ThermalRing { temperature: f64 },
    /// Atoms confined by a potential along the beam path.
    LongitudinalTrap,
}

impl MediumPreparation {
    pub fn thermal(temperature: f64) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::invalid(
                "temperature",
                format!("must be positive, got {temperature}"),
            ));
        }
        Ok(MediumPreparation::ThermalRing { temperature })
    }

    pub fn label(&self) -> &'static str {
        match self {
            MediumPreparation::SuperfluidRing => "superfluid_ring",
            MediumPreparation::ThermalRing { .. } => "thermal_ring",
            MediumPreparation::LongitudinalTrap => "longitudinal_trap",
        }
    }
}

/// 1 if the matter-wave contribution to the Sagnac phase survives, else 0.
///
/// Thermal and trapped atoms acquire the same rotational phase in |1⟩ and |2⟩,
/// so it cancels in the polarization.
pub fn matter_term_gate(prep: &MediumPreparation) -> f64 {
    match prep {
        MediumPreparation::SuperfluidRing => 1.0,
        MediumPreparation::ThermalRing { .. } | MediumPreparation::LongitudinalTrap => 0.0,
    }
}

pub fn mode_energy(n: i64, rotation_rate: f64, radius: f64, mass: f64) -> f64 {
    let n = n as f64;
    n * HBAR * rotation_rate + n * n * HBAR * HBAR / (2.0 * mass * radius * radius)
}

/// `ħ²/(2mR²)`, the level spacing unit of the ring spectrum.
pub fn kinetic_unit(radius: f64, mass: f64) -> f64 {
    HBAR * HBAR / (2.0 * mass * radius * radius)
}

/// Continuous minimiser of `ε(n)`, `−mΩR²/ħ`.
pub fn n_min(rotation_rate: f64, radius: f64, mass: f64) -> f64 {
    -mass * rotation_rate * radius * radius / HBAR
}

/// Integer winding number of the lowest mode. Exact half-integer `n_min` is
/// resolved toward `n = 0`.
pub fn ground_mode(rotation_rate: f64, radius: f64, mass: f64) -> i64 {
    nearest_integer_toward_zero(n_min(rotation_rate, radius, mass))
}

fn nearest_integer_toward_zero(x: f64) -> i64 {
    let lo = x.floor();
    let d = x - lo;
    let n = if d > 0.5 || (d == 0.5 && lo < 0.0) {
        lo + 1.0
    } else {
        lo
    };
    n as i64
}

/// Thermal-ring rotational phase and its Boltzmann cross-check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermalPhase {
    /// High-temperature limit `−2π n_min = 2πΩR²/(ħ/m)`, rad.
    pub phase: f64,
    /// Boltzmann-averaged winding number over the truncated mode ladder.
    pub mean_winding: f64,
    /// `−2π⟨n⟩`, rad.
    pub boltzmann_phase: f64,
    pub warnings: Vec<Warning>,
}

pub fn thermal_phase(
    rotation_rate: f64,
    radius: f64,
    mass: f64,
    temperature: f64,
) -> Result<ThermalPhase> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::invalid(
            "temperature",
            format!("must be positive, got {temperature}"),
        ));
    }
    let mut warnings = Vec::new();
    let kt = K_B * temperature;
    let scale = HBAR * rotation_rate.abs() + kinetic_unit(radius, mass);
    if kt < 10.0 * scale {
        warnings.push(Warning::new(
            "low_temperature",
            format!("k_B T = {kt:.3e} J is not large against ħ|Ω| + ħ²/2mR² = {scale:.3e} J; the thermal limit may not hold"),
        ));
    }
    let mean = boltzmann_mean_winding(rotation_rate, radius, mass, temperature);
    Ok(ThermalPhase {
        phase: 2.0 * PI * rotation_rate * radius * radius * mass / HBAR,
        mean_winding: mean,
        boltzmann_phase: -2.0 * PI * mean,
        warnings,
    })
}

/// `⟨n⟩` of a Boltzmann distribution over the winding modes.
///
/// The sum starts at the ground mode and walks outward on both sides until
/// the next term falls below 1e−15 of the running partition sum.
pub fn boltzmann_mean_winding(rotation_rate: f64, radius: f64, mass: f64, temperature: f64) -> f64 {
    let kt = K_B * temperature;
    let n0 = ground_mode(rotation_rate, radius, mass);
    let e0 = mode_energy(n0, rotation_rate, radius, mass);
    let weight = |n: i64| (-(mode_energy(n, rotation_rate, radius, mass) - e0) / kt).exp();

    let mut z = weight(n0);
    let mut zn = n0 as f64 * z;
    for side in [1i64, -1] {
        let mut k = 1i64;
        loop {
            let n = n0 + side * k;
            let w = weight(n);
            z += w;
            zn += n as f64 * w;
            if w < 1e-15 * z {
                break;
            }
            k += 1;
        }
    }
    zn / z
}
