//! Physical inputs in SI units and the single-atom / single-photon scales
//! derived from them.
//!
//! Dimensionless groups (`s`, `ξ`, `a`, `θ`, `η`) are never stored as primary
//! inputs; they are computed on demand by the modules that need them.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{C, EPSILON_0, HBAR};
use crate::error::{Error, Result};

/// Largest accepted `|Ω|·R/c`; the rotating-frame equations assume `|Ω|R ≪ c`.
pub const MAX_ROTATION_SPEED_RATIO: f64 = 1e-3;

/// Three-level Λ atom: mass, probe dipole moment and decay rates.
///
/// `gamma2` is the total decay rate of the excited state and always equals
/// `gamma1 + gamma3`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomSpecies {
    name: String,
    mass: f64,
    dipole_p: f64,
    gamma1: f64,
    gamma3: f64,
    gamma2: f64,
    gamma13: f64,
}

impl AtomSpecies {
    pub fn new(
        name: impl Into<String>,
        mass: f64,
        dipole_p: f64,
        gamma1: f64,
        gamma3: f64,
        gamma13: f64,
    ) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::invalid(
                "mass",
                format!("must be positive, got {mass}"),
            ));
        }
        if !(dipole_p >= 0.0 && dipole_p.is_finite()) {
            return Err(Error::invalid(
                "dipole_p",
                format!("must be non-negative, got {dipole_p}"),
            ));
        }
        for (name, v) in [("gamma1", gamma1), ("gamma3", gamma3), ("gamma13", gamma13)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(
                    name,
                    format!("must be non-negative, got {v}"),
                ));
            }
        }
        Ok(AtomSpecies {
            name: name.into(),
            mass,
            dipole_p,
            gamma1,
            gamma3,
            gamma2: gamma1 + gamma3,
            gamma13,
        })
    }

    /// ⁸⁷Rb on the D2 line (780.241 nm). The Λ-system simplification
    /// `γ₁ = γ₃ = γ` is applied with the natural linewidth `γ = 2π·6.0666 MHz`,
    /// and the dipole moment follows from the Einstein-A relation.
    pub fn rb87(gamma13: f64) -> Result<Self> {
        let gamma = 2.0 * PI * 6.0666e6;
        let omega = 2.0 * PI * C / RB87_D2_WAVELENGTH;
        AtomSpecies::new(
            "rb87",
            1.443_160_648e-25,
            dipole_from_gamma(gamma, omega)?,
            gamma,
            gamma,
            gamma13,
        )
    }

    /// ²³Na on the D2 line (589.158 nm), `γ = 2π·9.7946 MHz`.
    pub fn na23(gamma13: f64) -> Result<Self> {
        let gamma = 2.0 * PI * 9.7946e6;
        let omega = 2.0 * PI * C / NA23_D2_WAVELENGTH;
        AtomSpecies::new(
            "na23",
            3.817_540_2e-26,
            dipole_from_gamma(gamma, omega)?,
            gamma,
            gamma,
            gamma13,
        )
    }

    pub fn preset(name: &str, gamma13: f64) -> Result<Self> {
        match name {
            "rb87" => Self::rb87(gamma13),
            "na23" => Self::na23(gamma13),
            other => Err(Error::invalid(
                "atom.preset",
                format!("unknown species `{other}` (expected rb87 or na23)"),
            )),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn dipole_p(&self) -> f64 {
        self.dipole_p
    }
    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }
    pub fn gamma3(&self) -> f64 {
        self.gamma3
    }
    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }
    pub fn gamma13(&self) -> f64 {
        self.gamma13
    }

    /// `ħ/m` in m²/s.
    pub fn hbar_over_m(&self) -> f64 {
        HBAR / self.mass
    }
}

/// Vacuum wavelength of the ⁸⁷Rb D2 line, m.
pub const RB87_D2_WAVELENGTH: f64 = 780.241e-9;
/// Vacuum wavelength of the ²³Na D2 line, m.
pub const NA23_D2_WAVELENGTH: f64 = 589.158e-9;

/// Probe and control fields. `k_p` and `omega_p` are derived from the probe
/// wavelength at construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeControlFields {
    lambda_p: f64,
    omega_p: f64,
    k_p: f64,
    k_c_parallel: f64,
    rabi_p0: f64,
    rabi_c: f64,
    delta2: f64,
    delta3: f64,
}

impl ProbeControlFields {
    pub fn new(
        lambda_p: f64,
        k_c_parallel: f64,
        rabi_p0: f64,
        rabi_c: f64,
        delta2: f64,
        delta3: f64,
    ) -> Result<Self> {
        if !(lambda_p > 0.0 && lambda_p.is_finite()) {
            return Err(Error::invalid(
                "lambda_p",
                format!("must be positive, got {lambda_p}"),
            ));
        }
        if !(rabi_c > 0.0 && rabi_c.is_finite()) {
            return Err(Error::invalid(
                "rabi_c",
                format!("EIT requires a positive control Rabi frequency, got {rabi_c}"),
            ));
        }
        if !(rabi_p0 >= 0.0 && rabi_p0.is_finite()) {
            return Err(Error::invalid(
                "rabi_p0",
                format!("must be non-negative, got {rabi_p0}"),
            ));
        }
        for (name, v) in [
            ("k_c_parallel", k_c_parallel),
            ("delta2", delta2),
            ("delta3", delta3),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        let k_p = 2.0 * PI / lambda_p;
        Ok(ProbeControlFields {
            lambda_p,
            omega_p: C * k_p,
            k_p,
            k_c_parallel,
            rabi_p0,
            rabi_c,
            delta2,
            delta3,
        })
    }

    /// Resonant fields with the control beam perpendicular to the ring (`η = 1`).
    pub fn resonant(lambda_p: f64, rabi_p0: f64, rabi_c: f64) -> Result<Self> {
        Self::new(lambda_p, 0.0, rabi_p0, rabi_c, 0.0, 0.0)
    }

    pub fn with_rabi_p0(&self, rabi_p0: f64) -> Result<Self> {
        Self::new(
            self.lambda_p,
            self.k_c_parallel,
            rabi_p0,
            self.rabi_c,
            self.delta2,
            self.delta3,
        )
    }

    pub fn lambda_p(&self) -> f64 {
        self.lambda_p
    }
    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }
    pub fn k_p(&self) -> f64 {
        self.k_p
    }
    pub fn k_c_parallel(&self) -> f64 {
        self.k_c_parallel
    }
    pub fn rabi_p0(&self) -> f64 {
        self.rabi_p0
    }
    pub fn rabi_c(&self) -> f64 {
        self.rabi_c
    }
    pub fn delta2(&self) -> f64 {
        self.delta2
    }
    pub fn delta3(&self) -> f64 {
        self.delta3
    }

    /// Input saturation `s = |Ω_p(0)|²/|Ω_c|²`.
    pub fn saturation(&self) -> f64 {
        (self.rabi_p0 / self.rabi_c).powi(2)
    }
}

/// Ring interferometer and the medium filling it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RingGeometry {
    radius: f64,
    medium_length: f64,
    cross_section: f64,
    atom_density: f64,
    rotation_rate: f64,
}

impl RingGeometry {
    pub fn new(
        radius: f64,
        medium_length: f64,
        cross_section: f64,
        atom_density: f64,
        rotation_rate: f64,
    ) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid(
                "radius",
                format!("must be positive, got {radius}"),
            ));
        }
        // Allow a full ring up to rounding in 2πR.
        if !(medium_length > 0.0 && medium_length <= 2.0 * PI * radius * (1.0 + 1e-12)) {
            return Err(Error::invalid(
                "medium_length",
                format!(
                    "must lie in (0, 2πR = {}], got {medium_length}",
                    2.0 * PI * radius
                ),
            ));
        }
        if !(cross_section > 0.0 && cross_section.is_finite()) {
            return Err(Error::invalid(
                "cross_section",
                format!("must be positive, got {cross_section}"),
            ));
        }
        if !(atom_density >= 0.0 && atom_density.is_finite()) {
            return Err(Error::invalid(
                "atom_density",
                format!("must be non-negative, got {atom_density}"),
            ));
        }
        if !rotation_rate.is_finite() || rotation_rate.abs() * radius / C > MAX_ROTATION_SPEED_RATIO
        {
            return Err(Error::invalid(
                "rotation_rate",
                format!(
                    "|Ω|R/c must not exceed {MAX_ROTATION_SPEED_RATIO:e}, got Ω = {rotation_rate}"
                ),
            ));
        }
        Ok(RingGeometry {
            radius,
            medium_length,
            cross_section,
            atom_density,
            rotation_rate,
        })
    }

    /// A medium filling the whole ring, `L_M = 2πR`.
    pub fn full_ring(
        radius: f64,
        cross_section: f64,
        atom_density: f64,
        rotation_rate: f64,
    ) -> Result<Self> {
        Self::new(
            radius,
            2.0 * PI * radius,
            cross_section,
            atom_density,
            rotation_rate,
        )
    }

    pub fn with_rotation_rate(&self, rotation_rate: f64) -> Result<Self> {
        Self::new(
            self.radius,
            self.medium_length,
            self.cross_section,
            self.atom_density,
            rotation_rate,
        )
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
    pub fn medium_length(&self) -> f64 {
        self.medium_length
    }
    pub fn cross_section(&self) -> f64 {
        self.cross_section
    }
    pub fn atom_density(&self) -> f64 {
        self.atom_density
    }
    pub fn rotation_rate(&self) -> f64 {
        self.rotation_rate
    }
}

/// Recoil scales of a probe photon absorbed by the atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Recoil {
    /// `ħk_p/m`, m/s.
    pub v_rec: f64,
    /// `ħk_p²/2m`, rad/s.
    pub omega_rec: f64,
    /// Momentum transfer `(k_p − k_c∥)/k_p`.
    pub eta: f64,
}

/// Probe coupling strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coupling {
    /// Single-atom coupling `d₁₂·sqrt(ω_p/(2ħε₀F))`.
    pub g: f64,
    /// Collective coupling squared, `g²·ϱ·F = d₁₂²ω_pϱ/(2ħε₀)`, in (rad/s)².
    /// The cross-section cancels, so `tan²θ = g2rho/|Ω_c|²` is dimensionless.
    pub g2rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedScales {
    pub v_rec: f64,
    pub omega_rec: f64,
    pub eta: f64,
    pub g: f64,
    pub g2rho: f64,
}

impl DerivedScales {
    pub fn compute(
        atom: &AtomSpecies,
        fields: &ProbeControlFields,
        geometry: &RingGeometry,
    ) -> Result<Self> {
        let r = derive_recoil(atom, fields)?;
        let c = coupling_constant(atom, fields, geometry)?;
        Ok(DerivedScales {
            v_rec: r.v_rec,
            omega_rec: r.omega_rec,
            eta: r.eta,
            g: c.g,
            g2rho: c.g2rho,
        })
    }
}

pub fn derive_recoil(atom: &AtomSpecies, fields: &ProbeControlFields) -> Result<Recoil> {
    let m = atom.mass();
    let k = fields.k_p();
    if !(m > 0.0) {
        return Err(Error::invalid("mass", "must be positive"));
    }
    if !(k > 0.0) {
        return Err(Error::invalid("lambda_p", "must be positive"));
    }
    Ok(Recoil {
        v_rec: HBAR * k / m,
        omega_rec: HBAR * k * k / (2.0 * m),
        eta: (k - fields.k_c_parallel()) / k,
    })
}

pub fn coupling_constant(
    atom: &AtomSpecies,
    fields: &ProbeControlFields,
    geometry: &RingGeometry,
) -> Result<Coupling> {
    let area = geometry.cross_section();
    if !(area > 0.0) {
        return Err(Error::invalid("cross_section", "must be positive"));
    }
    let g = atom.dipole_p() * (fields.omega_p() / (2.0 * HBAR * EPSILON_0 * area)).sqrt();
    Ok(Coupling {
        g,
        g2rho: g * g * geometry.atom_density() * area,
    })
}

/// Spontaneous emission rate of a transition with dipole moment `d_p` at
/// angular frequency `omega_p` (Einstein A coefficient).
pub fn gamma_from_dipole(d_p: f64, omega_p: f64) -> Result<f64> {
    check_omega(omega_p)?;
    Ok(einstein_a_factor(omega_p) * d_p * d_p)
}

/// Inverse of [`gamma_from_dipole`].
pub fn dipole_from_gamma(gamma: f64, omega_p: f64) -> Result<f64> {
    check_omega(omega_p)?;
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(
            "gamma",
            format!("must be non-negative, got {gamma}"),
        ));
    }
    Ok((gamma / einstein_a_factor(omega_p)).sqrt())
}

fn einstein_a_factor(omega_p: f64) -> f64 {
    (1.0 / (4.0 * PI * EPSILON_0)) * (4.0 / 3.0) * omega_p.powi(3) / (HBAR * C.powi(3))
}

fn check_omega(omega_p: f64) -> Result<()> {
    if omega_p > 0.0 && omega_p.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            "omega_p",
            format!("must be positive, got {omega_p}"),
        ))
    }
}

/// Rest energy per atom over probe photon energy, `mc²/ħω_p`. This is the
/// enhancement of the matter-wave Sagnac phase over the optical one.
pub fn rest_energy_ratio(atom: &AtomSpecies, fields: &ProbeControlFields) -> f64 {
    atom.mass() * C * C / (HBAR * fields.omega_p())
}
