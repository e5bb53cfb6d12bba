//! Dressed-medium quantities of the dark-state polariton.
//!
//! Conventions: `tan²θ = g²ϱ/|Ω_c|²` (with `g²ϱ` from
//! [`Coupling::g2rho`](crate::params::Coupling)), `ξ = cot²θ · c/v_rec`,
//! `s = |Ω_p|²/|Ω_c|²`. The imaginary susceptibility is stored as a
//! non-negative absorptive magnitude, so the intensity decays as `e^{-2κx}`.

use std::f64::consts::FRAC_PI_2;

use serde::{Serialize, Serializer};

use crate::constants::C;
use crate::diagnostics::Warning;
use crate::error::{Error, Result};

/// Polariton parameter `ξ`; infinite when the medium is absent (`θ = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Xi {
    Finite(f64),
    Infinite,
}

impl Xi {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            Err(Error::invalid(
                "xi",
                format!("must be non-negative, got {value}"),
            ))
        } else if value.is_infinite() {
            Ok(Xi::Infinite)
        } else {
            Ok(Xi::Finite(value))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Xi::Finite(v) => v,
            Xi::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Xi::Infinite)
    }
}

impl Serialize for Xi {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Xi::Finite(v) => s.serialize_f64(*v),
            Xi::Infinite => s.serialize_str("inf"),
        }
    }
}

fn check_rabi_c(rabi_c: f64) -> Result<()> {
    if rabi_c > 0.0 && rabi_c.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            "rabi_c",
            format!("must be positive, got {rabi_c}"),
        ))
    }
}

pub fn tan2_theta(g2rho: f64, rabi_c: f64) -> Result<f64> {
    check_rabi_c(rabi_c)?;
    if !(g2rho >= 0.0 && g2rho.is_finite()) {
        return Err(Error::invalid(
            "g2rho",
            format!("must be non-negative, got {g2rho}"),
        ));
    }
    Ok(g2rho / (rabi_c * rabi_c))
}

/// Mixing angle `θ ∈ [0, π/2)`.
pub fn mixing_angle(g2rho: f64, rabi_c: f64) -> Result<f64> {
    Ok(tan2_theta(g2rho, rabi_c)?.sqrt().atan())
}

/// `tan²θ / tan²θ_crit` with `tan²θ_crit = c/v_rec`; equals `1/ξ`.
pub fn theta_crit_ratio(tan2_theta: f64, v_rec: f64) -> f64 {
    tan2_theta * v_rec / C
}

pub fn group_velocity(theta: f64, eta: f64, v_rec: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    C * c * c + eta * v_rec * s * s
}

/// Exact `ξ = cot²θ / cot²θ_crit`.
pub fn xi(theta: f64, v_rec: f64) -> Xi {
    if theta == 0.0 {
        return Xi::Infinite;
    }
    let t = theta.tan();
    Xi::Finite(C / (v_rec * t * t))
}

pub fn xi_from_tan2(tan2_theta: f64, v_rec: f64) -> Xi {
    if tan2_theta == 0.0 {
        Xi::Infinite
    } else {
        Xi::Finite(C / (v_rec * tan2_theta))
    }
}

pub fn tan2_from_xi(xi: Xi, v_rec: f64) -> f64 {
    match xi {
        Xi::Infinite => 0.0,
        Xi::Finite(x) => C / (v_rec * x),
    }
}

/// Slow-light form `v_gr/v_rec − η`, valid for `v_gr ≪ c`.
pub fn xi_approx(v_gr: f64, v_rec: f64, eta: f64) -> f64 {
    v_gr / v_rec - eta
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SusceptibilityInput {
    pub rabi_p: f64,
    pub rabi_c: f64,
    /// `g²ϱ`, (rad/s)².
    pub g2rho: f64,
    pub gamma1: f64,
    pub gamma13: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub rotation_rate: f64,
    pub radius: f64,
    pub k_p: f64,
    pub v_rec: f64,
    pub eta: f64,
    /// Weight of the matter-wave term, see [`crate::ring::matter_term_gate`].
    pub gate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Susceptibility {
    pub chi_real: f64,
    /// Absorptive magnitude, `≥ 0` for `γ₁₃ ≥ 0`.
    pub chi_imag: f64,
    pub beta: f64,
    pub warnings: Vec<Warning>,
}

/// All-order susceptibility at local probe strength `rabi_p`:
///
/// `χ' = β⁻¹ (ΩR/c) (1 + gate·η tan²θ u²)`,
/// `χ'' = β⁻¹ γ₁₃/(k_p c) · tan²θ u²`,
/// `β = 1 + η (v_rec/c) tan²θ u³`, with `u = 1/(1+s)`.
pub fn susceptibility(inp: &SusceptibilityInput) -> Result<Susceptibility> {
    let t = tan2_theta(inp.g2rho, inp.rabi_c)?;
    let s = (inp.rabi_p / inp.rabi_c).powi(2);
    let u = 1.0 / (1.0 + s);
    let beta = 1.0 + inp.eta * (inp.v_rec / C) * t * u * u * u;
    let chi_real =
        inp.rotation_rate * inp.radius / C * (1.0 + inp.gate * inp.eta * t * u * u) / beta;
    let chi_imag = inp.gamma13 / (inp.k_p * C) * t * u * u / beta;

    let mut warnings = Vec::new();
    if inp.delta2 != 0.0 || inp.delta3 != 0.0 {
        warnings.push(Warning::new(
            "eit_detuning",
            format!(
                "closed form assumes resonance, got Δ₂ = {}, Δ₃ = {}",
                inp.delta2, inp.delta3
            ),
        ));
    }
    if inp.rabi_c * inp.rabi_c < 10.0 * inp.gamma13 * inp.gamma1 {
        warnings.push(Warning::new(
            "eit_condition",
            format!(
                "Ω_c² = {:.3e} is not large compared to γ₁₃γ₁ = {:.3e}",
                inp.rabi_c * inp.rabi_c,
                inp.gamma13 * inp.gamma1
            ),
        ));
    }
    Ok(Susceptibility {
        chi_real,
        chi_imag,
        beta,
        warnings,
    })
}

/// Absorption bound `γ₁₃/(v_rec ξ)` used as the working coefficient.
pub fn absorption_bound(gamma13: f64, v_rec: f64, xi: Xi) -> f64 {
    match xi {
        Xi::Infinite => 0.0,
        Xi::Finite(x) => gamma13 / (v_rec * x),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Absorption {
    /// Working value, the bound `γ₁₃/(v_rec ξ)`, 1/m.
    pub kappa: f64,
    /// `k_p χ''` including saturation and `β`, 1/m.
    pub kappa_exact: f64,
}

pub fn absorption_coefficient(
    chi: &Susceptibility,
    k_p: f64,
    gamma13: f64,
    v_rec: f64,
    xi: Xi,
) -> Absorption {
    Absorption {
        kappa: absorption_bound(gamma13, v_rec, xi),
        kappa_exact: k_p * chi.chi_imag,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolaritonState {
    pub tan2_theta: f64,
    pub theta: f64,
    pub v_gr: f64,
    pub xi: Xi,
    pub s: f64,
    pub kappa: f64,
    pub kappa_exact: f64,
    pub theta_crit_ratio: f64,
}

impl PolaritonState {
    /// Local polariton state; the rotation does not enter.
    pub fn compute(
        g2rho: f64,
        rabi_c: f64,
        rabi_p: f64,
        v_rec: f64,
        eta: f64,
        gamma13: f64,
        k_p: f64,
    ) -> Result<Self> {
        let t = tan2_theta(g2rho, rabi_c)?;
        let theta = t.sqrt().atan();
        debug_assert!(theta < FRAC_PI_2);
        let xi = xi_from_tan2(t, v_rec);
        let chi = susceptibility(&SusceptibilityInput {
            rabi_p,
            rabi_c,
            g2rho,
            gamma1: 0.0,
            gamma13,
            delta2: 0.0,
            delta3: 0.0,
            rotation_rate: 0.0,
            radius: 0.0,
            k_p,
            v_rec,
            eta,
            gate: 1.0,
        })?;
        let abs = absorption_coefficient(&chi, k_p, gamma13, v_rec, xi);
        Ok(PolaritonState {
            tan2_theta: t,
            theta,
            v_gr: group_velocity(theta, eta, v_rec),
            xi,
            s: (rabi_p / rabi_c).powi(2),
            kappa: abs.kappa,
            kappa_exact: abs.kappa_exact,
            theta_crit_ratio: theta_crit_ratio(t, v_rec),
        })
    }
}
