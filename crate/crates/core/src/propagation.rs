//! Probe propagation around the ring and the differential Sagnac phase.
//!
//! Phases are reported as the accumulated phase lag `∫ k_p χ' dx`, positive
//! for propagation along the rotation when `Ω > 0`. The counter-propagating
//! beam is the same integration with `Ω → −Ω`. The signal phase is half the
//! cw/ccw difference, i.e. the rotation-odd phase of one beam; in vacuum over
//! a full ring it equals `4πΩ(πR²)/(λc)`.
//!
//! The `∂x²` kinetic term of the polariton equation is not integrated; use
//! [`dispersion_regime_check`] to see when it matters.

use serde::Serialize;

use crate::constants::C;
use crate::diagnostics::Warning;
use crate::error::{Error, Result};
use crate::params::{AtomSpecies, DerivedScales, ProbeControlFields, RingGeometry};
use crate::polariton::{tan2_from_xi, xi_from_tan2, PolaritonState, Xi};
use crate::ring::{matter_term_gate, MediumPreparation};

pub const MIN_GRID_POINTS: usize = 64;
/// Refinement stops here and reports an integration error.
pub const MAX_GRID_POINTS: usize = 1 << 20;
/// Largest accepted change of `ln s` over one step.
pub const MAX_STEP_CHANGE: f64 = 0.1;
/// Input saturation above which the weak-field formulas are flagged.
pub const WEAK_FIELD_LIMIT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropagationGrid {
    n_points: usize,
    length: f64,
}

impl PropagationGrid {
    pub fn new(n_points: usize, length: f64) -> Result<Self> {
        if n_points < MIN_GRID_POINTS {
            return Err(Error::invalid(
                "grid.n_points",
                format!("need at least {MIN_GRID_POINTS}, got {n_points}"),
            ));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::invalid(
                "length",
                format!("must be positive, got {length}"),
            ));
        }
        Ok(PropagationGrid { n_points, length })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }
    pub fn length(&self) -> f64 {
        self.length
    }
    pub fn spacing(&self) -> f64 {
        self.length / (self.n_points - 1) as f64
    }
    pub fn x(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n_points).map(|i| i as f64 * h).collect()
    }

    /// Grid with every interval halved.
    pub fn refined(&self) -> Self {
        PropagationGrid {
            n_points: 2 * self.n_points - 1,
            length: self.length,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Along the rotation.
    Cw,
    Ccw,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Cw => 1.0,
            Direction::Ccw => -1.0,
        }
    }
}

/// Uniform EIT medium filling `length` of a ring of `radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingMedium {
    pub radius: f64,
    pub length: f64,
    pub k_p: f64,
    pub v_rec: f64,
    pub eta: f64,
    pub gamma13: f64,
    pub rabi_c: f64,
    /// `g²ϱ/|Ω_c|²`; zero means no medium.
    pub tan2_theta: f64,
}

impl RingMedium {
    pub fn from_params(
        atom: &AtomSpecies,
        fields: &ProbeControlFields,
        geometry: &RingGeometry,
    ) -> Result<Self> {
        let d = DerivedScales::compute(atom, fields, geometry)?;
        Ok(RingMedium {
            radius: geometry.radius(),
            length: geometry.medium_length(),
            k_p: fields.k_p(),
            v_rec: d.v_rec,
            eta: d.eta,
            gamma13: atom.gamma13(),
            rabi_c: fields.rabi_c(),
            tan2_theta: d.g2rho / (fields.rabi_c() * fields.rabi_c()),
        })
    }

    /// Same medium with the density adjusted to give `xi`.
    pub fn with_xi(self, xi: Xi) -> Self {
        RingMedium {
            tan2_theta: tan2_from_xi(xi, self.v_rec),
            ..self
        }
    }

    pub fn with_gamma13(self, gamma13: f64) -> Self {
        RingMedium { gamma13, ..self }
    }

    pub fn xi(&self) -> Xi {
        xi_from_tan2(self.tan2_theta, self.v_rec)
    }

    /// `a = γ₁₃ L_M / v_rec`.
    pub fn loss_parameter(&self) -> f64 {
        self.gamma13 * self.length / self.v_rec
    }

    /// Amplitude decay rate `γ₁₃ tan²θ / c`, 1/m.
    pub fn amplitude_decay(&self) -> f64 {
        self.gamma13 * self.tan2_theta / C
    }

    /// `ΩR k_p/c`, the bare optical Sagnac phase per unit length.
    fn light_rate(&self, omega: f64) -> f64 {
        omega * self.radius * self.k_p / C
    }

    /// Light and matter phase per unit length at saturation `s`.
    fn integrands(&self, omega: f64, gate: f64, s: f64) -> (f64, f64) {
        let u = 1.0 / (1.0 + s);
        let t = self.tan2_theta;
        let beta = 1.0 + self.eta * (self.v_rec / C) * t * u * u * u;
        let base = self.light_rate(omega);
        (base / beta, gate * base * self.eta * t * u * u / beta)
    }
}

/// Phase and amplitude of one beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionalPhase {
    pub direction: Direction,
    pub light: f64,
    pub matter: f64,
    pub amplitude_ratio: f64,
}

impl DirectionalPhase {
    pub fn total(&self) -> f64 {
        self.light + self.matter
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropagationResult {
    pub phase_cw: f64,
    pub phase_ccw: f64,
    /// `|Ω_p(L_M)|/|Ω_p(0)|`.
    pub amplitude_ratio: f64,
    /// `(phase_cw − phase_ccw)/2`.
    pub delta_phi_sig: f64,
    pub light_part: f64,
    pub matter_part: f64,
    pub x: Vec<f64>,
    pub amplitude_profile: Vec<f64>,
    /// Accumulated phase of the co-rotating beam.
    pub phase_profile: Vec<f64>,
    pub s_profile: Vec<f64>,
    pub xi_profile: Vec<Xi>,
    pub n_points: usize,
    /// Relative change of `delta_phi_sig` under one grid halving (all-order only).
    pub refinement_change: f64,
    pub warnings: Vec<Warning>,
}

impl PropagationResult {
    fn from_directions(cw: DirectionalPhase, ccw: DirectionalPhase) -> Self {
        PropagationResult {
            phase_cw: cw.total(),
            phase_ccw: ccw.total(),
            amplitude_ratio: cw.amplitude_ratio,
            delta_phi_sig: (cw.total() - ccw.total()) / 2.0,
            light_part: (cw.light - ccw.light) / 2.0,
            matter_part: (cw.matter - ccw.matter) / 2.0,
            x: Vec::new(),
            amplitude_profile: Vec::new(),
            phase_profile: Vec::new(),
            s_profile: Vec::new(),
            xi_profile: Vec::new(),
            n_points: 0,
            refinement_change: 0.0,
            warnings: Vec::new(),
        }
    }
}

fn check_rotation(omega: f64, medium: &RingMedium) -> Result<()> {
    if !omega.is_finite()
        || omega.abs() * medium.radius / C > crate::params::MAX_ROTATION_SPEED_RATIO
    {
        return Err(Error::invalid(
            "rotation_rate",
            format!("|Ω|R/c too large or not finite (Ω = {omega})"),
        ));
    }
    Ok(())
}

/// Weak-field phase of one beam: the two-term integrand at `s = 0`, no loss.
pub fn phase_weak(
    direction: Direction,
    omega: f64,
    medium: &RingMedium,
    prep: &MediumPreparation,
) -> DirectionalPhase {
    let (light, matter) = medium.integrands(direction.sign() * omega, matter_term_gate(prep), 0.0);
    DirectionalPhase {
        direction,
        light: light * medium.length,
        matter: matter * medium.length,
        amplitude_ratio: 1.0,
    }
}

/// Both beams in the weak-field limit. `rabi_p0` only feeds the regime
/// warning and the reported `s` profile.
pub fn propagate_weak(
    omega: f64,
    medium: &RingMedium,
    prep: &MediumPreparation,
    rabi_p0: f64,
    grid: &PropagationGrid,
) -> Result<PropagationResult> {
    check_rotation(omega, medium)?;
    let cw = phase_weak(Direction::Cw, omega, medium, prep);
    let ccw = phase_weak(Direction::Ccw, omega, medium, prep);
    let mut res = PropagationResult::from_directions(cw, ccw);
    let s0 = (rabi_p0 / medium.rabi_c).powi(2);
    if s0 > WEAK_FIELD_LIMIT {
        res.warnings.push(Warning::new(
            "weak_field",
            format!("s(0) = {s0:.3e} exceeds {WEAK_FIELD_LIMIT}; use the all-order propagation"),
        ));
    }
    let x = grid.x();
    let rate = cw.total() / medium.length;
    res.phase_profile = x.iter().map(|&xi| rate * xi).collect();
    res.amplitude_profile = vec![1.0; x.len()];
    res.s_profile = vec![s0; x.len()];
    res.xi_profile = vec![medium.xi(); x.len()];
    res.n_points = x.len();
    res.x = x;
    Ok(res)
}

struct Trajectory {
    ln_amp: Vec<f64>,
    light: Vec<f64>,
    matter: Vec<f64>,
    max_step_change: f64,
}

/// RK4 for `y = (ln|Ω_p|, φ_light, φ_matter)` on a uniform grid.
fn integrate(omega: f64, medium: &RingMedium, gate: f64, s0: f64, n: usize) -> Trajectory {
    let h = medium.length / (n - 1) as f64;
    let decay = medium.amplitude_decay();
    let rhs = |ln_a: f64| {
        let s = s0 * (2.0 * ln_a).exp();
        let (l, m) = medium.integrands(omega, gate, s);
        [-decay, l, m]
    };
    let mut y = [0.0f64; 3];
    let mut tr = Trajectory {
        ln_amp: Vec::with_capacity(n),
        light: Vec::with_capacity(n),
        matter: Vec::with_capacity(n),
        max_step_change: 0.0,
    };
    tr.ln_amp.push(0.0);
    tr.light.push(0.0);
    tr.matter.push(0.0);
    for _ in 1..n {
        let k1 = rhs(y[0]);
        let k2 = rhs(y[0] + 0.5 * h * k1[0]);
        let k3 = rhs(y[0] + 0.5 * h * k2[0]);
        let k4 = rhs(y[0] + h * k3[0]);
        let mut dy = [0.0; 3];
        for j in 0..3 {
            dy[j] = h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            y[j] += dy[j];
        }
        // relative change of s and of the amplitude over the step
        tr.max_step_change = tr.max_step_change.max(2.0 * dy[0].abs());
        tr.ln_amp.push(y[0]);
        tr.light.push(y[1]);
        tr.matter.push(y[2]);
    }
    tr
}

/// All-order phase of one beam on a grid of `n` points.
pub fn phase_allorder(
    direction: Direction,
    omega: f64,
    medium: &RingMedium,
    prep: &MediumPreparation,
    rabi_p0: f64,
    n: usize,
) -> DirectionalPhase {
    let s0 = (rabi_p0 / medium.rabi_c).powi(2);
    let tr = integrate(
        direction.sign() * omega,
        medium,
        matter_term_gate(prep),
        s0,
        n,
    );
    DirectionalPhase {
        direction,
        light: tr.light[n - 1],
        matter: tr.matter[n - 1],
        amplitude_ratio: tr.ln_amp[n - 1].exp(),
    }
}

/// Both beams with the saturating susceptibility re-evaluated at the local
/// probe strength. The grid is halved until no step changes `ln s` by more
/// than [`MAX_STEP_CHANGE`]; the result is then compared against one further
/// halving.
pub fn propagate_allorder(
    omega: f64,
    medium: &RingMedium,
    prep: &MediumPreparation,
    rabi_p0: f64,
    grid: &PropagationGrid,
) -> Result<PropagationResult> {
    check_rotation(omega, medium)?;
    if !(rabi_p0 > 0.0 && rabi_p0.is_finite()) {
        return Err(Error::invalid(
            "rabi_p0",
            format!("must be positive, got {rabi_p0}"),
        ));
    }
    let gate = matter_term_gate(prep);
    let s0 = (rabi_p0 / medium.rabi_c).powi(2);

    let mut n = grid.n_points();
    let mut cw = integrate(omega, medium, gate, s0, n);
    while cw.max_step_change > MAX_STEP_CHANGE {
        let next = 2 * n - 1;
        if next > MAX_GRID_POINTS {
            return Err(Error::Integration {
                reason: "step change still above threshold at the refinement limit".into(),
                n_points: n,
                max_step_change: cw.max_step_change,
            });
        }
        n = next;
        cw = integrate(omega, medium, gate, s0, n);
    }
    let ccw = integrate(-omega, medium, gate, s0, n);
    let dir = |tr: &Trajectory, direction| DirectionalPhase {
        direction,
        light: tr.light[n - 1],
        matter: tr.matter[n - 1],
        amplitude_ratio: tr.ln_amp[n - 1].exp(),
    };
    let mut res =
        PropagationResult::from_directions(dir(&cw, Direction::Cw), dir(&ccw, Direction::Ccw));

    let fine = 2 * n - 1;
    let fine_cw = phase_allorder(Direction::Cw, omega, medium, prep, rabi_p0, fine);
    let fine_ccw = phase_allorder(Direction::Ccw, omega, medium, prep, rabi_p0, fine);
    let fine_sig = (fine_cw.total() - fine_ccw.total()) / 2.0;
    res.refinement_change = if res.delta_phi_sig == 0.0 {
        fine_sig.abs()
    } else {
        ((fine_sig - res.delta_phi_sig) / res.delta_phi_sig).abs()
    };
    if res.refinement_change > 1e-6 {
        res.warnings.push(Warning::new(
            "grid_convergence",
            format!(
                "halving the grid changes Δφ_sig by {:.3e} (relative)",
                res.refinement_change
            ),
        ));
    }

    let h = medium.length / (n - 1) as f64;
    res.x = (0..n).map(|i| i as f64 * h).collect();
    res.amplitude_profile = cw.ln_amp.iter().map(|l| l.exp()).collect();
    res.phase_profile = cw
        .light
        .iter()
        .zip(&cw.matter)
        .map(|(l, m)| l + m)
        .collect();
    res.s_profile = cw.ln_amp.iter().map(|l| s0 * (2.0 * l).exp()).collect();
    res.xi_profile = vec![medium.xi(); n];
    res.n_points = n;
    Ok(res)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SaturationProfile {
    /// `s(x)` from the all-order amplitude.
    SelfConsistent,
    /// `s(x) = s(0)` everywhere.
    Frozen,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignalPhase {
    pub delta_phi_sig: f64,
    pub light_part: f64,
    pub matter_part: f64,
    pub amplitude_ratio: f64,
    pub profile: SaturationProfile,
    pub warnings: Vec<Warning>,
}

/// Signal phase as two quadratures over the saturation profile:
/// light `∫ ξ/(ξ + η u³)`, matter `(m/ħ) ∫ η u²/(ξ + η u³)`, `u = 1/(1+s)`,
/// each multiplied by `ΩR`.
pub fn signal_phase(
    omega: f64,
    medium: &RingMedium,
    prep: &MediumPreparation,
    rabi_p0: f64,
    grid: &PropagationGrid,
    profile: SaturationProfile,
) -> Result<SignalPhase> {
    let mut warnings = Vec::new();
    if medium.eta != 1.0 {
        warnings.push(Warning::new(
            "eta",
            format!(
                "the saturated signal phase assumes η = 1, got η = {}",
                medium.eta
            ),
        ));
    }
    let (s, h, amplitude_ratio) = match profile {
        SaturationProfile::SelfConsistent => {
            let prop = propagate_allorder(omega, medium, prep, rabi_p0, grid)?;
            warnings.extend(prop.warnings);
            let h = medium.length / (prop.n_points - 1) as f64;
            (prop.s_profile, h, prop.amplitude_ratio)
        }
        SaturationProfile::Frozen => {
            check_rotation(omega, medium)?;
            let s0 = (rabi_p0 / medium.rabi_c).powi(2);
            (
                vec![s0; grid.n_points()],
                grid.spacing(),
                (-medium.amplitude_decay() * medium.length).exp(),
            )
        }
    };
    let gate = matter_term_gate(prep);
    let (light, matter): (Vec<f64>, Vec<f64>) = s
        .iter()
        .map(|&si| medium.integrands(omega, gate, si))
        .unzip();
    let light_part = simpson(&light, h);
    let matter_part = simpson(&matter, h);
    Ok(SignalPhase {
        delta_phi_sig: light_part + matter_part,
        light_part,
        matter_part,
        amplitude_ratio,
        profile,
        warnings,
    })
}

/// Composite Simpson rule; an odd number of intervals ends with the 3/8 rule.
fn simpson(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (f[0] + f[1]),
        3 => h / 3.0 * (f[0] + 4.0 * f[1] + f[2]),
        _ => {
            let intervals = n - 1;
            let (even_end, tail) = if intervals.is_multiple_of(2) {
                (n - 1, 0.0)
            } else {
                let k = n - 4;
                (
                    k,
                    3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]),
                )
            };
            let mut sum = f[0] + f[even_end];
            for (i, v) in f.iter().enumerate().take(even_end).skip(1) {
                sum += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            h / 3.0 * sum + tail
        }
    }
}

/// Warns when `tan²θ > c/v_rec`, where the dropped `∂x²` term matters.
pub fn dispersion_regime_check(state: &PolaritonState) -> Option<Warning> {
    (state.theta_crit_ratio > 1.0).then(|| {
        Warning::new(
            "dispersion_regime",
            format!(
                "tan²θ exceeds c/v_rec by a factor {:.3}; the neglected kinetic ∂x² term is not small",
                state.theta_crit_ratio
            ),
        )
    })
}

/// Optical Sagnac phase `4πΩA/(λc)` of an interferometer enclosing area `area`.
pub fn bare_sagnac_phase(omega: f64, area: f64, lambda: f64) -> f64 {
    4.0 * std::f64::consts::PI * omega * area / (lambda * C)
}
