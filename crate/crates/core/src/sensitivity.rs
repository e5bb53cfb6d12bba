//! Shot-noise-limited sensitivity of the matter-wave dominated gyroscope.
//!
//! The SNR factorises into a flux factor `ΩA/(ħ/m)·(Fϱ v_rec t)^{1/2}` and
//! the dimensionless shape factor
//! `g(s, ξ; a) = ξ^{1/2} s^{1/2} (1+s) / (ξ(1+s)³ + 1) · e^{-a/ξ}`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{C, EPSILON_0, HBAR};
use crate::diagnostics::Warning;
use crate::error::{Error, Result};
use crate::params::{derive_recoil, AtomSpecies, ProbeControlFields};

/// Loss parameter `a = γ₁₃ L_M / v_rec`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct LossParameter(f64);

impl LossParameter {
    pub fn new(a: f64) -> Result<Self> {
        if a > 0.0 && a.is_finite() {
            Ok(LossParameter(a))
        } else {
            Err(Error::invalid(
                "a",
                format!("loss parameter must be positive, got {a}"),
            ))
        }
    }

    pub fn from_medium(gamma13: f64, medium_length: f64, v_rec: f64) -> Result<Self> {
        Self::new(gamma13 * medium_length / v_rec)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Counted quanta `n_D = Fϱ v_rec t ξ s e^{-2a/ξ}`.
pub fn detector_photons(
    cross_section: f64,
    density: f64,
    v_rec: f64,
    time: f64,
    xi: f64,
    s: f64,
    a: f64,
) -> f64 {
    cross_section * density * v_rec * time * xi * s * (-2.0 * a / xi).exp()
}

/// Same count from the transmitted probe power, `P_D t/ħω_p` with
/// `P = 2ε₀Fc(ħΩ_p/d)²` attenuated by `e^{-2κL}`.
pub fn detector_photons_from_power(
    cross_section: f64,
    omega_p: f64,
    rabi_p0: f64,
    dipole_p: f64,
    time: f64,
    kappa: f64,
    length: f64,
) -> f64 {
    let power = 2.0 * EPSILON_0 * cross_section * C * (HBAR * rabi_p0 / dipole_p).powi(2);
    power * time / (HBAR * omega_p) * (-2.0 * kappa * length).exp()
}

pub fn low_count_warning(n_d: f64) -> Option<Warning> {
    (n_d < 1.0).then(|| {
        Warning::new(
            "low_count",
            format!("n_D = {n_d:.3e} < 1; shot-noise estimate is not meaningful"),
        )
    })
}

/// Shot-noise phase uncertainty `1/√n_D`.
pub fn shot_noise_phase(n_d: f64) -> f64 {
    1.0 / n_d.sqrt()
}

pub fn shape_factor(s: f64, xi: f64, a: f64) -> f64 {
    let q = 1.0 + s;
    (xi * s).sqrt() * q / (xi * q * q * q + 1.0) * (-a / xi).exp()
}

/// Large-`a` optimum `s = 1/3`, `ξ = 2a` inserted into `g`:
/// `(4/(3√3))·(27/128)·√2·e^{-1/2}/√a`.
pub fn asymptotic_g_max(a: f64) -> f64 {
    4.0 / (3.0 * 3f64.sqrt()) * (27.0 / 128.0) * 2f64.sqrt() * (-0.5f64).exp() / a.sqrt()
}

/// Detector and interferometer inputs shared by the SNR formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Detection {
    /// Enclosed area, m².
    pub area: f64,
    /// Beam cross-section `F`, m².
    pub cross_section: f64,
    /// Atom density `ϱ`, 1/m³.
    pub density: f64,
    pub v_rec: f64,
    /// `ħ/m`, m²/s.
    pub hbar_over_m: f64,
    /// Integration time, s.
    pub time: f64,
}

impl Detection {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("area", self.area),
            ("cross_section", self.cross_section),
            ("density", self.density),
            ("v_rec", self.v_rec),
            ("hbar_over_m", self.hbar_over_m),
            ("time", self.time),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// `(Fϱ v_rec t)^{1/2}`.
    pub fn flux_root(&self) -> f64 {
        (self.cross_section * self.density * self.v_rec * self.time).sqrt()
    }

    /// `ΩA/(ħ/m)·(Fϱ v_rec t)^{1/2}`.
    pub fn flux_factor(&self, omega: f64) -> f64 {
        omega * self.area / self.hbar_over_m * self.flux_root()
    }

    pub fn photons(&self, xi: f64, s: f64, a: f64) -> f64 {
        detector_photons(
            self.cross_section,
            self.density,
            self.v_rec,
            self.time,
            xi,
            s,
            a,
        )
    }
}

/// Matter-wave SNR, the light contribution dropped.
pub fn snr(omega: f64, det: &Detection, s: f64, xi: f64, a: f64) -> f64 {
    det.flux_factor(omega) * shape_factor(s, xi, a)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Optimum {
    pub a: f64,
    pub s_opt: f64,
    pub xi_opt: f64,
    pub g_max: f64,
}

pub const S_RANGE: (f64, f64) = (1e-4, 1e2);
/// `ξ` is searched over `[a/XI_SPAN, a·XI_SPAN]`.
pub const XI_SPAN: f64 = 1e3;
const GRID: usize = 64;
const MOVE_TOL: f64 = 1e-8;
const MAX_PASSES: usize = 10_000;

/// Maximises `g(s, ξ; a)` on the first (low-intensity) maximum.
///
/// A 64×64 logarithmic grid is followed by coordinate-wise golden-section
/// passes in `(ln s, ln ξ)`, each bracketed by one grid cell on either side,
/// until a full pass moves the point by less than `1e-8`.
pub fn optimize_snr(a: LossParameter) -> Result<Optimum> {
    let a = a.value();
    let lo = [S_RANGE.0.ln(), (a / XI_SPAN).ln()];
    let hi = [S_RANGE.1.ln(), (a * XI_SPAN).ln()];
    let cell = [
        (hi[0] - lo[0]) / (GRID - 1) as f64,
        (hi[1] - lo[1]) / (GRID - 1) as f64,
    ];
    let obj = |p: [f64; 2]| -> f64 { shape_factor(p[0].exp(), p[1].exp(), a).ln() };

    let mut best = ([lo[0], lo[1]], f64::NEG_INFINITY);
    for i in 0..GRID {
        for j in 0..GRID {
            let p = [lo[0] + i as f64 * cell[0], lo[1] + j as f64 * cell[1]];
            let v = obj(p);
            if v > best.1 {
                best = (p, v);
            }
        }
    }
    let mut p = best.0;
    for _ in 0..MAX_PASSES {
        let prev = p;
        for k in 0..2 {
            let a_k = (p[k] - cell[k]).max(lo[k]);
            let b_k = (p[k] + cell[k]).min(hi[k]);
            p[k] = golden_max(
                |t| {
                    let mut q = p;
                    q[k] = t;
                    obj(q)
                },
                a_k,
                b_k,
            );
        }
        if (p[0] - prev[0]).abs().max((p[1] - prev[1]).abs()) < MOVE_TOL {
            break;
        }
    }
    let on_edge = (0..2).any(|k| (p[k] - lo[k]).abs() < 1e-6 || (hi[k] - p[k]).abs() < 1e-6);
    let (s, xi) = (p[0].exp(), p[1].exp());
    if on_edge {
        return Err(Error::BoundaryHit { a, s, xi });
    }
    Ok(Optimum {
        a,
        s_opt: s,
        xi_opt: xi,
        g_max: shape_factor(s, xi, a),
    })
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// `a` at which the prefactor is evaluated.
pub const PREFACTOR_A: f64 = 1e4;

/// `f = 1/(√a · g_max(a))`; tends to a constant for large `a`.
pub fn prefactor_f(a: LossParameter) -> Result<f64> {
    let opt = optimize_snr(a)?;
    Ok(1.0 / (a.value().sqrt() * opt.g_max))
}

pub fn prefactor_f_default() -> Result<f64> {
    prefactor_f(LossParameter(PREFACTOR_A))
}

/// `Ω_min = (ħ/m)/A · (Fϱ v_rec t)^{-1/2} · f √a`.
pub fn omega_min(det: &Detection, a: LossParameter, f: f64) -> f64 {
    det.hbar_over_m / det.area / det.flux_root() * f * a.value().sqrt()
}

/// Rotation rate at which the SNR at the optimum of `a` equals 1.
pub fn omega_min_at_optimum(det: &Detection, opt: &Optimum) -> f64 {
    det.hbar_over_m / (det.area * det.flux_root() * opt.g_max)
}

/// Loss parameter for which [`omega_min`] returns `target`.
pub fn loss_parameter_for(det: &Detection, target: f64, f: f64) -> Result<LossParameter> {
    let root_a = target * det.area * det.flux_root() / (det.hbar_over_m * f);
    LossParameter::new(root_a * root_a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AreaConvention {
    /// `A = R·L_M` with `L_M = 2πR`.
    RingLength,
    /// `A = πR²`.
    Disk,
}

impl AreaConvention {
    pub fn area(self, radius: f64) -> f64 {
        match self {
            AreaConvention::RingLength => 2.0 * PI * radius * radius,
            AreaConvention::Disk => PI * radius * radius,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            AreaConvention::RingLength => "A = R·L_M = 2πR² (medium fills the ring)",
            AreaConvention::Disk => "A = πR² (enclosed disk)",
        }
    }
}

/// Ring waveguides used as reference geometries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseStudy {
    /// 3 mm ring diameter.
    Gupta,
    /// 96 mm ring diameter.
    Arnold,
}

impl CaseStudy {
    pub fn from_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "gupta" => Ok(CaseStudy::Gupta),
            "arnold" => Ok(CaseStudy::Arnold),
            _ => Err(Error::UnknownCase(name.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseStudy::Gupta => "gupta",
            CaseStudy::Arnold => "arnold",
        }
    }

    pub fn diameter(self) -> f64 {
        match self {
            CaseStudy::Gupta => 3e-3,
            CaseStudy::Arnold => 96e-3,
        }
    }

    pub fn radius(self) -> f64 {
        self.diameter() / 2.0
    }

    /// Reference rotation sensitivity estimate, rad s⁻¹ Hz^{-1/2}.
    pub fn reference_omega_min(self) -> f64 {
        match self {
            CaseStudy::Gupta => 1.4e-9,
            CaseStudy::Arnold => 1.4e-12,
        }
    }
}

/// State-of-the-art gyroscope sensitivities used for comparison, rad s⁻¹ Hz^{-1/2}.
pub const BENCHMARK_OPTICAL: f64 = 2e-10;
pub const BENCHMARK_MATTER_WAVE: f64 = 6e-10;

pub const DEFAULT_DENSITY: f64 = 1e20;
pub const DEFAULT_CROSS_SECTION: f64 = 1e-6;
pub const DEFAULT_TIME: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assumption {
    pub key: String,
    pub value: String,
    pub source: String,
}

impl Assumption {
    pub fn new(key: &str, value: impl ToString, source: &str) -> Self {
        Assumption {
            key: key.to_string(),
            value: value.to_string(),
            source: source.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub label: String,
    pub value: f64,
    /// `omega_min / value`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseStudyInputs {
    pub case: CaseStudy,
    pub species: AtomSpecies,
    pub lambda_p: f64,
    pub a: LossParameter,
    pub time: f64,
    pub density: f64,
    pub cross_section: f64,
    pub area_convention: AreaConvention,
}

impl CaseStudyInputs {
    pub fn new(case: CaseStudy, species: AtomSpecies, lambda_p: f64, a: LossParameter) -> Self {
        CaseStudyInputs {
            case,
            species,
            lambda_p,
            a,
            time: DEFAULT_TIME,
            density: DEFAULT_DENSITY,
            cross_section: DEFAULT_CROSS_SECTION,
            area_convention: AreaConvention::RingLength,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub case: CaseStudy,
    pub species: String,
    pub radius: f64,
    pub area: f64,
    pub a: f64,
    pub time: f64,
    pub v_rec: f64,
    pub s_opt: f64,
    pub xi_opt: f64,
    pub g_max: f64,
    pub f: f64,
    /// Counts at the optimum.
    pub n_d: f64,
    pub delta_phi_noise: f64,
    /// Closed form with the large-`a` prefactor `f`.
    pub omega_min: f64,
    /// Using `g_max(a)` at the given `a` instead of `f√a`.
    pub omega_min_at_optimum: f64,
    pub snr_at_omega_min: f64,
    pub comparisons: Vec<Comparison>,
    pub assumptions: Vec<Assumption>,
    pub warnings: Vec<Warning>,
}

pub fn case_study(inp: &CaseStudyInputs) -> Result<SensitivityReport> {
    let fields = ProbeControlFields::resonant(inp.lambda_p, 0.0, 1.0)?;
    let recoil = derive_recoil(&inp.species, &fields)?;
    let radius = inp.case.radius();
    let det = Detection {
        area: inp.area_convention.area(radius),
        cross_section: inp.cross_section,
        density: inp.density,
        v_rec: recoil.v_rec,
        hbar_over_m: inp.species.hbar_over_m(),
        time: inp.time,
    };
    det.validate()?;
    let opt = optimize_snr(inp.a)?;
    let f = prefactor_f_default()?;
    let om = omega_min(&det, inp.a, f);
    let om_opt = omega_min_at_optimum(&det, &opt);
    let n_d = det.photons(opt.xi_opt, opt.s_opt, inp.a.value());

    let mut warnings: Vec<Warning> = low_count_warning(n_d).into_iter().collect();
    if inp.a.value() < 10.0 {
        warnings.push(Warning::new(
            "small_loss_parameter",
            format!(
                "a = {} is not large compared to 1; f√a differs from 1/g_max(a)",
                inp.a.value()
            ),
        ));
    }
    let comparisons = vec![
        Comparison {
            label: format!("reference estimate ({})", inp.case.name()),
            value: inp.case.reference_omega_min(),
            ratio: om / inp.case.reference_omega_min(),
        },
        Comparison {
            label: "optical gyroscope benchmark".into(),
            value: BENCHMARK_OPTICAL,
            ratio: om / BENCHMARK_OPTICAL,
        },
        Comparison {
            label: "matter-wave gyroscope benchmark".into(),
            value: BENCHMARK_MATTER_WAVE,
            ratio: om / BENCHMARK_MATTER_WAVE,
        },
    ];
    let assumptions = vec![
        Assumption::new(
            "species",
            inp.species.name(),
            "caller choice; not fixed by the reference estimate",
        ),
        Assumption::new("lambda_p_m", inp.lambda_p, "D2 line of the species"),
        Assumption::new(
            "a",
            inp.a.value(),
            "caller choice; not fixed by the reference estimate",
        ),
        Assumption::new("time_s", inp.time, "1 s gives rad s^-1 Hz^-1/2"),
        Assumption::new("density_m3", inp.density, "1e14 cm^-3"),
        Assumption::new("cross_section_m2", inp.cross_section, "1e-2 cm^2"),
        Assumption::new(
            "radius_m",
            radius,
            "ring diameter of the reference waveguide",
        ),
        Assumption::new(
            "area_convention",
            inp.area_convention.describe(),
            "selectable",
        ),
        Assumption::new("f", f, "1/(√a g_max) at a = 1e4"),
    ];
    Ok(SensitivityReport {
        case: inp.case,
        species: inp.species.name().to_string(),
        radius,
        area: det.area,
        a: inp.a.value(),
        time: inp.time,
        v_rec: recoil.v_rec,
        s_opt: opt.s_opt,
        xi_opt: opt.xi_opt,
        g_max: opt.g_max,
        f,
        n_d,
        delta_phi_noise: shot_noise_phase(n_d),
        omega_min: om,
        omega_min_at_optimum: om_opt,
        snr_at_omega_min: snr(om_opt, &det, opt.s_opt, opt.xi_opt, inp.a.value()),
        comparisons,
        assumptions,
        warnings,
    })
}

/// One row of an SNR-vs-probe sweep at fixed `ξ`, uniform `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub rabi_p0: f64,
    pub s: f64,
    pub snr_total: f64,
    pub snr_matter: f64,
    pub snr_light: f64,
}

/// SNR of light, matter and combined signal phase against `n_D` shot noise.
/// The interferometer area in `det` must be `R·L_M` for the matter column to
/// equal [`snr`].
#[allow(clippy::too_many_arguments)]
pub fn snr_sweep(
    det: &Detection,
    omega: f64,
    radius: f64,
    length: f64,
    k_p: f64,
    rabi_c: f64,
    xi: f64,
    a: f64,
    rabi_values: &[f64],
) -> Vec<SweepRow> {
    rabi_values
        .iter()
        .map(|&rp| {
            let s = (rp / rabi_c).powi(2);
            let u = 1.0 / (1.0 + s);
            let light = omega * radius * k_p / C * length * xi / (xi + u * u * u);
            let matter = omega * radius / det.hbar_over_m * length * u * u / (xi + u * u * u);
            let root_n = det.photons(xi, s, a).sqrt();
            SweepRow {
                rabi_p0: rp,
                s,
                snr_total: (light + matter) * root_n,
                snr_matter: matter * root_n,
                snr_light: light * root_n,
            }
        })
        .collect()
}

/// Log-spaced values from `lo` to `hi`; one step returns `[lo]`.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{NA23_D2_WAVELENGTH, RB87_D2_WAVELENGTH};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn la(a: f64) -> LossParameter {
        LossParameter::new(a).unwrap()
    }

    fn det() -> Detection {
        Detection {
            area: 1e-5,
            cross_section: 1e-6,
            density: 1e20,
            v_rec: 2.946e-2,
            hbar_over_m: 2.7625e-9,
            time: 1.0,
        }
    }

    #[test]
    fn photon_count_examples() {
        assert_eq!(
            detector_photons(1e-6, 1e20, 2.946e-2, 1.0, 2.0, 0.0, 1.0),
            0.0
        );
        assert_eq!(
            detector_photons(1e-6, 1e20, 2.946e-2, 1.0, 2.0, 0.5, 0.0),
            1e-6 * 1e20 * 2.946e-2 * 2.0 * 0.5
        );
        let n = detector_photons(1e-6, 1e20, 2.946e-2, 1.0, 2.0, 1.0 / 3.0, 1.0);
        // 1e14 · 2.946e-2 · 2/3 · e^{-1}
        assert!(rel(n, 7.225_152e11) < 1e-6, "{n}");
        assert!(low_count_warning(0.5).is_some());
        assert!(low_count_warning(2.0).is_none());
    }

    #[test]
    fn raw_power_form_agrees() {
        let atom = AtomSpecies::rb87(50.0).unwrap();
        let f = ProbeControlFields::resonant(RB87_D2_WAVELENGTH, 0.0, 1.0).unwrap();
        let v = derive_recoil(&atom, &f).unwrap().v_rec;
        let (area, rho, t, xi, length) = (1e-6, 1e20, 0.3, 2.5, 9e-3);
        let g2rho = atom.dipole_p().powi(2) * f.omega_p() * rho / (2.0 * HBAR * EPSILON_0);
        let rabi_c = (g2rho * xi * v / C).sqrt();
        let rabi_p = 0.4 * rabi_c;
        let s = 0.16;
        let a = atom.gamma13() * length / v;
        let kappa = atom.gamma13() / (v * xi);
        let n1 = detector_photons(area, rho, v, t, xi, s, a);
        let n2 = detector_photons_from_power(
            area,
            f.omega_p(),
            rabi_p,
            atom.dipole_p(),
            t,
            kappa,
            length,
        );
        assert!(rel(n1, n2) < 1e-9, "{n1} vs {n2}");
    }

    #[test]
    fn snr_scalings() {
        let d = det();
        assert_eq!(snr(0.0, &d, 0.3, 2.0, 1.0), 0.0);
        let d2 = Detection { time: 2.0, ..d };
        assert!(
            rel(
                snr(1e-6, &d2, 0.3, 2.0, 1.0),
                2f64.sqrt() * snr(1e-6, &d, 0.3, 2.0, 1.0)
            ) < 1e-14
        );
    }

    #[test]
    fn shape_factor_at_large_a() {
        // direct evaluation at s = 1/3, ξ = 2a, a = 50
        let g = shape_factor(1.0 / 3.0, 100.0, 50.0);
        assert!(rel(g, 0.019_614_910_6) < 1e-8, "{g}");
        assert!(rel(g, asymptotic_g_max(50.0)) < 5e-3);
        assert!(rel(asymptotic_g_max(1.0), 0.139_283_497) < 1e-8);
    }

    #[test]
    fn optimum_matches_reference_values() {
        // reference optima from an independent Nelder–Mead search
        let table = [
            (0.05, 0.94555, 0.28366, 0.273478),
            (0.5, 0.49859, 1.49578, 0.153535),
            (1.0, 0.433437, 2.600624, 0.119641),
            (2.9, 0.375081, 6.526403, 0.0767756),
            (5.0, 0.358950, 10.76849, 0.0599242),
            (50.0, 0.336117, 100.83502, 0.01961551),
            (500.0, 0.3336143, 1000.8429, 0.006226323),
            (5000.0, 0.33336146, 10000.8438, 0.001969683),
            (1e4, 0.33334740, 20000.8436, 0.0013928056),
        ];
        for (a, s, xi, g) in table {
            let o = optimize_snr(la(a)).unwrap();
            assert!(rel(o.s_opt, s) < 2e-4, "a = {a}: s = {}", o.s_opt);
            assert!(rel(o.xi_opt, xi) < 2e-4, "a = {a}: xi = {}", o.xi_opt);
            assert!(rel(o.g_max, g) < 1e-5, "a = {a}: g = {}", o.g_max);
        }
    }

    #[test]
    fn optimum_is_stationary() {
        for a in [0.05, 1.0, 50.0, 5000.0] {
            let o = optimize_snr(la(a)).unwrap();
            let h = 1e-4;
            let ds = (shape_factor(o.s_opt * (1.0 + h), o.xi_opt, a)
                - shape_factor(o.s_opt * (1.0 - h), o.xi_opt, a))
                / (2.0 * h * o.s_opt);
            let dx = (shape_factor(o.s_opt, o.xi_opt * (1.0 + h), a)
                - shape_factor(o.s_opt, o.xi_opt * (1.0 - h), a))
                / (2.0 * h * o.xi_opt);
            assert!(
                (ds * o.s_opt).abs() <= 1e-6 * o.g_max,
                "a = {a}: ∂g/∂s = {ds}"
            );
            assert!(
                (dx * o.xi_opt).abs() <= 1e-6 * o.g_max,
                "a = {a}: ∂g/∂ξ = {dx}"
            );
        }
    }

    #[test]
    fn large_a_optimum_tends_to_analytic_values() {
        for a in [50.0, 500.0, 5000.0] {
            let o = optimize_snr(la(a)).unwrap();
            assert!((o.s_opt - 1.0 / 3.0).abs() <= 0.02 / 3.0);
            assert!((o.xi_opt - 2.0 * a).abs() <= 0.04 * a);
        }
        let o = optimize_snr(la(5000.0)).unwrap();
        assert!(rel(o.s_opt, 1.0 / 3.0) < 5e-3 && rel(o.xi_opt, 1e4) < 5e-3);
        // small a deviates but stays bounded
        let o = optimize_snr(la(0.05)).unwrap();
        assert!(o.s_opt > 1.0 / 3.0 && o.s_opt < 3.0);
    }

    #[test]
    fn prefactor() {
        let f4 = prefactor_f_default().unwrap();
        assert!((7.1..=7.3).contains(&f4), "{f4}");
        assert!(rel(f4, 7.179_76) < 1e-5);
        let f3 = prefactor_f(la(1e3)).unwrap();
        assert!(rel(f3, f4) < 5e-3);
        assert!(rel(1.0 / asymptotic_g_max(1.0), 7.1797) < 1e-4);
    }

    #[test]
    fn omega_min_scalings() {
        let d = det();
        let a = la(3.0);
        let w = omega_min(&d, a, 7.2);
        assert!(
            rel(
                omega_min(
                    &Detection {
                        area: 2.0 * d.area,
                        ..d
                    },
                    a,
                    7.2
                ),
                w / 2.0
            ) < 1e-14
        );
        assert!(
            rel(
                omega_min(
                    &Detection {
                        density: 4.0 * d.density,
                        ..d
                    },
                    a,
                    7.2
                ),
                w / 2.0
            ) < 1e-14
        );
        let back = loss_parameter_for(&d, w, 7.2).unwrap();
        assert!(rel(back.value(), 3.0) < 1e-12);
    }

    #[test]
    fn snr_is_one_at_omega_min() {
        let d = det();
        for a in [0.5, 2.9, 50.0] {
            let o = optimize_snr(la(a)).unwrap();
            let w = omega_min_at_optimum(&d, &o);
            assert!((snr(w, &d, o.s_opt, o.xi_opt, a) - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn case_studies() {
        let na = AtomSpecies::na23(0.0).unwrap();
        let g = case_study(&CaseStudyInputs::new(
            CaseStudy::Gupta,
            na.clone(),
            NA23_D2_WAVELENGTH,
            la(2.9),
        ))
        .unwrap();
        assert!(rel(g.omega_min, 1.392e-9) < 2e-3, "{}", g.omega_min);
        let ar = case_study(&CaseStudyInputs::new(
            CaseStudy::Arnold,
            na,
            NA23_D2_WAVELENGTH,
            la(2.9),
        ))
        .unwrap();
        assert!(rel(g.omega_min / ar.omega_min, 1024.0) < 1e-12);
        assert!((g.snr_at_omega_min - 1.0).abs() < 1e-6);
        assert_eq!(g.assumptions.len(), 9);

        let rb = AtomSpecies::rb87(0.0).unwrap();
        let r = case_study(&CaseStudyInputs::new(
            CaseStudy::Gupta,
            rb,
            RB87_D2_WAVELENGTH,
            la(1.0),
        ))
        .unwrap();
        let ratio = r.omega_min / 1.4e-9;
        assert!(ratio > 1.0 / 3.0 && ratio < 3.0, "{}", r.omega_min);

        assert!(matches!(
            CaseStudy::from_name("sagnac"),
            Err(Error::UnknownCase(_))
        ));
        assert_eq!(CaseStudy::from_name("Arnold").unwrap(), CaseStudy::Arnold);
    }

    #[test]
    fn disk_area_doubles_omega_min() {
        let na = AtomSpecies::na23(0.0).unwrap();
        let mut inp = CaseStudyInputs::new(CaseStudy::Gupta, na, NA23_D2_WAVELENGTH, la(2.9));
        let ring = case_study(&inp).unwrap().omega_min;
        inp.area_convention = AreaConvention::Disk;
        assert!(rel(case_study(&inp).unwrap().omega_min, 2.0 * ring) < 1e-12);
    }

    #[test]
    fn sweep_shape() {
        let d = det();
        let (radius, rabi_c) = (1.5e-3, 1e7);
        let length = 2.0 * PI * radius;
        let k_p = 2.0 * PI / 589e-9;
        let rabi = log_space((1e-3f64).sqrt() * rabi_c, 10.0 * rabi_c, 200);
        let rows = snr_sweep(&d, 1e-6, radius, length, k_p, rabi_c, 2.0, 1.0, &rabi);
        let m: Vec<f64> = rows.iter().map(|r| r.snr_matter).collect();
        let peaks = (1..m.len() - 1)
            .filter(|&i| m[i] > m[i - 1] && m[i] > m[i + 1])
            .count();
        assert_eq!(peaks, 1);
        assert!(rows.windows(2).all(|w| w[1].snr_light > w[0].snr_light));
        assert_eq!(
            snr_sweep(
                &d,
                1e-6,
                radius,
                length,
                k_p,
                rabi_c,
                2.0,
                1.0,
                &log_space(1e6, 1e7, 1)
            )
            .len(),
            1
        );
        // matter column equals the closed form when A = R·L_M
        let d_rl = Detection {
            area: radius * length,
            ..d
        };
        let row = snr_sweep(
            &d_rl,
            1e-6,
            radius,
            length,
            k_p,
            rabi_c,
            2.0,
            1.0,
            &[0.5 * rabi_c],
        )[0];
        assert!(rel(row.snr_matter, snr(1e-6, &d_rl, 0.25, 2.0, 1.0)) < 1e-12);
    }

    #[test]
    fn loss_parameter_validation() {
        assert!(LossParameter::new(0.0).is_err());
        assert!(LossParameter::new(f64::NAN).is_err());
        assert!(
            rel(
                LossParameter::from_medium(1e3, 1e-2, 5e-3).unwrap().value(),
                2e3
            ) < 1e-15
        );
    }
}
