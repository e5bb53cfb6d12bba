//! Command implementations behind the `slgyro` binary.
//!
//! Each command takes a [`ConfigFile`], resolves it, and returns a [`Report`]
//! that renders either as a JSON [`ResultEnvelope`] or as a CSV table.

pub mod config;
pub mod envelope;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::Value;

pub use config::{ConfigFile, RunConfig};
pub use envelope::{Quantity, ResultEnvelope, Results};

use crate::bloch::{
    build_generator, coherence_rho21, nonlocal_term_ratio, steady_state, BlochInputs, LABELS,
};
use crate::error::{Error, Result};
use crate::params::{DerivedScales, ProbeControlFields};
use crate::polariton::{PolaritonState, Xi};
use crate::propagation::{
    bare_sagnac_phase, dispersion_regime_check, propagate_allorder, propagate_weak, signal_phase,
    PropagationResult, RingMedium, SaturationProfile,
};
use crate::sensitivity::{
    case_study, log_space, omega_min as omega_min_estimate, omega_min_at_optimum, optimize_snr,
    prefactor_f_default, snr_sweep, Assumption, CaseStudy, CaseStudyInputs, Detection,
    LossParameter, SensitivityReport,
};
use crate::Warning;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    SteadyState,
    Propagate,
    Phase,
    SnrSweep,
    Optimize,
    OmegaMin,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::SteadyState,
        Command::Propagate,
        Command::Phase,
        Command::SnrSweep,
        Command::Optimize,
        Command::OmegaMin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::SteadyState => "steady-state",
            Command::Propagate => "propagate",
            Command::Phase => "phase",
            Command::SnrSweep => "snr-sweep",
            Command::Optimize => "optimize",
            Command::OmegaMin => "omega-min",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Csv,
    #[default]
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!(
                "unknown format `{other}` (expected csv or json)"
            ))),
        }
    }
}

/// Rows for CSV output. Floats are written in round-trip exponent form.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: impl IntoIterator<Item = f64>) {
        self.rows.push(row.into_iter().map(fmt_float).collect());
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub envelope: ResultEnvelope,
    pub table: Table,
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.envelope.to_json(),
            Format::Csv => self.table.to_csv(),
        }
    }
}

/// Runs `command` on a raw configuration.
pub fn run(command: Command, file: &ConfigFile) -> Result<Report> {
    let cfg = RunConfig::resolve(file)?;
    let out = match command {
        Command::SteadyState => steady_state_cmd(&cfg)?,
        Command::Propagate => propagate_cmd(&cfg)?,
        Command::Phase => phase_cmd(&cfg)?,
        Command::SnrSweep => snr_sweep_cmd(&cfg)?,
        Command::Optimize => optimize_cmd(&cfg)?,
        Command::OmegaMin => omega_min_cmd(&cfg)?,
    };
    let mut assumptions = config_assumptions(file, &cfg)?;
    assumptions.extend(out.assumptions);
    Ok(Report {
        envelope: ResultEnvelope {
            tool: "slgyro",
            version: env!("CARGO_PKG_VERSION"),
            command: command.name(),
            inputs: cfg.echo(),
            results: out.results,
            assumptions,
            warnings: out.warnings,
        },
        table: out.table,
    })
}

struct Outcome {
    results: Results,
    table: Table,
    assumptions: Vec<Assumption>,
    warnings: Vec<Warning>,
}

/// One assumption per key the caller left out, naming where its value came from.
fn config_assumptions(file: &ConfigFile, cfg: &RunConfig) -> Result<Vec<Assumption>> {
    let given = serde_json::to_value(file)?;
    let resolved = serde_json::to_value(cfg.echo())?;
    let (Value::Object(given), Value::Object(resolved)) = (given, resolved) else {
        unreachable!("config serializes as an object")
    };
    let atom = cfg.atom.name().to_string();
    let geometry = cfg.geometry_preset.clone();
    Ok(resolved
        .iter()
        .filter(|(k, _)| !given.contains_key(*k))
        .map(|(k, v)| {
            let source = if k.starts_with("atom.") || k == "fields.lambda_p_m" {
                format!("preset {atom}")
            } else if k == "geometry.radius_m" || k == "geometry.preset" {
                geometry
                    .as_ref()
                    .map_or("default".into(), |g| format!("preset {g}"))
            } else {
                "default".into()
            };
            let value = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            Assumption::new(k, value, &source)
        })
        .collect())
}

fn medium(cfg: &RunConfig) -> Result<RingMedium> {
    RingMedium::from_params(&cfg.atom, &cfg.fields, &cfg.geometry)
}

fn polariton_state(cfg: &RunConfig, scales: &DerivedScales) -> Result<PolaritonState> {
    PolaritonState::compute(
        scales.g2rho,
        cfg.fields.rabi_c(),
        cfg.fields.rabi_p0(),
        scales.v_rec,
        scales.eta,
        cfg.atom.gamma13(),
        cfg.fields.k_p(),
    )
}

fn complex(z: Complex64) -> Value {
    serde_json::json!({ "re": envelope::number(z.re), "im": envelope::number(z.im) })
}

fn steady_state_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let inputs = BlochInputs::from_params(&cfg.atom, &cfg.fields, &cfg.geometry);
    let gen = build_generator(&inputs)?;
    let rho = steady_state(&gen, 1.0)?;
    let res = rho.residuals();
    let ratio = nonlocal_term_ratio(
        inputs.k_p,
        inputs.rotation_rate,
        inputs.radius,
        inputs.gamma2(),
    );

    let mut warnings = Vec::new();
    if ratio > 0.1 {
        warnings.push(Warning::new(
            "nonlocal_term",
            format!("k_p Ω R / γ₂ = {ratio:.3e}; the rotation drift term is not negligible"),
        ));
    }
    let matrix: Vec<Vec<Value>> = (1..=3)
        .map(|mu| (1..=3).map(|nu| complex(rho.get(mu, nu))).collect())
        .collect();
    let mut results = Results::new();
    results
        .value("normalization", "dimensionless, trace 1")
        .value("rho", matrix)
        .value("coherence_rho21", complex(coherence_rho21(&rho)))
        .quantity("residual_hermiticity", res.hermiticity, "1")
        .quantity("residual_trace", res.trace, "1")
        .quantity("residual_diagonal_imag", res.diagonal_imag, "1")
        .quantity("min_population", res.min_population, "1")
        .quantity("nonlocal_term_ratio", ratio, "1");

    let mut table = Table::new(&["element", "re", "im"]);
    let v = rho.to_vec();
    for (label, z) in LABELS.iter().zip(v.iter()) {
        table
            .rows
            .push(vec![label.to_string(), fmt_float(z.re), fmt_float(z.im)]);
    }
    for (label, r) in [
        ("residual_hermiticity", res.hermiticity),
        ("residual_trace", res.trace),
        ("residual_diagonal_imag", res.diagonal_imag),
    ] {
        table
            .rows
            .push(vec![label.to_string(), fmt_float(r), fmt_float(0.0)]);
    }
    Ok(Outcome {
        results,
        table,
        assumptions: Vec::new(),
        warnings,
    })
}

fn put_propagation(results: &mut Results, key: &str, p: &PropagationResult) {
    let mut r = Results::new();
    r.quantity("delta_phi_sig", p.delta_phi_sig, "rad")
        .quantity("light_part", p.light_part, "rad")
        .quantity("matter_part", p.matter_part, "rad")
        .quantity("phase_cw", p.phase_cw, "rad")
        .quantity("phase_ccw", p.phase_ccw, "rad")
        .quantity("amplitude_ratio", p.amplitude_ratio, "1")
        .value("n_points", p.n_points)
        .quantity("refinement_change", p.refinement_change, "1");
    results.value(key, r);
}

fn put_medium(results: &mut Results, m: &RingMedium, state: &PolaritonState) {
    results
        .quantity("v_rec", m.v_rec, "m/s")
        .quantity("eta", m.eta, "1")
        .quantity("tan2_theta", m.tan2_theta, "1")
        .value("xi", m.xi())
        .quantity("v_gr", state.v_gr, "m/s")
        .quantity("kappa", state.kappa, "1/m")
        .quantity("loss_parameter_a", m.loss_parameter(), "1");
}

fn propagate_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let m = medium(cfg)?;
    let scales = DerivedScales::compute(&cfg.atom, &cfg.fields, &cfg.geometry)?;
    let state = polariton_state(cfg, &scales)?;
    let omega = cfg.geometry.rotation_rate();
    let weak = propagate_weak(omega, &m, &cfg.preparation, cfg.fields.rabi_p0(), &cfg.grid)?;
    let all = propagate_allorder(omega, &m, &cfg.preparation, cfg.fields.rabi_p0(), &cfg.grid)?;

    let mut results = Results::new();
    put_medium(&mut results, &m, &state);
    results.quantity(
        "s0",
        (cfg.fields.rabi_p0() / cfg.fields.rabi_c()).powi(2),
        "1",
    );
    put_propagation(&mut results, "weak", &weak);
    put_propagation(&mut results, "all_order", &all);

    let mut table = Table::new(&["x_m", "amplitude_ratio", "phase_rad", "s", "xi"]);
    for i in 0..all.n_points {
        table.push([
            all.x[i],
            all.amplitude_profile[i],
            all.phase_profile[i],
            all.s_profile[i],
            all.xi_profile[i].value(),
        ]);
    }
    let mut warnings: Vec<Warning> = dispersion_regime_check(&state).into_iter().collect();
    warnings.extend(weak.warnings);
    warnings.extend(all.warnings);
    Ok(Outcome {
        results,
        table,
        assumptions: Vec::new(),
        warnings,
    })
}

fn phase_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let m = medium(cfg)?;
    let scales = DerivedScales::compute(&cfg.atom, &cfg.fields, &cfg.geometry)?;
    let state = polariton_state(cfg, &scales)?;
    let omega = cfg.geometry.rotation_rate();
    let rabi_p0 = cfg.fields.rabi_p0();
    let sig = signal_phase(
        omega,
        &m,
        &cfg.preparation,
        rabi_p0,
        &cfg.grid,
        cfg.saturation_profile,
    )?;
    // interferometer area enclosed by the medium section
    let area = m.radius * m.length / 2.0;
    let bare = bare_sagnac_phase(omega, area, cfg.fields.lambda_p());

    let mut results = Results::new();
    put_medium(&mut results, &m, &state);
    results
        .value("saturation_profile", sig.profile)
        .quantity("s0", (rabi_p0 / cfg.fields.rabi_c()).powi(2), "1")
        .quantity("delta_phi_sig", sig.delta_phi_sig, "rad")
        .quantity("light_part", sig.light_part, "rad")
        .quantity("matter_part", sig.matter_part, "rad")
        .quantity("amplitude_ratio", sig.amplitude_ratio, "1")
        .quantity("bare_sagnac_phase", bare, "rad")
        .quantity("enhancement", sig.delta_phi_sig / bare, "1");

    let mut table = Table::new(&["x_m", "amplitude_ratio", "s"]);
    match cfg.saturation_profile {
        SaturationProfile::SelfConsistent => {
            let p = propagate_allorder(omega, &m, &cfg.preparation, rabi_p0, &cfg.grid)?;
            for i in 0..p.n_points {
                table.push([p.x[i], p.amplitude_profile[i], p.s_profile[i]]);
            }
        }
        SaturationProfile::Frozen => {
            let s0 = (rabi_p0 / cfg.fields.rabi_c()).powi(2);
            for x in cfg.grid.x() {
                table.push([x, (-m.amplitude_decay() * x).exp(), s0]);
            }
        }
    }
    let mut warnings: Vec<Warning> = dispersion_regime_check(&state).into_iter().collect();
    warnings.extend(sig.warnings);
    Ok(Outcome {
        results,
        table,
        assumptions: Vec::new(),
        warnings,
    })
}

fn detection(cfg: &RunConfig, v_rec: f64, area: f64) -> Result<Detection> {
    let det = Detection {
        area,
        cross_section: cfg.geometry.cross_section(),
        density: cfg.geometry.atom_density(),
        v_rec,
        hbar_over_m: cfg.atom.hbar_over_m(),
        time: cfg.detection_time,
    };
    det.validate()?;
    Ok(det)
}

fn snr_sweep_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let m = medium(cfg)?;
    let xi = match m.xi() {
        Xi::Finite(x) => x,
        Xi::Infinite => {
            return Err(Error::Config(
                "snr-sweep needs atoms in the ring (geometry.atom_density_m3 > 0)".into(),
            ))
        }
    };
    let det = detection(cfg, m.v_rec, m.radius * m.length)?;
    let a = m.loss_parameter();
    let rabi = log_space(
        cfg.sweep.rabi_p0_min,
        cfg.sweep.rabi_p0_max,
        cfg.sweep.n_steps,
    );
    let omega = cfg.geometry.rotation_rate();
    let rows = snr_sweep(
        &det, omega, m.radius, m.length, m.k_p, m.rabi_c, xi, a, &rabi,
    );

    let mut table = Table::new(&["rabi_p0", "s", "snr_total", "snr_matter", "snr_light"]);
    for r in &rows {
        table.push([r.rabi_p0, r.s, r.snr_total, r.snr_matter, r.snr_light]);
    }
    let mut results = Results::new();
    results
        .quantity("xi", xi, "1")
        .quantity("loss_parameter_a", a, "1")
        .quantity("area", det.area, "m^2")
        .value(
            "columns",
            [
                "rabi_p0 [rad/s]",
                "s [1]",
                "snr_total [1]",
                "snr_matter [1]",
                "snr_light [1]",
            ],
        )
        .value(
            "rows",
            rows.iter()
                .map(|r| {
                    [r.rabi_p0, r.s, r.snr_total, r.snr_matter, r.snr_light].map(envelope::number)
                })
                .collect::<Vec<_>>(),
        );
    let mut warnings = Vec::new();
    if let Some(best) = rows
        .iter()
        .max_by(|x, y| x.snr_total.total_cmp(&y.snr_total))
    {
        results
            .quantity("best_rabi_p0", best.rabi_p0, "rad/s")
            .quantity("best_snr_total", best.snr_total, "1");
        if best.s > 10.0 {
            warnings.push(Warning::new(
                "strong_saturation",
                format!(
                    "the sweep maximum sits at s = {:.3e}, deep in saturation",
                    best.s
                ),
            ));
        }
    }
    Ok(Outcome {
        results,
        table,
        assumptions: Vec::new(),
        warnings,
    })
}

fn optimize_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let mut table = Table::new(&["a", "s_opt", "xi_opt", "g_max", "f_estimate"]);
    let mut rows = Vec::new();
    for &a in &cfg.loss_a_values {
        let opt = optimize_snr(a)?;
        let f = 1.0 / (a.value().sqrt() * opt.g_max);
        table.push([opt.a, opt.s_opt, opt.xi_opt, opt.g_max, f]);
        rows.push([opt.a, opt.s_opt, opt.xi_opt, opt.g_max, f].map(envelope::number));
    }
    let mut results = Results::new();
    results
        .value(
            "columns",
            [
                "a [1]",
                "s_opt [1]",
                "xi_opt [1]",
                "g_max [1]",
                "f_estimate [1]",
            ],
        )
        .value("rows", rows)
        .quantity("f_large_a", prefactor_f_default()?, "1");
    Ok(Outcome {
        results,
        table,
        assumptions: Vec::new(),
        warnings: Vec::new(),
    })
}

fn put_report(results: &mut Results, r: &SensitivityReport) {
    results
        .value("case", r.case.name())
        .value("species", &r.species)
        .quantity("radius", r.radius, "m")
        .quantity("area", r.area, "m^2")
        .quantity("loss_parameter_a", r.a, "1")
        .quantity("time", r.time, "s")
        .quantity("v_rec", r.v_rec, "m/s")
        .quantity("s_opt", r.s_opt, "1")
        .quantity("xi_opt", r.xi_opt, "1")
        .quantity("g_max", r.g_max, "1")
        .quantity("f", r.f, "1")
        .quantity("n_d", r.n_d, "photons")
        .quantity("delta_phi_noise", r.delta_phi_noise, "rad")
        .quantity("omega_min", r.omega_min, "rad/s/Hz^0.5")
        .quantity(
            "omega_min_at_optimum",
            r.omega_min_at_optimum,
            "rad/s/Hz^0.5",
        )
        .quantity("snr_at_omega_min", r.snr_at_omega_min, "1")
        .value("comparisons", &r.comparisons);
}

fn case_inputs(cfg: &RunConfig, case: CaseStudy) -> CaseStudyInputs {
    let mut inp = CaseStudyInputs::new(
        case,
        cfg.atom.clone(),
        cfg.fields.lambda_p(),
        cfg.case_loss_a,
    );
    inp.time = cfg.detection_time;
    inp.density = cfg.geometry.atom_density();
    inp.cross_section = cfg.geometry.cross_section();
    inp.area_convention = cfg.area_convention;
    inp
}

fn omega_min_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let mut results = Results::new();
    let mut table = Table::new(&[
        "a",
        "s_opt",
        "xi_opt",
        "g_max",
        "f",
        "n_d",
        "omega_min",
        "omega_min_at_optimum",
    ]);
    let (assumptions, warnings) = if let Some(case) = cfg.case {
        let report = case_study(&case_inputs(cfg, case))?;
        let gupta = case_study(&case_inputs(cfg, CaseStudy::Gupta))?;
        let arnold = case_study(&case_inputs(cfg, CaseStudy::Arnold))?;
        put_report(&mut results, &report);
        results.quantity("gupta_over_arnold", gupta.omega_min / arnold.omega_min, "1");
        table.push([
            report.a,
            report.s_opt,
            report.xi_opt,
            report.g_max,
            report.f,
            report.n_d,
            report.omega_min,
            report.omega_min_at_optimum,
        ]);
        (report.assumptions, report.warnings)
    } else {
        let fields = ProbeControlFields::resonant(cfg.fields.lambda_p(), 0.0, 1.0)?;
        let v_rec = crate::params::derive_recoil(&cfg.atom, &fields)?.v_rec;
        let length = cfg.geometry.medium_length();
        let det = detection(cfg, v_rec, cfg.geometry.radius() * length)?;
        let a = LossParameter::from_medium(cfg.atom.gamma13(), length, v_rec)?;
        let opt = optimize_snr(a)?;
        let f = prefactor_f_default()?;
        let om = omega_min_estimate(&det, a, f);
        let om_opt = omega_min_at_optimum(&det, &opt);
        let n_d = det.photons(opt.xi_opt, opt.s_opt, a.value());
        results
            .quantity("area", det.area, "m^2")
            .quantity("loss_parameter_a", a.value(), "1")
            .quantity("v_rec", v_rec, "m/s")
            .quantity("s_opt", opt.s_opt, "1")
            .quantity("xi_opt", opt.xi_opt, "1")
            .quantity("g_max", opt.g_max, "1")
            .quantity("f", f, "1")
            .quantity("n_d", n_d, "photons")
            .quantity("omega_min", om, "rad/s/Hz^0.5")
            .quantity("omega_min_at_optimum", om_opt, "rad/s/Hz^0.5");
        table.push([
            a.value(),
            opt.s_opt,
            opt.xi_opt,
            opt.g_max,
            f,
            n_d,
            om,
            om_opt,
        ]);
        let assumptions = vec![Assumption::new(
            "loss_parameter_a",
            a.value(),
            "γ13 L_M / v_rec from the configured medium",
        )];
        (
            assumptions,
            crate::sensitivity::low_count_warning(n_d)
                .into_iter()
                .collect(),
        )
    };
    Ok(Outcome {
        results,
        table,
        assumptions,
        warnings,
    })
}
