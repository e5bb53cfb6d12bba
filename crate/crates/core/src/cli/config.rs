//! Flat JSON run configuration.
//!
//! Keys are namespaced and carry their unit, e.g. `geometry.radius_m`.
//! Unknown keys are rejected. Any key may be omitted; presets and defaults
//! fill the rest, and [`RunConfig::echo`] writes every resolved value back
//! out so the echo re-parses to the same run.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{
    AtomSpecies, ProbeControlFields, RingGeometry, NA23_D2_WAVELENGTH, RB87_D2_WAVELENGTH,
};
use crate::propagation::{PropagationGrid, SaturationProfile};
use crate::ring::MediumPreparation;
use crate::sensitivity::{AreaConvention, CaseStudy, LossParameter};

pub const DEFAULT_ATOM: &str = "na23";
pub const DEFAULT_GAMMA13: f64 = 10.0;
pub const DEFAULT_RABI_C: f64 = 4e6;
pub const DEFAULT_RABI_P0_FRACTION: f64 = 0.05;
pub const DEFAULT_GEOMETRY: &str = "gupta";
pub const DEFAULT_CROSS_SECTION: f64 = 1e-6;
pub const DEFAULT_DENSITY: f64 = 1e20;
/// Earth rotation rate, rad/s.
pub const DEFAULT_ROTATION_RATE: f64 = 7.292_115e-5;
pub const DEFAULT_GRID_POINTS: usize = 257;
pub const DEFAULT_TIME: f64 = 1.0;
pub const DEFAULT_SWEEP_STEPS: usize = 61;
pub const DEFAULT_CASE_A: f64 = 2.9;
pub const DEFAULT_A_VALUES: [f64; 6] = [0.05, 0.5, 5.0, 50.0, 500.0, 5000.0];

/// Raw file contents; every key optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(
        rename = "atom.preset",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub atom_preset: Option<String>,
    #[serde(
        rename = "atom.mass_kg",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub atom_mass_kg: Option<f64>,
    #[serde(
        rename = "atom.dipole_cm",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub atom_dipole_cm: Option<f64>,
    #[serde(
        rename = "atom.gamma1_rad_s",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub atom_gamma1_rad_s: Option<f64>,
    #[serde(
        rename = "atom.gamma3_rad_s",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub atom_gamma3_rad_s: Option<f64>,
    #[serde(
        rename = "atom.gamma13_rad_s",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub atom_gamma13_rad_s: Option<f64>,

    #[serde(
        rename = "fields.lambda_p_m",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub fields_lambda_p_m: Option<f64>,
    #[serde(
        rename = "fields.k_c_parallel_rad_m",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub fields_k_c_parallel_rad_m: Option<f64>,
    #[serde(
        rename = "fields.rabi_p0_rad_s",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub fields_rabi_p0_rad_s: Option<f64>,
    #[serde(
        rename = "fields.rabi_c_rad_s",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub fields_rabi_c_rad_s: Option<f64>,
    #[serde(
        rename = "fields.delta2_rad_s",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub fields_delta2_rad_s: Option<f64>,
    #[serde(
        rename = "fields.delta3_rad_s",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub fields_delta3_rad_s: Option<f64>,

    #[serde(
        rename = "geometry.preset",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub geometry_preset: Option<String>,
    #[serde(
        rename = "geometry.radius_m",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub geometry_radius_m: Option<f64>,
    #[serde(
        rename = "geometry.medium_length_m",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub geometry_medium_length_m: Option<f64>,
    #[serde(
        rename = "geometry.cross_section_m2",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub geometry_cross_section_m2: Option<f64>,
    #[serde(
        rename = "geometry.atom_density_m3",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub geometry_atom_density_m3: Option<f64>,
    #[serde(
        rename = "geometry.rotation_rate_rad_s",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub geometry_rotation_rate_rad_s: Option<f64>,

    #[serde(
        rename = "preparation.kind",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub preparation_kind: Option<String>,
    #[serde(
        rename = "preparation.temperature_k",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub preparation_temperature_k: Option<f64>,

    #[serde(
        rename = "grid.n_points",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub grid_n_points: Option<usize>,
    #[serde(
        rename = "detection.time_s",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub detection_time_s: Option<f64>,
    #[serde(
        rename = "signal.saturation_profile",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub signal_saturation_profile: Option<SaturationProfile>,

    #[serde(
        rename = "sweep.rabi_p0_min_rad_s",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub sweep_rabi_p0_min_rad_s: Option<f64>,
    #[serde(
        rename = "sweep.rabi_p0_max_rad_s",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub sweep_rabi_p0_max_rad_s: Option<f64>,
    #[serde(
        rename = "sweep.n_steps",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub sweep_n_steps: Option<usize>,

    #[serde(
        rename = "optimize.loss_a_values",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub optimize_loss_a_values: Option<Vec<f64>>,

    #[serde(rename = "case.name", default, skip_serializing_if = "Option::is_none")]
    pub case_name: Option<String>,
    #[serde(
        rename = "case.loss_a",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub case_loss_a: Option<f64>,
    #[serde(
        rename = "case.area_convention",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub case_area_convention: Option<AreaConvention>,
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub rabi_p0_min: f64,
    pub rabi_p0_max: f64,
    pub n_steps: usize,
}

/// Validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub atom: AtomSpecies,
    pub fields: ProbeControlFields,
    pub geometry: RingGeometry,
    pub geometry_preset: Option<String>,
    pub preparation: MediumPreparation,
    pub grid: PropagationGrid,
    pub detection_time: f64,
    pub saturation_profile: SaturationProfile,
    pub sweep: SweepSpec,
    pub loss_a_values: Vec<LossParameter>,
    pub case: Option<CaseStudy>,
    pub case_loss_a: LossParameter,
    pub area_convention: AreaConvention,
}

fn geometry_radius(preset: &str) -> Result<f64> {
    CaseStudy::from_name(preset)
        .map(CaseStudy::radius)
        .map_err(|_| {
            Error::invalid(
                "geometry.preset",
                format!("unknown geometry `{preset}` (expected gupta or arnold)"),
            )
        })
}

fn positive(key: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::invalid(key, format!("must be positive, got {v}")))
    }
}

impl RunConfig {
    pub fn resolve(file: &ConfigFile) -> Result<Self> {
        let preset = file.atom_preset.as_deref().unwrap_or(DEFAULT_ATOM);
        let gamma13 = file.atom_gamma13_rad_s.unwrap_or(DEFAULT_GAMMA13);
        let base = AtomSpecies::preset(preset, gamma13)?;
        let atom = AtomSpecies::new(
            preset,
            file.atom_mass_kg.unwrap_or(base.mass()),
            file.atom_dipole_cm.unwrap_or(base.dipole_p()),
            file.atom_gamma1_rad_s.unwrap_or(base.gamma1()),
            file.atom_gamma3_rad_s.unwrap_or(base.gamma3()),
            gamma13,
        )
        .map_err(|e| prefix(e, "atom."))?;

        let lambda = file.fields_lambda_p_m.unwrap_or(match preset {
            "rb87" => RB87_D2_WAVELENGTH,
            _ => NA23_D2_WAVELENGTH,
        });
        let rabi_c = file.fields_rabi_c_rad_s.unwrap_or(DEFAULT_RABI_C);
        let fields = ProbeControlFields::new(
            lambda,
            file.fields_k_c_parallel_rad_m.unwrap_or(0.0),
            file.fields_rabi_p0_rad_s
                .unwrap_or(DEFAULT_RABI_P0_FRACTION * rabi_c),
            rabi_c,
            file.fields_delta2_rad_s.unwrap_or(0.0),
            file.fields_delta3_rad_s.unwrap_or(0.0),
        )
        .map_err(|e| prefix(e, "fields."))?;

        // an explicit radius without a preset leaves the geometry unnamed
        let geometry_preset = match (&file.geometry_preset, file.geometry_radius_m) {
            (Some(p), _) => Some(p.to_ascii_lowercase()),
            (None, None) => Some(DEFAULT_GEOMETRY.to_string()),
            (None, Some(_)) => None,
        };
        let preset_radius = geometry_preset
            .as_deref()
            .map(geometry_radius)
            .transpose()?;
        let radius = file.geometry_radius_m.or(preset_radius).unwrap_or_default();
        let geometry = RingGeometry::new(
            radius,
            file.geometry_medium_length_m.unwrap_or(2.0 * PI * radius),
            file.geometry_cross_section_m2
                .unwrap_or(DEFAULT_CROSS_SECTION),
            file.geometry_atom_density_m3.unwrap_or(DEFAULT_DENSITY),
            file.geometry_rotation_rate_rad_s
                .unwrap_or(DEFAULT_ROTATION_RATE),
        )
        .map_err(|e| prefix(e, "geometry."))?;

        let preparation = match file.preparation_kind.as_deref().unwrap_or("superfluid_ring") {
            "superfluid_ring" => MediumPreparation::SuperfluidRing,
            "longitudinal_trap" => MediumPreparation::LongitudinalTrap,
            "thermal_ring" => {
                let t = file.preparation_temperature_k.ok_or_else(|| {
                    Error::invalid("preparation.temperature_k", "required for thermal_ring")
                })?;
                MediumPreparation::thermal(t).map_err(|e| prefix(e, "preparation."))?
            }
            other => {
                return Err(Error::invalid(
                    "preparation.kind",
                    format!("unknown preparation `{other}` (expected superfluid_ring, thermal_ring or longitudinal_trap)"),
                ))
            }
        };
        if file.preparation_temperature_k.is_some()
            && !matches!(preparation, MediumPreparation::ThermalRing { .. })
        {
            return Err(Error::invalid(
                "preparation.temperature_k",
                "only valid with preparation.kind = thermal_ring",
            ));
        }

        let grid = PropagationGrid::new(
            file.grid_n_points.unwrap_or(DEFAULT_GRID_POINTS),
            geometry.medium_length(),
        )?;
        let detection_time = positive(
            "detection.time_s",
            file.detection_time_s.unwrap_or(DEFAULT_TIME),
        )?;

        let sweep = SweepSpec {
            rabi_p0_min: positive(
                "sweep.rabi_p0_min_rad_s",
                file.sweep_rabi_p0_min_rad_s
                    .unwrap_or(1e-3f64.sqrt() * rabi_c),
            )?,
            rabi_p0_max: positive(
                "sweep.rabi_p0_max_rad_s",
                file.sweep_rabi_p0_max_rad_s.unwrap_or(10.0 * rabi_c),
            )?,
            n_steps: file.sweep_n_steps.unwrap_or(DEFAULT_SWEEP_STEPS),
        };
        if sweep.n_steps == 0 {
            return Err(Error::invalid("sweep.n_steps", "must be at least 1"));
        }
        if sweep.rabi_p0_max < sweep.rabi_p0_min {
            return Err(Error::invalid(
                "sweep.rabi_p0_max_rad_s",
                "must not be below sweep.rabi_p0_min_rad_s",
            ));
        }

        let loss_a_values = file
            .optimize_loss_a_values
            .clone()
            .unwrap_or_else(|| DEFAULT_A_VALUES.to_vec())
            .into_iter()
            .map(|a| LossParameter::new(a).map_err(|e| prefix(e, "optimize.loss_a_values: ")))
            .collect::<Result<Vec<_>>>()?;

        let case = file
            .case_name
            .as_deref()
            .map(CaseStudy::from_name)
            .transpose()?;
        let case_loss_a = LossParameter::new(file.case_loss_a.unwrap_or(DEFAULT_CASE_A))
            .map_err(|e| prefix(e, "case."))?;

        Ok(RunConfig {
            atom,
            fields,
            geometry,
            geometry_preset,
            preparation,
            grid,
            detection_time,
            saturation_profile: file
                .signal_saturation_profile
                .unwrap_or(SaturationProfile::SelfConsistent),
            sweep,
            loss_a_values,
            case,
            case_loss_a,
            area_convention: file
                .case_area_convention
                .unwrap_or(AreaConvention::RingLength),
        })
    }

    /// Every resolved value as an explicit key.
    pub fn echo(&self) -> ConfigFile {
        let (kind, temperature) = match self.preparation {
            MediumPreparation::ThermalRing { temperature } => ("thermal_ring", Some(temperature)),
            other => (other.label(), None),
        };
        ConfigFile {
            atom_preset: Some(self.atom.name().to_string()),
            atom_mass_kg: Some(self.atom.mass()),
            atom_dipole_cm: Some(self.atom.dipole_p()),
            atom_gamma1_rad_s: Some(self.atom.gamma1()),
            atom_gamma3_rad_s: Some(self.atom.gamma3()),
            atom_gamma13_rad_s: Some(self.atom.gamma13()),
            fields_lambda_p_m: Some(self.fields.lambda_p()),
            fields_k_c_parallel_rad_m: Some(self.fields.k_c_parallel()),
            fields_rabi_p0_rad_s: Some(self.fields.rabi_p0()),
            fields_rabi_c_rad_s: Some(self.fields.rabi_c()),
            fields_delta2_rad_s: Some(self.fields.delta2()),
            fields_delta3_rad_s: Some(self.fields.delta3()),
            geometry_preset: self.geometry_preset.clone(),
            geometry_radius_m: Some(self.geometry.radius()),
            geometry_medium_length_m: Some(self.geometry.medium_length()),
            geometry_cross_section_m2: Some(self.geometry.cross_section()),
            geometry_atom_density_m3: Some(self.geometry.atom_density()),
            geometry_rotation_rate_rad_s: Some(self.geometry.rotation_rate()),
            preparation_kind: Some(kind.to_string()),
            preparation_temperature_k: temperature,
            grid_n_points: Some(self.grid.n_points()),
            detection_time_s: Some(self.detection_time),
            signal_saturation_profile: Some(self.saturation_profile),
            sweep_rabi_p0_min_rad_s: Some(self.sweep.rabi_p0_min),
            sweep_rabi_p0_max_rad_s: Some(self.sweep.rabi_p0_max),
            sweep_n_steps: Some(self.sweep.n_steps),
            optimize_loss_a_values: Some(self.loss_a_values.iter().map(|a| a.value()).collect()),
            case_name: self.case.map(|c| c.name().to_string()),
            case_loss_a: Some(self.case_loss_a.value()),
            case_area_convention: Some(self.area_convention),
        }
    }

    pub fn with_grid_points(mut self, n: usize) -> Result<Self> {
        self.grid = PropagationGrid::new(n, self.geometry.medium_length())?;
        Ok(self)
    }
}

/// Adds the config namespace to a parameter error so messages name the key.
fn prefix(e: Error, ns: &str) -> Error {
    match e {
        Error::InvalidParameter { name, reason } if !name.contains('.') => {
            Error::Config(format!("{ns}{name}: {reason}"))
        }
        other => other,
    }
}
