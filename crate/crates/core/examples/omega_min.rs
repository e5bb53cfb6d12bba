//! Minimum detectable rotation rate for the two reference rings.

use slowlight_gyro::params::{AtomSpecies, NA23_D2_WAVELENGTH, RB87_D2_WAVELENGTH};
use slowlight_gyro::sensitivity::{case_study, CaseStudy, CaseStudyInputs, LossParameter};

fn main() -> slowlight_gyro::Result<()> {
    for (species, lambda, a) in [
        (AtomSpecies::na23(0.0)?, NA23_D2_WAVELENGTH, 2.9),
        (AtomSpecies::rb87(0.0)?, RB87_D2_WAVELENGTH, 1.0),
    ] {
        for case in [CaseStudy::Gupta, CaseStudy::Arnold] {
            let r = case_study(&CaseStudyInputs::new(
                case,
                species.clone(),
                lambda,
                LossParameter::new(a)?,
            ))?;
            println!(
                "{:<6} {:<5} a = {a:<4} omega_min = {:.3e} rad/s/sqrt(Hz)  (reference {:.1e}, n_D = {:.2e})",
                case.name(),
                r.species,
                r.omega_min,
                case.reference_omega_min(),
                r.n_d
            );
        }
    }
    Ok(())
}
