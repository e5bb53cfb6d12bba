//! Sagnac phase with and without the medium, for the three ways the atoms can
//! be held.

use slowlight_gyro::params::{AtomSpecies, ProbeControlFields, RingGeometry, NA23_D2_WAVELENGTH};
use slowlight_gyro::propagation::{bare_sagnac_phase, propagate_weak, PropagationGrid, RingMedium};
use slowlight_gyro::ring::MediumPreparation;

fn main() -> slowlight_gyro::Result<()> {
    let omega = 7.292e-5;
    let radius = 1.5e-3;
    let atom = AtomSpecies::na23(10.0)?;
    let fields = ProbeControlFields::resonant(NA23_D2_WAVELENGTH, 1e4, 4e6)?;
    let geometry = RingGeometry::full_ring(radius, 1e-6, 1e20, omega)?;
    let medium = RingMedium::from_params(&atom, &fields, &geometry)?;
    let grid = PropagationGrid::new(257, geometry.medium_length())?;

    let bare = bare_sagnac_phase(
        omega,
        std::f64::consts::PI * radius * radius,
        fields.lambda_p(),
    );
    println!("empty ring      {bare:.4e} rad");
    for prep in [
        MediumPreparation::SuperfluidRing,
        MediumPreparation::thermal(1e-6)?,
        MediumPreparation::LongitudinalTrap,
    ] {
        let r = propagate_weak(omega, &medium, &prep, fields.rabi_p0(), &grid)?;
        println!(
            "{:<15} {:.4e} rad  (light {:.3e}, matter {:.3e}, x{:.3e})",
            prep.label(),
            r.delta_phi_sig,
            r.light_part,
            r.matter_part,
            r.delta_phi_sig / bare
        );
    }
    Ok(())
}
