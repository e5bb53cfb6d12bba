//! Signal phase as the probe saturates the transition: weak-field, all-order
//! propagation and the two saturation-profile quadratures.

use slowlight_gyro::params::{AtomSpecies, ProbeControlFields, RingGeometry, NA23_D2_WAVELENGTH};
use slowlight_gyro::propagation::{
    propagate_allorder, propagate_weak, signal_phase, PropagationGrid, RingMedium,
    SaturationProfile,
};
use slowlight_gyro::ring::MediumPreparation;

fn main() -> slowlight_gyro::Result<()> {
    let omega = 7.292e-5;
    let atom = AtomSpecies::na23(10.0)?;
    let geometry = RingGeometry::full_ring(1.5e-3, 1e-6, 1e20, omega)?;
    let prep = MediumPreparation::SuperfluidRing;
    let rabi_c = 4e6;
    let fields = ProbeControlFields::resonant(NA23_D2_WAVELENGTH, 0.0, rabi_c)?;
    let medium = RingMedium::from_params(&atom, &fields, &geometry)?;
    let grid = PropagationGrid::new(257, geometry.medium_length())?;

    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>12} {:>8}",
        "s0", "weak", "all-order", "self-cons", "frozen", "T_out"
    );
    for s0 in [1e-3, 1e-2, 0.1, 1.0, 10.0] {
        let rp = rabi_c * f64::sqrt(s0);
        let weak = propagate_weak(omega, &medium, &prep, rp, &grid)?;
        let all = propagate_allorder(omega, &medium, &prep, rp, &grid)?;
        let sc = signal_phase(
            omega,
            &medium,
            &prep,
            rp,
            &grid,
            SaturationProfile::SelfConsistent,
        )?;
        let fr = signal_phase(omega, &medium, &prep, rp, &grid, SaturationProfile::Frozen)?;
        println!(
            "{s0:>8.0e} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e} {:>8.4}",
            weak.delta_phi_sig,
            all.delta_phi_sig,
            sc.delta_phi_sig,
            fr.delta_phi_sig,
            all.amplitude_ratio
        );
    }
    Ok(())
}
