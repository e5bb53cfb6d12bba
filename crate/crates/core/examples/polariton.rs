//! Dark-state polariton: group velocity, xi, susceptibility and absorption
//! across a range of control strengths.

use slowlight_gyro::params::{
    AtomSpecies, DerivedScales, ProbeControlFields, RingGeometry, NA23_D2_WAVELENGTH,
};
use slowlight_gyro::polariton::{susceptibility, PolaritonState, SusceptibilityInput};

fn main() -> slowlight_gyro::Result<()> {
    let atom = AtomSpecies::na23(10.0)?;
    let geometry = RingGeometry::full_ring(1.5e-3, 1e-6, 1e20, 7.292e-5)?;
    println!(
        "{:>10} {:>12} {:>10} {:>12} {:>12} {:>12}",
        "rabi_c", "v_gr", "xi", "kappa", "chi'", "chi''"
    );
    for rabi_c in [1e6, 2e6, 4e6, 8e6, 1.6e7] {
        let fields = ProbeControlFields::resonant(NA23_D2_WAVELENGTH, 0.05 * rabi_c, rabi_c)?;
        let d = DerivedScales::compute(&atom, &fields, &geometry)?;
        let state = PolaritonState::compute(
            d.g2rho,
            rabi_c,
            fields.rabi_p0(),
            d.v_rec,
            d.eta,
            atom.gamma13(),
            fields.k_p(),
        )?;
        let chi = susceptibility(&SusceptibilityInput {
            rabi_p: fields.rabi_p0(),
            rabi_c,
            g2rho: d.g2rho,
            gamma1: atom.gamma1(),
            gamma13: atom.gamma13(),
            delta2: 0.0,
            delta3: 0.0,
            rotation_rate: geometry.rotation_rate(),
            radius: geometry.radius(),
            k_p: fields.k_p(),
            v_rec: d.v_rec,
            eta: d.eta,
            gate: 1.0,
        })?;
        println!(
            "{:>10.2e} {:>12.4e} {:>10.4} {:>12.4e} {:>12.4e} {:>12.4e}",
            rabi_c,
            state.v_gr,
            state.xi.value(),
            state.kappa,
            chi.chi_real,
            chi.chi_imag
        );
    }
    Ok(())
}
