use slowlight_gyro::params::{
    derive_recoil, AtomSpecies, ProbeControlFields, RingGeometry, NA23_D2_WAVELENGTH,
};
use slowlight_gyro::propagation::RingMedium;
use slowlight_gyro::sensitivity::{log_space, snr_sweep, Detection};

fn main() -> slowlight_gyro::Result<()> {
    let omega = 7.292e-5;
    let atom = AtomSpecies::na23(10.0)?;
    let fields = ProbeControlFields::resonant(NA23_D2_WAVELENGTH, 0.0, 4e6)?;
    let geometry = RingGeometry::full_ring(1.5e-3, 1e-6, 1e20, omega)?;
    let medium = RingMedium::from_params(&atom, &fields, &geometry)?;
    let det = Detection {
        area: medium.radius * medium.length,
        cross_section: geometry.cross_section(),
        density: geometry.atom_density(),
        v_rec: derive_recoil(&atom, &fields)?.v_rec,
        hbar_over_m: atom.hbar_over_m(),
        time: 1.0,
    };
    let rabi = log_space(1e5, 4e7, 12);
    let rows = snr_sweep(
        &det,
        omega,
        medium.radius,
        medium.length,
        medium.k_p,
        medium.rabi_c,
        medium.xi().value(),
        medium.loss_parameter(),
        &rabi,
    );
    let mut w = csv::Writer::from_writer(std::io::stdout());
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
