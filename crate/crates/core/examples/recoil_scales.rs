//! Recoil velocity, coupling and polariton scales for the two preset species.

use slowlight_gyro::params::{
    coupling_constant, derive_recoil, rest_energy_ratio, AtomSpecies, ProbeControlFields,
    RingGeometry, NA23_D2_WAVELENGTH, RB87_D2_WAVELENGTH,
};
use slowlight_gyro::polariton::{mixing_angle, xi};

fn main() -> slowlight_gyro::Result<()> {
    let geometry = RingGeometry::full_ring(1.5e-3, 1e-6, 1e20, 0.0)?;
    for (atom, lambda) in [
        (AtomSpecies::rb87(10.0)?, RB87_D2_WAVELENGTH),
        (AtomSpecies::na23(10.0)?, NA23_D2_WAVELENGTH),
    ] {
        let fields = ProbeControlFields::resonant(lambda, 0.0, 4e6)?;
        let recoil = derive_recoil(&atom, &fields)?;
        let coupling = coupling_constant(&atom, &fields, &geometry)?;
        let theta = mixing_angle(coupling.g2rho, fields.rabi_c())?;
        println!("{}", atom.name());
        println!("  v_rec       {:.4e} m/s", recoil.v_rec);
        println!("  omega_rec   {:.4e} rad/s", recoil.omega_rec);
        println!("  g           {:.4e} rad/s", coupling.g);
        println!("  theta       {:.6} rad", theta);
        println!("  xi          {:.4}", xi(theta, recoil.v_rec).value());
        println!("  mc^2/hbar w {:.4e}", rest_energy_ratio(&atom, &fields));
    }
    Ok(())
}
