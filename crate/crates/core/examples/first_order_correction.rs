//! Recoil correction to a slowly varying steady-state profile. The probe
//! decays along the medium, so each point has its own generator.

use num_complex::Complex64;
use slowlight_gyro::bloch::{build_generator, first_order_correction, steady_state, BlochInputs};
use slowlight_gyro::params::{
    derive_recoil, AtomSpecies, ProbeControlFields, RingGeometry, NA23_D2_WAVELENGTH,
};

fn main() -> slowlight_gyro::Result<()> {
    let atom = AtomSpecies::na23(10.0)?;
    let fields = ProbeControlFields::resonant(NA23_D2_WAVELENGTH, 1e6, 4e6)?;
    let geometry = RingGeometry::full_ring(1.5e-3, 1e-6, 1e20, 0.0)?;
    let v_rec = derive_recoil(&atom, &fields)?.v_rec;
    let base = BlochInputs::from_params(&atom, &fields, &geometry);

    let n = 101;
    let length = geometry.medium_length();
    let x: Vec<f64> = (0..n).map(|i| length * i as f64 / (n - 1) as f64).collect();
    let gens = x
        .iter()
        .map(|&xi| {
            build_generator(
                &base.with_rabi_p(Complex64::new(fields.rabi_p0() * (-xi / length).exp(), 0.0)),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rho0 = gens
        .iter()
        .map(|g| steady_state(g, 1.0))
        .collect::<Result<Vec<_>, _>>()?;

    let corrected = first_order_correction(&x, &rho0, &gens, v_rec)?;
    println!("expansion parameter {:.3e}", corrected.expansion_parameter);
    for i in [0, n / 2, n - 1] {
        println!(
            "x = {:.3e} m  rho21: {:.6e} -> {:.6e}",
            x[i],
            rho0[i].get(2, 1),
            corrected.rho[i].get(2, 1)
        );
    }
    Ok(())
}
