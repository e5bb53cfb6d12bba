//! Steady state of the three-level Λ system for the default sodium setup.
//! Writes the generator to `generator.csv` in the temp directory.

use slowlight_gyro::bloch::{
    build_generator, coherence_rho21, steady_state, write_generator_csv, BlochInputs,
};
use slowlight_gyro::params::{AtomSpecies, ProbeControlFields, RingGeometry, NA23_D2_WAVELENGTH};

fn main() -> slowlight_gyro::Result<()> {
    let atom = AtomSpecies::na23(10.0)?;
    let fields = ProbeControlFields::resonant(NA23_D2_WAVELENGTH, 2e5, 4e6)?;
    let geometry = RingGeometry::full_ring(1.5e-3, 1e-6, 1e20, 7.292e-5)?;

    let gen = build_generator(&BlochInputs::from_params(&atom, &fields, &geometry))?;
    let rho = steady_state(&gen, 1.0)?;
    for mu in 1..=3 {
        let row: Vec<String> = (1..=3)
            .map(|nu| format!("{:+.3e}", rho.get(mu, nu)))
            .collect();
        println!("{}", row.join("  "));
    }
    println!("rho21 = {:.4e}", coherence_rho21(&rho));
    println!("{:?}", rho.residuals());

    let path = std::env::temp_dir().join("generator.csv");
    write_generator_csv(&gen, std::fs::File::create(&path)?)?;
    println!("generator written to {}", path.display());
    Ok(())
}
