//! Winding modes of an atom on a rotating ring and the rotational phase of a
//! thermal gas.

use slowlight_gyro::params::AtomSpecies;
use slowlight_gyro::ring::{ground_mode, n_min, thermal_phase, RingMode};

fn main() -> slowlight_gyro::Result<()> {
    let atom = AtomSpecies::rb87(0.0)?;
    let radius = 1.5e-3;
    let mass = atom.mass();

    // rotation that shifts the minimum by a few quanta
    let omega = 3.2 * atom.hbar_over_m() / (radius * radius);
    println!(
        "n_min = {:.3}, ground mode = {}",
        n_min(omega, radius, mass),
        ground_mode(omega, radius, mass)
    );
    for n in -5..=0 {
        let m = RingMode::new(n, omega, radius, mass);
        println!("n = {:>2}  E = {:+.4e} J", m.n, m.energy);
    }

    for t in [1e-9, 1e-7, 1e-5] {
        let p = thermal_phase(omega, radius, mass, t)?;
        println!(
            "T = {t:.0e} K  phase = {:.4} rad  Boltzmann = {:.4} rad  warnings = {}",
            p.phase,
            p.boltzmann_phase,
            p.warnings.len()
        );
    }
    Ok(())
}
