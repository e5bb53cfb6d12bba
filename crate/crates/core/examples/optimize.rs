//! Optimal saturation and density for a range of loss parameters, against
//! the large-loss asymptote.

use slowlight_gyro::sensitivity::{
    asymptotic_g_max, optimize_snr, prefactor_f_default, LossParameter,
};

fn main() -> slowlight_gyro::Result<()> {
    println!(
        "{:>8} {:>10} {:>12} {:>12} {:>12} {:>10}",
        "a", "s_opt", "xi_opt", "g_max", "asymptote", "f"
    );
    for a in [0.05, 0.5, 5.0, 50.0, 500.0, 5000.0] {
        let opt = optimize_snr(LossParameter::new(a)?)?;
        println!(
            "{a:>8} {:>10.5} {:>12.5} {:>12.6e} {:>12.6e} {:>10.5}",
            opt.s_opt,
            opt.xi_opt,
            opt.g_max,
            asymptotic_g_max(a),
            1.0 / (a.sqrt() * opt.g_max)
        );
    }
    println!(
        "f used for sensitivity estimates: {:.5}",
        prefactor_f_default()?
    );
    Ok(())
}
