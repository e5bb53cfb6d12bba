use nalgebra::SVector;
use num_complex::Complex64;

use super::{idx, BlochGenerator, DensityMatrix};
use crate::error::{Error, Result};

/// Relative singular-value threshold below which the reduced system counts
/// as singular.
const REDUCED_RCOND: f64 = 1e-12;
const NULL_SPACE_RTOL: f64 = 1e-10;

/// Steady state `M ρ = 0` with `Tr ρ = norm`, drift terms dropped.
pub fn steady_state(gen: &BlochGenerator, norm: f64) -> Result<DensityMatrix> {
    if !norm.is_finite() {
        return Err(Error::invalid("norm", "must be finite"));
    }
    check_reduced(gen)?;
    let lu = gen.reduced.lu();
    let rhs = gen.source * Complex64::new(norm, 0.0);
    let u = lu.solve(&rhs).ok_or(Error::DegenerateSteadyState {
        null_space_dim: null_space_dim(gen),
    })?;
    let mut v = SVector::<Complex64, 9>::zeros();
    v.fixed_rows_mut::<8>(0).copy_from(&u);
    v[idx(2, 2)] = Complex64::new(norm, 0.0) - u[idx(0, 0)] - u[idx(1, 1)];
    Ok(DensityMatrix::from_vec(&v, norm))
}

pub(super) fn check_reduced(gen: &BlochGenerator) -> Result<()> {
    let sv = gen.reduced.singular_values();
    let max = sv.max();
    let min = sv.min();
    if !(max > 0.0) || min <= REDUCED_RCOND * max {
        return Err(Error::DegenerateSteadyState {
            null_space_dim: null_space_dim(gen),
        });
    }
    Ok(())
}

fn null_space_dim(gen: &BlochGenerator) -> usize {
    let sv = gen.m.singular_values();
    let max = sv.max();
    if max == 0.0 {
        return 9;
    }
    sv.iter().filter(|&&s| s <= NULL_SPACE_RTOL * max).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{build_generator, BlochInputs};
    use nalgebra::SMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex64;

    fn base() -> BlochInputs {
        BlochInputs {
            gamma1: 1.0,
            gamma3: 1.0,
            gamma13: 1e-3,
            rabi_p: C::new(0.05, 0.0),
            rabi_c: C::new(1.0, 0.0),
            delta2: 0.0,
            delta3: 0.0,
            rotation_rate: 0.0,
            radius: 1.0,
            k_p: 1.0,
        }
    }

    /// Long-time integration of `dρ/dt = Mρ`: the RK4 step matrix for a small
    /// step is squared repeatedly until the elapsed time exceeds `t_end`.
    fn integrate_long_time(m: &SMatrix<C, 9, 9>, rho0: SVector<C, 9>, t_end: f64) -> SVector<C, 9> {
        let h = 0.5 / m.norm();
        let a = m * C::new(h, 0.0);
        let id = SMatrix::<C, 9, 9>::identity();
        let a2 = a * a;
        let a3 = a2 * a;
        let a4 = a3 * a;
        let mut p = id
            + a
            + a2 * C::new(0.5, 0.0)
            + a3 * C::new(1.0 / 6.0, 0.0)
            + a4 * C::new(1.0 / 24.0, 0.0);
        let mut t = h;
        while t < t_end {
            p = p * p;
            t *= 2.0;
        }
        // a few extra squarings make the projection onto the steady state tight
        for _ in 0..6 {
            p = p * p;
        }
        // rounding in the repeated squaring drifts the unit eigenvalue; the
        // exact flow conserves the trace, so restore it
        let v = p * rho0;
        let tr = v[idx(0, 0)] + v[idx(1, 1)] + v[idx(2, 2)];
        let tr0 = rho0[idx(0, 0)] + rho0[idx(1, 1)] + rho0[idx(2, 2)];
        v * (tr0 / tr)
    }

    #[test]
    fn no_probe_leaves_atoms_in_state_one() {
        let inp = BlochInputs {
            rabi_p: C::new(0.0, 0.0),
            ..base()
        };
        let rho = steady_state(&build_generator(&inp).unwrap(), 2.5).unwrap();
        assert!((rho.get(1, 1) - C::new(2.5, 0.0)).norm() < 1e-12);
        for (mu, nu) in [(1, 2), (1, 3), (2, 2), (2, 3), (3, 3)] {
            assert!(
                rho.get(mu, nu).norm() < 1e-12,
                "rho{mu}{nu} = {}",
                rho.get(mu, nu)
            );
        }
    }

    #[test]
    fn weak_probe_dark_state() {
        let n = 1.0;
        let rp = 1e-3;
        let inp = BlochInputs {
            gamma13: 0.0,
            rabi_p: C::new(rp, 0.0),
            ..base()
        };
        let rho = steady_state(&build_generator(&inp).unwrap(), n).unwrap();
        let s = rp * rp;
        assert!(
            (rho.get(1, 3) - C::new(-rp, 0.0)).norm() < 10.0 * s,
            "{}",
            rho.get(1, 3)
        );
        assert!(rho.get(2, 2).re.abs() < 10.0 * s * s);
        assert!(rho.get(2, 2).norm() / n < 1e-6);
        assert!(rho.get(2, 1).norm() < 1e-10);
    }

    #[test]
    fn weak_probe_absorbs_with_ground_decoherence() {
        let inp = BlochInputs {
            gamma13: 0.05,
            rabi_p: C::new(1e-3, 0.0),
            ..base()
        };
        let rho = steady_state(&build_generator(&inp).unwrap(), 1.0).unwrap();
        assert!(rho.get(2, 1).im < 0.0, "{}", rho.get(2, 1));
    }

    #[test]
    fn fully_dark_degeneracy_is_reported() {
        let inp = BlochInputs {
            gamma1: 0.0,
            gamma3: 0.0,
            gamma13: 0.0,
            rabi_p: C::new(0.0, 0.0),
            ..base()
        };
        match steady_state(&build_generator(&inp).unwrap(), 1.0) {
            Err(Error::DegenerateSteadyState { null_space_dim }) => assert!(null_space_dim >= 2),
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }

    #[test]
    fn residuals_and_annihilation() {
        let inp = BlochInputs {
            rabi_p: C::new(0.7, 0.2),
            delta2: 0.3,
            delta3: -0.1,
            rotation_rate: 0.01,
            ..base()
        };
        let gen = build_generator(&inp).unwrap();
        let rho = steady_state(&gen, 3.0).unwrap();
        let r = rho.residuals();
        assert!(r.hermiticity < 1e-10 && r.trace < 1e-10 && r.diagonal_imag < 1e-10);
        assert!(r.min_population > -1e-10);
        let v = rho.to_vec();
        assert!((gen.m * v).norm() <= 1e-9 * gen.m.norm() * v.norm());
    }

    #[test]
    fn matches_time_integration_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let g = 1.0;
            let log_u =
                |rng: &mut ChaCha8Rng, lo: f64, hi: f64| (rng.random_range(lo.ln()..hi.ln())).exp();
            let inp = BlochInputs {
                gamma1: g,
                gamma3: g,
                gamma13: log_u(&mut rng, 1e-3, 0.1),
                rabi_p: C::new(log_u(&mut rng, 0.1, 10.0), 0.0),
                rabi_c: C::new(log_u(&mut rng, 0.1, 10.0), 0.0),
                delta2: rng.random_range(-10.0..10.0),
                delta3: rng.random_range(-10.0..10.0),
                rotation_rate: rng.random_range(-0.1..0.1),
                radius: 1.0,
                k_p: 1.0,
            };
            let gen = build_generator(&inp).unwrap();
            let rho = steady_state(&gen, 1.0).unwrap();
            let slowest = [inp.gamma1, inp.gamma3, inp.gamma13, inp.rabi_c.norm()]
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            let oracle =
                integrate_long_time(&gen.m, DensityMatrix::ground(1.0).to_vec(), 50.0 / slowest);
            assert!(
                (rho.to_vec() - oracle).norm() <= 1e-8,
                "{inp:?}: {}",
                (rho.to_vec() - oracle).norm()
            );
        }
    }
}
