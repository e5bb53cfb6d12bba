use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use super::steady::check_reduced;
use super::{idx, BlochGenerator, DensityMatrix};
use crate::diagnostics::Warning;
use crate::error::{Error, Result};

type C = Complex64;

/// Above this value of `v_rec·‖M⁻¹‖/ℓ` the first-order expansion is suspect.
pub const EXPANSION_WARN: f64 = 0.1;

#[derive(Debug, Clone)]
pub struct CorrectedProfile {
    pub rho: Vec<DensityMatrix>,
    /// `v_rec·max‖M⁻¹‖/ℓ_min`, with `ℓ` the local scale `‖ρ⁰‖/‖∂xρ⁰‖`.
    pub expansion_parameter: f64,
    pub warnings: Vec<Warning>,
}

/// Applies `(1 − v_rec M⁻¹ D ∂x)` to a steady-state profile on a uniform
/// grid. `gens[i]` is the local generator at `x[i]`; if a single generator is
/// passed it is used everywhere.
pub fn first_order_correction(
    x: &[f64],
    rho0: &[DensityMatrix],
    gens: &[BlochGenerator],
    v_rec: f64,
) -> Result<CorrectedProfile> {
    let n = x.len();
    if n < 3 {
        return Err(Error::invalid(
            "x",
            format!("need at least 3 grid points, got {n}"),
        ));
    }
    if rho0.len() != n {
        return Err(Error::invalid(
            "rho0",
            format!("length {} does not match grid length {n}", rho0.len()),
        ));
    }
    if gens.len() != n && gens.len() != 1 {
        return Err(Error::invalid(
            "gens",
            format!("expected 1 or {n} generators, got {}", gens.len()),
        ));
    }
    let h = (x[n - 1] - x[0]) / (n - 1) as f64;
    if !(h > 0.0)
        || x.windows(2)
            .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs())
    {
        return Err(Error::invalid("x", "grid must be uniform and increasing"));
    }
    let gen_at = |i: usize| if gens.len() == 1 { &gens[0] } else { &gens[i] };

    let u: Vec<SVector<C, 8>> = rho0
        .iter()
        .map(|r| r.to_vec().fixed_rows::<8>(0).into_owned())
        .collect();
    let du = derivative(&u, h);

    let mut out = Vec::with_capacity(n);
    let mut max_inv = 0.0f64;
    let mut min_scale = f64::INFINITY;
    for i in 0..n {
        let gen = gen_at(i);
        check_reduced(gen)?;
        let dr: SMatrix<C, 8, 8> = gen.d.fixed_view::<8, 8>(0, 0).map(|v| C::new(v, 0.0));
        let lu = gen.reduced.lu();
        let delta = lu
            .solve(&(dr * du[i]))
            .ok_or(Error::DegenerateSteadyState { null_space_dim: 0 })?;
        let corr = u[i] - delta * C::new(v_rec, 0.0);

        let sv = gen.reduced.singular_values();
        max_inv = max_inv.max(1.0 / sv.min());
        if du[i].norm() > 0.0 {
            min_scale = min_scale.min(u[i].norm() / du[i].norm());
        }

        let norm = rho0[i].norm;
        let mut v = SVector::<C, 9>::zeros();
        v.fixed_rows_mut::<8>(0).copy_from(&corr);
        v[idx(2, 2)] = C::new(norm, 0.0) - corr[idx(0, 0)] - corr[idx(1, 1)];
        out.push(DensityMatrix::from_vec(&v, norm));
    }

    let expansion_parameter = if min_scale.is_finite() {
        v_rec.abs() * max_inv / min_scale
    } else {
        0.0
    };
    let mut warnings = Vec::new();
    if expansion_parameter > EXPANSION_WARN {
        warnings.push(Warning::new(
            "first_order_expansion",
            format!("v_rec·‖M⁻¹‖/ℓ = {expansion_parameter:.3e} exceeds {EXPANSION_WARN}; the first-order correction is unreliable"),
        ));
    }
    Ok(CorrectedProfile {
        rho: out,
        expansion_parameter,
        warnings,
    })
}

/// Second-order centred differences, one-sided second order at the ends.
fn derivative(u: &[SVector<C, 8>], h: f64) -> Vec<SVector<C, 8>> {
    let n = u.len();
    let r = |k: f64| C::new(k, 0.0);
    let half_h = r(0.5 / h);
    (0..n)
        .map(|i| {
            if i == 0 {
                (u[0] * r(-3.0) + u[1] * r(4.0) - u[2]) * half_h
            } else if i == n - 1 {
                (u[n - 1] * r(3.0) - u[n - 2] * r(4.0) + u[n - 3]) * half_h
            } else {
                (u[i + 1] - u[i - 1]) * half_h
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{build_generator, steady_state, BlochInputs};
    use nalgebra::Matrix2;

    fn inputs(rabi_p: C) -> BlochInputs {
        BlochInputs {
            gamma1: 1.0,
            gamma3: 1.0,
            gamma13: 0.02,
            rabi_p,
            rabi_c: C::new(1.0, 0.0),
            delta2: 0.1,
            delta3: 0.05,
            rotation_rate: 0.0,
            radius: 1.0,
            k_p: 1.0,
        }
    }

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn uniform_profile_is_unchanged() {
        let gen = build_generator(&inputs(C::new(0.3, 0.0))).unwrap();
        let rho = steady_state(&gen, 1.0).unwrap();
        let x = grid(11);
        let prof = vec![rho.clone(); 11];
        let out = first_order_correction(&x, &prof, std::slice::from_ref(&gen), 0.3).unwrap();
        for r in &out.rho {
            assert!((r.rho - rho.rho).norm() < 1e-12);
        }
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn zero_recoil_is_identity() {
        let x = grid(9);
        let gens: Vec<_> = x
            .iter()
            .map(|&xi| build_generator(&inputs(C::new(0.1 + 0.2 * xi, 0.0))).unwrap())
            .collect();
        let prof: Vec<_> = gens.iter().map(|g| steady_state(g, 1.0).unwrap()).collect();
        let out = first_order_correction(&x, &prof, &gens, 0.0).unwrap();
        for (a, b) in out.rho.iter().zip(&prof) {
            assert_eq!(a.rho, b.rho);
        }
    }

    #[test]
    fn derivative_is_exact_for_quadratics() {
        let h = 0.1;
        let u: Vec<SVector<C, 8>> = (0..6)
            .map(|i| {
                let x = i as f64 * h;
                SVector::from_element(C::new(x * x - 2.0 * x, x))
            })
            .collect();
        let du = derivative(&u, h);
        for (i, d) in du.iter().enumerate() {
            let x = i as f64 * h;
            assert!((d[0] - C::new(2.0 * x - 2.0, 1.0)).norm() < 1e-12);
        }
    }

    /// At weak probe the optical/ground coherences obey a closed 2×2 system
    /// `A (ρ21, ρ31)ᵀ = (iΩ_p n, 0)ᵀ`, so for a probe linear in x the first
    /// order term is `−v A⁻² (i b n, 0)ᵀ` with `b = dΩ_p/dx`.
    #[test]
    fn linear_probe_matches_two_level_reduction() {
        let n_pts = 21;
        let x = grid(n_pts);
        let (a0, b) = (C::new(1e-4, 0.0), C::new(2e-4, 1e-4));
        let v = 0.05;
        let gens: Vec<_> = x
            .iter()
            .map(|&xi| build_generator(&inputs(a0 + b * xi)).unwrap())
            .collect();
        let prof: Vec<_> = gens.iter().map(|g| steady_state(g, 1.0).unwrap()).collect();
        let out = first_order_correction(&x, &prof, &gens, v).unwrap();

        let inp = inputs(C::new(0.0, 0.0));
        let i = C::new(0.0, 1.0);
        let g2 = inp.gamma1 + inp.gamma3;
        // ρ21 and ρ31 rows, conjugate of the ρ12/ρ13 rows at weak field
        let a = Matrix2::new(
            i * inp.delta2 - g2 / 2.0,
            -i * inp.rabi_c,
            -i * inp.rabi_c.conj(),
            i * inp.delta3 - inp.gamma13,
        );
        let ainv = a.try_inverse().unwrap();
        let src = nalgebra::Vector2::new(i * b, C::new(0.0, 0.0));
        // ρ0 = A⁻¹(iΩ_p n, 0) so ∂xρ0 = A⁻¹(i b n, 0); correction is −v A⁻¹ ∂xρ0
        let expected = -(ainv * (ainv * src)) * C::new(v, 0.0);
        for k in [5, 10, 15] {
            let d21 = out.rho[k].get(2, 1) - prof[k].get(2, 1);
            let d31 = out.rho[k].get(3, 1) - prof[k].get(3, 1);
            assert!(
                (d21 - expected[0]).norm() < 1e-3 * expected[0].norm(),
                "{d21} vs {}",
                expected[0]
            );
            assert!(
                (d31 - expected[1]).norm() < 1e-3 * expected[1].norm(),
                "{d31} vs {}",
                expected[1]
            );
        }
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn large_expansion_parameter_warns() {
        let x = grid(5);
        let gens: Vec<_> = x
            .iter()
            .map(|&xi| build_generator(&inputs(C::new(0.01 + xi, 0.0))).unwrap())
            .collect();
        let prof: Vec<_> = gens.iter().map(|g| steady_state(g, 1.0).unwrap()).collect();
        let out = first_order_correction(&x, &prof, &gens, 100.0).unwrap();
        assert!(out.expansion_parameter > EXPANSION_WARN);
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn rejects_bad_grids() {
        let gen = build_generator(&inputs(C::new(0.1, 0.0))).unwrap();
        let rho = steady_state(&gen, 1.0).unwrap();
        let prof = vec![rho; 3];
        let g = std::slice::from_ref(&gen);
        assert!(first_order_correction(&[0.0, 1.0], &prof[..2], g, 0.1).is_err());
        assert!(first_order_correction(&[0.0, 1.0, 3.0], &prof, g, 0.1).is_err());
        assert!(first_order_correction(&[0.0, 1.0, 2.0], &prof[..2], g, 0.1).is_err());
    }
}
