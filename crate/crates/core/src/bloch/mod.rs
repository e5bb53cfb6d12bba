//! Local density-matrix dynamics of the Λ system in the rotating frame.
//!
//! The state is vectorised in the fixed order
//! `(ρ11, ρ12, ρ13, ρ21, ρ22, ρ23, ρ31, ρ32, ρ33)`. The local generator `M`
//! holds decay, detuning (including the `ΩRk_p` rotation shift on ρ12 and
//! ρ13) and field couplings; `D` holds the coefficients of the `v_rec ∂x`
//! drift. Non-local couplings `⟨Φ†_μ ∂xΦ₁⟩` are dropped, see
//! [`nonlocal_term_ratio`] for the size of the neglected term.

mod correction;
mod generator;
mod steady;

pub use correction::{first_order_correction, CorrectedProfile};
pub use generator::{
    build_generator, nonlocal_term_ratio, write_generator_csv, BlochGenerator, BlochInputs,
};
pub use steady::steady_state;

use nalgebra::{Matrix3, SVector};
use num_complex::Complex64;
use serde::Serialize;

/// Component labels in vectorisation order.
pub const LABELS: [&str; 9] = [
    "rho11", "rho12", "rho13", "rho21", "rho22", "rho23", "rho31", "rho32", "rho33",
];

/// Index of ρ_μν (0-based μ, ν) in the vectorised state.
#[inline]
pub const fn idx(mu: usize, nu: usize) -> usize {
    3 * mu + nu
}

/// Single-particle density matrix of the three internal states.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub rho: Matrix3<Complex64>,
    /// Value of the trace constraint (density or dimensionless population).
    pub norm: f64,
}

/// Invariant residuals of a density matrix, all relative to `norm`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals {
    pub hermiticity: f64,
    pub trace: f64,
    /// Largest imaginary part of a diagonal entry.
    pub diagonal_imag: f64,
    /// Smallest (real) population.
    pub min_population: f64,
}

impl DensityMatrix {
    /// All population in |1⟩.
    pub fn ground(norm: f64) -> Self {
        let mut rho = Matrix3::zeros();
        rho[(0, 0)] = Complex64::new(norm, 0.0);
        DensityMatrix { rho, norm }
    }

    pub fn from_vec(v: &SVector<Complex64, 9>, norm: f64) -> Self {
        let rho = Matrix3::from_fn(|i, j| v[idx(i, j)]);
        DensityMatrix { rho, norm }
    }

    pub fn to_vec(&self) -> SVector<Complex64, 9> {
        SVector::from_fn(|k, _| self.rho[(k / 3, k % 3)])
    }

    /// `ρ_μν` with 1-based indices as in the level scheme.
    pub fn get(&self, mu: usize, nu: usize) -> Complex64 {
        self.rho[(mu - 1, nu - 1)]
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn residuals(&self) -> Residuals {
        let scale = self.norm.abs().max(f64::MIN_POSITIVE);
        let herm = (self.rho - self.rho.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let diag_imag = (0..3)
            .map(|i| self.rho[(i, i)].im.abs())
            .fold(0.0, f64::max);
        let min_pop = (0..3)
            .map(|i| self.rho[(i, i)].re)
            .fold(f64::INFINITY, f64::min);
        Residuals {
            hermiticity: herm / scale,
            trace: (self.trace() - Complex64::new(self.norm, 0.0)).norm() / scale,
            diagonal_imag: diag_imag / scale,
            min_population: min_pop / scale,
        }
    }
}

/// The probe-transition coherence ρ21 that sources the probe field.
pub fn coherence_rho21(rho: &DensityMatrix) -> Complex64 {
    rho.get(2, 1)
}
