use std::io::Write;

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use super::{idx, LABELS};
use crate::error::{Error, Result};
use crate::params::{AtomSpecies, ProbeControlFields, RingGeometry};

type C = Complex64;
const I: C = C::new(0.0, 1.0);

/// Everything the local generator depends on. Rates and Rabi frequencies in
/// rad/s, `radius` in m, `k_p` in 1/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochInputs {
    pub gamma1: f64,
    pub gamma3: f64,
    pub gamma13: f64,
    pub rabi_p: C,
    pub rabi_c: C,
    pub delta2: f64,
    pub delta3: f64,
    pub rotation_rate: f64,
    pub radius: f64,
    pub k_p: f64,
}

impl BlochInputs {
    /// Inputs at the probe source, with real Rabi frequencies.
    pub fn from_params(
        atom: &AtomSpecies,
        fields: &ProbeControlFields,
        geometry: &RingGeometry,
    ) -> Self {
        BlochInputs {
            gamma1: atom.gamma1(),
            gamma3: atom.gamma3(),
            gamma13: atom.gamma13(),
            rabi_p: C::new(fields.rabi_p0(), 0.0),
            rabi_c: C::new(fields.rabi_c(), 0.0),
            delta2: fields.delta2(),
            delta3: fields.delta3(),
            rotation_rate: geometry.rotation_rate(),
            radius: geometry.radius(),
            k_p: fields.k_p(),
        }
    }

    pub fn with_rabi_p(mut self, rabi_p: C) -> Self {
        self.rabi_p = rabi_p;
        self
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma1 + self.gamma3
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlochGenerator {
    /// Local generator, `dρ/dt = M ρ`.
    pub m: SMatrix<C, 9, 9>,
    /// Coefficients of `v_rec ∂x`.
    pub d: SMatrix<f64, 9, 9>,
    /// Coefficient `ΩR` of the rotational `∂x` drift on every row; dropped in
    /// the steady-state solve and kept for diagnostics.
    pub rotation_drift: f64,
    /// `M` with ρ33 eliminated through the trace constraint (rows and columns
    /// 0..8 of the vectorised state).
    pub reduced: SMatrix<C, 8, 8>,
    /// Inhomogeneity per unit norm: `reduced · u = norm · source`.
    pub source: SVector<C, 8>,
    pub inputs: BlochInputs,
}

/// Builds `M`, `D` and the constrained 8×8 system.
///
/// The ρ23 detuning enters as `+i(Δ₂ − Δ₃)`, the sign generated by the same
/// Hamiltonian that produces the ρ12 and ρ13 rows.
pub fn build_generator(inp: &BlochInputs) -> Result<BlochGenerator> {
    if inp.rabi_c.norm() == 0.0 {
        return Err(Error::DegenerateEit);
    }
    for (name, v) in [
        ("gamma1", inp.gamma1),
        ("gamma3", inp.gamma3),
        ("gamma13", inp.gamma13),
    ] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::invalid(
                name,
                format!("must be non-negative, got {v}"),
            ));
        }
    }
    let p = inp.rabi_p;
    let c = inp.rabi_c;
    let g2 = inp.gamma2();
    let shift = inp.rotation_rate * inp.radius * inp.k_p;
    let (r11, r12, r13, r21, r22, r23, r31, r32, r33) = (
        idx(0, 0),
        idx(0, 1),
        idx(0, 2),
        idx(1, 0),
        idx(1, 1),
        idx(1, 2),
        idx(2, 0),
        idx(2, 1),
        idx(2, 2),
    );

    let mut m = SMatrix::<C, 9, 9>::zeros();

    // populations
    m[(r11, r22)] += inp.gamma1;
    m[(r11, r21)] += -I * p.conj();
    m[(r11, r12)] += I * p;

    m[(r22, r22)] += -g2;
    m[(r22, r21)] += I * p.conj();
    m[(r22, r12)] += -I * p;
    m[(r22, r23)] += I * c.conj();
    m[(r22, r32)] += -I * c;

    m[(r33, r22)] += inp.gamma3;
    m[(r33, r23)] += -I * c.conj();
    m[(r33, r32)] += I * c;

    // coherences
    m[(r12, r12)] += -(I * (inp.delta2 + shift) + g2 / 2.0);
    m[(r12, r13)] += I * c.conj();
    m[(r12, r22)] += -I * p.conj();
    m[(r12, r11)] += I * p.conj();

    m[(r13, r13)] += -(I * (inp.delta3 + shift) + inp.gamma13);
    m[(r13, r23)] += -I * p.conj();
    m[(r13, r12)] += I * c;

    m[(r23, r23)] += I * (inp.delta2 - inp.delta3) - g2 / 2.0;
    m[(r23, r13)] += -I * p;
    m[(r23, r33)] += -I * c;
    m[(r23, r22)] += I * c;

    // ρνμ = conj(ρμν): mirror the three upper-triangle rows
    for (mu, nu) in [(0, 1), (0, 2), (1, 2)] {
        let src = idx(mu, nu);
        let dst = idx(nu, mu);
        for col in 0..9 {
            let z = m[(src, col)];
            if z != C::new(0.0, 0.0) {
                let (a, b) = (col / 3, col % 3);
                m[(dst, idx(b, a))] += z.conj();
            }
        }
    }

    let mut d = SMatrix::<f64, 9, 9>::zeros();
    for k in 0..9 {
        // ρ11 drifts with ΩR only; every other element also with v_rec
        d[(k, k)] = if k == r11 { 0.0 } else { 1.0 };
    }

    let mut reduced = SMatrix::<C, 8, 8>::zeros();
    let mut source = SVector::<C, 8>::zeros();
    for i in 0..8 {
        for j in 0..8 {
            reduced[(i, j)] = m[(i, j)];
        }
        reduced[(i, r11)] -= m[(i, r33)];
        reduced[(i, r22)] -= m[(i, r33)];
        source[i] = -m[(i, r33)];
    }
    let _ = (r31, r32);

    Ok(BlochGenerator {
        m,
        d,
        rotation_drift: inp.rotation_rate * inp.radius,
        reduced,
        source,
        inputs: *inp,
    })
}

/// Size of the dropped non-local term relative to the optical-coherence
/// decay, `k_p|Ω|R / (γ₂/2)`. Small values justify the local approximation.
pub fn nonlocal_term_ratio(k_p: f64, rotation_rate: f64, radius: f64, gamma2: f64) -> f64 {
    k_p * rotation_rate.abs() * radius / (gamma2 / 2.0)
}

/// Dumps `M` and `D` as CSV: columns `matrix,row` followed by real/imaginary
/// parts interleaved for the nine state components, rows in vectorisation
/// order. The ρ23 row and its mirror carry an `[interpreted]` tag because
/// their detuning sign is reconstructed from the Hamiltonian.
pub fn write_generator_csv<W: Write>(gen: &BlochGenerator, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["matrix".to_string(), "row".to_string()];
    for l in LABELS {
        header.push(format!("re_{l}"));
        header.push(format!("im_{l}"));
    }
    w.write_record(&header)?;
    let label = |k: usize| {
        if k == idx(1, 2) || k == idx(2, 1) {
            format!("{}[interpreted]", LABELS[k])
        } else {
            LABELS[k].to_string()
        }
    };
    for k in 0..9 {
        let mut rec = vec!["M".to_string(), label(k)];
        for j in 0..9 {
            rec.push(gen.m[(k, j)].re.to_string());
            rec.push(gen.m[(k, j)].im.to_string());
        }
        w.write_record(&rec)?;
    }
    for (k, lab) in LABELS.iter().enumerate() {
        let mut rec = vec!["D".to_string(), lab.to_string()];
        for j in 0..9 {
            rec.push(gen.d[(k, j)].to_string());
            rec.push("0".to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
