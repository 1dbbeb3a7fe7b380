//! Optical elements lowered to mode unitaries.
//!
//! A [`ModeUnitary`] acts on creation operators: column `j` is the image of
//! `a†_j`, i.e. `a†_j ↦ Σ_k U[k][j] a†_k`. Elements that relabel spatial paths
//! (`A, B → C, D`) route the input ports onto the output ports and send any
//! vacated output labels back onto the vacated input labels, so the matrix over
//! the full registry stays unitary. Physically the vacated outputs are empty
//! on entry, so that completion never carries light.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{same_registry, ModeId, ModeRegistry, Polarization};

/// Deviation from unitarity tolerated by [`ModeUnitary::from_matrix`].
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// Complex square matrix over a registry's modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeUnitary {
    registry: Arc<ModeRegistry>,
    matrix: DMatrix<Complex64>,
}

impl ModeUnitary {
    pub fn identity(registry: Arc<ModeRegistry>) -> Self {
        let m = registry.num_modes();
        Self { registry, matrix: DMatrix::identity(m, m) }
    }

    /// Wraps a matrix, checking its shape against the registry and unitarity.
    pub fn from_matrix(registry: Arc<ModeRegistry>, matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare { rows: matrix.nrows(), cols: matrix.ncols() });
        }
        if matrix.nrows() != registry.num_modes() {
            return Err(Error::RegistryMismatch);
        }
        let u = Self { registry, matrix };
        let err = u.unitarity_error();
        if err > UNITARITY_TOLERANCE {
            return Err(Error::InvalidArgument(format!("matrix is not unitary (max |U†U - I| = {err:e})")));
        }
        Ok(u)
    }

    pub fn registry(&self) -> &Arc<ModeRegistry> {
        &self.registry
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `next · self`: `self` acts first.
    pub fn then(&self, next: &ModeUnitary) -> Result<ModeUnitary> {
        if !same_registry(&self.registry, &next.registry) {
            return Err(Error::RegistryMismatch);
        }
        Ok(ModeUnitary { registry: self.registry.clone(), matrix: &next.matrix * &self.matrix })
    }

    pub fn adjoint(&self) -> ModeUnitary {
        ModeUnitary { registry: self.registry.clone(), matrix: self.matrix.adjoint() }
    }

    /// `max |(U†U − I)_{ij}|`.
    pub fn unitarity_error(&self) -> f64 {
        let gram = self.matrix.adjoint() * &self.matrix;
        let n = gram.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - Complex64::new(expected, 0.0)).norm());
            }
        }
        worst
    }

    /// Non-zero entries of column `j` as `(row, value)` pairs.
    pub fn column_support(&self, j: usize) -> Vec<(usize, Complex64)> {
        self.matrix
            .column(j)
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
            .map(|(k, v)| (k, *v))
            .collect()
    }
}

/// One optical element, by kind and parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ElementSpec {
    /// 50:50 beamsplitter: `a → (c + d)/√2`, `b → (c − d)/√2` per polarization.
    Bs50 { inputs: [String; 2], outputs: [String; 2] },
    /// Half-wave plate on one path, axis angle in degrees from the V axis.
    Hwp { spatial: String, angle_deg: f64 },
    /// Polarizing beamsplitter: H transmits, V reflects, no reflection phase.
    Pbs { inputs: [String; 2], outputs: [String; 2] },
    /// Phase `e^{iφ}` on a single mode.
    Phase { mode: ModeId, phase_rad: f64 },
}

impl ElementSpec {
    pub fn bs50(a: &str, b: &str, c: &str, d: &str) -> Self {
        ElementSpec::Bs50 { inputs: [a.into(), b.into()], outputs: [c.into(), d.into()] }
    }

    pub fn hwp(spatial: &str, angle_deg: f64) -> Self {
        ElementSpec::Hwp { spatial: spatial.into(), angle_deg }
    }

    pub fn pbs(e: &str, c: &str, f: &str, g: &str) -> Self {
        ElementSpec::Pbs { inputs: [e.into(), c.into()], outputs: [f.into(), g.into()] }
    }

    pub fn phase(mode: ModeId, phase_rad: f64) -> Self {
        ElementSpec::Phase { mode, phase_rad }
    }

    /// Spatial labels the element touches.
    pub fn spatial_labels(&self) -> Vec<&str> {
        match self {
            ElementSpec::Bs50 { inputs, outputs } | ElementSpec::Pbs { inputs, outputs } => {
                inputs.iter().chain(outputs).map(String::as_str).collect()
            }
            ElementSpec::Hwp { spatial, .. } => vec![spatial.as_str()],
            ElementSpec::Phase { mode, .. } => vec![mode.spatial.as_str()],
        }
    }

    pub fn to_unitary(&self, registry: &Arc<ModeRegistry>) -> Result<ModeUnitary> {
        match self {
            ElementSpec::Bs50 { inputs, outputs } => {
                beamsplitter_50(&inputs[0], &inputs[1], &outputs[0], &outputs[1], registry)
            }
            ElementSpec::Hwp { spatial, angle_deg } => half_waveplate(spatial, *angle_deg, registry),
            ElementSpec::Pbs { inputs, outputs } => {
                polarizing_beamsplitter(&inputs[0], &inputs[1], &outputs[0], &outputs[1], registry)
            }
            ElementSpec::Phase { mode, phase_rad } => phase_shift(mode, *phase_rad, registry),
        }
    }
}

type Route = Vec<(usize, Polarization, Complex64)>;

/// Snaps trigonometric round-off (e.g. `cos 90° ≈ 6e-17`) to exact zero.
fn snap(x: f64) -> f64 {
    if x.abs() < 1e-15 {
        0.0
    } else {
        x
    }
}

/// Builds a two-in/two-out element. `route(port, pol)` gives the image of the
/// input creation operator as `(output port, polarization, coefficient)` terms.
fn two_port(
    registry: &Arc<ModeRegistry>,
    inputs: [&str; 2],
    outputs: [&str; 2],
    route: impl Fn(usize, Polarization) -> Route,
) -> Result<ModeUnitary> {
    if inputs[0] == inputs[1] {
        return Err(Error::PortCollision(format!("both inputs are `{}`", inputs[0])));
    }
    if outputs[0] == outputs[1] {
        return Err(Error::PortCollision(format!("both outputs are `{}`", outputs[0])));
    }
    let in_idx = [registry.spatial_index(inputs[0])?, registry.spatial_index(inputs[1])?];
    let out_idx = [registry.spatial_index(outputs[0])?, registry.spatial_index(outputs[1])?];

    let m = registry.num_modes();
    let mut matrix = DMatrix::<Complex64>::identity(m, m);
    let touched: Vec<usize> = in_idx.iter().chain(&out_idx).copied().collect();
    for &s in &touched {
        for pol in Polarization::BOTH {
            let col = registry.mode_index(s, pol);
            matrix.column_mut(col).fill(Complex64::new(0.0, 0.0));
        }
    }

    for (port, &s) in in_idx.iter().enumerate() {
        for pol in Polarization::BOTH {
            let col = registry.mode_index(s, pol);
            for (out_port, out_pol, coeff) in route(port, pol) {
                matrix[(registry.mode_index(out_idx[out_port], out_pol), col)] += coeff;
            }
        }
    }

    let vacated_outputs = out_idx.iter().filter(|s| !in_idx.contains(s));
    let vacated_inputs = in_idx.iter().filter(|s| !out_idx.contains(s));
    for (&o, &i) in vacated_outputs.zip(vacated_inputs) {
        for pol in Polarization::BOTH {
            matrix[(registry.mode_index(i, pol), registry.mode_index(o, pol))] = Complex64::new(1.0, 0.0);
        }
    }

    Ok(ModeUnitary { registry: registry.clone(), matrix })
}

/// Polarization-preserving 50:50 beamsplitter with ports `a, b → c, d`.
pub fn beamsplitter_50(a: &str, b: &str, c: &str, d: &str, registry: &Arc<ModeRegistry>) -> Result<ModeUnitary> {
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    two_port(registry, [a, b], [c, d], |port, pol| match port {
        0 => vec![(0, pol, r), (1, pol, r)],
        _ => vec![(0, pol, r), (1, pol, -r)],
    })
}

/// Half-wave plate with Jones matrix `[[cos2θ, sin2θ], [sin2θ, −cos2θ]]` in
/// the `(V, H)` basis, `θ` measured from the V axis.
pub fn half_waveplate(spatial: &str, angle_deg: f64, registry: &Arc<ModeRegistry>) -> Result<ModeUnitary> {
    if !angle_deg.is_finite() {
        return Err(Error::InvalidArgument(format!("waveplate angle {angle_deg} is not finite")));
    }
    let s = registry.spatial_index(spatial)?;
    let two_theta = 2.0 * angle_deg.to_radians();
    let (sin, cos) = two_theta.sin_cos();
    let (sin, cos) = (snap(sin), snap(cos));
    let h = registry.mode_index(s, Polarization::H);
    let v = registry.mode_index(s, Polarization::V);
    let mut matrix = DMatrix::<Complex64>::identity(registry.num_modes(), registry.num_modes());
    matrix[(v, v)] = Complex64::new(cos, 0.0);
    matrix[(h, v)] = Complex64::new(sin, 0.0);
    matrix[(v, h)] = Complex64::new(sin, 0.0);
    matrix[(h, h)] = Complex64::new(-cos, 0.0);
    Ok(ModeUnitary { registry: registry.clone(), matrix })
}

/// PBS with inputs `e, c` and outputs `f, g`:
/// `e_H → g_H`, `c_H → f_H`, `e_V → f_V`, `c_V → g_V`.
pub fn polarizing_beamsplitter(
    e: &str,
    c: &str,
    f: &str,
    g: &str,
    registry: &Arc<ModeRegistry>,
) -> Result<ModeUnitary> {
    let one = Complex64::new(1.0, 0.0);
    two_port(registry, [e, c], [f, g], |port, pol| {
        let out = match (port, pol) {
            (0, Polarization::H) | (1, Polarization::V) => 1,
            _ => 0,
        };
        vec![(out, pol, one)]
    })
}

pub fn phase_shift(mode: &ModeId, phase_rad: f64, registry: &Arc<ModeRegistry>) -> Result<ModeUnitary> {
    if !phase_rad.is_finite() {
        return Err(Error::InvalidArgument(format!("phase {phase_rad} is not finite")));
    }
    let j = registry.index_of(mode)?;
    let mut u = ModeUnitary::identity(registry.clone());
    let (sin, cos) = phase_rad.sin_cos();
    u.matrix[(j, j)] = Complex64::new(snap(cos), snap(sin));
    Ok(u)
}

/// Product `U_k ⋯ U_1` of the listed elements, first element applied first.
pub fn compose(elements: &[ElementSpec], registry: &Arc<ModeRegistry>) -> Result<ModeUnitary> {
    elements.iter().try_fold(ModeUnitary::identity(registry.clone()), |acc, el| acc.then(&el.to_unitary(registry)?))
}
