//! Entanglement diagnostics for dual-rail polarization qubits.
//!
//! A [`QubitEncoding`] lists spatial paths, one photon each; logical `0` is
//! H and logical `1` is V. States are decoded into a dense `2^n` amplitude
//! vector (qubit 0 is the most significant bit) before any observable is
//! evaluated. Terms that break the one-photon-per-path rule are rejected.
//!
//! Pauli `Y` follows `Y|0⟩ = i|1⟩`, `Y|1⟩ = −i|0⟩`. In the lab this
//! corresponds to a circular-polarization analyzer, which is not modeled as an
//! optical element here.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockState, ModeId, ModeRegistry, OccupationVector, Polarization};

/// Normalization slack accepted by [`fidelity`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitEncoding {
    modes: Vec<String>,
}

impl QubitEncoding {
    pub fn new<I, S>(modes: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let modes: Vec<String> = modes.into_iter().map(Into::into).collect();
        for (i, m) in modes.iter().enumerate() {
            if modes[..i].contains(m) {
                return Err(Error::DuplicateMode(m.clone()));
            }
        }
        Ok(Self { modes })
    }

    pub fn modes(&self) -> &[String] {
        &self.modes
    }

    pub fn num_qubits(&self) -> usize {
        self.modes.len()
    }

    /// Fock occupation of logical basis state `index`.
    fn occupation(&self, registry: &ModeRegistry, index: usize) -> Result<OccupationVector> {
        let n = self.num_qubits();
        let modes: Vec<ModeId> = self
            .modes
            .iter()
            .enumerate()
            .map(|(q, label)| {
                let bit = (index >> (n - 1 - q)) & 1;
                let pol = if bit == 0 { Polarization::H } else { Polarization::V };
                ModeId::new(label.clone(), pol)
            })
            .collect();
        OccupationVector::from_modes(registry, &modes)
    }

    /// Dense logical amplitudes of `state`.
    pub fn decode(&self, state: &FockState) -> Result<Vec<Complex64>> {
        let registry = state.registry();
        let slots = self.modes.iter().map(|l| registry.spatial_index(l)).collect::<Result<Vec<_>>>()?;
        let n = self.num_qubits();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (occ, amp) in state.terms() {
            let mut index = 0usize;
            for (q, &s) in slots.iter().enumerate() {
                if occ.spatial_count(s) != 1 {
                    return Err(Error::NotDualRail(format!(
                        "path `{}` holds {} photons in term {}",
                        self.modes[q],
                        occ.spatial_count(s),
                        occ.describe(registry)
                    )));
                }
                if occ.count(registry.mode_index(s, Polarization::V)) == 1 {
                    index |= 1 << (n - 1 - q);
                }
            }
            if occ.total() != n {
                return Err(Error::NotDualRail(format!(
                    "photons outside the encoded paths in term {}",
                    occ.describe(registry)
                )));
            }
            amps[index] = *amp;
        }
        Ok(amps)
    }

    /// Builds the Fock state with the given dense logical amplitudes.
    pub fn encode(&self, registry: &Arc<ModeRegistry>, amplitudes: &[Complex64]) -> Result<FockState> {
        if amplitudes.len() != 1 << self.num_qubits() {
            return Err(Error::InvalidArgument(format!(
                "expected {} amplitudes, got {}",
                1usize << self.num_qubits(),
                amplitudes.len()
            )));
        }
        let terms = amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 0.0)
            .map(|(i, a)| Ok((self.occupation(registry, i)?, *a)))
            .collect::<Result<Vec<_>>>()?;
        FockState::from_terms(registry.clone(), terms)
    }
}

/// `(|H…H⟩ + e^{iφ}|V…V⟩)/√2` over the encoded paths.
pub fn ghz_target(encoding: &QubitEncoding, phase: f64, registry: &Arc<ModeRegistry>) -> Result<FockState> {
    let n = encoding.num_qubits();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("GHZ target needs at least 2 qubits, got {n}")));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[(1 << n) - 1] = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, phase);
    encoding.encode(registry, &amps)
}

/// Singlet `(|HV⟩ − |VH⟩)/√2` over a two-path encoding.
pub fn bell_psi_minus(encoding: &QubitEncoding, registry: &Arc<ModeRegistry>) -> Result<FockState> {
    if encoding.num_qubits() != 2 {
        return Err(Error::InvalidArgument("the singlet is a two-qubit state".into()));
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let amps = [0.0, r, -r, 0.0].map(|a| Complex64::new(a, 0.0));
    encoding.encode(registry, &amps)
}

fn check_normalized(state: &FockState) -> Result<()> {
    let n2 = state.norm_squared();
    if (n2 - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized(n2));
    }
    Ok(())
}

/// `|⟨target|state⟩|²` for normalized pure states.
pub fn fidelity(state: &FockState, target: &FockState) -> Result<f64> {
    check_normalized(state)?;
    check_normalized(target)?;
    Ok(target.inner_product(state)?.norm_sqr())
}

/// Fits `φ` in `(|a⟩ + e^{iφ}|b⟩)/√2` to the state's amplitudes on logical
/// basis states `a` and `b`; returns `(φ, fidelity at φ)`.
pub fn relative_phase_fit(
    state: &FockState,
    encoding: &QubitEncoding,
    anchor_a: usize,
    anchor_b: usize,
) -> Result<(f64, f64)> {
    let amps = encoding.decode(state)?;
    let (a, b) = match (amps.get(anchor_a), amps.get(anchor_b)) {
        (Some(a), Some(b)) if anchor_a != anchor_b => (*a, *b),
        _ => return Err(Error::InvalidArgument("anchors must be distinct logical basis states".into())),
    };
    if a.norm() == 0.0 && b.norm() == 0.0 {
        return Err(Error::UndefinedPhase);
    }
    let phase = (b * a.conj()).arg();
    let phase = if a.norm() == 0.0 || b.norm() == 0.0 { 0.0 } else { phase };
    let mut target = vec![Complex64::new(0.0, 0.0); amps.len()];
    target[anchor_a] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    target[anchor_b] = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, phase);
    let target = encoding.encode(state.registry(), &target)?;
    Ok((phase, fidelity(state, &target)?))
}

/// `φ* = arg⟨V…V|ψ⟩ − arg⟨H…H|ψ⟩` and the fidelity with `ghz_target(φ*)`.
pub fn ghz_phase_fit(state: &FockState, encoding: &QubitEncoding) -> Result<(f64, f64)> {
    let n = encoding.num_qubits();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("GHZ fit needs at least 2 qubits, got {n}")));
    }
    relative_phase_fit(state, encoding, 0, (1 << n) - 1)
}

type Op2 = [[Complex64; 2]; 2];

fn real_op(m: [[f64; 2]; 2]) -> Op2 {
    m.map(|row| row.map(|x| Complex64::new(x, 0.0)))
}

fn pauli_x() -> Op2 {
    real_op([[0.0, 1.0], [1.0, 0.0]])
}

fn pauli_y() -> Op2 {
    let i = Complex64::new(0.0, 1.0);
    let z = Complex64::new(0.0, 0.0);
    [[z, -i], [i, z]]
}

/// Transmission (+1) minus absorption (−1) for a polarizer at `θ` from H.
fn polarizer_observable(angle_deg: f64) -> Op2 {
    let (s, c) = (2.0 * angle_deg.to_radians()).sin_cos();
    real_op([[c, s], [s, -c]])
}

fn apply_local(amps: &mut [Complex64], n: usize, qubit: usize, op: &Op2) {
    let stride = 1 << (n - 1 - qubit);
    for base in 0..amps.len() {
        if base & stride != 0 {
            continue;
        }
        let (a0, a1) = (amps[base], amps[base | stride]);
        amps[base] = op[0][0] * a0 + op[0][1] * a1;
        amps[base | stride] = op[1][0] * a0 + op[1][1] * a1;
    }
}

/// `⟨ψ| ⊗_q O_q |ψ⟩ / ⟨ψ|ψ⟩` for Hermitian single-qubit factors.
fn product_expectation(amps: &[Complex64], ops: &[Op2]) -> Result<f64> {
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if norm == 0.0 {
        return Err(Error::InvalidArgument("expectation value of the zero state".into()));
    }
    let mut image = amps.to_vec();
    for (q, op) in ops.iter().enumerate() {
        apply_local(&mut image, ops.len(), q, op);
    }
    let overlap: Complex64 = amps.iter().zip(&image).map(|(a, b)| a.conj() * b).sum();
    Ok(overlap.re / norm)
}

/// Joint correlation of polarizers at the given angles (degrees from H), one
/// per encoded path, with ±1 outcomes for transmission/absorption.
pub fn polarizer_correlation(state: &FockState, angles_deg: &[f64], encoding: &QubitEncoding) -> Result<f64> {
    if angles_deg.len() != encoding.num_qubits() {
        return Err(Error::InvalidArgument(format!(
            "{} polarizer angles for {} qubits",
            angles_deg.len(),
            encoding.num_qubits()
        )));
    }
    let amps = encoding.decode(state)?;
    let ops: Vec<Op2> = angles_deg.iter().map(|&a| polarizer_observable(a)).collect();
    product_expectation(&amps, &ops)
}

/// `⟨XXX − XYY − YXY − YYX⟩`; local realism bounds it by 2, GHZ reaches 4.
pub fn mermin_value(state: &FockState, encoding: &QubitEncoding) -> Result<f64> {
    if encoding.num_qubits() != 3 {
        return Err(Error::InvalidArgument(format!(
            "the Mermin operator is defined for 3 qubits, got {}",
            encoding.num_qubits()
        )));
    }
    let amps = encoding.decode(state)?;
    let (x, y) = (pauli_x(), pauli_y());
    let xxx = product_expectation(&amps, &[x, x, x])?;
    let xyy = product_expectation(&amps, &[x, y, y])?;
    let yxy = product_expectation(&amps, &[y, x, y])?;
    let yyx = product_expectation(&amps, &[y, y, x])?;
    Ok(xxx - xyy - yxy - yyx)
}
