#![allow(dead_code)]

use std::sync::Arc;

use linopt_core::elements::ModeUnitary;
use linopt_core::{FockState, ModeRegistry, OccupationVector};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn registry(spatial: usize) -> Arc<ModeRegistry> {
    ModeRegistry::new((0..spatial).map(|i| format!("S{i}"))).unwrap()
}

pub fn gaussian_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of R's diagonal folded back into Q.
pub fn random_unitary<R: Rng>(rng: &mut R, registry: &Arc<ModeRegistry>) -> ModeUnitary {
    let m = registry.num_modes();
    let g = DMatrix::from_fn(m, m, |_, _| gaussian_complex(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..m {
        let d = r[(j, j)];
        let phase = d / d.norm();
        for i in 0..m {
            q[(i, j)] *= phase;
        }
    }
    ModeUnitary::from_matrix(registry.clone(), q).unwrap()
}

/// Every occupation of `photons` bosons over `modes` modes.
pub fn all_occupations(modes: usize, photons: usize) -> Vec<OccupationVector> {
    fn rec(modes: usize, left: usize, prefix: &mut Vec<u8>, out: &mut Vec<OccupationVector>) {
        if prefix.len() == modes - 1 {
            prefix.push(left as u8);
            out.push(OccupationVector::from_counts(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k as u8);
            rec(modes, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(modes, photons, &mut Vec::new(), &mut out);
    out
}

pub fn random_occupation<R: Rng>(rng: &mut R, modes: usize, photons: usize) -> OccupationVector {
    let mut counts = vec![0u8; modes];
    for _ in 0..photons {
        counts[rng.random_range(0..modes)] += 1;
    }
    OccupationVector::from_counts(counts)
}

/// Normalized superposition of `terms` random basis kets with `photons` photons.
pub fn random_state<R: Rng>(rng: &mut R, registry: &Arc<ModeRegistry>, photons: usize, terms: usize) -> FockState {
    let modes = registry.num_modes();
    let items: Vec<_> = (0..terms).map(|_| (random_occupation(rng, modes, photons), gaussian_complex(rng))).collect();
    FockState::from_terms(registry.clone(), items).unwrap().normalized()
}

/// Largest amplitude difference between two states over the union of their terms.
pub fn max_amplitude_gap(a: &FockState, b: &FockState) -> f64 {
    a.terms()
        .map(|(o, x)| (x - b.amplitude(o)).norm())
        .chain(b.terms().map(|(o, y)| (y - a.amplitude(o)).norm()))
        .fold(0.0, f64::max)
}

/// `min_φ max |a − e^{iφ} b|` with φ taken from the largest overlapping term.
pub fn gap_up_to_global_phase(a: &FockState, b: &FockState) -> f64 {
    let overlap = b.inner_product(a).unwrap();
    if overlap.norm() == 0.0 {
        return f64::INFINITY;
    }
    let phase = overlap / overlap.norm();
    max_amplitude_gap(a, &b.scale(phase))
}
