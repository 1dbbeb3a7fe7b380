//! Exact evolution of Fock states through mode unitaries, and coincidence
//! post-selection.
//!
//! Each basis term `|n⟩` is rewritten as a creation-operator string on vacuum,
//! every operator is replaced by its column image, and the product is expanded
//! photon by photon while collecting identical monomials. The cost is bounded
//! by the number of distinct partial monomials, which stays small for the
//! sparse element chains built here.

mod permanent;

pub use permanent::{permanent, transition_amplitude_permanent, MAX_PERMANENT_DIM};

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_complex::Complex64;

use crate::elements::ModeUnitary;
use crate::error::{Error, Result};
use crate::fock::{same_registry, FockState, ModeRegistry, OccupationVector};

fn sqrt_factorial(n: u8) -> f64 {
    (1..=n as u64).map(|k| k as f64).product::<f64>().sqrt()
}

/// `Û|state⟩` for a passive linear-optical unitary.
pub fn apply_unitary(state: &FockState, u: &ModeUnitary) -> Result<FockState> {
    if !same_registry(state.registry(), u.registry()) {
        return Err(Error::RegistryMismatch);
    }
    let columns: Vec<Vec<(usize, Complex64)>> = (0..u.dim()).map(|j| u.column_support(j)).collect();
    let mut out: BTreeMap<OccupationVector, Complex64> = BTreeMap::new();

    for (occ, amp) in state.terms() {
        let mut monomials: HashMap<OccupationVector, Complex64> = HashMap::new();
        monomials.insert(OccupationVector::zeros(u.dim()), Complex64::new(1.0, 0.0));
        let mut input_norm = 1.0;
        for (mode, &count) in occ.counts().iter().enumerate() {
            input_norm *= sqrt_factorial(count);
            for _ in 0..count {
                let mut next = HashMap::with_capacity(monomials.len() * columns[mode].len());
                for (mono, coeff) in &monomials {
                    for &(row, entry) in &columns[mode] {
                        let mut grown = mono.clone();
                        grown.increment(row);
                        *next.entry(grown).or_insert(Complex64::new(0.0, 0.0)) += coeff * entry;
                    }
                }
                monomials = next;
            }
        }
        // Π (a†_k)^{m_k} |vac⟩ = √(Π m_k!) |m⟩
        for (mono, coeff) in monomials {
            let weight: f64 = mono.counts().iter().map(|&m| sqrt_factorial(m)).product();
            *out.entry(mono).or_insert(Complex64::new(0.0, 0.0)) += amp * coeff * (weight / input_norm);
        }
    }
    Ok(FockState::pruned(state.registry().clone(), out))
}

/// Coincidence condition: each listed spatial path holds exactly one photon,
/// regardless of its polarization.
#[derive(Debug, Clone, PartialEq)]
pub struct PostSelectionRule {
    registry: Arc<ModeRegistry>,
    labels: Vec<String>,
    spatial: Vec<usize>,
}

impl PostSelectionRule {
    pub fn new<I, S>(registry: Arc<ModeRegistry>, labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        labels.sort();
        labels.dedup();
        if labels.is_empty() {
            return Err(Error::InvalidArgument("post-selection rule monitors no modes".into()));
        }
        let spatial = labels.iter().map(|l| registry.spatial_index(l)).collect::<Result<Vec<_>>>()?;
        Ok(Self { registry, labels, spatial })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn accepts(&self, occ: &OccupationVector) -> bool {
        self.spatial.iter().all(|&s| occ.spatial_count(s) == 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostSelectionOutcome {
    /// Squared norm of the projected state before renormalization.
    pub probability: f64,
    /// Renormalized conditional state; the zero state when `probability == 0`.
    pub state: FockState,
}

pub fn post_select(state: &FockState, rule: &PostSelectionRule) -> Result<PostSelectionOutcome> {
    if !same_registry(state.registry(), &rule.registry) {
        return Err(Error::RegistryMismatch);
    }
    let kept = state.terms().filter(|(occ, _)| rule.accepts(occ)).map(|(o, a)| (o.clone(), *a));
    let projected = FockState::from_terms(state.registry().clone(), kept)?;
    let probability = projected.norm_squared();
    Ok(PostSelectionOutcome { probability, state: projected.normalized() })
}
