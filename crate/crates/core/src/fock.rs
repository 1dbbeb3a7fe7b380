//! Multi-photon states over labeled (spatial × polarization) modes.
//!
//! A [`FockState`] is a sparse map from canonical occupation vectors to complex
//! amplitudes. Basis kets use the standard bosonic normalization
//! `|n⟩ = Π_j (a†_j)^{n_j} / √(n_j!) |vac⟩`, so the stored map is directly the
//! coefficient vector in an orthonormal basis.
//!
//! Modes are ordered lexicographically by spatial label, then `H < V`. Mode
//! index `2·s + p` addresses spatial slot `s` and polarization `p`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Amplitudes with modulus below this are dropped after every linear pass.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-12;

/// Linear polarization of a photon: `H` is 0°, `V` is 90°.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::H, Polarization::V];

    fn offset(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Polarization::H => 'H',
            Polarization::V => 'V',
        }
    }
}

impl FromStr for Polarization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" | "h" => Ok(Polarization::H),
            "V" | "v" => Ok(Polarization::V),
            other => Err(Error::Parse(format!("unknown polarization `{other}` (expected H or V)"))),
        }
    }
}

/// A single optical mode: a spatial path together with a polarization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId {
    pub spatial: String,
    pub polarization: Polarization,
}

impl ModeId {
    pub fn new(spatial: impl Into<String>, polarization: Polarization) -> Self {
        Self { spatial: spatial.into(), polarization }
    }

    pub fn h(spatial: impl Into<String>) -> Self {
        Self::new(spatial, Polarization::H)
    }

    pub fn v(spatial: impl Into<String>) -> Self {
        Self::new(spatial, Polarization::V)
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.spatial, self.polarization.symbol())
    }
}

impl FromStr for ModeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (spatial, pol) =
            s.rsplit_once('_').ok_or_else(|| Error::Parse(format!("mode `{s}` is not of the form <spatial>_<H|V>")))?;
        validate_label(spatial)?;
        Ok(ModeId::new(spatial, pol.parse()?))
    }
}

fn validate_label(label: &str) -> Result<()> {
    let bad = label.is_empty() || label.chars().any(|c| c.is_whitespace() || matches!(c, '_' | '=' | ','));
    if bad {
        return Err(Error::InvalidLabel(label.to_string()));
    }
    Ok(())
}

/// Ordered set of spatial labels. Each label contributes an H and a V mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeRegistry {
    spatial: Vec<String>,
}

impl ModeRegistry {
    /// Builds a registry from spatial labels in any order; labels are sorted.
    pub fn new<I, S>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut spatial: Vec<String> = labels.into_iter().map(Into::into).collect();
        for label in &spatial {
            validate_label(label)?;
        }
        spatial.sort();
        if let Some(w) = spatial.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateMode(w[0].clone()));
        }
        Ok(Arc::new(Self { spatial }))
    }

    pub fn spatial_labels(&self) -> &[String] {
        &self.spatial
    }

    /// Number of (spatial, polarization) modes.
    pub fn num_modes(&self) -> usize {
        2 * self.spatial.len()
    }

    pub fn contains_spatial(&self, label: &str) -> bool {
        self.spatial_index(label).is_ok()
    }

    pub fn spatial_index(&self, label: &str) -> Result<usize> {
        self.spatial
            .binary_search_by(|probe| probe.as_str().cmp(label))
            .map_err(|_| Error::UnknownMode(label.to_string()))
    }

    pub fn index_of(&self, mode: &ModeId) -> Result<usize> {
        Ok(self.mode_index(self.spatial_index(&mode.spatial)?, mode.polarization))
    }

    pub fn mode_index(&self, spatial_index: usize, polarization: Polarization) -> usize {
        2 * spatial_index + polarization.offset()
    }

    pub fn mode_at(&self, index: usize) -> ModeId {
        let polarization = if index.is_multiple_of(2) { Polarization::H } else { Polarization::V };
        ModeId::new(self.spatial[index / 2].clone(), polarization)
    }
}

pub(crate) fn same_registry(a: &Arc<ModeRegistry>, b: &Arc<ModeRegistry>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Dense photon counts per mode, in registry order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationVector(Vec<u8>);

impl OccupationVector {
    pub fn zeros(num_modes: usize) -> Self {
        Self(vec![0; num_modes])
    }

    pub fn from_counts(counts: Vec<u8>) -> Self {
        Self(counts)
    }

    /// One photon per listed mode; repeated modes accumulate.
    pub fn from_modes(registry: &ModeRegistry, modes: &[ModeId]) -> Result<Self> {
        let mut occ = Self::zeros(registry.num_modes());
        for mode in modes {
            occ.0[registry.index_of(mode)?] += 1;
        }
        Ok(occ)
    }

    pub fn counts(&self) -> &[u8] {
        &self.0
    }

    pub fn count(&self, mode_index: usize) -> u8 {
        self.0[mode_index]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    /// Photons in a spatial slot, summed over both polarizations.
    pub fn spatial_count(&self, spatial_index: usize) -> usize {
        self.0[2 * spatial_index] as usize + self.0[2 * spatial_index + 1] as usize
    }

    pub(crate) fn increment(&mut self, mode_index: usize) {
        self.0[mode_index] += 1;
    }

    /// `A_H=1,B_V=2` listing only occupied modes; vacuum is the empty string.
    pub fn describe(&self, registry: &ModeRegistry) -> String {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, c)| format!("{}={}", registry.mode_at(i), c))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(registry: &ModeRegistry, text: &str) -> Result<Self> {
        let mut occ = Self::zeros(registry.num_modes());
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (mode, count) =
                item.split_once('=').ok_or_else(|| Error::Parse(format!("occupation entry `{item}` lacks `=`")))?;
            let mode: ModeId = mode.parse()?;
            let count: u8 = count.parse().map_err(|_| Error::Parse(format!("bad photon count in `{item}`")))?;
            occ.0[registry.index_of(&mode)?] += count;
        }
        Ok(occ)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Pure multi-photon state as a sparse amplitude map.
///
/// Immutable once built; every operation returns a new state. The zero state
/// (no terms) is legal and behaves linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    registry: Arc<ModeRegistry>,
    terms: BTreeMap<OccupationVector, Complex64>,
}

impl FockState {
    pub fn zero(registry: Arc<ModeRegistry>) -> Self {
        Self { registry, terms: BTreeMap::new() }
    }

    pub fn vacuum(registry: Arc<ModeRegistry>) -> Self {
        let occ = OccupationVector::zeros(registry.num_modes());
        Self::basis(registry, occ)
    }

    /// Normalized Fock basis ket `|occ⟩`.
    pub fn basis(registry: Arc<ModeRegistry>, occ: OccupationVector) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(occ, Complex64::new(1.0, 0.0));
        Self { registry, terms }
    }

    pub fn single_photon(mode: &ModeId, registry: Arc<ModeRegistry>) -> Result<Self> {
        let occ = OccupationVector::from_modes(&registry, std::slice::from_ref(mode))?;
        Ok(Self::basis(registry, occ))
    }

    /// Product of single photons, one per listed mode (bosonic factors applied).
    pub fn product(modes: &[ModeId], registry: Arc<ModeRegistry>) -> Result<Self> {
        let mut state = Self::vacuum(registry.clone());
        for mode in modes {
            state = state.tensor_product(&Self::single_photon(mode, registry.clone())?)?;
        }
        Ok(state)
    }

    /// Sums duplicate occupations and prunes negligible amplitudes.
    pub fn from_terms<I>(registry: Arc<ModeRegistry>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OccupationVector, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (occ, amp) in terms {
            if occ.len() != registry.num_modes() {
                return Err(Error::RegistryMismatch);
            }
            *map.entry(occ).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        Ok(Self::pruned(registry, map))
    }

    pub(crate) fn pruned(registry: Arc<ModeRegistry>, mut terms: BTreeMap<OccupationVector, Complex64>) -> Self {
        terms.retain(|_, amp| amp.norm() >= AMPLITUDE_TOLERANCE);
        Self { registry, terms }
    }

    pub fn registry(&self) -> &Arc<ModeRegistry> {
        &self.registry
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OccupationVector, &Complex64)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, occ: &OccupationVector) -> Complex64 {
        self.terms.get(occ).copied().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_registry(&self, other: &FockState) -> Result<()> {
        if same_registry(&self.registry, &other.registry) {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    /// Creation-operator product of two states over the same registry.
    ///
    /// Occupations add; a mode receiving `n` photons from one side and `m` from
    /// the other picks up `√C(n+m, n)`, the ratio between `(a†)^{n+m}|vac⟩`
    /// and the product of the two normalized kets.
    pub fn tensor_product(&self, other: &FockState) -> Result<FockState> {
        self.check_registry(other)?;
        let mut out = BTreeMap::new();
        for (occ_a, amp_a) in &self.terms {
            for (occ_b, amp_b) in &other.terms {
                let mut factor = 1.0;
                let counts: Vec<u8> = occ_a
                    .0
                    .iter()
                    .zip(&occ_b.0)
                    .map(|(&n, &m)| {
                        if n > 0 && m > 0 {
                            factor *= binomial((n + m) as usize, n as usize).sqrt();
                        }
                        n + m
                    })
                    .collect();
                *out.entry(OccupationVector(counts)).or_insert(Complex64::new(0.0, 0.0)) += amp_a * amp_b * factor;
            }
        }
        Ok(Self::pruned(self.registry.clone(), out))
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &FockState) -> Result<Complex64> {
        self.check_registry(other)?;
        let (small, large, flip) =
            if self.terms.len() <= other.terms.len() { (self, other, false) } else { (other, self, true) };
        let mut acc = Complex64::new(0.0, 0.0);
        for (occ, a) in &small.terms {
            if let Some(b) = large.terms.get(occ) {
                acc += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        Ok(acc)
    }

    pub fn norm_squared(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn scale(&self, factor: Complex64) -> FockState {
        let terms = self.terms.iter().map(|(o, a)| (o.clone(), a * factor)).collect();
        Self::pruned(self.registry.clone(), terms)
    }

    pub fn add(&self, other: &FockState) -> Result<FockState> {
        self.check_registry(other)?;
        let mut terms = self.terms.clone();
        for (occ, amp) in &other.terms {
            *terms.entry(occ.clone()).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        Ok(Self::pruned(self.registry.clone(), terms))
    }

    /// Rescales to unit norm; the zero state stays zero.
    pub fn normalized(&self) -> FockState {
        let norm = self.norm_squared().sqrt();
        if norm == 0.0 {
            return self.clone();
        }
        self.scale(Complex64::new(1.0 / norm, 0.0))
    }

    /// Total photon numbers present across terms, ascending.
    pub fn photon_numbers(&self) -> Vec<usize> {
        let mut n: Vec<usize> = self.terms.keys().map(OccupationVector::total).collect();
        n.sort_unstable();
        n.dedup();
        n
    }

    /// One line per term: `<re> <im> <occupation>`, 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (occ, amp) in &self.terms {
            out.push_str(&format_term(&self.registry, occ, *amp));
            out.push('\n');
        }
        out
    }

    pub fn from_text(registry: Arc<ModeRegistry>, text: &str) -> Result<FockState> {
        let mut terms = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let mut number = |what: &str| -> Result<f64> {
                fields
                    .next()
                    .ok_or_else(|| Error::Parse(format!("line {}: missing {what}", lineno + 1)))?
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad {what}", lineno + 1)))
            };
            let re = number("real part")?;
            let im = number("imaginary part")?;
            let occ = OccupationVector::parse(&registry, fields.next().unwrap_or(""))?;
            if fields.next().is_some() {
                return Err(Error::Parse(format!("line {}: trailing fields", lineno + 1)));
            }
            *terms.entry(occ).or_insert(Complex64::new(0.0, 0.0)) += Complex64::new(re, im);
        }
        Ok(FockState { registry, terms })
    }
}

pub(crate) fn format_term(registry: &ModeRegistry, occ: &OccupationVector, amp: Complex64) -> String {
    format!("{:.16e} {:.16e} {}", amp.re, amp.im, occ.describe(registry))
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
