//! Pre-built post-selected entangling circuits and their end-to-end execution.
//!
//! * [`bell_scheme`]: two orthogonally polarized photons on a 50:50
//!   beamsplitter; coincidences herald the singlet with probability 1/2.
//! * [`ghz3_scheme`]: the three-photon construction over paths `A..G` with
//!   the monitored outputs `D, F, G` (which play the role of `B1, B2, B3`).
//! * [`ghzn_scheme`]: the chained generalization over `A1..An`, `B1..Bn`.
//!   The beamsplitter sends the singlet partner of `B1` into `B2`, which then
//!   serves as the running path: stage `k` rotates the fresh photon `Ak` by a
//!   22.5° half-wave plate and merges it with the running path `B(k-1)` on a
//!   PBS whose outputs are `B(k-1)` (running V, fresh H) and `Bk` (running H,
//!   fresh V). Each stage succeeds with probability 1/2.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::analysis::{bell_psi_minus, fidelity, ghz_phase_fit, ghz_target, relative_phase_fit, QubitEncoding};
use crate::elements::{compose, ElementSpec, ModeUnitary};
use crate::error::{Error, Result};
use crate::fock::{FockState, ModeId, ModeRegistry};
use crate::simulator::{apply_unitary, post_select, PostSelectionOutcome, PostSelectionRule};

/// Ordered element list over a registry, with input photons and a
/// coincidence rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    registry: Arc<ModeRegistry>,
    elements: Vec<ElementSpec>,
    input: Vec<ModeId>,
    rule: PostSelectionRule,
}

impl Circuit {
    pub fn new(
        registry: Arc<ModeRegistry>,
        elements: Vec<ElementSpec>,
        input: Vec<ModeId>,
        rule: PostSelectionRule,
    ) -> Result<Self> {
        for el in &elements {
            el.to_unitary(&registry)?;
        }
        for mode in &input {
            registry.index_of(mode)?;
        }
        Ok(Self { registry, elements, input, rule })
    }

    pub fn registry(&self) -> &Arc<ModeRegistry> {
        &self.registry
    }

    pub fn elements(&self) -> &[ElementSpec] {
        &self.elements
    }

    pub fn input(&self) -> &[ModeId] {
        &self.input
    }

    pub fn rule(&self) -> &PostSelectionRule {
        &self.rule
    }

    pub fn photon_count(&self) -> usize {
        self.input.len()
    }

    pub fn input_state(&self) -> Result<FockState> {
        FockState::product(&self.input, self.registry.clone())
    }

    pub fn unitary(&self) -> Result<ModeUnitary> {
        compose(&self.elements, &self.registry)
    }

    /// State after the first `count` elements.
    pub fn state_after(&self, count: usize) -> Result<FockState> {
        let prefix = self
            .elements
            .get(..count)
            .ok_or_else(|| Error::InvalidArgument(format!("circuit has only {} elements", self.elements.len())))?;
        apply_unitary(&self.input_state()?, &compose(prefix, &self.registry)?)
    }

    /// Compose, evolve, post-select.
    pub fn execute(&self) -> Result<PostSelectionOutcome> {
        let out = apply_unitary(&self.input_state()?, &self.unitary()?)?;
        post_select(&out, &self.rule)
    }
}

/// What the post-selected state is compared against.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    /// `(|H…H⟩ + e^{iφ}|V…V⟩)/√2`. With `phase: None` the reported fidelity
    /// is the phase-fitted one and the fixed comparison uses `φ = 0`.
    Ghz { encoding: QubitEncoding, phase: Option<f64> },
    /// `(|HV⟩ − |VH⟩)/√2` over a two-path encoding.
    BellPsiMinus { encoding: QubitEncoding },
}

impl Target {
    pub fn encoding(&self) -> &QubitEncoding {
        match self {
            Target::Ghz { encoding, .. } | Target::BellPsiMinus { encoding } => encoding,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeResult {
    /// Photons injected.
    pub n: usize,
    pub success_probability: f64,
    /// Renormalized post-selected state (zero state if nothing survives).
    pub post_state: FockState,
    /// Fidelity with the target; phase-fitted for a GHZ target without a pinned phase.
    pub target_fidelity: f64,
    /// Fidelity with the target at its pinned phase (`φ = 0` by default for GHZ).
    pub fixed_phase_fidelity: f64,
    /// Relative phase between the target's two anchor kets, in radians.
    pub fitted_phase: Option<f64>,
}

/// Sign convention for the first polarization flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlipConvention {
    /// `V → H`, `H → −V`: a 45° half-wave plate followed by a π phase on V.
    #[default]
    SignedFlip,
    /// Bare 45° half-wave plate: `V ↔ H`.
    PhysicalHwp,
}

impl FlipConvention {
    fn elements(self, spatial: &str) -> Vec<ElementSpec> {
        let mut els = vec![ElementSpec::hwp(spatial, 45.0)];
        if self == FlipConvention::SignedFlip {
            els.push(ElementSpec::phase(ModeId::v(spatial), std::f64::consts::PI));
        }
        els
    }
}

/// Intermediate planes of the three-photon circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Plane {
    /// After the beamsplitter.
    P1,
    /// After both waveplates.
    P2,
    /// After the PBS.
    P3,
}

impl Plane {
    pub const ALL: [Plane; 3] = [Plane::P1, Plane::P2, Plane::P3];
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Plane::P1 => "P1",
            Plane::P2 => "P2",
            Plane::P3 => "P3",
        };
        f.write_str(s)
    }
}

impl FromStr for Plane {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P1" | "p1" => Ok(Plane::P1),
            "P2" | "p2" => Ok(Plane::P2),
            "P3" | "p3" => Ok(Plane::P3),
            other => Err(Error::InvalidArgument(format!("unknown plane `{other}` (expected P1, P2 or P3)"))),
        }
    }
}

/// A named circuit with its target and, when defined, plane boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct Scheme {
    pub name: String,
    pub circuit: Circuit,
    pub target: Target,
    /// Element counts after which planes P1, P2, P3 sit.
    planes: Option<[usize; 3]>,
}

impl Scheme {
    pub fn run(&self) -> Result<SchemeResult> {
        run_scheme(&self.circuit, &self.target)
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

pub fn bell_scheme() -> Scheme {
    let registry = ModeRegistry::new(["A", "B", "C", "D"]).expect("static labels");
    let rule = PostSelectionRule::new(registry.clone(), ["C", "D"]).expect("static labels");
    let circuit =
        Circuit::new(registry, vec![ElementSpec::bs50("A", "B", "C", "D")], vec![ModeId::h("A"), ModeId::v("B")], rule)
            .expect("static circuit");
    let encoding = QubitEncoding::new(["D", "C"]).expect("static labels");
    Scheme { name: "bell".into(), circuit, target: Target::BellPsiMinus { encoding }, planes: None }
}

pub fn ghz3_scheme() -> Scheme {
    ghz3_scheme_with(FlipConvention::default())
}

pub fn ghz3_scheme_with(flip: FlipConvention) -> Scheme {
    let registry = ModeRegistry::new(["A", "B", "C", "D", "E", "F", "G"]).expect("static labels");
    let rule = PostSelectionRule::new(registry.clone(), ["D", "F", "G"]).expect("static labels");
    let mut elements = vec![ElementSpec::bs50("A", "B", "E", "D")];
    elements.extend(flip.elements("D"));
    elements.push(ElementSpec::hwp("C", 22.5));
    let p2 = elements.len();
    elements.push(ElementSpec::pbs("E", "C", "F", "G"));
    let circuit = Circuit::new(registry, elements, vec![ModeId::h("A"), ModeId::v("B"), ModeId::v("C")], rule)
        .expect("static circuit");
    let encoding = QubitEncoding::new(["D", "F", "G"]).expect("static labels");
    Scheme {
        name: "ghz3".into(),
        circuit,
        target: Target::Ghz { encoding, phase: None },
        planes: Some([1, p2, p2 + 1]),
    }
}

pub fn ghzn_scheme(n: usize) -> Result<Scheme> {
    ghzn_scheme_with(n, FlipConvention::default())
}

pub fn ghzn_scheme_with(n: usize, flip: FlipConvention) -> Result<Scheme> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("GHZ scheme needs n >= 2 photons, got {n}")));
    }
    let a = labels("A", n);
    let b = labels("B", n);
    let registry = ModeRegistry::new(a.iter().chain(&b).cloned())?;

    let mut elements = vec![ElementSpec::bs50(&a[0], &a[1], &b[1], &b[0])];
    elements.extend(flip.elements(&b[0]));
    for k in 2..n {
        elements.push(ElementSpec::hwp(&a[k], 22.5));
        elements.push(ElementSpec::pbs(&b[k - 1], &a[k], &b[k - 1], &b[k]));
    }

    let mut input = vec![ModeId::h(&a[0])];
    input.extend(a[1..].iter().map(ModeId::v));
    let rule = PostSelectionRule::new(registry.clone(), b.iter().cloned())?;
    let circuit = Circuit::new(registry, elements, input, rule)?;
    let encoding = QubitEncoding::new(b)?;
    Ok(Scheme { name: format!("ghz{n}"), circuit, target: Target::Ghz { encoding, phase: None }, planes: None })
}

/// Executes the circuit and scores the conditional state against `target`.
pub fn run_scheme(circuit: &Circuit, target: &Target) -> Result<SchemeResult> {
    let outcome = circuit.execute()?;
    let mut result = SchemeResult {
        n: circuit.photon_count(),
        success_probability: outcome.probability,
        post_state: outcome.state,
        target_fidelity: 0.0,
        fixed_phase_fidelity: 0.0,
        fitted_phase: None,
    };
    if result.post_state.is_zero() {
        return Ok(result);
    }
    let state = &result.post_state;
    let registry = circuit.registry();
    match target {
        Target::Ghz { encoding, phase } => {
            let fixed = fidelity(state, &ghz_target(encoding, phase.unwrap_or(0.0), registry)?)?;
            let (fitted_phase, fitted_fidelity) = match ghz_phase_fit(state, encoding) {
                Ok((phi, f)) => (Some(phi), f),
                Err(Error::UndefinedPhase) => (None, 0.0),
                Err(e) => return Err(e),
            };
            result.fixed_phase_fidelity = fixed;
            result.target_fidelity = if phase.is_some() { fixed } else { fitted_fidelity };
            result.fitted_phase = fitted_phase;
        }
        Target::BellPsiMinus { encoding } => {
            let f = fidelity(state, &bell_psi_minus(encoding, registry)?)?;
            result.target_fidelity = f;
            result.fixed_phase_fidelity = f;
            result.fitted_phase = match relative_phase_fit(state, encoding, 0b01, 0b10) {
                Ok((phi, _)) => Some(phi),
                Err(Error::UndefinedPhase) => None,
                Err(e) => return Err(e),
            };
        }
    }
    Ok(result)
}

/// State of the three-photon circuit at an intermediate plane.
pub fn plane_state(scheme: &Scheme, plane: Plane) -> Result<FockState> {
    let bounds =
        scheme.planes.ok_or_else(|| Error::InvalidArgument(format!("scheme `{}` defines no planes", scheme.name)))?;
    let index = Plane::ALL.iter().position(|p| *p == plane).expect("plane in ALL");
    scheme.circuit.state_after(bounds[index])
}
