//! JSON circuit description: parsing, validation against a mode registry, and
//! conversion from the built-in schemes.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use linopt_core::analysis::QubitEncoding;
use linopt_core::elements::ElementSpec;
use linopt_core::schemes::{Circuit, Scheme, Target};
use linopt_core::simulator::PostSelectionRule;
use linopt_core::{ModeId, ModeRegistry, Polarization};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pol {
    H,
    V,
}

impl From<Pol> for Polarization {
    fn from(p: Pol) -> Self {
        match p {
            Pol::H => Polarization::H,
            Pol::V => Polarization::V,
        }
    }
}

impl From<Polarization> for Pol {
    fn from(p: Polarization) -> Self {
        match p {
            Polarization::H => Pol::H,
            Polarization::V => Pol::V,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Photon {
    pub spatial: String,
    pub polarization: Pol,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Element {
    #[serde(rename = "BS50")]
    Bs50 { inputs: [String; 2], outputs: [String; 2] },
    #[serde(rename = "HWP")]
    Hwp { mode: String, angle_deg: f64 },
    #[serde(rename = "PBS")]
    Pbs { inputs: [String; 2], outputs: [String; 2] },
    #[serde(rename = "PHASE")]
    Phase { mode: String, polarization: Pol, phase_rad: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetSpec {
    Ghz {
        modes: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phase_deg: Option<f64>,
    },
    BellPsiMinus {
        modes: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub spatial_modes: Vec<String>,
    pub input_photons: Vec<Photon>,
    pub elements: Vec<Element>,
    pub postselect: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetSpec>,
}

/// Parse or validation failure, located by a field path such as
/// `elements[2].inputs[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FileError {
    pub path: String,
    pub message: String,
    pub line: Option<(usize, usize)>,
}

impl FileError {
    fn at(path: impl Into<String>, message: impl fmt::Display) -> Self {
        Self { path: path.into(), message: message.to_string(), line: None }
    }
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)?;
        } else {
            write!(f, "{}: {}", self.path, self.message)?;
        }
        if let Some((line, column)) = self.line {
            write!(f, " (line {line}, column {column})")?;
        }
        Ok(())
    }
}

impl std::error::Error for FileError {}

/// A validated circuit ready to execute.
#[derive(Debug, Clone)]
pub struct LoadedCircuit {
    pub circuit: Circuit,
    pub target: Option<Target>,
}

impl CircuitFile {
    pub fn parse(text: &str) -> Result<Self, FileError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let parsed: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let path = if path == "." { String::new() } else { path };
            FileError { path, message: strip_position(&inner), line: Some((inner.line(), inner.column())) }
        })?;
        Ok(parsed)
    }

    pub fn read(path: &Path) -> Result<Self, FileError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FileError::at("", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("circuit files always serialize");
        s.push('\n');
        s
    }

    /// Checks every reference and builds the core circuit and target.
    pub fn validate(&self) -> Result<LoadedCircuit, FileError> {
        let registry =
            ModeRegistry::new(self.spatial_modes.iter().cloned()).map_err(|e| FileError::at("spatial_modes", e))?;
        let known = |path: String, label: &str| -> Result<(), FileError> {
            if registry.contains_spatial(label) {
                Ok(())
            } else {
                Err(FileError::at(path, format!("undeclared spatial mode `{label}`")))
            }
        };

        if self.input_photons.is_empty() {
            return Err(FileError::at("input_photons", "at least one photon is required"));
        }
        let mut input = Vec::with_capacity(self.input_photons.len());
        for (i, p) in self.input_photons.iter().enumerate() {
            known(format!("input_photons[{i}].spatial"), &p.spatial)?;
            input.push(ModeId::new(p.spatial.clone(), p.polarization.into()));
        }

        let mut elements = Vec::with_capacity(self.elements.len());
        for (i, el) in self.elements.iter().enumerate() {
            let path = format!("elements[{i}]");
            match el {
                Element::Bs50 { inputs, outputs } | Element::Pbs { inputs, outputs } => {
                    for (k, l) in inputs.iter().enumerate() {
                        known(format!("{path}.inputs[{k}]"), l)?;
                    }
                    for (k, l) in outputs.iter().enumerate() {
                        known(format!("{path}.outputs[{k}]"), l)?;
                    }
                }
                Element::Hwp { mode, angle_deg: value } | Element::Phase { mode, phase_rad: value, .. } => {
                    known(format!("{path}.mode"), mode)?;
                    if !value.is_finite() {
                        return Err(FileError::at(path, "parameter must be finite"));
                    }
                }
            }
            let spec = self.elements[i].to_spec();
            spec.to_unitary(&registry).map_err(|e| FileError::at(path, e))?;
            elements.push(spec);
        }

        for (i, l) in self.postselect.iter().enumerate() {
            known(format!("postselect[{i}]"), l)?;
        }
        let rule = PostSelectionRule::new(registry.clone(), self.postselect.iter().cloned())
            .map_err(|e| FileError::at("postselect", e))?;

        let target = self.target.as_ref().map(|t| target_from_spec(t, &registry)).transpose()?;
        let circuit = Circuit::new(registry, elements, input, rule).map_err(|e| FileError::at("", e))?;
        Ok(LoadedCircuit { circuit, target })
    }

    /// File form of a built-in scheme.
    pub fn from_scheme(scheme: &Scheme) -> Self {
        let circuit = &scheme.circuit;
        let target = match &scheme.target {
            Target::Ghz { encoding, phase } => {
                TargetSpec::Ghz { modes: encoding.modes().to_vec(), phase_deg: phase.map(f64::to_degrees) }
            }
            Target::BellPsiMinus { encoding } => TargetSpec::BellPsiMinus { modes: encoding.modes().to_vec() },
        };
        Self {
            spatial_modes: circuit.registry().spatial_labels().to_vec(),
            input_photons: circuit
                .input()
                .iter()
                .map(|m| Photon { spatial: m.spatial.clone(), polarization: m.polarization.into() })
                .collect(),
            elements: circuit.elements().iter().map(Element::from_spec).collect(),
            postselect: circuit.rule().labels().to_vec(),
            target: Some(target),
        }
    }
}

impl Element {
    fn to_spec(&self) -> ElementSpec {
        match self {
            Element::Bs50 { inputs, outputs } => ElementSpec::Bs50 { inputs: inputs.clone(), outputs: outputs.clone() },
            Element::Pbs { inputs, outputs } => ElementSpec::Pbs { inputs: inputs.clone(), outputs: outputs.clone() },
            Element::Hwp { mode, angle_deg } => ElementSpec::hwp(mode, *angle_deg),
            Element::Phase { mode, polarization, phase_rad } => {
                ElementSpec::phase(ModeId::new(mode.clone(), (*polarization).into()), *phase_rad)
            }
        }
    }

    fn from_spec(spec: &ElementSpec) -> Self {
        match spec {
            ElementSpec::Bs50 { inputs, outputs } => Element::Bs50 { inputs: inputs.clone(), outputs: outputs.clone() },
            ElementSpec::Pbs { inputs, outputs } => Element::Pbs { inputs: inputs.clone(), outputs: outputs.clone() },
            ElementSpec::Hwp { spatial, angle_deg } => Element::Hwp { mode: spatial.clone(), angle_deg: *angle_deg },
            ElementSpec::Phase { mode, phase_rad } => Element::Phase {
                mode: mode.spatial.clone(),
                polarization: mode.polarization.into(),
                phase_rad: *phase_rad,
            },
        }
    }
}

fn target_from_spec(spec: &TargetSpec, registry: &Arc<ModeRegistry>) -> Result<Target, FileError> {
    let (modes, expected) = match spec {
        TargetSpec::Ghz { modes, .. } => (modes, None),
        TargetSpec::BellPsiMinus { modes } => (modes, Some(2)),
    };
    for (i, l) in modes.iter().enumerate() {
        if !registry.contains_spatial(l) {
            return Err(FileError::at(format!("target.modes[{i}]"), format!("undeclared spatial mode `{l}`")));
        }
    }
    match expected {
        Some(k) if modes.len() != k => {
            return Err(FileError::at("target.modes", format!("expected {k} modes, got {}", modes.len())))
        }
        None if modes.len() < 2 => return Err(FileError::at("target.modes", "a GHZ target needs at least 2 modes")),
        _ => {}
    }
    let encoding = QubitEncoding::new(modes.iter().cloned()).map_err(|e| FileError::at("target.modes", e))?;
    Ok(match spec {
        TargetSpec::Ghz { phase_deg, .. } => {
            if phase_deg.is_some_and(|p| !p.is_finite()) {
                return Err(FileError::at("target.phase_deg", "must be finite"));
            }
            Target::Ghz { encoding, phase: phase_deg.map(f64::to_radians) }
        }
        TargetSpec::BellPsiMinus { .. } => Target::BellPsiMinus { encoding },
    })
}

// serde_json appends " at line L column C"; the position is reported separately
fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(idx) => s[..idx].to_string(),
        None => s,
    }
}
