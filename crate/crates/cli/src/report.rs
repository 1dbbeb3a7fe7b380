//! Report types and their json/csv/text renderings. Struct fields are declared
//! in alphabetical order so serialized keys come out sorted.

use std::fmt::Write as _;

use linopt_core::schemes::SchemeResult;
use linopt_core::FockState;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::value::RawValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Fixed 17-significant-digit rendering, valid as a JSON number.
fn fixed(x: f64) -> Box<RawValue> {
    RawValue::from_string(format!("{:.16e}", x)).expect("scientific notation is valid JSON")
}

// -0.0 would otherwise print as "-0.0"
fn clean(x: f64) -> f64 {
    x + 0.0
}

#[derive(Debug, Serialize)]
pub struct Term {
    pub im: Box<RawValue>,
    pub occupation: String,
    pub re: Box<RawValue>,
}

impl Term {
    fn new(occupation: String, amp: Complex64) -> Self {
        Self { im: fixed(amp.im), occupation, re: fixed(amp.re) }
    }
}

pub fn terms_of(state: &FockState) -> Vec<Term> {
    let registry = state.registry();
    state.terms().map(|(occ, amp)| Term::new(occ.describe(registry), *amp)).collect()
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub fidelity: Option<f64>,
    pub fitted_phase_deg: Option<f64>,
    pub fixed_phase_fidelity: Option<f64>,
    pub n: usize,
    pub success_probability: f64,
    pub terms: Vec<Term>,
}

impl RunReport {
    pub fn new(result: &SchemeResult, has_target: bool) -> Self {
        let scored = has_target && !result.post_state.is_zero();
        Self {
            fidelity: scored.then_some(result.target_fidelity),
            fitted_phase_deg: result.fitted_phase.filter(|_| scored).map(|p| clean(p.to_degrees())),
            fixed_phase_fidelity: scored.then_some(result.fixed_phase_fidelity),
            n: result.n,
            success_probability: result.success_probability,
            terms: terms_of(&result.post_state),
        }
    }

    fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.n, self.success_probability, opt(self.fidelity), opt(self.fitted_phase_deg))
    }
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub halving_verified: bool,
    pub n_max: usize,
    pub rows: Vec<RunReport>,
}

#[derive(Debug, Serialize)]
pub struct PlaneReport {
    pub norm_squared: f64,
    pub plane: String,
    pub terms: Vec<Term>,
}

#[derive(Debug, Serialize)]
pub struct PlanesReport {
    pub planes: Vec<PlaneReport>,
    pub scheme: String,
}

#[derive(Debug, Serialize)]
pub struct RatesReport {
    pub double_pair_rate: f64,
    pub faint_laser_bad_good_ratio: f64,
    pub faint_laser_purity: f64,
    pub ghz_rate: f64,
    pub heralded_bad_good_ratio: f64,
    pub n: usize,
    pub purity: f64,
    pub rep_rate: f64,
    pub success_probability: f64,
    pub w: f64,
}

const CSV_HEADER: &str = "n,success_probability,fidelity,fitted_phase_deg";

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

fn text_terms(out: &mut String, terms: &[Term]) {
    for t in terms {
        let _ = writeln!(out, "  {:>24} {:>24}  {}", t.re.get(), t.im.get(), t.occupation);
    }
}

fn text_value(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
}

pub trait Render {
    fn render(&self, format: Format) -> String;
}

impl Render for RunReport {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => format!("{CSV_HEADER}\n{}\n", self.csv_row()),
            Format::Text => {
                let mut out = String::new();
                let _ = writeln!(out, "photons              {}", self.n);
                let _ = writeln!(out, "success probability  {}", self.success_probability);
                let _ = writeln!(out, "fidelity             {}", text_value(self.fidelity));
                let _ = writeln!(out, "fixed-phase fidelity {}", text_value(self.fixed_phase_fidelity));
                let _ = writeln!(out, "fitted phase (deg)   {}", text_value(self.fitted_phase_deg));
                let _ = writeln!(out, "post-selected state ({} terms):", self.terms.len());
                text_terms(&mut out, &self.terms);
                out
            }
        }
    }
}

impl Render for SweepReport {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => {
                let mut out = format!("{CSV_HEADER}\n");
                for row in &self.rows {
                    out.push_str(&row.csv_row());
                    out.push('\n');
                }
                out
            }
            Format::Text => {
                let mut out =
                    format!("{:>3} {:>22} {:>22} {:>16}\n", "n", "success_probability", "fidelity", "fitted_phase_deg");
                for r in &self.rows {
                    let _ = writeln!(
                        out,
                        "{:>3} {:>22} {:>22} {:>16}",
                        r.n,
                        r.success_probability,
                        text_value(r.fidelity),
                        text_value(r.fitted_phase_deg)
                    );
                }
                let _ = writeln!(out, "halving verified: {}", self.halving_verified);
                out
            }
        }
    }
}

impl Render for PlanesReport {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => {
                let mut out = String::from("plane,occupation,re,im\n");
                for p in &self.planes {
                    for t in &p.terms {
                        let _ = writeln!(out, "{},{},{},{}", p.plane, t.occupation, t.re.get(), t.im.get());
                    }
                }
                out
            }
            Format::Text => {
                let mut out = String::new();
                for p in &self.planes {
                    let _ = writeln!(out, "{} ({} terms, norm² {}):", p.plane, p.terms.len(), p.norm_squared);
                    text_terms(&mut out, &p.terms);
                }
                out
            }
        }
    }
}

impl Render for RatesReport {
    fn render(&self, format: Format) -> String {
        let fields: [(&str, String); 10] = [
            ("double_pair_rate", self.double_pair_rate.to_string()),
            ("faint_laser_bad_good_ratio", self.faint_laser_bad_good_ratio.to_string()),
            ("faint_laser_purity", self.faint_laser_purity.to_string()),
            ("ghz_rate", self.ghz_rate.to_string()),
            ("heralded_bad_good_ratio", self.heralded_bad_good_ratio.to_string()),
            ("n", self.n.to_string()),
            ("purity", self.purity.to_string()),
            ("rep_rate", self.rep_rate.to_string()),
            ("success_probability", self.success_probability.to_string()),
            ("w", self.w.to_string()),
        ];
        match format {
            Format::Json => json(self),
            Format::Csv => {
                let header: Vec<&str> = fields.iter().map(|f| f.0).collect();
                let row: Vec<&str> = fields.iter().map(|f| f.1.as_str()).collect();
                format!("{}\n{}\n", header.join(","), row.join(","))
            }
            Format::Text => fields.iter().map(|(k, v)| format!("{k:<27} {v}\n")).collect(),
        }
    }
}
