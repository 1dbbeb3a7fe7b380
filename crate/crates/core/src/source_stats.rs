//! Photon-source statistics: Poissonian emission, the bad/good event ratios
//! for faint lasers and heralded down-conversion, and GHZ production rates.

use crate::error::{Error, Result};

fn check_positive(name: &str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::InvalidArgument(format!("{name} must be finite and positive, got {value}")));
    }
    Ok(())
}

/// `p(n) = Wⁿ e^{−W} / n!`
pub fn poisson_pmf(n: u32, w: f64) -> Result<f64> {
    check_positive("W", w)?;
    if n <= 170 && w < 700.0 {
        let mut term = (-w).exp();
        for k in 1..=n {
            term *= w / k as f64;
        }
        Ok(term)
    } else {
        let ln_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
        Ok((n as f64 * w.ln() - w - ln_fact).exp())
    }
}

/// Two faint Poissonian sources on a beamsplitter: pair-from-one-source
/// events `2·p(2)` over one-from-each events `p(1)²`. Equals `e^W`.
pub fn faint_laser_bad_good_ratio(w: f64) -> Result<f64> {
    let p1 = poisson_pmf(1, w)?;
    let p2 = poisson_pmf(2, w)?;
    Ok(2.0 * p2 / (p1 * p1))
}

/// Heralded down-conversion: undesired/desired is `W` to leading order.
pub fn heralded_spdc_bad_good_ratio(w: f64) -> Result<f64> {
    check_positive("W", w)?;
    Ok(w)
}

/// `good / (good + bad) = 1 / (1 + ratio)`.
pub fn purity(bad_good_ratio: f64) -> f64 {
    1.0 / (1.0 + bad_good_ratio)
}

/// Probability of exactly one pair in each of `pairs` sources, `(W e^{−W})^N`.
pub fn n_pair_probability(w: f64, pairs: u32) -> Result<f64> {
    if pairs == 0 {
        return Err(Error::InvalidArgument("at least one pair is required".into()));
    }
    Ok(poisson_pmf(1, w)?.powi(pairs as i32))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceParams {
    /// Mean pairs per crystal per pulse.
    pub w: f64,
    /// Pump repetition rate in Hz.
    pub rep_rate: f64,
    /// Post-selection success probability of the downstream scheme.
    pub scheme_success: f64,
}

impl SourceParams {
    pub fn new(w: f64, rep_rate: f64, scheme_success: f64) -> Result<Self> {
        check_positive("W", w)?;
        check_positive("repetition rate", rep_rate)?;
        if !(scheme_success > 0.0 && scheme_success <= 1.0) {
            return Err(Error::InvalidArgument(format!("scheme success must lie in (0, 1], got {scheme_success}")));
        }
        Ok(Self { w, rep_rate, scheme_success })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductionRate {
    /// Pulses yielding one pair in each of two crystals, per second.
    pub double_pair_rate: f64,
    /// Post-selected GHZ states per second.
    pub ghz_rate: f64,
}

pub fn ghz_production_rate(params: &SourceParams) -> Result<ProductionRate> {
    let double_pair_rate = params.rep_rate * n_pair_probability(params.w, 2)?;
    Ok(ProductionRate { double_pair_rate, ghz_rate: double_pair_rate * params.scheme_success })
}
