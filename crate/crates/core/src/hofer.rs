//! Hofer energy of a sampled Hamiltonian path and the energy threshold gate.
//!
//! The norm of a sampled representative bounds the norm of its homotopy
//! class from above; no infimum over representatives is attempted.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::omega::{Exponent, OmegaParseError};

pub const DEFAULT_SNAP_DENOMINATOR: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HoferError {
    #[error("time grid is empty")]
    EmptyGrid,
    #[error("{times} times but {rows} rows of values")]
    LengthMismatch { times: usize, rows: usize },
    #[error("time grid is not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("time grid must span [0, 1], got [{first}, {last}]")]
    DoesNotSpan { first: f64, last: f64 },
    #[error("no spatial samples at time index {0}")]
    NoSamples(usize),
    #[error("non-finite sample at time index {0}")]
    NonFinite(usize),
    #[error("threshold must be positive, got {0}")]
    NonPositiveThreshold(String),
}

/// `values[i]` holds `H(times[i], x)` over the spatial sample set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledHamiltonian {
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl SampledHamiltonian {
    pub fn validate(&self) -> Result<(), HoferError> {
        if self.times.is_empty() {
            return Err(HoferError::EmptyGrid);
        }
        if self.times.len() != self.values.len() {
            return Err(HoferError::LengthMismatch {
                times: self.times.len(),
                rows: self.values.len(),
            });
        }
        if let Some(i) = (1..self.times.len()).find(|&i| self.times[i] <= self.times[i - 1]) {
            return Err(HoferError::NotIncreasing(i));
        }
        let (first, last) = (self.times[0], self.times[self.times.len() - 1]);
        if first != 0.0 || last != 1.0 {
            return Err(HoferError::DoesNotSpan { first, last });
        }
        for (i, row) in self.values.iter().enumerate() {
            if row.is_empty() {
                return Err(HoferError::NoSamples(i));
            }
            if self.times[i].is_nan() || row.iter().any(|v| !v.is_finite()) {
                return Err(HoferError::NonFinite(i));
            }
        }
        Ok(())
    }

    /// Samples `f(t, x)` on `n_times` uniform times and the given points.
    pub fn sample(n_times: usize, xs: &[f64], f: impl Fn(f64, f64) -> f64) -> Self {
        let times: Vec<f64> = (0..n_times).map(|i| i as f64 / (n_times - 1) as f64).collect();
        let values = times.iter().map(|&t| xs.iter().map(|&x| f(t, x)).collect()).collect();
        Self { times, values }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    Trapezoid,
    /// Composite Simpson on uniform grids; an odd interval count closes
    /// with a three-eighths panel.
    Simpson,
    /// Simpson when the grid is uniform with at least two intervals,
    /// trapezoid otherwise.
    #[default]
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HoferNorm {
    /// `∫ (max H_t − min H_t) dt`.
    pub norm: f64,
    /// `∫ max H_t dt`.
    pub plus: f64,
    /// `−∫ min H_t dt`.
    pub minus: f64,
    /// `plus_exact + minus_exact`.
    pub norm_exact: Exponent,
    pub plus_exact: Exponent,
    pub minus_exact: Exponent,
    pub rule: Quadrature,
}

fn is_uniform(times: &[f64]) -> bool {
    let h = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    times.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h)
}

fn trapezoid(times: &[f64], ys: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(ys.windows(2))
        .map(|(t, y)| 0.5 * (t[1] - t[0]) * (y[0] + y[1]))
        .sum()
}

fn simpson(times: &[f64], ys: &[f64]) -> f64 {
    let n = times.len() - 1;
    let h = (times[n] - times[0]) / n as f64;
    let simpson_end = if n.is_multiple_of(2) { n } else { n - 3 };
    let mut acc = 0.0;
    for i in (0..simpson_end).step_by(2) {
        acc += h / 3.0 * (ys[i] + 4.0 * ys[i + 1] + ys[i + 2]);
    }
    if simpson_end < n {
        let i = simpson_end;
        acc += 3.0 * h / 8.0 * (ys[i] + 3.0 * ys[i + 1] + 3.0 * ys[i + 2] + ys[i + 3]);
    }
    acc
}

fn integrate(times: &[f64], ys: &[f64], rule: Quadrature) -> f64 {
    match rule {
        Quadrature::Trapezoid => trapezoid(times, ys),
        Quadrature::Simpson => simpson(times, ys),
        Quadrature::Auto => unreachable!("resolved before integration"),
    }
}

fn resolve(times: &[f64], rule: Quadrature) -> Quadrature {
    let simpson_ok = times.len() >= 3 && is_uniform(times);
    match rule {
        Quadrature::Auto if simpson_ok => Quadrature::Simpson,
        Quadrature::Auto => Quadrature::Trapezoid,
        Quadrature::Simpson if !simpson_ok => Quadrature::Trapezoid,
        r => r,
    }
}

pub fn hofer_norm(h: &SampledHamiltonian, rule: Quadrature, snap_denominator: u64) -> Result<HoferNorm, HoferError> {
    h.validate()?;
    let maxes: Vec<f64> = h
        .values
        .iter()
        .map(|r| r.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let mins: Vec<f64> = h
        .values
        .iter()
        .map(|r| r.iter().copied().fold(f64::INFINITY, f64::min))
        .collect();
    let osc: Vec<f64> = maxes.iter().zip(&mins).map(|(a, b)| a - b).collect();
    if h.times.len() == 1 {
        // a single instant carries no time measure
        let z = Exponent::zero();
        return Ok(HoferNorm {
            norm: 0.0,
            plus: 0.0,
            minus: 0.0,
            norm_exact: z.clone(),
            plus_exact: z.clone(),
            minus_exact: z,
            rule: Quadrature::Trapezoid,
        });
    }
    let rule = resolve(&h.times, rule);
    let norm = integrate(&h.times, &osc, rule);
    let plus = integrate(&h.times, &maxes, rule);
    let neg_mins: Vec<f64> = mins.iter().map(|m| -m).collect();
    let minus = integrate(&h.times, &neg_mins, rule);
    let snap = |v: f64| Exponent::snap(v, snap_denominator).expect("finite samples give finite integrals");
    let (plus_exact, minus_exact) = (snap(plus), snap(minus));
    let norm_exact = &plus_exact + &minus_exact;
    Ok(HoferNorm {
        norm,
        plus,
        minus,
        norm_exact,
        plus_exact,
        minus_exact,
        rule,
    })
}

/// A positive rational or infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Threshold {
    Finite(Exponent),
    Infinite,
}

impl Threshold {
    pub fn positive(value: Exponent) -> Result<Self, HoferError> {
        if !value.is_positive() {
            return Err(HoferError::NonPositiveThreshold(value.to_string()));
        }
        Ok(Threshold::Finite(value))
    }
}

impl PartialOrd for Threshold {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Threshold {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Threshold::Infinite, Threshold::Infinite) => Ordering::Equal,
            (Threshold::Infinite, _) => Ordering::Greater,
            (_, Threshold::Infinite) => Ordering::Less,
            (Threshold::Finite(a), Threshold::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(e) => write!(f, "{e}"),
            Threshold::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Threshold {
    type Err = OmegaParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "infinity" | "∞" => Ok(Threshold::Infinite),
            _ => Ok(Threshold::Finite(s.parse()?)),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Threshold {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Energy thresholds: the minimal sphere and disc energies, and the
/// generator of the disc period group for a rational Lagrangian.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaThresholds {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_s: Option<Threshold>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_l: Option<Threshold>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Exponent>,
}

impl SigmaThresholds {
    pub fn validate(&self) -> Result<(), HoferError> {
        for t in [&self.sigma_s, &self.sigma_l].into_iter().flatten() {
            if let Threshold::Finite(e) = t {
                Threshold::positive(e.clone())?;
            }
        }
        if let Some(e) = &self.eta {
            Threshold::positive(e.clone())?;
        }
        Ok(())
    }

    /// The effective threshold: `min(σ_S, σ_L)` over the given values;
    /// `η` bounds both from below, so it can only raise the threshold.
    /// Nothing given means no gate can pass.
    pub fn threshold(&self) -> Option<Threshold> {
        let sigma = [&self.sigma_s, &self.sigma_l].into_iter().flatten().min().cloned();
        let eta = self.eta.clone().map(Threshold::Finite);
        match (sigma, eta) {
            (Some(s), Some(e)) => Some(s.max(e)),
            (s, e) => s.or(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateResult {
    pub pass: bool,
    pub norm: Exponent,
    pub threshold: Option<Threshold>,
}

/// Passes iff `norm` is strictly below the effective threshold.
pub fn sigma_gate(norm: &Exponent, s: &SigmaThresholds) -> Result<GateResult, HoferError> {
    s.validate()?;
    let threshold = s.threshold();
    let pass = match &threshold {
        Some(t) => Threshold::Finite(norm.clone()) < *t,
        None => false,
    };
    Ok(GateResult {
        pass,
        norm: norm.clone(),
        threshold,
    })
}
