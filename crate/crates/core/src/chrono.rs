//! Divergence times from lexical distances.
//!
//! Times follow `T = -ln(1 - D) / (2 * epsilon)`, where `epsilon` is the
//! replacement rate per unit time. `epsilon` is either given directly or fixed
//! by one historically dated language pair.

use thiserror::Error;

use crate::lexstat::DistanceMatrix;
use crate::matrix::{pairs, Pairwise};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChronoError {
    #[error("distance between {0:?} and {1:?} is saturated (D = 1), time is infinite")]
    SaturatedDistance(String, String),
    #[error("distance between {0:?} and {1:?} is zero, cannot calibrate")]
    ZeroDistance(String, String),
    #[error("rate must be finite and positive, got {0}")]
    InvalidRate(f64),
    #[error("known time must be finite and positive, got {0}")]
    InvalidTime(f64),
    #[error("unknown language {0:?}")]
    UnknownLanguage(String),
}

/// Pairwise divergence times; same layout as the source distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeMatrix {
    labels: Vec<String>,
    entries: Vec<f64>,
}

impl Pairwise for TimeMatrix {
    fn labels(&self) -> &[String] {
        &self.labels
    }

    fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// A language pair with an attested divergence time.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationPoint {
    pub first: String,
    pub second: String,
    pub known_time: f64,
}

impl CalibrationPoint {
    pub fn new(first: impl Into<String>, second: impl Into<String>, known_time: f64) -> Self {
        Self {
            first: first.into(),
            second: second.into(),
            known_time,
        }
    }
}

fn check_rate(epsilon: f64) -> Result<(), ChronoError> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(())
    } else {
        Err(ChronoError::InvalidRate(epsilon))
    }
}

/// `-ln(1 - d)`; `ln_1p` keeps small distances accurate.
fn log_decay(d: f64) -> f64 {
    -(-d).ln_1p()
}

pub fn divergence_time(m: &DistanceMatrix, epsilon: f64) -> Result<TimeMatrix, ChronoError> {
    check_rate(epsilon)?;
    let labels = m.labels();
    let entries = pairs(labels.len())
        .zip(m.entries())
        .map(|((i, j), &d)| {
            if d >= 1.0 {
                Err(ChronoError::SaturatedDistance(labels[i].clone(), labels[j].clone()))
            } else {
                Ok(log_decay(d) / (2.0 * epsilon))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TimeMatrix {
        labels: labels.to_vec(),
        entries,
    })
}

/// The rate that maps the calibration pair's distance onto its known time.
pub fn calibrate(m: &DistanceMatrix, p: &CalibrationPoint) -> Result<f64, ChronoError> {
    if !(p.known_time.is_finite() && p.known_time > 0.0) {
        return Err(ChronoError::InvalidTime(p.known_time));
    }
    let index = |id: &str| {
        m.label_index(id)
            .ok_or_else(|| ChronoError::UnknownLanguage(id.to_owned()))
    };
    let (i, j) = (index(&p.first)?, index(&p.second)?);
    let d = m.get(i, j);
    if d >= 1.0 {
        return Err(ChronoError::SaturatedDistance(p.first.clone(), p.second.clone()));
    }
    if d <= 0.0 {
        return Err(ChronoError::ZeroDistance(p.first.clone(), p.second.clone()));
    }
    Ok(log_decay(d) / (2.0 * p.known_time))
}
