//! Fitting the model's free constants and mapping power to accuracy.
//!
//! The fitted constants are one EMF per model, one `λ` per demonstration
//! representation, a shared output resistance `R_0`, one domain resistance
//! per task family and a linear power→accuracy calibration. Joint scaling of
//! every EMF by `c` scales all powers by `c²` and leaves every correlation
//! unchanged, so one reference ("gauge") model is pinned to `ε = 1`.

mod binning;
mod fit;
pub mod search;

use alloc::collections::BTreeMap;
use alloc::string::String;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::strategy::Multipliers;
use crate::{Error, Result};

pub use binning::{bin_by_power, bin_by_power_counted, BinSpec, Binned, PowerBin};
pub use fit::{
    fit, fit_direct_answer_multipliers, predict, run_field, run_powers, summarize, task_base, Demonstrations,
    DirectAnswerFit, FitOptions, FitReport, Prediction, RunPower, ValidationSummary,
};

/// Linear power→accuracy map, clamped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Calibration {
    pub a: f64,
    pub b: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration { a: 1.0, b: 0.0 }
    }
}

impl Calibration {
    pub fn accuracy(&self, power: f64) -> f64 {
        (self.a * power + self.b).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct FitParams {
    pub r0: f64,
    pub emf_model: BTreeMap<String, f64>,
    pub lambda: BTreeMap<String, f64>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub domain_constants: BTreeMap<String, f64>,
    pub calib: Calibration,
    pub gauge_model: String,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub direct_answer: Option<Multipliers>,
}

impl Default for FitParams {
    fn default() -> Self {
        FitParams {
            r0: 1.0,
            emf_model: BTreeMap::new(),
            lambda: BTreeMap::new(),
            domain_constants: BTreeMap::new(),
            calib: Calibration::default(),
            gauge_model: String::new(),
            direct_answer: None,
        }
    }
}

impl FitParams {
    pub fn emf(&self, model: &str) -> Result<f64> {
        self.emf_model
            .get(model)
            .copied()
            .ok_or_else(|| Error::MissingParam(alloc::format!("no EMF fitted for model {model:?}")))
    }

    pub fn lambda_for(&self, representation: &str) -> Result<f64> {
        self.lambda
            .get(representation)
            .copied()
            .ok_or_else(|| Error::MissingParam(alloc::format!("no lambda fitted for representation {representation:?}")))
    }

    pub fn validate(&self) -> Result<()> {
        if !self.r0.is_finite() || self.r0 <= 0.0 {
            return Err(Error::invalid(alloc::format!("r0 must be positive, got {}", self.r0)));
        }
        match self.emf_model.get(&self.gauge_model) {
            Some(&e) if e == 1.0 => {}
            Some(&e) => {
                return Err(Error::invalid(alloc::format!(
                    "gauge model {} must have EMF exactly 1, got {e}",
                    self.gauge_model
                )))
            }
            None => return Err(Error::invalid(alloc::format!("gauge model {:?} has no EMF entry", self.gauge_model))),
        }
        for (m, &e) in &self.emf_model {
            if !e.is_finite() || e < 0.0 {
                return Err(Error::invalid(alloc::format!("EMF of {m} must be non-negative, got {e}")));
            }
        }
        for (r, &l) in &self.lambda {
            if !l.is_finite() || l <= 0.0 {
                return Err(Error::invalid(alloc::format!("lambda of {r} must be positive, got {l}")));
            }
        }
        for (f, &d) in &self.domain_constants {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::invalid(alloc::format!("domain constant of {f} must be non-negative, got {d}")));
            }
        }
        if !self.calib.a.is_finite() || !self.calib.b.is_finite() {
            return Err(Error::invalid("calibration coefficients must be finite"));
        }
        Ok(())
    }
}

/// Evaluates `f(0..n)`, in parallel when the `parallel` feature is on.
/// Output order always follows the index.
pub(crate) fn par_map<T, F>(n: usize, f: F) -> alloc::vec::Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
