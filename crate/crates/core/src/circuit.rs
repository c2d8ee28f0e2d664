//! Series/parallel resistor networks driven by lumped EMF sources.
//!
//! Quantities are dimensionless. The output (load) resistor `R_0` is kept out
//! of the equivalent resistance and reported on its own because the power law
//! uses it twice: `P = (ε_model + ε_ITL)² · R_0 / (R_ITR + R_0)²`.

use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// What a resistor stands for in the reasoning decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ResistorKind {
    Plan,
    Operation,
    Domain,
    Calculate,
    /// The load `R_0`.
    Output,
    /// Aggregation / majority-vote resistance `R_S`.
    Verification,
    /// Meta-verification resistance checking the verifiers.
    Meta,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Resistor {
    pub kind: ResistorKind,
    pub value: f64,
}

impl Resistor {
    pub fn new(kind: ResistorKind, value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::invalid(alloc::format!(
                "{kind:?} resistor must be finite and non-negative, got {value}"
            )));
        }
        Ok(Resistor { kind, value })
    }

    pub fn output(r0: f64) -> Result<Self> {
        Self::new(ResistorKind::Output, r0)
    }
}

/// Per-sub-task difficulty of one reasoning task.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ResistanceBreakdown {
    pub plan: f64,
    pub operation: f64,
    pub domain: f64,
    pub calculate: f64,
}

impl ResistanceBreakdown {
    pub fn new(plan: f64, operation: f64, domain: f64, calculate: f64) -> Result<Self> {
        let b = ResistanceBreakdown { plan, operation, domain, calculate };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.components() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(alloc::format!(
                    "resistance component {name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn components(&self) -> [(&'static str, f64); 4] {
        [
            ("plan", self.plan),
            ("operation", self.operation),
            ("domain", self.domain),
            ("calculate", self.calculate),
        ]
    }

    /// The breakdown as typed resistors, in plan/operation/domain/calculate order.
    pub fn resistors(&self) -> [Resistor; 4] {
        [
            Resistor { kind: ResistorKind::Plan, value: self.plan },
            Resistor { kind: ResistorKind::Operation, value: self.operation },
            Resistor { kind: ResistorKind::Domain, value: self.domain },
            Resistor { kind: ResistorKind::Calculate, value: self.calculate },
        ]
    }

    pub fn total(&self) -> f64 {
        total_resistance(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EmfKind {
    /// Intrinsic model capability, never negative.
    Model,
    /// Induced by in-context demonstrations; negative when they are anti-aligned.
    Itl,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EmfSource {
    pub label: String,
    pub kind: EmfKind,
    pub value: f64,
}

impl EmfSource {
    pub fn model(label: impl Into<String>, value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::invalid(alloc::format!(
                "model EMF must be finite and non-negative, got {value}"
            )));
        }
        Ok(EmfSource { label: label.into(), kind: EmfKind::Model, value })
    }

    pub fn itl(label: impl Into<String>, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::invalid("ITL EMF must be finite"));
        }
        Ok(EmfSource { label: label.into(), kind: EmfKind::Itl, value })
    }
}

/// Parallel reasoning paths merged through an optional aggregation resistor.
///
/// Each listed branch stands for `multiplicity` identical copies of itself,
/// so `n` identical samples are one branch with multiplicity `n`. The
/// multiplicity may be fractional, which is how correlated samples are priced
/// as fewer effective ones.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ParallelGroup {
    pub branches: Vec<Vec<Resistor>>,
    pub aggregation: Option<Resistor>,
    pub multiplicity: f64,
}

impl ParallelGroup {
    pub fn new(branches: Vec<Vec<Resistor>>, aggregation: Option<Resistor>) -> Self {
        ParallelGroup { branches, aggregation, multiplicity: 1.0 }
    }

    pub fn replicated(branch: Vec<Resistor>, copies: f64, aggregation: Option<Resistor>) -> Self {
        ParallelGroup { branches: alloc::vec![branch], aggregation, multiplicity: copies }
    }

    fn reduce(&self) -> Result<f64> {
        if self.branches.is_empty() {
            return Err(Error::invalid("parallel group has no branches"));
        }
        if !self.multiplicity.is_finite() || self.multiplicity <= 0.0 {
            return Err(Error::invalid(alloc::format!(
                "parallel multiplicity must be positive, got {}",
                self.multiplicity
            )));
        }
        let mut branch_values = Vec::with_capacity(self.branches.len());
        for branch in &self.branches {
            if branch.is_empty() {
                return Err(Error::invalid("parallel branch is empty"));
            }
            let values: Vec<f64> = branch.iter().map(|r| r.value).collect();
            branch_values.push(series(&values)?);
        }
        let conductance: f64 = branch_values
            .iter()
            .map(|&v| if v > 0.0 { 1.0 / v } else { f64::INFINITY })
            .sum::<f64>()
            * self.multiplicity;
        if !conductance.is_finite() {
            return Err(Error::invalid("parallel branch with zero resistance short-circuits the group"));
        }
        let agg = match &self.aggregation {
            Some(r) => checked(r)?,
            None => 0.0,
        };
        Ok(1.0 / conductance + agg)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Element {
    Single(Resistor),
    Parallel(ParallelGroup),
}

/// A series chain of elements driven by lumped EMF sources.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CircuitNetwork {
    pub emfs: Vec<EmfSource>,
    pub elements: Vec<Element>,
}

/// Result of [`reduce_network`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reduction {
    /// Everything except the output resistor.
    pub equivalent_resistance: f64,
    pub r0: f64,
    pub total_emf: f64,
}

impl Reduction {
    pub fn current(&self) -> Result<f64> {
        current_from_total(self.total_emf, self.equivalent_resistance, self.r0)
    }

    pub fn power(&self) -> Result<f64> {
        power_from_total(self.total_emf, self.equivalent_resistance, self.r0)
    }
}

impl CircuitNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_emf(mut self, emf: EmfSource) -> Self {
        self.emfs.push(emf);
        self
    }

    pub fn push(&mut self, element: Element) -> &mut Self {
        self.elements.push(element);
        self
    }

    pub fn push_resistor(&mut self, r: Resistor) -> &mut Self {
        self.push(Element::Single(r))
    }

    pub fn reduce(&self) -> Result<Reduction> {
        reduce_network(self)
    }
}

fn checked(r: &Resistor) -> Result<f64> {
    if !r.value.is_finite() || r.value < 0.0 {
        return Err(Error::invalid(alloc::format!("{:?} resistor has invalid value {}", r.kind, r.value)));
    }
    Ok(r.value)
}

/// Sum of resistances in series.
pub fn series(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid("series of an empty list"));
    }
    let mut total = 0.0;
    for &v in values {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::invalid(alloc::format!("series resistance must be non-negative, got {v}")));
        }
        total += v;
    }
    Ok(total)
}

/// `1 / Σ 1/v`. Zero values are rejected: a zero branch would short the
/// group, and zero resistance is modelled by leaving the resistor out.
pub fn parallel(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid("parallel of an empty list"));
    }
    let mut conductance = 0.0;
    for &v in values {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::invalid(alloc::format!("parallel resistance must be positive, got {v}")));
        }
        conductance += 1.0 / v;
    }
    Ok(1.0 / conductance)
}

/// `R_ITR = plan + operation + domain + calculate`.
pub fn total_resistance(b: &ResistanceBreakdown) -> f64 {
    b.plan + b.operation + b.domain + b.calculate
}

fn check_loop(r_itr: f64, r0: f64) -> Result<()> {
    if !r0.is_finite() || r0 <= 0.0 {
        return Err(Error::invalid(alloc::format!("output resistance must be positive, got {r0}")));
    }
    if !r_itr.is_finite() || r_itr < 0.0 {
        return Err(Error::invalid(alloc::format!("reasoning resistance must be non-negative, got {r_itr}")));
    }
    Ok(())
}

fn current_from_total(emf: f64, r_itr: f64, r0: f64) -> Result<f64> {
    check_loop(r_itr, r0)?;
    Ok(emf / (r_itr + r0))
}

fn power_from_total(emf: f64, r_itr: f64, r0: f64) -> Result<f64> {
    check_loop(r_itr, r0)?;
    let loop_r = r_itr + r0;
    Ok(emf * emf * r0 / (loop_r * loop_r))
}

/// `I = (ε_model + ε_ITL) / (R_ITR + R_0)`.
pub fn circuit_current(e_model: f64, e_itl: f64, r_itr: f64, r0: f64) -> Result<f64> {
    current_from_total(e_model + e_itl, r_itr, r0)
}

/// `P = I² · R_0`, the power dissipated across the output resistor.
pub fn circuit_power(e_model: f64, e_itl: f64, r_itr: f64, r0: f64) -> Result<f64> {
    power_from_total(e_model + e_itl, r_itr, r0)
}

/// Reduces a network to its equivalent resistance, load and total EMF.
///
/// Elements are summed in series; a parallel group contributes the parallel
/// combination of its branch series sums plus its aggregation resistor.
/// Output-kind resistors make up `r0` and are excluded from the equivalent
/// resistance.
pub fn reduce_network(net: &CircuitNetwork) -> Result<Reduction> {
    let mut equivalent = 0.0;
    let mut r0 = 0.0;
    let mut has_output = false;
    for element in &net.elements {
        match element {
            Element::Single(r) => {
                let v = checked(r)?;
                if r.kind == ResistorKind::Output {
                    has_output = true;
                    r0 += v;
                } else {
                    equivalent += v;
                }
            }
            Element::Parallel(group) => {
                if group
                    .branches
                    .iter()
                    .flatten()
                    .chain(group.aggregation.iter())
                    .any(|r| r.kind == ResistorKind::Output)
                {
                    return Err(Error::invalid("output resistor inside a parallel group"));
                }
                equivalent += group.reduce()?;
            }
        }
    }
    if !has_output {
        return Err(Error::invalid("network has no output resistor"));
    }
    if r0 <= 0.0 {
        return Err(Error::invalid("output resistance must be positive"));
    }
    let mut total_emf = 0.0;
    for emf in &net.emfs {
        if !emf.value.is_finite() || (emf.kind == EmfKind::Model && emf.value < 0.0) {
            return Err(Error::invalid(alloc::format!("EMF {} has invalid value {}", emf.label, emf.value)));
        }
        total_emf += emf.value;
    }
    Ok(Reduction { equivalent_resistance: equivalent, r0, total_emf })
}
