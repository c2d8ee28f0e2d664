//! Prompting strategies as circuits.
//!
//! Each strategy rewires the reasoning resistance of a task:
//!
//! | strategy | reasoning part of the circuit |
//! |---|---|
//! | zero-shot chain of thought | `plan + operation + domain + calculate` in series |
//! | direct answer | the same with inflated plan/operation/calculate resistors |
//! | tool usage | calculation resistor removed |
//! | program of thought | calculation and planning resistors removed |
//! | self-consistency | `n` parallel copies, then an aggregation resistor `R_S` |
//! | coverage | `n` parallel copies, no aggregation resistor |
//! | fine-grained self-consistency | per-step parallel blocks, each with its own verifier |
//! | chain of verification | `R_S/(nk) + k·R_meta + R_ITR/n` |
//!
//! [`apply_strategy`] builds the network; the `*_total_resistance` functions
//! are the closed forms the network must reduce to.

use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::calibration::FitParams;
use crate::circuit::{
    self, CircuitNetwork, Element, EmfSource, ParallelGroup, ResistanceBreakdown, Resistor, ResistorKind,
};
use crate::{Error, Result};

/// Resistance inflation when the model answers without a rationale.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Multipliers {
    pub plan: f64,
    pub operation: f64,
    #[cfg_attr(feature = "serde", serde(default = "one"))]
    pub domain: f64,
    pub calculate: f64,
}

#[cfg(feature = "serde")]
fn one() -> f64 {
    1.0
}

impl Default for Multipliers {
    fn default() -> Self {
        Multipliers { plan: 1.1, operation: 1.6, domain: 1.0, calculate: 1.5 }
    }
}

impl Multipliers {
    pub const IDENTITY: Multipliers = Multipliers { plan: 1.0, operation: 1.0, domain: 1.0, calculate: 1.0 };

    pub fn new(plan: f64, operation: f64, calculate: f64) -> Self {
        Multipliers { plan, operation, domain: 1.0, calculate }
    }

    fn validate(&self) -> Result<()> {
        for (name, m) in [("plan", self.plan), ("operation", self.operation), ("calculate", self.calculate)] {
            if !m.is_finite() || m < 1.0 {
                return Err(Error::invalid(alloc::format!("direct-answer {name} multiplier must be >= 1, got {m}")));
            }
        }
        if !self.domain.is_finite() || self.domain <= 0.0 {
            return Err(Error::invalid(alloc::format!("direct-answer domain multiplier must be positive, got {}", self.domain)));
        }
        Ok(())
    }

    pub fn apply(&self, b: &ResistanceBreakdown) -> ResistanceBreakdown {
        ResistanceBreakdown {
            plan: b.plan * self.plan,
            operation: b.operation * self.operation,
            domain: b.domain * self.domain,
            calculate: b.calculate * self.calculate,
        }
    }
}

/// How many independent reasoning paths `n` samples are worth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EffectiveSampleRule {
    #[default]
    Independent,
    /// `max(1, ln n)`: correlated samples repeat each other.
    LogCorrected,
}

impl core::str::FromStr for EffectiveSampleRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "independent" => Ok(EffectiveSampleRule::Independent),
            "log_corrected" | "log" => Ok(EffectiveSampleRule::LogCorrected),
            _ => Err(Error::invalid(alloc::format!("unknown sample rule {s:?}"))),
        }
    }
}

pub fn effective_samples(n: u64, rule: EffectiveSampleRule) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("sample count must be at least 1"));
    }
    Ok(match rule {
        EffectiveSampleRule::Independent => n as f64,
        EffectiveSampleRule::LogCorrected => libm::log(n as f64).max(1.0),
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields))]
pub enum Strategy {
    ZeroShot,
    /// `None` defers to fitted or default multipliers.
    DirectAnswer {
        #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
        multipliers: Option<Multipliers>,
    },
    ToolUsage,
    ProgramOfThought,
    SelfConsistency { n: u64, r_s: f64 },
    Coverage { n: u64 },
    FineGrainedSc { n: u64, step_resistances: Vec<f64>, step_verifications: Vec<f64> },
    ChainOfVerification { n: u64, k: u64, r_s: f64, r_meta: f64 },
}

impl Strategy {
    pub fn tag(&self) -> &'static str {
        match self {
            Strategy::ZeroShot => "zero_shot",
            Strategy::DirectAnswer { .. } => "direct_answer",
            Strategy::ToolUsage => "tool_usage",
            Strategy::ProgramOfThought => "program_of_thought",
            Strategy::SelfConsistency { .. } => "self_consistency",
            Strategy::Coverage { .. } => "coverage",
            Strategy::FineGrainedSc { .. } => "fine_grained_sc",
            Strategy::ChainOfVerification { .. } => "chain_of_verification",
        }
    }

    /// Sample count for strategies that draw several reasoning paths.
    pub fn samples(&self) -> Option<u64> {
        match self {
            Strategy::SelfConsistency { n, .. }
            | Strategy::Coverage { n }
            | Strategy::FineGrainedSc { n, .. }
            | Strategy::ChainOfVerification { n, .. } => Some(*n),
            _ => None,
        }
    }

    /// The same strategy with its sample count replaced; `None` for
    /// single-path strategies.
    pub fn with_samples(&self, samples: u64) -> Option<Strategy> {
        let mut s = self.clone();
        match &mut s {
            Strategy::SelfConsistency { n, .. }
            | Strategy::Coverage { n }
            | Strategy::FineGrainedSc { n, .. }
            | Strategy::ChainOfVerification { n, .. } => *n = samples,
            _ => return None,
        }
        Some(s)
    }
}

/// A strategy applied to one task's resistance breakdown.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct StrategySpec {
    pub strategy: Strategy,
    pub base: ResistanceBreakdown,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::invalid(alloc::format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::invalid(alloc::format!("{name} must be non-negative, got {v}")));
    }
    Ok(())
}

fn at_least_one(name: &str, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid(alloc::format!("{name} must be at least 1")));
    }
    Ok(())
}

impl StrategySpec {
    pub fn new(strategy: Strategy, base: ResistanceBreakdown) -> Result<Self> {
        let spec = StrategySpec { strategy, base };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        match &self.strategy {
            Strategy::ZeroShot | Strategy::ToolUsage | Strategy::ProgramOfThought => {}
            Strategy::DirectAnswer { multipliers } => {
                if let Some(m) = multipliers {
                    m.validate()?;
                }
            }
            Strategy::SelfConsistency { n, r_s } => {
                at_least_one("n", *n)?;
                positive("r_s", *r_s)?;
            }
            Strategy::Coverage { n } => at_least_one("n", *n)?,
            Strategy::FineGrainedSc { n, step_resistances, step_verifications } => {
                at_least_one("n", *n)?;
                if step_resistances.is_empty() || step_resistances.len() != step_verifications.len() {
                    return Err(Error::invalid(alloc::format!(
                        "fine-grained steps need equal, non-empty lists (got {} resistances, {} verifications)",
                        step_resistances.len(),
                        step_verifications.len()
                    )));
                }
                step_resistances.iter().try_for_each(|&r| positive("step resistance", r))?;
                step_verifications.iter().try_for_each(|&s| non_negative("step verification", s))?;
                let sum: f64 = step_resistances.iter().sum();
                let total = self.base.total();
                if (sum - total).abs() > 1e-9 * total.max(1.0) {
                    return Err(Error::invalid(alloc::format!(
                        "step resistances sum to {sum} but the task total is {total}"
                    )));
                }
            }
            Strategy::ChainOfVerification { n, k, r_s, r_meta } => {
                at_least_one("n", *n)?;
                at_least_one("k", *k)?;
                positive("r_s", *r_s)?;
                positive("r_meta", *r_meta)?;
            }
        }
        Ok(())
    }

    /// The breakdown after the strategy's per-component rewiring, with
    /// `fallback` supplying direct-answer multipliers the spec leaves open.
    pub fn effective_base(&self, fallback: Option<&Multipliers>) -> ResistanceBreakdown {
        let b = self.base;
        match &self.strategy {
            Strategy::DirectAnswer { multipliers } => {
                multipliers.as_ref().or(fallback).copied().unwrap_or_default().apply(&b)
            }
            Strategy::ToolUsage => ResistanceBreakdown { calculate: 0.0, ..b },
            Strategy::ProgramOfThought => ResistanceBreakdown { calculate: 0.0, plan: 0.0, ..b },
            _ => b,
        }
    }

    /// Closed-form equivalent resistance of the strategy's reasoning part
    /// (everything except `R_0`).
    pub fn equivalent_resistance(&self, rule: EffectiveSampleRule, fallback: Option<&Multipliers>) -> Result<f64> {
        self.validate()?;
        let total = self.effective_base(fallback).total();
        let parallel_total = |n: u64| -> Result<f64> {
            if total <= 0.0 {
                return Err(Error::invalid("parallel branches need positive reasoning resistance"));
            }
            Ok(total / effective_samples(n, rule)?)
        };
        match &self.strategy {
            Strategy::SelfConsistency { n, r_s } => Ok(r_s + parallel_total(*n)?),
            Strategy::Coverage { n } => parallel_total(*n),
            Strategy::FineGrainedSc { n, step_resistances, step_verifications } => {
                let n_eff = effective_samples(*n, rule)?;
                Ok(step_verifications.iter().sum::<f64>() + step_resistances.iter().map(|r| r / n_eff).sum::<f64>())
            }
            Strategy::ChainOfVerification { n, k, r_s, r_meta } => {
                let n_eff = effective_samples(*n, rule)?;
                let k = *k as f64;
                Ok(r_s / (n_eff * k) + k * r_meta + parallel_total(*n)?)
            }
            _ => Ok(total),
        }
    }

    /// Builds the circuit with sample counts priced under `rule`. The network
    /// has no EMF sources; callers add them.
    pub fn compile(&self, r0: f64, rule: EffectiveSampleRule, fallback: Option<&Multipliers>) -> Result<CircuitNetwork> {
        self.validate()?;
        positive("r0", r0)?;
        let base = self.effective_base(fallback);
        // Zero components are left out rather than wired in at zero ohms.
        let branch: Vec<Resistor> = base.resistors().into_iter().filter(|r| r.value > 0.0).collect();
        let parallel_branch = || -> Result<Vec<Resistor>> {
            if branch.is_empty() {
                return Err(Error::invalid("parallel branches need positive reasoning resistance"));
            }
            Ok(branch.clone())
        };
        let mut net = CircuitNetwork::new();
        match &self.strategy {
            Strategy::ZeroShot | Strategy::DirectAnswer { .. } | Strategy::ToolUsage | Strategy::ProgramOfThought => {
                for r in &branch {
                    net.push_resistor(*r);
                }
            }
            Strategy::SelfConsistency { n, r_s } => {
                let agg = Resistor::new(ResistorKind::Verification, *r_s)?;
                let copies = effective_samples(*n, rule)?;
                net.push(Element::Parallel(ParallelGroup::replicated(parallel_branch()?, copies, Some(agg))));
            }
            Strategy::Coverage { n } => {
                let copies = effective_samples(*n, rule)?;
                net.push(Element::Parallel(ParallelGroup::replicated(parallel_branch()?, copies, None)));
            }
            Strategy::FineGrainedSc { n, step_resistances, step_verifications } => {
                let copies = effective_samples(*n, rule)?;
                for (&r, &s) in step_resistances.iter().zip(step_verifications) {
                    let step = alloc::vec![Resistor::new(ResistorKind::Generic, r)?];
                    let verifier = Resistor::new(ResistorKind::Verification, s)?;
                    net.push(Element::Parallel(ParallelGroup::replicated(step, copies, Some(verifier))));
                }
            }
            Strategy::ChainOfVerification { n, k, r_s, r_meta } => {
                let copies = effective_samples(*n, rule)?;
                net.push(Element::Parallel(ParallelGroup::replicated(parallel_branch()?, copies, None)));
                let verifier = alloc::vec![Resistor::new(ResistorKind::Verification, *r_s)?];
                net.push(Element::Parallel(ParallelGroup::replicated(verifier, copies * *k as f64, None)));
                for _ in 0..*k {
                    net.push_resistor(Resistor::new(ResistorKind::Meta, *r_meta)?);
                }
            }
        }
        net.push_resistor(Resistor::output(r0)?);
        Ok(net)
    }
}

/// The strategy's circuit with independent samples and load `r0`.
pub fn apply_strategy(spec: &StrategySpec, r0: f64) -> Result<CircuitNetwork> {
    spec.compile(r0, EffectiveSampleRule::Independent, None)
}

/// `R_0 + R_S + 1/Σ 1/R_ITR^i` over possibly heterogeneous samples.
pub fn sc_total_resistance(n: usize, r_itr: &[f64], r_s: f64, r0: f64) -> Result<f64> {
    if n == 0 || r_itr.len() != n {
        return Err(Error::invalid(alloc::format!("expected {n} branch resistances, got {}", r_itr.len())));
    }
    non_negative("r_s", r_s)?;
    positive("r0", r0)?;
    Ok(r0 + r_s + circuit::parallel(r_itr)?)
}

/// [`sc_total_resistance`] for `n` identical branches, without materialising them.
pub fn sc_total_resistance_identical(n: u64, r_itr: f64, r_s: f64, r0: f64) -> Result<f64> {
    at_least_one("n", n)?;
    positive("r_itr", r_itr)?;
    non_negative("r_s", r_s)?;
    positive("r0", r0)?;
    Ok(r0 + r_s + r_itr / n as f64)
}

/// Self-consistency with a perfect verifier (`R_S = 0`).
pub fn coverage_total_resistance(n: usize, r_itr: &[f64], r0: f64) -> Result<f64> {
    sc_total_resistance(n, r_itr, 0.0, r0)
}

pub fn coverage_total_resistance_identical(n: u64, r_itr: f64, r0: f64) -> Result<f64> {
    sc_total_resistance_identical(n, r_itr, 0.0, r0)
}

/// `R_0 + Σ_j R_j^S + Σ_j R_j / n` for per-step voting over `n` identical samples.
pub fn fine_grained_total_resistance(n: u64, step_r: &[f64], step_s: &[f64], r0: f64) -> Result<f64> {
    at_least_one("n", n)?;
    if step_r.is_empty() || step_r.len() != step_s.len() {
        return Err(Error::invalid(alloc::format!(
            "step lists differ in length ({} vs {})",
            step_r.len(),
            step_s.len()
        )));
    }
    positive("r0", r0)?;
    step_s.iter().try_for_each(|&s| non_negative("step verification", s))?;
    let mut total = r0 + step_s.iter().sum::<f64>();
    for &r in step_r {
        positive("step resistance", r)?;
        total += r / n as f64;
    }
    Ok(total)
}

/// Per-step voting where step `j` has its own, possibly heterogeneous, branches.
pub fn fine_grained_total_resistance_branches(step_branches: &[Vec<f64>], step_s: &[f64], r0: f64) -> Result<f64> {
    if step_branches.is_empty() || step_branches.len() != step_s.len() {
        return Err(Error::invalid("step lists differ in length"));
    }
    positive("r0", r0)?;
    let mut total = r0;
    for (branches, &s) in step_branches.iter().zip(step_s) {
        non_negative("step verification", s)?;
        total += s + circuit::parallel(branches)?;
    }
    Ok(total)
}

/// `R_0 + R_S/(nk) + k·R_meta + R_ITR/n`.
pub fn cov_total_resistance(n: u64, k: u64, r_s: f64, r_meta: f64, r_itr: f64, r0: f64) -> Result<f64> {
    at_least_one("n", n)?;
    at_least_one("k", k)?;
    positive("r_s", r_s)?;
    positive("r_meta", r_meta)?;
    positive("r_itr", r_itr)?;
    positive("r0", r0)?;
    let (n, k) = (n as f64, k as f64);
    Ok(r0 + r_s / (n * k) + k * r_meta + r_itr / n)
}

/// Output power of `spec` for `model` under fitted `params`.
///
/// Sample counts are replaced by [`effective_samples`] before the circuit is
/// reduced.
pub fn strategy_power(
    spec: &StrategySpec,
    params: &FitParams,
    model: &str,
    e_itl: f64,
    rule: EffectiveSampleRule,
) -> Result<f64> {
    let e_model = params.emf(model)?;
    let net = spec
        .compile(params.r0, rule, params.direct_answer.as_ref())?
        .with_emf(EmfSource::model(model, e_model)?)
        .with_emf(EmfSource::itl("itl", e_itl)?);
    net.reduce()?.power()
}

/// Power gained by dividing one of two series resistances by `k`.
///
/// Returns `(P(r1/k + r2) - P(r1 + r2), P(r1 + r2/k) - P(r1 + r2))` with
/// `P(R) = e² r0 / (R + r0)²`. The larger resistance always gains more.
pub fn component_gain(r1: f64, r2: f64, k: f64, e_total: f64, r0: f64) -> Result<(f64, f64)> {
    positive("r1", r1)?;
    positive("r2", r2)?;
    positive("r0", r0)?;
    if !k.is_finite() || k <= 1.0 {
        return Err(Error::invalid(alloc::format!("improvement factor k must exceed 1, got {k}")));
    }
    if !e_total.is_finite() {
        return Err(Error::invalid("EMF must be finite"));
    }
    let p = |r: f64| circuit::circuit_power(e_total, 0.0, r, r0);
    let before = p(r1 + r2)?;
    Ok((p(r1 / k + r2)? - before, p(r1 + r2 / k)? - before))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;
    use alloc::string::ToString;
    use alloc::vec;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    fn base() -> ResistanceBreakdown {
        ResistanceBreakdown::new(2.0, 1.0, 0.5, 0.5).unwrap()
    }

    fn reduced(spec: &StrategySpec) -> f64 {
        apply_strategy(spec, 1.0).unwrap().reduce().unwrap().equivalent_resistance
    }

    #[test]
    fn single_path_strategies() {
        assert_eq!(reduced(&StrategySpec::new(Strategy::ZeroShot, base()).unwrap()), 4.0);
        assert_eq!(reduced(&StrategySpec::new(Strategy::ToolUsage, base()).unwrap()), 3.5);
        assert_eq!(reduced(&StrategySpec::new(Strategy::ProgramOfThought, base()).unwrap()), 1.5);
    }

    #[test]
    fn direct_answer_default_multipliers() {
        let b = ResistanceBreakdown::new(1.5, 0.3, 1.97, 0.2).unwrap();
        assert!(rel(b.total(), 3.97) < 1e-12);
        let spec = StrategySpec::new(Strategy::DirectAnswer { multipliers: None }, b).unwrap();
        assert!(rel(reduced(&spec), 4.40) < 1e-12);
        let bad = Strategy::DirectAnswer { multipliers: Some(Multipliers::new(0.9, 1.0, 1.0)) };
        assert!(StrategySpec::new(bad, b).is_err());
    }

    #[test]
    fn sc_examples() {
        assert_eq!(sc_total_resistance(1, &[4.0], 1.0, 1.0).unwrap(), 6.0);
        assert_eq!(sc_total_resistance(4, &[4.0; 4], 1.0, 1.0).unwrap(), 3.0);
        let big = sc_total_resistance_identical(1_000_000_000, 4.0, 1.0, 1.0).unwrap();
        assert!((big - 2.0).abs() < 1e-8);
        assert!(sc_total_resistance(3, &[4.0; 4], 1.0, 1.0).is_err());
        assert!(sc_total_resistance(2, &[4.0, 0.0], 1.0, 1.0).is_err());
    }

    #[test]
    fn coverage_examples() {
        assert_eq!(coverage_total_resistance(4, &[4.0; 4], 1.0).unwrap(), 2.0);
        assert_eq!(coverage_total_resistance(1, &[4.0], 1.0).unwrap(), 5.0);
        let big = coverage_total_resistance_identical(1_000_000_000, 4.0, 1.0).unwrap();
        assert!((big - 1.0).abs() < 1e-8);
    }

    #[test]
    fn fine_grained_examples() {
        let r = fine_grained_total_resistance(4, &[2.0, 2.0], &[0.2, 0.2], 1.0).unwrap();
        assert!(rel(r, 2.4) < 1e-12);
        assert_eq!(fine_grained_total_resistance(4, &[4.0], &[1.0], 1.0).unwrap(), 3.0);
        assert!(r < sc_total_resistance(4, &[4.0; 4], 1.0, 1.0).unwrap());
        assert!(fine_grained_total_resistance(4, &[2.0], &[0.2, 0.2], 1.0).is_err());
        let hetero = fine_grained_total_resistance_branches(&[vec![2.0; 4], vec![2.0; 4]], &[0.2, 0.2], 1.0).unwrap();
        assert!(rel(hetero, 2.4) < 1e-12);
    }

    #[test]
    fn cov_examples() {
        assert!(rel(cov_total_resistance(1, 1, 1.0, 0.1, 4.0, 1.0).unwrap(), 6.1) < 1e-12);
        let k1 = cov_total_resistance(100, 1, 1.0, 0.1, 4.0, 1.0).unwrap();
        let k10 = cov_total_resistance(100, 10, 1.0, 0.1, 4.0, 1.0).unwrap();
        assert!(rel(k1, 1.15) < 1e-12);
        assert!(rel(k10, 2.041) < 1e-12);
        assert!(cov_total_resistance(1, 0, 1.0, 0.1, 4.0, 1.0).is_err());
        assert!(cov_total_resistance(1, 1, 0.0, 0.1, 4.0, 1.0).is_err());
    }

    #[test]
    fn cov_optimum_depends_on_sample_rule() {
        let spec = |k| {
            StrategySpec::new(
                Strategy::ChainOfVerification { n: 100, k, r_s: 1.0, r_meta: 0.1 },
                ResistanceBreakdown::new(4.0, 0.0, 0.0, 0.0).unwrap(),
            )
            .unwrap()
        };
        let argmin = |rule| {
            (1..=20u64)
                .min_by(|&a, &b| {
                    let ra = spec(a).equivalent_resistance(rule, None).unwrap();
                    let rb = spec(b).equivalent_resistance(rule, None).unwrap();
                    ra.total_cmp(&rb)
                })
                .unwrap()
        };
        // With 100 independent samples the verifier term is already tiny, so
        // the meta-verification cost dominates from k = 1.
        assert_eq!(argmin(EffectiveSampleRule::Independent), 1);
        assert_eq!(argmin(EffectiveSampleRule::LogCorrected), 2);
    }

    #[test]
    fn effective_sample_rules() {
        assert_eq!(effective_samples(1, EffectiveSampleRule::LogCorrected).unwrap(), 1.0);
        assert_eq!(effective_samples(2, EffectiveSampleRule::LogCorrected).unwrap(), 1.0);
        assert!(rel(effective_samples(8, EffectiveSampleRule::LogCorrected).unwrap(), 2.0794415416798357) < 1e-12);
        assert_eq!(effective_samples(100, EffectiveSampleRule::Independent).unwrap(), 100.0);
        assert!(effective_samples(0, EffectiveSampleRule::Independent).is_err());
        assert_eq!("log-corrected".parse::<EffectiveSampleRule>().unwrap(), EffectiveSampleRule::LogCorrected);
    }

    fn params(e: f64) -> FitParams {
        let mut emf = BTreeMap::new();
        emf.insert("m".to_string(), e);
        FitParams { emf_model: emf, r0: 1.0, gauge_model: "m".into(), ..FitParams::default() }
    }

    #[test]
    fn strategy_power_examples() {
        let b = ResistanceBreakdown::new(4.0, 0.0, 0.0, 0.0).unwrap();
        let p = params(5.0);
        let zs = StrategySpec::new(Strategy::ZeroShot, b).unwrap();
        assert_eq!(strategy_power(&zs, &p, "m", 0.0, EffectiveSampleRule::Independent).unwrap(), 1.0);

        let cover = StrategySpec::new(Strategy::Coverage { n: 4 }, b).unwrap();
        let sc = StrategySpec::new(Strategy::SelfConsistency { n: 4, r_s: 1.0 }, b).unwrap();
        let pc = strategy_power(&cover, &p, "m", 0.0, EffectiveSampleRule::Independent).unwrap();
        let ps = strategy_power(&sc, &p, "m", 0.0, EffectiveSampleRule::Independent).unwrap();
        assert!(pc > ps);

        let bound = 25.0 * 1.0 / (2.0f64 * 2.0);
        let mut last = 0.0;
        for n in 1..=200 {
            let spec = StrategySpec::new(Strategy::SelfConsistency { n, r_s: 1.0 }, b).unwrap();
            let pw = strategy_power(&spec, &p, "m", 0.0, EffectiveSampleRule::Independent).unwrap();
            assert!(pw >= last && pw < bound);
            last = pw;
        }
        assert!(bound - last < 0.15);

        assert!(matches!(
            strategy_power(&zs, &p, "other", 0.0, EffectiveSampleRule::Independent),
            Err(Error::MissingParam(_))
        ));
    }

    #[test]
    fn component_gain_examples() {
        let (d1, d2) = component_gain(4.0, 1.0, 2.0, 5.0, 1.0).unwrap();
        let before = 25.0 / 36.0;
        assert!((d1 - (25.0 / 16.0 - before)).abs() < 1e-12);
        assert!((d2 - (25.0 / (5.5 * 5.5) - before)).abs() < 1e-12);
        assert!((d1 - 0.868).abs() < 1e-3 && (d2 - 0.132).abs() < 1e-3);
        let (s1, s2) = component_gain(2.0, 2.0, 3.0, 5.0, 1.0).unwrap();
        assert_eq!(s1, s2);
        assert!(component_gain(2.0, 1.0, 1.0, 5.0, 1.0).is_err());
    }

    #[test]
    fn invalid_specs() {
        let b = base();
        assert!(StrategySpec::new(Strategy::SelfConsistency { n: 0, r_s: 1.0 }, b).is_err());
        assert!(StrategySpec::new(Strategy::ChainOfVerification { n: 1, k: 0, r_s: 1.0, r_meta: 1.0 }, b).is_err());
        let fg = |r: Vec<f64>, s: Vec<f64>| {
            StrategySpec::new(Strategy::FineGrainedSc { n: 2, step_resistances: r, step_verifications: s }, b)
        };
        assert!(fg(vec![2.0, 2.0], vec![0.1, 0.1]).is_ok());
        assert!(fg(vec![2.0, 1.0], vec![0.1, 0.1]).is_err());
        assert!(fg(vec![4.0], vec![0.1, 0.1]).is_err());
        assert!(fg(vec![], vec![]).is_err());
        let zero = ResistanceBreakdown::default();
        let sc = StrategySpec::new(Strategy::Coverage { n: 2 }, zero).unwrap();
        assert!(apply_strategy(&sc, 1.0).is_err());
        assert!(sc.equivalent_resistance(EffectiveSampleRule::Independent, None).is_err());
    }
}
