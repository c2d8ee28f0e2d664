use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::binning::{bin_by_power_counted, BinSpec, PowerBin};
use super::search::{golden_section, log_grid, newton_polish};
use super::{par_map, Calibration, FitParams};
use crate::circuit::ResistanceBreakdown;
use crate::dataset::{validation_split, RunRecord, TaskRecord};
use crate::field::{field_strength, itl_emf, DemoPool, FieldMetric};
use crate::stats;
use crate::strategy::{strategy_power, EffectiveSampleRule, Multipliers, Strategy, StrategySpec};
use crate::{Error, Result};

const SCALAR_LO: f64 = 1e-2;
const SCALAR_HI: f64 = 1e2;
const GRID_POINTS: usize = 25;

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Fraction of tasks held out for the parameter search.
    pub val_frac: f64,
    pub seed: u64,
    pub gauge_model: String,
    pub metric: FieldMetric,
    pub rule: EffectiveSampleRule,
    pub bins: BinSpec,
    /// When set, the validation bins are this many equal intervals up to the
    /// largest fitted validation power (`bins.width` is ignored). The fitted
    /// power scale is only weakly identified, so fixed-width bins can end up
    /// measuring that scale rather than the fit.
    pub bin_count: Option<usize>,
    /// Fit one domain resistance per task family instead of using the
    /// annotated values.
    pub fit_domain: bool,
    /// Multipliers for direct-answer runs that do not carry their own.
    pub direct_answer: Option<Multipliers>,
    pub max_sweeps: usize,
    /// Relative objective improvement below which the sweeps stop.
    pub tolerance: f64,
}

impl FitOptions {
    pub fn new(gauge_model: impl Into<String>) -> Self {
        FitOptions {
            val_frac: 0.1,
            seed: 0,
            gauge_model: gauge_model.into(),
            metric: FieldMetric::Projection,
            rule: EffectiveSampleRule::Independent,
            bins: BinSpec::default(),
            bin_count: None,
            fit_domain: true,
            direct_answer: None,
            max_sweeps: 100,
            tolerance: 1e-6,
        }
    }
}

/// Power-binned accuracy and its agreement with power.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationSummary {
    pub bins: Vec<PowerBin>,
    pub dropped: usize,
    /// `None` where the statistic is undefined (fewer than two bins, or
    /// constant accuracy).
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
    pub r_squared: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub params: FitParams,
    pub converged: bool,
    pub sweeps: usize,
    /// Final surrogate objective `1 - max(r, 0)²` over validation runs.
    pub objective: f64,
    pub validation_tasks: Vec<String>,
    pub validation: ValidationSummary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunPower {
    pub task: usize,
    pub run: usize,
    pub power: f64,
    pub correct: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub power: f64,
    pub accuracy: f64,
}

/// Demonstrations shown with a query and how to measure their field.
#[derive(Debug, Clone, Copy)]
pub struct Demonstrations<'a> {
    pub ids: &'a [String],
    pub representation: &'a str,
    pub pool: &'a DemoPool,
    pub metric: FieldMetric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectAnswerFit {
    pub multipliers: Multipliers,
    pub spearman: f64,
    pub pearson: f64,
}

/// The task's breakdown with its family's fitted domain constant, if any.
/// Fine-grained runs keep the annotated breakdown since their explicit step
/// list already fixes the reasoning resistance.
pub fn task_base(task: &TaskRecord, params: &FitParams, strategy: &Strategy) -> ResistanceBreakdown {
    let mut base = task.resistance;
    if !matches!(strategy, Strategy::FineGrainedSc { .. }) {
        if let Some(&d) = params.domain_constants.get(&task.family) {
            base.domain = d;
        }
    }
    base
}

/// Field strength of a run's demonstrations around its task query; zero
/// without demonstrations.
pub fn run_field(task: &TaskRecord, ids: &[String], pool: Option<&DemoPool>, metric: FieldMetric) -> Result<f64> {
    if ids.is_empty() {
        return Ok(0.0);
    }
    let pool = pool.ok_or_else(|| Error::MissingEmbedding("demonstrations given but no embeddings loaded".into()))?;
    let qid = task
        .embedding_id
        .as_deref()
        .ok_or_else(|| Error::MissingEmbedding(alloc::format!("task {} has no embedding id", task.task_id)))?;
    let query = pool
        .get(qid)
        .ok_or_else(|| Error::MissingEmbedding(alloc::format!("query embedding {qid} not found")))?;
    let mut demos = Vec::with_capacity(ids.len());
    for id in ids {
        demos.push(pool.get(id).ok_or_else(|| Error::MissingEmbedding(alloc::format!("demonstration {id} not found")))?);
    }
    field_strength(query, demos, metric)
}

/// Predicted power and accuracy for `task` answered by `model` with
/// `strategy`, optionally with demonstrations.
pub fn predict(
    task: &TaskRecord,
    model: &str,
    params: &FitParams,
    demos: Option<Demonstrations<'_>>,
    strategy: &Strategy,
    rule: EffectiveSampleRule,
) -> Result<Prediction> {
    let e_itl = match demos {
        Some(d) if !d.ids.is_empty() => {
            let lambda = params.lambda_for(d.representation)?;
            itl_emf(lambda, run_field(task, d.ids, Some(d.pool), d.metric)?)?
        }
        _ => 0.0,
    };
    let spec = StrategySpec::new(strategy.clone(), task_base(task, params, strategy))?;
    let power = strategy_power(&spec, params, model, e_itl, rule)?;
    Ok(Prediction { power, accuracy: params.calib.accuracy(power) })
}

fn run_demos<'a>(run: &'a RunRecord, pool: Option<&'a DemoPool>, metric: FieldMetric) -> Option<Demonstrations<'a>> {
    pool.map(|pool| Demonstrations { ids: &run.demo_ids, representation: &run.representation, pool, metric })
}

/// Power of every run of `tasks` under `params`.
pub fn run_powers(
    tasks: &[TaskRecord],
    pool: Option<&DemoPool>,
    params: &FitParams,
    metric: FieldMetric,
    rule: EffectiveSampleRule,
) -> Result<Vec<RunPower>> {
    let mut out = Vec::new();
    for (ti, task) in tasks.iter().enumerate() {
        for (ri, run) in task.runs.iter().enumerate() {
            if !run.demo_ids.is_empty() && pool.is_none() {
                return Err(Error::MissingEmbedding(alloc::format!(
                    "task {} run {ri} has demonstrations but no embeddings were loaded",
                    task.task_id
                )));
            }
            let p = predict(task, &run.model, params, run_demos(run, pool, metric), &run.strategy, rule)?;
            out.push(RunPower { task: ti, run: ri, power: p.power, correct: run.correct });
        }
    }
    Ok(out)
}

/// Bins `(power, correct)` pairs and correlates bin power with bin accuracy.
pub fn summarize(records: &[(f64, bool)], bins: &BinSpec) -> Result<ValidationSummary> {
    let binned = bin_by_power_counted(records, bins)?;
    let xs: Vec<f64> = binned.bins.iter().map(|b| b.power_mid).collect();
    let ys: Vec<f64> = binned.bins.iter().map(|b| b.accuracy).collect();
    Ok(ValidationSummary {
        pearson: stats::pearson(&xs, &ys).ok(),
        spearman: stats::spearman(&xs, &ys).ok(),
        r_squared: stats::r_squared(&xs, &ys).ok(),
        bins: binned.bins,
        dropped: binned.dropped,
    })
}

/// Where a run's EMF comes from in the parameter vector.
#[derive(Debug, Clone, Copy)]
enum EmfSlot {
    Gauge,
    Param(usize),
}

/// A validation run reduced to what the parameter search needs:
/// `R_eq = slope · domain + intercept`.
#[derive(Debug, Clone, Copy)]
struct Prepared {
    emf: EmfSlot,
    lambda: Option<usize>,
    phi: f64,
    slope: f64,
    intercept: f64,
    domain: Option<usize>,
    label: f64,
}

struct Objective {
    runs: Vec<Prepared>,
}

impl Objective {
    fn powers(&self, theta: &[f64], out: &mut Vec<f64>) {
        out.clear();
        let r0 = theta[0];
        for run in &self.runs {
            let mut e = match run.emf {
                EmfSlot::Gauge => 1.0,
                EmfSlot::Param(i) => theta[i],
            };
            if let Some(i) = run.lambda {
                e += theta[i] * run.phi;
            }
            let r = match run.domain {
                Some(i) => run.slope * theta[i] + run.intercept,
                None => run.intercept,
            };
            let loop_r = r + r0;
            out.push(e * e * r0 / (loop_r * loop_r));
        }
    }

    /// `1 - max(r, 0)²`: the normalised squared error of the best
    /// non-decreasing linear calibration of labels on power.
    fn eval(&self, theta: &[f64]) -> f64 {
        let mut powers = Vec::with_capacity(self.runs.len());
        self.powers(theta, &mut powers);
        let n = powers.len() as f64;
        let mx = powers.iter().sum::<f64>() / n;
        let my = self.runs.iter().map(|r| r.label).sum::<f64>() / n;
        let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
        for (p, run) in powers.iter().zip(&self.runs) {
            let (dx, dy) = (p - mx, run.label - my);
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
        if !(sxx > 0.0) || !sxx.is_finite() || syy == 0.0 {
            return 1.0;
        }
        let r = (sxy / libm::sqrt(sxx * syy)).max(0.0);
        1.0 - r * r
    }
}

fn index_of(names: &mut Vec<String>, name: &str) -> usize {
    match names.iter().position(|n| n == name) {
        Some(i) => i,
        None => {
            names.push(name.into());
            names.len() - 1
        }
    }
}

/// Fits EMFs, `λ`s, `R_0`, domain constants and the accuracy calibration on a
/// seeded validation split of the tasks.
///
/// The search maximises the correlation between run power and correctness:
/// a 25-point log grid per coordinate on the first sweep, golden-section
/// refinement, then Newton polishing, repeated coordinate-wise until the
/// objective stops improving. The calibration is then refitted by least
/// squares on the validation bins.
pub fn fit(tasks: &[TaskRecord], pool: Option<&DemoPool>, opts: &FitOptions) -> Result<FitReport> {
    opts.bins.validate()?;
    if !tasks.iter().any(|t| t.runs.iter().any(|r| r.model == opts.gauge_model)) {
        return Err(Error::invalid(alloc::format!("gauge model {:?} has no runs", opts.gauge_model)));
    }
    let split = validation_split(tasks.len(), opts.val_frac, opts.seed)?;
    let val: Vec<&TaskRecord> = split.iter().map(|&i| &tasks[i]).collect();
    if val.iter().all(|t| t.runs.is_empty()) {
        return Err(Error::DegenerateFit("validation split has no runs".into()));
    }

    let mut models = Vec::new();
    let mut reps = Vec::new();
    let mut families = Vec::new();
    struct Raw {
        model: Option<usize>,
        rep: Option<usize>,
        family: Option<usize>,
        phi: f64,
        slope: f64,
        intercept: f64,
        label: f64,
    }
    let mut raws = Vec::new();
    for task in &val {
        for run in &task.runs {
            let model = (run.model != opts.gauge_model).then(|| index_of(&mut models, &run.model));
            let phi = run_field(task, &run.demo_ids, pool, opts.metric)?;
            let rep = (!run.demo_ids.is_empty()).then(|| index_of(&mut reps, &run.representation));
            let fine = matches!(run.strategy, Strategy::FineGrainedSc { .. });
            let eq = |d: f64| {
                StrategySpec { strategy: run.strategy.clone(), base: ResistanceBreakdown { domain: d, ..task.resistance } }
                    .equivalent_resistance(opts.rule, opts.direct_answer.as_ref())
            };
            let (family, slope, intercept) = if opts.fit_domain && !fine {
                let (r1, r2) = (eq(1.0)?, eq(2.0)?);
                (Some(index_of(&mut families, &task.family)), r2 - r1, 2.0 * r1 - r2)
            } else {
                (None, 0.0, eq(task.resistance.domain)?)
            };
            raws.push(Raw { model, rep, family, phi, slope, intercept, label: run.correct as u8 as f64 });
        }
    }
    let first = raws[0].label;
    if raws.iter().all(|r| r.label == first) {
        return Err(Error::DegenerateFit("validation labels are all identical".into()));
    }

    // theta = [r0, emf.., lambda.., domain..]
    let emf_base = 1;
    let lambda_base = emf_base + models.len();
    let domain_base = lambda_base + reps.len();
    let dim = domain_base + families.len();
    let objective = Objective {
        runs: raws
            .iter()
            .map(|r| Prepared {
                emf: r.model.map_or(EmfSlot::Gauge, |m| EmfSlot::Param(emf_base + m)),
                lambda: r.rep.map(|i| lambda_base + i),
                phi: r.phi,
                slope: r.slope,
                intercept: r.intercept,
                domain: r.family.map(|i| domain_base + i),
                label: r.label,
            })
            .collect(),
    };

    let grid = log_grid(SCALAR_LO, SCALAR_HI, GRID_POINTS);
    let spacing = (libm::log(SCALAR_HI) - libm::log(SCALAR_LO)) / (GRID_POINTS - 1) as f64;
    let (ulo, uhi) = (libm::log(SCALAR_LO), libm::log(SCALAR_HI));
    let mut theta = alloc::vec![1.0; dim];
    let mut best = objective.eval(&theta);
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        let start = best;
        let before = theta.clone();
        for j in 0..dim {
            let at = |theta: &[f64], x: f64| {
                let mut t = theta.to_vec();
                t[j] = x;
                objective.eval(&t)
            };
            let (a, b) = if sweeps == 1 {
                let values = par_map(grid.len(), |g| at(&theta, grid[g]));
                let mut bi = 0;
                for (g, &v) in values.iter().enumerate() {
                    if v < values[bi] {
                        bi = g;
                    }
                }
                if values[bi] < best {
                    best = values[bi];
                    theta[j] = grid[bi];
                }
                let u = libm::log(grid[bi]);
                ((u - spacing).max(ulo), (u + spacing).min(uhi))
            } else {
                let u = libm::log(theta[j]);
                ((u - spacing).max(ulo), (u + spacing).min(uhi))
            };
            let (u, fu) = golden_section(|u| at(&theta, libm::exp(u)), a, b, 1e-6);
            if fu < best {
                best = fu;
                theta[j] = libm::exp(u);
            }
            let snapshot = theta.clone();
            let (x, fx) = newton_polish(|x| at(&snapshot, x), theta[j], best, SCALAR_LO, SCALAR_HI, 20);
            if fx < best {
                best = fx;
                theta[j] = x;
            }
        }
        // Coordinate moves crawl along curved ridges (e.g. EMFs and λ scaling
        // together); extrapolate the sweep's net move while that helps.
        if sweeps > 1 {
            let step: Vec<f64> = theta.iter().zip(&before).map(|(t, b)| libm::log(t / b)).collect();
            let mut factor = 1.0;
            while factor <= 64.0 {
                let trial: Vec<f64> = theta
                    .iter()
                    .zip(&step)
                    .map(|(t, s)| (t * libm::exp(factor * s)).clamp(SCALAR_LO, SCALAR_HI))
                    .collect();
                let f = objective.eval(&trial);
                if f < best {
                    best = f;
                    theta = trial;
                    factor *= 2.0;
                } else {
                    break;
                }
            }
        }
        if start - best <= opts.tolerance * start.abs().max(1e-12) {
            converged = true;
            break;
        }
    }

    // When every run carries a fitted domain constant, only `d_f + r0` is
    // identified: moving `r0` along that valley rescales every power without
    // changing the objective. Fix the scale by giving the easiest family a
    // zero domain resistance.
    if !families.is_empty() && objective.runs.iter().all(|r| r.domain.is_some()) {
        let shift = theta[domain_base..].iter().copied().fold(f64::INFINITY, f64::min);
        theta[0] += shift;
        for d in &mut theta[domain_base..] {
            *d -= shift;
        }
    }

    let mut params = FitParams {
        r0: theta[0],
        gauge_model: opts.gauge_model.clone(),
        direct_answer: opts.direct_answer,
        ..FitParams::default()
    };
    params.emf_model.insert(opts.gauge_model.clone(), 1.0);
    for (i, m) in models.iter().enumerate() {
        params.emf_model.insert(m.clone(), theta[emf_base + i]);
    }
    for (i, r) in reps.iter().enumerate() {
        params.lambda.insert(r.clone(), theta[lambda_base + i]);
    }
    for (i, f) in families.iter().enumerate() {
        params.domain_constants.insert(f.clone(), theta[domain_base + i]);
    }

    let mut powers = Vec::new();
    objective.powers(&theta, &mut powers);
    let records: Vec<(f64, bool)> =
        powers.iter().zip(&objective.runs).map(|(&p, r)| (p, r.label > 0.5)).collect();
    if powers.iter().all(|&p| p == powers[0]) {
        return Err(Error::DegenerateFit("every validation run has the same power".into()));
    }
    let bins = match opts.bin_count {
        Some(n) => BinSpec::spanning(powers.iter().copied().fold(0.0, f64::max), n, opts.bins.min_count)
            .map_err(|e| Error::DegenerateFit(alloc::format!("{e}")))?,
        None => opts.bins,
    };
    let validation = summarize(&records, &bins)?;
    if validation.bins.len() < 2 {
        return Err(Error::DegenerateFit(alloc::format!(
            "only {} power bin(s) with at least {} runs; widen the bins or add data",
            validation.bins.len(),
            opts.bins.min_count
        )));
    }
    let xs: Vec<f64> = validation.bins.iter().map(|b| b.power_mid).collect();
    let ys: Vec<f64> = validation.bins.iter().map(|b| b.accuracy).collect();
    let (a, b) = stats::linear_fit(&xs, &ys).map_err(|e| Error::DegenerateFit(alloc::format!("{e}")))?;
    params.calib = Calibration { a, b };

    Ok(FitReport {
        params,
        converged,
        sweeps,
        objective: best,
        validation_tasks: val.iter().map(|t| t.task_id.clone()).collect(),
        validation,
    })
}

/// Grid search of direct-answer multipliers in `[1, 3]` (step 0.05) for
/// plan, operation and calculation resistors, maximising the Spearman
/// correlation of bin power and bin accuracy on the validation split.
///
/// Spearman ties are broken by the bin Pearson correlation, remaining ties by
/// the smallest multipliers.
pub fn fit_direct_answer_multipliers(
    tasks: &[TaskRecord],
    pool: Option<&DemoPool>,
    params: &FitParams,
    opts: &FitOptions,
) -> Result<DirectAnswerFit> {
    opts.bins.validate()?;
    let is_da = |r: &RunRecord| matches!(r.strategy, Strategy::DirectAnswer { multipliers: None });
    if !tasks.iter().flat_map(|t| &t.runs).any(is_da) {
        return Err(Error::invalid("dataset has no direct-answer runs without fixed multipliers"));
    }
    let split = validation_split(tasks.len(), opts.val_frac, opts.seed)?;

    // Runs with identical circuits share a power for every candidate, so they
    // are scored as one weighted group. For direct-answer runs
    // R = plan·mp + operation·mo + calculate·mc + rest.
    let mut groups: BTreeMap<[u64; 5], (usize, usize)> = BTreeMap::new();
    for &ti in &split {
        let task = &tasks[ti];
        for run in &task.runs {
            let e_itl = if run.demo_ids.is_empty() {
                0.0
            } else {
                itl_emf(params.lambda_for(&run.representation)?, run_field(task, &run.demo_ids, pool, opts.metric)?)?
            };
            let e = params.emf(&run.model)? + e_itl;
            let base = task_base(task, params, &run.strategy);
            let (da, rest) = if is_da(run) {
                ([base.plan, base.operation, base.calculate], base.domain)
            } else {
                let spec = StrategySpec::new(run.strategy.clone(), base)?;
                ([0.0; 3], spec.equivalent_resistance(opts.rule, params.direct_answer.as_ref())?)
            };
            let key = [(e * e * params.r0).to_bits(), da[0].to_bits(), da[1].to_bits(), da[2].to_bits(), rest.to_bits()];
            let slot = groups.entry(key).or_insert((0, 0));
            slot.0 += 1;
            slot.1 += run.correct as usize;
        }
    }
    if !groups.keys().any(|k| k[1..4].iter().any(|&b| f64::from_bits(b) != 0.0)) {
        return Err(Error::invalid("validation split has no direct-answer runs"));
    }
    let groups: Vec<([f64; 5], usize, usize)> =
        groups.into_iter().map(|(k, (n, c))| (k.map(f64::from_bits), n, c)).collect();

    const STEPS: usize = 41;
    let value = |i: usize| (100 + 5 * i) as f64 / 100.0;
    let width = opts.bins.width;
    let min_count = opts.bins.min_count;
    let score = |mp: f64, mo: f64, mc: f64, tally: &mut Vec<(u64, usize, usize)>| -> (f64, f64) {
        tally.clear();
        for &([numer, p, o, c, rest], n, k) in &groups {
            let loop_r = p * mp + o * mo + c * mc + rest + params.r0;
            tally.push((libm::floor(numer / (loop_r * loop_r) / width) as u64, n, k));
        }
        tally.sort_unstable_by_key(|t| t.0);
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        let mut i = 0;
        while i < tally.len() {
            let (idx, mut n, mut k) = (tally[i].0, 0, 0);
            while i < tally.len() && tally[i].0 == idx {
                n += tally[i].1;
                k += tally[i].2;
                i += 1;
            }
            if n >= min_count {
                xs.push((idx as f64 + 0.5) * width);
                ys.push(k as f64 / n as f64);
            }
        }
        (
            stats::spearman(&xs, &ys).unwrap_or(f64::NEG_INFINITY),
            stats::pearson(&xs, &ys).unwrap_or(f64::NEG_INFINITY),
        )
    };
    let better = |cand: (f64, f64), cur: (f64, f64)| {
        cand.0 > cur.0 + 1e-12 || ((cand.0 - cur.0).abs() <= 1e-12 && cand.1 > cur.1 + 1e-12)
    };
    // best per plan value, then reduced in index order
    let per_plan = par_map(STEPS, |pi| {
        let mut tally = Vec::with_capacity(groups.len());
        let mut best = (score(value(pi), 1.0, 1.0, &mut tally), (pi, 0, 0));
        for oi in 0..STEPS {
            for ci in 0..STEPS {
                let s = score(value(pi), value(oi), value(ci), &mut tally);
                if better(s, best.0) {
                    best = (s, (pi, oi, ci));
                }
            }
        }
        best
    });
    let mut best = per_plan[0];
    for &cand in &per_plan[1..] {
        if better(cand.0, best.0) {
            best = cand;
        }
    }
    let ((spearman, pearson), (pi, oi, ci)) = best;
    Ok(DirectAnswerFit { multipliers: Multipliers::new(value(pi), value(oi), value(ci)), spearman, pearson })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::EmbeddingVector;
    use alloc::string::ToString;
    use alloc::vec;

    fn constants(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|&(k, v)| (String::from(k), v)).collect()
    }

    fn task(id: &str, b: ResistanceBreakdown, runs: Vec<RunRecord>) -> TaskRecord {
        TaskRecord {
            task_id: id.into(),
            family: "f".into(),
            query: String::new(),
            resistance: b,
            embedding_id: Some("q".into()),
            runs,
        }
    }

    fn run(model: &str, strategy: Strategy, demos: &[&str], correct: bool) -> RunRecord {
        RunRecord {
            model: model.into(),
            temperature: 0.0,
            strategy,
            representation: "proj".into(),
            demo_ids: demos.iter().map(|d| d.to_string()).collect(),
            correct,
        }
    }

    fn params() -> FitParams {
        let mut p = FitParams { gauge_model: "m".into(), calib: Calibration { a: 0.4, b: 0.0 }, ..FitParams::default() };
        p.emf_model.insert("m".into(), 5.0);
        p.lambda.insert("proj".into(), 0.5);
        p
    }

    #[test]
    fn predict_zero_shot() {
        let t = task("t", ResistanceBreakdown::new(2.0, 1.0, 0.5, 0.5).unwrap(), vec![]);
        let p = predict(&t, "m", &params(), None, &Strategy::ZeroShot, EffectiveSampleRule::Independent).unwrap();
        assert_eq!(p, Prediction { power: 1.0, accuracy: 0.4 });
        let mut clamped = params();
        clamped.calib = Calibration { a: 1.0, b: 0.3 };
        let p = predict(&t, "m", &clamped, None, &Strategy::ZeroShot, EffectiveSampleRule::Independent).unwrap();
        assert_eq!(p.accuracy, 1.0);
    }

    #[test]
    fn negative_field_lowers_power() {
        let pool = DemoPool::new(vec![
            EmbeddingVector::new("q", vec![1.0, 0.0]).unwrap(),
            EmbeddingVector::new("neg", vec![-2.0, 0.0]).unwrap(),
        ])
        .unwrap();
        let t = task("t", ResistanceBreakdown::new(4.0, 0.0, 0.0, 0.0).unwrap(), vec![]);
        let ids = vec!["neg".to_string()];
        let demos = Demonstrations { ids: &ids, representation: "proj", pool: &pool, metric: FieldMetric::Projection };
        let rule = EffectiveSampleRule::Independent;
        let zs = predict(&t, "m", &params(), None, &Strategy::ZeroShot, rule).unwrap();
        let neg = predict(&t, "m", &params(), Some(demos), &Strategy::ZeroShot, rule).unwrap();
        assert!(neg.power < zs.power);
        assert!((neg.power - 16.0 / 25.0).abs() < 1e-12);
    }

    #[test]
    fn predict_errors() {
        let pool = DemoPool::new(vec![EmbeddingVector::new("q", vec![1.0, 0.0]).unwrap()]).unwrap();
        let t = task("t", ResistanceBreakdown::new(4.0, 0.0, 0.0, 0.0).unwrap(), vec![]);
        let ids = vec!["missing".to_string()];
        let demos = Demonstrations { ids: &ids, representation: "proj", pool: &pool, metric: FieldMetric::Projection };
        let rule = EffectiveSampleRule::Independent;
        assert!(matches!(
            predict(&t, "m", &params(), Some(demos), &Strategy::ZeroShot, rule),
            Err(Error::MissingEmbedding(_))
        ));
        assert!(matches!(
            predict(&t, "other", &params(), None, &Strategy::ZeroShot, rule),
            Err(Error::MissingParam(_))
        ));
        let ids = vec!["q".to_string()];
        let demos = Demonstrations { ids: &ids, representation: "bge", pool: &pool, metric: FieldMetric::Projection };
        assert!(matches!(
            predict(&t, "m", &params(), Some(demos), &Strategy::ZeroShot, rule),
            Err(Error::MissingParam(_))
        ));
    }

    #[test]
    fn domain_constant_overrides_annotation() {
        let mut p = params();
        p.domain_constants = constants(&[("f", 1.0)]);
        let t = task("t", ResistanceBreakdown::new(3.0, 0.0, 7.0, 0.0).unwrap(), vec![]);
        let pr = predict(&t, "m", &p, None, &Strategy::ZeroShot, EffectiveSampleRule::Independent).unwrap();
        assert!((pr.power - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_degenerate_data() {
        let b = ResistanceBreakdown::new(1.0, 1.0, 0.0, 0.0).unwrap();
        let same: Vec<TaskRecord> = (0..20)
            .map(|i| task(&alloc::format!("t{i}"), b, (0..20).map(|j| run("m", Strategy::ZeroShot, &[], j % 2 == 0)).collect()))
            .collect();
        let mut opts = FitOptions::new("m");
        assert!(matches!(fit(&same, None, &opts), Err(Error::DegenerateFit(_))));
        opts.val_frac = 0.0;
        assert!(matches!(fit(&same, None, &opts), Err(Error::DegenerateFit(_))));
        assert!(matches!(fit(&same, None, &FitOptions::new("nobody")), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn direct_answer_fit_errors_and_ties() {
        let b = ResistanceBreakdown::new(1.0, 1.0, 0.0, 0.5).unwrap();
        let zs_only: Vec<TaskRecord> =
            (0..10).map(|i| task(&alloc::format!("t{i}"), b, vec![run("m", Strategy::ZeroShot, &[], true)])).collect();
        let opts = FitOptions::new("m");
        assert!(matches!(fit_direct_answer_multipliers(&zs_only, None, &params(), &opts), Err(Error::InvalidInput(_))));

        let all_correct: Vec<TaskRecord> = (0..10)
            .map(|i| {
                let b = ResistanceBreakdown::new(0.2 * i as f64 + 0.1, 1.0, 0.0, 0.5).unwrap();
                let mut runs: Vec<RunRecord> = (0..15).map(|_| run("m", Strategy::ZeroShot, &[], true)).collect();
                runs.extend((0..15).map(|_| run("m", Strategy::DirectAnswer { multipliers: None }, &[], true)));
                task(&alloc::format!("t{i}"), b, runs)
            })
            .collect();
        let mut opts = FitOptions::new("m");
        opts.val_frac = 1.0;
        let fitted = fit_direct_answer_multipliers(&all_correct, None, &params(), &opts).unwrap();
        assert_eq!(fitted.multipliers, Multipliers::IDENTITY);
    }
}
