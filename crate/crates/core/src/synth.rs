//! Synthetic correctness-labelled datasets drawn from known constants.
//!
//! Tasks get discrete plan/operation/calculation resistances and a family
//! domain constant. Embeddings share one dominant direction, so demonstration
//! projections onto a query range from clearly negative to strongly positive.
//! Every run picks a model, a strategy and a demonstration policy uniformly,
//! and its label is a Bernoulli draw with the calibrated accuracy of its true
//! power.

use alloc::string::String;
use alloc::vec::Vec;

use crate::calibration::{predict, Calibration, Demonstrations, FitParams};
use crate::circuit::ResistanceBreakdown;
use crate::dataset::{RunRecord, TaskRecord};
use crate::field::{retrieve, DemoPool, EmbeddingVector, FieldMetric, RetrievalPolicy};
use crate::rng::{self, Rng};
use crate::strategy::{EffectiveSampleRule, Multipliers, Strategy};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub tasks: usize,
    pub runs_per_task: usize,
    /// `(name, emf)`; the first entry is the gauge and should have EMF 1.
    pub models: Vec<(String, f64)>,
    pub representation: String,
    pub lambda: f64,
    pub r0: f64,
    /// `(family, domain constant)`; tasks cycle through the families.
    pub families: Vec<(String, f64)>,
    pub calib: Calibration,
    pub strategies: Vec<Strategy>,
    /// `None` is a run without demonstrations.
    pub demos: Vec<Option<(RetrievalPolicy, usize)>>,
    /// True multipliers of direct-answer runs without explicit ones.
    pub direct_answer: Option<Multipliers>,
    pub dim: usize,
    pub pool_size: usize,
    /// Resistance levels drawn uniformly per task.
    pub plan_levels: Vec<f64>,
    pub operation_levels: Vec<f64>,
    pub calculate_levels: Vec<f64>,
    /// Range of demonstration components along the shared query direction.
    pub alignment: (f64, f64),
}

impl Default for SynthConfig {
    /// 100 tasks × 50 runs over two models (gauge and `ε = 5`), `λ = 0.3`,
    /// `R_0 = 1` and accuracy `0.02·P + 0.1`.
    fn default() -> Self {
        SynthConfig {
            seed: 7,
            tasks: 100,
            runs_per_task: 50,
            models: alloc::vec![("ref".into(), 1.0), ("big".into(), 5.0)],
            representation: "proj".into(),
            lambda: 0.3,
            r0: 1.0,
            families: alloc::vec![("arith".into(), 0.2), ("logic".into(), 0.6)],
            calib: Calibration { a: 0.02, b: 0.1 },
            strategies: alloc::vec![Strategy::ZeroShot],
            demos: alloc::vec![
                None,
                Some((RetrievalPolicy::BottomK, 2)),
                Some((RetrievalPolicy::TopK, 2)),
                Some((RetrievalPolicy::TopK, 4)),
                Some((RetrievalPolicy::TopK, 6)),
                Some((RetrievalPolicy::TopK, 8)),
            ],
            direct_answer: None,
            dim: 8,
            pool_size: 60,
            plan_levels: alloc::vec![0.2, 0.4, 0.6, 0.8],
            operation_levels: alloc::vec![0.1, 0.2, 0.3, 0.4, 0.5],
            calculate_levels: alloc::vec![0.0, 0.2],
            alignment: (-1.0, 3.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthData {
    pub tasks: Vec<TaskRecord>,
    /// Query and demonstration embeddings.
    pub pool: DemoPool,
    pub truth: FitParams,
    /// True power of every run, task-major.
    pub true_power: Vec<f64>,
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; one value per call is enough here
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
}

pub fn generate(cfg: &SynthConfig) -> Result<SynthData> {
    if cfg.models.is_empty() || cfg.families.is_empty() || cfg.strategies.is_empty() || cfg.demos.is_empty() {
        return Err(Error::invalid("synthetic config needs models, families, strategies and demo settings"));
    }
    if cfg.plan_levels.is_empty() || cfg.operation_levels.is_empty() || cfg.calculate_levels.is_empty() {
        return Err(Error::invalid("synthetic config needs at least one level per resistance"));
    }
    if !(cfg.alignment.0 < cfg.alignment.1) {
        return Err(Error::invalid("alignment range must be non-empty"));
    }
    if cfg.dim == 0 || cfg.tasks == 0 {
        return Err(Error::invalid("synthetic config needs dim ≥ 1 and tasks ≥ 1"));
    }
    let mut rng = rng::seeded(cfg.seed);

    let mut truth = FitParams {
        r0: cfg.r0,
        calib: cfg.calib,
        gauge_model: cfg.models[0].0.clone(),
        direct_answer: cfg.direct_answer,
        ..FitParams::default()
    };
    for (m, e) in &cfg.models {
        truth.emf_model.insert(m.clone(), *e);
    }
    truth.lambda.insert(cfg.representation.clone(), cfg.lambda);
    for (f, d) in &cfg.families {
        truth.domain_constants.insert(f.clone(), *d);
    }

    let noisy = |scale: f64, rng: &mut rng::SeededRng| -> Vec<f64> {
        (0..cfg.dim).map(|_| scale * gaussian(rng)).collect()
    };
    let mut demos = Vec::with_capacity(cfg.pool_size);
    for i in 0..cfg.pool_size {
        let a = rng.gen_range(cfg.alignment.0..cfg.alignment.1);
        let mut v = noisy(0.3, &mut rng);
        v[0] += a;
        demos.push(EmbeddingVector::new(alloc::format!("d{i:03}"), v)?);
    }
    let demo_pool = DemoPool::new(demos.clone())?;
    let mut all = demos;
    let mut queries = Vec::with_capacity(cfg.tasks);
    for t in 0..cfg.tasks {
        let mut v = noisy(0.1, &mut rng);
        v[0] += 1.0;
        let q = EmbeddingVector::new(alloc::format!("q{t:03}"), v)?;
        queries.push(q.clone());
        all.push(q);
    }
    let pool = DemoPool::new(all)?;

    let mut tasks = Vec::with_capacity(cfg.tasks);
    let mut true_power = Vec::with_capacity(cfg.tasks * cfg.runs_per_task);
    for (t, query) in queries.iter().enumerate() {
        let (family, d) = &cfg.families[t % cfg.families.len()];
        let resistance = ResistanceBreakdown::new(
            cfg.plan_levels[rng.gen_range(0..cfg.plan_levels.len())],
            cfg.operation_levels[rng.gen_range(0..cfg.operation_levels.len())],
            *d,
            cfg.calculate_levels[rng.gen_range(0..cfg.calculate_levels.len())],
        )?;
        let mut task = TaskRecord {
            task_id: alloc::format!("t{t:03}"),
            family: family.clone(),
            query: alloc::format!("synthetic task {t}"),
            resistance,
            embedding_id: Some(query.id.clone()),
            runs: Vec::with_capacity(cfg.runs_per_task),
        };
        for _ in 0..cfg.runs_per_task {
            let model = &cfg.models[rng.gen_range(0..cfg.models.len())].0;
            let strategy = cfg.strategies[rng.gen_range(0..cfg.strategies.len())].clone();
            let demo_ids = match cfg.demos[rng.gen_range(0..cfg.demos.len())] {
                None => Vec::new(),
                Some((RetrievalPolicy::Random { .. }, k)) => {
                    retrieve(query, &demo_pool, RetrievalPolicy::Random { seed: rng.gen() }, k)?
                }
                Some((policy, k)) => retrieve(query, &demo_pool, policy, k)?,
            };
            let demos = Demonstrations {
                ids: &demo_ids,
                representation: &cfg.representation,
                pool: &pool,
                metric: FieldMetric::Projection,
            };
            let p = predict(&task, model, &truth, Some(demos), &strategy, EffectiveSampleRule::Independent)?;
            let correct = rng.gen_bool(p.accuracy);
            true_power.push(p.power);
            task.runs.push(RunRecord {
                model: model.clone(),
                temperature: 0.7,
                strategy,
                representation: cfg.representation.clone(),
                demo_ids,
                correct,
            });
        }
        tasks.push(task);
    }
    Ok(SynthData { tasks, pool, truth, true_power })
}
