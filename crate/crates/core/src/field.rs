//! Semantic field strength of in-context demonstrations and demonstration
//! retrieval.
//!
//! The field of a demonstration set is the sum of each demonstration
//! vector's projection onto the query direction,
//! `Φ = Σ cos θ_qi · |S_i| = Σ (S_q · S_i) / |S_q|`. The EMF it induces is
//! `ε_ITL = λ Φ`. Anti-aligned demonstrations contribute negatively and so
//! lower the total EMF.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::rng::{self, Rng};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EmbeddingVector {
    pub id: String,
    pub values: Vec<f64>,
}

impl EmbeddingVector {
    pub fn new(id: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let id = id.into();
        if values.is_empty() {
            return Err(Error::invalid(alloc::format!("embedding {id} has dimension 0")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(alloc::format!("embedding {id} has non-finite values")));
        }
        Ok(EmbeddingVector { id, values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(dot(&self.values, &self.values))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn l2(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// How a demonstration's contribution to the field is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FieldMetric {
    /// Signed projection length onto the query direction.
    Projection,
    Cosine,
    /// Negated Manhattan distance, so larger means stronger.
    L1,
    /// Negated Euclidean distance.
    L2,
    /// Every demonstration contributes one unit regardless of content.
    None,
}

impl FieldMetric {
    pub const ALL: [FieldMetric; 5] =
        [FieldMetric::Projection, FieldMetric::Cosine, FieldMetric::L1, FieldMetric::L2, FieldMetric::None];

    pub fn name(self) -> &'static str {
        match self {
            FieldMetric::Projection => "projection",
            FieldMetric::Cosine => "cosine",
            FieldMetric::L1 => "l1",
            FieldMetric::L2 => "l2",
            FieldMetric::None => "none",
        }
    }
}

impl core::str::FromStr for FieldMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FieldMetric::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(alloc::format!("unknown field metric {s:?}")))
    }
}

/// Contribution of one demonstration under `metric`. `query_norm` is passed
/// in so callers scanning a pool compute it once.
fn contribution(query: &[f64], query_norm: f64, demo: &EmbeddingVector, metric: FieldMetric) -> Result<f64> {
    match metric {
        FieldMetric::Projection => Ok(dot(query, &demo.values) / query_norm),
        FieldMetric::Cosine => {
            let dn = demo.norm();
            if dn == 0.0 {
                return Err(Error::invalid(alloc::format!("demonstration {} has zero norm", demo.id)));
            }
            Ok(dot(query, &demo.values) / (query_norm * dn))
        }
        FieldMetric::L1 => Ok(-l1(query, &demo.values)),
        FieldMetric::L2 => Ok(-l2(query, &demo.values)),
        FieldMetric::None => Ok(1.0),
    }
}

/// Total semantic field strength `Φ` of `demos` around `query`.
///
/// An empty demonstration set has zero field under every metric.
pub fn field_strength<'a, I>(query: &EmbeddingVector, demos: I, metric: FieldMetric) -> Result<f64>
where
    I: IntoIterator<Item = &'a EmbeddingVector>,
{
    let mut demos = demos.into_iter().peekable();
    if demos.peek().is_none() {
        return Ok(0.0);
    }
    let query_norm = query.norm();
    if matches!(metric, FieldMetric::Projection | FieldMetric::Cosine) && query_norm == 0.0 {
        return Err(Error::invalid(alloc::format!("query {} has zero norm", query.id)));
    }
    let mut phi = 0.0;
    for demo in demos {
        if demo.dim() != query.dim() {
            return Err(Error::invalid(alloc::format!(
                "dimension mismatch: query {} has {}, demonstration {} has {}",
                query.id,
                query.dim(),
                demo.id,
                demo.dim()
            )));
        }
        phi += contribution(&query.values, query_norm, demo, metric)?;
    }
    Ok(phi)
}

/// `ε_ITL = λ Φ`.
pub fn itl_emf(lambda: f64, phi: f64) -> Result<f64> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::invalid(alloc::format!("lambda must be positive, got {lambda}")));
    }
    Ok(lambda * phi)
}

/// Linear decay of the field over reasoning time, `Φ(t) = -λ Φ_0 t`.
/// Only used for plotting; the induced EMF does not depend on `t`.
pub fn decay_profile(phi0: f64, lambda: f64, t: f64) -> f64 {
    -lambda * phi0 * t
}

/// A set of candidate demonstrations with unique ids and a shared dimension.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DemoPool {
    entries: Vec<EmbeddingVector>,
    index: BTreeMap<String, usize>,
}

impl DemoPool {
    pub fn new(entries: Vec<EmbeddingVector>) -> Result<Self> {
        let mut index = BTreeMap::new();
        let dim = entries.first().map(|e| e.dim());
        for (i, e) in entries.iter().enumerate() {
            if e.dim() == 0 || Some(e.dim()) != dim {
                return Err(Error::invalid(alloc::format!(
                    "embedding {} has dimension {}, expected {}",
                    e.id,
                    e.dim(),
                    dim.unwrap_or(0)
                )));
            }
            if e.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(alloc::format!("embedding {} has non-finite values", e.id)));
            }
            if index.insert(e.id.clone(), i).is_some() {
                return Err(Error::invalid(alloc::format!("duplicate embedding id {}", e.id)));
            }
        }
        Ok(DemoPool { entries, index })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Dimension shared by all entries, `None` for an empty pool.
    pub fn dim(&self) -> Option<usize> {
        self.entries.first().map(|e| e.dim())
    }

    pub fn entries(&self) -> &[EmbeddingVector] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&EmbeddingVector> {
        self.index.get(id).map(|&i| &self.entries[i])
    }

    /// A copy of the pool without the entry `id` (used when the query itself
    /// lives in the pool).
    pub fn without(&self, id: &str) -> DemoPool {
        let entries: Vec<_> = self.entries.iter().filter(|e| e.id != id).cloned().collect();
        DemoPool::new(entries).expect("subset of a valid pool is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RetrievalPolicy {
    /// Uniform sample without replacement.
    Random { seed: u64 },
    TopK,
    BottomK,
    /// Query-independent max-min diverse subset.
    DiverseStatic,
    /// Per-query similarity retrieval; same ranking as `TopK`.
    SimilarDynamic,
    /// Max-min diverse subset drawn from the `m` most similar entries.
    DiverseAmongTop { m: usize },
}

/// Ids ordered by projection score; ties go to the smaller id.
fn ranked_by_projection(query: &EmbeddingVector, pool: &DemoPool, descending: bool) -> Result<Vec<(f64, usize)>> {
    let qn = query.norm();
    if qn == 0.0 {
        return Err(Error::invalid(alloc::format!("query {} has zero norm", query.id)));
    }
    let mut scored = Vec::with_capacity(pool.len());
    for (i, e) in pool.entries.iter().enumerate() {
        scored.push((contribution(&query.values, qn, e, FieldMetric::Projection)?, i));
    }
    scored.sort_by(|a, b| {
        let by_score = if descending { b.0.total_cmp(&a.0) } else { a.0.total_cmp(&b.0) };
        by_score.then_with(|| pool.entries[a.1].id.cmp(&pool.entries[b.1].id))
    });
    Ok(scored)
}

/// Greedy max-min (farthest point) selection of `k` candidates, starting
/// from `first`.
fn farthest_point(pool: &DemoPool, candidates: &[usize], first: usize, k: usize) -> Vec<usize> {
    let mut chosen = alloc::vec![first];
    let mut min_dist: Vec<f64> =
        candidates.iter().map(|&c| l2(&pool.entries[c].values, &pool.entries[first].values)).collect();
    let mut taken: Vec<bool> = candidates.iter().map(|&c| c == first).collect();
    while chosen.len() < k {
        let mut best: Option<usize> = None;
        for (j, &c) in candidates.iter().enumerate() {
            if taken[j] {
                continue;
            }
            best = match best {
                None => Some(j),
                Some(b) => {
                    let ord = min_dist[j]
                        .total_cmp(&min_dist[b])
                        .then_with(|| pool.entries[candidates[b]].id.cmp(&pool.entries[c].id));
                    if ord == Ordering::Greater { Some(j) } else { Some(b) }
                }
            };
        }
        let Some(b) = best else { break };
        taken[b] = true;
        let picked = candidates[b];
        chosen.push(picked);
        for (j, &c) in candidates.iter().enumerate() {
            let d = l2(&pool.entries[c].values, &pool.entries[picked].values);
            if d < min_dist[j] {
                min_dist[j] = d;
            }
        }
    }
    chosen
}

/// Selects `k` demonstration ids from `pool` for `query` under `policy`.
pub fn retrieve(query: &EmbeddingVector, pool: &DemoPool, policy: RetrievalPolicy, k: usize) -> Result<Vec<String>> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if pool.is_empty() {
        return Err(Error::invalid("cannot retrieve from an empty pool"));
    }
    if k > pool.len() {
        return Err(Error::invalid(alloc::format!("k = {k} exceeds pool size {}", pool.len())));
    }
    if policy_uses_query(policy) && Some(query.dim()) != pool.dim() {
        return Err(Error::invalid(alloc::format!(
            "query dimension {} does not match pool dimension {}",
            query.dim(),
            pool.dim().unwrap_or(0)
        )));
    }
    let picked: Vec<usize> = match policy {
        RetrievalPolicy::TopK | RetrievalPolicy::SimilarDynamic => {
            ranked_by_projection(query, pool, true)?.into_iter().take(k).map(|(_, i)| i).collect()
        }
        RetrievalPolicy::BottomK => {
            ranked_by_projection(query, pool, false)?.into_iter().take(k).map(|(_, i)| i).collect()
        }
        RetrievalPolicy::Random { seed } => {
            let mut rng = rng::seeded(seed);
            let mut order: Vec<usize> = (0..pool.len()).collect();
            for i in 0..k {
                let j = rng.gen_range(i..order.len());
                order.swap(i, j);
            }
            order.truncate(k);
            order
        }
        RetrievalPolicy::DiverseStatic => {
            let dim = pool.dim().unwrap_or(0);
            let mut centroid = alloc::vec![0.0; dim];
            for e in &pool.entries {
                for (c, v) in centroid.iter_mut().zip(&e.values) {
                    *c += v;
                }
            }
            let n = pool.len() as f64;
            centroid.iter_mut().for_each(|c| *c /= n);
            let first = (0..pool.len())
                .max_by(|&a, &b| {
                    l2(&pool.entries[a].values, &centroid)
                        .total_cmp(&l2(&pool.entries[b].values, &centroid))
                        .then_with(|| pool.entries[b].id.cmp(&pool.entries[a].id))
                })
                .expect("pool is non-empty");
            let all: Vec<usize> = (0..pool.len()).collect();
            farthest_point(pool, &all, first, k)
        }
        RetrievalPolicy::DiverseAmongTop { m } => {
            if m < k {
                return Err(Error::invalid(alloc::format!("diverse_among_top needs m >= k, got m = {m}, k = {k}")));
            }
            let top: Vec<usize> =
                ranked_by_projection(query, pool, true)?.into_iter().take(m).map(|(_, i)| i).collect();
            farthest_point(pool, &top, top[0], k)
        }
    };
    Ok(picked.into_iter().map(|i| pool.entries[i].id.clone()).collect())
}

fn policy_uses_query(policy: RetrievalPolicy) -> bool {
    !matches!(policy, RetrievalPolicy::Random { .. } | RetrievalPolicy::DiverseStatic)
}
