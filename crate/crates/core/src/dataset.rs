//! Correctness-labelled runs grouped by task.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::circuit::ResistanceBreakdown;
use crate::rng::{self, Rng};
use crate::strategy::{Strategy, StrategySpec};
use crate::{Error, Result};

/// One sampled answer for a task.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct RunRecord {
    pub model: String,
    pub temperature: f64,
    pub strategy: Strategy,
    /// Encoder/metric label selecting the fitted `λ`.
    pub representation: String,
    pub demo_ids: Vec<String>,
    pub correct: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct TaskRecord {
    pub task_id: String,
    /// Task or dataset family; one domain constant is fitted per family.
    pub family: String,
    pub query: String,
    pub resistance: ResistanceBreakdown,
    pub embedding_id: Option<String>,
    pub runs: Vec<RunRecord>,
}

impl TaskRecord {
    pub fn validate(&self) -> Result<()> {
        self.resistance
            .validate()
            .map_err(|e| Error::invalid(alloc::format!("task {}: {e}", self.task_id)))?;
        for (i, run) in self.runs.iter().enumerate() {
            if !(0.0..=1.0).contains(&run.temperature) {
                return Err(Error::invalid(alloc::format!(
                    "task {} run {i}: temperature {} outside [0, 1]",
                    self.task_id,
                    run.temperature
                )));
            }
            StrategySpec { strategy: run.strategy.clone(), base: self.resistance }
                .validate()
                .map_err(|e| Error::invalid(alloc::format!("task {} run {i}: {e}", self.task_id)))?;
        }
        Ok(())
    }

    pub fn spec(&self, run: &RunRecord, base: ResistanceBreakdown) -> StrategySpec {
        StrategySpec { strategy: run.strategy.clone(), base }
    }
}

/// Index of the first task whose id repeats an earlier one.
pub fn first_duplicate(tasks: &[TaskRecord]) -> Option<usize> {
    let mut seen = BTreeSet::new();
    tasks.iter().position(|t| !seen.insert(t.task_id.as_str()))
}

pub fn validate_tasks(tasks: &[TaskRecord]) -> Result<()> {
    if let Some(i) = first_duplicate(tasks) {
        return Err(Error::invalid(alloc::format!("duplicate task id {}", tasks[i].task_id)));
    }
    tasks.iter().try_for_each(TaskRecord::validate)
}

/// Seeded choice of `ceil(frac · n)` task indices, returned sorted.
pub fn validation_split(n: usize, frac: f64, seed: u64) -> Result<Vec<usize>> {
    if !(0.0..=1.0).contains(&frac) {
        return Err(Error::invalid(alloc::format!("validation fraction {frac} outside [0, 1]")));
    }
    let take = libm::ceil(frac * n as f64) as usize;
    let take = take.min(n);
    let mut rng = rng::seeded(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for i in 0..take {
        let j = rng.gen_range(i..n);
        order.swap(i, j);
    }
    order.truncate(take);
    order.sort_unstable();
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn task(id: &str) -> TaskRecord {
        TaskRecord {
            task_id: id.to_string(),
            family: "f".into(),
            query: "q".into(),
            resistance: ResistanceBreakdown::new(1.0, 1.0, 0.0, 0.0).unwrap(),
            embedding_id: None,
            runs: vec![RunRecord {
                model: "m".into(),
                temperature: 0.5,
                strategy: Strategy::ZeroShot,
                representation: "r".into(),
                demo_ids: vec![],
                correct: true,
            }],
        }
    }

    #[test]
    fn duplicates_and_validation() {
        let tasks = vec![task("a"), task("b"), task("a")];
        assert_eq!(first_duplicate(&tasks), Some(2));
        assert!(validate_tasks(&tasks).is_err());
        assert!(validate_tasks(&tasks[..2]).is_ok());
        let mut hot = task("c");
        hot.runs[0].temperature = 1.5;
        assert!(hot.validate().is_err());
    }

    #[test]
    fn split_is_seeded_and_sized() {
        let a = validation_split(100, 0.1, 3).unwrap();
        assert_eq!(a.len(), 10);
        assert_eq!(a, validation_split(100, 0.1, 3).unwrap());
        assert_ne!(a, validation_split(100, 0.1, 4).unwrap());
        assert_eq!(validation_split(5, 0.0, 1).unwrap().len(), 0);
        assert_eq!(validation_split(5, 0.1, 1).unwrap().len(), 1);
        assert!(validation_split(5, 1.5, 1).is_err());
    }
}
