use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use ecp_core::dataset::TaskRecord;
use serde_json::Value;

use crate::{Error, FormatError, Location, Result};

/// How fields outside the task schema are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parsing {
    #[default]
    Strict,
    /// Unknown fields are dropped and reported as warnings.
    Lenient,
}

/// An ignored field, as `path.to.field`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownField {
    pub line: usize,
    pub field: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TaskFile {
    pub tasks: Vec<TaskRecord>,
    pub warnings: Vec<UnknownField>,
}

const TASK_FIELDS: &[&str] = &["task_id", "family", "query", "resistance", "embedding_id", "runs"];
const RESISTANCE_FIELDS: &[&str] = &["plan", "operation", "domain", "calculate"];
const RUN_FIELDS: &[&str] = &["model", "temperature", "strategy", "representation", "demo_ids", "correct"];
// Union over strategy kinds; per-kind checks are left to deserialisation.
const STRATEGY_FIELDS: &[&str] =
    &["kind", "multipliers", "n", "r_s", "step_resistances", "step_verifications", "k", "r_meta"];

/// Removes keys outside `allowed` from `v`, recording their paths.
fn strip(v: &mut Value, allowed: &[&str], prefix: &str, found: &mut Vec<String>) {
    if let Value::Object(map) = v {
        let unknown: Vec<String> = map.keys().filter(|k| !allowed.contains(&k.as_str())).cloned().collect();
        for k in unknown {
            map.remove(&k);
            found.push(format!("{prefix}{k}"));
        }
    }
}

fn unknown_fields(v: &mut Value) -> Vec<String> {
    let mut found = Vec::new();
    strip(v, TASK_FIELDS, "", &mut found);
    if let Some(r) = v.get_mut("resistance") {
        strip(r, RESISTANCE_FIELDS, "resistance.", &mut found);
    }
    if let Some(Value::Array(runs)) = v.get_mut("runs") {
        for (i, run) in runs.iter_mut().enumerate() {
            strip(run, RUN_FIELDS, &format!("runs[{i}]."), &mut found);
            if let Some(s) = run.get_mut("strategy") {
                strip(s, STRATEGY_FIELDS, &format!("runs[{i}].strategy."), &mut found);
                if let Some(m) = s.get_mut("multipliers") {
                    strip(m, RESISTANCE_FIELDS, &format!("runs[{i}].strategy.multipliers."), &mut found);
                }
            }
        }
    }
    found
}

/// Parses a line-delimited task file; blank lines are skipped.
pub fn read_tasks(text: &str, mode: Parsing) -> std::result::Result<TaskFile, FormatError> {
    let mut out = TaskFile::default();
    let mut seen = std::collections::HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let at = Location::Line(i + 1);
        if line.trim().is_empty() {
            continue;
        }
        let mut value: Value =
            serde_json::from_str(line).map_err(|e| FormatError::Syntax { at, message: e.to_string() })?;
        if !value.is_object() {
            return Err(FormatError::Syntax { at, message: "expected a JSON object".into() });
        }
        let unknown = unknown_fields(&mut value);
        if let Some(field) = unknown.first() {
            if mode == Parsing::Strict {
                return Err(FormatError::UnknownField { at, field: field.clone() });
            }
            out.warnings.extend(unknown.into_iter().map(|field| UnknownField { line: i + 1, field }));
        }
        let task: TaskRecord =
            serde_json::from_value(value).map_err(|e| FormatError::Syntax { at, message: e.to_string() })?;
        if !seen.insert(task.task_id.clone()) {
            return Err(FormatError::DuplicateId { at, id: task.task_id });
        }
        task.validate().map_err(|e| FormatError::Invalid { at, message: e.to_string() })?;
        out.tasks.push(task);
    }
    Ok(out)
}

pub fn write_tasks<W: Write>(mut w: W, tasks: &[TaskRecord]) -> std::io::Result<()> {
    for t in tasks {
        serde_json::to_writer(&mut w, t)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn load_tasks(path: impl AsRef<Path>, mode: Parsing) -> Result<TaskFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_tasks(&text, mode).map_err(|e| Error::format(path, e))
}

pub fn save_tasks(path: impl AsRef<Path>, tasks: &[TaskRecord]) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_tasks(BufWriter::new(file), tasks).map_err(|e| Error::io(path, e))
}
