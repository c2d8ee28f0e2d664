//! Difficulty estimates from rationale text.
//!
//! Planning steps are the larger of the number of `Step <n>:` markers and the
//! number of blank-line separators (`"\n\n"`). Local operations are clause
//! boundaries (`,` `;` `.` followed by whitespace or the end of the text)
//! plus bullet lines starting with `"- "` or `"• "`. Both counts are noisy
//! by nature; they are a cheap proxy for hand annotation.

use std::sync::OnceLock;

use regex::Regex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct StepAnnotation {
    pub plan_steps: usize,
    pub local_ops: usize,
}

fn step_marker() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)\bstep \d+:").expect("valid pattern"))
}

pub fn annotate_steps(rationale: &str) -> StepAnnotation {
    let markers = step_marker().find_iter(rationale).count();
    let separators = rationale.matches("\n\n").count();
    let chars: Vec<char> = rationale.chars().collect();
    let clauses = chars
        .iter()
        .enumerate()
        .filter(|&(i, c)| matches!(c, ',' | ';' | '.') && chars.get(i + 1).map_or(true, |n| n.is_whitespace()))
        .count();
    let bullets = rationale.lines().filter(|l| l.starts_with("- ") || l.starts_with("• ")).count();
    StepAnnotation { plan_steps: markers.max(separators), local_ops: clauses + bullets }
}
