use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;

use super::CliError;
use crate::envs::bw::{self, SplitSpec};
use crate::envs::hh::{self, HhFamily};
use crate::envs::{DomainKind, Split};
use crate::pddl::{self, GroundTask};
use crate::planner::{self, validate_plan};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationEntry {
    pub path: PathBuf,
    pub split: Option<Split>,
    pub plan_len: Option<usize>,
    /// Why the fixture was rejected; `None` when it passed.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub entries: Vec<ValidationEntry>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &ValidationEntry> {
        self.entries.iter().filter(|e| e.error.is_some())
    }
}

fn check(domain: DomainKind, split: Option<Split>, path: &Path) -> Result<usize, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let dom = match domain {
        DomainKind::Bw => bw::domain(),
        DomainKind::Hh => hh::domain(),
    };
    let problem = pddl::parse_problem(&text, &dom).map_err(|e| format!("parse: {e}"))?;
    let task: GroundTask = pddl::ground_shared(dom, Arc::new(problem)).map_err(|e| format!("ground: {e}"))?;
    let plan = match planner::plan(&task, planner::DEFAULT_BUDGET) {
        planner::PlanOutcome::Solved(p) => p,
        other => return Err(format!("no plan: {other:?}")),
    };
    if !validate_plan(&task, &task.init, &plan) {
        return Err("oracle plan does not reach the goal".into());
    }
    let len = plan.len();
    match (domain, split) {
        (DomainKind::Bw, Some(s)) => {
            let spec = SplitSpec::bw(s);
            if !spec.contains(len) {
                return Err(format!("optimal length {len} outside [{}, {}]", spec.min_len, spec.max_len));
            }
        }
        (DomainKind::Hh, Some(s)) => {
            let name = path.file_stem().unwrap_or_default().to_string_lossy();
            if let Some(f) = HhFamily::lookup(s, hh::family_of(&name)) {
                if f.actions != len {
                    return Err(format!("optimal length {len}, catalog lists {} for {}", f.actions, f.name));
                }
            }
        }
        (_, None) => {}
    }
    Ok(len)
}

fn pddl_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pddl"))
        .collect();
    paths.sort();
    Ok(paths)
}

/// Parses, grounds and solves every `*.pddl` under `dir`, replaying the
/// optimal plan against the goal. With a split, lengths are also checked
/// against its bounds (Blocksworld) or the family catalog (Household).
/// Without one, `simple/`, `medium/` and `hard/` subdirectories are
/// checked under their own split.
pub fn cmd_validate(dir: &Path, domain: DomainKind, split: Option<Split>) -> Result<ValidationReport, CliError> {
    let mut groups: Vec<(Option<Split>, PathBuf)> = Vec::new();
    if split.is_none() {
        groups.extend(Split::ALL.iter().map(|s| (Some(*s), dir.join(s.as_str()))).filter(|(_, d)| d.is_dir()));
    }
    if groups.is_empty() {
        groups.push((split, dir.to_path_buf()));
    }
    let mut report = ValidationReport::default();
    for (split, d) in groups {
        let files = pddl_files(&d)?;
        if files.is_empty() {
            report.warnings.push(format!("{}: no .pddl files", d.display()));
        }
        for path in files {
            let (plan_len, error) = match check(domain, split, &path) {
                Ok(n) => (Some(n), None),
                Err(e) => (None, Some(e)),
            };
            report.entries.push(ValidationEntry { path, split, plan_len, error });
        }
    }
    let failed: Vec<String> =
        report.failures().map(|e| format!("{}: {}", e.path.display(), e.error.as_deref().unwrap_or(""))).collect();
    if failed.is_empty() {
        Ok(report)
    } else {
        Err(CliError::Validation(failed.join("; ")))
    }
}
