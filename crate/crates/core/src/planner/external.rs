//! Adapter for an external planner binary run as a subprocess.

use std::path::PathBuf;
use std::process::Command;

use serde::{Deserialize, Serialize};

use super::{Plan, PlanOutcome, Planner};
use crate::pddl::{print_domain, print_problem_from, GroundTask, State};

#[derive(Debug, thiserror::Error)]
pub enum ExternalPlannerError {
    #[error("empty planner command")]
    EmptyCommand,
    #[error("failed to run planner: {0}")]
    Io(#[from] std::io::Error),
    #[error("planner exited with {status}: {stderr}")]
    Failed { status: String, stderr: String },
    #[error("planner output line {line}: unknown action `{text}`")]
    UnknownAction { line: usize, text: String },
}

/// Runs `command` with `{domain}`, `{problem}` and `{plan}` replaced by file
/// paths. The plan is read from `{plan}` if the file exists, otherwise from
/// stdout: one `(action arg ...)` per line; other lines are ignored.
/// A zero exit with no plan lines and an unsatisfied goal means unsolvable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExternalPlanner {
    pub command: Vec<String>,
    #[serde(default)]
    pub work_dir: Option<PathBuf>,
}

impl ExternalPlanner {
    pub fn run(&self, task: &GroundTask, state: &State) -> Result<PlanOutcome, ExternalPlannerError> {
        let (program, args) = self.command.split_first().ok_or(ExternalPlannerError::EmptyCommand)?;
        let dir = tempfile::Builder::new()
            .prefix("viplan-plan-")
            .tempdir_in(self.work_dir.clone().unwrap_or_else(std::env::temp_dir))?;
        let domain = dir.path().join("domain.pddl");
        let problem = dir.path().join("problem.pddl");
        let plan_file = dir.path().join("plan.txt");
        std::fs::write(&domain, print_domain(&task.domain))?;
        std::fs::write(&problem, print_problem_from(&task.problem, state.clone()))?;
        let subst = |s: &str| {
            s.replace("{domain}", &domain.to_string_lossy())
                .replace("{problem}", &problem.to_string_lossy())
                .replace("{plan}", &plan_file.to_string_lossy())
        };
        let output = Command::new(subst(program)).args(args.iter().map(|a| subst(a))).output()?;
        if !output.status.success() {
            return Err(ExternalPlannerError::Failed {
                status: output.status.to_string(),
                stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
            });
        }
        let text = match std::fs::read_to_string(&plan_file) {
            Ok(t) => t,
            Err(_) => String::from_utf8_lossy(&output.stdout).into_owned(),
        };
        let plan = parse_plan_lines(task, &text)?;
        if plan.is_empty() && !task.is_goal(state) {
            return Ok(PlanOutcome::Unsolvable);
        }
        Ok(PlanOutcome::Solved(plan))
    }
}

impl Planner for ExternalPlanner {
    fn plan_from(&self, task: &GroundTask, state: &State) -> Result<PlanOutcome, ExternalPlannerError> {
        self.run(task, state)
    }
}

fn parse_plan_lines(task: &GroundTask, text: &str) -> Result<Plan, ExternalPlannerError> {
    let mut actions = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split(';').next().unwrap_or("").trim();
        let Some(inner) = line.strip_prefix('(').and_then(|l| l.strip_suffix(')')) else { continue };
        let lower = inner.to_ascii_lowercase();
        let mut parts = lower.split_whitespace();
        let Some(name) = parts.next() else { continue };
        let args: Vec<&str> = parts.collect();
        let action = task
            .find_action(name, &args)
            .ok_or_else(|| ExternalPlannerError::UnknownAction { line: n + 1, text: line.to_string() })?;
        actions.push(action.clone());
    }
    Ok(Plan { actions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::{fixtures, load_task};

    #[test]
    fn parses_fast_downward_style_output() {
        let task = load_task(fixtures::BLOCKSWORLD_DOMAIN, fixtures::BLOCKSWORLD_PROBLEM).unwrap();
        let plan = parse_plan_lines(&task, "(moveblock y c3)\n(MOVEBLOCK R C2)\n; cost = 2 (unit cost)\n").unwrap();
        assert_eq!(plan.signatures(), ["moveblock(y, c3)", "moveblock(r, c2)"]);
        assert!(parse_plan_lines(&task, "(fly y)").is_err());
    }

    #[cfg(unix)]
    #[test]
    fn runs_a_shell_command() {
        let task = load_task(fixtures::BLOCKSWORLD_DOMAIN, fixtures::BLOCKSWORLD_PROBLEM).unwrap();
        let planner = ExternalPlanner {
            command: vec!["sh".into(), "-c".into(), "grep -q moveblock {domain} && echo '(moveblock y c3)'".into()],
            work_dir: None,
        };
        let outcome = planner.run(&task, &task.init).unwrap();
        assert_eq!(outcome.plan().unwrap().len(), 1);
    }
}
