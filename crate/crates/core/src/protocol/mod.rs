//! The two closed evaluation loops: a symbolic planner driven by yes/no
//! predicate answers, and a model that proposes whole plans step by step.

mod grounder;
mod parse;
mod planner_loop;
mod prompts;
mod templates;

use serde::{Deserialize, Serialize};

use crate::agents::AgentError;
use crate::envs::EnvError;
use crate::planner::ExternalPlannerError;

pub use grounder::{enumerate_predicates, run_grounder_episode, GrounderConfig};
pub use parse::{parse_plan_json, parse_yes_no, PlanParseError, PlanStep, Verdict};
pub use planner_loop::{previous_actions_text, run_planner_episode, PlannerLoopConfig, DEFAULT_STEP_MULTIPLIER};
pub use prompts::{Prompt, PromptTemplate, IMAGE};
pub use templates::{ObjectStyle, QuestionTemplates, Sentences};

#[derive(Debug, thiserror::Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Planner(#[from] ExternalPlannerError),
    #[error("no question template for predicate `{0}`")]
    MissingTemplate(String),
    #[error("template: {0}")]
    Template(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    Grounder,
    Planner,
}

impl Setting {
    pub fn as_str(self) -> &'static str {
        match self {
            Setting::Grounder => "grounder",
            Setting::Planner => "planner",
        }
    }
}

impl std::fmt::Display for Setting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Success,
    BudgetExhausted,
    /// Budget ran out and no model reply in the episode could be parsed.
    ParseDeadlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Enumerate,
    Precondition,
    Effect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Question {
        phase: Phase,
        atom: String,
        question: String,
        raw: String,
        verdict: Verdict,
        /// Ground-truth value at the time of asking.
        truth: bool,
        attempt: u8,
    },
    /// A symbolic plan computed from the current estimate.
    Plan {
        actions: Vec<String>,
        status: String,
    },
    /// A model reply in the planning loop.
    PlanReply {
        raw: String,
        parsed: Option<Vec<String>>,
        error: Option<String>,
        attempt: u8,
    },
    Action {
        action: String,
        executed: bool,
    },
    /// A step that executed nothing because the reply was unusable.
    Skip {
        reason: String,
    },
    Inconsistency {
        reason: String,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    /// Model calls, re-prompts included.
    pub questions: usize,
    pub replans: usize,
    /// Environment steps, skipped steps included.
    pub steps: usize,
    /// Replies that could not be parsed.
    pub parse_faults: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub task_id: String,
    pub setting: Setting,
    pub cot: bool,
    pub seed: u64,
    pub agent: String,
    pub events: Vec<Event>,
    pub counters: Counters,
    pub outcome: Outcome,
    /// Ground-truth goal check at termination.
    pub success: bool,
    /// Questions the oracle grounder needs on this task, when computed.
    #[serde(default)]
    pub oracle_questions: Option<usize>,
}

impl EpisodeRecord {
    fn new(task_id: &str, setting: Setting, cot: bool, seed: u64, agent: String) -> Self {
        EpisodeRecord {
            task_id: task_id.to_string(),
            setting,
            cot,
            seed,
            agent,
            events: Vec::new(),
            counters: Counters::default(),
            outcome: Outcome::BudgetExhausted,
            success: false,
            oracle_questions: None,
        }
    }

    fn finish(&mut self, goal_reached: bool) {
        self.success = goal_reached;
        self.outcome = if goal_reached {
            Outcome::Success
        } else if self.counters.questions > 0 && self.counters.parse_faults == self.counters.questions {
            Outcome::ParseDeadlock
        } else {
            Outcome::BudgetExhausted
        };
    }

    /// (correct, total) over answered questions, by predicate name.
    pub fn answer_tally(&self) -> std::collections::BTreeMap<String, (usize, usize)> {
        let mut out = std::collections::BTreeMap::<String, (usize, usize)>::new();
        for e in &self.events {
            if let Event::Question { atom, verdict, truth, .. } = e {
                let pred = atom.trim_start_matches('(').split(' ').next().unwrap_or_default().trim_end_matches(')');
                let slot = out.entry(pred.to_string()).or_default();
                slot.1 += 1;
                if verdict.as_bool() == Some(*truth) {
                    slot.0 += 1;
                }
            }
        }
        out
    }
}

/// Episode identity fields that do not affect the loop.
#[derive(Debug, Clone, Copy)]
pub struct EpisodeMeta<'a> {
    pub task_id: &'a str,
    pub seed: u64,
}
