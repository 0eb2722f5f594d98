use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::agents::ChatEndpointConfig;
use crate::envs::{DomainKind, Split};
use crate::protocol::{Setting, DEFAULT_STEP_MULTIPLIER};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AgentSpec {
    /// Reads the true state.
    Oracle,
    /// Oracle answers flipped with probability 1 - accuracy; in the planner
    /// setting, the oracle plan with probability `accuracy`, else a random action.
    Noisy {
        accuracy: f64,
        #[serde(default)]
        overrides: BTreeMap<String, f64>,
        #[serde(default)]
        seed: u64,
    },
    /// Raw replies from the episode logs of an earlier run directory.
    Replay {
        path: PathBuf,
    },
    Chat(ChatEndpointConfig),
}

impl AgentSpec {
    pub fn label(&self) -> String {
        match self {
            AgentSpec::Oracle => "oracle".to_string(),
            AgentSpec::Noisy { accuracy, .. } => format!("noisy-{accuracy}"),
            AgentSpec::Replay { path } => format!("replay:{}", path.display()),
            AgentSpec::Chat(c) => c.model.clone(),
        }
    }
}

fn default_splits() -> Vec<Split> {
    Split::ALL.to_vec()
}
fn default_problems() -> usize {
    25
}
fn default_replans() -> usize {
    10
}
fn default_questions() -> usize {
    3000
}
fn default_multiplier() -> usize {
    DEFAULT_STEP_MULTIPLIER
}
fn default_true() -> bool {
    true
}

/// One benchmark cell over one or more splits, as a single JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub domain: DomainKind,
    #[serde(default = "default_splits")]
    pub splits: Vec<Split>,
    pub setting: Setting,
    #[serde(default)]
    pub cot: bool,
    pub agent: AgentSpec,
    /// Name in reports; defaults to the agent label.
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub failure_prob: f64,
    #[serde(default)]
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads; all processors when absent.
    #[serde(default)]
    pub jobs: Option<usize>,
    /// Generated Blocksworld problems per split.
    #[serde(default = "default_problems")]
    pub problems: usize,
    /// Fixture root with one sub-directory per split, replacing the built-in tasks.
    #[serde(default)]
    pub tasks_dir: Option<PathBuf>,
    #[serde(default = "default_replans")]
    pub max_replans: usize,
    #[serde(default = "default_questions")]
    pub max_questions: usize,
    #[serde(default = "default_multiplier")]
    pub step_multiplier: usize,
    /// Run the oracle grounder once per task to count required predictions.
    #[serde(default = "default_true")]
    pub oracle_questions: bool,
}

impl RunConfig {
    pub fn new(domain: DomainKind, setting: Setting, agent: AgentSpec, out: PathBuf) -> Self {
        RunConfig {
            domain,
            splits: default_splits(),
            setting,
            cot: false,
            agent,
            label: None,
            failure_prob: 0.0,
            seed: 0,
            out,
            jobs: None,
            problems: default_problems(),
            tasks_dir: None,
            max_replans: default_replans(),
            max_questions: default_questions(),
            step_multiplier: default_multiplier(),
            oracle_questions: true,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Usage(m));
        if !(0.0..=1.0).contains(&self.failure_prob) {
            return bad(format!("failure_prob {} outside [0, 1]", self.failure_prob));
        }
        if self.splits.is_empty() {
            return bad("no splits selected".into());
        }
        if self.max_questions == 0 || self.step_multiplier == 0 {
            return bad("budgets must be positive".into());
        }
        if self.jobs == Some(0) {
            return bad("jobs must be positive".into());
        }
        if let AgentSpec::Noisy { accuracy, overrides, .. } = &self.agent {
            if let Some(a) = std::iter::once(accuracy).chain(overrides.values()).find(|a| !(0.0..=1.0).contains(*a)) {
                return bad(format!("accuracy {a} outside [0, 1]"));
            }
        }
        Ok(())
    }

    pub fn agent_label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.agent.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"domain": "hh", "setting": "planner", "agent": {"kind": "noisy", "accuracy": 0.9}, "out": "runs/x"}"#,
        )
        .unwrap();
        assert_eq!(cfg.splits, Split::ALL.to_vec());
        assert_eq!(cfg.max_replans, 10);
        assert!(cfg.validate().is_ok());
        let round: RunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(round, cfg);
    }

    #[test]
    fn rejects_bad_values() {
        let mut cfg = RunConfig::new(DomainKind::Bw, Setting::Grounder, AgentSpec::Oracle, "o".into());
        cfg.failure_prob = 1.5;
        assert!(matches!(cfg.validate(), Err(CliError::Usage(_))));
        assert!(serde_json::from_str::<RunConfig>(
            r#"{"domain":"bw","setting":"grounder","agent":{"kind":"oracle"},"out":"o","typo":1}"#
        )
        .is_err());
    }
}
