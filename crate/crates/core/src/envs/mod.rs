//! Executable environments: Blocksworld (fully observable, generated) and
//! Household (partially observable, curated fixtures).

pub mod bw;
pub mod generic;
pub mod hh;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::pddl::{GroundAction, GroundAtom, GroundTask, PddlError, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Simple,
    Medium,
    Hard,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Simple, Split::Medium, Split::Hard];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Simple => "simple",
            Split::Medium => "medium",
            Split::Hard => "hard",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = EnvError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Split::ALL
            .into_iter()
            .find(|x| x.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| EnvError::Config(format!("unknown split `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Bw,
    Hh,
}

impl DomainKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DomainKind::Bw => "bw",
            DomainKind::Hh => "hh",
        }
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DomainKind {
    type Err = EnvError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [DomainKind::Bw, DomainKind::Hh]
            .into_iter()
            .find(|x| x.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| EnvError::Config(format!("unknown domain `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvConfig {
    pub domain: DomainKind,
    /// Probability that an applicable action fails.
    pub failure_prob: f64,
    pub seed: u64,
}

impl EnvConfig {
    pub fn new(domain: DomainKind, failure_prob: f64, seed: u64) -> Result<Self, EnvError> {
        if !(0.0..=1.0).contains(&failure_prob) {
            return Err(EnvError::Config(format!("failure probability {failure_prob} outside [0, 1]")));
        }
        Ok(EnvConfig { domain, failure_prob, seed })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    /// Atoms of the fluent universe whose truth value can be observed now
    /// (reflexive tuples included; the grounder filters them).
    pub visible: Vec<GroundAtom>,
    pub description: String,
    /// SVG scene surrogate, when the domain renders one.
    pub image_svg: Option<String>,
    pub privileged: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepResult {
    /// False when the action was inapplicable or failed.
    pub executed: bool,
    pub observation: Observation,
    pub goal_reached: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum EnvError {
    #[error(transparent)]
    Pddl(#[from] PddlError),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("fixture `{name}`: {reason}")]
    Fixture { name: String, reason: String },
    #[error("no task with optimal length in [{lo}, {hi}] after {attempts} attempts")]
    GenerationExhausted { lo: usize, hi: usize, attempts: usize },
    #[error("scene does not match state: {0}")]
    Scene(String),
}

/// A single-owner simulation of one task.
pub trait Environment: Send {
    fn task(&self) -> &GroundTask;
    /// Ground-truth symbolic state.
    fn truth(&self) -> &State;
    fn observe(&self) -> Observation;
    fn step(&mut self, action: &GroundAction) -> Result<StepResult, EnvError>;
    /// Structured scene dump written next to episode logs.
    fn scene_json(&self) -> serde_json::Value;

    fn goal_reached(&self) -> bool {
        goal_reached(self.truth(), self.task())
    }
}

/// Success is always judged on the ground-truth state.
pub fn goal_reached(truth: &State, task: &GroundTask) -> bool {
    task.goal.is_satisfied(truth)
}

pub(crate) fn failure_fires(p: f64, rng: &mut impl rand::Rng) -> bool {
    p > 0.0 && rng.random::<f64>() < p
}
