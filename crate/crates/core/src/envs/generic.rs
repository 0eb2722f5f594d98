use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{failure_fires, EnvConfig, EnvError, Environment, Observation, StepResult};
use crate::pddl::{applicable, apply, GroundAction, GroundTask, State};

/// Fully observable environment over any grounded task. Failed or
/// inapplicable actions are no-ops.
pub struct SymbolicEnv {
    task: Arc<GroundTask>,
    state: State,
    failure_prob: f64,
    rng: ChaCha8Rng,
}

impl SymbolicEnv {
    pub fn new(task: Arc<GroundTask>, cfg: &EnvConfig) -> Self {
        let state = task.init.clone();
        SymbolicEnv { task, state, failure_prob: cfg.failure_prob, rng: ChaCha8Rng::seed_from_u64(cfg.seed) }
    }
}

impl Environment for SymbolicEnv {
    fn task(&self) -> &GroundTask {
        &self.task
    }

    fn truth(&self) -> &State {
        &self.state
    }

    fn observe(&self) -> Observation {
        let atoms: Vec<String> = self.state.iter().map(ToString::to_string).collect();
        let description =
            if atoms.is_empty() { "No facts hold.".to_string() } else { format!("True facts: {}", atoms.join(" ")) };
        Observation { visible: self.task.fluents.clone(), description, image_svg: None, privileged: None }
    }

    fn step(&mut self, action: &GroundAction) -> Result<StepResult, EnvError> {
        if self.task.domain.action(action.name.as_str()).is_none() {
            return Err(EnvError::Contract(format!("{action} is not an action of this domain")));
        }
        let executed = applicable(&self.state, action) && !failure_fires(self.failure_prob, &mut self.rng);
        if executed {
            self.state = apply(&self.state, action)?;
        }
        Ok(StepResult { executed, observation: self.observe(), goal_reached: self.goal_reached() })
    }

    fn scene_json(&self) -> serde_json::Value {
        let atoms: Vec<String> = self.state.iter().map(ToString::to_string).collect();
        serde_json::json!({ "atoms": atoms })
    }
}
