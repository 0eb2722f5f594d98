use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::{AgentError, Answerer, PlanAgent, PlanRequest, Query};
use crate::pddl::{GroundAtom, GroundTask, State};
use crate::planner::{self, Plan, PlanOutcome};

fn yes_no(value: bool, cot: bool) -> String {
    let word = if value { "Yes" } else { "No" };
    if cot {
        format!("<explanation>oracle</explanation><answer>{word}</answer>")
    } else {
        word.to_string()
    }
}

/// Membership test on the true state.
pub fn oracle_answer(atom: &GroundAtom, truth: &State, cot: bool) -> String {
    yes_no(truth.contains(atom), cot)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OracleAnswerer;

impl Answerer for OracleAnswerer {
    fn name(&self) -> String {
        "oracle".to_string()
    }

    fn answer(&mut self, q: &Query) -> Result<String, AgentError> {
        Ok(oracle_answer(q.atom, q.truth, q.cot))
    }
}

/// Per-query Bernoulli correctness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisyProfile {
    pub accuracy: f64,
    /// Accuracy by predicate name, overriding `accuracy`.
    #[serde(default)]
    pub overrides: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

impl NoisyProfile {
    pub fn new(accuracy: f64, seed: u64) -> Self {
        NoisyProfile { accuracy, overrides: BTreeMap::new(), seed }
    }

    pub fn validate(&self) -> Result<(), AgentError> {
        let ok = |a: f64| (0.0..=1.0).contains(&a);
        if !ok(self.accuracy) {
            return Err(AgentError::Config(format!("accuracy {} outside [0, 1]", self.accuracy)));
        }
        match self.overrides.iter().find(|(_, &a)| !ok(a)) {
            Some((p, a)) => Err(AgentError::Config(format!("accuracy {a} for `{p}` outside [0, 1]"))),
            None => Ok(()),
        }
    }

    pub fn accuracy_for(&self, predicate: &str) -> f64 {
        self.overrides.get(predicate).copied().unwrap_or(self.accuracy)
    }

    /// Independent stream per episode under one profile seed.
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

pub struct NoisyAnswerer {
    profile: NoisyProfile,
    rng: ChaCha8Rng,
}

impl NoisyAnswerer {
    pub fn new(profile: NoisyProfile, stream: u64) -> Result<Self, AgentError> {
        profile.validate()?;
        let rng = profile.rng(stream);
        Ok(NoisyAnswerer { profile, rng })
    }

    /// The oracle answer, flipped with probability 1 - accuracy.
    pub fn noisy_answer(&mut self, atom: &GroundAtom, truth: &State, cot: bool) -> String {
        let correct = self.rng.random::<f64>() < self.profile.accuracy_for(atom.predicate.as_str());
        yes_no(truth.contains(atom) == correct, cot)
    }
}

impl Answerer for NoisyAnswerer {
    fn name(&self) -> String {
        format!("noisy-{}", self.profile.accuracy)
    }

    fn answer(&mut self, q: &Query) -> Result<String, AgentError> {
        Ok(self.noisy_answer(q.atom, q.truth, q.cot))
    }
}

/// Shape of `parameters` in emitted plans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamForm {
    /// `["bowl_1", "sink_1"]`
    List,
    /// `{"block": "y", "column": "c3"}`, keyed by type name when the
    /// parameter types are distinct, by variable name otherwise.
    Map,
}

/// Serializes a plan in the JSON shape the planner prompts ask for.
pub fn plan_to_json(task: &GroundTask, plan: &Plan, form: ParamForm, explanation: Option<&str>) -> String {
    let steps: Vec<Value> = plan
        .actions
        .iter()
        .map(|a| {
            let args: Vec<&str> = a.args.iter().map(|o| o.as_str()).collect();
            let params = match (form, task.domain.action(a.name.as_str())) {
                (ParamForm::Map, Some(schema)) => {
                    let types: std::collections::BTreeSet<&str> = schema.params.iter().map(|p| p.ty.as_str()).collect();
                    let by_type = types.len() == schema.params.len();
                    let mut map = Map::new();
                    for (p, v) in schema.params.iter().zip(&args) {
                        let key = if by_type { p.ty.as_str() } else { p.name.as_str().trim_start_matches('?') };
                        map.insert(key.to_string(), json!(v));
                    }
                    Value::Object(map)
                }
                _ => json!(args),
            };
            json!({ "action": a.name.as_str(), "parameters": params })
        })
        .collect();
    let mut obj = Map::new();
    if let Some(e) = explanation {
        obj.insert("explanation".into(), json!(e));
    }
    obj.insert("plan".into(), Value::Array(steps));
    Value::Object(obj).to_string()
}

/// Optimal plan from the true state; empty when the goal holds or no plan exists.
pub fn oracle_plan(truth: &State, task: &GroundTask, form: ParamForm, budget: usize) -> String {
    let plan = match planner::plan_from(task, truth, budget) {
        PlanOutcome::Solved(p) => p,
        other => {
            log::warn!("oracle planner found no plan: {other:?}");
            Plan { actions: Vec::new() }
        }
    };
    plan_to_json(task, &plan, form, None)
}

#[derive(Debug, Clone, Copy)]
pub struct OraclePlanAgent {
    pub form: ParamForm,
    pub budget: usize,
}

impl OraclePlanAgent {
    pub fn new(form: ParamForm) -> Self {
        OraclePlanAgent { form, budget: planner::DEFAULT_BUDGET }
    }
}

impl PlanAgent for OraclePlanAgent {
    fn name(&self) -> String {
        "oracle".to_string()
    }

    fn plan(&mut self, req: &PlanRequest) -> Result<String, AgentError> {
        Ok(oracle_plan(req.truth, req.task, self.form, self.budget))
    }
}

/// With probability `accuracy` returns the oracle plan, otherwise a
/// one-step plan with a uniformly random ground action.
pub struct NoisyPlanAgent {
    profile: NoisyProfile,
    form: ParamForm,
    rng: ChaCha8Rng,
}

impl NoisyPlanAgent {
    pub fn new(profile: NoisyProfile, form: ParamForm, stream: u64) -> Result<Self, AgentError> {
        profile.validate()?;
        let rng = profile.rng(stream);
        Ok(NoisyPlanAgent { profile, form, rng })
    }
}

impl PlanAgent for NoisyPlanAgent {
    fn name(&self) -> String {
        format!("noisy-{}", self.profile.accuracy)
    }

    fn plan(&mut self, req: &PlanRequest) -> Result<String, AgentError> {
        if self.rng.random::<f64>() < self.profile.accuracy || req.task.actions.is_empty() {
            return Ok(oracle_plan(req.truth, req.task, self.form, planner::DEFAULT_BUDGET));
        }
        let pick = req.task.actions[self.rng.random_range(0..req.task.actions.len())].clone();
        Ok(plan_to_json(req.task, &Plan { actions: vec![pick] }, self.form, None))
    }
}

/// Returns recorded raw responses in order.
#[derive(Debug, Clone, Default)]
pub struct Replay {
    responses: Vec<String>,
    cursor: usize,
}

impl Replay {
    pub fn new(responses: Vec<String>) -> Self {
        Replay { responses, cursor: 0 }
    }

    /// Collects every `raw` field of an episode JSONL log, in order.
    pub fn from_episode_log(path: &Path) -> Result<Self, AgentError> {
        let text = std::fs::read_to_string(path)?;
        let mut responses = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let v: Value = serde_json::from_str(line)
                .map_err(|e| AgentError::Config(format!("{}:{}: {e}", path.display(), i + 1)))?;
            if let Some(raw) = v.get("raw").and_then(Value::as_str) {
                responses.push(raw.to_string());
            }
        }
        Ok(Replay::new(responses))
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn next_response(&mut self) -> Result<String, AgentError> {
        let r = self.responses.get(self.cursor).cloned().ok_or(AgentError::ReplayExhausted(self.responses.len()))?;
        self.cursor += 1;
        Ok(r)
    }
}

impl Answerer for Replay {
    fn name(&self) -> String {
        "replay".to_string()
    }

    fn answer(&mut self, _: &Query) -> Result<String, AgentError> {
        self.next_response()
    }
}

impl PlanAgent for Replay {
    fn name(&self) -> String {
        "replay".to_string()
    }

    fn plan(&mut self, _: &PlanRequest) -> Result<String, AgentError> {
        self.next_response()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::{fixtures, load_task};
    use crate::protocol::parse_plan_json;

    #[test]
    fn oracle_formats() {
        let truth: State = [GroundAtom::new("clear", &["y"])].into_iter().collect();
        assert_eq!(oracle_answer(&GroundAtom::new("clear", &["y"]), &truth, false), "Yes");
        assert_eq!(oracle_answer(&GroundAtom::new("clear", &["r"]), &truth, false), "No");
        assert_eq!(
            oracle_answer(&GroundAtom::new("clear", &["y"]), &truth, true),
            "<explanation>oracle</explanation><answer>Yes</answer>"
        );
    }

    #[test]
    fn noisy_extremes_and_rate() {
        let atom = GroundAtom::new("clear", &["y"]);
        let truth: State = [atom.clone()].into_iter().collect();
        let mut perfect = NoisyAnswerer::new(NoisyProfile::new(1.0, 1), 0).unwrap();
        let mut inverted = NoisyAnswerer::new(NoisyProfile::new(0.0, 1), 0).unwrap();
        for _ in 0..100 {
            assert_eq!(perfect.noisy_answer(&atom, &truth, false), "Yes");
            assert_eq!(inverted.noisy_answer(&atom, &truth, false), "No");
        }
        let mut noisy = NoisyAnswerer::new(NoisyProfile::new(0.97, 7), 0).unwrap();
        let n = 100_000;
        let correct = (0..n).filter(|_| noisy.noisy_answer(&atom, &truth, false) == "Yes").count();
        let rate = correct as f64 / n as f64;
        assert!((rate - 0.97).abs() <= 0.003, "{rate}");
        assert!(NoisyAnswerer::new(NoisyProfile::new(1.5, 0), 0).is_err());
    }

    #[test]
    fn noisy_is_deterministic_per_stream() {
        let atom = GroundAtom::new("clear", &["y"]);
        let truth = State::new();
        let run = |stream| {
            let mut a = NoisyAnswerer::new(NoisyProfile::new(0.5, 3), stream).unwrap();
            (0..64).map(|_| a.noisy_answer(&atom, &truth, false)).collect::<Vec<_>>()
        };
        assert_eq!(run(0), run(0));
        assert_ne!(run(0), run(1));
    }

    #[test]
    fn oracle_plan_round_trips() {
        let task = load_task(fixtures::BLOCKSWORLD_DOMAIN, fixtures::BLOCKSWORLD_PROBLEM).unwrap();
        let text = oracle_plan(&task.init, &task, ParamForm::Map, planner::DEFAULT_BUDGET);
        assert!(text.contains("\"block\""), "{text}");
        let steps = parse_plan_json(&text, Some(&task.domain)).unwrap();
        assert_eq!(steps.len(), 4);
        let list = oracle_plan(&task.init, &task, ParamForm::List, planner::DEFAULT_BUDGET);
        assert_eq!(parse_plan_json(&list, None).unwrap(), steps);
        let solved = planner::plan(&task, planner::DEFAULT_BUDGET).into_plan().unwrap();
        let end = solved.actions.iter().fold(task.init.clone(), |s, a| a.successor(&s));
        assert_eq!(oracle_plan(&end, &task, ParamForm::List, 1000), "{\"plan\":[]}");
    }

    #[test]
    fn replay_cursor() {
        let mut r = Replay::new(vec!["Yes".into(), "No".into()]);
        assert_eq!(r.next_response().unwrap(), "Yes");
        assert_eq!(r.next_response().unwrap(), "No");
        assert_eq!(r.cursor(), 2);
        assert!(matches!(r.next_response(), Err(AgentError::ReplayExhausted(2))));
    }
}
