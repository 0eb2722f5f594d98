use serde::{Deserialize, Serialize};

use super::{
    parse_plan_json, EpisodeMeta, EpisodeRecord, Event, PromptTemplate, ProtocolError, QuestionTemplates, Setting,
};
use crate::agents::{PlanAgent, PlanRequest};
use crate::envs::Environment;

pub const DEFAULT_STEP_MULTIPLIER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlannerLoopConfig {
    #[serde(default)]
    pub cot: bool,
    pub max_steps: usize,
}

impl PlannerLoopConfig {
    /// `multiplier` times the longest optimal plan of the split.
    pub fn for_split(cot: bool, upper_bound: usize, multiplier: usize) -> Self {
        PlannerLoopConfig { cot, max_steps: upper_bound * multiplier.max(1) }
    }
}

/// Numbered history with a success note per action.
pub fn previous_actions_text(history: &[(String, bool)]) -> String {
    if history.is_empty() {
        return "No actions have been taken yet.".to_string();
    }
    history
        .iter()
        .enumerate()
        .map(|(i, (a, ok))| format!("{}. {a}: {}", i + 1, if *ok { "succeeded" } else { "failed" }))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Requests a full plan each step and executes only its first action.
pub fn run_planner_episode(
    env: &mut dyn Environment,
    agent: &mut dyn PlanAgent,
    prompt: &PromptTemplate,
    templates: &QuestionTemplates,
    cfg: &PlannerLoopConfig,
    meta: EpisodeMeta,
) -> Result<EpisodeRecord, ProtocolError> {
    let mut rec = EpisodeRecord::new(meta.task_id, Setting::Planner, cfg.cot, meta.seed, agent.name());
    let goal_string = templates.goal_string(env.task())?;
    let mut history: Vec<(String, bool)> = Vec::new();

    while !env.goal_reached() && rec.counters.steps < cfg.max_steps {
        let obs = env.observe();
        let previous = previous_actions_text(&history);
        let privileged = obs.privileged.clone().filter(|p| !p.is_empty()).unwrap_or_else(|| "None".to_string());
        let vars =
            [("goal_string", goal_string.as_str()), ("previous_actions", &previous), ("priviledged_info", &privileged)];
        let base = prompt.instantiate(&vars, &obs);

        let mut first = None;
        let mut parsed_ok = false;
        for attempt in 0..2u8 {
            let p = match (attempt, rec.events.last()) {
                (1, Some(Event::PlanReply { error: Some(e), .. })) => base.with_user_suffix(&format!(
                    "\n\nYour previous reply could not be parsed ({e}). Reply with a JSON object in the required format."
                )),
                _ => base.clone(),
            };
            rec.counters.questions += 1;
            let req = PlanRequest { prompt: &p, task: env.task(), truth: env.truth(), cot: cfg.cot, attempt };
            let raw = agent.plan(&req)?;
            match parse_plan_json(&raw, Some(&env.task().domain)) {
                Ok(steps) => {
                    let parsed = steps.iter().map(|s| s.signature()).collect();
                    rec.events.push(Event::PlanReply { raw, parsed: Some(parsed), error: None, attempt });
                    first = steps.into_iter().next();
                    parsed_ok = true;
                    break;
                }
                Err(e) => {
                    rec.counters.parse_faults += 1;
                    rec.events.push(Event::PlanReply { raw, parsed: None, error: Some(e.to_string()), attempt });
                }
            }
        }

        rec.counters.steps += 1;
        let Some(step) = first else {
            let reason = if parsed_ok { "empty plan" } else { "unparsable reply" };
            rec.events.push(Event::Skip { reason: reason.to_string() });
            history.push((format!("({reason}, no action taken)"), false));
            continue;
        };
        let args: Vec<&str> = step.args.iter().map(String::as_str).collect();
        let executed = match env.task().find_action(&step.action, &args).cloned() {
            Some(action) => env.step(&action)?.executed,
            None => false,
        };
        rec.events.push(Event::Action { action: step.signature(), executed });
        history.push((step.signature(), executed));
    }

    let reached = env.goal_reached();
    rec.finish(reached);
    Ok(rec)
}
