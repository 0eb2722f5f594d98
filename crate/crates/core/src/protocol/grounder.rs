use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{
    parse_yes_no, EpisodeMeta, EpisodeRecord, Event, Phase, Prompt, PromptTemplate, ProtocolError, QuestionTemplates,
    Setting,
};
use crate::agents::{Answerer, Query};
use crate::envs::Environment;
use crate::pddl::{GroundAction, GroundAtom, State};
use crate::planner::{PlanOutcome, Planner};

fn default_max_replans() -> usize {
    10
}
fn default_max_questions() -> usize {
    3000
}

/// Questions are always asked in fluent order (predicate, then arguments).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrounderConfig {
    #[serde(default)]
    pub cot: bool,
    #[serde(default = "default_max_replans")]
    pub max_replans: usize,
    #[serde(default = "default_max_questions")]
    pub max_questions: usize,
}

impl Default for GrounderConfig {
    fn default() -> Self {
        GrounderConfig { cot: false, max_replans: default_max_replans(), max_questions: default_max_questions() }
    }
}

enum Halt {
    Budget,
    Error(ProtocolError),
}

impl<E: Into<ProtocolError>> From<E> for Halt {
    fn from(e: E) -> Self {
        Halt::Error(e.into())
    }
}

struct Session<'a> {
    env: &'a mut dyn Environment,
    answerer: &'a mut dyn Answerer,
    templates: &'a QuestionTemplates,
    prompt: &'a PromptTemplate,
    cfg: &'a GrounderConfig,
    rec: EpisodeRecord,
}

impl Session<'_> {
    fn visible(&self) -> (BTreeSet<GroundAtom>, Prompt) {
        let obs = self.env.observe();
        let base = self.prompt.instantiate(&[], &obs);
        (obs.visible.into_iter().collect(), base)
    }

    /// Asks about one atom, re-prompting once on an unparsable reply.
    fn ask(&mut self, atom: &GroundAtom, phase: Phase, base: &Prompt) -> Result<Option<bool>, Halt> {
        let question = self.templates.atom_to_question(self.env.task(), atom)?;
        for attempt in 0..2u8 {
            if self.rec.counters.questions >= self.cfg.max_questions {
                return Err(Halt::Budget);
            }
            self.rec.counters.questions += 1;
            let mut suffix = format!("\nQuestion: {question}");
            if attempt > 0 {
                suffix.push_str(if self.cfg.cot {
                    "\nYour previous reply could not be parsed. Write the final answer as Yes or No surrounded by <answer></answer> tags."
                } else {
                    "\nYour previous reply could not be parsed. Answer ONLY with Yes or No."
                });
            }
            let prompt = base.with_user_suffix(&suffix);
            let truth = self.env.truth();
            let q = Query { atom, question: &question, prompt: &prompt, truth, cot: self.cfg.cot, attempt };
            let raw = self.answerer.answer(&q)?;
            let verdict = parse_yes_no(&raw, self.cfg.cot);
            let truth = truth.contains(atom);
            self.rec.events.push(Event::Question {
                phase,
                atom: atom.to_string(),
                question: question.clone(),
                raw,
                verdict,
                truth,
                attempt,
            });
            match verdict.as_bool() {
                Some(v) => return Ok(Some(v)),
                None => self.rec.counters.parse_faults += 1,
            }
        }
        Ok(None)
    }

    /// One question per visible non-reflexive atom; invisible atoms are
    /// copied from the privileged ground truth. Unparsable counts as "no".
    fn enumerate(&mut self) -> Result<State, Halt> {
        let (visible, base) = self.visible();
        let task = self.env.task();
        let mut est: State =
            task.fluents.iter().filter(|a| !visible.contains(*a) && self.env.truth().contains(a)).cloned().collect();
        for atom in visible.iter().filter(|a| !a.is_reflexive()) {
            if self.ask(atom, Phase::Enumerate, &base)?.unwrap_or(false) {
                est.insert(atom.clone());
            }
        }
        Ok(est)
    }

    fn inconsistent(&mut self, reason: String) -> Result<bool, Halt> {
        self.rec.events.push(Event::Inconsistency { reason });
        Ok(false)
    }

    /// Verifies and executes the plan. `Ok(true)` once the true goal holds,
    /// `Ok(false)` on the first inconsistency.
    fn execute(&mut self, mut est: State, plan: Vec<GroundAction>) -> Result<bool, Halt> {
        for action in plan {
            let (visible, base) = self.visible();
            let mut answered_ok = true;
            for atom in action.precondition.atoms().into_iter().filter(|a| visible.contains(*a) && !a.is_reflexive()) {
                match self.ask(atom, Phase::Precondition, &base)? {
                    Some(v) => est.set(atom, v),
                    None => answered_ok = false,
                }
            }
            if !answered_ok || !action.precondition.holds(&est) {
                return self.inconsistent(format!("precondition of {} not confirmed", action.signature()));
            }

            let expected = action.delta(&est);
            let step = self.env.step(&action)?;
            self.rec.counters.steps += 1;
            self.rec.events.push(Event::Action { action: action.signature(), executed: step.executed });
            if step.goal_reached {
                return Ok(true);
            }

            let visible: BTreeSet<GroundAtom> = step.observation.visible.iter().cloned().collect();
            let base = self.prompt.instantiate(&[], &step.observation);
            let checks: BTreeSet<&GroundAtom> = expected.add.iter().chain(&expected.del).collect();
            let mut mismatch = Vec::new();
            for atom in checks.into_iter().filter(|a| visible.contains(*a) && !a.is_reflexive()) {
                let want = expected.add.contains(atom);
                if self.ask(atom, Phase::Effect, &base)? != Some(want) {
                    mismatch.push(atom.to_string());
                }
            }
            if !mismatch.is_empty() {
                return self.inconsistent(format!(
                    "effects of {} not observed: {}",
                    action.signature(),
                    mismatch.join(" ")
                ));
            }
            for a in &expected.del {
                est.remove(a);
            }
            for a in expected.add {
                est.insert(a);
            }
        }
        self.inconsistent("plan finished without reaching the goal".to_string())
    }

    fn run(&mut self, planner: &dyn Planner) -> Result<(), Halt> {
        loop {
            let est = self.enumerate()?;
            if self.env.task().is_goal(&est) && self.env.goal_reached() {
                return Ok(());
            }
            let outcome = planner.plan_from(self.env.task(), &est)?;
            let (actions, status) = match outcome {
                PlanOutcome::Solved(p) => (p.actions, "solved"),
                PlanOutcome::Unsolvable => (Vec::new(), "unsolvable"),
                PlanOutcome::BudgetExceeded { .. } => (Vec::new(), "budget-exceeded"),
            };
            self.rec.events.push(Event::Plan {
                actions: actions.iter().map(GroundAction::signature).collect(),
                status: status.into(),
            });
            let done = if actions.is_empty() {
                self.inconsistent(format!("no plan from the current estimate ({status})"))?
            } else {
                self.execute(est, actions)?
            };
            if done {
                return Ok(());
            }
            if self.rec.counters.replans >= self.cfg.max_replans {
                return Err(Halt::Budget);
            }
            self.rec.counters.replans += 1;
        }
    }
}

/// Runs the planner-plus-verifier loop on a fresh environment.
pub fn run_grounder_episode(
    env: &mut dyn Environment,
    answerer: &mut dyn Answerer,
    planner: &dyn Planner,
    templates: &QuestionTemplates,
    prompt: &PromptTemplate,
    cfg: &GrounderConfig,
    meta: EpisodeMeta,
) -> Result<EpisodeRecord, ProtocolError> {
    let rec = EpisodeRecord::new(meta.task_id, Setting::Grounder, cfg.cot, meta.seed, answerer.name());
    let mut s = Session { env, answerer, templates, prompt, cfg, rec };
    match s.run(planner) {
        Ok(()) | Err(Halt::Budget) => {}
        Err(Halt::Error(e)) => return Err(e),
    }
    let reached = s.env.goal_reached();
    s.rec.finish(reached);
    Ok(s.rec)
}

/// A single enumeration pass. The estimate is `None` when the question
/// budget ran out; the record holds the asked questions.
pub fn enumerate_predicates(
    env: &mut dyn Environment,
    answerer: &mut dyn Answerer,
    templates: &QuestionTemplates,
    prompt: &PromptTemplate,
    cfg: &GrounderConfig,
) -> Result<(Option<State>, EpisodeRecord), ProtocolError> {
    let rec = EpisodeRecord::new("", Setting::Grounder, cfg.cot, 0, answerer.name());
    let mut s = Session { env, answerer, templates, prompt, cfg, rec };
    let est = match s.enumerate() {
        Ok(est) => Some(est),
        Err(Halt::Budget) => None,
        Err(Halt::Error(e)) => return Err(e),
    };
    Ok((est, s.rec))
}
