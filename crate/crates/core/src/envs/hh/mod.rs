//! Household domain: partial observability, privileged information and
//! stochastic action failures.

mod embedded;
mod suite;

use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::{Arc, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{failure_fires, EnvConfig, EnvError, Environment, Observation, StepResult};
use crate::pddl::{self, applicable, apply, Domain, GroundAction, GroundAtom, GroundTask, Name, ObjectName, State};

pub use suite::{
    family_of, load_household_dir, load_household_suite, load_household_task, HhFamily, HhTask, HH_CATALOG,
};

pub fn domain() -> Arc<Domain> {
    static DOMAIN: OnceLock<Arc<Domain>> = OnceLock::new();
    DOMAIN
        .get_or_init(|| Arc::new(pddl::parse_domain(pddl::fixtures::HOUSEHOLD_DOMAIN).expect("bundled domain parses")))
        .clone()
}

fn is_movable(task: &GroundTask, obj: &ObjectName) -> bool {
    task.type_of(obj.as_str()).is_some_and(|t| task.domain.types.is_subtype(t, &Name::lit("movable")))
}

/// Movable objects inside a closed container, mapped to that container.
pub fn hidden_objects(task: &GroundTask, state: &State) -> BTreeMap<ObjectName, ObjectName> {
    let mut hidden = BTreeMap::new();
    for a in state.iter().filter(|a| a.predicate.as_str() == "inside") {
        let (o, c) = (&a.args[0], &a.args[1]);
        if is_movable(task, o) && !state.contains(&GroundAtom { predicate: Name::lit("open"), args: vec![c.clone()] }) {
            hidden.insert(o.clone(), c.clone());
        }
    }
    hidden
}

/// Atoms of the fluent universe whose arguments are all observable.
pub fn hh_visibility(task: &GroundTask, state: &State) -> Vec<GroundAtom> {
    let hidden = hidden_objects(task, state);
    task.fluents.iter().filter(|a| a.args.iter().all(|o| !hidden.contains_key(o))).cloned().collect()
}

/// One line per hidden object: "the <object> can be found inside the <container>".
pub fn privileged_text(task: &GroundTask, state: &State) -> String {
    hidden_objects(task, state)
        .iter()
        .map(|(o, c)| format!("the {o} can be found inside the {c}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Text rendering of the visible part of the state.
pub fn describe_hh(task: &GroundTask, state: &State) -> String {
    let hidden = hidden_objects(task, state);
    let visible = |a: &&GroundAtom| a.args.iter().all(|o| !hidden.contains_key(o));
    let true_atoms: Vec<&GroundAtom> = state.iter().filter(visible).collect();
    let with = |pred: &'static str| true_atoms.iter().filter(move |a| a.predicate.as_str() == pred);

    let mut out = String::new();
    let held: Vec<String> = with("holding").map(|a| a.args[0].to_string()).collect();
    if held.is_empty() {
        out.push_str("The agent is not holding anything.\n");
    } else {
        let _ = writeln!(out, "The agent is holding the {}.", held.join(" and the "));
    }
    let reach: Vec<&ObjectName> = with("reachable").map(|a| &a.args[0]).collect();
    if reach.is_empty() {
        out.push_str("Nothing is within reach.\n");
    }
    for o in reach {
        let _ = writeln!(out, "The {o} is within reach.");
    }
    for (o, ty) in &task.objects {
        if ty.as_str() == "container" && !hidden.contains_key(o) {
            let open = state.contains(&GroundAtom { predicate: Name::lit("open"), args: vec![o.clone()] });
            let _ = writeln!(out, "The {o} is {}.", if open { "open" } else { "closed" });
        }
    }
    // Per-location listing.
    for (pred, phrase) in [("ontop", "On top of"), ("nextto", "Next to"), ("inside", "Inside")] {
        let mut by_place: BTreeMap<&ObjectName, Vec<&ObjectName>> = BTreeMap::new();
        for a in with(pred) {
            by_place.entry(&a.args[1]).or_default().push(&a.args[0]);
        }
        for (place, things) in by_place {
            let names: Vec<String> = things.iter().map(|t| format!("the {t}")).collect();
            let _ = writeln!(out, "{phrase} the {place}: {}.", names.join(", "));
        }
    }
    out.trim_end().to_string()
}

pub struct HhEnv {
    task: Arc<GroundTask>,
    state: State,
    failure_prob: f64,
    rng: ChaCha8Rng,
}

impl HhEnv {
    pub fn new(task: Arc<GroundTask>, cfg: &EnvConfig) -> Self {
        let state = task.init.clone();
        HhEnv { task, state, failure_prob: cfg.failure_prob, rng: ChaCha8Rng::seed_from_u64(cfg.seed) }
    }
}

/// State after a failed attempt at an applicable action.
///
/// `place-on` leaves the object next to the target, `place-inside` leaves it
/// on top of the container; every other action has no effect.
pub fn failed_outcome(state: &State, action: &GroundAction) -> State {
    let mut next = state.clone();
    let place = |next: &mut State, pred: &str| {
        let (m, target) = (&action.args[0], &action.args[1]);
        next.remove(&GroundAtom { predicate: Name::lit("holding"), args: vec![m.clone()] });
        next.insert(GroundAtom { predicate: Name::lit(pred), args: vec![m.clone(), target.clone()] });
    };
    match action.name.as_str() {
        "place-on" => place(&mut next, "nextto"),
        "place-inside" => place(&mut next, "ontop"),
        _ => {}
    }
    next
}

impl Environment for HhEnv {
    fn task(&self) -> &GroundTask {
        &self.task
    }

    fn truth(&self) -> &State {
        &self.state
    }

    fn observe(&self) -> Observation {
        Observation {
            visible: hh_visibility(&self.task, &self.state),
            description: describe_hh(&self.task, &self.state),
            image_svg: None,
            privileged: Some(privileged_text(&self.task, &self.state)),
        }
    }

    fn step(&mut self, action: &GroundAction) -> Result<StepResult, EnvError> {
        if self.task.domain.action(action.name.as_str()).is_none() {
            return Err(EnvError::Contract(format!("{action} is not a household action")));
        }
        let mut executed = false;
        if applicable(&self.state, action) {
            if failure_fires(self.failure_prob, &mut self.rng) {
                self.state = failed_outcome(&self.state, action);
            } else {
                self.state = apply(&self.state, action)?;
                executed = true;
            }
        }
        Ok(StepResult { executed, observation: self.observe(), goal_reached: self.goal_reached() })
    }

    fn scene_json(&self) -> serde_json::Value {
        let atoms: Vec<String> = self.state.iter().map(ToString::to_string).collect();
        serde_json::json!({ "atoms": atoms, "hidden": hidden_objects(&self.task, &self.state) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::DomainKind;
    use crate::pddl::fixtures;

    fn task() -> Arc<GroundTask> {
        Arc::new(pddl::load_task(fixtures::HOUSEHOLD_DOMAIN, fixtures::HOUSEHOLD_PROBLEM).unwrap())
    }

    fn atom(p: &str, args: &[&str]) -> GroundAtom {
        GroundAtom::new(p, args)
    }

    #[test]
    fn closed_container_hides_contents() {
        let t = task();
        let vis = hh_visibility(&t, &t.init);
        for a in [atom("holding", &["bowl_1"]), atom("ontop", &["bowl_1", "sink_1"]), atom("reachable", &["bowl_1"])] {
            assert!(!vis.contains(&a), "{a}");
        }
        assert!(vis.contains(&atom("open", &["cabinet_1"])));
        let mut open = t.init.clone();
        open.insert(atom("open", &["cabinet_1"]));
        let vis = hh_visibility(&t, &open);
        assert!(t.fluents.iter().filter(|a| a.args.iter().any(|o| o.as_str() == "bowl_1")).all(|a| vis.contains(a)));
        assert_eq!(hh_visibility(&t, &State::new()).len(), t.fluents.len());
    }

    #[test]
    fn privileged_names_container() {
        let t = task();
        assert_eq!(privileged_text(&t, &t.init), "the bowl_1 can be found inside the cabinet_1");
    }

    #[test]
    fn description_mentions_reach() {
        let t = task();
        let s: State = [atom("reachable", &["cabinet_1"])].into_iter().collect();
        let text = describe_hh(&t, &s);
        assert!(text.contains("The cabinet_1 is within reach."), "{text}");
    }

    #[test]
    fn grasp_and_close() {
        let t = task();
        let cfg = EnvConfig::new(DomainKind::Hh, 0.0, 0).unwrap();
        let mut env = HhEnv::new(t.clone(), &cfg);
        let act = |n: &str, a: &[&str]| t.find_action(n, a).unwrap().clone();
        assert!(env.step(&act("navigate-to", &["cabinet_1"])).unwrap().executed);
        assert!(env.step(&act("open-container", &["cabinet_1"])).unwrap().executed);
        assert!(env.step(&act("grasp", &["bowl_1"])).unwrap().executed);
        assert!(env.truth().contains(&atom("holding", &["bowl_1"])));
        assert!(!env.truth().contains(&atom("inside", &["bowl_1", "cabinet_1"])));

        let s: State = [
            atom("reachable", &["cabinet_1"]),
            atom("open", &["cabinet_1"]),
            atom("inside", &["bowl_1", "cabinet_1"]),
            atom("reachable", &["bowl_1"]),
        ]
        .into_iter()
        .collect();
        let next = apply(&s, &act("close-container", &["cabinet_1"])).unwrap();
        assert!(!next.contains(&atom("reachable", &["bowl_1"])));
    }

    #[test]
    fn failure_modes() {
        let t = task();
        let s: State = [atom("holding", &["bowl_1"]), atom("reachable", &["sink_1"])].into_iter().collect();
        let next = failed_outcome(&s, t.find_action("place-on", &["bowl_1", "sink_1"]).unwrap());
        assert!(next.contains(&atom("nextto", &["bowl_1", "sink_1"])));
        assert!(!next.contains(&atom("ontop", &["bowl_1", "sink_1"])));
        assert!(!next.contains(&atom("holding", &["bowl_1"])));
        let next = failed_outcome(&s, t.find_action("place-inside", &["bowl_1", "cabinet_1"]).unwrap());
        assert!(next.contains(&atom("ontop", &["bowl_1", "cabinet_1"])));
        assert_eq!(failed_outcome(&s, t.find_action("navigate-to", &["cabinet_1"]).unwrap()), s);

        let cfg = EnvConfig::new(DomainKind::Hh, 1.0, 0).unwrap();
        let mut env = HhEnv::new(t.clone(), &cfg);
        let r = env.step(t.find_action("navigate-to", &["cabinet_1"]).unwrap()).unwrap();
        assert!(!r.executed);
        assert_eq!(env.truth(), &t.init);
    }
}
