//! Optimal forward search over ground tasks.

mod compiled;
mod external;

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::pddl::{apply, GroundAction, GroundTask, State};
use compiled::{Bits, Compiled};

pub use external::{ExternalPlanner, ExternalPlannerError};

pub const DEFAULT_BUDGET: usize = 5_000_000;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plan {
    pub actions: Vec<GroundAction>,
}

impl Plan {
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn signatures(&self) -> Vec<String> {
        self.actions.iter().map(GroundAction::signature).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlanOutcome {
    Solved(Plan),
    Unsolvable,
    BudgetExceeded { expanded: usize },
}

impl PlanOutcome {
    pub fn plan(&self) -> Option<&Plan> {
        match self {
            PlanOutcome::Solved(p) => Some(p),
            _ => None,
        }
    }

    pub fn into_plan(self) -> Option<Plan> {
        match self {
            PlanOutcome::Solved(p) => Some(p),
            _ => None,
        }
    }
}

pub fn plan(task: &GroundTask, budget: usize) -> PlanOutcome {
    plan_from(task, &task.init, budget)
}

/// Breadth-first search from `state`: goal test on generation, FIFO
/// expansion, actions tried in grounded order. Returns a shortest plan.
pub fn plan_from(task: &GroundTask, state: &State, budget: usize) -> PlanOutcome {
    let compiled = Compiled::new(task);
    let start = compiled.encode(task, state);
    if compiled.is_goal(&start) {
        return PlanOutcome::Solved(Plan::default());
    }

    // Arena of visited states with parent links.
    let mut nodes: Vec<(Bits, usize, usize)> = vec![(start.clone(), usize::MAX, usize::MAX)];
    let mut seen: HashMap<Bits, usize> = HashMap::new();
    seen.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    let mut expanded = 0usize;

    while let Some(node) = queue.pop_front() {
        if expanded >= budget {
            return PlanOutcome::BudgetExceeded { expanded };
        }
        expanded += 1;
        for a in 0..compiled.num_actions() {
            let Some(next) = compiled.successor(&nodes[node].0, a) else { continue };
            let goal = compiled.is_goal(&next);
            let id = nodes.len();
            match seen.entry(next) {
                Entry::Occupied(_) => continue,
                Entry::Vacant(v) => {
                    nodes.push((v.key().clone(), node, a));
                    v.insert(id);
                }
            }
            if goal {
                return PlanOutcome::Solved(extract(task, &nodes, id));
            }
            queue.push_back(id);
        }
    }
    log::debug!("search exhausted after {expanded} expansions");
    PlanOutcome::Unsolvable
}

fn extract(task: &GroundTask, nodes: &[(Bits, usize, usize)], mut id: usize) -> Plan {
    let mut actions = Vec::new();
    while nodes[id].1 != usize::MAX {
        actions.push(task.actions[nodes[id].2].clone());
        id = nodes[id].1;
    }
    actions.reverse();
    Plan { actions }
}

/// True iff every step is applicable in sequence from `state` and the final
/// state satisfies the goal.
pub fn validate_plan(task: &GroundTask, state: &State, plan: &Plan) -> bool {
    let mut s = state.clone();
    for a in &plan.actions {
        match apply(&s, a) {
            Ok(next) => s = next,
            Err(_) => return false,
        }
    }
    task.is_goal(&s)
}

/// A planning backend the protocols can call.
pub trait Planner: Send + Sync {
    fn plan_from(&self, task: &GroundTask, state: &State) -> Result<PlanOutcome, ExternalPlannerError>;
}

#[derive(Debug, Clone, Copy)]
pub struct BfsPlanner {
    pub budget: usize,
}

impl Default for BfsPlanner {
    fn default() -> Self {
        BfsPlanner { budget: DEFAULT_BUDGET }
    }
}

impl Planner for BfsPlanner {
    fn plan_from(&self, task: &GroundTask, state: &State) -> Result<PlanOutcome, ExternalPlannerError> {
        Ok(plan_from(task, state, self.budget))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::{fixtures, load_task, GroundAtom};

    fn bw() -> GroundTask {
        load_task(fixtures::BLOCKSWORLD_DOMAIN, fixtures::BLOCKSWORLD_PROBLEM).unwrap()
    }

    #[test]
    fn simple_problem_needs_four_moves() {
        let task = bw();
        let plan = plan(&task, DEFAULT_BUDGET).into_plan().unwrap();
        assert_eq!(plan.len(), 4);
        assert!(validate_plan(&task, &task.init, &plan));
    }

    #[test]
    fn goal_state_gives_empty_plan() {
        let task = bw();
        let goal: State = task.goal.pos.iter().cloned().collect();
        assert_eq!(plan_from(&task, &goal, 10), PlanOutcome::Solved(Plan::default()));
        assert!(validate_plan(&task, &goal, &Plan::default()));
    }

    #[test]
    fn after_first_move_three_remain() {
        let task = bw();
        let s = apply(&task.init, task.find_action("moveblock", &["y", "c3"]).unwrap()).unwrap();
        assert_eq!(plan_from(&task, &s, DEFAULT_BUDGET).into_plan().unwrap().len(), 3);
    }

    #[test]
    fn inapplicable_first_step_fails_validation() {
        let task = bw();
        let bad = Plan { actions: vec![task.find_action("moveblock", &["y", "c2"]).unwrap().clone()] };
        assert!(!validate_plan(&task, &task.init, &bad));
    }

    #[test]
    fn budget_is_respected() {
        let task = bw();
        assert_eq!(plan(&task, 1), PlanOutcome::BudgetExceeded { expanded: 1 });
    }

    #[test]
    fn inconsistent_estimate_still_plans() {
        let task = bw();
        let mut s = task.init.clone();
        s.insert(GroundAtom::new("incolumn", &["y", "c3"]));
        let outcome = plan_from(&task, &s, DEFAULT_BUDGET);
        assert!(validate_plan(&task, &s, outcome.plan().unwrap()));
    }
}
