use std::collections::BTreeSet;

use proptest::prelude::*;
use viplan_core::pddl::{
    self, applicable, apply, fixtures, holds, parse_domain, parse_problem, Formula, GroundAction, GroundAtom,
    GroundTask, State,
};

fn bw() -> GroundTask {
    pddl::load_task(fixtures::BLOCKSWORLD_DOMAIN, fixtures::BLOCKSWORLD_PROBLEM).unwrap()
}

fn hh() -> GroundTask {
    pddl::load_task(fixtures::HOUSEHOLD_DOMAIN, fixtures::HOUSEHOLD_PROBLEM).unwrap()
}

/// Counts typed tuples directly from the declared object types, without the grounder.
fn brute_force_tuples(task: &GroundTask, param_types: &[&str]) -> usize {
    let objs = &task.problem.objects;
    let fits = |obj_ty: &str, want: &str| {
        let mut t = obj_ty.to_string();
        loop {
            if t == want {
                return true;
            }
            match task.domain.types.parent(&pddl::Name::lit(&t)) {
                Some(p) => t = p.to_string(),
                None => return want == "object",
            }
        }
    };
    param_types.iter().map(|want| objs.iter().filter(|(_, t)| fits(t.as_str(), want)).count()).product()
}

#[test]
fn blocksworld_fluent_universe() {
    let task = bw();
    let count = |pred: &str| task.fluents.iter().filter(|a| a.predicate.as_str() == pred).count();
    assert_eq!(count("on"), brute_force_tuples(&task, &["block", "block"]));
    assert_eq!(count("incolumn"), brute_force_tuples(&task, &["block", "column"]));
    assert_eq!(count("clear"), brute_force_tuples(&task, &["block"]));
    assert_eq!(count("leftof"), brute_force_tuples(&task, &["column", "column"]));
    assert_eq!(count("rightof"), brute_force_tuples(&task, &["column", "column"]));
    assert_eq!((count("on"), count("incolumn"), count("clear"), count("leftof")), (9, 12, 3, 16));
    assert_eq!(task.fluents.len(), 56);
    assert!(task.fluents.contains(&GroundAtom::new("on", &["y", "y"])));
    assert_eq!(task.actions.len(), brute_force_tuples(&task, &["block", "column"]));
    assert_eq!(task.actions.len(), 12);
}

#[test]
fn household_action_count_matches_enumeration() {
    let task = hh();
    let mut expected = 0;
    for schema in &task.domain.actions {
        let tys: Vec<&str> = schema.params.iter().map(|p| p.ty.as_str()).collect();
        let n = brute_force_tuples(&task, &tys);
        let got = task.actions.iter().filter(|a| a.name == schema.name).count();
        assert_eq!(got, n, "{}", schema.name);
        expected += n;
    }
    assert_eq!(task.actions.len(), expected);
    assert_eq!(expected, 13);
}

#[test]
fn zero_object_problem_grounds_to_nothing() {
    let d = parse_domain(fixtures::BLOCKSWORLD_DOMAIN).unwrap();
    let p = parse_problem("(define (problem empty) (:domain blocksworld) (:init) (:goal (and)))", &d).unwrap();
    let task = pddl::ground(&d, &p).unwrap();
    assert!(task.fluents.is_empty());
    assert!(task.actions.is_empty());
    assert!(task.is_goal(&task.init));
}

#[test]
fn grounding_is_deterministic_and_sorted() {
    let (a, b) = (bw(), bw());
    assert_eq!(a.fluents, b.fluents);
    assert_eq!(a.actions, b.actions);
    let mut sorted = a.fluents.clone();
    sorted.sort();
    assert_eq!(sorted, a.fluents);
    let sigs: Vec<_> = a.actions.iter().map(|x| (x.name.clone(), x.args.clone())).collect();
    let mut s2 = sigs.clone();
    s2.sort();
    assert_eq!(sigs, s2);
}

#[test]
fn holds_examples() {
    let state: State = [GroundAtom::new("clear", &["y"])].into_iter().collect();
    assert!(holds(&state, &Formula::ground_atom("clear", &["y"])).unwrap());
    assert!(holds(&state, &Formula::negate(Formula::ground_atom("clear", &["p"]))).unwrap());
    let task = bw();
    assert!(!holds(&task.init, &task.goal.to_formula()).unwrap());
    assert!(!holds(&task.init, &task.problem.goal).unwrap());
    let when =
        Formula::When(Box::new(Formula::ground_atom("clear", &["y"])), Box::new(Formula::ground_atom("clear", &["p"])));
    assert!(holds(&state, &when).is_err());
}

#[test]
fn applicable_examples() {
    let task = bw();
    assert!(applicable(&task.init, task.find_action("moveblock", &["y", "c3"]).unwrap()));
    assert!(!applicable(&task.init, task.find_action("moveblock", &["y", "c2"]).unwrap()));
    let h = hh();
    assert!(!applicable(&State::new(), h.find_action("grasp", &["bowl_1"]).unwrap()));
}

#[test]
fn apply_examples() {
    let task = bw();
    let next = apply(&task.init, task.find_action("moveblock", &["y", "c3"]).unwrap()).unwrap();
    assert!(next.contains(&GroundAtom::new("incolumn", &["y", "c3"])));
    assert!(!next.contains(&GroundAtom::new("incolumn", &["y", "c2"])));
    for b in ["y", "p", "r"] {
        assert!(next.contains(&GroundAtom::new("clear", &[b])));
    }
    assert!(apply(&task.init, task.find_action("moveblock", &["y", "c2"]).unwrap()).is_err());

    // P on R in C4, move P to the empty C3.
    let s: State = [
        GroundAtom::new("on", &["p", "r"]),
        GroundAtom::new("clear", &["p"]),
        GroundAtom::new("incolumn", &["p", "c4"]),
        GroundAtom::new("incolumn", &["r", "c4"]),
    ]
    .into_iter()
    .collect();
    let next = apply(&s, task.find_action("moveblock", &["p", "c3"]).unwrap()).unwrap();
    assert!(!next.contains(&GroundAtom::new("on", &["p", "r"])));
    assert!(next.contains(&GroundAtom::new("clear", &["r"])));

    let h = hh();
    let s: State = [GroundAtom::new("reachable", &["cabinet_1"]), GroundAtom::new("inside", &["bowl_1", "cabinet_1"])]
        .into_iter()
        .collect();
    let next = apply(&s, h.find_action("open-container", &["cabinet_1"]).unwrap()).unwrap();
    assert!(next.contains(&GroundAtom::new("open", &["cabinet_1"])));
    assert!(next.contains(&GroundAtom::new("reachable", &["bowl_1"])));
}

#[test]
fn navigate_to_or_precondition() {
    let h = hh();
    let nav = h.find_action("navigate-to", &["bowl_1"]).unwrap();
    let hidden: State = [GroundAtom::new("inside", &["bowl_1", "cabinet_1"])].into_iter().collect();
    assert!(!applicable(&hidden, nav));
    let mut open = hidden.clone();
    open.insert(GroundAtom::new("open", &["cabinet_1"]));
    assert!(applicable(&open, nav));
    // Navigating elsewhere drops reachability of everything else.
    let mut s = open.clone();
    s.insert(GroundAtom::new("reachable", &["cabinet_1"]));
    s.insert(GroundAtom::new("reachable", &["bowl_1"]));
    let next = apply(&s, h.find_action("navigate-to", &["sink_1"]).unwrap()).unwrap();
    let reach: Vec<_> = next.iter().filter(|a| a.predicate.as_str() == "reachable").collect();
    assert_eq!(reach, vec![&GroundAtom::new("reachable", &["sink_1"])]);
    // Navigating to an open container also reaches its contents.
    let next = apply(&next, h.find_action("navigate-to", &["cabinet_1"]).unwrap()).unwrap();
    assert!(next.contains(&GroundAtom::new("reachable", &["bowl_1"])));
}

#[test]
fn add_wins_over_delete() {
    let d = parse_domain(
        "(define (domain t) (:requirements :conditional-effects) (:predicates (p) (q))
           (:action a :parameters () :precondition (and) :effect (and (not (p)) (when (q) (p)))))",
    )
    .unwrap();
    let p = parse_problem("(define (problem t) (:domain t) (:init (p) (q)) (:goal (p)))", &d).unwrap();
    let task = pddl::ground(&d, &p).unwrap();
    let next = apply(&task.init, &task.actions[0]).unwrap();
    assert!(next.contains(&GroundAtom::new("p", &[])));
}

/// Reference semantics: expand each ground action into its 2^k unconditional
/// variants and pick the one whose condition pattern matches the state.
fn expanded_apply(state: &State, action: &GroundAction) -> State {
    let conditional: Vec<_> = action.effects.iter().filter(|e| !e.is_unconditional()).collect();
    let k = conditional.len();
    assert!(k < 20);
    let mut matching = Vec::new();
    for mask in 0u32..(1 << k) {
        let pattern_holds = conditional.iter().enumerate().all(|(i, e)| {
            let cond = e.cond_pos.iter().all(|a| state.contains(a)) && e.cond_neg.iter().all(|a| !state.contains(a));
            cond == (mask & (1 << i) != 0)
        });
        if pattern_holds {
            matching.push(mask);
        }
    }
    assert_eq!(matching.len(), 1, "exactly one variant must match");
    let mask = matching[0];
    let mut adds = BTreeSet::new();
    let mut dels = BTreeSet::new();
    for e in action.effects.iter().filter(|e| e.is_unconditional()) {
        adds.extend(e.add.iter().cloned());
        dels.extend(e.del.iter().cloned());
    }
    for (i, e) in conditional.iter().enumerate() {
        if mask & (1 << i) != 0 {
            adds.extend(e.add.iter().cloned());
            dels.extend(e.del.iter().cloned());
        }
    }
    let mut out: BTreeSet<GroundAtom> = state.iter().filter(|a| !dels.contains(*a)).cloned().collect();
    out.extend(adds);
    out.into_iter().collect()
}

fn small_bw(blocks: usize) -> GroundTask {
    let names = ["r", "g", "b"];
    let text = format!(
        "(define (problem p) (:domain blocksworld) (:objects {} - block c1 c2 c3 c4 - column) (:init) (:goal (and)))",
        names[..blocks].join(" ")
    );
    let d = parse_domain(fixtures::BLOCKSWORLD_DOMAIN).unwrap();
    let p = parse_problem(&text, &d).unwrap();
    pddl::ground(&d, &p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn apply_matches_expansion(blocks in 1usize..=3, bits in proptest::collection::vec(any::<bool>(), 64), pick in 0usize..1000) {
        let task = small_bw(blocks);
        let state: State = task.fluents.iter().zip(&bits).filter(|(_, b)| **b).map(|(a, _)| a.clone()).collect();
        let action = &task.actions[pick % task.actions.len()];
        prop_assert_eq!(action.successor(&state), expanded_apply(&state, action));
        if applicable(&state, action) {
            let next = apply(&state, action).unwrap();
            prop_assert!(next.iter().all(|a| task.is_fluent(a)));
        }
    }
}
