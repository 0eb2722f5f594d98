use std::sync::Arc;

use proptest::prelude::*;
use viplan_core::envs::bw::{self, BwEnv, BwScene, Color, SplitSpec};
use viplan_core::envs::hh::{self, HhEnv};
use viplan_core::envs::{DomainKind, EnvConfig, Environment, Split};
use viplan_core::planner::{self, validate_plan};

fn scene_strategy() -> impl Strategy<Value = BwScene> {
    (1usize..=6, 4usize..=5, any::<u64>()).prop_map(|(n, cols, seed)| {
        // Deterministic scatter driven by the seed.
        let mut colors = Color::ALL.to_vec();
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 33) as usize
        };
        for i in (1..colors.len()).rev() {
            colors.swap(i, next() % (i + 1));
        }
        let mut scene = BwScene::empty(cols);
        for c in colors.into_iter().take(n) {
            let k = next() % cols;
            scene.columns[k].push(c);
        }
        scene
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2000, ..ProptestConfig::default() })]

    #[test]
    fn scene_state_bijection(scene in scene_strategy()) {
        let state = scene.to_state();
        prop_assert_eq!(BwScene::from_state(&state, scene.columns.len()).unwrap(), scene);
    }
}

#[test]
fn generated_tasks_are_in_range_and_solvable() {
    for split in Split::ALL {
        let spec = SplitSpec::bw(split);
        for seed in 0..3 {
            let p = bw::generate_bw_problem(&spec, seed, bw::DEFAULT_MAX_REJECTIONS).unwrap();
            assert_eq!(p.init.num_blocks(), spec.blocks);
            assert_eq!(p.init.columns.len(), spec.columns);
            let task = Arc::new(p.ground().unwrap());
            let plan = planner::plan(&task, planner::DEFAULT_BUDGET).into_plan().unwrap();
            assert_eq!(plan.len(), p.optimal_len);
            assert!(spec.contains(plan.len()));
            let cfg = EnvConfig::new(DomainKind::Bw, 0.0, seed).unwrap();
            let mut env = BwEnv::new(task.clone(), &cfg).unwrap();
            for a in &plan.actions {
                let before = env.truth().clone();
                let r = env.step(a).unwrap();
                assert!(r.executed);
                assert_eq!(env.truth(), &viplan_core::pddl::apply(&before, a).unwrap());
            }
            assert!(env.goal_reached());
        }
    }
}

#[test]
fn failure_rate_is_calibrated() {
    let task = Arc::new(
        viplan_core::pddl::load_task(
            viplan_core::pddl::fixtures::BLOCKSWORLD_DOMAIN,
            viplan_core::pddl::fixtures::BLOCKSWORLD_PROBLEM,
        )
        .unwrap(),
    );
    let cfg = EnvConfig::new(DomainKind::Bw, 0.1, 42).unwrap();
    let mut env = BwEnv::new(task.clone(), &cfg).unwrap();
    let (a, b) =
        (task.find_action("moveblock", &["y", "c3"]).unwrap(), task.find_action("moveblock", &["y", "c2"]).unwrap());
    let mut failures = 0;
    let n = 10_000;
    for _ in 0..n {
        // Alternate between the two columns so the move is always applicable.
        let act =
            if env.truth().contains(&viplan_core::pddl::GroundAtom::new("incolumn", &["y", "c2"])) { a } else { b };
        if !env.step(act).unwrap().executed {
            failures += 1;
        }
    }
    let rate = failures as f64 / n as f64;
    assert!((rate - 0.1).abs() <= 0.01, "{rate}");
}

#[test]
fn household_suite_is_oracle_solvable() {
    for split in Split::ALL {
        for t in hh::load_household_suite(split).unwrap() {
            let task = Arc::new(t.ground().unwrap());
            let plan = planner::plan(&task, planner::DEFAULT_BUDGET).into_plan().unwrap();
            assert_eq!(Some(plan.len()), t.target_len, "{}", t.id());
            assert!(validate_plan(&task, &task.init, &plan));
            let cfg = EnvConfig::new(DomainKind::Hh, 0.0, 0).unwrap();
            let mut env = HhEnv::new(task.clone(), &cfg);
            for a in &plan.actions {
                assert!(env.step(a).unwrap().executed);
            }
            assert!(env.goal_reached(), "{}", t.id());
        }
    }
}

#[test]
fn household_privileged_text_lists_hidden_objects() {
    let tasks = hh::load_household_suite(Split::Hard).unwrap();
    let t = tasks.iter().find(|t| t.name == "cleaning_out_drawers_0").unwrap();
    assert_eq!(t.privileged.lines().count(), 3);
    assert!(t
        .privileged
        .lines()
        .all(|l| l.starts_with("the bowl_") && l.contains(" can be found inside the cabinet_")));
}
