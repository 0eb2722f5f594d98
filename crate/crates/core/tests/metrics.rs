use std::sync::Arc;

use proptest::prelude::*;
use viplan_core::agents::{NoisyAnswerer, NoisyProfile, OracleAnswerer};
use viplan_core::envs::bw::BwEnv;
use viplan_core::envs::{DomainKind, EnvConfig};
use viplan_core::metrics::{
    combined_average, compounding_buckets, fmt2, leaderboard, leaderboard_csv, leaderboard_text, predicate_accuracy,
    proportion, success_rate, CellKey, Estimate, SplitReport, TaskResult,
};
use viplan_core::pddl::{fixtures, load_task};
use viplan_core::planner::BfsPlanner;
use viplan_core::protocol::{
    run_grounder_episode, EpisodeMeta, EpisodeRecord, GrounderConfig, PromptTemplate, QuestionTemplates, Setting,
};

#[test]
fn binomial_sem_examples() {
    let e = proportion(12, 25);
    assert_eq!(fmt2(e.mean), "0.48");
    assert!((e.sem - 0.09992).abs() < 1e-4);
    assert_eq!(fmt2(e.sem), "0.10");
    assert_eq!(proportion(25, 25), Estimate { mean: 1.0, sem: 0.0 });
    assert_eq!(proportion(0, 25), Estimate { mean: 0.0, sem: 0.0 });
    assert_eq!(proportion(0, 0), Estimate { mean: 0.0, sem: 0.0 });
}

#[test]
fn combined_row_matches_published_rounding() {
    let c = combined_average(&[Estimate { mean: 0.77, sem: 0.04 }, Estimate { mean: 0.11, sem: 0.03 }]).unwrap();
    assert_eq!(fmt2(c.mean), "0.44");
    assert_eq!(fmt2(c.sem), "0.03");

    let one = Estimate { mean: 0.3, sem: 0.05 };
    let single = combined_average(&[one]).unwrap();
    assert_eq!(single.estimate(), one);
    let four = combined_average(&[one; 4]).unwrap();
    assert!((four.mean - 0.3).abs() < 1e-12);
    assert!((four.sem - 0.05 / 2.0).abs() < 1e-12);
    assert!(combined_average(&[]).is_none());
}

proptest! {
    #[test]
    fn combined_sem_bounded_by_max(members in prop::collection::vec((0.0f64..1.0, 0.0f64..0.2), 1..8)) {
        let est: Vec<Estimate> = members.iter().map(|&(mean, sem)| Estimate { mean, sem }).collect();
        let c = combined_average(&est).unwrap();
        let max = est.iter().map(|e| e.sem).fold(0.0, f64::max);
        prop_assert!(c.sem <= max + 1e-12);
    }

    #[test]
    fn success_rate_is_permutation_invariant(outcomes in prop::collection::vec(any::<bool>(), 1..50), seed in any::<u64>()) {
        let records: Vec<EpisodeRecord> = outcomes.iter().map(|&s| record(s)).collect();
        let mut shuffled = records.clone();
        let n = shuffled.len();
        for i in 0..n {
            shuffled.swap(i, (seed as usize).wrapping_mul(i + 7) % n);
        }
        prop_assert_eq!(success_rate(&records), success_rate(&shuffled));
    }
}

fn record(success: bool) -> EpisodeRecord {
    serde_json::from_value(serde_json::json!({
        "task_id": "t", "setting": "grounder", "cot": false, "seed": 0, "agent": "a", "events": [],
        "counters": { "questions": 0, "replans": 0, "steps": 0, "parse_faults": 0 },
        "outcome": if success { "success" } else { "budget-exhausted" }, "success": success,
    }))
    .unwrap()
}

fn report(agent: &str, cot: bool, domain: &str, split: &str, successes: usize) -> SplitReport {
    let key = CellKey { agent: agent.into(), setting: Setting::Grounder, cot };
    let records: Vec<EpisodeRecord> = (0..25).map(|i| record(i < successes)).collect();
    SplitReport::from_records(&key, domain, split, &records)
}

#[test]
fn leaderboard_ordering_and_ties() {
    let reports = vec![
        report("b", false, "bw", "simple", 11),
        report("b", false, "hh", "simple", 11),
        report("a", false, "bw", "simple", 12),
        report("a", false, "hh", "simple", 12),
    ];
    let rows = leaderboard(&reports);
    assert_eq!(rows.iter().map(|r| r.agent.as_str()).collect::<Vec<_>>(), ["a", "b"]);
    assert_eq!(rows[0].rank, 1);

    // Equal means: lower SEM first.
    let tie = vec![
        report("wide", false, "bw", "simple", 0),
        report("wide", false, "bw", "medium", 25),
        report("tight", false, "bw", "simple", 12),
        report("tight", false, "bw", "medium", 13),
    ];
    let rows = leaderboard(&tie);
    assert!((rows[0].combined.mean - rows[1].combined.mean).abs() < 1e-12);
    assert_eq!(rows[0].agent, "wide");
    assert!(rows[0].combined.sem < rows[1].combined.sem);

    let single = leaderboard(&[report("x", true, "bw", "simple", 5)]);
    assert_eq!(single.len(), 1);
    assert!(leaderboard_text(&single).contains("0.20 (0.08)"));
    assert_eq!(leaderboard_csv(&single).lines().count(), 2);
}

#[test]
fn merged_runs_pool_counts() {
    let rows = leaderboard(&[report("a", false, "bw", "simple", 10), report("a", false, "bw", "simple", 20)]);
    assert_eq!(rows.len(), 1);
    assert!((rows[0].combined.mean - 0.6).abs() < 1e-12);
    assert!((rows[0].combined.sem - (0.6f64 * 0.4 / 50.0).sqrt()).abs() < 1e-12);
}

#[test]
fn cot_sigma_column() {
    let rows = leaderboard(&[report("a", false, "bw", "simple", 10), report("a", true, "bw", "simple", 20)]);
    let cot = rows.iter().find(|r| r.cot).unwrap();
    let plain = rows.iter().find(|r| !r.cot).unwrap();
    assert!(cot.cot_sigma.unwrap() > 0.0);
    assert!((cot.cot_sigma.unwrap() + plain.cot_sigma.unwrap()).abs() < 1e-12);
}

#[test]
fn compounding_buckets_group_by_k() {
    let tasks = [(3, true), (3, false), (5, true), (0, true)].map(|(k, s)| TaskResult {
        task_id: String::new(),
        success: s,
        oracle_questions: Some(k),
    });
    let b = compounding_buckets(&tasks);
    assert_eq!(b.iter().map(|b| (b.k, b.tasks)).collect::<Vec<_>>(), [(0, 1), (3, 2), (5, 1)]);
    assert_eq!(b[1].fraction, 0.5);
}

fn grounder_records(
    answerer: &mut dyn FnMut(u64) -> Box<dyn viplan_core::agents::Answerer>,
    episodes: u64,
) -> Vec<EpisodeRecord> {
    let task = Arc::new(load_task(fixtures::BLOCKSWORLD_DOMAIN, fixtures::BLOCKSWORLD_PROBLEM).unwrap());
    let templates = QuestionTemplates::bundled(DomainKind::Bw);
    let prompt = PromptTemplate::bundled(Setting::Grounder, DomainKind::Bw, false);
    (0..episodes)
        .map(|i| {
            let mut env = BwEnv::new(task.clone(), &EnvConfig::new(DomainKind::Bw, 0.0, i).unwrap()).unwrap();
            let mut a = answerer(i);
            let meta = EpisodeMeta { task_id: "simple_problem_0", seed: i };
            run_grounder_episode(
                &mut env,
                a.as_mut(),
                &BfsPlanner::default(),
                &templates,
                &prompt,
                &GrounderConfig::default(),
                meta,
            )
            .unwrap()
        })
        .collect()
}

#[test]
fn predicate_accuracy_tracks_the_answerer() {
    let oracle = grounder_records(&mut |_| Box::new(OracleAnswerer), 3);
    assert!(predicate_accuracy(&oracle).values().all(|a| a.accuracy == 1.0));

    let mut profile = NoisyProfile::new(0.97, 11);
    profile.overrides.insert("clear".into(), 0.5);
    let noisy = grounder_records(&mut |i| Box::new(NoisyAnswerer::new(profile.clone(), i).unwrap()), 300);
    let table = predicate_accuracy(&noisy);
    let clear = table["clear"];
    assert!(clear.total > 1000, "{}", clear.total);
    assert!((clear.accuracy - 0.5).abs() < 0.05, "{clear:?}");
    let rest: (usize, usize) =
        table.iter().filter(|(p, _)| *p != "clear").fold((0, 0), |(c, t), (_, a)| (c + a.correct, t + a.total));
    let acc = rest.0 as f64 / rest.1 as f64;
    assert!(rest.1 >= 10_000, "{}", rest.1);
    assert!((acc - 0.97).abs() < 0.01, "{acc}");
}
