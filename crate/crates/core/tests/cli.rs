use std::path::Path;
use std::process::Command;

use viplan_core::cli::{self, AgentSpec, CliError, RunConfig, SUMMARY_FILE};
use viplan_core::envs::{DomainKind, Split};
use viplan_core::protocol::Setting;

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn generate_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(cli::cmd_generate(Split::Medium, 4, 11, &a).unwrap().len(), 12);
    cli::cmd_generate(Split::Medium, 4, 11, &b).unwrap();
    assert_eq!(read_all(&a), read_all(&b));
    let c = tmp.path().join("c");
    cli::cmd_generate(Split::Medium, 4, 12, &c).unwrap();
    assert_ne!(read_all(&a), read_all(&c));
}

#[test]
fn generate_zero_makes_empty_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("none");
    assert!(cli::cmd_generate(Split::Simple, 0, 0, &out).unwrap().is_empty());
    assert!(read_all(&out).is_empty());
    let report = cli::cmd_validate(&out, DomainKind::Bw, Some(Split::Simple)).unwrap();
    assert_eq!(report.warnings.len(), 1);
}

#[test]
fn generated_fixtures_validate() {
    let tmp = tempfile::tempdir().unwrap();
    for split in Split::ALL {
        cli::cmd_generate(split, 2, 3, &tmp.path().join(split.as_str())).unwrap();
    }
    let report = cli::cmd_validate(tmp.path(), DomainKind::Bw, None).unwrap();
    assert_eq!(report.entries.len(), 6);
    assert!(report.entries.iter().all(|e| e.split.is_some() && e.plan_len.is_some()));
}

#[test]
fn corrupted_fixture_is_named() {
    let tmp = tempfile::tempdir().unwrap();
    cli::cmd_generate(Split::Simple, 2, 0, tmp.path()).unwrap();
    std::fs::write(tmp.path().join("problem_1.pddl"), "(define (problem broken) (:domain Blocksworld)").unwrap();
    match cli::cmd_validate(tmp.path(), DomainKind::Bw, Some(Split::Simple)) {
        Err(e @ CliError::Validation(_)) => {
            assert_eq!(e.exit_code(), 3);
            assert!(e.to_string().contains("problem_1.pddl"), "{e}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn household_fixture_length_mismatch_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let simple = viplan_core::envs::hh::load_household_suite(Split::Simple).unwrap();
    let task = &simple[0];
    // A simple fixture placed under the hard split misses the catalog length.
    std::fs::write(tmp.path().join(format!("{}.pddl", task.name)), &task.text).unwrap();
    assert!(cli::cmd_validate(tmp.path(), DomainKind::Hh, Some(Split::Simple)).is_ok());
    assert!(matches!(cli::cmd_validate(tmp.path(), DomainKind::Hh, Some(Split::Hard)), Err(CliError::Validation(_))));
}

fn oracle_config(out: &Path) -> RunConfig {
    let mut cfg = RunConfig::new(DomainKind::Bw, Setting::Grounder, AgentSpec::Oracle, out.to_path_buf());
    cfg.splits = vec![Split::Simple];
    cfg.problems = 4;
    cfg.jobs = Some(2);
    cfg
}

#[test]
fn oracle_run_writes_run_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let summary = cli::cmd_run(&oracle_config(&out)).unwrap();
    assert_eq!(summary.reports.len(), 1);
    let r = &summary.reports[0];
    assert_eq!((r.n, r.successes, r.replans), (4, 4, 0));
    assert_eq!(viplan_core::metrics::fmt2(r.success_rate), "1.00");
    assert!(r.tasks.iter().all(|t| t.oracle_questions.is_some()));

    let logs = read_all(&out.join("episodes"));
    assert_eq!(logs.len(), 4);
    for (_, body) in &logs {
        let text = String::from_utf8(body.clone()).unwrap();
        let last: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
        assert_eq!(last["event"], "end");
        assert_eq!(last["outcome"], "success");
        for line in text.lines() {
            serde_json::from_str::<serde_json::Value>(line).unwrap();
        }
    }
    assert_eq!(read_all(&out.join("scenes")).len(), 8);

    // Same config, same summary.
    let again = tmp.path().join("again");
    cli::cmd_run(&oracle_config(&again)).unwrap();
    let strip = |p: &Path| {
        let mut v: serde_json::Value = serde_json::from_slice(&std::fs::read(p.join(SUMMARY_FILE)).unwrap()).unwrap();
        v["config"]["out"] = serde_json::Value::Null;
        v
    };
    assert_eq!(strip(&out), strip(&again));
}

#[test]
fn replay_reproduces_noisy_run() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("noisy");
    let mut cfg = oracle_config(&first);
    cfg.agent = AgentSpec::Noisy { accuracy: 0.9, overrides: Default::default(), seed: 5 };
    cfg.failure_prob = 0.1;
    let a = cli::cmd_run(&cfg).unwrap();

    let mut replay = cfg.clone();
    replay.agent = AgentSpec::Replay { path: first.clone() };
    replay.label = Some(cfg.agent_label());
    replay.out = tmp.path().join("replay");
    let b = cli::cmd_run(&replay).unwrap();
    assert_eq!(a.reports, b.reports);
}

#[test]
fn report_over_two_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let oracle = tmp.path().join("oracle");
    cli::cmd_run(&oracle_config(&oracle)).unwrap();
    let noisy = tmp.path().join("noisy");
    let mut cfg = oracle_config(&noisy);
    cfg.agent = AgentSpec::Noisy { accuracy: 0.6, overrides: Default::default(), seed: 1 };
    cfg.max_replans = 0;
    cli::cmd_run(&cfg).unwrap();

    let out = tmp.path().join("report");
    let report = cli::cmd_report(&[noisy, oracle], &out).unwrap();
    assert_eq!(report.rows.len(), 2);
    assert_eq!(report.rows[0].agent, "oracle");
    assert_eq!(report.rows[0].rank, 1);
    assert_eq!(report.files.len(), 6);
    let csv = std::fs::read_to_string(out.join("compounding.csv")).unwrap();
    assert!(csv.starts_with("k,tasks,successes,fraction,sem\n"));
    assert!(matches!(cli::cmd_report(&[], &out), Err(CliError::Usage(_))));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_viplan");
    let tmp = tempfile::tempdir().unwrap();
    let status = |args: &[&str]| {
        Command::new(bin).args(args).env("RUST_LOG", "off").env("VIPLAN_TEST_KEY_SET", "k").status().unwrap().code()
    };

    let gen = tmp.path().join("gen");
    assert_eq!(status(&["generate", "--split", "simple", "--count", "2", "--out", gen.to_str().unwrap()]), Some(0));
    assert_eq!(status(&["validate", "--domain", "bw", "--split", "simple", gen.to_str().unwrap()]), Some(0));
    assert_eq!(status(&["validate", "--domain", "bw", "--split", "hard", gen.to_str().unwrap()]), Some(3));

    let cfg = tmp.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"domain":"bw","setting":"grounder","agent":{"kind":"oracle"},"out":"x","failure_prob":2}"#,
    )
    .unwrap();
    assert_eq!(status(&["run", "--config", cfg.to_str().unwrap()]), Some(1));

    let chat = tmp.path().join("chat.json");
    let out = tmp.path().join("chat-run");
    std::fs::write(
        &chat,
        format!(
            r#"{{"domain":"bw","splits":["simple"],"problems":1,"setting":"grounder","out":{:?},
               "agent":{{"kind":"chat","base_url":"http://127.0.0.1:9","model":"m","api_key_env":"VIPLAN_TEST_UNSET_KEY","retries":0,"timeout_secs":1}}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    assert_eq!(status(&["run", "--config", chat.to_str().unwrap()]), Some(1));
    let body = std::fs::read_to_string(&chat).unwrap().replace("VIPLAN_TEST_UNSET_KEY", "VIPLAN_TEST_KEY_SET");
    std::fs::write(&chat, body).unwrap();
    // Key present but nothing listening: infrastructure failure.
    assert_eq!(status(&["run", "--config", chat.to_str().unwrap()]), Some(2));
}
