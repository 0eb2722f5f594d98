//! Success rates with binomial standard errors, per-predicate accuracy,
//! compounding-error curves and leaderboards.

mod render;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::protocol::{EpisodeRecord, Setting};

pub use render::{compounding_svg, fmt2, leaderboard_csv, leaderboard_json, leaderboard_svg, leaderboard_text};

/// A mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub sem: f64,
}

/// Normal-approximation SEM of a binomial proportion, sqrt(p(1-p)/n).
pub fn binomial_sem(p: f64, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}

pub fn proportion(successes: usize, n: usize) -> Estimate {
    let mean = if n == 0 { 0.0 } else { successes as f64 / n as f64 };
    Estimate { mean, sem: binomial_sem(mean, n) }
}

/// Each episode is one Bernoulli trial.
pub fn success_rate(records: &[EpisodeRecord]) -> Estimate {
    proportion(records.iter().filter(|r| r.success).count(), records.len())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedReport {
    pub members: Vec<Estimate>,
    pub mean: f64,
    /// (1/m) sqrt(sum of squared member SEMs).
    pub sem: f64,
}

impl CombinedReport {
    pub fn estimate(&self) -> Estimate {
        Estimate { mean: self.mean, sem: self.sem }
    }
}

/// Unweighted average of `m >= 1` estimates with propagated error.
pub fn combined_average(members: &[Estimate]) -> Option<CombinedReport> {
    if members.is_empty() {
        return None;
    }
    let m = members.len() as f64;
    let mean = members.iter().map(|e| e.mean).sum::<f64>() / m;
    let sem = members.iter().map(|e| e.sem * e.sem).sum::<f64>().sqrt() / m;
    Some(CombinedReport { members: members.to_vec(), mean, sem })
}

/// Difference of two estimates in units of their combined standard error.
pub fn sigma_ratio(a: Estimate, b: Estimate) -> Option<f64> {
    let denom = (a.sem * a.sem + b.sem * b.sem).sqrt();
    (denom > 0.0).then(|| (a.mean - b.mean) / denom)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PredicateAccuracy {
    pub correct: usize,
    pub total: usize,
    pub accuracy: f64,
    pub sem: f64,
}

impl PredicateAccuracy {
    fn from_counts(correct: usize, total: usize) -> Self {
        let e = proportion(correct, total);
        PredicateAccuracy { correct, total, accuracy: e.mean, sem: e.sem }
    }
}

fn accuracy_table(counts: BTreeMap<String, (usize, usize)>) -> BTreeMap<String, PredicateAccuracy> {
    counts.into_iter().map(|(p, (c, t))| (p, PredicateAccuracy::from_counts(c, t))).collect()
}

/// Correct/total answers per predicate name.
pub fn predicate_accuracy(records: &[EpisodeRecord]) -> BTreeMap<String, PredicateAccuracy> {
    let mut counts = BTreeMap::<String, (usize, usize)>::new();
    for r in records {
        for (p, (c, t)) in r.answer_tally() {
            let slot = counts.entry(p).or_default();
            slot.0 += c;
            slot.1 += t;
        }
    }
    accuracy_table(counts)
}

/// Overall answer accuracy across predicates.
pub fn overall_accuracy(table: &BTreeMap<String, PredicateAccuracy>) -> PredicateAccuracy {
    let (c, t) = table.values().fold((0, 0), |(c, t), a| (c + a.correct, t + a.total));
    PredicateAccuracy::from_counts(c, t)
}

/// Outcome of one task, keyed by the oracle question count `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskResult {
    pub task_id: String,
    pub success: bool,
    pub oracle_questions: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompoundingBucket {
    /// Predictions the oracle grounder makes on these tasks.
    pub k: usize,
    pub tasks: usize,
    pub successes: usize,
    pub fraction: f64,
    pub sem: f64,
}

/// Groups tasks by `k`; tasks without an oracle count are skipped.
pub fn compounding_buckets<'a>(results: impl IntoIterator<Item = &'a TaskResult>) -> Vec<CompoundingBucket> {
    let mut by_k = BTreeMap::<usize, (usize, usize)>::new();
    for r in results {
        if let Some(k) = r.oracle_questions {
            let slot = by_k.entry(k).or_default();
            slot.0 += r.success as usize;
            slot.1 += 1;
        }
    }
    by_k.into_iter()
        .map(|(k, (s, n))| {
            let e = proportion(s, n);
            CompoundingBucket { k, tasks: n, successes: s, fraction: e.mean, sem: e.sem }
        })
        .collect()
}

pub fn compounding_curve(records: &[EpisodeRecord]) -> Vec<CompoundingBucket> {
    let results: Vec<TaskResult> = records.iter().map(TaskResult::from).collect();
    compounding_buckets(&results)
}

impl From<&EpisodeRecord> for TaskResult {
    fn from(r: &EpisodeRecord) -> Self {
        TaskResult { task_id: r.task_id.clone(), success: r.success, oracle_questions: r.oracle_questions }
    }
}

/// Identity of a benchmark cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellKey {
    pub agent: String,
    pub setting: Setting,
    pub cot: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    pub agent: String,
    pub setting: Setting,
    pub cot: bool,
    pub domain: String,
    pub split: String,
    pub n: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub sem: f64,
    pub predicates: BTreeMap<String, PredicateAccuracy>,
    pub questions: usize,
    pub replans: usize,
    pub steps: usize,
    pub tasks: Vec<TaskResult>,
}

impl SplitReport {
    pub fn from_records(key: &CellKey, domain: &str, split: &str, records: &[EpisodeRecord]) -> Self {
        let rate = success_rate(records);
        SplitReport {
            agent: key.agent.clone(),
            setting: key.setting,
            cot: key.cot,
            domain: domain.to_string(),
            split: split.to_string(),
            n: records.len(),
            successes: records.iter().filter(|r| r.success).count(),
            success_rate: rate.mean,
            sem: rate.sem,
            predicates: predicate_accuracy(records),
            questions: records.iter().map(|r| r.counters.questions).sum(),
            replans: records.iter().map(|r| r.counters.replans).sum(),
            steps: records.iter().map(|r| r.counters.steps).sum(),
            tasks: records.iter().map(TaskResult::from).collect(),
        }
    }

    pub fn key(&self) -> CellKey {
        CellKey { agent: self.agent.clone(), setting: self.setting, cot: self.cot }
    }

    pub fn estimate(&self) -> Estimate {
        Estimate { mean: self.success_rate, sem: self.sem }
    }

    /// Pools another report of the same cell, domain and split.
    pub fn merge(&mut self, other: &SplitReport) {
        self.n += other.n;
        self.successes += other.successes;
        let e = proportion(self.successes, self.n);
        self.success_rate = e.mean;
        self.sem = e.sem;
        let mut counts: BTreeMap<String, (usize, usize)> =
            self.predicates.iter().map(|(p, a)| (p.clone(), (a.correct, a.total))).collect();
        for (p, a) in &other.predicates {
            let slot = counts.entry(p.clone()).or_default();
            slot.0 += a.correct;
            slot.1 += a.total;
        }
        self.predicates = accuracy_table(counts);
        self.questions += other.questions;
        self.replans += other.replans;
        self.steps += other.steps;
        self.tasks.extend(other.tasks.iter().cloned());
    }
}

/// Merges reports that share cell, domain and split.
pub fn merge_reports(reports: impl IntoIterator<Item = SplitReport>) -> Vec<SplitReport> {
    let mut merged: BTreeMap<(CellKey, String, String), SplitReport> = BTreeMap::new();
    for r in reports {
        let id = (r.key(), r.domain.clone(), r.split.clone());
        match merged.get_mut(&id) {
            Some(m) => m.merge(&r),
            None => {
                merged.insert(id, r);
            }
        }
    }
    merged.into_values().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderboardRow {
    pub rank: usize,
    pub agent: String,
    pub setting: Setting,
    pub cot: bool,
    /// Per-domain score: average over that domain's splits.
    pub domains: BTreeMap<String, Estimate>,
    /// Average of the domain scores.
    pub combined: Estimate,
    /// (this - opposite CoT setting) / combined SEM, when both exist.
    #[serde(default)]
    pub cot_sigma: Option<f64>,
}

/// One row per (agent, setting, CoT), best combined mean first; ties go to
/// the lower SEM, then to the name.
pub fn leaderboard(reports: &[SplitReport]) -> Vec<LeaderboardRow> {
    let mut cells: BTreeMap<CellKey, BTreeMap<String, Vec<Estimate>>> = BTreeMap::new();
    for r in merge_reports(reports.iter().cloned()) {
        cells.entry(r.key()).or_default().entry(r.domain.clone()).or_default().push(r.estimate());
    }
    let mut rows: Vec<LeaderboardRow> = cells
        .iter()
        .map(|(key, domains)| {
            let domains: BTreeMap<String, Estimate> = domains
                .iter()
                .map(|(d, splits)| (d.clone(), combined_average(splits).expect("non-empty").estimate()))
                .collect();
            let scores: Vec<Estimate> = domains.values().copied().collect();
            let combined = combined_average(&scores).expect("non-empty").estimate();
            LeaderboardRow {
                rank: 0,
                agent: key.agent.clone(),
                setting: key.setting,
                cot: key.cot,
                domains,
                combined,
                cot_sigma: None,
            }
        })
        .collect();
    let lookup: BTreeMap<CellKey, Estimate> =
        rows.iter().map(|r| (CellKey { agent: r.agent.clone(), setting: r.setting, cot: r.cot }, r.combined)).collect();
    for row in &mut rows {
        let other = CellKey { agent: row.agent.clone(), setting: row.setting, cot: !row.cot };
        row.cot_sigma = lookup.get(&other).and_then(|o| sigma_ratio(row.combined, *o));
    }
    rows.sort_by(|a, b| {
        b.combined
            .mean
            .total_cmp(&a.combined.mean)
            .then(a.combined.sem.total_cmp(&b.combined.sem))
            .then_with(|| (&a.agent, a.setting, a.cot).cmp(&(&b.agent, b.setting, b.cot)))
    });
    for (i, row) in rows.iter_mut().enumerate() {
        row.rank = i + 1;
    }
    rows
}
