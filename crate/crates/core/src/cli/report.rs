use std::path::{Path, PathBuf};

use super::run::{RunSummary, SUMMARY_FILE};
use super::{write_file, CliError};
use crate::metrics::{
    compounding_buckets, compounding_svg, fmt2, leaderboard, leaderboard_csv, leaderboard_json, leaderboard_svg,
    leaderboard_text, merge_reports, CompoundingBucket, LeaderboardRow, SplitReport,
};
use crate::protocol::Setting;

#[derive(Debug, Clone, PartialEq)]
pub struct ReportOutput {
    pub rows: Vec<LeaderboardRow>,
    /// Grounder-setting success by oracle question count, over all runs.
    pub compounding: Vec<CompoundingBucket>,
    pub files: Vec<PathBuf>,
}

fn read_summary(dir: &Path) -> Result<RunSummary, CliError> {
    let path = dir.join(SUMMARY_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Infra(format!("{}: {e}", path.display())))
}

fn compounding_csv(buckets: &[CompoundingBucket]) -> String {
    let mut out = String::from("k,tasks,successes,fraction,sem\n");
    for b in buckets {
        out.push_str(&format!("{},{},{},{},{}\n", b.k, b.tasks, b.successes, fmt2(b.fraction), fmt2(b.sem)));
    }
    out
}

/// Merges the summaries of `runs` and writes the leaderboard (`.txt`,
/// `.csv`, `.json`, `.svg`) and the compounding curve (`.csv`, `.svg`) to `out`.
pub fn cmd_report(runs: &[PathBuf], out: &Path) -> Result<ReportOutput, CliError> {
    if runs.is_empty() {
        return Err(CliError::Usage("report needs at least one run directory".into()));
    }
    let mut reports: Vec<SplitReport> = Vec::new();
    for dir in runs {
        reports.extend(read_summary(dir)?.reports);
    }
    let reports = merge_reports(reports);
    let rows = leaderboard(&reports);
    let compounding =
        compounding_buckets(reports.iter().filter(|r| r.setting == Setting::Grounder).flat_map(|r| &r.tasks));

    let files = [
        ("leaderboard.txt", leaderboard_text(&rows)),
        ("leaderboard.csv", leaderboard_csv(&rows)),
        ("leaderboard.json", leaderboard_json(&rows) + "\n"),
        ("leaderboard.svg", leaderboard_svg(&rows)),
        ("compounding.csv", compounding_csv(&compounding)),
        ("compounding.svg", compounding_svg(&compounding)),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = out.join(name);
        write_file(&path, body)?;
        written.push(path);
    }
    Ok(ReportOutput { rows, compounding, files: written })
}
