use std::collections::BTreeSet;
use std::fmt::Write;

use super::{CompoundingBucket, LeaderboardRow};

/// Two decimals, ties to even on the exact binary value.
pub fn fmt2(x: f64) -> String {
    format!("{x:.2}")
}

fn domain_columns(rows: &[LeaderboardRow]) -> Vec<String> {
    rows.iter().flat_map(|r| r.domains.keys().cloned()).collect::<BTreeSet<_>>().into_iter().collect()
}

fn cell(row: &LeaderboardRow, domain: &str) -> String {
    row.domains.get(domain).map(|e| format!("{} ({})", fmt2(e.mean), fmt2(e.sem))).unwrap_or_else(|| "-".into())
}

pub fn leaderboard_text(rows: &[LeaderboardRow]) -> String {
    let domains = domain_columns(rows);
    let mut header = vec!["rank".to_string(), "agent".into(), "setting".into(), "cot".into()];
    header.extend(domains.iter().cloned());
    header.push("combined".into());
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut line = vec![
                r.rank.to_string(),
                r.agent.clone(),
                r.setting.to_string(),
                if r.cot { "yes" } else { "no" }.into(),
            ];
            line.extend(domains.iter().map(|d| cell(r, d)));
            line.push(format!("{} ({})", fmt2(r.combined.mean), fmt2(r.combined.sem)));
            line
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|i| body.iter().map(|l| l[i].len()).chain([header[i].len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for line in std::iter::once(&header).chain(&body) {
        let cells: Vec<String> = line.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    out
}

pub fn leaderboard_csv(rows: &[LeaderboardRow]) -> String {
    let domains = domain_columns(rows);
    let mut out = String::from("rank,agent,setting,cot");
    for d in &domains {
        let _ = write!(out, ",{d},{d}_sem");
    }
    out.push_str(",combined,combined_sem,cot_sigma\n");
    for r in rows {
        let _ = write!(out, "{},{},{},{}", r.rank, csv_field(&r.agent), r.setting, r.cot);
        for d in &domains {
            match r.domains.get(d) {
                Some(e) => {
                    let _ = write!(out, ",{},{}", fmt2(e.mean), fmt2(e.sem));
                }
                None => out.push_str(",,"),
            }
        }
        let sigma = r.cot_sigma.map(fmt2).unwrap_or_default();
        let _ = writeln!(out, ",{},{},{sigma}", fmt2(r.combined.mean), fmt2(r.combined.sem));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Full-precision JSON.
pub fn leaderboard_json(rows: &[LeaderboardRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Horizontal bars of the combined score with SEM whiskers.
pub fn leaderboard_svg(rows: &[LeaderboardRow]) -> String {
    let (label_w, bar_w, row_h) = (260.0, 400.0, 24.0);
    let height = 40.0 + row_h * rows.len() as f64;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{height}\" font-family=\"sans-serif\" font-size=\"12\">\n",
        label_w + bar_w + 80.0
    );
    for (i, r) in rows.iter().enumerate() {
        let y = 20.0 + row_h * i as f64;
        let label = format!("{}. {} / {}{}", r.rank, r.agent, r.setting, if r.cot { " / CoT" } else { "" });
        let w = bar_w * r.combined.mean.clamp(0.0, 1.0);
        let (lo, hi) = (
            label_w + bar_w * (r.combined.mean - r.combined.sem).clamp(0.0, 1.0),
            label_w + bar_w * (r.combined.mean + r.combined.sem).clamp(0.0, 1.0),
        );
        let mid = y + row_h / 2.0 - 2.0;
        let _ = writeln!(out, "  <text x=\"4\" y=\"{}\">{}</text>", mid + 4.0, escape(&label));
        let _ = writeln!(
            out,
            "  <rect x=\"{label_w}\" y=\"{y}\" width=\"{w:.1}\" height=\"{}\" fill=\"#4c78a8\"/>",
            row_h - 4.0
        );
        let _ = writeln!(out, "  <line x1=\"{lo:.1}\" y1=\"{mid}\" x2=\"{hi:.1}\" y2=\"{mid}\" stroke=\"black\"/>");
        let _ = writeln!(
            out,
            "  <text x=\"{:.1}\" y=\"{}\">{}</text>",
            label_w + w + 6.0,
            mid + 4.0,
            fmt2(r.combined.mean)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Line chart of solved fraction against required predictions.
pub fn compounding_svg(buckets: &[CompoundingBucket]) -> String {
    let (w, h, pad) = (480.0, 320.0, 40.0);
    let max_k = buckets.iter().map(|b| b.k).max().unwrap_or(1).max(1) as f64;
    let x = |k: usize| pad + (w - 2.0 * pad) * k as f64 / max_k;
    let y = |f: f64| h - pad - (h - 2.0 * pad) * f.clamp(0.0, 1.0);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" font-family=\"sans-serif\" font-size=\"11\">\n"
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{pad}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        h - pad,
        w - pad,
        h - pad
    );
    let _ = writeln!(out, "  <line x1=\"{pad}\" y1=\"{pad}\" x2=\"{pad}\" y2=\"{}\" stroke=\"black\"/>", h - pad);
    let _ =
        writeln!(out, "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">required predictions</text>", w / 2.0, h - 8.0);
    let _ = writeln!(
        out,
        "  <text x=\"12\" y=\"{}\" transform=\"rotate(-90 12 {})\" text-anchor=\"middle\">fraction solved</text>",
        h / 2.0,
        h / 2.0
    );
    let points: Vec<String> = buckets.iter().map(|b| format!("{:.1},{:.1}", x(b.k), y(b.fraction))).collect();
    if !points.is_empty() {
        let _ = writeln!(
            out,
            "  <polyline fill=\"none\" stroke=\"#e45756\" stroke-width=\"2\" points=\"{}\"/>",
            points.join(" ")
        );
    }
    for b in buckets {
        let _ = writeln!(
            out,
            "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"#e45756\"><title>k={} n={} {}</title></circle>",
            x(b.k),
            y(b.fraction),
            b.k,
            b.tasks,
            fmt2(b.fraction)
        );
    }
    out.push_str("</svg>\n");
    out
}
