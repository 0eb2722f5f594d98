use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::pddl::Domain;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unparsable,
}

impl Verdict {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::Yes => Some(true),
            Verdict::No => Some(false),
            Verdict::Unparsable => None,
        }
    }
}

fn leading_token(text: &str) -> Verdict {
    let trimmed = text.trim_start_matches(|c: char| c.is_whitespace() || c.is_ascii_punctuation());
    let token: String = trimmed.chars().take_while(|c| c.is_alphabetic()).collect::<String>().to_lowercase();
    match token.as_str() {
        "yes" => Verdict::Yes,
        "no" => Verdict::No,
        _ => Verdict::Unparsable,
    }
}

/// Reads a yes/no answer. With `cot`, only the last `<answer>` span counts.
pub fn parse_yes_no(text: &str, cot: bool) -> Verdict {
    if !cot {
        return leading_token(text);
    }
    let lower = text.to_lowercase();
    let Some(open) = lower.rfind("<answer>") else { return Verdict::Unparsable };
    let start = open + "<answer>".len();
    match lower[start..].find("</answer>") {
        Some(len) => leading_token(&text[start..start + len]),
        None => Verdict::Unparsable,
    }
}

/// One action of a parsed plan, with lowercased identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanStep {
    pub action: String,
    pub args: Vec<String>,
}

impl PlanStep {
    pub fn signature(&self) -> String {
        format!("{}({})", self.action, self.args.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanParseError {
    #[error("no JSON object found")]
    NoJson,
    #[error("JSON object has no `plan` array")]
    MissingPlan,
    #[error("plan step {index}: {reason}")]
    BadStep { index: usize, reason: String },
}

/// Byte ranges of balanced `{...}` spans in order of their opening brace.
fn object_spans(text: &str) -> impl Iterator<Item = &str> + '_ {
    text.match_indices('{').filter_map(move |(start, _)| {
        let mut depth = 0usize;
        let mut quote: Option<char> = None;
        let mut escaped = false;
        for (i, c) in text[start..].char_indices() {
            if let Some(q) = quote {
                if escaped {
                    escaped = false;
                } else if c == '\\' {
                    escaped = true;
                } else if c == q {
                    quote = None;
                }
                continue;
            }
            match c {
                '"' | '\'' => quote = Some(c),
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(&text[start..start + i + 1]);
                    }
                }
                _ => {}
            }
        }
        None
    })
}

fn first_object(text: &str) -> Option<serde_json::Map<String, Value>> {
    for span in object_spans(text) {
        let parsed = serde_json::from_str::<Value>(span).or_else(|_| serde_json::from_str(&span.replace('\'', "\"")));
        if let Ok(Value::Object(map)) = parsed {
            return Some(map);
        }
    }
    None
}

fn ident(v: &Value) -> Option<String> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return None,
    };
    Some(s.trim().trim_start_matches('?').to_lowercase())
}

/// Orders map-form parameters by the schema: each parameter is looked up by
/// variable name, then by type name; otherwise the map's own order is kept.
fn order_params(map: &serde_json::Map<String, Value>, action: &str, domain: Option<&Domain>) -> Option<Vec<String>> {
    let entries: Vec<(String, &Value)> =
        map.iter().map(|(k, v)| (k.trim().trim_start_matches('?').to_lowercase(), v)).collect();
    if let Some(schema) = domain.and_then(|d| d.action(action)) {
        let by_schema: Option<Vec<String>> = schema
            .params
            .iter()
            .map(|p| {
                let var = p.name.as_str().trim_start_matches('?');
                entries.iter().find(|(k, _)| k == var).or_else(|| entries.iter().find(|(k, _)| k == p.ty.as_str()))
            })
            .map(|e| e.and_then(|(_, v)| ident(v)))
            .collect();
        if let Some(args) = by_schema.filter(|a| a.len() == entries.len()) {
            return Some(args);
        }
    }
    entries.iter().map(|(_, v)| ident(v)).collect()
}

/// Extracts the plan from a model reply. Accepts parameters as a list or a
/// name → value map; any `explanation` field is ignored.
pub fn parse_plan_json(text: &str, domain: Option<&Domain>) -> Result<Vec<PlanStep>, PlanParseError> {
    let obj = first_object(text).ok_or(PlanParseError::NoJson)?;
    let steps = obj.get("plan").and_then(Value::as_array).ok_or(PlanParseError::MissingPlan)?;
    steps
        .iter()
        .enumerate()
        .map(|(index, step)| {
            let bad = |reason: &str| PlanParseError::BadStep { index, reason: reason.to_string() };
            let action = step.get("action").and_then(ident).ok_or_else(|| bad("missing `action` name"))?;
            let args = match step.get("parameters") {
                None | Some(Value::Null) => Vec::new(),
                Some(Value::Array(items)) => {
                    items.iter().map(ident).collect::<Option<_>>().ok_or_else(|| bad("non-string parameter"))?
                }
                Some(Value::Object(map)) => {
                    order_params(map, &action, domain).ok_or_else(|| bad("non-string parameter"))?
                }
                Some(Value::String(s)) => vec![s.trim().to_lowercase()],
                Some(_) => return Err(bad("`parameters` must be a list or an object")),
            };
            Ok(PlanStep { action, args })
        })
        .collect()
}
