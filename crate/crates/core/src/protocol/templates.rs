use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ProtocolError;
use crate::envs::bw::Color;
use crate::envs::DomainKind;
use crate::pddl::{GroundAtom, GroundTask, ObjectName};

const BUNDLED: &str = include_str!("../../assets/questions.json");

/// How object names are turned into English noun phrases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectStyle {
    /// Color letters become "the yellow block"; columns become "C3".
    Blocks,
    /// `bowl_1` becomes "a bowl" when it is the only bowl, else "bowl 1".
    Household,
    /// Identifiers verbatim.
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentences {
    pub question: String,
    pub statement: String,
    pub negation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionTemplates {
    pub objects: ObjectStyle,
    pub predicates: BTreeMap<String, Sentences>,
}

impl QuestionTemplates {
    /// Templates shipped in `assets/questions.json`.
    pub fn bundled(domain: DomainKind) -> Self {
        let mut all: BTreeMap<String, QuestionTemplates> =
            serde_json::from_str(BUNDLED).expect("bundled question templates parse");
        all.remove(domain.as_str()).expect("bundled templates cover every domain")
    }

    pub fn from_json(text: &str) -> Result<Self, ProtocolError> {
        serde_json::from_str(text).map_err(|e| ProtocolError::Template(e.to_string()))
    }

    /// Fails unless every predicate of the task's domain has a template.
    pub fn check_covers(&self, task: &GroundTask) -> Result<(), ProtocolError> {
        for p in &task.domain.predicates {
            if !self.predicates.contains_key(p.name.as_str()) {
                return Err(ProtocolError::MissingTemplate(p.name.to_string()));
            }
        }
        Ok(())
    }

    fn sentences(&self, atom: &GroundAtom) -> Result<&Sentences, ProtocolError> {
        self.predicates
            .get(atom.predicate.as_str())
            .ok_or_else(|| ProtocolError::MissingTemplate(atom.predicate.to_string()))
    }

    pub fn object_phrase(&self, task: &GroundTask, obj: &ObjectName) -> String {
        let name = obj.as_str();
        match self.objects {
            ObjectStyle::Plain => name.to_string(),
            ObjectStyle::Blocks => match task.type_of(name).map(|t| t.as_str()) {
                Some("block") => match name.chars().next().and_then(Color::from_letter) {
                    Some(c) if name.len() == 1 => format!("the {} block", c.word()),
                    _ => format!("block {name}"),
                },
                Some("column") => name.to_uppercase(),
                _ => name.to_string(),
            },
            ObjectStyle::Household => {
                let (noun, index) = split_index(name);
                let noun = noun.replace('_', " ");
                let same =
                    task.objects.iter().filter(|(o, _)| split_index(o.as_str()).0 == split_index(name).0).count();
                match index {
                    Some(i) if same > 1 => format!("{noun} {i}"),
                    _ => format!("{} {noun}", article(&noun)),
                }
            }
        }
    }

    fn fill(&self, pattern: &str, task: &GroundTask, atom: &GroundAtom) -> String {
        let mut out = pattern.to_string();
        for (i, arg) in atom.args.iter().enumerate() {
            out = out.replace(&format!("{{{i}}}"), &self.object_phrase(task, arg));
        }
        out
    }

    /// `(holding bowl_1)` → "Is the agent holding a bowl?"
    pub fn atom_to_question(&self, task: &GroundTask, atom: &GroundAtom) -> Result<String, ProtocolError> {
        Ok(self.fill(&self.sentences(atom)?.question, task, atom))
    }

    /// Declarative form, used for goal descriptions.
    pub fn statement(&self, task: &GroundTask, atom: &GroundAtom, positive: bool) -> Result<String, ProtocolError> {
        let s = self.sentences(atom)?;
        Ok(self.fill(if positive { &s.statement } else { &s.negation }, task, atom))
    }

    /// The goal as one sentence per literal.
    pub fn goal_string(&self, task: &GroundTask) -> Result<String, ProtocolError> {
        let mut lines = Vec::new();
        for (atoms, positive) in [(&task.goal.pos, true), (&task.goal.neg, false)] {
            for a in atoms {
                lines.push(format!("{}.", capitalize(&self.statement(task, a, positive)?)));
            }
        }
        if lines.is_empty() {
            return Ok("The goal is already satisfied.".to_string());
        }
        Ok(lines.join("\n"))
    }
}

/// `cabinet_12` → ("cabinet", Some("12")).
fn split_index(name: &str) -> (&str, Option<&str>) {
    match name.rsplit_once('_') {
        Some((head, idx)) if !head.is_empty() && !idx.is_empty() && idx.bytes().all(|b| b.is_ascii_digit()) => {
            (head, Some(idx))
        }
        _ => (name, None),
    }
}

fn article(noun: &str) -> &'static str {
    match noun.chars().next() {
        Some('a' | 'e' | 'i' | 'o' | 'u') => "an",
        _ => "a",
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::{fixtures, load_task};

    #[test]
    fn household_phrases() {
        let t = load_task(fixtures::HOUSEHOLD_DOMAIN, fixtures::HOUSEHOLD_PROBLEM).unwrap();
        let q = QuestionTemplates::bundled(DomainKind::Hh);
        q.check_covers(&t).unwrap();
        assert_eq!(
            q.atom_to_question(&t, &GroundAtom::new("holding", &["bowl_1"])).unwrap(),
            "Is the agent holding a bowl?"
        );
        assert_eq!(q.goal_string(&t).unwrap(), "A bowl is on top of a sink.");

        let multi = crate::envs::hh::load_household_suite(crate::envs::Split::Hard).unwrap();
        let hard = multi.iter().find(|t| t.name == "cleaning_out_drawers_0").unwrap().ground().unwrap();
        let atom = GroundAtom::new("holding", &["bowl_1"]);
        assert_eq!(q.atom_to_question(&hard, &atom).unwrap(), "Is the agent holding bowl 1?");
    }

    #[test]
    fn block_phrases() {
        let t = load_task(fixtures::BLOCKSWORLD_DOMAIN, fixtures::BLOCKSWORLD_PROBLEM).unwrap();
        let q = QuestionTemplates::bundled(DomainKind::Bw);
        q.check_covers(&t).unwrap();
        let ask = |p: &str, a: &[&str]| q.atom_to_question(&t, &GroundAtom::new(p, a)).unwrap();
        assert_eq!(ask("incolumn", &["y", "c3"]), "Is the yellow block in column C3?");
        assert_eq!(ask("clear", &["y"]), "Is the yellow block the topmost block of its column?");
        assert_eq!(ask("on", &["r", "p"]), "Is the red block on top of the purple block?");
    }

    #[test]
    fn missing_template_is_an_error() {
        let t = load_task(fixtures::BLOCKSWORLD_DOMAIN, fixtures::BLOCKSWORLD_PROBLEM).unwrap();
        let q = QuestionTemplates::bundled(DomainKind::Hh);
        assert!(matches!(q.check_covers(&t), Err(ProtocolError::MissingTemplate(_))));
        assert!(q.atom_to_question(&t, &GroundAtom::new("clear", &["y"])).is_err());
    }
}
