use serde::{Deserialize, Serialize};

use super::{ProtocolError, Setting};
use crate::envs::{DomainKind, Observation};

/// Placeholder replaced by the scene image, or by its text description when
/// no image can be attached.
pub const IMAGE: &str = "{image}";

/// A system/user pair as shipped in `assets/prompts`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptTemplate {
    pub system: String,
    pub user: String,
}

fn section<'a>(text: &'a str, tag: &str) -> Result<&'a str, ProtocolError> {
    let (open, close) = (format!("<{tag}>"), format!("</{tag}>"));
    let start = text.find(&open).ok_or_else(|| ProtocolError::Template(format!("missing {open}")))? + open.len();
    let len = text[start..].find(&close).ok_or_else(|| ProtocolError::Template(format!("missing {close}")))?;
    Ok(text[start..start + len].trim())
}

impl PromptTemplate {
    pub fn parse(text: &str) -> Result<Self, ProtocolError> {
        Ok(PromptTemplate { system: section(text, "system")?.to_string(), user: section(text, "user")?.to_string() })
    }

    pub fn bundled(setting: Setting, domain: DomainKind, cot: bool) -> Self {
        let text = match (setting, domain, cot) {
            (Setting::Grounder, DomainKind::Bw, false) => include_str!("../../assets/prompts/grounder_bw_nocot.txt"),
            (Setting::Grounder, DomainKind::Bw, true) => include_str!("../../assets/prompts/grounder_bw_cot.txt"),
            (Setting::Grounder, DomainKind::Hh, false) => include_str!("../../assets/prompts/grounder_hh_nocot.txt"),
            (Setting::Grounder, DomainKind::Hh, true) => include_str!("../../assets/prompts/grounder_hh_cot.txt"),
            (Setting::Planner, DomainKind::Bw, false) => include_str!("../../assets/prompts/planner_bw_nocot.txt"),
            (Setting::Planner, DomainKind::Bw, true) => include_str!("../../assets/prompts/planner_bw_cot.txt"),
            (Setting::Planner, DomainKind::Hh, false) => include_str!("../../assets/prompts/planner_hh_nocot.txt"),
            (Setting::Planner, DomainKind::Hh, true) => include_str!("../../assets/prompts/planner_hh_cot.txt"),
        };
        PromptTemplate::parse(text).expect("bundled prompt has system and user sections")
    }

    /// Substitutes `{name}` placeholders in the user message; `{image}` is kept.
    pub fn instantiate(&self, vars: &[(&str, &str)], observation: &Observation) -> Prompt {
        let mut user = self.user.clone();
        for (k, v) in vars {
            user = user.replace(&format!("{{{k}}}"), v);
        }
        Prompt {
            system: self.system.clone(),
            user,
            description: observation.description.clone(),
            image_svg: observation.image_svg.clone(),
        }
    }
}

/// A fully built model request, still carrying the `{image}` slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prompt {
    pub system: String,
    pub user: String,
    /// Text rendering of the scene, used when the image is not attached.
    pub description: String,
    pub image_svg: Option<String>,
}

impl Prompt {
    /// User text with the scene description in place of the image.
    pub fn user_text(&self) -> String {
        self.user.replace(IMAGE, &self.description)
    }

    /// User text split around the image slot.
    pub fn split_at_image(&self) -> (&str, &str) {
        self.user.split_once(IMAGE).unwrap_or((self.user.as_str(), ""))
    }

    pub fn with_user_suffix(&self, suffix: &str) -> Prompt {
        Prompt { user: format!("{}{suffix}", self.user), ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_prompt_loads() {
        for setting in [Setting::Grounder, Setting::Planner] {
            for domain in [DomainKind::Bw, DomainKind::Hh] {
                for cot in [false, true] {
                    let p = PromptTemplate::bundled(setting, domain, cot);
                    assert!(p.user.contains(IMAGE), "{setting:?} {domain} {cot}");
                    if setting == Setting::Planner {
                        assert!(p.user.contains("{goal_string}") && p.user.contains("{previous_actions}"));
                        assert_eq!(p.user.contains("{priviledged_info}"), domain == DomainKind::Hh);
                        assert!(p.system.contains("\"plan\""));
                    } else if cot {
                        assert!(p.system.contains("<answer></answer>"));
                    } else {
                        assert!(p.system.contains("ONLY with Yes or No"));
                    }
                }
            }
        }
    }

    #[test]
    fn image_slot() {
        let obs = Observation { visible: vec![], description: "scene".into(), image_svg: None, privileged: None };
        let t = PromptTemplate { system: "s".into(), user: "Goal: {goal_string}\n{image}\nend".into() };
        let p = t.instantiate(&[("goal_string", "win")], &obs);
        assert_eq!(p.user_text(), "Goal: win\nscene\nend");
        assert_eq!(p.split_at_image(), ("Goal: win\n", "\nend"));
    }
}
