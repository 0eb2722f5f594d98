use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A canonical PDDL identifier.
///
/// PDDL is case-insensitive, so every name is lowercased on construction and
/// must then match `[a-z][a-z0-9_-]*`. Cloning is cheap (shared string).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

pub type TypeName = Name;
pub type ObjectName = Name;
pub type PredicateName = Name;
pub type ActionName = Name;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid identifier `{0}`")]
pub struct InvalidName(pub String);

impl Name {
    pub fn new(raw: &str) -> Result<Self, InvalidName> {
        let lower = raw.to_ascii_lowercase();
        if is_identifier(&lower) {
            Ok(Name(Arc::from(lower)))
        } else {
            Err(InvalidName(raw.to_string()))
        }
    }

    /// Panics on an invalid identifier. Meant for literals in code and tests.
    pub fn lit(raw: &str) -> Self {
        Self::new(raw).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn object() -> Self {
        Name(Arc::from("object"))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '-')
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Name {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl std::borrow::Borrow<str> for Name {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl Serialize for Name {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Name {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        Name::new(&raw).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalizes_to_lowercase() {
        assert_eq!(Name::new("inColumn").unwrap().as_str(), "incolumn");
        assert_eq!(Name::new("C1").unwrap(), Name::new("c1").unwrap());
    }

    #[test]
    fn rejects_bad_identifiers() {
        for bad in ["", "1abc", "?x", "a b", "-a", "a.b"] {
            assert!(Name::new(bad).is_err(), "{bad}");
        }
        for good in ["a", "navigate-to", "bowl_1", "moveBlock"] {
            assert!(Name::new(good).is_ok(), "{good}");
        }
    }
}
