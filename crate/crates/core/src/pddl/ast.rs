use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::name::{ActionName, Name, ObjectName, PredicateName, TypeName};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Requirement {
    Strips,
    Typing,
    NegativePreconditions,
    ConditionalEffects,
    Equality,
}

impl Requirement {
    pub const ALL: [Requirement; 5] = [
        Requirement::Strips,
        Requirement::Typing,
        Requirement::NegativePreconditions,
        Requirement::ConditionalEffects,
        Requirement::Equality,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Requirement::Strips => ":strips",
            Requirement::Typing => ":typing",
            Requirement::NegativePreconditions => ":negative-preconditions",
            Requirement::ConditionalEffects => ":conditional-effects",
            Requirement::Equality => ":equality",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        let lower = s.to_ascii_lowercase();
        Self::ALL.into_iter().find(|r| r.keyword() == lower)
    }
}

/// Type → parent map with the implicit root `object`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TypeHierarchy {
    parents: BTreeMap<TypeName, TypeName>,
    order: Vec<TypeName>,
}

impl TypeHierarchy {
    /// Declares `ty` with `parent`. Returns false if `ty` was already declared.
    pub(crate) fn declare(&mut self, ty: TypeName, parent: TypeName) -> bool {
        if ty.as_str() == "object" || self.parents.contains_key(&ty) {
            return false;
        }
        self.order.push(ty.clone());
        self.parents.insert(ty, parent);
        true
    }

    pub fn contains(&self, ty: &TypeName) -> bool {
        ty.as_str() == "object" || self.parents.contains_key(ty)
    }

    pub fn parent(&self, ty: &TypeName) -> Option<&TypeName> {
        self.parents.get(ty)
    }

    /// Declared types in declaration order (excluding `object`).
    pub fn declared(&self) -> &[TypeName] {
        &self.order
    }

    /// Reflexive, transitive subtype test.
    pub fn is_subtype(&self, sub: &TypeName, sup: &TypeName) -> bool {
        let mut cur = sub;
        // Bounded walk: the hierarchy is checked acyclic on construction.
        for _ in 0..=self.parents.len() + 1 {
            if cur == sup {
                return true;
            }
            match self.parents.get(cur) {
                Some(p) => cur = p,
                None => return false,
            }
        }
        false
    }

    /// Finds a type that does not reach `object` (cycle or dangling parent).
    pub(crate) fn find_unrooted(&self) -> Option<&TypeName> {
        self.order.iter().find(|ty| !self.is_subtype(ty, &Name::object()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypedVar {
    pub name: Name,
    pub ty: TypeName,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateSchema {
    pub name: PredicateName,
    pub params: Vec<TypedVar>,
}

impl PredicateSchema {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Const(ObjectName),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: PredicateName,
    pub terms: Vec<Term>,
}

/// Lifted or ground formula tree.
///
/// `Or` is accepted in preconditions because the household domain's
/// `navigate-to` uses it inside a `forall`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Forall(Vec<TypedVar>, Box<Formula>),
    When(Box<Formula>, Box<Formula>),
    Equal(Term, Term),
}

impl Formula {
    pub fn and(parts: Vec<Formula>) -> Self {
        Formula::And(parts)
    }

    pub fn negate(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn ground_atom(predicate: &str, args: &[&str]) -> Self {
        Formula::Atom(Atom {
            predicate: Name::lit(predicate),
            terms: args.iter().map(|a| Term::Const(Name::lit(a))).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: ActionName,
    pub params: Vec<TypedVar>,
    pub precondition: Formula,
    pub effect: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub name: Name,
    pub requirements: BTreeSet<Requirement>,
    pub types: TypeHierarchy,
    pub predicates: Vec<PredicateSchema>,
    pub actions: Vec<ActionSchema>,
}

impl Domain {
    pub fn predicate(&self, name: &str) -> Option<&PredicateSchema> {
        self.predicates.iter().find(|p| p.name.as_str() == name)
    }

    pub fn action(&self, name: &str) -> Option<&ActionSchema> {
        self.actions.iter().find(|a| a.name.as_str() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub name: Name,
    pub domain: Name,
    /// Objects with their declared type, in declaration order.
    pub objects: Vec<(ObjectName, TypeName)>,
    /// Positive init literals in source order, deduplicated.
    pub init: Vec<super::GroundAtom>,
    pub goal: Formula,
}

impl Problem {
    pub fn object_type(&self, obj: &str) -> Option<&TypeName> {
        self.objects.iter().find(|(o, _)| o.as_str() == obj).map(|(_, t)| t)
    }
}
