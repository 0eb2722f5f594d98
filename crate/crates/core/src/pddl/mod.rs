//! Parsing, representation, grounding and evaluation of the PDDL fragment
//! `:strips :typing :negative-preconditions :conditional-effects :equality`.

mod ast;
mod error;
pub mod fixtures;
mod ground;
mod name;
mod parse;
mod print;
mod sexpr;

pub use ast::{
    ActionSchema, Atom, Domain, Formula, PredicateSchema, Problem, Requirement, Term, TypeHierarchy, TypedVar,
};
pub use error::PddlError;
pub use ground::{
    applicable, apply, ground, ground_shared, holds, ConditionalEffect, Delta, Goal, GroundAction, GroundAtom,
    GroundTask, Literal, Precondition, State,
};
pub use name::{ActionName, InvalidName, Name, ObjectName, PredicateName, TypeName};
pub use parse::{parse_domain, parse_problem};
pub use print::{formula as print_formula, print_domain, print_problem, print_problem_from};
pub use sexpr::Pos;

/// Parses and grounds a domain/problem pair in one step.
pub fn load_task(domain: &str, problem: &str) -> Result<GroundTask, PddlError> {
    let d = parse_domain(domain)?;
    let p = parse_problem(problem, &d)?;
    ground_shared(std::sync::Arc::new(d), std::sync::Arc::new(p))
}
