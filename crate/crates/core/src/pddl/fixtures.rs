//! The four reference PDDL files, embedded.

pub const BLOCKSWORLD_DOMAIN: &str = include_str!("../../fixtures/reference/blocksworld_domain.pddl");
pub const BLOCKSWORLD_PROBLEM: &str = include_str!("../../fixtures/reference/simple_problem_0.pddl");
pub const HOUSEHOLD_DOMAIN: &str = include_str!("../../fixtures/reference/household_domain.pddl");
pub const HOUSEHOLD_PROBLEM: &str = include_str!("../../fixtures/reference/cleaning_out_drawers_0.pddl");
