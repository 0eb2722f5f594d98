pub mod agents;
pub mod cli;
pub mod envs;
pub mod metrics;
pub mod pddl;
pub mod planner;
pub mod protocol;
