//! Answer and plan providers: ground-truth oracles, a seeded noisy oracle,
//! transcript replay, and a remote chat-completions client.

mod chat;
mod local;

use crate::pddl::{GroundAtom, GroundTask, State};
use crate::protocol::Prompt;

pub use chat::{ChatAnswerer, ChatClient, ChatEndpointConfig, ChatMessage, ChatPlanAgent, ContentPart};
pub use local::{
    oracle_answer, oracle_plan, plan_to_json, NoisyAnswerer, NoisyPlanAgent, NoisyProfile, OracleAnswerer,
    OraclePlanAgent, ParamForm, Replay,
};

#[derive(Debug, thiserror::Error)]
pub enum AgentError {
    #[error("agent configuration: {0}")]
    Config(String),
    #[error("HTTP {status}: {body}")]
    Http { status: u16, body: String },
    #[error("transport: {0}")]
    Transport(String),
    #[error("malformed response: {0}")]
    Malformed(String),
    #[error("replay transcript exhausted after {0} responses")]
    ReplayExhausted(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One yes/no question about the current scene.
#[derive(Debug, Clone, Copy)]
pub struct Query<'a> {
    pub atom: &'a GroundAtom,
    pub question: &'a str,
    pub prompt: &'a Prompt,
    /// Ground truth, read only by oracle-style agents.
    pub truth: &'a State,
    pub cot: bool,
    /// 0 for the first ask, 1 for the re-prompt after an unparsable reply.
    pub attempt: u8,
}

/// One plan request in the closed planning loop.
#[derive(Debug, Clone, Copy)]
pub struct PlanRequest<'a> {
    pub prompt: &'a Prompt,
    pub task: &'a GroundTask,
    pub truth: &'a State,
    pub cot: bool,
    pub attempt: u8,
}

pub trait Answerer: Send {
    fn name(&self) -> String;
    fn answer(&mut self, query: &Query) -> Result<String, AgentError>;
}

pub trait PlanAgent: Send {
    fn name(&self) -> String;
    fn plan(&mut self, request: &PlanRequest) -> Result<String, AgentError>;
}
