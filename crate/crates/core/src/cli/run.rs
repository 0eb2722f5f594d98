use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{AgentSpec, RunConfig};
use super::generate::derive_seed;
use super::{write_file, CliError};
use crate::agents::{
    Answerer, ChatAnswerer, ChatClient, ChatPlanAgent, NoisyAnswerer, NoisyPlanAgent, NoisyProfile, OracleAnswerer,
    OraclePlanAgent, ParamForm, PlanAgent, Replay,
};
use crate::envs::bw::{self, BwEnv, SplitSpec};
use crate::envs::hh::{self, HhEnv, HH_CATALOG};
use crate::envs::{DomainKind, EnvConfig, Environment, Split};
use crate::metrics::{CellKey, SplitReport};
use crate::pddl::{self, GroundTask};
use crate::planner::BfsPlanner;
use crate::protocol::{
    run_grounder_episode, run_planner_episode, EpisodeMeta, EpisodeRecord, GrounderConfig, PlannerLoopConfig,
    PromptTemplate, QuestionTemplates, Setting,
};

pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone)]
pub struct TaskSpec {
    pub name: String,
    pub split: Split,
    pub task: Arc<GroundTask>,
    /// Longest optimal plan in the split; bounds the planner loop.
    pub upper_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub config: RunConfig,
    pub agent: String,
    pub reports: Vec<SplitReport>,
}

fn upper_bound(domain: DomainKind, split: Split) -> usize {
    match domain {
        DomainKind::Bw => SplitSpec::bw(split).max_len,
        DomainKind::Hh => HH_CATALOG.iter().filter(|f| f.split == split).map(|f| f.actions).max().unwrap_or(1),
    }
}

fn pddl_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pddl"))
        .collect();
    paths.sort();
    Ok(paths)
}

/// Tasks of every configured split, in a fixed order.
pub fn load_tasks(cfg: &RunConfig) -> Result<Vec<TaskSpec>, CliError> {
    let infra = |name: &str, e: &dyn std::fmt::Display| CliError::Infra(format!("{name}: {e}"));
    let mut tasks = Vec::new();
    for &split in &cfg.splits {
        let bound = upper_bound(cfg.domain, split);
        let dir = cfg.tasks_dir.as_ref().map(|d| d.join(split.as_str()));
        let loaded: Vec<(String, GroundTask)> = match (cfg.domain, dir) {
            (DomainKind::Bw, Some(dir)) => pddl_files(&dir)?
                .par_iter()
                .map(|p| {
                    let name = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                    let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
                    let problem = pddl::parse_problem(&text, &bw::domain()).map_err(|e| infra(&name, &e))?;
                    let task = pddl::ground_shared(bw::domain(), Arc::new(problem)).map_err(|e| infra(&name, &e))?;
                    Ok((name, task))
                })
                .collect::<Result<_, CliError>>()?,
            (DomainKind::Bw, None) => {
                let spec = SplitSpec::bw(split);
                (0..cfg.problems)
                    .into_par_iter()
                    .map(|i| {
                        let name = format!("{split}_problem_{i}");
                        let p = bw::generate_named(
                            &spec,
                            derive_seed(cfg.seed, i as u64),
                            bw::DEFAULT_MAX_REJECTIONS,
                            &name,
                        )
                        .map_err(|e| infra(&name, &e))?;
                        Ok((name.clone(), p.ground().map_err(|e| infra(&name, &e))?))
                    })
                    .collect::<Result<_, CliError>>()?
            }
            (DomainKind::Hh, dir) => {
                let suite = match dir {
                    Some(d) => hh::load_household_dir(&d, split),
                    None => hh::load_household_suite(split),
                }
                .map_err(|e| CliError::Infra(e.to_string()))?;
                suite
                    .into_iter()
                    .map(|t| {
                        let g = t.ground().map_err(|e| infra(&t.name, &e))?;
                        Ok((t.name, g))
                    })
                    .collect::<Result<_, CliError>>()?
            }
        };
        tasks.extend(loaded.into_iter().map(|(name, task)| TaskSpec {
            name,
            split,
            task: Arc::new(task),
            upper_bound: bound,
        }));
    }
    Ok(tasks)
}

fn make_env(
    domain: DomainKind,
    task: Arc<GroundTask>,
    failure_prob: f64,
    seed: u64,
) -> Result<Box<dyn Environment>, CliError> {
    let cfg = EnvConfig::new(domain, failure_prob, seed).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(match domain {
        DomainKind::Bw => Box::new(BwEnv::new(task, &cfg).map_err(|e| CliError::Infra(e.to_string()))?),
        DomainKind::Hh => Box::new(HhEnv::new(task, &cfg)),
    })
}

fn log_name(cfg: &RunConfig, t: &TaskSpec) -> String {
    format!("{}_{}_{}.jsonl", cfg.domain, t.split, t.name)
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    chat: Option<Arc<ChatClient>>,
    templates: QuestionTemplates,
    prompt: PromptTemplate,
    oracle_prompt: PromptTemplate,
}

impl Ctx<'_> {
    fn answerer(&self, stream: u64, log: &str) -> Result<Box<dyn Answerer>, CliError> {
        Ok(match &self.cfg.agent {
            AgentSpec::Oracle => Box::new(OracleAnswerer),
            AgentSpec::Noisy { accuracy, overrides, seed } => {
                let profile = NoisyProfile { accuracy: *accuracy, overrides: overrides.clone(), seed: *seed };
                Box::new(NoisyAnswerer::new(profile, stream).map_err(|e| CliError::Usage(e.to_string()))?)
            }
            AgentSpec::Replay { path } => Box::new(replay(path, log)?),
            AgentSpec::Chat(_) => Box::new(ChatAnswerer(self.chat.clone().expect("client built for chat agents"))),
        })
    }

    fn plan_agent(&self, stream: u64, log: &str) -> Result<Box<dyn PlanAgent>, CliError> {
        let form = match self.cfg.domain {
            DomainKind::Bw => ParamForm::Map,
            DomainKind::Hh => ParamForm::List,
        };
        Ok(match &self.cfg.agent {
            AgentSpec::Oracle => Box::new(OraclePlanAgent::new(form)),
            AgentSpec::Noisy { accuracy, overrides, seed } => {
                let profile = NoisyProfile { accuracy: *accuracy, overrides: overrides.clone(), seed: *seed };
                Box::new(NoisyPlanAgent::new(profile, form, stream).map_err(|e| CliError::Usage(e.to_string()))?)
            }
            AgentSpec::Replay { path } => Box::new(replay(path, log)?),
            AgentSpec::Chat(_) => Box::new(ChatPlanAgent(self.chat.clone().expect("client built for chat agents"))),
        })
    }

    fn grounder_cfg(&self) -> GrounderConfig {
        GrounderConfig { cot: self.cfg.cot, max_replans: self.cfg.max_replans, max_questions: self.cfg.max_questions }
    }

    /// Questions the oracle grounder asks with reliable actions.
    fn oracle_questions(&self, t: &TaskSpec) -> Result<usize, CliError> {
        let mut env = make_env(self.cfg.domain, t.task.clone(), 0.0, 0)?;
        let meta = EpisodeMeta { task_id: &t.name, seed: 0 };
        let cfg = GrounderConfig { cot: false, ..self.grounder_cfg() };
        let rec = run_grounder_episode(
            env.as_mut(),
            &mut OracleAnswerer,
            &BfsPlanner::default(),
            &self.templates,
            &self.oracle_prompt,
            &cfg,
            meta,
        )
        .map_err(|e| CliError::Infra(format!("{}: {e}", t.name)))?;
        Ok(rec.counters.questions)
    }

    fn run_one(&self, index: usize, t: &TaskSpec) -> Result<EpisodeRecord, CliError> {
        let seed = derive_seed(self.cfg.seed, index as u64);
        let log = log_name(self.cfg, t);
        let mut env = make_env(self.cfg.domain, t.task.clone(), self.cfg.failure_prob, seed)?;
        self.write_scene(t, env.as_ref())?;
        let meta = EpisodeMeta { task_id: &t.name, seed };
        let result = match self.cfg.setting {
            Setting::Grounder => {
                let mut a = self.answerer(index as u64, &log)?;
                run_grounder_episode(
                    env.as_mut(),
                    a.as_mut(),
                    &BfsPlanner::default(),
                    &self.templates,
                    &self.prompt,
                    &self.grounder_cfg(),
                    meta,
                )
            }
            Setting::Planner => {
                let mut a = self.plan_agent(index as u64, &log)?;
                let cfg = PlannerLoopConfig::for_split(self.cfg.cot, t.upper_bound, self.cfg.step_multiplier);
                run_planner_episode(env.as_mut(), a.as_mut(), &self.prompt, &self.templates, &cfg, meta)
            }
        };
        let mut rec = result.map_err(|e| CliError::Infra(format!("{}: {e}", t.name)))?;
        rec.agent = self.cfg.agent_label();
        if self.cfg.oracle_questions {
            rec.oracle_questions = Some(self.oracle_questions(t)?);
        }
        write_episode_log(&self.cfg.out.join("episodes").join(&log), &rec)?;
        Ok(rec)
    }

    fn write_scene(&self, t: &TaskSpec, env: &dyn Environment) -> Result<(), CliError> {
        let base = self.cfg.out.join("scenes").join(format!("{}_{}_{}", self.cfg.domain, t.split, t.name));
        let json = serde_json::to_string_pretty(&env.scene_json()).expect("scene serializes");
        write_file(&base.with_extension("json"), json + "\n")?;
        if let Some(svg) = env.observe().image_svg {
            write_file(&base.with_extension("svg"), svg)?;
        }
        Ok(())
    }
}

fn replay(run_dir: &Path, log: &str) -> Result<Replay, CliError> {
    let path = run_dir.join("episodes").join(log);
    Replay::from_episode_log(&path).map_err(|e| CliError::Infra(format!("{}: {e}", path.display())))
}

/// One JSON line per event, then a closing line with outcome and counters.
/// Each line goes out in a single write, so an interrupted run leaves only
/// whole lines behind.
fn write_episode_log(path: &Path, rec: &EpisodeRecord) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    let mut file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut end = serde_json::to_value(rec).expect("record serializes");
    if let Some(obj) = end.as_object_mut() {
        obj.remove("events");
        obj.insert("event".into(), "end".into());
    }
    let lines = rec.events.iter().map(|e| serde_json::to_string(e).expect("event serializes")).chain([end.to_string()]);
    for mut line in lines {
        line.push('\n');
        file.write_all(line.as_bytes()).map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}

/// Runs every (task, setting) episode of the config and writes the run directory:
/// `config.json`, `episodes/*.jsonl`, `scenes/*`, and `summary.json`.
pub fn cmd_run(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    cfg.validate()?;
    let chat = match &cfg.agent {
        AgentSpec::Chat(c) => Some(Arc::new(ChatClient::new(c.clone()).map_err(|e| CliError::Usage(e.to_string()))?)),
        _ => None,
    };
    let mut jobs = cfg.jobs.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    if let AgentSpec::Chat(c) = &cfg.agent {
        jobs = jobs.min(c.max_in_flight);
    }
    write_file(&cfg.out.join("config.json"), serde_json::to_string_pretty(cfg).expect("config serializes") + "\n")?;

    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| CliError::Infra(e.to_string()))?;
    let ctx = Ctx {
        cfg,
        chat,
        templates: QuestionTemplates::bundled(cfg.domain),
        prompt: PromptTemplate::bundled(cfg.setting, cfg.domain, cfg.cot),
        oracle_prompt: PromptTemplate::bundled(Setting::Grounder, cfg.domain, false),
    };
    let (tasks, records) = pool.install(|| -> Result<_, CliError> {
        let tasks = load_tasks(cfg)?;
        let records: Vec<EpisodeRecord> =
            tasks.par_iter().enumerate().map(|(i, t)| ctx.run_one(i, t)).collect::<Result<_, _>>()?;
        Ok((tasks, records))
    })?;

    let key = CellKey { agent: cfg.agent_label(), setting: cfg.setting, cot: cfg.cot };
    let reports = cfg
        .splits
        .iter()
        .map(|&split| {
            let recs: Vec<EpisodeRecord> =
                tasks.iter().zip(&records).filter(|(t, _)| t.split == split).map(|(_, r)| r.clone()).collect();
            SplitReport::from_records(&key, cfg.domain.as_str(), split.as_str(), &recs)
        })
        .collect();
    let summary = RunSummary { config: cfg.clone(), agent: cfg.agent_label(), reports };
    write_file(
        &cfg.out.join(SUMMARY_FILE),
        serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n",
    )?;
    Ok(summary)
}
