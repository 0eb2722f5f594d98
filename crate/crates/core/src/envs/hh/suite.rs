use std::path::Path;
use std::sync::Arc;

use super::{domain, embedded::FIXTURES, privileged_text};
use crate::envs::{EnvError, Split};
use crate::pddl::{self, GroundTask, Problem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HhFamily {
    pub split: Split,
    pub name: &'static str,
    pub instances: usize,
    /// Minimum number of actions needed to finish the task.
    pub actions: usize,
}

const fn fam(split: Split, name: &'static str, instances: usize, actions: usize) -> HhFamily {
    HhFamily { split, name, instances, actions }
}

pub const HH_CATALOG: [HhFamily; 16] = [
    fam(Split::Simple, "cleaning_out_drawers", 5, 5),
    fam(Split::Simple, "locking_every_door", 5, 4),
    fam(Split::Simple, "locking_every_window", 5, 6),
    fam(Split::Simple, "packing_food_for_work", 5, 5),
    fam(Split::Simple, "sorting_books", 5, 4),
    fam(Split::Medium, "cleaning_out_drawers", 2, 10),
    fam(Split::Medium, "collect_misplaced_items", 4, 8),
    fam(Split::Medium, "packing_food_for_work", 4, 10),
    fam(Split::Medium, "putting_away_toys", 5, 8),
    fam(Split::Medium, "sorting_books", 4, 8),
    fam(Split::Medium, "sorting_groceries", 6, 10),
    fam(Split::Hard, "cleaning_out_drawers", 5, 15),
    fam(Split::Hard, "organizing_boxes_in_garage", 5, 11),
    fam(Split::Hard, "organizing_file_cabinet", 4, 14),
    fam(Split::Hard, "putting_away_toys", 4, 12),
    fam(Split::Hard, "sorting_groceries", 7, 13),
];

impl HhFamily {
    pub fn lookup(split: Split, name: &str) -> Option<&'static HhFamily> {
        HH_CATALOG.iter().find(|f| f.split == split && f.name == name)
    }
}

/// `cleaning_out_drawers_3` → `cleaning_out_drawers`.
pub fn family_of(task_name: &str) -> &str {
    match task_name.rsplit_once('_') {
        Some((head, idx)) if !idx.is_empty() && idx.chars().all(|c| c.is_ascii_digit()) => head,
        _ => task_name,
    }
}

#[derive(Debug, Clone)]
pub struct HhTask {
    pub split: Split,
    pub name: String,
    pub family: String,
    pub text: String,
    pub problem: Problem,
    pub privileged: String,
    /// Expected optimal plan length from the catalog, if the family is listed.
    pub target_len: Option<usize>,
}

impl HhTask {
    pub fn id(&self) -> String {
        format!("{}/{}", self.split, self.name)
    }

    pub fn ground(&self) -> Result<GroundTask, EnvError> {
        Ok(pddl::ground_shared(domain(), Arc::new(self.problem.clone()))?)
    }
}

pub fn load_household_task(split: Split, name: &str, text: &str) -> Result<HhTask, EnvError> {
    let fixture_err = |reason: String| EnvError::Fixture { name: format!("{split}/{name}"), reason };
    let problem = pddl::parse_problem(text, &domain()).map_err(|e| fixture_err(e.to_string()))?;
    let task = pddl::ground_shared(domain(), Arc::new(problem.clone())).map_err(|e| fixture_err(e.to_string()))?;
    let family = family_of(name).to_string();
    let target_len = HhFamily::lookup(split, &family).map(|f| f.actions);
    Ok(HhTask {
        split,
        name: name.to_string(),
        family,
        text: text.to_string(),
        privileged: privileged_text(&task, &task.init),
        problem,
        target_len,
    })
}

/// The 25 bundled problems of `split`, in file-name order.
pub fn load_household_suite(split: Split) -> Result<Vec<HhTask>, EnvError> {
    FIXTURES
        .iter()
        .filter(|(s, _, _)| *s == split.as_str())
        .map(|(_, name, text)| load_household_task(split, name, text))
        .collect()
}

/// Loads every `*.pddl` in `dir`, sorted by file name.
pub fn load_household_dir(dir: &Path, split: Split) -> Result<Vec<HhTask>, EnvError> {
    let io_err = |e: std::io::Error| EnvError::Fixture { name: dir.display().to_string(), reason: e.to_string() };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pddl"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let name = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let text = std::fs::read_to_string(p).map_err(io_err)?;
            load_household_task(split, &name, &text)
        })
        .collect()
}
