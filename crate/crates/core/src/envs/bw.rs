//! Blocksworld: scenes, problem generation, stepping and the SVG/text surrogates.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{failure_fires, EnvConfig, EnvError, Environment, Observation, Split, StepResult};
use crate::pddl::{self, applicable, apply, Domain, GroundAction, GroundAtom, GroundTask, Problem, State};
use crate::planner::{self, PlanOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "r")]
    Red,
    #[serde(rename = "g")]
    Green,
    #[serde(rename = "b")]
    Blue,
    #[serde(rename = "y")]
    Yellow,
    #[serde(rename = "p")]
    Purple,
    #[serde(rename = "o")]
    Orange,
}

impl Color {
    pub const ALL: [Color; 6] = [Color::Red, Color::Green, Color::Blue, Color::Yellow, Color::Purple, Color::Orange];

    /// Object name used in PDDL (`r`, `g`, ...).
    pub fn letter(self) -> char {
        match self {
            Color::Red => 'r',
            Color::Green => 'g',
            Color::Blue => 'b',
            Color::Yellow => 'y',
            Color::Purple => 'p',
            Color::Orange => 'o',
        }
    }

    pub fn word(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
            Color::Yellow => "yellow",
            Color::Purple => "purple",
            Color::Orange => "orange",
        }
    }

    pub fn from_letter(c: char) -> Option<Color> {
        Color::ALL.into_iter().find(|x| x.letter() == c.to_ascii_lowercase())
    }

    pub fn object_name(self) -> String {
        self.letter().to_string()
    }
}

pub fn column_name(index: usize) -> String {
    format!("c{}", index + 1)
}

fn column_index(name: &str) -> Option<usize> {
    let n: usize = name.strip_prefix('c')?.parse().ok()?;
    n.checked_sub(1)
}

/// Columns left to right, each a bottom-to-top stack.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BwScene {
    pub columns: Vec<Vec<Color>>,
}

impl BwScene {
    pub fn empty(columns: usize) -> Self {
        BwScene { columns: vec![Vec::new(); columns] }
    }

    pub fn blocks(&self) -> impl Iterator<Item = Color> + '_ {
        self.columns.iter().flatten().copied()
    }

    pub fn num_blocks(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let mut seen = Vec::new();
        for b in self.blocks() {
            if seen.contains(&b) {
                return Err(EnvError::Scene(format!("block {} appears twice", b.letter())));
            }
            seen.push(b);
        }
        Ok(())
    }

    /// The symbolic state this scene denotes. `leftOf`/`rightOf` relate
    /// adjacent columns only.
    pub fn to_state(&self) -> State {
        let mut s = State::new();
        for (i, stack) in self.columns.iter().enumerate() {
            let col = column_name(i);
            for (h, b) in stack.iter().enumerate() {
                s.insert(GroundAtom::new("incolumn", &[&b.object_name(), &col]));
                if h > 0 {
                    s.insert(GroundAtom::new("on", &[&b.object_name(), &stack[h - 1].object_name()]));
                }
            }
            if let Some(top) = stack.last() {
                s.insert(GroundAtom::new("clear", &[&top.object_name()]));
            }
        }
        for i in 1..self.columns.len() {
            let (l, r) = (column_name(i - 1), column_name(i));
            s.insert(GroundAtom::new("leftof", &[&l, &r]));
            s.insert(GroundAtom::new("rightof", &[&r, &l]));
        }
        s
    }

    /// Inverse of [`BwScene::to_state`]; rejects states that no scene denotes.
    pub fn from_state(state: &State, columns: usize) -> Result<Self, EnvError> {
        let bad = |m: String| Err(EnvError::Scene(m));
        let mut column_of: BTreeMap<Color, usize> = BTreeMap::new();
        let mut below: BTreeMap<Color, Color> = BTreeMap::new();
        let mut clear = Vec::new();
        let block = |n: &pddl::Name| {
            let mut chars = n.as_str().chars();
            match (chars.next().and_then(Color::from_letter), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(EnvError::Scene(format!("`{n}` is not a block"))),
            }
        };
        for a in state.iter() {
            match (a.predicate.as_str(), a.args.as_slice()) {
                ("incolumn", [b, c]) => {
                    let idx = column_index(c.as_str()).filter(|&i| i < columns);
                    let Some(idx) = idx else { return bad(format!("unknown column `{c}`")) };
                    if column_of.insert(block(b)?, idx).is_some() {
                        return bad(format!("block `{b}` is in two columns"));
                    }
                }
                ("on", [x, y]) => {
                    if below.insert(block(x)?, block(y)?).is_some() {
                        return bad(format!("block `{x}` is on two blocks"));
                    }
                }
                ("clear", [b]) => clear.push(block(b)?),
                ("leftof" | "rightof", _) => {}
                _ => return bad(format!("unexpected atom {a}")),
            }
        }
        let mut scene = BwScene::empty(columns);
        for (i, stack) in scene.columns.iter_mut().enumerate() {
            let members: Vec<Color> = column_of.iter().filter(|(_, &c)| c == i).map(|(&b, _)| b).collect();
            let bottoms: Vec<Color> = members.iter().copied().filter(|b| !below.contains_key(b)).collect();
            if members.is_empty() {
                continue;
            }
            let [bottom] = bottoms.as_slice() else {
                return bad(format!("column {} has {} bottom blocks", column_name(i), bottoms.len()));
            };
            stack.push(*bottom);
            while stack.len() < members.len() {
                let top = *stack.last().expect("non-empty");
                let above: Vec<Color> = members.iter().copied().filter(|b| below.get(b) == Some(&top)).collect();
                let [next] = above.as_slice() else {
                    return bad(format!("column {} is not a single stack", column_name(i)));
                };
                stack.push(*next);
            }
        }
        for (x, y) in &below {
            if !column_of.contains_key(x) || column_of.get(x) != column_of.get(y) {
                return bad(format!("`on {} {}` crosses columns", x.letter(), y.letter()));
            }
        }
        if scene.to_state() != *state {
            return bad("clear/leftOf/rightOf atoms disagree with the stacks".into());
        }
        Ok(scene)
    }

    fn random(rng: &mut impl Rng, blocks: &[Color], columns: usize) -> Self {
        let mut order = blocks.to_vec();
        order.shuffle(rng);
        let mut scene = BwScene::empty(columns);
        for b in order {
            scene.columns[rng.random_range(0..columns)].push(b);
        }
        scene
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub split: Split,
    pub blocks: usize,
    pub columns: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub problems: usize,
}

impl SplitSpec {
    pub fn bw(split: Split) -> Self {
        let (blocks, columns, min_len, max_len) = match split {
            Split::Simple => (3, 4, 3, 5),
            Split::Medium => (5, 5, 5, 10),
            Split::Hard => (6, 4, 8, 15),
        };
        SplitSpec { split, blocks, columns, min_len, max_len, problems: 25 }
    }

    pub fn contains(&self, len: usize) -> bool {
        (self.min_len..=self.max_len).contains(&len)
    }
}

pub fn domain() -> Arc<Domain> {
    static DOMAIN: OnceLock<Arc<Domain>> = OnceLock::new();
    DOMAIN
        .get_or_init(|| {
            Arc::new(pddl::parse_domain(pddl::fixtures::BLOCKSWORLD_DOMAIN).expect("bundled domain parses"))
        })
        .clone()
}

/// Problem text in the style of the reference fixture. The goal lists
/// `inColumn` for every block plus `clear`/`on` atoms pinning stack order.
pub fn problem_text(name: &str, init: &BwScene, goal: &BwScene) -> String {
    let mut blocks: Vec<Color> = init.blocks().collect();
    blocks.sort();
    let upper = |b: &Color| b.letter().to_ascii_uppercase().to_string();
    let col = |i: usize| format!("C{}", i + 1);
    let mut out = String::new();
    let _ = writeln!(out, "(define (problem {name})\n  (:domain Blocksworld)\n\n  (:objects");
    let _ = writeln!(out, "    {} - block", blocks.iter().map(upper).collect::<Vec<_>>().join(" "));
    let _ = writeln!(out, "    {} - column\n  )\n", (0..init.columns.len()).map(col).collect::<Vec<_>>().join(" "));

    let body = |scene: &BwScene, out: &mut String, indent: &str, with_layout: bool| {
        for stack in &scene.columns {
            if let Some(top) = stack.last() {
                let _ = writeln!(out, "{indent}(clear {})", upper(top));
            }
        }
        for stack in &scene.columns {
            for w in stack.windows(2) {
                let _ = writeln!(out, "{indent}(on {} {})", upper(&w[1]), upper(&w[0]));
            }
        }
        for (i, stack) in scene.columns.iter().enumerate() {
            for b in stack {
                let _ = writeln!(out, "{indent}(inColumn {} {})", upper(b), col(i));
            }
        }
        if with_layout {
            for i in 1..scene.columns.len() {
                let _ = writeln!(out, "{indent}(rightOf {} {})", col(i), col(i - 1));
            }
            for i in 1..scene.columns.len() {
                let _ = writeln!(out, "{indent}(leftOf {} {})", col(i - 1), col(i));
            }
        }
    };
    out.push_str("  (:init\n");
    body(init, &mut out, "    ", true);
    out.push_str("  )\n  (:goal\n    (and\n");
    body(goal, &mut out, "      ", false);
    out.push_str("    )\n  )\n)\n");
    out
}

#[derive(Debug, Clone)]
pub struct BwProblem {
    pub name: String,
    pub text: String,
    pub problem: Problem,
    pub init: BwScene,
    pub goal: BwScene,
    pub optimal_len: usize,
}

impl BwProblem {
    pub fn ground(&self) -> Result<GroundTask, EnvError> {
        Ok(pddl::ground_shared(domain(), Arc::new(self.problem.clone()))?)
    }
}

pub const DEFAULT_MAX_REJECTIONS: usize = 10_000;

/// Samples init/goal scenes until the optimal plan length falls in the
/// split's range. Fully determined by `(spec, seed)`.
pub fn generate_bw_problem(spec: &SplitSpec, seed: u64, max_rejections: usize) -> Result<BwProblem, EnvError> {
    generate_named(spec, seed, max_rejections, &format!("{}_problem_{seed}", spec.split))
}

pub fn generate_named(spec: &SplitSpec, seed: u64, max_rejections: usize, name: &str) -> Result<BwProblem, EnvError> {
    if spec.blocks > Color::ALL.len() || spec.columns == 0 {
        return Err(EnvError::Config(format!("{} blocks / {} columns not supported", spec.blocks, spec.columns)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dom = domain();
    for _ in 0..max_rejections.max(1) {
        let mut palette = Color::ALL.to_vec();
        palette.shuffle(&mut rng);
        let blocks = &palette[..spec.blocks];
        let init = BwScene::random(&mut rng, blocks, spec.columns);
        let goal = BwScene::random(&mut rng, blocks, spec.columns);
        if init == goal && !spec.contains(0) {
            continue;
        }
        let text = problem_text(name, &init, &goal);
        let problem = pddl::parse_problem(&text, &dom)?;
        let task = pddl::ground_shared(dom.clone(), Arc::new(problem.clone()))?;
        let len = match planner::plan(&task, planner::DEFAULT_BUDGET) {
            PlanOutcome::Solved(p) => p.len(),
            _ => continue,
        };
        if spec.contains(len) {
            return Ok(BwProblem { name: name.to_string(), text, problem, init, goal, optimal_len: len });
        }
    }
    Err(EnvError::GenerationExhausted { lo: spec.min_len, hi: spec.max_len, attempts: max_rejections })
}

/// Fill colors for the SVG surrogate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Palette(BTreeMap<Color, String>);

impl Palette {
    pub fn from_json(text: &str) -> Result<Self, EnvError> {
        let p: Palette = serde_json::from_str(text).map_err(|e| EnvError::Config(format!("palette: {e}")))?;
        for c in Color::ALL {
            let hex = p.0.get(&c).ok_or_else(|| EnvError::Config(format!("palette lacks `{}`", c.letter())))?;
            let ok = hex.len() == 7 && hex.starts_with('#') && hex[1..].chars().all(|ch| ch.is_ascii_hexdigit());
            if !ok {
                return Err(EnvError::Config(format!("palette entry `{hex}` is not #rrggbb")));
            }
        }
        Ok(p)
    }

    pub fn get(&self, c: Color) -> &str {
        &self.0[&c]
    }
}

impl Default for Palette {
    fn default() -> Self {
        Palette::from_json(include_str!("../../assets/palette.json")).expect("bundled palette is valid")
    }
}

const COLUMN_W: usize = 100;
const BLOCK: usize = 60;
const MARGIN: usize = 20;
const BASE_Y: usize = 420;

/// Deterministic SVG: columns left to right labeled C1..Cn under the base line.
pub fn render_bw_svg(scene: &BwScene, palette: &Palette) -> String {
    let width = MARGIN * 2 + COLUMN_W * scene.columns.len();
    let height = BASE_Y + 60;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r##"<line x1="{MARGIN}" y1="{BASE_Y}" x2="{}" y2="{BASE_Y}" stroke="#000000" stroke-width="2"/>"##,
        width - MARGIN
    );
    for (i, stack) in scene.columns.iter().enumerate() {
        let x0 = MARGIN + i * COLUMN_W;
        let bx = x0 + (COLUMN_W - BLOCK) / 2;
        for (h, b) in stack.iter().enumerate() {
            let y = BASE_Y - (h + 1) * BLOCK;
            let _ = writeln!(
                s,
                r##"<rect class="block" data-block="{}" data-column="{i}" data-height="{h}" x="{bx}" y="{y}" width="{BLOCK}" height="{BLOCK}" fill="{}" stroke="#000000"/>"##,
                b.letter(),
                palette.get(*b)
            );
        }
        let _ = writeln!(
            s,
            r#"<text class="label" x="{}" y="{}" font-family="sans-serif" font-size="20" text-anchor="middle">C{}</text>"#,
            x0 + COLUMN_W / 2,
            BASE_Y + 35,
            i + 1
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Column-by-column text rendering of a scene.
pub fn describe_bw(scene: &BwScene) -> String {
    if scene.num_blocks() == 0 {
        return "All columns are empty.".to_string();
    }
    let mut out = String::new();
    for (i, stack) in scene.columns.iter().enumerate() {
        if stack.is_empty() {
            let _ = writeln!(out, "Column C{}: empty", i + 1);
        } else {
            let names: Vec<String> = stack.iter().map(|b| b.letter().to_ascii_uppercase().to_string()).collect();
            let _ = writeln!(out, "Column C{}: {} (bottom to top)", i + 1, names.join(", "));
        }
    }
    let mut blocks: Vec<Color> = scene.blocks().collect();
    blocks.sort();
    let legend: Vec<String> =
        blocks.iter().map(|b| format!("{} = {}", b.letter().to_ascii_uppercase(), b.word())).collect();
    let _ = write!(out, "Blocks: {}.", legend.join(", "));
    out
}

pub struct BwEnv {
    task: Arc<GroundTask>,
    state: State,
    scene: BwScene,
    columns: usize,
    failure_prob: f64,
    rng: ChaCha8Rng,
    palette: Palette,
}

impl BwEnv {
    pub fn new(task: Arc<GroundTask>, cfg: &EnvConfig) -> Result<Self, EnvError> {
        let columns = task.objects.iter().filter(|(_, t)| t.as_str() == "column").count();
        let state = task.init.clone();
        let scene = BwScene::from_state(&state, columns)?;
        Ok(BwEnv {
            task,
            state,
            scene,
            columns,
            failure_prob: cfg.failure_prob,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            palette: Palette::default(),
        })
    }

    pub fn with_palette(mut self, palette: Palette) -> Self {
        self.palette = palette;
        self
    }

    pub fn scene(&self) -> &BwScene {
        &self.scene
    }
}

impl Environment for BwEnv {
    fn task(&self) -> &GroundTask {
        &self.task
    }

    fn truth(&self) -> &State {
        &self.state
    }

    fn observe(&self) -> Observation {
        Observation {
            visible: self.task.fluents.clone(),
            description: describe_bw(&self.scene),
            image_svg: Some(render_bw_svg(&self.scene, &self.palette)),
            privileged: None,
        }
    }

    /// Inapplicable moves and injected failures leave the scene unchanged.
    fn step(&mut self, action: &GroundAction) -> Result<StepResult, EnvError> {
        if action.name.as_str() != "moveblock" {
            return Err(EnvError::Contract(format!("{action} is not a moveblock action")));
        }
        let executed = applicable(&self.state, action) && !failure_fires(self.failure_prob, &mut self.rng);
        if executed {
            self.state = apply(&self.state, action)?;
            self.scene = BwScene::from_state(&self.state, self.columns)?;
        }
        Ok(StepResult { executed, observation: self.observe(), goal_reached: self.goal_reached() })
    }

    fn scene_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.scene).expect("scene serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::DomainKind;
    use crate::pddl::fixtures;

    fn reference() -> GroundTask {
        pddl::load_task(fixtures::BLOCKSWORLD_DOMAIN, fixtures::BLOCKSWORLD_PROBLEM).unwrap()
    }

    #[test]
    fn reference_init_scene() {
        let task = reference();
        let scene = BwScene::from_state(&task.init, 4).unwrap();
        assert_eq!(scene.columns, vec![vec![Color::Purple], vec![Color::Yellow], vec![], vec![Color::Red]]);
        assert_eq!(scene.to_state(), task.init);
    }

    #[test]
    fn svg_places_blocks() {
        let scene = BwScene::from_state(&reference().init, 4).unwrap();
        let svg = render_bw_svg(&scene, &Palette::default());
        assert_eq!(svg.matches(r#"class="block""#).count(), 3);
        for (b, col) in [('y', 1), ('p', 0), ('r', 3)] {
            assert!(svg.contains(&format!(r#"data-block="{b}" data-column="{col}" data-height="0""#)), "{b}");
        }
        assert_eq!(svg, render_bw_svg(&scene, &Palette::default()));
        let empty = render_bw_svg(&BwScene::empty(4), &Palette::default());
        assert_eq!(empty.matches(r#"class="label""#).count(), 4);
        assert_eq!(empty.matches(r#"class="block""#).count(), 0);
    }

    #[test]
    fn descriptions() {
        assert_eq!(describe_bw(&BwScene::empty(4)), "All columns are empty.");
        let text = describe_bw(&BwScene::from_state(&reference().init, 4).unwrap());
        assert!(text.contains("Column C2: Y (bottom to top)"), "{text}");
        assert!(text.contains("Column C3: empty"));
    }

    #[test]
    fn step_semantics() {
        let task = Arc::new(reference());
        let cfg = EnvConfig::new(DomainKind::Bw, 0.0, 1).unwrap();
        let mut env = BwEnv::new(task.clone(), &cfg).unwrap();
        let r = env.step(task.find_action("moveblock", &["y", "c3"]).unwrap()).unwrap();
        assert!(r.executed);
        assert_eq!(env.scene().columns[2], vec![Color::Yellow]);
        let r = env.step(task.find_action("moveblock", &["y", "c3"]).unwrap()).unwrap();
        assert!(!r.executed);

        let cfg = EnvConfig::new(DomainKind::Bw, 1.0, 1).unwrap();
        let mut env = BwEnv::new(task.clone(), &cfg).unwrap();
        for _ in 0..10 {
            assert!(!env.step(task.find_action("moveblock", &["p", "c3"]).unwrap()).unwrap().executed);
        }
        assert_eq!(env.truth(), &task.init);
    }

    #[test]
    fn rejects_bad_states() {
        let mut s = BwScene { columns: vec![vec![Color::Red], vec![]] }.to_state();
        s.insert(GroundAtom::new("incolumn", &["r", "c2"]));
        assert!(BwScene::from_state(&s, 2).is_err());
    }

    #[test]
    fn generation_is_deterministic_and_in_range() {
        let spec = SplitSpec::bw(Split::Simple);
        let a = generate_bw_problem(&spec, 7, DEFAULT_MAX_REJECTIONS).unwrap();
        let b = generate_bw_problem(&spec, 7, DEFAULT_MAX_REJECTIONS).unwrap();
        assert_eq!(a.text, b.text);
        assert!(spec.contains(a.optimal_len));
        assert_eq!(a.init.num_blocks(), 3);
        assert_eq!(a.init.columns.len(), 4);
        let task = a.ground().unwrap();
        assert_eq!(BwScene::from_state(&task.init, 4).unwrap(), a.init);
    }

    #[test]
    fn palette_validation() {
        assert!(Palette::from_json(r##"{"r": "#000000"}"##).is_err());
    }
}
