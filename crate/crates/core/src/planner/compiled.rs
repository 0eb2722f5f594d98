//! Bitset encoding of a ground task used by the search.

use crate::pddl::{GroundTask, State};

pub(crate) type Bits = Box<[u64]>;

#[derive(Debug, Clone)]
struct Mask {
    words: Vec<(usize, u64)>,
}

impl Mask {
    fn from_indices(idx: impl IntoIterator<Item = usize>) -> Self {
        let mut words: Vec<(usize, u64)> = Vec::new();
        for i in idx {
            let (w, b) = (i / 64, 1u64 << (i % 64));
            match words.iter_mut().find(|(x, _)| *x == w) {
                Some((_, m)) => *m |= b,
                None => words.push((w, b)),
            }
        }
        words.sort_unstable();
        Mask { words }
    }

    fn all_set(&self, s: &[u64]) -> bool {
        self.words.iter().all(|&(w, m)| s[w] & m == m)
    }

    fn none_set(&self, s: &[u64]) -> bool {
        self.words.iter().all(|&(w, m)| s[w] & m == 0)
    }

    fn set(&self, s: &mut [u64]) {
        for &(w, m) in &self.words {
            s[w] |= m;
        }
    }

    fn clear(&self, s: &mut [u64]) {
        for &(w, m) in &self.words {
            s[w] &= !m;
        }
    }
}

#[derive(Debug, Clone)]
struct Effect {
    cond_pos: Mask,
    cond_neg: Mask,
    add: Mask,
    del: Mask,
}

#[derive(Debug, Clone)]
struct Action {
    pre_pos: Mask,
    pre_neg: Mask,
    clauses: Vec<Vec<(usize, bool)>>,
    effects: Vec<Effect>,
}

#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    words: usize,
    actions: Vec<Action>,
    goal_pos: Mask,
    goal_neg: Mask,
}

fn test(s: &[u64], i: usize) -> bool {
    s[i / 64] & (1u64 << (i % 64)) != 0
}

impl Compiled {
    pub(crate) fn new(task: &GroundTask) -> Self {
        let words = task.fluents.len().div_ceil(64).max(1);
        let idx = |a: &crate::pddl::GroundAtom| task.fluent_index(a).expect("grounded atoms are fluents");
        let mask = |atoms: &[crate::pddl::GroundAtom]| Mask::from_indices(atoms.iter().map(idx));
        let actions = task
            .actions
            .iter()
            .map(|a| Action {
                pre_pos: mask(&a.precondition.pos),
                pre_neg: mask(&a.precondition.neg),
                clauses: a
                    .precondition
                    .clauses
                    .iter()
                    .map(|c| c.iter().map(|l| (idx(&l.atom), l.positive)).collect())
                    .collect(),
                effects: a
                    .effects
                    .iter()
                    .map(|e| Effect {
                        cond_pos: mask(&e.cond_pos),
                        cond_neg: mask(&e.cond_neg),
                        add: mask(&e.add),
                        del: mask(&e.del),
                    })
                    .collect(),
            })
            .collect();
        Compiled { words, actions, goal_pos: mask(&task.goal.pos), goal_neg: mask(&task.goal.neg) }
    }

    /// Atoms outside the fluent universe are dropped.
    pub(crate) fn encode(&self, task: &GroundTask, state: &State) -> Bits {
        let mut bits = vec![0u64; self.words];
        for a in state.iter() {
            if let Some(i) = task.fluent_index(a) {
                bits[i / 64] |= 1u64 << (i % 64);
            }
        }
        bits.into_boxed_slice()
    }

    pub(crate) fn is_goal(&self, s: &[u64]) -> bool {
        self.goal_pos.all_set(s) && self.goal_neg.none_set(s)
    }

    pub(crate) fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub(crate) fn successor(&self, s: &[u64], action: usize) -> Option<Bits> {
        let a = &self.actions[action];
        if !(a.pre_pos.all_set(s) && a.pre_neg.none_set(s)) {
            return None;
        }
        if !a.clauses.iter().all(|c| c.iter().any(|&(i, pos)| test(s, i) == pos)) {
            return None;
        }
        let mut next: Bits = s.into();
        let fired: Vec<&Effect> =
            a.effects.iter().filter(|e| e.cond_pos.all_set(s) && e.cond_neg.none_set(s)).collect();
        for e in &fired {
            e.del.clear(&mut next);
        }
        for e in &fired {
            e.add.set(&mut next);
        }
        Some(next)
    }
}
