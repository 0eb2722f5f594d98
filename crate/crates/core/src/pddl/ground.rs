//! Ground atoms, states, ground actions and the grounding of a (domain, problem) pair.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ast::{Atom, Domain, Formula, Problem, Term, TypedVar};
use super::error::PddlError;
use super::name::{Name, ObjectName, PredicateName, TypeName};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroundAtom {
    pub predicate: PredicateName,
    pub args: Vec<ObjectName>,
}

impl GroundAtom {
    /// Builds an atom from string literals. Panics on invalid identifiers.
    pub fn new(predicate: &str, args: &[&str]) -> Self {
        GroundAtom { predicate: Name::lit(predicate), args: args.iter().map(|a| Name::lit(a)).collect() }
    }

    pub(crate) fn from_ground(atom: &Atom) -> Option<Self> {
        let args = atom
            .terms
            .iter()
            .map(|t| match t {
                Term::Const(c) => Some(c.clone()),
                Term::Var(_) => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(GroundAtom { predicate: atom.predicate.clone(), args })
    }

    /// True if some object appears twice among the arguments (e.g. `on(y, y)`).
    pub fn is_reflexive(&self) -> bool {
        self.args.iter().enumerate().any(|(i, a)| self.args[..i].contains(a))
    }

    pub fn to_formula(&self) -> Formula {
        Formula::Atom(Atom {
            predicate: self.predicate.clone(),
            terms: self.args.iter().cloned().map(Term::Const).collect(),
        })
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The set of true ground atoms; everything else is false.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct State(BTreeSet<GroundAtom>);

impl State {
    pub fn new() -> Self {
        State(BTreeSet::new())
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.0.contains(atom)
    }

    pub fn insert(&mut self, atom: GroundAtom) -> bool {
        self.0.insert(atom)
    }

    pub fn remove(&mut self, atom: &GroundAtom) -> bool {
        self.0.remove(atom)
    }

    pub fn set(&mut self, atom: &GroundAtom, value: bool) {
        if value {
            self.0.insert(atom.clone());
        } else {
            self.0.remove(atom);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroundAtom> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn atoms(&self) -> &BTreeSet<GroundAtom> {
        &self.0
    }
}

impl FromIterator<GroundAtom> for State {
    fn from_iter<I: IntoIterator<Item = GroundAtom>>(iter: I) -> Self {
        State(iter.into_iter().collect())
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub atom: GroundAtom,
    pub positive: bool,
}

impl Literal {
    pub fn holds(&self, state: &State) -> bool {
        state.contains(&self.atom) == self.positive
    }
}

/// Flattened ground precondition: a conjunction of literals plus
/// disjunctive clauses left over from `or`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precondition {
    pub pos: Vec<GroundAtom>,
    pub neg: Vec<GroundAtom>,
    pub clauses: Vec<Vec<Literal>>,
}

impl Precondition {
    pub fn holds(&self, state: &State) -> bool {
        self.pos.iter().all(|a| state.contains(a))
            && !self.neg.iter().any(|a| state.contains(a))
            && self.clauses.iter().all(|c| c.iter().any(|l| l.holds(state)))
    }

    /// Every atom the precondition mentions, in pos/neg/clause order, deduplicated.
    pub fn atoms(&self) -> Vec<&GroundAtom> {
        let mut out: Vec<&GroundAtom> = Vec::new();
        let all = self.pos.iter().chain(&self.neg).chain(self.clauses.iter().flatten().map(|l| &l.atom));
        for a in all {
            if !out.contains(&a) {
                out.push(a);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionalEffect {
    pub cond_pos: Vec<GroundAtom>,
    pub cond_neg: Vec<GroundAtom>,
    pub add: Vec<GroundAtom>,
    pub del: Vec<GroundAtom>,
}

impl ConditionalEffect {
    pub fn is_unconditional(&self) -> bool {
        self.cond_pos.is_empty() && self.cond_neg.is_empty()
    }

    pub fn fires(&self, state: &State) -> bool {
        self.cond_pos.iter().all(|a| state.contains(a)) && !self.cond_neg.iter().any(|a| state.contains(a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundAction {
    pub name: Name,
    pub args: Vec<ObjectName>,
    pub precondition: Precondition,
    /// The unconditional part (if any) comes first.
    pub effects: Vec<ConditionalEffect>,
}

/// Atoms added and deleted by an action in a particular state.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Delta {
    pub add: BTreeSet<GroundAtom>,
    pub del: BTreeSet<GroundAtom>,
}

impl GroundAction {
    /// `name(a, b)` form used in prompts and logs.
    pub fn signature(&self) -> String {
        let args: Vec<&str> = self.args.iter().map(Name::as_str).collect();
        format!("{}({})", self.name, args.join(", "))
    }

    /// Fired adds and deletes, conditions evaluated in `state`.
    /// An atom both added and deleted ends up only in `add`.
    pub fn delta(&self, state: &State) -> Delta {
        let mut delta = Delta::default();
        for eff in self.effects.iter().filter(|e| e.fires(state)) {
            delta.add.extend(eff.add.iter().cloned());
            delta.del.extend(eff.del.iter().cloned());
        }
        delta.del.retain(|a| !delta.add.contains(a));
        delta
    }

    /// Successor without checking the precondition.
    pub fn successor(&self, state: &State) -> State {
        let delta = self.delta(state);
        let mut next = state.clone();
        for a in &delta.del {
            next.remove(a);
        }
        for a in delta.add {
            next.insert(a);
        }
        next
    }
}

impl fmt::Display for GroundAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.name)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Goal {
    pub pos: Vec<GroundAtom>,
    pub neg: Vec<GroundAtom>,
}

impl Goal {
    pub fn is_satisfied(&self, state: &State) -> bool {
        self.pos.iter().all(|a| state.contains(a)) && !self.neg.iter().any(|a| state.contains(a))
    }

    pub fn to_formula(&self) -> Formula {
        let mut parts: Vec<Formula> = self.pos.iter().map(GroundAtom::to_formula).collect();
        parts.extend(self.neg.iter().map(|a| Formula::negate(a.to_formula())));
        Formula::And(parts)
    }
}

/// A fully grounded planning task.
#[derive(Debug, Clone)]
pub struct GroundTask {
    pub domain: Arc<Domain>,
    pub problem: Arc<Problem>,
    /// Objects sorted by name.
    pub objects: Vec<(ObjectName, TypeName)>,
    /// Every type-correct atom, sorted (predicate, then arguments).
    pub fluents: Vec<GroundAtom>,
    /// Every type-correct action instantiation, sorted (name, then arguments).
    pub actions: Vec<GroundAction>,
    pub init: State,
    pub goal: Goal,
    fluent_index: HashMap<GroundAtom, usize>,
}

impl GroundTask {
    pub fn fluent_index(&self, atom: &GroundAtom) -> Option<usize> {
        self.fluent_index.get(atom).copied()
    }

    pub fn is_fluent(&self, atom: &GroundAtom) -> bool {
        self.fluent_index.contains_key(atom)
    }

    pub fn find_action(&self, name: &str, args: &[&str]) -> Option<&GroundAction> {
        let idx = self
            .actions
            .binary_search_by(|a| {
                a.name.as_str().cmp(name).then_with(|| a.args.iter().map(Name::as_str).cmp(args.iter().copied()))
            })
            .ok()?;
        Some(&self.actions[idx])
    }

    pub fn type_of(&self, object: &str) -> Option<&TypeName> {
        self.objects.iter().find(|(o, _)| o.as_str() == object).map(|(_, t)| t)
    }

    pub fn objects_of_type<'a>(&'a self, ty: &'a TypeName) -> impl Iterator<Item = &'a ObjectName> + 'a {
        self.objects.iter().filter(move |(_, t)| self.domain.types.is_subtype(t, ty)).map(|(o, _)| o)
    }

    pub fn is_goal(&self, state: &State) -> bool {
        self.goal.is_satisfied(state)
    }
}

pub fn ground(domain: &Domain, problem: &Problem) -> Result<GroundTask, PddlError> {
    ground_shared(Arc::new(domain.clone()), Arc::new(problem.clone()))
}

pub fn ground_shared(domain: Arc<Domain>, problem: Arc<Problem>) -> Result<GroundTask, PddlError> {
    let mut objects = problem.objects.clone();
    objects.sort();
    let g = Grounder { domain: &domain, objects: &objects };

    let mut fluents = Vec::new();
    for schema in &domain.predicates {
        for binding in g.bindings(&schema.params) {
            fluents.push(GroundAtom {
                predicate: schema.name.clone(),
                args: binding.into_iter().map(|(_, o)| o).collect(),
            });
        }
    }
    fluents.sort();
    let fluent_index: HashMap<GroundAtom, usize> = fluents.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();

    let mut actions = Vec::new();
    for schema in &domain.actions {
        for binding in g.bindings(&schema.params) {
            let args = binding.iter().map(|(_, o)| o.clone()).collect();
            let precondition = g.precondition(&schema.precondition, &binding)?;
            let effects = g.effects(&schema.effect, &binding)?;
            actions.push(GroundAction { name: schema.name.clone(), args, precondition, effects });
        }
    }
    actions.sort_by(|a, b| a.name.cmp(&b.name).then_with(|| a.args.cmp(&b.args)));

    let init: State = problem.init.iter().cloned().collect();
    for a in init.iter() {
        if !fluent_index.contains_key(a) {
            return Err(PddlError::Contract(format!("init atom {a} is not type-correct")));
        }
    }

    let mut goal = Goal::default();
    g.flatten_goal(&problem.goal, &mut Vec::new(), true, &mut goal)?;
    for a in goal.pos.iter().chain(&goal.neg) {
        if !fluent_index.contains_key(a) {
            return Err(PddlError::Contract(format!("goal atom {a} is not type-correct")));
        }
    }

    Ok(GroundTask { domain, problem, objects, fluents, actions, init, goal, fluent_index })
}

type Binding = Vec<(Name, ObjectName)>;

struct Grounder<'a> {
    domain: &'a Domain,
    objects: &'a [(ObjectName, TypeName)],
}

/// CNF over ground literals. `None` inside a clause list never occurs;
/// an empty clause means "false", an empty list means "true".
type Cnf = Vec<Vec<Literal>>;

impl Grounder<'_> {
    fn candidates(&self, ty: &TypeName) -> Vec<ObjectName> {
        self.objects.iter().filter(|(_, t)| self.domain.types.is_subtype(t, ty)).map(|(o, _)| o.clone()).collect()
    }

    /// All type-correct assignments of `params`, in lexicographic object order.
    fn bindings(&self, params: &[TypedVar]) -> Vec<Binding> {
        let mut out: Vec<Binding> = vec![Vec::new()];
        for p in params {
            let cands = self.candidates(&p.ty);
            let mut next = Vec::with_capacity(out.len() * cands.len());
            for b in &out {
                for c in &cands {
                    let mut nb = b.clone();
                    nb.push((p.name.clone(), c.clone()));
                    next.push(nb);
                }
            }
            out = next;
        }
        out
    }

    fn resolve(&self, term: &Term, binding: &Binding) -> Result<ObjectName, PddlError> {
        match term {
            Term::Const(c) => Ok(c.clone()),
            Term::Var(v) => binding
                .iter()
                .rev()
                .find(|(n, _)| n == v)
                .map(|(_, o)| o.clone())
                .ok_or_else(|| PddlError::Contract(format!("free variable ?{v}"))),
        }
    }

    fn atom(&self, atom: &Atom, binding: &Binding) -> Result<GroundAtom, PddlError> {
        let args = atom.terms.iter().map(|t| self.resolve(t, binding)).collect::<Result<_, _>>()?;
        Ok(GroundAtom { predicate: atom.predicate.clone(), args })
    }

    fn precondition(&self, f: &Formula, binding: &Binding) -> Result<Precondition, PddlError> {
        let cnf = self.cnf(f, binding, true)?;
        let mut pre = Precondition::default();
        for clause in cnf {
            if let [lit] = clause.as_slice() {
                let list = if lit.positive { &mut pre.pos } else { &mut pre.neg };
                if !list.contains(&lit.atom) {
                    list.push(lit.atom.clone());
                }
            } else if !pre.clauses.contains(&clause) {
                pre.clauses.push(clause);
            }
        }
        pre.pos.sort();
        pre.neg.sort();
        Ok(pre)
    }

    /// Converts to CNF under `positive` polarity, expanding quantifiers and
    /// resolving equalities.
    fn cnf(&self, f: &Formula, binding: &Binding, positive: bool) -> Result<Cnf, PddlError> {
        match f {
            Formula::Atom(a) => Ok(vec![vec![Literal { atom: self.atom(a, binding)?, positive }]]),
            Formula::Equal(x, y) => {
                let eq = self.resolve(x, binding)? == self.resolve(y, binding)?;
                Ok(if eq == positive { Vec::new() } else { vec![Vec::new()] })
            }
            Formula::Not(inner) => self.cnf(inner, binding, !positive),
            Formula::And(parts) | Formula::Or(parts) => {
                let conj = matches!(f, Formula::And(_)) == positive;
                let sub = parts.iter().map(|p| self.cnf(p, binding, positive)).collect::<Result<Vec<_>, _>>()?;
                Ok(if conj { sub.into_iter().flatten().collect() } else { disjoin(sub) })
            }
            Formula::Forall(vars, body) => {
                if !positive {
                    return Err(PddlError::Contract("negated forall (existential) is not supported".into()));
                }
                let mut out = Vec::new();
                for extra in self.bindings(vars) {
                    let mut b = binding.clone();
                    b.extend(extra);
                    out.extend(self.cnf(body, &b, true)?);
                }
                Ok(out)
            }
            Formula::When(..) => Err(PddlError::Contract("`when` in a condition".into())),
        }
    }

    fn effects(&self, f: &Formula, binding: &Binding) -> Result<Vec<ConditionalEffect>, PddlError> {
        let mut unconditional = ConditionalEffect::default();
        let mut conditional = Vec::new();
        self.lower_effect(f, binding, &mut unconditional, &mut conditional)?;
        unconditional.del.retain(|a| !unconditional.add.contains(a));
        let mut out = Vec::new();
        if !unconditional.add.is_empty() || !unconditional.del.is_empty() {
            out.push(unconditional);
        }
        out.extend(conditional);
        Ok(out)
    }

    fn lower_effect(
        &self,
        f: &Formula,
        binding: &Binding,
        target: &mut ConditionalEffect,
        conditional: &mut Vec<ConditionalEffect>,
    ) -> Result<(), PddlError> {
        match f {
            Formula::Atom(a) => push_unique(&mut target.add, self.atom(a, binding)?),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Atom(a) => push_unique(&mut target.del, self.atom(a, binding)?),
                _ => return Err(PddlError::Contract("`not` over a non-atom in an effect".into())),
            },
            Formula::And(parts) => {
                for p in parts {
                    self.lower_effect(p, binding, target, conditional)?;
                }
            }
            Formula::Forall(vars, body) => {
                for extra in self.bindings(vars) {
                    let mut b = binding.clone();
                    b.extend(extra);
                    self.lower_effect(body, &b, target, conditional)?;
                }
            }
            Formula::When(cond, body) => {
                let mut eff = ConditionalEffect::default();
                let mut nested = Vec::new();
                let cnf = self.cnf(cond, binding, true)?;
                if cnf.iter().any(Vec::is_empty) {
                    return Ok(()); // statically false condition
                }
                for clause in cnf {
                    let [lit] = clause.as_slice() else {
                        return Err(PddlError::Contract("`when` condition must be a conjunction of literals".into()));
                    };
                    let list = if lit.positive { &mut eff.cond_pos } else { &mut eff.cond_neg };
                    push_unique(list, lit.atom.clone());
                }
                if eff.cond_pos.iter().any(|a| eff.cond_neg.contains(a)) {
                    return Ok(()); // contradictory condition never fires
                }
                self.lower_effect(body, binding, &mut eff, &mut nested)?;
                if !nested.is_empty() {
                    return Err(PddlError::Contract("nested `when`".into()));
                }
                if eff.add.is_empty() && eff.del.is_empty() {
                    return Ok(());
                }
                if eff.is_unconditional() {
                    for a in eff.add {
                        push_unique(&mut target.add, a);
                    }
                    for a in eff.del {
                        push_unique(&mut target.del, a);
                    }
                } else {
                    eff.del.retain(|a| !eff.add.contains(a));
                    conditional.push(eff);
                }
            }
            Formula::Or(_) | Formula::Equal(..) => return Err(PddlError::Contract("unsupported effect".into())),
        }
        Ok(())
    }

    fn flatten_goal(
        &self,
        f: &Formula,
        binding: &mut Binding,
        positive: bool,
        goal: &mut Goal,
    ) -> Result<(), PddlError> {
        match f {
            Formula::Atom(a) => {
                let atom = self.atom(a, binding)?;
                let list = if positive { &mut goal.pos } else { &mut goal.neg };
                push_unique(list, atom);
            }
            Formula::Not(inner) => self.flatten_goal(inner, binding, !positive, goal)?,
            Formula::And(parts) if positive => {
                for p in parts {
                    self.flatten_goal(p, binding, positive, goal)?;
                }
            }
            Formula::Forall(vars, body) if positive => {
                for extra in self.bindings(vars) {
                    let depth = binding.len();
                    binding.extend(extra);
                    self.flatten_goal(body, binding, true, goal)?;
                    binding.truncate(depth);
                }
            }
            Formula::Equal(x, y) => {
                let eq = self.resolve(x, binding)? == self.resolve(y, binding)?;
                if eq != positive {
                    return Err(PddlError::Contract("goal contains a false equality".into()));
                }
            }
            _ => return Err(PddlError::Contract("goal must be a conjunction of literals".into())),
        }
        Ok(())
    }
}

fn push_unique(list: &mut Vec<GroundAtom>, atom: GroundAtom) {
    if !list.contains(&atom) {
        list.push(atom);
    }
}

/// Disjunction of CNFs by distribution.
fn disjoin(parts: Vec<Cnf>) -> Cnf {
    let mut acc: Cnf = vec![Vec::new()]; // "false" as a single empty clause
    for part in parts {
        let mut next = Vec::new();
        for a in &acc {
            for b in &part {
                let mut clause = a.clone();
                for lit in b {
                    if !clause.contains(lit) {
                        clause.push(lit.clone());
                    }
                }
                let tautology =
                    clause.iter().any(|l| clause.iter().any(|m| m.atom == l.atom && m.positive != l.positive));
                if !tautology {
                    next.push(clause);
                }
            }
        }
        acc = next;
    }
    acc
}

/// Closed-world evaluation of a ground formula.
pub fn holds(state: &State, formula: &Formula) -> Result<bool, PddlError> {
    Ok(match formula {
        Formula::Atom(a) => {
            let ga = GroundAtom::from_ground(a).ok_or_else(|| PddlError::Contract("formula is not ground".into()))?;
            state.contains(&ga)
        }
        Formula::Not(inner) => !holds(state, inner)?,
        Formula::And(parts) => {
            let mut all = true;
            for p in parts {
                all &= holds(state, p)?;
            }
            all
        }
        Formula::Or(parts) => {
            let mut any = false;
            for p in parts {
                any |= holds(state, p)?;
            }
            any
        }
        Formula::Equal(Term::Const(a), Term::Const(b)) => a == b,
        Formula::Equal(..) => return Err(PddlError::Contract("formula is not ground".into())),
        Formula::Forall(..) => return Err(PddlError::Contract("`forall` must be expanded by grounding first".into())),
        Formula::When(..) => return Err(PddlError::Contract("`when` cannot be evaluated as a condition".into())),
    })
}

pub fn applicable(state: &State, action: &GroundAction) -> bool {
    action.precondition.holds(state)
}

/// Applies `action`, failing if its precondition does not hold.
pub fn apply(state: &State, action: &GroundAction) -> Result<State, PddlError> {
    if !applicable(state, action) {
        return Err(PddlError::Inapplicable(action.to_string()));
    }
    Ok(action.successor(state))
}
