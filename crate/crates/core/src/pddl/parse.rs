//! Domain and problem parsing for the supported PDDL fragment
//! (`:strips :typing :negative-preconditions :conditional-effects :equality`).

use std::collections::{BTreeSet, HashSet};

use super::ast::*;
use super::error::PddlError;
use super::ground::GroundAtom;
use super::name::Name;
use super::sexpr::{read_all, Pos, Sexpr};

pub fn parse_domain(text: &str) -> Result<Domain, PddlError> {
    let body = define_body(text, "domain")?;
    let name = header_name(&body[0], "domain")?;

    let mut requirements = BTreeSet::new();
    let mut types = TypeHierarchy::default();
    let mut predicates: Vec<PredicateSchema> = Vec::new();
    let mut action_exprs = Vec::new();
    let mut seen = HashSet::new();

    for section in &body[1..] {
        let items = expect_list(section, "a domain section")?;
        let key = section_keyword(section, items)?;
        if key != ":action" && !seen.insert(key.clone()) {
            return Err(PddlError::duplicate(section.pos(), "section", &key));
        }
        match key.as_str() {
            ":requirements" => {
                for r in &items[1..] {
                    let kw = atom(r, "a requirement keyword")?;
                    let req = Requirement::from_keyword(kw).ok_or_else(|| PddlError::UnknownRequirement {
                        line: r.pos().line,
                        column: r.pos().column,
                        requirement: kw.to_string(),
                    })?;
                    requirements.insert(req);
                }
            }
            ":types" => types = parse_types(&items[1..])?,
            ":predicates" => {} // parsed after :types below
            ":action" => action_exprs.push(section),
            other => return Err(PddlError::unsupported(section.pos(), format!("section `{other}`"))),
        }
    }

    if let Some(section) = body[1..].iter().find(|s| section_key_of(s).as_deref() == Some(":predicates")) {
        let items = section.as_list().expect("checked above");
        for decl in &items[1..] {
            let parts = expect_list(decl, "a predicate declaration")?;
            let first = parts.first().ok_or_else(|| PddlError::syntax(decl.pos(), "a predicate name", "`()`"))?;
            let pname = name_of(first, "a predicate name")?;
            if predicates.iter().any(|p| p.name == pname) {
                return Err(PddlError::duplicate(first.pos(), "predicate", pname.as_str()));
            }
            let params = parse_params(&parts[1..], &types)?;
            predicates.push(PredicateSchema { name: pname, params });
        }
    }

    let mut actions: Vec<ActionSchema> = Vec::new();
    for section in action_exprs {
        let action = parse_action(section, &types, &predicates)?;
        if actions.iter().any(|a| a.name == action.name) {
            return Err(PddlError::duplicate(section.pos(), "action", action.name.as_str()));
        }
        actions.push(action);
    }

    Ok(Domain { name, requirements, types, predicates, actions })
}

pub fn parse_problem(text: &str, domain: &Domain) -> Result<Problem, PddlError> {
    let body = define_body(text, "problem")?;
    let name = header_name(&body[0], "problem")?;

    let mut domain_name = None;
    let mut objects: Vec<(Name, Name)> = Vec::new();
    let mut init_expr = None;
    let mut goal_expr = None;
    let mut seen = HashSet::new();

    for section in &body[1..] {
        let items = expect_list(section, "a problem section")?;
        let key = section_keyword(section, items)?;
        if !seen.insert(key.clone()) {
            return Err(PddlError::duplicate(section.pos(), "section", &key));
        }
        match key.as_str() {
            ":domain" => {
                let arg = items.get(1).ok_or_else(|| PddlError::syntax(section.pos(), "a domain name", "`)`"))?;
                domain_name = Some(name_of(arg, "a domain name")?);
            }
            ":objects" => {
                for (obj, ty, pos) in typed_list(&items[1..], false)? {
                    if !domain.types.contains(&ty) {
                        return Err(PddlError::undeclared(pos, "type", ty.as_str()));
                    }
                    if objects.iter().any(|(o, _)| *o == obj) {
                        return Err(PddlError::duplicate(pos, "object", obj.as_str()));
                    }
                    objects.push((obj, ty));
                }
            }
            ":init" => init_expr = Some(section),
            ":goal" => goal_expr = Some(section),
            other => return Err(PddlError::unsupported(section.pos(), format!("section `{other}`"))),
        }
    }

    let domain_name =
        domain_name.ok_or_else(|| PddlError::syntax(body[0].pos(), "a `(:domain ...)` section", "none"))?;
    if domain_name != domain.name {
        return Err(PddlError::DomainMismatch { expected: domain.name.to_string(), found: domain_name.to_string() });
    }

    let ctx = Ctx { types: &domain.types, predicates: &domain.predicates, objects: &objects };

    let mut init: Vec<GroundAtom> = Vec::new();
    if let Some(section) = init_expr {
        for lit in &section.as_list().expect("list")[1..] {
            let f = ctx.formula(lit, Mode::Goal, &mut Vec::new())?;
            match f {
                Formula::Atom(a) => {
                    let ga = GroundAtom::from_ground(&a).expect("no variables in init");
                    if !init.contains(&ga) {
                        init.push(ga);
                    }
                }
                // Closed world: explicit negative literals carry no information.
                Formula::Not(inner) if matches!(*inner, Formula::Atom(_)) => {}
                _ => return Err(PddlError::unsupported(lit.pos(), "non-literal in `:init`")),
            }
        }
    }

    let goal = match goal_expr {
        Some(section) => {
            let items = section.as_list().expect("list");
            if items.len() != 2 {
                return Err(PddlError::syntax(
                    section.pos(),
                    "exactly one goal formula",
                    &format!("{} items", items.len() - 1),
                ));
            }
            ctx.formula(&items[1], Mode::Goal, &mut Vec::new())?
        }
        None => Formula::And(Vec::new()),
    };

    Ok(Problem { name, domain: domain_name, objects, init, goal })
}

fn define_body(text: &str, kind: &str) -> Result<Vec<Sexpr>, PddlError> {
    let mut exprs = read_all(text)?;
    if exprs.len() != 1 {
        let pos = exprs.get(1).map(Sexpr::pos).unwrap_or(Pos { line: 1, column: 1 });
        return Err(PddlError::syntax(
            pos,
            "a single `(define ...)` form",
            &format!("{} top-level forms", exprs.len()),
        ));
    }
    let top = exprs.pop().expect("one expr");
    let pos = top.pos();
    let Sexpr::List(mut items, _) = top else {
        return Err(PddlError::syntax(pos, "`(define ...)`", &top.describe()));
    };
    match items.first().and_then(Sexpr::as_atom) {
        Some(d) if d.eq_ignore_ascii_case("define") => {}
        _ => return Err(PddlError::syntax(pos, "`define`", "something else")),
    }
    items.remove(0);
    match items.first() {
        Some(h)
            if h.as_list()
                .and_then(|l| l.first())
                .and_then(Sexpr::as_atom)
                .is_some_and(|k| k.eq_ignore_ascii_case(kind)) => {}
        Some(h) => return Err(PddlError::syntax(h.pos(), &format!("`({kind} <name>)`"), &h.describe())),
        None => return Err(PddlError::syntax(pos, &format!("`({kind} <name>)`"), "`)`")),
    }
    Ok(items)
}

fn header_name(header: &Sexpr, kind: &str) -> Result<Name, PddlError> {
    let items = header.as_list().expect("checked by define_body");
    if items.len() != 2 {
        return Err(PddlError::syntax(header.pos(), &format!("`({kind} <name>)`"), &header.describe()));
    }
    name_of(&items[1], &format!("a {kind} name"))
}

fn section_key_of(section: &Sexpr) -> Option<String> {
    section.as_list()?.first()?.as_atom().map(|s| s.to_ascii_lowercase())
}

fn section_keyword(section: &Sexpr, items: &[Sexpr]) -> Result<String, PddlError> {
    match items.first().and_then(Sexpr::as_atom) {
        Some(k) if k.starts_with(':') => Ok(k.to_ascii_lowercase()),
        Some(k) => Err(PddlError::syntax(section.pos(), "a section keyword", &format!("`{k}`"))),
        None => Err(PddlError::syntax(section.pos(), "a section keyword", &section.describe())),
    }
}

fn expect_list<'a>(e: &'a Sexpr, what: &str) -> Result<&'a [Sexpr], PddlError> {
    e.as_list().ok_or_else(|| PddlError::syntax(e.pos(), what, &e.describe()))
}

fn atom<'a>(e: &'a Sexpr, what: &str) -> Result<&'a str, PddlError> {
    e.as_atom().ok_or_else(|| PddlError::syntax(e.pos(), what, &e.describe()))
}

fn name_of(e: &Sexpr, what: &str) -> Result<Name, PddlError> {
    let raw = atom(e, what)?;
    Name::new(raw).map_err(|_| PddlError::syntax(e.pos(), what, &format!("`{raw}`")))
}

fn var_of(e: &Sexpr) -> Result<Name, PddlError> {
    let raw = atom(e, "a variable")?;
    match raw.strip_prefix('?').map(Name::new) {
        Some(Ok(n)) => Ok(n),
        _ => Err(PddlError::syntax(e.pos(), "a variable", &format!("`{raw}`"))),
    }
}

/// `a b - t c - u d` → [(a,t),(b,t),(c,u),(d,object)].
fn typed_list(items: &[Sexpr], vars: bool) -> Result<Vec<(Name, Name, Pos)>, PddlError> {
    let mut out = Vec::new();
    let mut pending: Vec<(Name, Pos)> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let e = &items[i];
        if e.as_atom() == Some("-") {
            let ty_expr = items.get(i + 1).ok_or_else(|| PddlError::syntax(e.pos(), "a type name after `-`", "`)`"))?;
            if ty_expr.as_list().is_some() {
                return Err(PddlError::unsupported(ty_expr.pos(), "`either` types"));
            }
            let ty = name_of(ty_expr, "a type name")?;
            if pending.is_empty() {
                return Err(PddlError::syntax(e.pos(), "a name before `-`", "`-`"));
            }
            for (n, p) in pending.drain(..) {
                out.push((n, ty.clone(), p));
            }
            i += 2;
            continue;
        }
        let n = if vars { var_of(e)? } else { name_of(e, "a name")? };
        pending.push((n, e.pos()));
        i += 1;
    }
    for (n, p) in pending {
        out.push((n, Name::object(), p));
    }
    Ok(out)
}

fn parse_types(items: &[Sexpr]) -> Result<TypeHierarchy, PddlError> {
    let decls = typed_list(items, false)?;
    let mut h = TypeHierarchy::default();
    for (ty, parent, pos) in &decls {
        if !h.declare(ty.clone(), parent.clone()) {
            return Err(PddlError::duplicate(*pos, "type", ty.as_str()));
        }
    }
    for (_, parent, pos) in &decls {
        if !h.contains(parent) {
            return Err(PddlError::undeclared(*pos, "type", parent.as_str()));
        }
    }
    if let Some(bad) = h.find_unrooted() {
        let pos = decls.iter().find(|(t, _, _)| t == bad).map(|d| d.2).unwrap_or(Pos { line: 1, column: 1 });
        return Err(PddlError::unsupported(pos, format!("cyclic type `{bad}`")));
    }
    Ok(h)
}

fn parse_params(items: &[Sexpr], types: &TypeHierarchy) -> Result<Vec<TypedVar>, PddlError> {
    let mut params: Vec<TypedVar> = Vec::new();
    for (name, ty, pos) in typed_list(items, true)? {
        if !types.contains(&ty) {
            return Err(PddlError::undeclared(pos, "type", ty.as_str()));
        }
        if params.iter().any(|p| p.name == name) {
            return Err(PddlError::duplicate(pos, "parameter", name.as_str()));
        }
        params.push(TypedVar { name, ty });
    }
    Ok(params)
}

fn parse_action(
    section: &Sexpr,
    types: &TypeHierarchy,
    predicates: &[PredicateSchema],
) -> Result<ActionSchema, PddlError> {
    let items = section.as_list().expect("list");
    let name_expr = items.get(1).ok_or_else(|| PddlError::syntax(section.pos(), "an action name", "`)`"))?;
    let name = name_of(name_expr, "an action name")?;
    let mut params = Vec::new();
    let mut precondition = Formula::And(Vec::new());
    let mut effect = Formula::And(Vec::new());
    let ctx = Ctx { types, predicates, objects: &[] };

    let mut i = 2;
    let mut seen = HashSet::new();
    while i < items.len() {
        let key = atom(&items[i], "an action keyword")?.to_ascii_lowercase();
        let value = items
            .get(i + 1)
            .ok_or_else(|| PddlError::syntax(items[i].pos(), &format!("a value for `{key}`"), "`)`"))?;
        if !seen.insert(key.clone()) {
            return Err(PddlError::duplicate(items[i].pos(), "action keyword", &key));
        }
        match key.as_str() {
            ":parameters" => params = parse_params(expect_list(value, "a parameter list")?, types)?,
            ":precondition" => {
                let mut scope = params.clone();
                precondition = ctx.formula(value, Mode::Condition, &mut scope)?;
            }
            ":effect" => {
                let mut scope = params.clone();
                effect = ctx.formula(value, Mode::Effect, &mut scope)?;
            }
            other => return Err(PddlError::unsupported(items[i].pos(), format!("action keyword `{other}`"))),
        }
        i += 2;
    }
    Ok(ActionSchema { name, params, precondition, effect })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Action precondition.
    Condition,
    /// Problem goal or init literal; constants allowed, no `when`.
    Goal,
    Effect,
    /// Condition of a `when`: conjunction of literals only.
    WhenCondition,
}

struct Ctx<'a> {
    types: &'a TypeHierarchy,
    predicates: &'a [PredicateSchema],
    objects: &'a [(Name, Name)],
}

impl Ctx<'_> {
    fn formula(&self, e: &Sexpr, mode: Mode, scope: &mut Vec<TypedVar>) -> Result<Formula, PddlError> {
        let items = expect_list(e, "a formula")?;
        let Some(head_expr) = items.first() else {
            return Ok(Formula::And(Vec::new()));
        };
        let head = atom(head_expr, "a formula head")?.to_ascii_lowercase();
        let args = &items[1..];
        match head.as_str() {
            "and" => Ok(Formula::And(args.iter().map(|a| self.formula(a, mode, scope)).collect::<Result<_, _>>()?)),
            "or" => match mode {
                Mode::Condition | Mode::Goal => {
                    Ok(Formula::Or(args.iter().map(|a| self.formula(a, mode, scope)).collect::<Result<_, _>>()?))
                }
                _ => Err(PddlError::unsupported(e.pos(), "`or`")),
            },
            "not" => {
                let [inner] = args else {
                    return Err(PddlError::syntax(
                        e.pos(),
                        "exactly one argument to `not`",
                        &format!("{}", args.len()),
                    ));
                };
                let f = self.formula(inner, mode, scope)?;
                let literal_only = matches!(mode, Mode::Effect | Mode::WhenCondition);
                if literal_only && !matches!(f, Formula::Atom(_) | Formula::Equal(..)) {
                    return Err(PddlError::unsupported(inner.pos(), "`not` over a non-atom"));
                }
                if mode == Mode::Effect && matches!(f, Formula::Equal(..)) {
                    return Err(PddlError::unsupported(inner.pos(), "equality in an effect"));
                }
                Ok(Formula::negate(f))
            }
            "forall" => {
                if mode == Mode::WhenCondition {
                    return Err(PddlError::unsupported(e.pos(), "`forall` in a `when` condition"));
                }
                let [vars, body] = args else {
                    return Err(PddlError::syntax(e.pos(), "`(forall (vars) body)`", &e.describe()));
                };
                let vars = parse_params(expect_list(vars, "a variable list")?, self.types)?;
                let depth = scope.len();
                scope.extend(vars.iter().cloned());
                let body = self.formula(body, mode, scope);
                scope.truncate(depth);
                Ok(Formula::Forall(vars, Box::new(body?)))
            }
            "when" => {
                if mode != Mode::Effect {
                    return Err(PddlError::unsupported(e.pos(), "`when` outside an action effect"));
                }
                let [cond, eff] = args else {
                    return Err(PddlError::syntax(e.pos(), "`(when condition effect)`", &e.describe()));
                };
                let cond = self.formula(cond, Mode::WhenCondition, scope)?;
                let eff = self.formula(eff, Mode::Effect, scope)?;
                if contains_when(&eff) {
                    return Err(PddlError::unsupported(e.pos(), "nested `when`"));
                }
                Ok(Formula::When(Box::new(cond), Box::new(eff)))
            }
            "=" => {
                if mode == Mode::Effect {
                    return Err(PddlError::unsupported(e.pos(), "equality in an effect"));
                }
                let [a, b] = args else {
                    return Err(PddlError::syntax(e.pos(), "two terms for `=`", &format!("{}", args.len())));
                };
                Ok(Formula::Equal(self.term(a, scope)?.0, self.term(b, scope)?.0))
            }
            "exists" | "imply" => Err(PddlError::unsupported(e.pos(), format!("`{head}`"))),
            _ => self.atom(head_expr, args, scope).map(Formula::Atom),
        }
    }

    fn atom(&self, head: &Sexpr, args: &[Sexpr], scope: &[TypedVar]) -> Result<Atom, PddlError> {
        let pname = name_of(head, "a predicate name")?;
        let schema = self
            .predicates
            .iter()
            .find(|p| p.name == pname)
            .ok_or_else(|| PddlError::undeclared(head.pos(), "predicate", pname.as_str()))?;
        if schema.arity() != args.len() {
            return Err(PddlError::Arity {
                line: head.pos().line,
                column: head.pos().column,
                predicate: pname.to_string(),
                expected: schema.arity(),
                found: args.len(),
            });
        }
        let mut terms = Vec::with_capacity(args.len());
        for (arg, param) in args.iter().zip(&schema.params) {
            let (term, ty) = self.term(arg, scope)?;
            if !self.types.is_subtype(&ty, &param.ty) {
                return Err(PddlError::TypeMismatch {
                    line: arg.pos().line,
                    column: arg.pos().column,
                    term: term.to_string(),
                    expected: param.ty.to_string(),
                    found: ty.to_string(),
                });
            }
            terms.push(term);
        }
        Ok(Atom { predicate: pname, terms })
    }

    fn term(&self, e: &Sexpr, scope: &[TypedVar]) -> Result<(Term, Name), PddlError> {
        let raw = atom(e, "a term")?;
        if raw.starts_with('?') {
            let v = var_of(e)?;
            let bound = scope
                .iter()
                .rev()
                .find(|p| p.name == v)
                .ok_or_else(|| PddlError::undeclared(e.pos(), "variable", raw))?;
            Ok((Term::Var(v), bound.ty.clone()))
        } else {
            let n = name_of(e, "an object name")?;
            let (_, ty) = self
                .objects
                .iter()
                .find(|(o, _)| *o == n)
                .ok_or_else(|| PddlError::undeclared(e.pos(), "object", raw))?;
            Ok((Term::Const(n), ty.clone()))
        }
    }
}

fn contains_when(f: &Formula) -> bool {
    match f {
        Formula::When(..) => true,
        Formula::And(fs) | Formula::Or(fs) => fs.iter().any(contains_when),
        Formula::Not(x) | Formula::Forall(_, x) => contains_when(x),
        Formula::Atom(_) | Formula::Equal(..) => false,
    }
}
