//! Pretty-printer for the supported fragment. Output re-parses to an equal value.

use std::fmt::Write;

use super::ast::{Domain, Formula, Problem, TypedVar};
use super::ground::State;

pub fn print_domain(d: &Domain) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (domain {})", d.name);
    if !d.requirements.is_empty() {
        let reqs: Vec<&str> = d.requirements.iter().map(|r| r.keyword()).collect();
        let _ = writeln!(out, "  (:requirements {})", reqs.join(" "));
    }
    if !d.types.declared().is_empty() {
        out.push_str("  (:types");
        for ty in d.types.declared() {
            let parent = d.types.parent(ty).expect("declared type has a parent");
            let _ = write!(out, " {ty} - {parent}");
        }
        out.push_str(")\n");
    }
    if !d.predicates.is_empty() {
        out.push_str("  (:predicates\n");
        for p in &d.predicates {
            let _ = writeln!(out, "    ({}{})", p.name, params(&p.params));
        }
        out.push_str("  )\n");
    }
    for a in &d.actions {
        let _ = writeln!(out, "  (:action {}", a.name);
        let _ = writeln!(out, "    :parameters ({})", params(&a.params).trim_start());
        let _ = writeln!(out, "    :precondition {}", formula(&a.precondition));
        let _ = writeln!(out, "    :effect {}", formula(&a.effect));
        out.push_str("  )\n");
    }
    out.push_str(")\n");
    out
}

pub fn print_problem(p: &Problem) -> String {
    print_problem_from(p, p.init.iter().cloned().collect())
}

/// Prints `p` with `init` replaced, e.g. to hand a state estimate to an
/// external planner.
pub fn print_problem_from(p: &Problem, init: State) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (problem {})", p.name);
    let _ = writeln!(out, "  (:domain {})", p.domain);
    if !p.objects.is_empty() {
        out.push_str("  (:objects");
        for (o, t) in &p.objects {
            let _ = write!(out, " {o} - {t}");
        }
        out.push_str(")\n");
    }
    out.push_str("  (:init\n");
    // Keep the problem's own order when printing its own init.
    let ordered: Vec<_> = if init.atoms().len() == p.init.len() && p.init.iter().all(|a| init.contains(a)) {
        p.init.clone()
    } else {
        init.iter().cloned().collect()
    };
    for a in ordered {
        let _ = writeln!(out, "    {a}");
    }
    out.push_str("  )\n");
    let _ = writeln!(out, "  (:goal {})", formula(&p.goal));
    out.push_str(")\n");
    out
}

fn params(ps: &[TypedVar]) -> String {
    ps.iter().map(|p| format!(" ?{} - {}", p.name, p.ty)).collect()
}

pub fn formula(f: &Formula) -> String {
    match f {
        Formula::Atom(a) => {
            let mut s = format!("({}", a.predicate);
            for t in &a.terms {
                let _ = write!(s, " {t}");
            }
            s.push(')');
            s
        }
        Formula::Not(x) => format!("(not {})", formula(x)),
        Formula::And(xs) => nary("and", xs),
        Formula::Or(xs) => nary("or", xs),
        Formula::Forall(vars, body) => format!("(forall ({}) {})", params(vars).trim_start(), formula(body)),
        Formula::When(c, e) => format!("(when {} {})", formula(c), formula(e)),
        Formula::Equal(a, b) => format!("(= {a} {b})"),
    }
}

fn nary(head: &str, xs: &[Formula]) -> String {
    let mut s = format!("({head}");
    for x in xs {
        s.push(' ');
        s.push_str(&formula(x));
    }
    s.push(')');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::{fixtures, parse_domain, parse_problem};

    #[test]
    fn round_trip_fixtures() {
        for (dt, pt) in [
            (fixtures::BLOCKSWORLD_DOMAIN, fixtures::BLOCKSWORLD_PROBLEM),
            (fixtures::HOUSEHOLD_DOMAIN, fixtures::HOUSEHOLD_PROBLEM),
        ] {
            let d = parse_domain(dt).unwrap();
            let printed = print_domain(&d);
            let d2 = parse_domain(&printed).unwrap();
            assert_eq!(d, d2);
            assert_eq!(printed, print_domain(&d2));

            let p = parse_problem(pt, &d).unwrap();
            let p2 = parse_problem(&print_problem(&p), &d2).unwrap();
            assert_eq!(p, p2);
        }
    }
}
