//! Canonical printing. Two structurally equal ASTs print byte-identically and
//! re-parsing the output yields the same AST.

use std::fmt::Write;

use super::ast::*;

pub fn print_domain(dom: &DomainAst) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (domain {})", dom.name);
    if !dom.requirements.is_empty() {
        let _ = writeln!(out, "  (:requirements {})", dom.requirements.join(" "));
    }
    if !dom.types.is_empty() {
        out.push_str("  (:types");
        for t in &dom.types {
            let _ = write!(out, "\n    {} - {}", t.name, t.parent);
        }
        out.push_str(")\n");
    }
    out.push_str("  (:predicates");
    for p in &dom.predicates {
        let _ = write!(out, "\n    ({}{})", p.name, typed_list(&p.parameters));
    }
    out.push_str(")\n");
    if dom.declares_total_cost {
        out.push_str("  (:functions (total-cost) - number)\n");
    }
    for s in &dom.schemas {
        let _ = writeln!(out, "  (:action {}", s.name);
        let _ = writeln!(out, "    :parameters ({})", typed_list(&s.parameters).trim_start());
        let mut pre: Vec<String> = s.precondition.iter().map(ToString::to_string).collect();
        pre.extend(s.equalities.iter().map(|e| {
            let eq = format!("(= {} {})", e.left, e.right);
            if e.negated {
                format!("(not {eq})")
            } else {
                eq
            }
        }));
        let _ = writeln!(out, "    :precondition (and{})", spaced(&pre));
        let mut eff: Vec<String> = s.add_effects.iter().map(ToString::to_string).collect();
        eff.extend(s.del_effects.iter().map(|a| format!("(not {a})")));
        if let Some(c) = s.cost {
            eff.push(format!("(increase (total-cost) {c})"));
        }
        let _ = writeln!(out, "    :effect (and{}))", spaced(&eff));
    }
    out.push_str(")\n");
    out
}

pub fn print_problem(prob: &ProblemAst) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (problem {})", prob.name);
    let _ = writeln!(out, "  (:domain {})", prob.domain_name);
    out.push_str("  (:objects");
    for o in &prob.objects {
        let _ = write!(out, "\n    {}{}", o.name, type_suffix(&o.ty));
    }
    out.push_str(")\n  (:init");
    for a in &prob.init {
        let _ = write!(out, "\n    {a}");
    }
    if let Some(c) = prob.initial_total_cost {
        let _ = write!(out, "\n    (= (total-cost) {c})");
    }
    out.push_str(")\n  (:goal (and");
    for a in &prob.goal {
        let _ = write!(out, "\n    {a}");
    }
    out.push_str("))\n");
    if prob.minimize_total_cost {
        out.push_str("  (:metric minimize (total-cost))\n");
    }
    out.push_str(")\n");
    out
}

fn type_suffix(ty: &str) -> String {
    if ty == ROOT_TYPE {
        String::new()
    } else {
        format!(" - {ty}")
    }
}

fn typed_list(items: &[TypedName]) -> String {
    items.iter().map(|t| format!(" {}{}", t.name, type_suffix(&t.ty))).collect()
}

fn spaced(items: &[String]) -> String {
    items.iter().map(|s| format!(" {s}")).collect()
}
