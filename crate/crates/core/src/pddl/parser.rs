use std::collections::{HashMap, HashSet};

use super::ast::*;
use super::error::{PddlError, Pos};
use super::sexp::{read_all, Sexp};
use crate::cost::Cost;
use crate::task::TypeHierarchy;

const SUPPORTED_REQUIREMENTS: &[&str] = &[":strips", ":typing", ":action-costs", ":equality"];

/// Parses a domain file in the STRIPS subset (`:strips`, `:typing`,
/// `:action-costs`, `:equality`).
pub fn parse_domain(text: &str) -> Result<DomainAst, PddlError> {
    let forms = read_all(text)?;
    let body = define_body(&forms, "domain")?;
    let name = define_name(body, "domain")?;

    let mut dom = DomainAst {
        name,
        requirements: Vec::new(),
        types: Vec::new(),
        predicates: Vec::new(),
        declares_total_cost: false,
        schemas: Vec::new(),
    };

    for section in &body[2..] {
        let items = section.expect_list("a domain section")?;
        let head = section.head().ok_or_else(|| PddlError::syntax(section.pos(), "empty domain section"))?;
        match head {
            ":requirements" => dom.requirements.extend(parse_requirements(&items[1..])?),
            ":types" => {
                for t in parse_typed_list(&items[1..], false)? {
                    dom.types.push(TypeDecl { name: t.name, parent: t.ty });
                }
            }
            ":predicates" => {
                for p in &items[1..] {
                    dom.predicates.push(parse_predicate_decl(p)?);
                }
            }
            ":functions" => {
                parse_functions(section, &items[1..])?;
                dom.declares_total_cost = true;
            }
            ":action" => dom.schemas.push(parse_action(section, &items[1..])?),
            ":constants" => return Err(PddlError::unsupported(section.pos(), ":constants")),
            ":derived" => return Err(PddlError::unsupported(section.pos(), "derived predicates")),
            ":durative-action" => return Err(PddlError::unsupported(section.pos(), "durative actions")),
            other => return Err(PddlError::syntax(section.pos(), format!("unknown domain section '{other}'"))),
        }
    }

    check_domain(&dom)?;
    Ok(dom)
}

/// Parses a problem file and checks every init and goal atom against `dom`.
pub fn parse_problem(text: &str, dom: &DomainAst) -> Result<ProblemAst, PddlError> {
    let forms = read_all(text)?;
    let body = define_body(&forms, "problem")?;
    let name = define_name(body, "problem")?;

    let mut prob = ProblemAst {
        name,
        domain_name: String::new(),
        objects: Vec::new(),
        init: Vec::new(),
        initial_total_cost: None,
        goal: Vec::new(),
        minimize_total_cost: false,
    };
    let mut saw_domain = false;
    let mut saw_goal = false;

    for section in &body[2..] {
        let items = section.expect_list("a problem section")?;
        let head = section.head().ok_or_else(|| PddlError::syntax(section.pos(), "empty problem section"))?;
        match head {
            ":domain" => {
                let [_, n] = items else {
                    return Err(PddlError::syntax(section.pos(), "expected (:domain NAME)"));
                };
                prob.domain_name = n.expect_atom("domain name")?.to_string();
                saw_domain = true;
            }
            ":requirements" => {
                parse_requirements(&items[1..])?;
            }
            ":objects" => prob.objects.extend(parse_typed_list(&items[1..], false)?),
            ":init" => {
                for lit in &items[1..] {
                    parse_init_literal(lit, &mut prob)?;
                }
            }
            ":goal" => {
                let [_, g] = items else {
                    return Err(PddlError::syntax(section.pos(), "expected (:goal FORMULA)"));
                };
                parse_goal(g, &mut prob.goal)?;
                saw_goal = true;
            }
            ":metric" => {
                let ok = items.len() == 3
                    && items[1].as_atom() == Some("minimize")
                    && items[2].as_list().is_some_and(|l| l.len() == 1 && l[0].as_atom() == Some("total-cost"));
                if !ok {
                    return Err(PddlError::unsupported(section.pos(), "metrics other than (minimize (total-cost))"));
                }
                prob.minimize_total_cost = true;
            }
            other => return Err(PddlError::syntax(section.pos(), format!("unknown problem section '{other}'"))),
        }
    }
    if !saw_domain {
        return Err(PddlError::syntax(forms[0].pos(), "missing (:domain NAME)"));
    }
    if !saw_goal {
        return Err(PddlError::syntax(forms[0].pos(), "missing (:goal ...)"));
    }

    check_problem(&prob, dom)?;
    Ok(prob)
}

fn define_body<'a>(forms: &'a [Sexp], kind: &str) -> Result<&'a [Sexp], PddlError> {
    let first = forms.first().ok_or_else(|| {
        PddlError::syntax(Pos { line: 1, column: 1 }, format!("empty input, expected (define ({kind} ...))"))
    })?;
    if let Some(extra) = forms.get(1) {
        return Err(PddlError::syntax(extra.pos(), "unexpected form after (define ...)"));
    }
    let items = first.expect_list("(define ...)")?;
    if first.head() != Some("define") {
        return Err(PddlError::syntax(first.pos(), "expected (define ...)"));
    }
    if items.len() < 2 {
        return Err(PddlError::syntax(first.pos(), format!("expected ({kind} NAME) after define")));
    }
    Ok(items)
}

fn define_name(body: &[Sexp], kind: &str) -> Result<String, PddlError> {
    let header = &body[1];
    match header.as_list() {
        Some([k, n]) if k.as_atom() == Some(kind) => Ok(n.expect_atom("a name")?.to_string()),
        _ => Err(PddlError::syntax(header.pos(), format!("expected ({kind} NAME)"))),
    }
}

fn parse_requirements(items: &[Sexp]) -> Result<Vec<String>, PddlError> {
    items
        .iter()
        .map(|r| {
            let tag = r.expect_atom("a requirement keyword")?;
            if SUPPORTED_REQUIREMENTS.contains(&tag) {
                Ok(tag.to_string())
            } else {
                Err(PddlError::unsupported(r.pos(), tag))
            }
        })
        .collect()
}

/// `a b - t c` style list. Names without a type get `object`.
fn parse_typed_list(items: &[Sexp], variables: bool) -> Result<Vec<TypedName>, PddlError> {
    let mut out = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let it = &items[i];
        let text = it.expect_atom(if variables { "a variable" } else { "a name" })?;
        if text == "-" {
            let ty = items.get(i + 1).ok_or_else(|| PddlError::syntax(it.pos(), "expected a type after '-'"))?;
            if ty.head() == Some("either") {
                return Err(PddlError::unsupported(ty.pos(), "either types"));
            }
            let ty = ty.expect_atom("a type name")?;
            if pending.is_empty() {
                return Err(PddlError::syntax(it.pos(), "type annotation without names"));
            }
            out.extend(pending.drain(..).map(|n| TypedName::new(n, ty)));
            i += 2;
            continue;
        }
        if variables && !text.starts_with('?') {
            return Err(PddlError::unsupported(it.pos(), format!("constant '{text}' in a parameter list")));
        }
        if !variables && text.starts_with('?') {
            return Err(PddlError::syntax(it.pos(), format!("unexpected variable '{text}'")));
        }
        pending.push(text.to_string());
        i += 1;
    }
    out.extend(pending.into_iter().map(|n| TypedName::new(n, ROOT_TYPE)));
    Ok(out)
}

fn parse_predicate_decl(p: &Sexp) -> Result<PredicateDecl, PddlError> {
    let items = p.expect_list("a predicate declaration")?;
    let name = items
        .first()
        .ok_or_else(|| PddlError::syntax(p.pos(), "empty predicate declaration"))?
        .expect_atom("a predicate name")?;
    Ok(PredicateDecl { name: name.to_string(), parameters: parse_typed_list(&items[1..], true)? })
}

fn parse_functions(section: &Sexp, items: &[Sexp]) -> Result<(), PddlError> {
    let ok = match items {
        [f] => is_total_cost(f),
        [f, dash, num] => is_total_cost(f) && dash.as_atom() == Some("-") && num.as_atom() == Some("number"),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(PddlError::unsupported(section.pos(), "numeric fluents other than total-cost"))
    }
}

fn is_total_cost(s: &Sexp) -> bool {
    matches!(s.as_list(), Some([n]) if n.as_atom() == Some("total-cost"))
}

fn parse_action(section: &Sexp, items: &[Sexp]) -> Result<SchemaAst, PddlError> {
    let name = items
        .first()
        .ok_or_else(|| PddlError::syntax(section.pos(), "action without a name"))?
        .expect_atom("an action name")?
        .to_string();
    let mut schema = SchemaAst {
        name,
        parameters: Vec::new(),
        precondition: Vec::new(),
        equalities: Vec::new(),
        add_effects: Vec::new(),
        del_effects: Vec::new(),
        cost: None,
    };
    let mut i = 1;
    while i < items.len() {
        let key = items[i].expect_atom("an action keyword")?;
        let val =
            items.get(i + 1).ok_or_else(|| PddlError::syntax(items[i].pos(), format!("missing value for '{key}'")))?;
        match key {
            ":parameters" => schema.parameters = parse_typed_list(val.expect_list("a parameter list")?, true)?,
            ":precondition" => parse_condition(val, &mut schema)?,
            ":effect" => parse_effect(val, &mut schema)?,
            other => return Err(PddlError::syntax(items[i].pos(), format!("unknown action keyword '{other}'"))),
        }
        i += 2;
    }
    dedup(&mut schema.precondition);
    dedup(&mut schema.add_effects);
    dedup(&mut schema.del_effects);
    dedup(&mut schema.equalities);
    let adds: HashSet<AtomAst> = schema.add_effects.iter().cloned().collect();
    schema.del_effects.retain(|a| !adds.contains(a));
    Ok(schema)
}

fn dedup<T: Clone + Eq + std::hash::Hash>(v: &mut Vec<T>) {
    let mut seen = HashSet::new();
    v.retain(|x| seen.insert(x.clone()));
}

fn parse_atom(s: &Sexp, in_schema: bool) -> Result<AtomAst, PddlError> {
    let items = s.expect_list("an atom")?;
    let pred =
        items.first().ok_or_else(|| PddlError::syntax(s.pos(), "empty atom"))?.expect_atom("a predicate name")?;
    let mut args = Vec::with_capacity(items.len() - 1);
    for a in &items[1..] {
        let t = a.expect_atom("an atom argument")?;
        if in_schema && !t.starts_with('?') {
            return Err(PddlError::unsupported(a.pos(), format!("constant '{t}' in an action schema")));
        }
        if !in_schema && t.starts_with('?') {
            return Err(PddlError::syntax(a.pos(), format!("variable '{t}' in a ground atom")));
        }
        args.push(t.to_string());
    }
    Ok(AtomAst { predicate: pred.to_string(), args })
}

fn parse_equality(s: &Sexp, negated: bool) -> Result<Equality, PddlError> {
    let items = s.expect_list("an equality")?;
    let [_, l, r] = items else {
        return Err(PddlError::syntax(s.pos(), "expected (= ?x ?y)"));
    };
    let (l, r) = (l.expect_atom("a variable")?, r.expect_atom("a variable")?);
    for (t, p) in [(l, items[1].pos()), (r, items[2].pos())] {
        if !t.starts_with('?') {
            return Err(PddlError::unsupported(p, format!("constant '{t}' in an action schema")));
        }
    }
    Ok(Equality { left: l.to_string(), right: r.to_string(), negated })
}

fn parse_condition(s: &Sexp, schema: &mut SchemaAst) -> Result<(), PddlError> {
    let items = s.expect_list("a precondition")?;
    match s.head() {
        None if items.is_empty() => Ok(()),
        Some("and") => items[1..].iter().try_for_each(|c| parse_condition(c, schema)),
        Some("not") => {
            let [_, inner] = items else {
                return Err(PddlError::syntax(s.pos(), "expected (not FORMULA)"));
            };
            if inner.head() == Some("=") {
                schema.equalities.push(parse_equality(inner, true)?);
                Ok(())
            } else {
                Err(PddlError::unsupported(s.pos(), "negative preconditions"))
            }
        }
        Some("=") => {
            schema.equalities.push(parse_equality(s, false)?);
            Ok(())
        }
        Some("or") => Err(PddlError::unsupported(s.pos(), "disjunctive preconditions")),
        Some("exists") => Err(PddlError::unsupported(s.pos(), "existential preconditions")),
        Some("forall") => Err(PddlError::unsupported(s.pos(), "universal preconditions")),
        Some("imply") => Err(PddlError::unsupported(s.pos(), "implications")),
        Some(_) => {
            schema.precondition.push(parse_atom(s, true)?);
            Ok(())
        }
        None => Err(PddlError::syntax(s.pos(), "expected a formula")),
    }
}

fn parse_effect(s: &Sexp, schema: &mut SchemaAst) -> Result<(), PddlError> {
    let items = s.expect_list("an effect")?;
    match s.head() {
        None if items.is_empty() => Ok(()),
        Some("and") => items[1..].iter().try_for_each(|e| parse_effect(e, schema)),
        Some("not") => {
            let [_, inner] = items else {
                return Err(PddlError::syntax(s.pos(), "expected (not ATOM)"));
            };
            if matches!(inner.head(), Some("=" | "and" | "not" | "forall" | "when")) {
                return Err(PddlError::syntax(inner.pos(), "expected an atom inside (not ...)"));
            }
            schema.del_effects.push(parse_atom(inner, true)?);
            Ok(())
        }
        Some("increase") => {
            let [_, target, value] = items else {
                return Err(PddlError::syntax(s.pos(), "expected (increase (total-cost) N)"));
            };
            if !is_total_cost(target) {
                return Err(PddlError::unsupported(target.pos(), "numeric fluents other than total-cost"));
            }
            let v = value
                .as_atom()
                .ok_or_else(|| PddlError::unsupported(value.pos(), "numeric fluents as action costs"))?;
            let cost: Cost = v.parse().map_err(|_| PddlError::syntax(value.pos(), format!("invalid cost '{v}'")))?;
            if schema.cost.is_some() {
                return Err(PddlError::syntax(s.pos(), "more than one total-cost increase"));
            }
            schema.cost = Some(cost);
            Ok(())
        }
        Some("decrease" | "assign" | "scale-up" | "scale-down") => {
            Err(PddlError::unsupported(s.pos(), "numeric fluents other than total-cost"))
        }
        Some("forall") => Err(PddlError::unsupported(s.pos(), "universal effects")),
        Some("when") => Err(PddlError::unsupported(s.pos(), "conditional effects")),
        Some(_) => {
            schema.add_effects.push(parse_atom(s, true)?);
            Ok(())
        }
        None => Err(PddlError::syntax(s.pos(), "expected an effect")),
    }
}

fn parse_init_literal(lit: &Sexp, prob: &mut ProblemAst) -> Result<(), PddlError> {
    match lit.head() {
        Some("=") => {
            let items = lit.expect_list("an initial value")?;
            match items {
                [_, f, v] if is_total_cost(f) => {
                    let t = v.expect_atom("a number")?;
                    let c: Cost = t.parse().map_err(|_| PddlError::syntax(v.pos(), format!("invalid cost '{t}'")))?;
                    prob.initial_total_cost = Some(c);
                    Ok(())
                }
                _ => Err(PddlError::unsupported(lit.pos(), "numeric fluents other than total-cost")),
            }
        }
        Some("not") => Err(PddlError::unsupported(lit.pos(), "negative literals in the initial state")),
        _ => {
            prob.init.push(parse_atom(lit, false)?);
            Ok(())
        }
    }
}

fn parse_goal(g: &Sexp, out: &mut Vec<AtomAst>) -> Result<(), PddlError> {
    let items = g.expect_list("a goal formula")?;
    match g.head() {
        None if items.is_empty() => Ok(()),
        Some("and") => items[1..].iter().try_for_each(|c| parse_goal(c, out)),
        Some("not") => Err(PddlError::unsupported(g.pos(), "negative goals")),
        Some("or") => Err(PddlError::unsupported(g.pos(), "disjunctive goals")),
        Some("exists" | "forall" | "imply") => Err(PddlError::unsupported(g.pos(), "quantified goals")),
        Some("=") => Err(PddlError::unsupported(g.pos(), "equality goals")),
        _ => {
            out.push(parse_atom(g, false)?);
            Ok(())
        }
    }
}

fn check_domain(dom: &DomainAst) -> Result<(), PddlError> {
    let hierarchy = TypeHierarchy::from_decls(&dom.types)?;
    let check_type = |ty: &str| {
        if hierarchy.id(ty).is_none() {
            Err(PddlError::UnknownType { ty: ty.to_string() })
        } else {
            Ok(())
        }
    };

    let mut arity: HashMap<&str, usize> = HashMap::new();
    for p in &dom.predicates {
        if arity.insert(&p.name, p.parameters.len()).is_some() {
            return Err(PddlError::Duplicate { what: "predicate", name: p.name.clone() });
        }
        for param in &p.parameters {
            check_type(&param.ty)?;
        }
    }

    let mut names = HashSet::new();
    for s in &dom.schemas {
        if !names.insert(&s.name) {
            return Err(PddlError::Duplicate { what: "action", name: s.name.clone() });
        }
        let mut vars = HashSet::new();
        for p in &s.parameters {
            check_type(&p.ty)?;
            if !vars.insert(p.name.as_str()) {
                return Err(PddlError::Duplicate { what: "parameter", name: p.name.clone() });
            }
        }
        let check_var = |v: &str| {
            if vars.contains(v) {
                Ok(())
            } else {
                Err(PddlError::UndeclaredVariable { schema: s.name.clone(), variable: v.to_string() })
            }
        };
        for atom in s.precondition.iter().chain(&s.add_effects).chain(&s.del_effects) {
            let expected = *arity.get(atom.predicate.as_str()).ok_or_else(|| {
                PddlError::UndeclaredPredicateInSchema { schema: s.name.clone(), predicate: atom.predicate.clone() }
            })?;
            if expected != atom.args.len() {
                return Err(PddlError::ArityMismatch {
                    predicate: atom.predicate.clone(),
                    expected,
                    got: atom.args.len(),
                });
            }
            atom.args.iter().try_for_each(|v| check_var(v))?;
        }
        for eq in &s.equalities {
            check_var(&eq.left)?;
            check_var(&eq.right)?;
        }
    }
    Ok(())
}

fn check_problem(prob: &ProblemAst, dom: &DomainAst) -> Result<(), PddlError> {
    let hierarchy = TypeHierarchy::from_decls(&dom.types)?;
    let mut objects: HashMap<&str, &str> = HashMap::new();
    for o in &prob.objects {
        if hierarchy.id(&o.ty).is_none() {
            return Err(PddlError::UnknownObjectType { object: o.name.clone(), ty: o.ty.clone() });
        }
        if objects.insert(&o.name, &o.ty).is_some() {
            return Err(PddlError::Duplicate { what: "object", name: o.name.clone() });
        }
    }
    let preds: HashMap<&str, &PredicateDecl> = dom.predicates.iter().map(|p| (p.name.as_str(), p)).collect();
    for atom in prob.init.iter().chain(&prob.goal) {
        let decl = preds
            .get(atom.predicate.as_str())
            .ok_or_else(|| PddlError::UnknownPredicate { name: atom.predicate.clone() })?;
        if decl.parameters.len() != atom.args.len() {
            return Err(PddlError::ArityMismatch {
                predicate: atom.predicate.clone(),
                expected: decl.parameters.len(),
                got: atom.args.len(),
            });
        }
        for (arg, param) in atom.args.iter().zip(&decl.parameters) {
            let ty = objects.get(arg.as_str()).ok_or_else(|| PddlError::UnknownObject { name: arg.clone() })?;
            if !hierarchy.is_subtype_name(ty, &param.ty) {
                return Err(PddlError::TypeMismatch {
                    predicate: atom.predicate.clone(),
                    object: arg.clone(),
                    expected: param.ty.clone(),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL_DOMAIN: &str = "(define (domain d) (:requirements :strips) (:predicates (p ?x)) \
        (:action a :parameters (?x) :precondition (p ?x) :effect (not (p ?x))))";

    #[test]
    fn minimal_domain() {
        let d = parse_domain(MINIMAL_DOMAIN).unwrap();
        assert_eq!(d.name, "d");
        assert_eq!(d.predicates.len(), 1);
        assert_eq!(d.schemas.len(), 1);
        assert_eq!(d.schemas[0].del_effects, vec![AtomAst::new("p", ["?x"])]);
        assert!(d.schemas[0].add_effects.is_empty());
        assert_eq!(d.schemas[0].cost(), Cost::ONE);
    }

    #[test]
    fn minimal_problem() {
        let d = parse_domain(MINIMAL_DOMAIN).unwrap();
        let p = parse_problem("(define (problem q) (:domain d) (:objects a) (:init (p a)) (:goal (and)))", &d).unwrap();
        assert_eq!(p.init.len(), 1);
        assert!(p.goal.is_empty());
    }

    #[test]
    fn unknown_goal_predicate() {
        let d = parse_domain(MINIMAL_DOMAIN).unwrap();
        let e =
            parse_problem("(define (problem q) (:domain d) (:objects a) (:init (p a)) (:goal (q a)))", &d).unwrap_err();
        assert_eq!(e, PddlError::UnknownPredicate { name: "q".into() });
    }

    #[test]
    fn problem_arity_and_type_errors() {
        let d = parse_domain(
            "(define (domain d) (:requirements :typing) (:types a b) (:predicates (p ?x - a)) \
             (:action n :parameters () :precondition (and) :effect (and)))",
        )
        .unwrap();
        let arity =
            parse_problem("(define (problem q) (:domain d) (:objects o - a) (:init (p o o)) (:goal (and)))", &d);
        assert!(matches!(arity, Err(PddlError::ArityMismatch { expected: 1, got: 2, .. })));
        let ty = parse_problem("(define (problem q) (:domain d) (:objects o - b) (:init (p o)) (:goal (and)))", &d);
        assert!(matches!(ty, Err(PddlError::TypeMismatch { .. })));
        let unk = parse_problem("(define (problem q) (:domain d) (:objects o - c) (:init) (:goal (and)))", &d);
        assert!(matches!(unk, Err(PddlError::UnknownObjectType { .. })));
    }

    #[test]
    fn rejects_features_outside_subset() {
        let forall = "(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) \
            :precondition (p ?x) :effect (forall (?y) (not (p ?y)))))";
        assert!(matches!(parse_domain(forall), Err(PddlError::UnsupportedFeature { .. })));
        let neg = "(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) \
            :precondition (not (p ?x)) :effect (p ?x)))";
        assert!(matches!(parse_domain(neg), Err(PddlError::UnsupportedFeature { .. })));
        let req = "(define (domain d) (:requirements :adl) (:predicates (p)))";
        assert!(matches!(parse_domain(req), Err(PddlError::UnsupportedFeature { .. })));
        let or = "(define (domain d) (:predicates (p) (q)) (:action a :parameters () \
            :precondition (or (p) (q)) :effect (p)))";
        assert!(matches!(parse_domain(or), Err(PddlError::UnsupportedFeature { .. })));
        let when = "(define (domain d) (:predicates (p) (q)) (:action a :parameters () \
            :precondition (p) :effect (when (p) (q))))";
        assert!(matches!(parse_domain(when), Err(PddlError::UnsupportedFeature { .. })));
    }

    #[test]
    fn costs_and_equality() {
        let d = parse_domain(
            "(define (domain d) (:requirements :strips :action-costs :equality) (:predicates (p ?x) (q ?x ?y)) \
             (:functions (total-cost) - number) \
             (:action a :parameters (?x ?y) :precondition (and (p ?x) (not (= ?x ?y))) \
              :effect (and (q ?x ?y) (increase (total-cost) 2.5))))",
        )
        .unwrap();
        assert!(d.declares_total_cost);
        let s = &d.schemas[0];
        assert_eq!(s.cost(), Cost::from_ratio(5, 2).unwrap());
        assert_eq!(s.equalities, vec![Equality { left: "?x".into(), right: "?y".into(), negated: true }]);
    }

    #[test]
    fn add_and_delete_of_same_atom_keeps_add() {
        let d = parse_domain(
            "(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) \
             :precondition (p ?x) :effect (and (p ?x) (not (p ?x)))))",
        )
        .unwrap();
        assert!(d.schemas[0].del_effects.is_empty());
        assert_eq!(d.schemas[0].add_effects.len(), 1);
    }

    #[test]
    fn undeclared_variable_and_predicate() {
        let v =
            "(define (domain d) (:predicates (p ?x)) (:action a :parameters () :precondition (p ?x) :effect (and)))";
        assert!(matches!(parse_domain(v), Err(PddlError::UndeclaredVariable { .. })));
        let p =
            "(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) :precondition (r ?x) :effect (and)))";
        assert_eq!(
            parse_domain(p).unwrap_err(),
            PddlError::UndeclaredPredicateInSchema { schema: "a".into(), predicate: "r".into() }
        );
    }

    #[test]
    fn syntax_error_is_positioned() {
        let e = parse_domain("(define (domain d)\n  (:predicates (p ?x)\n").unwrap_err();
        assert!(e.position().is_some());
    }
}
