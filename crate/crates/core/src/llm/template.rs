use std::path::Path;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("{mode} template must contain placeholder {{{placeholder}}} exactly once, found {count}")]
    Placeholder { mode: &'static str, placeholder: &'static str, count: usize },
    #[error("cannot read template file: {0}")]
    Io(String),
}

const INITIAL_PLACEHOLDERS: &[&str] = &["domain", "problem"];
const REPAIR_PLACEHOLDERS: &[&str] = &["domain", "problem", "prev_domain", "prev_problem", "error"];

/// Line separating the first-attempt body from the repair body in a
/// template file.
pub const REPAIR_SEPARATOR: &str = "=== repair ===";

const PREAMBLE: &str = "You are a PDDL expert and you will help me out simplifying a planning task according to the goal we have to achieve in the planning task itself. The simplification will revolve around objects removal from the problem.pddl file and actions and predicates from the domain.pddl file. The objects removal can be done analyzing the hierarchy of objects types and then selecting the objects (or types of objects) to be removed because not necessary in the achievement of the goal. The predicates that can be removed are as well the ones that are not necessary to achieve the goal. Be careful about the interplay between actions, predicates, and goal to understand what can be removed and what not.

The goal cannot be modified. So all the objects and predicates present in the goal cannot be removed.";

const EXAMPLE: &str = "Let me further elucidate with an example:
Domain
(define (domain courier)
  (:requirements :strips :typing)
  (:types parcel van drone spot)
  (:predicates (at-van ?v - van ?s - spot) (at-drone ?d - drone ?s - spot)
               (parcel-at ?p - parcel ?s - spot) (loaded ?p - parcel ?v - van)
               (road ?a - spot ?b - spot) (shiny ?v - van))
  (:action drive :parameters (?v - van ?a - spot ?b - spot)
    :precondition (and (at-van ?v ?a) (road ?a ?b))
    :effect (and (at-van ?v ?b) (not (at-van ?v ?a))))
  (:action hover :parameters (?d - drone ?a - spot ?b - spot)
    :precondition (at-drone ?d ?a)
    :effect (and (at-drone ?d ?b) (not (at-drone ?d ?a))))
  (:action load :parameters (?p - parcel ?v - van ?s - spot)
    :precondition (and (parcel-at ?p ?s) (at-van ?v ?s))
    :effect (and (loaded ?p ?v) (not (parcel-at ?p ?s))))
  (:action unload :parameters (?p - parcel ?v - van ?s - spot)
    :precondition (and (loaded ?p ?v) (at-van ?v ?s))
    :effect (and (parcel-at ?p ?s) (not (loaded ?p ?v))))
  (:action polish :parameters (?v - van)
    :precondition (and)
    :effect (shiny ?v)))
Original Problem
(define (problem courier-1)
  (:domain courier)
  (:objects p1 p2 - parcel v1 v2 - van d1 - drone s1 s2 - spot)
  (:init (at-van v1 s1) (at-van v2 s2) (at-drone d1 s1)
         (parcel-at p1 s1) (parcel-at p2 s2) (road s1 s2) (road s2 s1))
  (:goal (and (parcel-at p1 s2))))
New Domain:
(define (domain courier)
  (:requirements :strips :typing)
  (:types parcel van drone spot)
  (:predicates (at-van ?v - van ?s - spot) (parcel-at ?p - parcel ?s - spot)
               (loaded ?p - parcel ?v - van) (road ?a - spot ?b - spot))
  (:action drive :parameters (?v - van ?a - spot ?b - spot)
    :precondition (and (at-van ?v ?a) (road ?a ?b))
    :effect (and (at-van ?v ?b) (not (at-van ?v ?a))))
  (:action load :parameters (?p - parcel ?v - van ?s - spot)
    :precondition (and (parcel-at ?p ?s) (at-van ?v ?s))
    :effect (and (loaded ?p ?v) (not (parcel-at ?p ?s))))
  (:action unload :parameters (?p - parcel ?v - van ?s - spot)
    :precondition (and (loaded ?p ?v) (at-van ?v ?s))
    :effect (and (parcel-at ?p ?s) (not (loaded ?p ?v)))))
Reason:
Drones cannot carry parcels, so hover and at-drone never help to move p1. Polishing a van changes nothing a parcel move needs, so polish and shiny go too.
Simplified Problem:
(define (problem courier-1)
  (:domain courier)
  (:objects p1 - parcel v1 - van s1 s2 - spot)
  (:init (at-van v1 s1) (parcel-at p1 s1) (road s1 s2) (road s2 s1))
  (:goal (and (parcel-at p1 s2))))
Removed:
d1 (drones are useless without hover), p2 (not in the goal), v2 (v1 already stands next to p1).
Kept:
p1, s1 and s2 (they occur in the goal), v1 (the van that brings p1 to s2).";

const INPUT: &str = "This is the domain we are going to operate on:
{domain}
This is the problem:
{problem}";

const DIRECTIVE: &str = "Please output only the modified files ready to be fed to a planner.";

const REPAIR_NOTE: &str = "Your previous answer for this task was rejected.
Previous domain:
{prev_domain}
Previous problem:
{prev_problem}
These checks failed:
{error}
Fix these problems while following the instructions above.";

/// First-attempt and repair prompt bodies with `{name}` placeholders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    initial: String,
    repair: String,
}

impl Default for PromptTemplate {
    fn default() -> Self {
        PromptTemplate {
            initial: format!("{PREAMBLE}\n{EXAMPLE}\n{INPUT}\n{DIRECTIVE}\n"),
            repair: format!("{PREAMBLE}\n{EXAMPLE}\n{INPUT}\n{REPAIR_NOTE}\n{DIRECTIVE}\n"),
        }
    }
}

impl PromptTemplate {
    pub fn new(initial: impl Into<String>, repair: impl Into<String>) -> Result<Self, TemplateError> {
        let t = PromptTemplate { initial: initial.into(), repair: repair.into() };
        check("initial", &t.initial, INITIAL_PLACEHOLDERS)?;
        check("repair", &t.repair, REPAIR_PLACEHOLDERS)?;
        Ok(t)
    }

    /// Template file text: the initial body, optionally followed by a line
    /// [`REPAIR_SEPARATOR`] and the repair body. Without a repair body the
    /// default one is used.
    pub fn parse(text: &str) -> Result<Self, TemplateError> {
        let mut initial = String::new();
        let mut repair: Option<String> = None;
        for line in text.split_inclusive('\n') {
            match &mut repair {
                None if line.trim_end() == REPAIR_SEPARATOR => repair = Some(String::new()),
                None => initial.push_str(line),
                Some(r) => r.push_str(line),
            }
        }
        PromptTemplate::new(initial, repair.unwrap_or_else(|| PromptTemplate::default().repair))
    }

    pub fn from_file(path: &Path) -> Result<Self, TemplateError> {
        let text = std::fs::read_to_string(path).map_err(|e| TemplateError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn initial(&self) -> &str {
        &self.initial
    }

    pub fn repair(&self) -> &str {
        &self.repair
    }
}

fn count(body: &str, name: &str) -> usize {
    body.matches(&format!("{{{name}}}")).count()
}

fn check(mode: &'static str, body: &str, names: &'static [&'static str]) -> Result<(), TemplateError> {
    for &placeholder in names {
        let n = count(body, placeholder);
        if n != 1 {
            return Err(TemplateError::Placeholder { mode, placeholder, count: n });
        }
    }
    Ok(())
}

/// Single left-to-right pass, so placeholder-like text inside the
/// substituted values is never expanded.
fn substitute(body: &str, values: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(body.len() + values.iter().map(|(_, v)| v.len()).sum::<usize>());
    let mut rest = body;
    'scan: while let Some(i) = rest.find('{') {
        out.push_str(&rest[..i]);
        let tail = &rest[i..];
        for (name, value) in values {
            let key = format!("{{{name}}}");
            if tail.starts_with(&key) {
                out.push_str(value);
                rest = &tail[key.len()..];
                continue 'scan;
            }
        }
        out.push('{');
        rest = &tail[1..];
    }
    out.push_str(rest);
    out
}

pub fn format_prompt(t: &PromptTemplate, domain: &str, problem: &str) -> Result<String, TemplateError> {
    check("initial", &t.initial, INITIAL_PLACEHOLDERS)?;
    Ok(substitute(&t.initial, &[("domain", domain), ("problem", problem)]))
}

pub fn format_repair_prompt(
    t: &PromptTemplate,
    domain: &str,
    problem: &str,
    prev_domain: &str,
    prev_problem: &str,
    error: &str,
) -> Result<String, TemplateError> {
    check("repair", &t.repair, REPAIR_PLACEHOLDERS)?;
    Ok(substitute(
        &t.repair,
        &[
            ("domain", domain),
            ("problem", problem),
            ("prev_domain", prev_domain),
            ("prev_problem", prev_problem),
            ("error", error),
        ],
    ))
}
