//! The lifted STRIPS task `⟨P, O, A, s0, G⟩` and its ground semantics.

mod state;
mod types;

use std::collections::HashMap;

use thiserror::Error;

use crate::cost::Cost;
use crate::pddl::{AtomAst, DomainAst, PddlError, ProblemAst};

pub use state::{
    apply_action, apply_plan, is_applicable, plan_cost, ApplyError, GroundAction, GroundAtom, Plan, PlanStep, State,
};
pub use types::{TypeHierarchy, TypeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchemaId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    pub name: String,
    pub params: Vec<TypeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Object {
    pub name: String,
    pub ty: TypeId,
}

/// Atom over schema parameters; `args[i]` is a parameter index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedAtom {
    pub predicate: PredId,
    pub args: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamEquality {
    pub left: usize,
    pub right: usize,
    pub negated: bool,
}

impl ParamEquality {
    pub fn holds(&self, binding: &[ObjId]) -> bool {
        (binding[self.left] == binding[self.right]) != self.negated
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub params: Vec<(String, TypeId)>,
    pub pre: Vec<LiftedAtom>,
    pub add: Vec<LiftedAtom>,
    pub del: Vec<LiftedAtom>,
    pub equalities: Vec<ParamEquality>,
    pub cost: Cost,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaskError {
    #[error("problem refers to domain '{found}' but the domain is '{expected}'")]
    MissingDomain { expected: String, found: String },
    #[error("type error: {0}")]
    Type(String),
    #[error(transparent)]
    Pddl(#[from] PddlError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("unknown action '{0}'")]
    UnknownAction(String),
    #[error("unknown object '{0}'")]
    UnknownObject(String),
    #[error("action '{action}' takes {expected} argument(s), got {got}")]
    Arity { action: String, expected: usize, got: usize },
    #[error("object '{object}' is not a valid '{expected}' for action '{action}'")]
    Type { action: String, object: String, expected: String },
    #[error("equality constraint of action '{0}' is violated")]
    Equality(String),
}

/// A resolved, type-checked planning task. Keeps the ASTs it was built from
/// so pruned variants can be printed back to PDDL.
#[derive(Debug, Clone)]
pub struct StripsTask {
    domain: DomainAst,
    problem: ProblemAst,
    types: TypeHierarchy,
    predicates: Vec<Predicate>,
    objects: Vec<Object>,
    schemas: Vec<Schema>,
    init: State,
    goal: State,
    pred_index: HashMap<String, PredId>,
    obj_index: HashMap<String, ObjId>,
    schema_index: HashMap<String, SchemaId>,
    objects_by_type: Vec<Vec<ObjId>>,
}

pub fn build_task(domain: &DomainAst, problem: &ProblemAst) -> Result<StripsTask, TaskError> {
    StripsTask::build(domain, problem)
}

impl StripsTask {
    pub fn build(domain: &DomainAst, problem: &ProblemAst) -> Result<Self, TaskError> {
        if domain.name != problem.domain_name {
            return Err(TaskError::MissingDomain { expected: domain.name.clone(), found: problem.domain_name.clone() });
        }
        let types = TypeHierarchy::from_decls(&domain.types)?;
        let type_of = |ty: &str| types.id(ty).ok_or_else(|| PddlError::UnknownType { ty: ty.to_string() });

        let mut predicates = Vec::new();
        let mut pred_index = HashMap::new();
        for p in &domain.predicates {
            let params = p.parameters.iter().map(|t| type_of(&t.ty)).collect::<Result<Vec<_>, _>>()?;
            let id = PredId(predicates.len() as u32);
            if pred_index.insert(p.name.clone(), id).is_some() {
                return Err(PddlError::Duplicate { what: "predicate", name: p.name.clone() }.into());
            }
            predicates.push(Predicate { name: p.name.clone(), params });
        }

        let mut objects = Vec::new();
        let mut obj_index = HashMap::new();
        for o in &problem.objects {
            let ty = types
                .id(&o.ty)
                .ok_or_else(|| PddlError::UnknownObjectType { object: o.name.clone(), ty: o.ty.clone() })?;
            let id = ObjId(objects.len() as u32);
            if obj_index.insert(o.name.clone(), id).is_some() {
                return Err(PddlError::Duplicate { what: "object", name: o.name.clone() }.into());
            }
            objects.push(Object { name: o.name.clone(), ty });
        }

        let mut schemas = Vec::new();
        let mut schema_index = HashMap::new();
        for s in &domain.schemas {
            let params = s
                .parameters
                .iter()
                .map(|p| Ok((p.name.clone(), type_of(&p.ty)?)))
                .collect::<Result<Vec<_>, PddlError>>()?;
            let var = |v: &str| {
                params
                    .iter()
                    .position(|(n, _)| n == v)
                    .ok_or_else(|| PddlError::UndeclaredVariable { schema: s.name.clone(), variable: v.to_string() })
            };
            let lift = |atoms: &[AtomAst]| -> Result<Vec<LiftedAtom>, PddlError> {
                atoms
                    .iter()
                    .map(|a| {
                        let predicate =
                            *pred_index.get(&a.predicate).ok_or_else(|| PddlError::UndeclaredPredicateInSchema {
                                schema: s.name.clone(),
                                predicate: a.predicate.clone(),
                            })?;
                        let expected = predicates[predicate.0 as usize].params.len();
                        if expected != a.args.len() {
                            return Err(PddlError::ArityMismatch {
                                predicate: a.predicate.clone(),
                                expected,
                                got: a.args.len(),
                            });
                        }
                        let args = a.args.iter().map(|v| var(v)).collect::<Result<_, _>>()?;
                        Ok(LiftedAtom { predicate, args })
                    })
                    .collect()
            };
            let equalities = s
                .equalities
                .iter()
                .map(|e| Ok(ParamEquality { left: var(&e.left)?, right: var(&e.right)?, negated: e.negated }))
                .collect::<Result<Vec<_>, PddlError>>()?;
            let id = SchemaId(schemas.len() as u32);
            if schema_index.insert(s.name.clone(), id).is_some() {
                return Err(PddlError::Duplicate { what: "action", name: s.name.clone() }.into());
            }
            schemas.push(Schema {
                name: s.name.clone(),
                pre: lift(&s.precondition)?,
                add: lift(&s.add_effects)?,
                del: lift(&s.del_effects)?,
                params,
                equalities,
                cost: s.cost(),
            });
        }

        let objects_by_type = (0..types.len())
            .map(|t| {
                (0..objects.len())
                    .map(|o| ObjId(o as u32))
                    .filter(|o| types.is_subtype(objects[o.0 as usize].ty, TypeId(t as u32)))
                    .collect()
            })
            .collect();

        let mut task = StripsTask {
            domain: domain.clone(),
            problem: problem.clone(),
            types,
            predicates,
            objects,
            schemas,
            init: State::new(),
            goal: State::new(),
            pred_index,
            obj_index,
            schema_index,
            objects_by_type,
        };
        task.init = problem.init.iter().map(|a| task.resolve_ground_atom(a)).collect::<Result<_, _>>()?;
        task.goal = problem.goal.iter().map(|a| task.resolve_ground_atom(a)).collect::<Result<_, _>>()?;
        Ok(task)
    }

    fn resolve_ground_atom(&self, atom: &AtomAst) -> Result<GroundAtom, TaskError> {
        let predicate = self
            .predicate_id(&atom.predicate)
            .ok_or_else(|| TaskError::Type(format!("atom {atom} uses unknown predicate '{}'", atom.predicate)))?;
        let decl = &self.predicates[predicate.0 as usize];
        if decl.params.len() != atom.args.len() {
            return Err(TaskError::Type(format!(
                "atom {atom} has {} argument(s), '{}' expects {}",
                atom.args.len(),
                decl.name,
                decl.params.len()
            )));
        }
        let mut args = Vec::with_capacity(atom.args.len());
        for (name, &ty) in atom.args.iter().zip(&decl.params) {
            let obj = self
                .object_id(name)
                .ok_or_else(|| TaskError::Type(format!("atom {atom} uses undeclared object '{name}'")))?;
            if !self.types.is_subtype(self.objects[obj.0 as usize].ty, ty) {
                return Err(TaskError::Type(format!(
                    "atom {atom}: object '{name}' is not of type '{}'",
                    self.types.name(ty)
                )));
            }
            args.push(obj);
        }
        Ok(GroundAtom::new(predicate, args))
    }

    pub fn domain(&self) -> &DomainAst {
        &self.domain
    }

    pub fn problem(&self) -> &ProblemAst {
        &self.problem
    }

    pub fn types(&self) -> &TypeHierarchy {
        &self.types
    }

    pub fn predicates(&self) -> &[Predicate] {
        &self.predicates
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn schemas(&self) -> &[Schema] {
        &self.schemas
    }

    pub fn init(&self) -> &State {
        &self.init
    }

    pub fn goal(&self) -> &State {
        &self.goal
    }

    pub fn predicate(&self, id: PredId) -> &Predicate {
        &self.predicates[id.0 as usize]
    }

    pub fn object(&self, id: ObjId) -> &Object {
        &self.objects[id.0 as usize]
    }

    pub fn schema(&self, id: SchemaId) -> &Schema {
        &self.schemas[id.0 as usize]
    }

    pub fn predicate_id(&self, name: &str) -> Option<PredId> {
        self.pred_index.get(name).copied()
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.obj_index.get(name).copied()
    }

    pub fn schema_id(&self, name: &str) -> Option<SchemaId> {
        self.schema_index.get(name).copied()
    }

    /// Objects whose type is a (reflexive) subtype of `ty`.
    pub fn objects_of_type(&self, ty: TypeId) -> &[ObjId] {
        &self.objects_by_type[ty.0 as usize]
    }

    pub fn is_goal_state(&self, state: &State) -> bool {
        state.contains_all(&self.goal)
    }

    /// Instantiates a schema under `binding` after checking arity, parameter
    /// types and equality constraints.
    pub fn instantiate(&self, schema: SchemaId, binding: &[ObjId]) -> Result<GroundAction, StepError> {
        let s = self.schema(schema);
        if s.params.len() != binding.len() {
            return Err(StepError::Arity { action: s.name.clone(), expected: s.params.len(), got: binding.len() });
        }
        for ((_, ty), &obj) in s.params.iter().zip(binding) {
            if !self.types.is_subtype(self.object(obj).ty, *ty) {
                return Err(StepError::Type {
                    action: s.name.clone(),
                    object: self.object(obj).name.clone(),
                    expected: self.types.name(*ty).to_string(),
                });
            }
        }
        if !s.equalities.iter().all(|e| e.holds(binding)) {
            return Err(StepError::Equality(s.name.clone()));
        }
        Ok(self.instantiate_unchecked(schema, binding))
    }

    pub(crate) fn instantiate_unchecked(&self, schema: SchemaId, binding: &[ObjId]) -> GroundAction {
        let s = self.schema(schema);
        let ground = |atoms: &[LiftedAtom]| -> Vec<GroundAtom> {
            atoms
                .iter()
                .map(|a| GroundAtom::new(a.predicate, a.args.iter().map(|&i| binding[i]).collect::<Vec<_>>()))
                .collect()
        };
        GroundAction::normalized(schema, binding.into(), ground(&s.pre), ground(&s.add), ground(&s.del), s.cost)
    }

    /// Resolves a named plan step against this task's schemas and objects.
    pub fn ground_step(&self, step: &PlanStep) -> Result<GroundAction, StepError> {
        let schema = self.schema_id(&step.action).ok_or_else(|| StepError::UnknownAction(step.action.clone()))?;
        let binding = step
            .args
            .iter()
            .map(|a| self.object_id(a).ok_or_else(|| StepError::UnknownObject(a.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.instantiate(schema, &binding)
    }

    pub fn atom_name(&self, atom: &GroundAtom) -> String {
        let mut s = format!("({}", self.predicate(atom.predicate).name);
        for o in atom.args.iter() {
            s.push(' ');
            s.push_str(&self.object(*o).name);
        }
        s.push(')');
        s
    }

    pub fn step(&self, action: &GroundAction) -> PlanStep {
        PlanStep {
            action: self.schema(action.schema).name.clone(),
            args: action.binding.iter().map(|o| self.object(*o).name.clone()).collect(),
        }
    }

    pub fn action_name(&self, action: &GroundAction) -> String {
        self.step(action).to_string()
    }

    pub fn plan_steps(&self, plan: &Plan) -> Vec<PlanStep> {
        plan.actions.iter().map(|a| self.step(a)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::{parse_domain, parse_problem, TypedName};

    fn minimal() -> (DomainAst, ProblemAst) {
        let d = parse_domain(
            "(define (domain d) (:requirements :strips) (:predicates (p ?x)) \
             (:action a :parameters (?x) :precondition (p ?x) :effect (not (p ?x))))",
        )
        .unwrap();
        let p = parse_problem("(define (problem q) (:domain d) (:objects o) (:init (p o)) (:goal (and (p o))))", &d)
            .unwrap();
        (d, p)
    }

    #[test]
    fn builds_minimal_task() {
        let (d, p) = minimal();
        let t = build_task(&d, &p).unwrap();
        assert_eq!(
            (t.predicates().len(), t.objects().len(), t.schemas().len(), t.init().len(), t.goal().len()),
            (1, 1, 1, 1, 1)
        );
    }

    #[test]
    fn goal_with_undeclared_object_is_a_type_error() {
        let (d, mut p) = minimal();
        p.goal.push(AtomAst::new("p", ["ghost"]));
        assert!(matches!(build_task(&d, &p), Err(TaskError::Type(_))));
    }

    #[test]
    fn mismatched_domain_name() {
        let (d, mut p) = minimal();
        p.domain_name = "other".into();
        assert!(matches!(build_task(&d, &p), Err(TaskError::MissingDomain { .. })));
    }

    #[test]
    fn instantiate_checks_types() {
        let d = parse_domain(
            "(define (domain d) (:requirements :typing) (:types a b) (:predicates (p ?x - a)) \
             (:action go :parameters (?x - a) :precondition (p ?x) :effect (and)))",
        )
        .unwrap();
        let mut p =
            parse_problem("(define (problem q) (:domain d) (:objects x - a) (:init) (:goal (and)))", &d).unwrap();
        p.objects.push(TypedName::new("y", "b"));
        let t = build_task(&d, &p).unwrap();
        assert!(t.ground_step(&PlanStep::new("go", ["x"])).is_ok());
        assert!(matches!(t.ground_step(&PlanStep::new("go", ["y"])), Err(StepError::Type { .. })));
        assert!(matches!(t.ground_step(&PlanStep::new("fly", ["x"])), Err(StepError::UnknownAction(_))));
        assert!(matches!(t.ground_step(&PlanStep::new("go", ["z"])), Err(StepError::UnknownObject(_))));
        assert!(matches!(t.ground_step(&PlanStep::new("go", Vec::<String>::new())), Err(StepError::Arity { .. })));
    }
}
