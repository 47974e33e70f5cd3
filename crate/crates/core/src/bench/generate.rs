use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pddl::{parse_domain, print_domain, print_problem, AtomAst, ProblemAst, TypedName};

const BLOCKSWORLD4: &str = include_str!("../../tests/fixtures/blocksworld4.domain.pddl");
const BLOCKSWORLD5: &str = include_str!("../../tests/fixtures/blocksworld5.domain.pddl");
const ZENO: &str = include_str!("../../tests/fixtures/zeno.domain.pddl");
const CHAIN: &str = "(define (domain chain)
  (:requirements :strips :typing)
  (:types node ornament)
  (:predicates (at ?n - node) (link ?a - node ?b - node) (pretty ?o - ornament))
  (:action step :parameters (?a - node ?b - node)
    :precondition (and (at ?a) (link ?a ?b))
    :effect (and (at ?b) (not (at ?a))))
  (:action decorate :parameters (?o - ornament)
    :precondition (and)
    :effect (pretty ?o)))";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Blocksworld4 {
        blocks: usize,
        seed: u64,
    },
    Blocksworld5 {
        blocks: usize,
        seed: u64,
    },
    ZenoLike {
        cities: usize,
        persons: usize,
        /// Persons that get a destination; the rest are surplus.
        goal_persons: usize,
        aircraft: usize,
        fuel_levels: usize,
        seed: u64,
    },
    Chain {
        length: usize,
        ornaments: usize,
        /// Extra random links between nodes.
        shortcuts: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid generator spec: {0}")]
pub struct InvalidSpec(pub String);

impl GeneratorSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GeneratorSpec::Blocksworld4 { .. } => "blocksworld4",
            GeneratorSpec::Blocksworld5 { .. } => "blocksworld5",
            GeneratorSpec::ZenoLike { .. } => "zeno_like",
            GeneratorSpec::Chain { .. } => "chain",
        }
    }

    /// Short identifier, unique within a corpus built from distinct specs.
    pub fn id(&self) -> String {
        match self {
            GeneratorSpec::Blocksworld4 { blocks, seed } => format!("bw4-n{blocks}-s{seed}"),
            GeneratorSpec::Blocksworld5 { blocks, seed } => format!("bw5-n{blocks}-s{seed}"),
            GeneratorSpec::ZenoLike { cities, persons, goal_persons, aircraft, fuel_levels, seed } => {
                format!("zeno-c{cities}-p{persons}g{goal_persons}-a{aircraft}-f{fuel_levels}-s{seed}")
            }
            GeneratorSpec::Chain { length, ornaments, shortcuts, seed } => {
                format!("chain-l{length}-o{ornaments}-x{shortcuts}-s{seed}")
            }
        }
    }
}

fn atom(p: &str, args: &[&str]) -> AtomAst {
    AtomAst::new(p, args.iter().copied())
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Deterministic (domain, problem) text pair in canonical print form.
pub fn generate_instance(spec: &GeneratorSpec) -> Result<(String, String), InvalidSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(match spec {
        GeneratorSpec::Blocksworld4 { seed, .. }
        | GeneratorSpec::Blocksworld5 { seed, .. }
        | GeneratorSpec::ZenoLike { seed, .. }
        | GeneratorSpec::Chain { seed, .. } => *seed,
    });
    let (domain_text, problem) = match spec {
        GeneratorSpec::Blocksworld4 { blocks, .. } => (BLOCKSWORLD4, blocksworld(*blocks, &mut rng)?),
        GeneratorSpec::Blocksworld5 { blocks, .. } => (BLOCKSWORLD5, blocksworld(*blocks, &mut rng)?),
        GeneratorSpec::ZenoLike { cities, persons, goal_persons, aircraft, fuel_levels, .. } => {
            (ZENO, zeno(*cities, *persons, *goal_persons, *aircraft, *fuel_levels, &mut rng)?)
        }
        GeneratorSpec::Chain { length, ornaments, shortcuts, .. } => {
            (CHAIN, chain(*length, *ornaments, *shortcuts, &mut rng)?)
        }
    };
    let domain = parse_domain(domain_text).expect("built-in domains parse");
    Ok((print_domain(&domain), print_problem(&problem)))
}

/// Random towers for both the initial state and the goal.
fn towers(blocks: &[String], rng: &mut ChaCha8Rng) -> Vec<Vec<String>> {
    let mut order = blocks.to_vec();
    order.shuffle(rng);
    let mut out: Vec<Vec<String>> = Vec::new();
    for b in order {
        match out.last_mut() {
            Some(t) if rng.random_bool(0.6) => t.push(b),
            _ => out.push(vec![b]),
        }
    }
    out
}

fn blocksworld(n: usize, rng: &mut ChaCha8Rng) -> Result<ProblemAst, InvalidSpec> {
    if n < 2 {
        return Err(InvalidSpec("blocksworld needs at least 2 blocks".into()));
    }
    let blocks = names("b", n);
    let mut init = Vec::new();
    for t in towers(&blocks, rng) {
        init.push(atom("ontable", &[&t[0]]));
        for w in t.windows(2) {
            init.push(atom("on", &[&w[1], &w[0]]));
        }
        init.push(atom("clear", &[t.last().unwrap()]));
    }
    init.push(atom("handempty", &[]));
    let mut goal = Vec::new();
    loop {
        for t in towers(&blocks, rng) {
            for w in t.windows(2) {
                goal.push(atom("on", &[&w[1], &w[0]]));
            }
        }
        // an empty goal or one that already holds would make a dull task
        if !goal.is_empty() && !goal.iter().all(|g| init.contains(g)) {
            break;
        }
        goal.clear();
    }
    goal.sort();
    Ok(ProblemAst {
        name: format!("bw-{n}"),
        domain_name: "blocksworld".into(),
        objects: blocks.iter().map(|b| TypedName::new(b, "block")).collect(),
        init,
        initial_total_cost: None,
        goal,
        minimize_total_cost: false,
    })
}

fn zeno(
    cities: usize,
    persons: usize,
    goal_persons: usize,
    aircraft: usize,
    fuel_levels: usize,
    rng: &mut ChaCha8Rng,
) -> Result<ProblemAst, InvalidSpec> {
    if cities < 2 || aircraft < 1 || fuel_levels < 2 || goal_persons < 1 || goal_persons > persons {
        return Err(InvalidSpec(
            "zeno_like needs cities >= 2, aircraft >= 1, fuel_levels >= 2 and 1 <= goal_persons <= persons".into(),
        ));
    }
    let (city, person, plane, level) =
        (names("c", cities), names("p", persons), names("a", aircraft), names("fl", fuel_levels));
    let mut objects = Vec::new();
    objects.extend(city.iter().map(|c| TypedName::new(c, "city")));
    objects.extend(person.iter().map(|p| TypedName::new(p, "person")));
    objects.extend(plane.iter().map(|a| TypedName::new(a, "aircraft")));
    objects.extend(level.iter().map(|l| TypedName::new(l, "flevel")));
    let mut init = Vec::new();
    let mut goal = Vec::new();
    for (i, p) in person.iter().enumerate() {
        let from = rng.random_range(0..cities);
        init.push(atom("at", &[p, &city[from]]));
        if i < goal_persons {
            let to = (from + rng.random_range(1..cities)) % cities;
            goal.push(atom("at", &[p, &city[to]]));
        }
    }
    for a in &plane {
        init.push(atom("at", &[a, &city[rng.random_range(0..cities)]]));
        init.push(atom("fuel-level", &[a, &level[rng.random_range(0..fuel_levels)]]));
    }
    for w in level.windows(2) {
        init.push(atom("next", &[&w[0], &w[1]]));
    }
    Ok(ProblemAst {
        name: "zeno".into(),
        domain_name: "zeno-like".into(),
        objects,
        init,
        initial_total_cost: Some(crate::Cost::ZERO),
        goal,
        minimize_total_cost: true,
    })
}

fn chain(length: usize, ornaments: usize, shortcuts: usize, rng: &mut ChaCha8Rng) -> Result<ProblemAst, InvalidSpec> {
    if length < 1 {
        return Err(InvalidSpec("chain needs length >= 1".into()));
    }
    let node: Vec<String> = (0..=length).map(|i| format!("n{i}")).collect();
    let orn = names("o", ornaments);
    let mut objects: Vec<TypedName> = node.iter().map(|n| TypedName::new(n, "node")).collect();
    objects.extend(orn.iter().map(|o| TypedName::new(o, "ornament")));
    let mut init = vec![atom("at", &["n0"])];
    for w in node.windows(2) {
        init.push(atom("link", &[&w[0], &w[1]]));
    }
    for _ in 0..shortcuts {
        let (a, b) = (rng.random_range(0..=length), rng.random_range(0..=length));
        let l = atom("link", &[&node[a], &node[b]]);
        if a != b && !init.contains(&l) {
            init.push(l);
        }
    }
    Ok(ProblemAst {
        name: format!("chain-{length}"),
        domain_name: "chain".into(),
        objects,
        init,
        initial_total_cost: None,
        goal: vec![atom("at", &[&node[length]])],
        minimize_total_cost: false,
    })
}

/// The default benchmark corpus: 105 small tasks over all four families.
pub fn desk_corpus(seed: u64) -> Vec<GeneratorSpec> {
    let mut specs = Vec::new();
    for i in 0..30u64 {
        let blocks = 3 + (i % 5) as usize;
        specs.push(GeneratorSpec::Blocksworld4 { blocks, seed: seed + i });
        specs.push(GeneratorSpec::Blocksworld5 { blocks, seed: seed + i });
    }
    for i in 0..25u64 {
        let persons = 3 + (i % 4) as usize;
        specs.push(GeneratorSpec::ZenoLike {
            cities: 3 + (i % 2) as usize,
            persons,
            goal_persons: 1 + (i % 3) as usize,
            aircraft: 1 + (i % 3) as usize,
            fuel_levels: 3 + (i % 2) as usize,
            seed: seed + i,
        });
    }
    for i in 0..20u64 {
        specs.push(GeneratorSpec::Chain {
            length: 3 + (i % 8) as usize,
            ornaments: (i % 4) as usize,
            shortcuts: (i % 3) as usize,
            seed: seed + i,
        });
    }
    specs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::parse_problem;
    use crate::pruning::goal_protected_symbols;
    use crate::task::build_task;

    fn build(spec: &GeneratorSpec) -> crate::task::StripsTask {
        let (d, p) = generate_instance(spec).unwrap();
        let d = parse_domain(&d).unwrap();
        let p = parse_problem(&p, &d).unwrap();
        build_task(&d, &p).unwrap()
    }

    #[test]
    fn blocksworld5_contract() {
        let t = build(&GeneratorSpec::Blocksworld5 { blocks: 4, seed: 7 });
        assert_eq!(t.schemas().len(), 5);
        assert_eq!(t.objects().len(), 4);
    }

    #[test]
    fn zeno_surplus_persons() {
        let spec =
            GeneratorSpec::ZenoLike { cities: 3, persons: 6, goal_persons: 3, aircraft: 2, fuel_levels: 3, seed: 1 };
        let t = build(&spec);
        let (protected, _) = goal_protected_symbols(&t);
        let surplus: Vec<_> =
            t.objects().iter().filter(|o| o.name.starts_with('p') && !protected.contains(&o.name)).collect();
        assert_eq!(surplus.len(), 3);
        assert!(t.schema_id("zoom").is_some());
    }

    #[test]
    fn same_spec_same_bytes() {
        for spec in desk_corpus(0).iter().step_by(7) {
            assert_eq!(generate_instance(spec).unwrap(), generate_instance(spec).unwrap());
        }
    }

    #[test]
    fn corpus_is_distinct_and_valid() {
        let corpus = desk_corpus(0);
        assert!(corpus.len() >= 100);
        let ids: std::collections::BTreeSet<String> = corpus.iter().map(GeneratorSpec::id).collect();
        assert_eq!(ids.len(), corpus.len());
        for spec in &corpus {
            build(spec);
        }
    }

    #[test]
    fn bad_specs() {
        assert!(generate_instance(&GeneratorSpec::Blocksworld4 { blocks: 1, seed: 0 }).is_err());
        let z =
            GeneratorSpec::ZenoLike { cities: 3, persons: 2, goal_persons: 3, aircraft: 1, fuel_levels: 3, seed: 0 };
        assert!(generate_instance(&z).is_err());
    }

    #[test]
    fn spec_toml_round_trip() {
        let spec = GeneratorSpec::Chain { length: 4, ornaments: 2, shortcuts: 1, seed: 9 };
        let text = toml::to_string(&spec).unwrap();
        assert!(text.contains("family = \"chain\""));
        assert_eq!(toml::from_str::<GeneratorSpec>(&text).unwrap(), spec);
    }
}
