use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pddl_prune::bench::{
    desk_corpus, emit_csv, generate_instance, run_benchmark, write_results, BenchConfig, BenchTask, GeneratorSpec,
    Method,
};
use pddl_prune::grounder::{ground, ground_with_limits, GroundingLimits};
use pddl_prune::llm::{parse_original, spg_llm, BackendKind, LlmConfig, PromptTemplate};
use pddl_prune::pddl::{print_domain, print_problem};
use pddl_prune::planner::{parse_plan, solve, ExternalPlanner, SearchOutcome, SearchResult};
use pddl_prune::pruning::PruningProposal;
use pddl_prune::task::StripsTask;
use pddl_prune::validate::{validate_plan, PlannerChoice, Validation, Validator};

#[derive(Parser)]
#[command(name = "pddl-prune", version, about = "Prune, ground, solve and validate STRIPS planning tasks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TaskFiles {
    domain: PathBuf,
    problem: PathBuf,
}

#[derive(Args, Clone)]
struct Common {
    /// Planner time bound in seconds.
    #[arg(long, default_value_t = 60.0)]
    time_bound: f64,
    /// Planner command with {domain}, {problem} and {plan} placeholders.
    #[arg(long, value_name = "CMD")]
    external_planner: Option<String>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[arg(long, value_enum, default_value_t = Backend::Rule)]
    backend: Backend,
    /// Maximum number of model calls.
    #[arg(long = "attempts", value_name = "K", default_value_t = 1)]
    attempts: usize,
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long, value_name = "FILE")]
    template: Option<PathBuf>,
    /// Retry with the first prompt instead of a repair prompt.
    #[arg(long)]
    resample: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Rule,
    Llm,
    Mock,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and type-check a task; print a summary or the canonical files.
    Parse {
        #[command(flatten)]
        files: TaskFiles,
        /// Print the canonical domain and problem text.
        #[arg(long)]
        canonical: bool,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Ground by delete-relaxed reachability and report counts.
    Ground {
        #[command(flatten)]
        files: TaskFiles,
        /// Print every ground atom and action.
        #[arg(long)]
        dump: bool,
        #[arg(long, default_value_t = 10_000_000)]
        max_actions: usize,
    },
    /// Produce a pruned domain and problem.
    Prune {
        #[command(flatten)]
        files: TaskFiles,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Validate a pruned task against the original, or a plan on the original.
    Validate {
        #[command(flatten)]
        files: TaskFiles,
        #[arg(long, value_name = "FILE", requires = "pruned_problem")]
        pruned_domain: Option<PathBuf>,
        #[arg(long, value_name = "FILE", requires = "pruned_domain")]
        pruned_problem: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        plan: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Solve a task and print the plan.
    Solve {
        #[command(flatten)]
        files: TaskFiles,
        #[command(flatten)]
        common: Common,
    },
    /// Prune, ground, solve and check the plan on the original task.
    Spg {
        #[command(flatten)]
        files: TaskFiles,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        common: Common,
        /// Also run full grounding for comparison.
        #[arg(long)]
        compare: bool,
    },
    /// Run a corpus under several methods and write CSV results.
    Bench {
        /// Run configuration (TOML); flags override it.
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Directory of NAME.domain.pddl / NAME.problem.pddl pairs; the
        /// generated desk corpus when absent.
        #[arg(long, value_name = "DIR")]
        corpus: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<Method>>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        time_bound: Option<f64>,
        #[arg(long, value_name = "K")]
        attempts: Option<usize>,
        #[arg(long)]
        endpoint: Option<String>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long, value_name = "FILE")]
        template: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Generate instances.
    Gen {
        #[arg(long, value_enum)]
        family: Option<Family>,
        /// Write the whole desk corpus instead of one instance.
        #[arg(long, conflicts_with = "family")]
        desk_corpus: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        blocks: usize,
        #[arg(long, default_value_t = 3)]
        cities: usize,
        #[arg(long, default_value_t = 6)]
        persons: usize,
        #[arg(long, default_value_t = 3)]
        goal_persons: usize,
        #[arg(long, default_value_t = 2)]
        aircraft: usize,
        #[arg(long, default_value_t = 3)]
        fuel_levels: usize,
        #[arg(long, default_value_t = 5)]
        length: usize,
        #[arg(long, default_value_t = 2)]
        ornaments: usize,
        #[arg(long, default_value_t = 0)]
        shortcuts: usize,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Blocksworld4,
    Blocksworld5,
    ZenoLike,
    Chain,
}

/// Exit status: 0 success, 1 task-level failure, 2 usage error.
enum Failure {
    Task(String),
    Usage(String),
}

type Outcome = Result<(), Failure>;

fn task_fail(e: impl std::fmt::Display) -> Failure {
    Failure::Task(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(dir: &Path, name: &str, text: &str) -> Outcome {
    std::fs::create_dir_all(dir).and_then(|_| std::fs::write(dir.join(name), text)).map_err(task_fail)
}

fn load(files: &TaskFiles) -> Result<(String, String, StripsTask), Failure> {
    let (d, p) = (read(&files.domain)?, read(&files.problem)?);
    let task = parse_original(&d, &p).map_err(task_fail)?;
    Ok((d, p, task))
}

fn time_bound(secs: f64) -> Result<Duration, Failure> {
    if secs.is_finite() && secs > 0.0 {
        Ok(Duration::from_secs_f64(secs))
    } else {
        Err(Failure::Usage("--time-bound must be a positive number of seconds".into()))
    }
}

fn validator(common: &Common) -> Result<Validator, Failure> {
    let mut v = Validator::with_time_bound(time_bound(common.time_bound)?);
    if let Some(cmd) = &common.external_planner {
        v.planner = PlannerChoice::External(ExternalPlanner::new(cmd));
    }
    Ok(v)
}

fn llm_config(m: &ModelArgs) -> Result<(LlmConfig, PromptTemplate), Failure> {
    let mut cfg = LlmConfig {
        backend: match m.backend {
            Backend::Rule => BackendKind::Rule,
            Backend::Llm => BackendKind::Http,
            Backend::Mock => BackendKind::Mock,
        },
        attempts: m.attempts,
        resample_original_prompt: m.resample,
        ..LlmConfig::default()
    };
    if let Some(e) = &m.endpoint {
        cfg.endpoint = e.clone();
    }
    if let Some(model) = &m.model {
        cfg.model = model.clone();
    }
    cfg.check().map_err(|e| Failure::Usage(e.to_string()))?;
    let template = match &m.template {
        Some(path) => PromptTemplate::from_file(path).map_err(|e| Failure::Usage(e.to_string()))?,
        None => PromptTemplate::default(),
    };
    Ok((cfg, template))
}

fn parse_cmd(files: &TaskFiles, canonical: bool, out: &Option<PathBuf>) -> Outcome {
    let (_, _, task) = load(files)?;
    let (d, p) = (print_domain(task.domain()), print_problem(task.problem()));
    if canonical {
        print!("{d}\n{p}");
    } else {
        println!(
            "domain {}: {} types, {} predicates, {} actions",
            task.domain().name,
            task.types().len(),
            task.predicates().len(),
            task.schemas().len()
        );
        println!(
            "problem {}: {} objects, {} initial atoms, {} goal atoms",
            task.problem().name,
            task.objects().len(),
            task.init().len(),
            task.goal().len()
        );
    }
    if let Some(dir) = out {
        write(dir, "domain.pddl", &d)?;
        write(dir, "problem.pddl", &p)?;
    }
    Ok(())
}

fn ground_cmd(files: &TaskFiles, dump: bool, max_actions: usize) -> Outcome {
    let (_, _, task) = load(files)?;
    let limits = GroundingLimits { max_actions, ..Default::default() };
    let gt = ground_with_limits(&task, limits).map_err(task_fail)?;
    if dump {
        print!("{}", gt.dump(&task));
    }
    println!(
        "grounded actions: {}\nground atoms: {}\ngrounding time: {:.6} s\ngoal relaxed-reachable: {}",
        gt.stats.num_actions,
        gt.stats.num_atoms,
        gt.stats.grounding_time.as_secs_f64(),
        gt.goal_reachable
    );
    Ok(())
}

fn prune_cmd(files: &TaskFiles, model: &ModelArgs, common: &Common) -> Outcome {
    let (d, p, task) = load(files)?;
    let (cfg, template) = llm_config(model)?;
    let backend = cfg.make_backend().map_err(|e| Failure::Usage(e.to_string()))?;
    let outcome = spg_llm(&d, &p, &template, &cfg, backend.as_ref(), &validator(common)?).map_err(task_fail)?;
    if let Some(dir) = &common.out {
        outcome.write_transcript(dir).map_err(task_fail)?;
    }
    for (i, a) in outcome.attempts.iter().enumerate() {
        println!("attempt {}:", i + 1);
        match (&a.report, &a.transport_error) {
            (Some(r), _) => print!("{r}"),
            (None, Some(e)) => println!("transport error: {e}"),
            _ => {}
        }
    }
    let Some(pruned) = outcome.accepted.as_ref().and_then(|v| v.task.as_ref()) else {
        return Err(Failure::Task(format!("pruning rejected after {} attempt(s)", outcome.attempts.len())));
    };
    println!("{}", PruningProposal::between(&task, pruned));
    if common.out.is_none() {
        print!("{}\n{}", print_domain(pruned.domain()), print_problem(pruned.problem()));
    }
    Ok(())
}

fn validate_cmd(
    files: &TaskFiles,
    pruned: Option<(&PathBuf, &PathBuf)>,
    plan: Option<&PathBuf>,
    common: &Common,
) -> Outcome {
    let (_, _, task) = load(files)?;
    let mut ok = true;
    if let Some((pd, pp)) = pruned {
        let v = validator(common)?.validate(&task, &read(pd)?, &read(pp)?);
        print!("{}", v.report);
        if let Some(dir) = &common.out {
            let json = serde_json::to_string_pretty(&v.report).map_err(task_fail)?;
            write(dir, "report.json", &json)?;
        }
        ok &= v.report.passed();
    }
    if let Some(path) = plan {
        let steps = parse_plan(&read(path)?).map_err(task_fail)?;
        let verdict = validate_plan(&task, &steps);
        println!("plan: {verdict}");
        ok &= verdict.is_valid();
    }
    if pruned.is_none() && plan.is_none() {
        return Err(Failure::Usage("give --pruned-domain/--pruned-problem, --plan, or both".into()));
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Task("validation failed".into()))
    }
}

fn print_plan(task: &StripsTask, result: &SearchResult, out: Option<&PathBuf>) -> Outcome {
    let SearchOutcome::Solved { plan, cost, solving_time } = &result.outcome else {
        return Err(Failure::Task(format!("no plan: {}", result.summary().status)));
    };
    let text: String = task.plan_steps(plan).iter().map(|s| format!("{s}\n")).collect();
    print!("{text}");
    println!(
        "; cost = {cost}, length = {}, expanded = {}, solving time = {:.6} s",
        plan.len(),
        result.expanded,
        solving_time.as_secs_f64()
    );
    match out {
        Some(dir) => write(dir, "plan", &format!("{text}; cost = {cost}\n")),
        None => Ok(()),
    }
}

fn solve_cmd(files: &TaskFiles, common: &Common) -> Outcome {
    let (_, _, task) = load(files)?;
    let bound = time_bound(common.time_bound)?;
    let result = match &common.external_planner {
        Some(cmd) => ExternalPlanner::new(cmd).solve(&task, bound).map_err(task_fail)?,
        None => solve(&ground(&task).map_err(task_fail)?, bound),
    };
    print_plan(&task, &result, common.out.as_ref())
}

fn spg_cmd(files: &TaskFiles, model: &ModelArgs, common: &Common, compare: bool) -> Outcome {
    let (d, p, original) = load(files)?;
    let (cfg, template) = llm_config(model)?;
    let backend = cfg.make_backend().map_err(|e| Failure::Usage(e.to_string()))?;
    let outcome = spg_llm(&d, &p, &template, &cfg, backend.as_ref(), &validator(common)?).map_err(task_fail)?;
    if let Some(dir) = &common.out {
        outcome.write_transcript(&dir.join("transcript")).map_err(task_fail)?;
    }
    let attempts = outcome.attempts.len();
    let Some(Validation { task: Some(pruned), search: Some(search), .. }) = outcome.accepted else {
        return Err(Failure::Task(format!("pruning rejected after {attempts} attempt(s)")));
    };
    println!("accepted after {attempts} attempt(s), {:.3} s", outcome.seconds);
    println!("{}", PruningProposal::between(&original, &pruned));
    if compare {
        let full = ground(&original).map_err(task_fail)?;
        println!(
            "full grounding: {} actions, {:.6} s",
            full.stats.num_actions,
            full.stats.grounding_time.as_secs_f64()
        );
    }
    let gt = ground(&pruned).map_err(task_fail)?;
    println!("pruned grounding: {} actions, {:.6} s", gt.stats.num_actions, gt.stats.grounding_time.as_secs_f64());
    print_plan(&pruned, &search, common.out.as_ref())?;
    let steps = pruned.plan_steps(search.plan().expect("accepted tasks carry a plan"));
    match validate_plan(&original, &steps) {
        v if v.is_valid() => {
            println!("; plan is valid for the original task");
            Ok(())
        }
        v => Err(Failure::Task(format!("plan is not valid for the original task: {v}"))),
    }
}

#[allow(clippy::too_many_arguments)]
fn bench_cmd(
    config_file: Option<&PathBuf>,
    corpus: Option<&PathBuf>,
    methods: Option<Vec<Method>>,
    seed: Option<u64>,
    bound: Option<f64>,
    attempts: Option<usize>,
    endpoint: Option<String>,
    model: Option<String>,
    template: Option<&PathBuf>,
    out: Option<&PathBuf>,
) -> Outcome {
    let mut config = match config_file {
        Some(f) => BenchConfig::from_toml(&read(f)?).map_err(|e| Failure::Usage(e.to_string()))?,
        None => BenchConfig::default(),
    };
    if let Some(m) = methods {
        config.methods = m;
    }
    if let Some(s) = seed {
        config.seed = s;
    }
    if let Some(b) = bound {
        config.time_bound_secs = time_bound(b)?.as_secs_f64();
    }
    if let Some(k) = attempts {
        config.llm.attempts = k;
    }
    if let Some(e) = endpoint {
        config.llm.endpoint = e;
    }
    if let Some(m) = model {
        config.llm.model = m;
    }
    if let Some(t) = template {
        config.template_file = Some(t.display().to_string());
    }
    let needs_llm = config.methods.contains(&Method::SpgLlm);
    if needs_llm && config.llm.backend == BackendKind::Rule {
        return Err(Failure::Usage("SPG-llm needs an http or mock backend in the run configuration".into()));
    }
    let backend =
        if needs_llm { Some(config.llm.make_backend().map_err(|e| Failure::Usage(e.to_string()))?) } else { None };
    let tasks = match corpus {
        Some(dir) => read_corpus(dir)?,
        None => {
            desk_corpus(config.seed).iter().map(BenchTask::generated).collect::<Result<_, _>>().map_err(task_fail)?
        }
    };
    if let Some(dir) = out {
        config.log_dir.get_or_insert_with(|| dir.join("transcripts").display().to_string());
    }
    let records = run_benchmark(&tasks, &config.methods, &config, backend.as_deref());
    let csv = emit_csv(&records);
    match out {
        Some(dir) => write_results(dir, &records, &config).map_err(task_fail)?,
        None => print!("{csv}"),
    }
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    eprintln!("{} records, {} with errors", records.len(), failed);
    Ok(())
}

fn read_corpus(dir: &Path) -> Result<Vec<BenchTask>, Failure> {
    let entries = std::fs::read_dir(dir).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", dir.display())))?;
    let mut ids: Vec<String> = entries
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().to_str().and_then(|n| n.strip_suffix(".problem.pddl")).map(String::from))
        .collect();
    ids.sort();
    ids.into_iter()
        .map(|id| {
            Ok(BenchTask {
                domain: read(&dir.join(format!("{id}.domain.pddl")))?,
                problem: read(&dir.join(format!("{id}.problem.pddl")))?,
                family: id.split('-').next().unwrap_or("").to_string(),
                id,
            })
        })
        .collect()
}

fn gen_cmd(cmd: &Command) -> Outcome {
    let Command::Gen {
        family,
        desk_corpus: corpus,
        seed,
        blocks,
        cities,
        persons,
        goal_persons,
        aircraft,
        fuel_levels,
        length,
        ornaments,
        shortcuts,
        out,
    } = cmd
    else {
        unreachable!()
    };
    let specs = if *corpus {
        desk_corpus(*seed)
    } else {
        let spec = match family {
            None => return Err(Failure::Usage("give --family or --desk-corpus".into())),
            Some(Family::Blocksworld4) => GeneratorSpec::Blocksworld4 { blocks: *blocks, seed: *seed },
            Some(Family::Blocksworld5) => GeneratorSpec::Blocksworld5 { blocks: *blocks, seed: *seed },
            Some(Family::ZenoLike) => GeneratorSpec::ZenoLike {
                cities: *cities,
                persons: *persons,
                goal_persons: *goal_persons,
                aircraft: *aircraft,
                fuel_levels: *fuel_levels,
                seed: *seed,
            },
            Some(Family::Chain) => {
                GeneratorSpec::Chain { length: *length, ornaments: *ornaments, shortcuts: *shortcuts, seed: *seed }
            }
        };
        vec![spec]
    };
    for spec in &specs {
        let (d, p) = generate_instance(spec).map_err(|e| Failure::Usage(e.to_string()))?;
        match out {
            Some(dir) => {
                write(dir, &format!("{}.domain.pddl", spec.id()), &d)?;
                write(dir, &format!("{}.problem.pddl", spec.id()), &p)?;
            }
            None => print!("{d}\n{p}"),
        }
    }
    if let Some(dir) = out {
        eprintln!("wrote {} task(s) to {}", specs.len(), dir.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Parse { files, canonical, out } => parse_cmd(files, *canonical, out),
        Command::Ground { files, dump, max_actions } => ground_cmd(files, *dump, *max_actions),
        Command::Prune { files, model, common } => prune_cmd(files, model, common),
        Command::Validate { files, pruned_domain, pruned_problem, plan, common } => {
            validate_cmd(files, pruned_domain.as_ref().zip(pruned_problem.as_ref()), plan.as_ref(), common)
        }
        Command::Solve { files, common } => solve_cmd(files, common),
        Command::Spg { files, model, common, compare } => spg_cmd(files, model, common, *compare),
        Command::Bench { config, corpus, methods, seed, time_bound, attempts, endpoint, model, template, out } => {
            bench_cmd(
                config.as_ref(),
                corpus.as_ref(),
                methods.clone(),
                *seed,
                *time_bound,
                *attempts,
                endpoint.clone(),
                model.clone(),
                template.as_ref(),
                out.as_ref(),
            )
        }
        cmd @ Command::Gen { .. } => gen_cmd(cmd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Task(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
    }
}
