use std::fmt;
use std::io::{self, Read, Write};
use std::ops::ControlFlow;
use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context};
use ecta::enumerate::{enumerate, expand, EnumConfig, Schedule};
use ecta::gen::{random_ecta, GenConfig};
use ecta::oracle::{oracle_check, OracleReport};
use ecta::{export_dot, parse_ecta, print_ecta, NodeId, ReductionAlgo, Store};
use ecta_sat::{parse_dimacs, solve, Encoding, SolveConfig};
use ecta_synth::{base_sample, parse_library, synthesize, ArrowEncoding, SynthConfig, SynthesisProblem, TypeExpr};
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::stats::StatLines;
use crate::*;

/// Bad flag values are usage errors; anything wrong with the inputs they
/// name is an input error.
pub enum Failure {
    Usage(String),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.into())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Input(e) => write!(f, "{e:#}"),
        }
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Input(_) => EXIT_INPUT,
        }
    }
}

type Outcome = Result<u8, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let deadline = match cli.timeout_secs {
        Some(s) if s.is_finite() && s >= 0.0 => Some(Instant::now() + Duration::from_secs_f64(s)),
        Some(s) => return Err(Failure::Usage(format!("--timeout-secs must be a non-negative number, got {s}"))),
        None => None,
    };
    let mut stats = StatLines::default();
    let code = match &cli.command {
        Command::Sat(SatCommand::Solve(a)) => sat_solve(a, deadline, &mut stats)?,
        Command::Synth(a) => synth(a, deadline, &mut stats)?,
        Command::Enumerate(a) => enumerate_cmd(a, deadline, &mut stats)?,
        Command::Reduce(a) => reduce(a, &mut stats)?,
        Command::Dot(a) => {
            let mut store = Store::new();
            let root = load_ecta(&mut store, &a.file)?;
            print!("{}", export_dot(&store, root));
            EXIT_OK
        }
        Command::OracleCheck(a) => oracle(a, cli.seed, &mut stats)?,
    };
    stats.emit(cli.stats);
    Ok(code)
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    Ok(std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn load_ecta(store: &mut Store, path: &Path) -> Result<NodeId, Failure> {
    let text = read_input(path)?;
    Ok(parse_ecta(store, &text).with_context(|| format!("parsing {}", path.display()))?)
}

fn sat_solve(a: &SatArgs, deadline: Option<Instant>, stats: &mut StatLines) -> Outcome {
    let text = read_input(&a.file)?;
    let formula = parse_dimacs(&text).with_context(|| format!("parsing {}", a.file.display()))?;
    let encoding = match a.encoding {
        EncodingArg::PerLiteral => Encoding::PerLiteral,
        EncodingArg::FirstTrue => Encoding::FirstTrue,
    };
    let config = SolveConfig { all_models: a.all, encoding, reduce_rounds: a.reduce_rounds, deadline, audit: false };
    let result = solve(&formula, &config).map_err(anyhow::Error::from)?;
    stats.enumeration(&result.stats).add("models", result.models.len()).add("complete", result.complete);
    if let Some(r) = &result.reduction {
        stats.reduction(r);
    }
    let mut out = io::stdout().lock();
    if result.satisfiable() {
        writeln!(out, "SAT")?;
        for m in &result.models {
            writeln!(out, "{m}")?;
        }
        Ok(EXIT_SAT)
    } else if result.complete {
        writeln!(out, "UNSAT")?;
        Ok(EXIT_UNSAT)
    } else {
        writeln!(out, "UNKNOWN")?;
        Ok(EXIT_OK)
    }
}

fn synth(a: &SynthArgs, deadline: Option<Instant>, stats: &mut StatLines) -> Outcome {
    let query: TypeExpr = a.query.parse().map_err(|e| Failure::Usage(format!("--query: {e}")))?;
    let library = match &a.library {
        Some(path) => {
            let text = read_input(path)?;
            parse_library(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => base_sample(),
    };
    let problem = match &a.arg_names {
        Some(names) => SynthesisProblem::with_input_names(library, query, names.clone()),
        None => SynthesisProblem::new(library, query),
    }
    .map_err(|e| Failure::Usage(e.to_string()))?;
    let config = SynthConfig {
        max_size: a.max_size,
        relevancy: !a.no_relevancy,
        reduce_rounds: a.reduce_rounds,
        naive: a.naive,
        arrows: if a.untagged { ArrowEncoding::Untagged } else { ArrowEncoding::Tagged },
        deadline,
        max_states: a.max_states,
        audit: false,
    };
    let limit = a.limit.unwrap_or(usize::MAX);
    let mut out = io::stdout().lock();
    let mut printed = 0;
    let mut write_error = None;
    let s = synthesize(&problem, &config, |sol| {
        if printed >= limit {
            return ControlFlow::Break(());
        }
        if let Err(e) = writeln!(out, "{}  -- size {}", sol.program, sol.size) {
            write_error = Some(e);
            return ControlFlow::Break(());
        }
        printed += 1;
        if printed >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })
    .map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(e) = write_error {
        return Err(e.into());
    }
    stats
        .add("states_explored", s.states_explored)
        .add("dead_branches", s.dead_branches)
        .add("rule_applications", s.rule_applications)
        .add("measure_violations", s.measure_violations)
        .add("reduction_rounds", s.reduction_rounds)
        .add("edges_removed", s.edges_removed)
        .add("sizes_completed", s.sizes_completed)
        .add("solutions", s.solutions)
        .add("stopped_early", s.stopped_early);
    Ok(EXIT_OK)
}

fn enumerate_cmd(a: &EnumerateArgs, deadline: Option<Instant>, stats: &mut StatLines) -> Outcome {
    let mut store = Store::new();
    let root = load_ecta(&mut store, &a.file)?;
    if !store.is_finitely_constrained(root) {
        return Err(anyhow!("{}: constraints inside a recursive node cannot be enumerated", a.file.display()).into());
    }
    let schedule = match a.schedule {
        ScheduleArg::DfsLr => Schedule::DfsLeftRight,
        ScheduleArg::Rtl => Schedule::RightToLeft,
        ScheduleArg::Fewest => Schedule::FewestAlternatives,
    };
    let config = EnumConfig { schedule, deadline, ..EnumConfig::default() };
    let mut it = enumerate(&mut store, root, config);
    let mut out = io::stdout().lock();
    let mut printed = 0;
    let mut states = 0;
    while printed < a.limit {
        let Some(st) = it.next() else { break };
        states += 1;
        if a.expand {
            for t in expand(it.store(), &st, a.limit - printed) {
                writeln!(out, "{t}")?;
                printed += 1;
            }
        } else {
            writeln!(out, "state {states}")?;
            write!(out, "{}", st.display())?;
            printed += 1;
        }
    }
    stats.enumeration(&it.stats()).add("states", states).add("printed", printed);
    Ok(EXIT_OK)
}

fn reduce(a: &ReduceArgs, stats: &mut StatLines) -> Outcome {
    let mut store = Store::new();
    let root = load_ecta(&mut store, &a.file)?;
    let algo = match a.algo {
        AlgoArg::Basic => ReductionAlgo::Basic,
        AlgoArg::Optimized => ReductionAlgo::Optimized,
    };
    let before = store.edge_count(root);
    let (reduced, report) = store.reduce_fixpoint_with(root, a.rounds, algo);
    print!("{}", print_ecta(&store, reduced));
    let mut lines = StatLines::default();
    lines.reduction(&report).add("edges_before", before).add("edges_after", store.edge_count(reduced));
    // The report is the point of this command, so it is always shown.
    lines.emit(true);
    stats.add("nodes_interned", store.len());
    Ok(EXIT_OK)
}

fn show_report(out: &mut impl Write, label: &str, r: &OracleReport) -> io::Result<()> {
    let verdict = if r.passed() { "PASS" } else { "FAIL" };
    writeln!(out, "{verdict} {label} depth={} enumerated={} denoted={}", r.depth, r.enumerated, r.denoted)?;
    for t in &r.unsound {
        writeln!(out, "  unsound {t}")?;
    }
    for t in &r.missing {
        writeln!(out, "  missing {t}")?;
    }
    if r.stats.measure_violations > 0 {
        writeln!(out, "  measure_violations {}", r.stats.measure_violations)?;
    }
    Ok(())
}

fn oracle(a: &OracleArgs, seed: u64, stats: &mut StatLines) -> Outcome {
    let mut out = io::stdout().lock();
    let mut failures = 0;
    let mut checked = 0;
    if let Some(path) = &a.file {
        let mut store = Store::new();
        let root = load_ecta(&mut store, path)?;
        if !store.is_finitely_constrained(root) {
            return Err(anyhow!("{}: constraints inside a recursive node cannot be enumerated", path.display()).into());
        }
        let r = oracle_check(&mut store, root, a.depth);
        show_report(&mut out, &path.display().to_string(), &r)?;
        checked += 1;
        failures += usize::from(!r.passed());
    } else {
        let n = a.random.unwrap_or(0);
        let mut rng = StdRng::seed_from_u64(seed);
        let config = GenConfig { max_nodes: a.max_nodes, max_pecs: a.max_pecs, ..GenConfig::default() };
        for i in 0..n {
            let mut store = Store::new();
            let root = random_ecta(&mut store, &mut rng, &config);
            let r = oracle_check(&mut store, root, a.depth);
            checked += 1;
            if !r.passed() {
                failures += 1;
                show_report(&mut out, &format!("random #{i}"), &r)?;
                write!(out, "{}", print_ecta(&store, root))?;
            }
        }
        writeln!(out, "{} of {checked} random automata passed", checked - failures)?;
    }
    stats.add("checked", checked).add("failed", failures);
    Ok(if failures == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}
