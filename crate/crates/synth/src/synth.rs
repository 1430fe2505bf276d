//! The search driver: build the term space of each size, restrict it to the
//! query's return type, reduce, enumerate and read off programs.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::time::Instant;

use ecta::enumerate::{enumerate, enumerate_naive_each, EnumConfig, NaiveConfig, NAIVE_UNFOLD_DEPTH};
use ecta::{NodeId, Store, DEFAULT_MAX_ROUNDS};
use thiserror::Error;

use crate::encode::{attach_query, ArrowEncoding, Signature, TermSpace, TypeNodes, MAX_RELEVANT_INPUTS};
use crate::library::{Component, Library};
use crate::program::{program_of_state, program_of_term, Program};
use crate::types::TypeExpr;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SynthError {
    #[error("expected {expected} input names, got {got}")]
    InputCount { expected: usize, got: usize },
    #[error("input name {0} is also a component or another input")]
    InputClash(String),
    #[error("relevancy supports at most {MAX_RELEVANT_INPUTS} inputs, the query has {0}")]
    TooManyInputs(usize),
}

#[derive(Clone, Debug)]
pub struct SynthesisProblem {
    pub library: Library,
    pub query: TypeExpr,
    input_names: Vec<String>,
}

impl SynthesisProblem {
    /// Inputs are named `arg0`, `arg1`, ... along the query's arrow spine.
    pub fn new(library: Library, query: TypeExpr) -> Result<SynthesisProblem, SynthError> {
        let k = query.spine().0.len();
        let names = (0..k).map(|i| format!("arg{i}")).collect();
        SynthesisProblem::with_input_names(library, query, names)
    }

    pub fn with_input_names(library: Library, query: TypeExpr, names: Vec<String>) -> Result<SynthesisProblem, SynthError> {
        let k = query.spine().0.len();
        if names.len() != k {
            return Err(SynthError::InputCount { expected: k, got: names.len() });
        }
        for (i, n) in names.iter().enumerate() {
            if library.get(n).is_some() || names[..i].contains(n) {
                return Err(SynthError::InputClash(n.clone()));
            }
        }
        Ok(SynthesisProblem { library, query, input_names: names })
    }

    /// One component per query parameter, with the query's type variables
    /// as constructors.
    pub fn inputs(&self) -> Vec<Component> {
        let (params, _) = self.query.spine();
        self.input_names.iter().zip(params).map(|(n, t)| Component::new(n, t.skolemize())).collect()
    }

    pub fn return_type(&self) -> TypeExpr {
        self.query.spine().1.clone()
    }
}

#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub max_size: usize,
    /// Only programs that use every input.
    pub relevancy: bool,
    /// Static reduction rounds per size; 0 leaves all work to enumeration.
    pub reduce_rounds: usize,
    /// Enumerate the unconstrained space with bounded unfolding and filter
    /// by the constraints afterwards.
    pub naive: bool,
    pub arrows: ArrowEncoding,
    pub deadline: Option<Instant>,
    /// Budget on explored states, summed over sizes.
    pub max_states: Option<u64>,
    pub audit: bool,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            max_size: 8,
            relevancy: true,
            reduce_rounds: DEFAULT_MAX_ROUNDS,
            naive: false,
            arrows: ArrowEncoding::Tagged,
            deadline: None,
            max_states: None,
            audit: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub program: Program,
    pub size: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SynthStats {
    pub states_explored: u64,
    pub dead_branches: u64,
    pub rule_applications: u64,
    pub measure_violations: u64,
    pub reduction_rounds: usize,
    pub edges_removed: usize,
    /// Sizes whose search ran to completion.
    pub sizes_completed: usize,
    pub solutions: u64,
    /// Enumerated states whose program could not be read off.
    pub unextracted: u64,
    pub stopped_early: bool,
}

/// Searches sizes `1..=max_size` in order, passing each new program to
/// `on_solution`. Within a size, programs come in enumeration order.
pub fn synthesize(
    problem: &SynthesisProblem,
    config: &SynthConfig,
    mut on_solution: impl FnMut(&Solution) -> ControlFlow<()>,
) -> Result<SynthStats, SynthError> {
    let inputs = problem.inputs();
    if config.relevancy && inputs.len() > MAX_RELEVANT_INPUTS {
        return Err(SynthError::TooManyInputs(inputs.len()));
    }
    let mut store = Store::new();
    let sig = Signature::of(&problem.library, &problem.query);
    let types = TypeNodes::new(&mut store, &sig, config.arrows);
    let (ret, _) = types.encode_type(&mut store, &problem.return_type().skolemize());
    let mut space = TermSpace::new(&mut store, types, &problem.library, &inputs, config.relevancy);
    let mut stats = SynthStats::default();

    for size in 1..=config.max_size {
        let terms = space.root(&mut store, size);
        let root = attach_query(&mut store, terms, ret);
        let mut seen = HashSet::new();
        let flow = if config.naive {
            search_naive(&mut store, root, size, config, &mut stats, &mut seen, &mut on_solution)
        } else {
            search(&mut store, root, size, config, &mut stats, &mut seen, &mut on_solution)
        };
        if flow.is_break() {
            break;
        }
        if stats.stopped_early {
            break;
        }
        stats.sizes_completed += 1;
    }
    Ok(stats)
}

/// All solutions up to the configured size.
pub fn synthesize_all(problem: &SynthesisProblem, config: &SynthConfig) -> Result<(Vec<Solution>, SynthStats), SynthError> {
    let mut out = Vec::new();
    let stats = synthesize(problem, config, |s| {
        out.push(s.clone());
        ControlFlow::Continue(())
    })?;
    Ok((out, stats))
}

fn remaining(config: &SynthConfig, stats: &SynthStats) -> Option<u64> {
    config.max_states.map(|m| m.saturating_sub(stats.states_explored))
}

fn offer(
    program: Program,
    size: usize,
    stats: &mut SynthStats,
    seen: &mut HashSet<Program>,
    on_solution: &mut impl FnMut(&Solution) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if !seen.insert(program.clone()) {
        return ControlFlow::Continue(());
    }
    stats.solutions += 1;
    on_solution(&Solution { program, size })
}

fn search(
    store: &mut Store,
    root: NodeId,
    size: usize,
    config: &SynthConfig,
    stats: &mut SynthStats,
    seen: &mut HashSet<Program>,
    on_solution: &mut impl FnMut(&Solution) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let root = if config.reduce_rounds > 0 {
        let (r, report) = store.reduce_fixpoint(root, config.reduce_rounds);
        stats.reduction_rounds += report.rounds_run;
        stats.edges_removed += report.edges_removed;
        r
    } else {
        root
    };
    let enum_config = EnumConfig {
        deadline: config.deadline,
        max_states: remaining(config, stats),
        audit: config.audit,
        ..EnumConfig::default()
    };
    let mut en = enumerate(store, root, enum_config);
    let mut flow = ControlFlow::Continue(());
    while let Some(st) = en.next() {
        match program_of_state(&st) {
            Some(p) => {
                flow = offer(p, size, stats, seen, on_solution);
                if flow.is_break() {
                    break;
                }
            }
            None => stats.unextracted += 1,
        }
    }
    let e = en.stats();
    stats.states_explored += e.states_explored;
    stats.dead_branches += e.dead_branches;
    stats.rule_applications += e.rule_applications;
    stats.measure_violations += e.measure_violations;
    stats.stopped_early |= e.stopped_early;
    flow
}

fn search_naive(
    store: &mut Store,
    root: NodeId,
    size: usize,
    config: &SynthConfig,
    stats: &mut SynthStats,
    seen: &mut HashSet<Program>,
    on_solution: &mut impl FnMut(&Solution) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let naive_config = NaiveConfig {
        unfold_depth: NAIVE_UNFOLD_DEPTH,
        deadline: config.deadline,
        max_states: remaining(config, stats),
        ..NaiveConfig::default()
    };
    let mut flow = ControlFlow::Continue(());
    let naive = enumerate_naive_each(store, root, naive_config, |t| {
        if let Some(p) = program_of_term(&t) {
            flow = offer(p, size, stats, seen, on_solution);
        }
        flow
    });
    stats.states_explored += naive.states_explored;
    stats.dead_branches += naive.rejected;
    stats.stopped_early |= naive.stopped_early;
    flow
}
