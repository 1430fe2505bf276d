//! Solving by enumeration and reading models off the enumerated states.

use std::fmt;
use std::time::Instant;

use ecta::enumerate::{enumerate, EnumConfig, EnumState, EnumStats, PTerm};
use ecta::{ReductionReport, Store};

use crate::dimacs::CnfFormula;
use crate::encode::{encode_cnf, EncodeError, Encoding, ASSIGNMENT, FALSE, TRUE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    True,
    False,
    /// The formula holds whichever value the variable takes.
    Irrelevant,
}

/// Values of variables `1..=n`, stored at index `i - 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(pub Vec<Value>);

impl Assignment {
    pub fn value(&self, var: u32) -> Value {
        self.0[var as usize - 1]
    }

    /// Every total assignment obtained by fixing the irrelevant variables both ways.
    pub fn completions(&self) -> Vec<Vec<bool>> {
        let mut out = vec![Vec::with_capacity(self.0.len())];
        for v in &self.0 {
            match v {
                Value::True => out.iter_mut().for_each(|a| a.push(true)),
                Value::False => out.iter_mut().for_each(|a| a.push(false)),
                Value::Irrelevant => {
                    let mut flipped = out.clone();
                    out.iter_mut().for_each(|a| a.push(true));
                    flipped.iter_mut().for_each(|a| a.push(false));
                    out.extend(flipped);
                }
            }
        }
        out
    }
}

/// DIMACS model line: `v 1 -2 *3 0`, with `*` marking irrelevant variables.
impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("v")?;
        for (i, v) in self.0.iter().enumerate() {
            match v {
                Value::True => write!(f, " {}", i + 1)?,
                Value::False => write!(f, " -{}", i + 1)?,
                Value::Irrelevant => write!(f, " *{}", i + 1)?,
            }
        }
        f.write_str(" 0")
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveConfig {
    pub all_models: bool,
    pub encoding: Encoding,
    /// Static reduction rounds before enumerating; 0 skips reduction.
    pub reduce_rounds: usize,
    pub deadline: Option<Instant>,
    /// Check the enumeration progress measure on every step.
    pub audit: bool,
}

#[derive(Clone, Debug, Default)]
pub struct SolveResult {
    /// Distinct models in the order found.
    pub models: Vec<Assignment>,
    pub stats: EnumStats,
    pub reduction: Option<ReductionReport>,
    /// False when the deadline cut the search short.
    pub complete: bool,
}

impl SolveResult {
    pub fn satisfiable(&self) -> bool {
        !self.models.is_empty()
    }
}

pub fn solve(f: &CnfFormula, config: &SolveConfig) -> Result<SolveResult, EncodeError> {
    if f.clauses.is_empty() {
        return Ok(SolveResult {
            models: vec![Assignment(vec![Value::Irrelevant; f.num_vars as usize])],
            complete: true,
            ..SolveResult::default()
        });
    }
    if f.clauses.iter().any(Vec::is_empty) {
        // An empty clause cannot be encoded; the formula is simply false.
        return Ok(SolveResult { complete: true, ..SolveResult::default() });
    }
    let mut store = Store::new();
    let mut root = encode_cnf(&mut store, f, config.encoding)?;
    let mut reduction = None;
    if config.reduce_rounds > 0 {
        let (r, report) = store.reduce_fixpoint(root, config.reduce_rounds);
        root = r;
        reduction = Some(report);
    }
    let enum_config = EnumConfig {
        limit: if config.all_models { usize::MAX } else { 1 },
        deadline: config.deadline,
        audit: config.audit,
        ..EnumConfig::default()
    };
    let mut models: Vec<Assignment> = Vec::new();
    let mut it = enumerate(&mut store, root, enum_config);
    while let Some(st) = it.next() {
        let m = read_model(it.store(), &st, f.num_vars);
        if !models.contains(&m) {
            models.push(m);
        }
    }
    let stats = it.stats();
    Ok(SolveResult { models, stats, reduction, complete: !stats.stopped_early })
}

/// Reads the assignment under the first clause of a fully enumerated state.
pub fn read_model(store: &Store, st: &EnumState, num_vars: u32) -> Assignment {
    let root = resolve(st, st.binding(ecta::enumerate::VarId::ROOT).expect("root is bound"));
    let clause = child(st, root, 0);
    let assn = child(st, clause, 0);
    let mut values = Vec::with_capacity(num_vars as usize);
    for i in 0..num_vars as usize {
        values.push(match resolve(st, child_ref(assn, i)) {
            PTerm::App(s, _) if s.name() == TRUE => Value::True,
            PTerm::App(s, _) if s.name() == FALSE => Value::False,
            PTerm::UNode(n, _) => {
                let edges = store.edges(*n);
                match edges {
                    [e] if e.symbol().name() == TRUE => Value::True,
                    [e] if e.symbol().name() == FALSE => Value::False,
                    _ => Value::Irrelevant,
                }
            }
            other => panic!("unexpected value {other:?} in an assignment"),
        });
    }
    debug_assert!(matches!(assn, PTerm::App(s, _) if s.name() == ASSIGNMENT) || num_vars == 0);
    Assignment(values)
}

fn resolve<'a>(st: &'a EnumState, mut t: &'a PTerm) -> &'a PTerm {
    while let PTerm::Var(v) = t {
        t = st.binding(*v).expect("fully enumerated states bind every variable they mention");
    }
    t
}

fn child_ref(t: &PTerm, i: usize) -> &PTerm {
    match t {
        PTerm::App(_, ch) => &ch[i],
        other => panic!("expected a constructor, found {other:?}"),
    }
}

fn child<'a>(st: &'a EnumState, t: &'a PTerm, i: usize) -> &'a PTerm {
    resolve(st, child_ref(t, i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn models(f: &CnfFormula, encoding: Encoding) -> Vec<String> {
        let r = solve(f, &SolveConfig { all_models: true, encoding, ..SolveConfig::default() }).unwrap();
        let mut m: Vec<String> = r.models.iter().map(|a| a.to_string()).collect();
        m.sort();
        m
    }

    #[test]
    fn exclusive_or_has_two_models() {
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![-1, -2]]);
        for enc in [Encoding::PerLiteral, Encoding::FirstTrue] {
            assert_eq!(models(&f, enc), ["v -1 2 0", "v 1 -2 0"]);
        }
    }

    #[test]
    fn unit_and_trivial_formulas() {
        let f = CnfFormula::new(2, vec![vec![1]]);
        assert_eq!(models(&f, Encoding::PerLiteral), ["v 1 *2 0"]);
        let f = CnfFormula::new(2, vec![]);
        assert_eq!(models(&f, Encoding::PerLiteral), ["v *1 *2 0"]);
        let f = CnfFormula::new(1, vec![vec![1], vec![-1]]);
        assert!(models(&f, Encoding::PerLiteral).is_empty());
        let f = CnfFormula::new(1, vec![vec![1], vec![]]);
        assert!(models(&f, Encoding::PerLiteral).is_empty());
    }

    #[test]
    fn conflicts_surface_as_dead_branches() {
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![-1, -2]]);
        let r = solve(&f, &SolveConfig { all_models: true, ..SolveConfig::default() }).unwrap();
        // x1 then ¬x1, and x2 then ¬x2, each fail on the value intersection.
        assert_eq!(r.stats.dead_branches, 2);
        assert_eq!(r.stats.measure_violations, 0);
    }
}
