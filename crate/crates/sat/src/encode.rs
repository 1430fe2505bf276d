//! Formulas as automata: one `∧` transition over the clauses, each clause a
//! choice of the literal that satisfies it.
//!
//! A literal transition has children `(assignment, value)` and equates the
//! value with its variable's slot in its local copy of the assignment. The
//! `∧` transition equates each variable's slot across all clauses.

use ecta::{Edge, NodeId, Path, Pcs, Pec, Store, Symbol};
use thiserror::Error;

use crate::dimacs::CnfFormula;

/// Which literal transitions a clause offers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Encoding {
    /// A literal transition only demands that its literal is true. A model
    /// with several true literals in a clause is found once per literal.
    #[default]
    PerLiteral,
    /// The transition for a clause's `j`th literal also demands that the
    /// earlier literals are false, so every model is reached along one path.
    FirstTrue,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("clause {index} is empty")]
    EmptyClause { index: usize },
    #[error("literal {literal} is out of range for {num_vars} variables")]
    OutOfRange { literal: i32, num_vars: u32 },
}

pub const CONJUNCTION: &str = "∧";
pub const ASSIGNMENT: &str = "assignment";
pub const TRUE: &str = "true";
pub const FALSE: &str = "false";

/// Name of a literal transition, `x3` or `¬x3`.
pub fn literal_name(lit: i32) -> String {
    if lit > 0 {
        format!("x{lit}")
    } else {
        format!("¬x{}", -lit)
    }
}

fn slot(var: u32) -> u32 {
    var - 1
}

/// Builds the automaton for `f`. The formula must have at least one clause.
pub fn encode_cnf(store: &mut Store, f: &CnfFormula, encoding: Encoding) -> Result<NodeId, EncodeError> {
    for (index, c) in f.clauses.iter().enumerate() {
        if c.is_empty() {
            return Err(EncodeError::EmptyClause { index });
        }
        if let Some(&literal) = c.iter().find(|l| l.unsigned_abs() > f.num_vars || **l == 0) {
            return Err(EncodeError::OutOfRange { literal, num_vars: f.num_vars });
        }
    }
    let t = store.leaf(TRUE);
    let fl = store.leaf(FALSE);
    let boolean = store.union(t, fl);
    let assn_edge = Edge::new(Symbol::new(ASSIGNMENT, f.num_vars as usize), vec![boolean; f.num_vars as usize], Pcs::empty())
        .expect("arity matches");
    let assn = store.mk_node(vec![assn_edge]);
    let value = |positive: bool| if positive { t } else { fl };

    let mut clause_nodes = Vec::with_capacity(f.clauses.len());
    for c in &f.clauses {
        let mut lits: Vec<i32> = Vec::new();
        for &l in c {
            if !lits.contains(&l) {
                lits.push(l);
            }
        }
        let mut edges = Vec::new();
        for (j, &lit) in lits.iter().enumerate() {
            let earlier: &[i32] = match encoding {
                Encoding::PerLiteral => &[],
                Encoding::FirstTrue => &lits[..j],
            };
            let mut children = vec![assn, value(lit > 0)];
            let mut classes = vec![eq(slot(lit.unsigned_abs()), 1)];
            for (k, &e) in earlier.iter().enumerate() {
                children.push(value(e < 0));
                classes.push(eq(slot(e.unsigned_abs()), 2 + k as u32));
            }
            let symbol = Symbol::new(&literal_name(lit), children.len());
            if let Some(e) = store.mk_edge(symbol, children, Pcs::normalize(classes)).expect("arity matches") {
                edges.push(e);
            }
        }
        clause_nodes.push(store.mk_node(edges));
    }

    let mut classes = Vec::new();
    if f.clauses.len() > 1 {
        for v in 1..=f.num_vars {
            let paths = (0..f.clauses.len() as u32).map(|k| Path::new(vec![k, 0, slot(v)]));
            classes.push(Pec::new(paths));
        }
    }
    let symbol = Symbol::new(CONJUNCTION, clause_nodes.len());
    let top = store.mk_edge(symbol, clause_nodes, Pcs::normalize(classes)).expect("arity matches");
    Ok(store.node_of([top]))
}

/// `{0.slot = child}` on a literal transition.
fn eq(slot: u32, child: u32) -> Pec {
    Pec::new([Path::new(vec![0, slot]), Path::new(vec![child])])
}
