//! Seeded random automata for property tests and the command line.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::pcs::{Pcs, Pec};
use crate::store::{NodeId, Store};
use crate::term::{Path, Symbol};

#[derive(Clone, Debug)]
pub struct GenConfig {
    /// Upper bound on the number of states built.
    pub max_nodes: usize,
    /// Upper bound on the number of constraint classes over all edges.
    pub max_pecs: usize,
    /// Bound on the height of every accepted term, ignoring recursion.
    pub max_height: usize,
    /// Offer an unconstrained recursive state as a child.
    pub recursive: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_nodes: 7, max_pecs: 3, max_height: 4, recursive: false }
    }
}

const SYMBOLS: [&[&str]; 3] = [&["a", "b", "c"], &["f", "g"], &["h", "k"]];

/// A random automaton. Constraint paths may run past a child's arity, which
/// exercises the undefined-subterm case.
pub fn random_ecta(store: &mut Store, rng: &mut impl Rng, config: &GenConfig) -> NodeId {
    let count = rng.gen_range(1..=config.max_nodes.max(1));
    // (node, height) pairs available as children.
    let mut built: Vec<(NodeId, usize)> = Vec::new();
    if config.recursive {
        let x = store.mk_var(0);
        let s = store.edge("s", vec![x], Pcs::empty());
        let z = store.edge("z", vec![], Pcs::empty());
        let body = store.node_of([s, z]);
        built.push((store.mk_mu(body), 1));
    }
    let mut pecs_left = config.max_pecs;
    let mut last = NodeId::BOTTOM;
    for _ in 0..count {
        let usable: Vec<(NodeId, usize)> =
            built.iter().copied().filter(|&(_, h)| h < config.max_height).collect();
        let mut edges = Vec::new();
        let mut height = 1;
        for _ in 0..rng.gen_range(1..=3) {
            let arity = if usable.is_empty() { 0 } else { rng.gen_range(0..=2) };
            let name = SYMBOLS[arity].choose(rng).expect("nonempty alphabet");
            let children: Vec<(NodeId, usize)> =
                (0..arity).map(|_| *usable.choose(rng).expect("checked nonempty")).collect();
            let mut constraints = Pcs::empty();
            if arity > 0 && pecs_left > 0 && rng.gen_bool(0.5) {
                pecs_left -= 1;
                constraints = Pcs::normalize([random_pec(rng, arity)]);
            }
            let ids: Vec<NodeId> = children.iter().map(|c| c.0).collect();
            let symbol = Symbol::new(name, arity);
            if let Some(e) = store.mk_edge(symbol, ids, constraints).expect("arity matches") {
                height = height.max(1 + children.iter().map(|c| c.1).max().unwrap_or(0));
                edges.push(e);
            }
        }
        last = store.mk_node(edges);
        if last != NodeId::BOTTOM {
            built.push((last, height));
        }
    }
    last
}

fn random_pec(rng: &mut impl Rng, arity: usize) -> Pec {
    let size = if rng.gen_bool(0.2) { 3 } else { 2 };
    let mut paths = Vec::new();
    while paths.len() < size {
        let mut p = vec![rng.gen_range(0..arity as u32)];
        if rng.gen_bool(0.4) {
            p.push(rng.gen_range(0..2));
        }
        let p = Path::new(p);
        if !paths.contains(&p) {
            paths.push(p);
        }
    }
    Pec::new(paths)
}
