//! Small hand-built automata used by tests, examples and the command line.

use crate::pcs::Pcs;
use crate::store::{NodeId, Store};

fn pcs(s: &str) -> Pcs {
    s.parse().expect("fixture constraints are well formed")
}

fn leaves(store: &mut Store, names: &[&str]) -> NodeId {
    let edges: Vec<_> = names.iter().map(|n| store.edge(n, vec![], Pcs::empty())).collect();
    store.node_of(edges)
}

/// `+(f(t), f(t))` for `t` in `{a, b, c}`: a sum whose two operands must match.
pub fn duplicated_sum(store: &mut Store) -> NodeId {
    let atoms = leaves(store, &["a", "b", "c"]);
    let e = store.edge("f", vec![atoms], Pcs::empty());
    let wrapped = store.node_of([e]);
    let e = store.edge("+", vec![wrapped, wrapped], pcs("0.0=1.0"));
    store.node_of([e])
}

/// Type nodes for `Int`, `Char` and `Bool`, in that order.
fn base_types(store: &mut Store) -> [NodeId; 3] {
    [store.leaf("Int"), store.leaf("Char"), store.leaf("Bool")]
}

/// Scalars `x: Int`, `y: Char` and unary functions `f: Bool -> Bool`,
/// `g: Int -> Bool`, `h: Char -> Int`. Scalars are `name(type)`, functions
/// `name(argument type, return type)`.
fn simple_environment(store: &mut Store) -> (NodeId, NodeId) {
    let [int, chr, bool_] = base_types(store);
    let x = store.edge("x", vec![int], Pcs::empty());
    let y = store.edge("y", vec![chr], Pcs::empty());
    let scalar = store.node_of([x, y]);
    let f = store.edge("f", vec![bool_, bool_], Pcs::empty());
    let g = store.edge("g", vec![int, bool_], Pcs::empty());
    let h = store.edge("h", vec![chr, int], Pcs::empty());
    let unary = store.node_of([f, g, h]);
    (unary, scalar)
}

/// All well-typed applications of a unary function to a scalar in the simple
/// environment: `app(fun, arg)` with the function's argument type equal to
/// the scalar's type. Accepts exactly `g x` and `h y`.
pub fn typed_application(store: &mut Store) -> NodeId {
    let (unary, scalar) = simple_environment(store);
    let e = store.edge("app", vec![unary, scalar], pcs("0.0=1.0"));
    store.node_of([e])
}

/// The same applications annotated with their result type,
/// `app(fun, arg, type)`, wrapped in `query(term, type)` asking for `Bool`.
/// Accepts only `g x`.
pub fn typed_application_query(store: &mut Store) -> NodeId {
    let (unary, scalar) = simple_environment(store);
    let [int, chr, bool_] = base_types(store);
    let any_base = store.union_all([int, chr, bool_]);
    let e = store.edge("app", vec![unary, scalar, any_base], pcs("0.0=1.0;2=0.1"));
    let app = store.node_of([e]);
    let e = store.edge("query", vec![app, bool_], pcs("0.2=1"));
    store.node_of([e])
}

/// Applications over `x: Int`, `y: Char`, `g: a -> a`, `h: Char -> Bool`,
/// queried at `Int` or `Bool`. The polymorphic `g` is `g(base, base)` with
/// its two types equated. Accepts `g x` and `h y`.
pub fn polymorphic_query(store: &mut Store) -> NodeId {
    let [int, chr, bool_] = base_types(store);
    let any_base = store.union_all([int, chr, bool_]);
    let x = store.edge("x", vec![int], Pcs::empty());
    let y = store.edge("y", vec![chr], Pcs::empty());
    let scalar = store.node_of([x, y]);
    let g = store.edge("g", vec![any_base, any_base], pcs("0=1"));
    let h = store.edge("h", vec![chr, bool_], Pcs::empty());
    let unary = store.node_of([g, h]);
    let e = store.edge("app", vec![unary, scalar, any_base], pcs("0.0=1.0;2=0.1"));
    let app = store.node_of([e]);
    let wanted = store.union_all([int, bool_]);
    let e = store.edge("query", vec![app, wanted], pcs("0.2=1"));
    store.node_of([e])
}

/// Binary trees `t(l, r)` of the given depth whose two subtrees are equal
/// at every level, with leaves `x` or `y`. Accepts two terms, each of size
/// `2^(depth+1) - 1`.
pub fn perfect_tree(store: &mut Store, depth: u32) -> NodeId {
    let mut n = leaves(store, &["x", "y"]);
    for _ in 0..depth {
        let e = store.edge("t", vec![n, n], pcs("0=1"));
        n = store.node_of([e]);
    }
    n
}

/// Natural numbers `S(..S(Z))`, as a recursive node.
pub fn nat(store: &mut Store) -> NodeId {
    let x = store.mk_var(0);
    let s = store.edge("S", vec![x], Pcs::empty());
    let z = store.edge("Z", vec![], Pcs::empty());
    let body = store.node_of([s, z]);
    store.mk_mu(body)
}

/// Pairs `pair(x, y)` of naturals with `y = x + 2`.
pub fn offset_pair(store: &mut Store) -> NodeId {
    let n = nat(store);
    let e = store.edge("S", vec![n], Pcs::empty());
    let s1 = store.node_of([e]);
    let e = store.edge("S", vec![s1], Pcs::empty());
    let s2 = store.node_of([e]);
    let e = store.edge("pair", vec![n, s2], pcs("0=1.0.0"));
    store.node_of([e])
}

/// Two nodes over types `{Int, Bool}` sharing the symbol `g`:
/// `{f(T, T), g(T, Int)}` and `{g(T, T) where 0=1, h(T, T)}`.
pub fn overlapping_pair(store: &mut Store) -> (NodeId, NodeId) {
    let int = store.leaf("Int");
    let bool_ = store.leaf("Bool");
    let t = store.union(int, bool_);
    let f = store.edge("f", vec![t, t], Pcs::empty());
    let g1 = store.edge("g", vec![t, int], Pcs::empty());
    let n1 = store.node_of([f, g1]);
    let g2 = store.edge("g", vec![t, t], pcs("0=1"));
    let h = store.edge("h", vec![t, t], Pcs::empty());
    let n2 = store.node_of([g2, h]);
    (n1, n2)
}

/// `w(p, q, r)` with all three children equated, where the children accept
/// overlapping but different sets of leaves. Only `w(b, b, b)` survives.
pub fn three_way_equality(store: &mut Store) -> NodeId {
    let p = leaves(store, &["a", "b", "c"]);
    let q = leaves(store, &["b", "c", "d"]);
    let r = leaves(store, &["a", "b", "d"]);
    let e = store.edge("w", vec![p, q, r], pcs("0=1=2"));
    store.node_of([e])
}
