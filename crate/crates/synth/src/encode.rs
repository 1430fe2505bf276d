//! Terms and their types as one automaton.
//!
//! Every term transition has its type as child 0. A component is
//! `name(type)`; an application is `app(type, tag, fun, arg)`. Function
//! types are `->(tag, in, out)` where `tag` is the nullary `(->)`, which
//! appears nowhere else. Type variables of a component become the recursive
//! `any` node, and the positions of one variable are joined in one class.
//!
//! With [`ArrowEncoding::Untagged`] the tag child is left out everywhere:
//! arrows are `->(in, out)` and applications `app(type, fun, arg)`.

use std::collections::{BTreeMap, BTreeSet};

use ecta::{Edge, NodeId, Path, Pcs, Pec, Store};

use crate::library::{Component, Library};
use crate::types::TypeExpr;

pub const APP: &str = "app";
pub const QUERY: &str = "query";
pub const ARROW: &str = "->";
pub const TAG: &str = "(->)";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ArrowEncoding {
    #[default]
    Tagged,
    /// Drops the tag. Any binary constructor then passes for a function.
    Untagged,
}

impl ArrowEncoding {
    fn in_index(self) -> u32 {
        match self {
            ArrowEncoding::Tagged => 1,
            ArrowEncoding::Untagged => 0,
        }
    }

    fn out_index(self) -> u32 {
        self.in_index() + 1
    }

    /// Child indices of an application: `(fun, arg)`.
    fn app_children(self) -> (u32, u32) {
        match self {
            ArrowEncoding::Tagged => (2, 3),
            ArrowEncoding::Untagged => (1, 2),
        }
    }
}

/// Type constructors with their arities, and whether functions occur.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub constructors: BTreeSet<(String, usize)>,
    pub arrows: bool,
}

impl Signature {
    /// Constructors of the library and of the skolemized query.
    pub fn of(library: &Library, query: &TypeExpr) -> Signature {
        let mut sig = Signature::default();
        for c in library.components() {
            sig.add(&c.scheme);
        }
        sig.add(&query.skolemize());
        sig
    }

    /// A component whose result is a bare variable can be used as a
    /// function, so that also needs arrows.
    pub fn add(&mut self, t: &TypeExpr) {
        t.constructors(&mut self.constructors);
        self.arrows |= t.has_arrow() || matches!(t.spine().1, TypeExpr::Var(_));
    }
}

fn pcs(classes: impl IntoIterator<Item = Vec<Path>>) -> Pcs {
    Pcs::normalize(classes.into_iter().filter(|c| c.len() > 1).map(Pec::new))
}

fn path(ix: &[u32]) -> Path {
    Path::new(ix.to_vec())
}

/// Shared nodes of one encoding.
#[derive(Clone, Copy, Debug)]
pub struct TypeNodes {
    pub any: NodeId,
    pub tag: NodeId,
    pub arrows: ArrowEncoding,
}

impl TypeNodes {
    pub fn new(store: &mut Store, sig: &Signature, arrows: ArrowEncoding) -> TypeNodes {
        let tag = store.leaf(TAG);
        let any = build_any_node(store, sig, arrows);
        TypeNodes { any, tag, arrows }
    }

    fn arrow_children(&self, from: NodeId, to: NodeId) -> Vec<NodeId> {
        match self.arrows {
            ArrowEncoding::Tagged => vec![self.tag, from, to],
            ArrowEncoding::Untagged => vec![from, to],
        }
    }

    /// Encodes `t` with its variables as `any`, recording the paths of each
    /// variable's occurrences.
    pub fn encode_type(&self, store: &mut Store, t: &TypeExpr) -> (NodeId, BTreeMap<String, Vec<Path>>) {
        let mut vars = BTreeMap::new();
        let mut at = Vec::new();
        let n = self.encode_at(store, t, &mut at, &mut vars);
        (n, vars)
    }

    fn encode_at(
        &self,
        store: &mut Store,
        t: &TypeExpr,
        at: &mut Vec<u32>,
        vars: &mut BTreeMap<String, Vec<Path>>,
    ) -> NodeId {
        match t {
            TypeExpr::Var(v) => {
                vars.entry(v.clone()).or_default().push(path(at));
                self.any
            }
            TypeExpr::Con(c, args) => {
                let mut children = Vec::with_capacity(args.len());
                for (i, a) in args.iter().enumerate() {
                    at.push(i as u32);
                    children.push(self.encode_at(store, a, at, vars));
                    at.pop();
                }
                let e = store.edge(c, children, Pcs::empty());
                store.node_of([e])
            }
            TypeExpr::Arrow(a, b) => {
                at.push(self.arrows.in_index());
                let from = self.encode_at(store, a, at, vars);
                at.pop();
                at.push(self.arrows.out_index());
                let to = self.encode_at(store, b, at, vars);
                at.pop();
                let e = store.edge(ARROW, self.arrow_children(from, to), Pcs::empty());
                store.node_of([e])
            }
        }
    }

    /// `name(type)`, with one class per type variable occurring twice or more.
    pub fn encode_component(&self, store: &mut Store, comp: &Component) -> Option<Edge> {
        let (ty, vars) = self.encode_type(store, &comp.scheme);
        let classes = vars.into_values().map(|ps| ps.into_iter().map(|p| p.prepend(0)).collect());
        store.edge(&comp.name, vec![ty], pcs(classes))
    }

    /// Applications of terms in `fun` to terms in `arg`.
    pub fn app_edge(&self, store: &mut Store, fun: NodeId, arg: NodeId) -> Option<Edge> {
        let (f, a) = self.arrows.app_children();
        let (i, o) = (self.arrows.in_index(), self.arrows.out_index());
        let mut classes = vec![vec![path(&[a, 0]), path(&[f, 0, i])], vec![path(&[0]), path(&[f, 0, o])]];
        let children = match self.arrows {
            ArrowEncoding::Tagged => {
                classes.push(vec![path(&[1]), path(&[f, 0, 0])]);
                vec![self.any, self.tag, fun, arg]
            }
            ArrowEncoding::Untagged => vec![self.any, fun, arg],
        };
        store.edge(APP, children, pcs(classes))
    }
}

/// All types over `sig`: a recursive node with one transition per
/// constructor, each argument looping back.
pub fn build_any_node(store: &mut Store, sig: &Signature, arrows: ArrowEncoding) -> NodeId {
    let back = store.mk_var(0);
    let mut edges = Vec::new();
    for (name, arity) in &sig.constructors {
        edges.push(store.edge(name, vec![back; *arity], Pcs::empty()));
    }
    if sig.arrows {
        let children = match arrows {
            ArrowEncoding::Tagged => vec![store.leaf(TAG), back, back],
            ArrowEncoding::Untagged => vec![back, back],
        };
        edges.push(store.edge(ARROW, children, Pcs::empty()));
    }
    let body = store.node_of(edges);
    store.mk_mu(body)
}

/// `query(term, type)` restricting the terms of `space` to types in `ty`.
pub fn attach_query(store: &mut Store, space: NodeId, ty: NodeId) -> NodeId {
    let e = store.edge(QUERY, vec![space, ty], pcs([vec![path(&[0, 0]), path(&[1])]]));
    store.node_of([e])
}

/// Sets of query inputs, as bit masks over input positions.
pub type InputSet = u32;

/// Sized term nodes over a library and query inputs.
///
/// With relevancy the node for `(size, set)` holds the terms mentioning
/// exactly the inputs in `set`. Without it every node is indexed by the
/// empty set and inputs behave like components.
#[derive(Clone, Debug)]
pub struct TermSpace {
    pub types: TypeNodes,
    relevancy: bool,
    components: NodeId,
    inputs: Vec<NodeId>,
    sizes: Vec<Vec<NodeId>>,
}

/// Relevancy tracks inputs in a bit mask.
pub const MAX_RELEVANT_INPUTS: usize = 16;

impl TermSpace {
    /// Inputs must be ground. Panics with relevancy and more than
    /// [`MAX_RELEVANT_INPUTS`] inputs.
    pub fn new(store: &mut Store, types: TypeNodes, library: &Library, inputs: &[Component], relevancy: bool) -> TermSpace {
        assert!(!relevancy || inputs.len() <= MAX_RELEVANT_INPUTS, "too many inputs for relevancy");
        let mut edges: Vec<Option<Edge>> = library.components().iter().map(|c| types.encode_component(store, c)).collect();
        let mut input_nodes = Vec::new();
        if relevancy {
            for c in inputs {
                let e = types.encode_component(store, c);
                input_nodes.push(store.node_of([e]));
            }
        } else {
            edges.extend(inputs.iter().map(|c| types.encode_component(store, c)));
        }
        let components = store.node_of(edges);
        TermSpace { types, relevancy, components, inputs: input_nodes, sizes: Vec::new() }
    }

    pub fn relevancy(&self) -> bool {
        self.relevancy
    }

    /// The set naming every input.
    pub fn full_set(&self) -> InputSet {
        ((1u64 << self.inputs.len()) - 1) as InputSet
    }

    /// Terms of `size` mentioning exactly `set`.
    pub fn term(&mut self, store: &mut Store, size: usize, set: InputSet) -> NodeId {
        assert!(size >= 1, "terms have size at least one");
        while self.sizes.len() < size {
            let n = self.sizes.len() + 1;
            let row = (0..=self.full_set()).map(|s| self.build(store, n, s)).collect();
            self.sizes.push(row);
        }
        self.sizes[size - 1][set as usize]
    }

    /// Terms of `size` mentioning every input.
    pub fn root(&mut self, store: &mut Store, size: usize) -> NodeId {
        let full = self.full_set();
        self.term(store, size, full)
    }

    fn build(&mut self, store: &mut Store, n: usize, set: InputSet) -> NodeId {
        if n == 1 {
            return match set.count_ones() {
                0 => self.components,
                1 => self.inputs[set.trailing_zeros() as usize],
                _ => NodeId::BOTTOM,
            };
        }
        let subsets = submasks(set);
        let mut edges = Vec::new();
        for i in 1..n {
            for &p in &subsets {
                for &q in &subsets {
                    if p | q == set {
                        let (fun, arg) = (self.sizes[i - 1][p as usize], self.sizes[n - i - 1][q as usize]);
                        edges.push(self.types.app_edge(store, fun, arg));
                    }
                }
            }
        }
        store.node_of(edges)
    }

    /// The size-indexed nodes built so far, keyed by `(size, set)`.
    pub fn nodes(&self) -> BTreeMap<(usize, InputSet), NodeId> {
        let mut out = BTreeMap::new();
        for (i, row) in self.sizes.iter().enumerate() {
            for (s, &n) in row.iter().enumerate() {
                out.insert((i + 1, s as InputSet), n);
            }
        }
        out
    }
}

fn submasks(set: InputSet) -> Vec<InputSet> {
    let mut out = Vec::new();
    let mut p = set;
    loop {
        out.push(p);
        if p == 0 {
            return out;
        }
        p = (p - 1) & set;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::parse_library;
    use crate::types::parse_type;
    use ecta::{Node, Term};

    fn types_for(store: &mut Store, lib: &str) -> (Library, TypeNodes) {
        let lib = parse_library(lib).unwrap();
        let sig = Signature::of(&lib, &parse_type("Int").unwrap());
        let types = TypeNodes::new(store, &sig, ArrowEncoding::Tagged);
        (lib, types)
    }

    fn ty(s: &str) -> Term {
        fn go(t: &TypeExpr) -> Term {
            match t {
                TypeExpr::Var(v) => Term::leaf(v),
                TypeExpr::Con(c, args) => Term::app(c, args.iter().map(go).collect()),
                TypeExpr::Arrow(a, b) => Term::app(ARROW, vec![Term::leaf(TAG), go(a), go(b)]),
            }
        }
        go(&parse_type(s).unwrap())
    }

    #[test]
    fn any_node_has_one_edge_per_constructor() {
        let mut s = Store::new();
        let (_, types) = types_for(&mut s, "xs :: [Int]\nm :: Maybe Int -> Int");
        let Node::Mu(body) = s.node(types.any).clone() else { panic!("any is recursive") };
        let names: Vec<String> = s.edges(body).iter().map(|e| e.symbol().to_string()).collect();
        assert_eq!(names.len(), 4);
        for c in ["Int", "Maybe", ARROW] {
            assert!(names.iter().any(|n| n.starts_with(c)), "{c} in {names:?}");
        }
        let within = s.denote_bounded(types.any, 3);
        for t in ["Int", "[Int]", "Maybe [Int]", "Int -> Int"] {
            assert!(within.contains(&ty(t)), "{t}");
        }
        assert!(!within.contains(&ty("Maybe (Maybe [Int])")));
    }

    #[test]
    fn nullary_constructors_give_a_finite_node() {
        let mut s = Store::new();
        let (_, types) = types_for(&mut s, "b :: Bool\nc :: Char");
        assert!(!s.is_mu(types.any));
        assert_eq!(s.denote_bounded(types.any, 5).len(), 3);
    }

    fn classes(e: &Edge) -> Vec<String> {
        e.constraints().classes().iter().map(|c| format!("{c:?}")).collect()
    }

    #[test]
    fn component_variables_are_tied() {
        let mut s = Store::new();
        let (lib, types) = types_for(&mut s, "listToMaybe :: [a] -> Maybe a\nmap :: (a -> b) -> [a] -> [b]\nnot :: Bool -> Bool");
        let ltm = types.encode_component(&mut s, lib.get("listToMaybe").unwrap()).unwrap();
        let expected: Pcs = "0.1.0=0.2.0".parse().unwrap();
        assert_eq!(ltm.constraints(), &expected);
        let map = types.encode_component(&mut s, lib.get("map").unwrap()).unwrap();
        let expected: Pcs = "0.1.1=0.2.1.0;0.1.2=0.2.2.0".parse().unwrap();
        assert_eq!(map.constraints(), &expected, "{:?}", classes(&map));
        let not = types.encode_component(&mut s, lib.get("not").unwrap()).unwrap();
        assert!(not.constraints().is_empty());
    }

    fn programs(store: &mut Store, n: NodeId, depth: usize) -> BTreeSet<String> {
        use crate::program::program_of_term;
        store.denote_bounded(n, depth).iter().filter_map(program_of_term).map(|p| p.to_string()).collect()
    }

    fn enumerated_programs(store: &mut Store, n: NodeId) -> BTreeSet<String> {
        use crate::program::program_of_state;
        use ecta::enumerate::{enumerate, EnumConfig};
        enumerate(store, n, EnumConfig::default()).map(|st| program_of_state(&st).unwrap().to_string()).collect()
    }

    /// `x: Int`, `y: Char`, `f: Bool -> Bool`, `g: Int -> Bool`, `h: Char -> Int`.
    const MONOMORPHIC: &str = "x :: Int\ny :: Char\nf :: Bool -> Bool\ng :: Int -> Bool\nh :: Char -> Int";

    #[test]
    fn size_two_terms_are_the_well_typed_applications() {
        let mut s = Store::new();
        let (lib, types) = types_for(&mut s, MONOMORPHIC);
        let mut space = TermSpace::new(&mut s, types, &lib, &[], false);
        let one = space.term(&mut s, 1, 0);
        assert_eq!(s.edges(one).len(), 5);
        let two = space.term(&mut s, 2, 0);
        let want: BTreeSet<String> = ["g x", "h y"].map(String::from).into();
        assert_eq!(programs(&mut s, two, 4), want);
        assert_eq!(enumerated_programs(&mut s, two), want);
    }

    #[test]
    fn query_keeps_the_requested_type() {
        let mut s = Store::new();
        let (lib, types) = types_for(&mut s, MONOMORPHIC);
        let mut space = TermSpace::new(&mut s, types, &lib, &[], false);
        let two = space.term(&mut s, 2, 0);
        let (boolean, _) = types.encode_type(&mut s, &parse_type("Bool").unwrap());
        let q = attach_query(&mut s, two, boolean);
        assert_eq!(programs(&mut s, q, 5), ["g x".to_string()].into());
        let (reduced, _) = s.reduce_fixpoint(q, 30);
        let skeleton = s.skeleton(reduced);
        assert_eq!(programs(&mut s, skeleton, 5), ["g x".to_string()].into());
    }

    #[test]
    fn polymorphic_identity_with_a_union_query() {
        let mut s = Store::new();
        let (lib, types) = types_for(&mut s, "x :: Int\ny :: Char\ng :: a -> a\nh :: Char -> Bool");
        let mut space = TermSpace::new(&mut s, types, &lib, &[], false);
        let two = space.term(&mut s, 2, 0);
        let (int, _) = types.encode_type(&mut s, &parse_type("Int").unwrap());
        let (boolean, _) = types.encode_type(&mut s, &parse_type("Bool").unwrap());
        let wanted = s.union(int, boolean);
        let q = attach_query(&mut s, two, wanted);
        assert_eq!(enumerated_programs(&mut s, q), ["g x".to_string(), "h y".to_string()].into());
    }

    #[test]
    fn relevancy_splits_each_size_by_input_set() {
        let mut s = Store::new();
        let (lib, types) = types_for(&mut s, "f :: Int -> Int -> Int");
        let inputs = vec![Component::new("p", parse_type("Int").unwrap()), Component::new("q", parse_type("Int").unwrap())];
        let mut space = TermSpace::new(&mut s, types, &lib, &inputs, true);
        assert_eq!(space.full_set(), 3);
        space.term(&mut s, 3, 0);
        let nodes = space.nodes();
        assert_eq!(nodes.len(), 12);
        assert_eq!(nodes.keys().filter(|(size, _)| *size == 2).count(), 4);
        // Size one holds the components and one node per input.
        assert_eq!(nodes[&(1, 3)], NodeId::BOTTOM);
        let root = space.root(&mut s, 3);
        assert_eq!(root, nodes[&(3, 3)]);
        assert_eq!(enumerated_programs(&mut s, root), ["f p q".to_string(), "f q p".to_string()].into());
        let only_p = enumerated_programs(&mut s, nodes[&(3, 1)]);
        assert_eq!(only_p, ["f p p".to_string()].into());
    }
}
