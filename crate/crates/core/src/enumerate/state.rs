//! Enumeration states: variables bound to partially enumerated terms.

use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashSet;

use crate::pcs::Pec;
use crate::store::{NodeId, Store};
use crate::term::{Path, Symbol, Term};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(u32);

impl VarId {
    /// The variable holding the term being enumerated.
    pub const ROOT: VarId = VarId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Part of a constraint that still has to hold below a u-node: the subterms
/// at `pec` must equal the value of `var`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Fragment {
    pub pec: Pec,
    pub var: VarId,
}

impl Fragment {
    pub fn is_root(&self) -> bool {
        self.pec.paths().iter().any(Path::is_root)
    }
}

/// A partially enumerated term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PTerm {
    Var(VarId),
    App(Symbol, Vec<PTerm>),
    /// A node not yet enumerated, with the fragments restricting it.
    UNode(NodeId, Vec<Fragment>),
}

impl PTerm {
    pub fn unode(n: NodeId) -> PTerm {
        PTerm::UNode(n, Vec::new())
    }

    pub fn get(&self, pos: &[usize]) -> Option<&PTerm> {
        let mut t = self;
        for &i in pos {
            match t {
                PTerm::App(_, ch) => t = ch.get(i)?,
                _ => return None,
            }
        }
        Some(t)
    }

    pub fn get_mut(&mut self, pos: &[usize]) -> Option<&mut PTerm> {
        let mut t = self;
        for &i in pos {
            match t {
                PTerm::App(_, ch) => t = ch.get_mut(i)?,
                _ => return None,
            }
        }
        Some(t)
    }

    /// Calls `f` on every subterm in preorder, left to right, with its position.
    pub fn visit(&self, f: &mut impl FnMut(&[usize], &PTerm)) {
        fn go(t: &PTerm, pos: &mut Vec<usize>, f: &mut impl FnMut(&[usize], &PTerm)) {
            f(pos, t);
            if let PTerm::App(_, ch) = t {
                for (i, c) in ch.iter().enumerate() {
                    pos.push(i);
                    go(c, pos, f);
                    pos.pop();
                }
            }
        }
        go(self, &mut Vec::new(), f)
    }

    /// Number of constructors (App, Var and UNode) in the term.
    pub fn size(&self) -> usize {
        match self {
            PTerm::App(_, ch) => 1 + ch.iter().map(PTerm::size).sum::<usize>(),
            _ => 1,
        }
    }
}

/// Splits fragments for child `i`: paths `i.p` become `p`, other paths are
/// dropped, and fragments left without paths disappear.
///
/// Panics if a fragment still addresses the root; such fragments have to be
/// suspended before the node is expanded.
pub fn project(phi: &[Fragment], i: usize) -> Vec<Fragment> {
    let mut out = Vec::new();
    for f in phi {
        assert!(!f.is_root(), "projecting a fragment that addresses the node itself");
        let paths: Vec<Path> =
            f.pec.paths().iter().filter(|p| p.first() == Some(i as u32)).map(Path::tail).collect();
        if !paths.is_empty() {
            out.push(Fragment { pec: Pec::new(paths), var: f.var });
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Variable bindings plus a union-find that records merged variables.
#[derive(Clone, Debug)]
pub struct EnumState {
    bindings: Vec<Option<Arc<PTerm>>>,
    parent: Vec<u32>,
}

impl EnumState {
    pub fn new(root: NodeId) -> EnumState {
        EnumState { bindings: vec![Some(Arc::new(PTerm::unode(root)))], parent: vec![0] }
    }

    pub fn find(&self, v: VarId) -> VarId {
        let mut x = v.0;
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        VarId(x)
    }

    pub fn fresh_var(&mut self) -> VarId {
        let v = u32::try_from(self.bindings.len()).expect("variable overflow");
        self.bindings.push(None);
        self.parent.push(v);
        VarId(v)
    }

    pub fn binding(&self, v: VarId) -> Option<&PTerm> {
        self.bindings[self.find(v).index()].as_deref()
    }

    pub(crate) fn binding_mut(&mut self, v: VarId) -> Option<&mut PTerm> {
        let r = self.find(v);
        self.bindings[r.index()].as_mut().map(Arc::make_mut)
    }

    pub(crate) fn set_binding(&mut self, v: VarId, t: Option<PTerm>) {
        let r = self.find(v);
        self.bindings[r.index()] = t.map(Arc::new);
    }

    /// Makes `from` an alias of `to`; `from` must be unbound afterwards.
    pub(crate) fn merge_into(&mut self, from: VarId, to: VarId) {
        let (f, t) = (self.find(from), self.find(to));
        if f != t {
            self.parent[f.index()] = t.0;
        }
    }

    /// Bound variables in id order, root first.
    pub fn bound_vars(&self) -> impl Iterator<Item = (VarId, &PTerm)> {
        self.bindings.iter().enumerate().filter_map(|(i, b)| b.as_deref().map(|t| (VarId(i as u32), t)))
    }

    /// Canonical form of a fragment list: representatives, sorted, deduplicated.
    pub fn canon(&self, frags: &[Fragment]) -> Vec<Fragment> {
        let mut out: Vec<Fragment> =
            frags.iter().map(|f| Fragment { pec: f.pec.clone(), var: self.find(f.var) }).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Variables mentioned by some fragment. The others are solved.
    pub fn mentioned_vars(&self) -> FxHashSet<VarId> {
        let mut m = FxHashSet::default();
        for (_, t) in self.bound_vars() {
            t.visit(&mut |_, s| {
                if let PTerm::UNode(_, fs) = s {
                    for f in fs {
                        m.insert(self.find(f.var));
                    }
                }
            });
        }
        m
    }

    /// A u-node still needs enumeration when fragments restrict it or when
    /// its node carries constraints of its own.
    pub fn needs_enumeration(store: &Store, n: NodeId, frags: &[Fragment]) -> bool {
        !frags.is_empty() || store.is_constrained(n)
    }

    /// No u-node needs further enumeration.
    pub fn is_fully_enumerated(&self, store: &Store) -> bool {
        let mut done = true;
        for (_, t) in self.bound_vars() {
            t.visit(&mut |_, s| {
                if let PTerm::UNode(n, fs) = s {
                    done &= !Self::needs_enumeration(store, *n, fs);
                }
            });
        }
        done
    }

    /// Variables reachable from the root, dependencies before dependents.
    pub fn reachable_vars(&self) -> Vec<VarId> {
        let mut order = Vec::new();
        let mut seen = FxHashSet::default();
        self.post_order(VarId::ROOT, &mut seen, &mut order);
        order
    }

    fn post_order(&self, v: VarId, seen: &mut FxHashSet<VarId>, order: &mut Vec<VarId>) {
        let v = self.find(v);
        if !seen.insert(v) {
            return;
        }
        if let Some(t) = self.binding(v) {
            let mut refs = Vec::new();
            t.visit(&mut |_, s| {
                if let PTerm::Var(w) = s {
                    refs.push(*w);
                }
            });
            for w in refs {
                self.post_order(w, seen, order);
            }
        }
        order.push(v);
    }

    /// Constructors over all bindings reachable from the root.
    pub fn size(&self) -> usize {
        self.reachable_vars().iter().filter_map(|&v| self.binding(v)).map(PTerm::size).sum()
    }

    /// The root's value as a term, if the state contains no u-nodes.
    pub fn ground_term(&self) -> Option<Term> {
        self.ground(&PTerm::Var(VarId::ROOT))
    }

    fn ground(&self, t: &PTerm) -> Option<Term> {
        match t {
            PTerm::Var(v) => self.ground(self.binding(*v)?),
            PTerm::App(s, ch) => {
                Some(Term::new(s.clone(), ch.iter().map(|c| self.ground(c)).collect::<Option<Vec<_>>>()?))
            }
            PTerm::UNode(..) => None,
        }
    }

    /// Renders the state one binding per line.
    pub fn display(&self) -> String {
        let mut out = String::new();
        for v in self.reachable_vars().into_iter().rev() {
            if let Some(t) = self.binding(v) {
                out.push_str(&format!("{v} = {}\n", self.show(t)));
            }
        }
        out
    }

    fn show(&self, t: &PTerm) -> String {
        match t {
            PTerm::Var(v) => self.find(*v).to_string(),
            PTerm::App(s, ch) => {
                if ch.is_empty() {
                    s.to_string()
                } else {
                    let parts: Vec<String> = ch.iter().map(|c| self.show(c)).collect();
                    format!("{s}({})", parts.join(","))
                }
            }
            PTerm::UNode(n, fs) => {
                if fs.is_empty() {
                    format!("<{n}>")
                } else {
                    let parts: Vec<String> =
                        self.canon(fs).iter().map(|f| format!("{{{}}}@{}", f.pec, f.var)).collect();
                    format!("<{n} | {}>", parts.join(" "))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frag(paths: &[&[u32]], v: u32) -> Fragment {
        Fragment { pec: Pec::new(paths.iter().map(|p| Path::from(*p))), var: VarId(v) }
    }

    #[test]
    fn projection_cases() {
        let phi = [frag(&[&[0, 0], &[1, 0]], 1)];
        assert_eq!(project(&phi, 0), vec![frag(&[&[0]], 1)]);
        assert!(project(&phi, 2).is_empty());
        let phi = [frag(&[&[0], &[1]], 1), frag(&[&[1, 2]], 2)];
        assert_eq!(project(&phi, 1), vec![frag(&[&[]], 1), frag(&[&[2]], 2)]);
    }

    #[test]
    #[should_panic]
    fn projection_rejects_root_fragments() {
        project(&[frag(&[&[]], 1)], 0);
    }

    #[test]
    fn union_find_chains() {
        let mut st = EnumState::new(NodeId::BOTTOM);
        let v1 = st.fresh_var();
        let v2 = st.fresh_var();
        let v3 = st.fresh_var();
        st.merge_into(v3, v2);
        st.merge_into(v2, v1);
        assert_eq!(st.find(v3), v1);
        assert_eq!(st.find(v2), v1);
    }
}
