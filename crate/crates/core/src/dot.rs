//! Graphviz export.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::store::{Node, NodeId, Store};

/// Renders the automaton rooted at `root` as a DOT digraph. States are
/// ellipses, transitions are boxes labelled with their symbol and
/// constraints, and arcs that close a cycle are dashed.
pub fn export_dot(store: &Store, root: NodeId) -> String {
    let mut d = Dot { store, labels: HashMap::new(), body: Vec::new() };
    if root == NodeId::BOTTOM {
        d.body.push((0, "  n0 [shape=ellipse, label=\"⊥\"];".to_string()));
    } else {
        d.visit(root, &mut Vec::new());
    }
    d.body.sort_by_key(|(l, _)| *l);
    let mut out = String::from("digraph ecta {\n  rankdir=TB;\n");
    for (_, line) in d.body {
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

struct Dot<'s> {
    store: &'s Store,
    labels: HashMap<(NodeId, Vec<usize>), usize>,
    body: Vec<(usize, String)>,
}

impl Dot<'_> {
    /// Returns the label of `n` and whether the arc to it closes a cycle.
    fn target(&mut self, n: NodeId, ctx: &mut Vec<usize>) -> (usize, bool) {
        match self.store.node(n) {
            Node::Var(k) => (ctx[ctx.len() - 1 - *k as usize], true),
            _ => (self.visit(n, ctx), false),
        }
    }

    fn visit(&mut self, n: NodeId, ctx: &mut Vec<usize>) -> usize {
        let key = if self.store.is_closed(n) { (n, Vec::new()) } else { (n, ctx.clone()) };
        if let Some(&l) = self.labels.get(&key) {
            return l;
        }
        let l = self.labels.len();
        self.labels.insert(key, l);
        let mut body = n;
        let mut pushed = 0;
        while let Node::Mu(b) = self.store.node(body) {
            ctx.push(l);
            pushed += 1;
            body = *b;
        }
        let mut text = format!("  n{l} [shape=ellipse, label=\"n{l}\"];\n");
        for (i, e) in self.store.edges(body).to_vec().iter().enumerate() {
            let mut label = escape(&e.symbol().to_string());
            if !e.constraints().is_empty() {
                let _ = write!(label, "\\n{}", escape(&e.constraints().to_string()));
            }
            let _ = writeln!(text, "  n{l}_{i} [shape=box, label=\"{label}\"];");
            let _ = writeln!(text, "  n{l} -> n{l}_{i};");
            for (j, &c) in e.children().iter().enumerate() {
                let (t, back) = self.target(c, ctx);
                let style = if back { ", style=dashed" } else { "" };
                let _ = writeln!(text, "  n{l}_{i} -> n{t} [label=\"{j}\"{style}];");
            }
        }
        ctx.truncate(ctx.len() - pushed);
        self.body.push((l, text.trim_end().to_string()));
        l
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn duplicated_sum_has_one_constrained_box() {
        let mut s = Store::new();
        let n = fixtures::duplicated_sum(&mut s);
        let dot = export_dot(&s, n);
        assert_eq!(dot.matches("shape=box").count(), 5);
        assert_eq!(dot.matches("0.0=1.0").count(), 1);
        assert!(dot.contains("label=\"+\\n{0.0=1.0}\""));
        assert_eq!(dot, export_dot(&s, n));
    }

    #[test]
    fn bottom_and_cycles() {
        let mut s = Store::new();
        assert!(export_dot(&s, NodeId::BOTTOM).contains("label=\"⊥\""));
        let nat = fixtures::nat(&mut s);
        let dot = export_dot(&s, nat);
        assert_eq!(dot.matches("style=dashed").count(), 1);
    }
}
