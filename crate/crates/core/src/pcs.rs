//! Path equivalence classes and constraint sets.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::ParseConstraintError;
use crate::term::{Path, Term};

/// A set of paths that must all address the same subterm.
///
/// Paths are kept sorted and duplicate-free.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pec(Arc<[Path]>);

impl Pec {
    /// Panics on an empty path list.
    pub fn new(paths: impl IntoIterator<Item = Path>) -> Pec {
        let set: BTreeSet<Path> = paths.into_iter().collect();
        assert!(!set.is_empty(), "a path equivalence class needs at least one path");
        Pec(set.into_iter().collect::<Vec<_>>().into())
    }

    pub fn paths(&self) -> &[Path] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, p: &Path) -> bool {
        self.0.binary_search(p).is_ok()
    }

    /// Smallest member path.
    pub fn min_path(&self) -> &Path {
        &self.0[0]
    }

    pub fn max_len(&self) -> usize {
        self.0.iter().map(Path::len).max().unwrap_or(0)
    }

    pub fn is_prefix_free(&self) -> bool {
        // In sorted order a proper prefix directly precedes some extension of it,
        // and every path between a prefix and its extension also extends it.
        self.0.windows(2).all(|w| !w[0].is_prefix_of(&w[1]))
    }

    /// Whether every path resolves in `t` to one identical subterm; returns that subterm.
    pub fn satisfied_by<'a>(&self, t: &'a Term) -> Option<&'a Term> {
        let mut it = self.0.iter();
        let first = t.at(it.next()?)?;
        for p in it {
            if t.at(p)? != first {
                return None;
            }
        }
        Some(first)
    }
}

/// Free-function form of [`Pec::is_prefix_free`].
pub fn pec_prefix_free(c: &Pec) -> bool {
    c.is_prefix_free()
}

/// Free-function form of [`Pec::satisfied_by`].
pub fn pec_satisfied<'a>(c: &Pec, t: &'a Term) -> (bool, Option<&'a Term>) {
    match c.satisfied_by(t) {
        Some(w) => (true, Some(w)),
        None => (false, None),
    }
}

impl fmt::Display for Pec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("=")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// A set of pairwise disjoint path equivalence classes, sorted by smallest member.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Pcs(Vec<Pec>);

impl Pcs {
    pub fn empty() -> Pcs {
        Pcs(Vec::new())
    }

    /// Merges classes that share a path, transitively.
    pub fn normalize(classes: impl IntoIterator<Item = Pec>) -> Pcs {
        let classes: Vec<Pec> = classes.into_iter().collect();
        // Union-find over class indices, keyed by shared paths.
        let mut parent: Vec<usize> = (0..classes.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut owner: std::collections::HashMap<&Path, usize> = Default::default();
        for (i, c) in classes.iter().enumerate() {
            for p in c.paths() {
                if let Some(&j) = owner.get(p) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                } else {
                    owner.insert(p, i);
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, BTreeSet<Path>> = Default::default();
        for (i, c) in classes.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().extend(c.paths().iter().cloned());
        }
        let mut out: Vec<Pec> = groups.into_values().map(|s| Pec(s.into_iter().collect::<Vec<_>>().into())).collect();
        out.sort();
        Pcs(out)
    }

    pub fn classes(&self) -> &[Pec] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn max_path_len(&self) -> usize {
        self.0.iter().map(Pec::max_len).max().unwrap_or(0)
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.0.iter().flat_map(|c| c.paths().iter())
    }

    pub fn satisfied_by(&self, t: &Term) -> bool {
        self.0.iter().all(|c| c.satisfied_by(t).is_some())
    }

    /// Every class of `weaker` lies inside a class of `self`, so terms
    /// satisfying `self` satisfy `weaker`.
    pub fn implies(&self, weaker: &Pcs) -> bool {
        weaker.0.iter().all(|c| self.0.iter().any(|d| c.paths().iter().all(|p| d.contains(p))))
    }

    /// Normalized union of two constraint sets.
    pub fn union(&self, other: &Pcs) -> Pcs {
        Pcs::normalize(self.0.iter().chain(other.0.iter()).cloned())
    }
}

/// Free-function form of [`Pcs::normalize`].
pub fn pcs_normalize(classes: impl IntoIterator<Item = Pec>) -> Pcs {
    Pcs::normalize(classes)
}

/// Accepts `0.0=1.0;2=3`, optionally wrapped in braces.
impl std::str::FromStr for Pcs {
    type Err = ParseConstraintError;

    fn from_str(s: &str) -> Result<Pcs, Self::Err> {
        let body = s.trim();
        let body = body.strip_prefix('{').and_then(|b| b.strip_suffix('}')).unwrap_or(body);
        let mut classes = Vec::new();
        for class in body.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let paths = class.split('=').map(str::parse::<Path>).collect::<Result<Vec<_>, _>>()?;
            if paths.len() < 2 {
                return Err(ParseConstraintError { input: s.to_string(), reason: "a class needs at least two paths" });
            }
            classes.push(Pec::new(paths));
        }
        Ok(Pcs::normalize(classes))
    }
}

impl fmt::Display for Pcs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Pcs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &[u32]) -> Path {
        Path::from(s)
    }

    fn pec(ps: &[&[u32]]) -> Pec {
        Pec::new(ps.iter().map(|x| p(x)))
    }

    #[test]
    fn normalize_merges_transitively() {
        let n = Pcs::normalize([pec(&[&[0], &[1]]), pec(&[&[1], &[2]])]);
        assert_eq!(n.to_string(), "{0=1=2}");
        let n = Pcs::normalize([pec(&[&[0], &[1]]), pec(&[&[2], &[3]]), pec(&[&[1], &[2]])]);
        assert_eq!(n.to_string(), "{0=1=2=3}");
        let n = Pcs::normalize([pec(&[&[0], &[1]])]);
        assert_eq!(n.to_string(), "{0=1}");
    }

    #[test]
    fn canonical_order_ignores_insertion_order() {
        let a = Pcs::normalize([pec(&[&[1, 0], &[2]]), pec(&[&[0, 0], &[0, 1]])]);
        let b = Pcs::normalize([pec(&[&[0, 1], &[0, 0]]), pec(&[&[2], &[1, 0]])]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "{0.0=0.1;1.0=2}");
    }

    #[test]
    fn prefix_freedom() {
        assert!(pec(&[&[0], &[1, 0]]).is_prefix_free());
        assert!(!pec(&[&[1], &[1, 0, 0]]).is_prefix_free());
        assert!(!pec(&[&[], &[0]]).is_prefix_free());
        // A prefix separated from its extension by an unrelated path in sort order.
        assert!(!pec(&[&[0], &[0, 0, 1], &[0, 1]]).is_prefix_free());
    }

    #[test]
    fn satisfaction() {
        let a = Term::leaf("a");
        let faa = Term::app("+", vec![Term::app("f", vec![a.clone()]), Term::app("f", vec![a.clone()])]);
        let fab = Term::app(
            "+",
            vec![Term::app("f", vec![a.clone()]), Term::app("f", vec![Term::leaf("b")])],
        );
        let c = pec(&[&[0, 0], &[1, 0]]);
        assert_eq!(pec_satisfied(&c, &faa), (true, Some(&a)));
        assert_eq!(pec_satisfied(&c, &fab), (false, None));
        assert_eq!(pec_satisfied(&pec(&[&[]]), &a), (true, Some(&a)));
        // An undefined path never satisfies a class.
        assert_eq!(pec_satisfied(&pec(&[&[0]]), &a), (false, None));
    }
}
