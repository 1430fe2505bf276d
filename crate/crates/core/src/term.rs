//! Ranked terms and the paths that address their subterms.

use std::fmt;
use std::sync::Arc;

/// A function symbol with a fixed arity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    name: Arc<str>,
    arity: usize,
}

impl Symbol {
    pub fn new(name: &str, arity: usize) -> Symbol {
        Symbol { name: Arc::from(name), arity }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbol_name(f, &self.name)
    }
}

/// Names made only of these characters print bare; anything else is quoted.
pub(crate) fn is_bare_name(name: &str) -> bool {
    !name.is_empty()
        && name.chars().all(|c| {
            c.is_alphanumeric() || is_bare_punct(c)
        })
        && !name.chars().all(|c| c.is_ascii_digit())
        && name != "where"
}

pub(crate) fn is_bare_punct(c: char) -> bool {
    "_+-*/<>=!?'^&|~[]:@$%".contains(c)
}

pub(crate) fn write_symbol_name(f: &mut impl fmt::Write, name: &str) -> fmt::Result {
    if is_bare_name(name) {
        f.write_str(name)
    } else {
        f.write_char('"')?;
        for c in name.chars() {
            if c == '"' || c == '\\' {
                f.write_char('\\')?;
            }
            f.write_char(c)?;
        }
        f.write_char('"')
    }
}

/// A finite ranked tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    symbol: Symbol,
    children: Vec<Term>,
}

impl Term {
    /// Panics if the number of children differs from the symbol's arity.
    pub fn new(symbol: Symbol, children: Vec<Term>) -> Term {
        assert_eq!(
            symbol.arity(),
            children.len(),
            "arity mismatch building term over {:?}",
            symbol
        );
        Term { symbol, children }
    }

    pub fn leaf(name: &str) -> Term {
        Term::new(Symbol::new(name, 0), Vec::new())
    }

    /// Builds `name(children)`, taking the arity from the child count.
    pub fn app(name: &str, children: Vec<Term>) -> Term {
        Term::new(Symbol::new(name, children.len()), children)
    }

    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn children(&self) -> &[Term] {
        &self.children
    }

    /// The subterm at `path`, or `None` when some index exceeds a child count.
    pub fn at(&self, path: &Path) -> Option<&Term> {
        let mut t = self;
        for &i in path.indices() {
            t = t.children.get(i as usize)?;
        }
        Some(t)
    }

    /// Number of symbol occurrences.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Term::size).sum::<usize>()
    }

    /// A leaf has depth 1.
    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(Term::depth).max().unwrap_or(0)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        if !self.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Reads the printed form, e.g. `+(f(a),f(a))`.
impl std::str::FromStr for Term {
    type Err = crate::lex::SyntaxError;

    fn from_str(s: &str) -> Result<Term, Self::Err> {
        let mut lx = crate::lex::Lexer::new(s);
        let t = parse_term(&mut lx)?;
        lx.expect_end()?;
        Ok(t)
    }
}

fn parse_term(lx: &mut crate::lex::Lexer<'_>) -> Result<Term, crate::lex::SyntaxError> {
    use crate::lex::Tok;
    let name = lx.name()?;
    let mut children = Vec::new();
    if lx.eat(&Tok::LParen)? {
        loop {
            children.push(parse_term(lx)?);
            if !lx.eat(&Tok::Comma)? {
                break;
            }
        }
        lx.expect(&Tok::RParen)?;
    }
    Ok(Term::new(Symbol::new(&name, children.len()), children))
}

/// `t|p` in free-function form.
pub fn subterm_at<'a>(t: &'a Term, p: &Path) -> Option<&'a Term> {
    t.at(p)
}

/// A position in a term: the child indices taken from the root.
///
/// Ordering is lexicographic on the index sequence, so a path sorts before
/// its extensions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Path(Vec<u32>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn new(indices: Vec<u32>) -> Path {
        Path(indices)
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u32> {
        self.0.first().copied()
    }

    /// The path without its first index.
    pub fn tail(&self) -> Path {
        Path(self.0.get(1..).unwrap_or(&[]).to_vec())
    }

    pub fn child(&self, i: u32) -> Path {
        let mut v = self.0.clone();
        v.push(i);
        Path(v)
    }

    pub fn prepend(&self, i: u32) -> Path {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(i);
        v.extend_from_slice(&self.0);
        Path(v)
    }

    pub fn concat(&self, other: &Path) -> Path {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Path(v)
    }

    /// Non-strict prefix test.
    pub fn is_prefix_of(&self, other: &Path) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_proper_prefix_of(&self, other: &Path) -> bool {
        self.0.len() < other.0.len() && self.is_prefix_of(other)
    }
}

impl From<&[u32]> for Path {
    fn from(v: &[u32]) -> Path {
        Path(v.to_vec())
    }
}

impl<const N: usize> From<[u32; N]> for Path {
    fn from(v: [u32; N]) -> Path {
        Path(v.to_vec())
    }
}

/// Accepts `0.1.2`, and `ε` for the root.
impl std::str::FromStr for Path {
    type Err = crate::error::ParseConstraintError;

    fn from_str(s: &str) -> Result<Path, Self::Err> {
        let s = s.trim();
        if s == "ε" {
            return Ok(Path::root());
        }
        s.split('.')
            .map(|part| part.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map(Path)
            .map_err(|_| crate::error::ParseConstraintError { input: s.to_string(), reason: "expected dot-separated indices" })
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus_fa_fb() -> Term {
        Term::app(
            "+",
            vec![Term::app("f", vec![Term::leaf("a")]), Term::app("f", vec![Term::leaf("b")])],
        )
    }

    #[test]
    fn subterm_access() {
        let t = plus_fa_fb();
        assert_eq!(t.at(&Path::from([0, 0])), Some(&Term::leaf("a")));
        assert_eq!(t.at(&Path::from([2, 0])), None);
        let a = Term::leaf("a");
        assert_eq!(subterm_at(&a, &Path::root()), Some(&a));
    }

    #[test]
    fn size_and_depth() {
        let t = plus_fa_fb();
        assert_eq!(t.size(), 5);
        assert_eq!(t.depth(), 3);
        assert_eq!(t.to_string(), "+(f(a),f(b))");
    }

    #[test]
    fn path_order_puts_prefixes_first() {
        let mut ps = vec![Path::from([1]), Path::from([0, 1]), Path::root(), Path::from([0])];
        ps.sort();
        let shown: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["ε", "0", "0.1", "1"]);
    }

    #[test]
    fn quoted_names() {
        assert_eq!(Term::leaf("(->)").to_string(), "\"(->)\"");
        assert_eq!(Term::leaf("->").to_string(), "->");
    }
}
