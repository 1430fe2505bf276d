//! Applicative programs and their extraction from accepted terms.

use std::collections::BTreeSet;
use std::fmt;

use ecta::enumerate::{EnumState, PTerm, VarId};
use ecta::Term;

use crate::encode::{APP, QUERY};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Program {
    Name(String),
    App(Box<Program>, Box<Program>),
}

impl Program {
    pub fn name(n: &str) -> Program {
        Program::Name(n.to_string())
    }

    pub fn app(f: Program, a: Program) -> Program {
        Program::App(Box::new(f), Box::new(a))
    }

    /// Applies `f` to each argument in turn.
    pub fn call(f: &str, args: Vec<Program>) -> Program {
        args.into_iter().fold(Program::name(f), Program::app)
    }

    /// Number of names.
    pub fn size(&self) -> usize {
        match self {
            Program::Name(_) => 1,
            Program::App(f, a) => f.size() + a.size(),
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Program::Name(n) => n == name,
            Program::App(f, a) => f.mentions(name) || a.mentions(name),
        }
    }

    pub fn names(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Program::Name(n) => {
                out.insert(n);
            }
            Program::App(f, a) => {
                f.collect_names(out);
                a.collect_names(out);
            }
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, arg: bool) -> fmt::Result {
        match self {
            Program::Name(n) => write!(f, "{n}"),
            Program::App(fun, a) => {
                if arg {
                    write!(f, "(")?;
                }
                fun.fmt_prec(f, false)?;
                write!(f, " ")?;
                a.fmt_prec(f, true)?;
                if arg {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, false)
    }
}

fn is_app(name: &str, arity: usize) -> bool {
    name == APP && (arity == 3 || arity == 4)
}

/// The program under a `query` term or a bare term. Arity decides between
/// tagged and untagged applications.
pub fn program_of_term(t: &Term) -> Option<Program> {
    let s = t.symbol();
    if s.name() == QUERY && s.arity() == 2 {
        return program_of_term(&t.children()[0]);
    }
    term_program(t)
}

fn term_program(t: &Term) -> Option<Program> {
    let s = t.symbol();
    let ch = t.children();
    if is_app(s.name(), s.arity()) {
        let k = ch.len();
        return Some(Program::app(term_program(&ch[k - 2])?, term_program(&ch[k - 1])?));
    }
    (s.arity() == 1).then(|| Program::name(s.name()))
}

/// The program of a fully enumerated state. `None` when a program position
/// is still an unenumerated node.
pub fn program_of_state(st: &EnumState) -> Option<Program> {
    let root = st.binding(VarId::ROOT)?;
    match root {
        PTerm::App(s, ch) if s.name() == QUERY && ch.len() == 2 => state_program(st, &ch[0]),
        t => state_program(st, t),
    }
}

fn state_program(st: &EnumState, t: &PTerm) -> Option<Program> {
    match t {
        PTerm::Var(v) => state_program(st, st.binding(*v)?),
        PTerm::App(s, ch) if is_app(s.name(), ch.len()) => {
            let k = ch.len();
            Some(Program::app(state_program(st, &ch[k - 2])?, state_program(st, &ch[k - 1])?))
        }
        PTerm::App(s, ch) if ch.len() == 1 => Some(Program::name(s.name())),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_parenthesizes_arguments() {
        let p = Program::call(
            "fromMaybe",
            vec![
                Program::name("def"),
                Program::call("listToMaybe", vec![Program::call("catMaybes", vec![Program::name("mbs")])]),
            ],
        );
        assert_eq!(p.to_string(), "fromMaybe def (listToMaybe (catMaybes mbs))");
        assert_eq!(p.size(), 5);
        assert!(p.mentions("mbs"));
        assert!(!p.mentions("map"));
    }

    #[test]
    fn reads_programs_from_terms() {
        let int = Term::leaf("Int");
        let x = Term::app("x", vec![int.clone()]);
        let g = Term::app("g", vec![Term::app("->", vec![Term::leaf("(->)"), int.clone(), int.clone()])]);
        let app = Term::app(APP, vec![int.clone(), Term::leaf("(->)"), g, x]);
        let q = Term::app(QUERY, vec![app, int]);
        assert_eq!(program_of_term(&q).unwrap().to_string(), "g x");
    }
}
