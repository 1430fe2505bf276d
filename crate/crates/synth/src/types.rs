//! Haskell-style type expressions and their parser.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Built-in constructor names for the bracket and tuple syntax.
pub const LIST: &str = "[]";
pub const UNIT: &str = "()";

pub fn tuple_name(n: usize) -> String {
    format!("({})", ",".repeat(n - 1))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeExpr {
    Con(String, Vec<TypeExpr>),
    Var(String),
    Arrow(Box<TypeExpr>, Box<TypeExpr>),
}

impl TypeExpr {
    pub fn con(name: &str, args: Vec<TypeExpr>) -> TypeExpr {
        TypeExpr::Con(name.to_string(), args)
    }

    pub fn var(name: &str) -> TypeExpr {
        TypeExpr::Var(name.to_string())
    }

    pub fn arrow(from: TypeExpr, to: TypeExpr) -> TypeExpr {
        TypeExpr::Arrow(Box::new(from), Box::new(to))
    }

    /// Parameters and result along the arrow spine: `a -> b -> c` gives
    /// `([a, b], c)`.
    pub fn spine(&self) -> (Vec<&TypeExpr>, &TypeExpr) {
        let mut params = Vec::new();
        let mut t = self;
        while let TypeExpr::Arrow(a, b) = t {
            params.push(a.as_ref());
            t = b;
        }
        (params, t)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            TypeExpr::Var(v) => {
                out.insert(v.clone());
            }
            TypeExpr::Con(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            TypeExpr::Arrow(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Constructor names with their arities, arrows excluded.
    pub fn constructors(&self, out: &mut BTreeSet<(String, usize)>) {
        match self {
            TypeExpr::Var(_) => {}
            TypeExpr::Con(c, args) => {
                out.insert((c.clone(), args.len()));
                args.iter().for_each(|a| a.constructors(out));
            }
            TypeExpr::Arrow(a, b) => {
                a.constructors(out);
                b.constructors(out);
            }
        }
    }

    pub fn has_arrow(&self) -> bool {
        match self {
            TypeExpr::Var(_) => false,
            TypeExpr::Con(_, args) => args.iter().any(TypeExpr::has_arrow),
            TypeExpr::Arrow(..) => true,
        }
    }

    /// Replaces every type variable by a nullary constructor of the same name.
    pub fn skolemize(&self) -> TypeExpr {
        match self {
            TypeExpr::Var(v) => TypeExpr::Con(v.clone(), vec![]),
            TypeExpr::Con(c, args) => TypeExpr::Con(c.clone(), args.iter().map(TypeExpr::skolemize).collect()),
            TypeExpr::Arrow(a, b) => TypeExpr::arrow(a.skolemize(), b.skolemize()),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            TypeExpr::Var(v) => write!(f, "{v}"),
            TypeExpr::Con(c, args) if c == LIST && args.len() == 1 => write!(f, "[{}]", args[0]),
            TypeExpr::Con(c, args) if args.len() >= 2 && *c == tuple_name(args.len()) => {
                let parts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
            TypeExpr::Con(c, args) if args.is_empty() => write!(f, "{c}"),
            TypeExpr::Con(c, args) => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                write!(f, "{c}")?;
                for a in args {
                    write!(f, " ")?;
                    a.fmt_prec(f, 2)?;
                }
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            TypeExpr::Arrow(a, b) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 1)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 0)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("column {col}: {message}")]
pub struct TypeParseError {
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Upper(String),
    Lower(String),
    Arrow,
    FatArrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    End,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, TypeParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '\\' => {
                return Err(TypeParseError { col, message: "lambda abstractions are not supported".into() });
            }
            _ if two == "->" => {
                i += 1;
                Tok::Arrow
            }
            _ if two == "=>" => {
                i += 1;
                Tok::FatArrow
            }
            _ if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_alphanumeric() || matches!(chars[i + 1], '_' | '\'')) {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().collect();
                if c.is_uppercase() {
                    Tok::Upper(word)
                } else {
                    Tok::Lower(word)
                }
            }
            _ => return Err(TypeParseError { col, message: format!("unexpected character {c:?}") }),
        };
        out.push((tok, col));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, TypeParseError> {
        Err(TypeParseError { col: self.col(), message: message.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), TypeParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    /// Skips an explicit `forall a b.` and a class context `C a =>`.
    fn prefix(&mut self) -> Result<(), TypeParseError> {
        if *self.peek() == Tok::Lower("forall".into()) {
            self.bump();
            while matches!(self.peek(), Tok::Lower(_)) {
                self.bump();
            }
            self.expect(Tok::Dot, "'.' after forall")?;
        }
        if let Some(k) = self.toks[self.pos..].iter().position(|(t, _)| *t == Tok::FatArrow) {
            self.pos += k + 1;
        }
        Ok(())
    }

    fn ty(&mut self) -> Result<TypeExpr, TypeParseError> {
        let from = self.btype()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let to = self.ty()?;
            return Ok(TypeExpr::arrow(from, to));
        }
        Ok(from)
    }

    fn starts_atype(&self) -> bool {
        matches!(self.peek(), Tok::Upper(_) | Tok::Lower(_) | Tok::LParen | Tok::LBracket)
    }

    fn btype(&mut self) -> Result<TypeExpr, TypeParseError> {
        let col = self.col();
        let head = self.atype()?;
        let mut args = Vec::new();
        while self.starts_atype() {
            args.push(self.atype()?);
        }
        if args.is_empty() {
            return Ok(head);
        }
        match head {
            TypeExpr::Con(c, mut own) if own.is_empty() || !is_builtin(&c) => {
                own.extend(args);
                Ok(TypeExpr::Con(c, own))
            }
            TypeExpr::Var(v) => {
                Err(TypeParseError { col, message: format!("type variable {v} is applied to arguments (higher-kinded)") })
            }
            _ => Err(TypeParseError { col, message: "only named constructors take arguments".into() }),
        }
    }

    fn atype(&mut self) -> Result<TypeExpr, TypeParseError> {
        match self.bump() {
            Tok::Upper(c) => {
                let mut name = c;
                // Qualified names such as `Data.Map.Map`.
                while *self.peek() == Tok::Dot && matches!(self.toks[self.pos + 1].0, Tok::Upper(_)) {
                    self.bump();
                    if let Tok::Upper(next) = self.bump() {
                        name = format!("{name}.{next}");
                    }
                }
                Ok(TypeExpr::Con(name, vec![]))
            }
            Tok::Lower(v) => Ok(TypeExpr::Var(v)),
            Tok::LBracket => {
                if *self.peek() == Tok::RBracket {
                    return self.error("the bare list constructor [] is not supported");
                }
                let t = self.ty()?;
                self.expect(Tok::RBracket, "']'")?;
                Ok(TypeExpr::Con(LIST.into(), vec![t]))
            }
            Tok::LParen => {
                if *self.peek() == Tok::RParen {
                    self.bump();
                    return Ok(TypeExpr::Con(UNIT.into(), vec![]));
                }
                let first = self.ty()?;
                let mut items = vec![first];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    items.push(self.ty()?);
                }
                self.expect(Tok::RParen, "')'")?;
                if items.len() == 1 {
                    Ok(items.pop().expect("one item"))
                } else {
                    Ok(TypeExpr::Con(tuple_name(items.len()), items))
                }
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.error("expected a type")
            }
        }
    }
}

fn is_builtin(c: &str) -> bool {
    c == LIST || c == UNIT || c.starts_with("(,")
}

/// Parses a type. A leading `forall` and class context are accepted and
/// dropped.
pub fn parse_type(src: &str) -> Result<TypeExpr, TypeParseError> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0 };
    p.prefix()?;
    let t = p.ty()?;
    if *p.peek() != Tok::End {
        return p.error("unexpected input after type");
    }
    Ok(t)
}

impl FromStr for TypeExpr {
    type Err = TypeParseError;

    fn from_str(s: &str) -> Result<TypeExpr, TypeParseError> {
        parse_type(s)
    }
}
