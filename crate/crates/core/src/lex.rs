//! Tokens shared by the term and automaton text formats.

use std::iter::Peekable;
use std::str::CharIndices;

use thiserror::Error;

use crate::term::is_bare_punct;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    /// A bare name; `quoted` names never act as keywords.
    Name { text: String, quoted: bool },
    LParen,
    RParen,
    Comma,
    LBrace,
    RBrace,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name { text, .. } => format!("{text:?}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

pub(crate) struct Lexer<'a> {
    src: &'a str,
    chars: Peekable<CharIndices<'a>>,
    line: usize,
    col: usize,
    peeked: Option<(Tok, usize, usize)>,
}

impl<'a> Lexer<'a> {
    pub(crate) fn new(src: &'a str) -> Lexer<'a> {
        Lexer { src, chars: src.char_indices().peekable(), line: 1, col: 1, peeked: None }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_space(&mut self) {
        while let Some(&(_, c)) = self.chars.peek() {
            if c == '#' {
                while self.chars.peek().is_some_and(|&(_, c)| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    pub(crate) fn error_here(&self, message: impl Into<String>) -> SyntaxError {
        let (line, col) = match &self.peeked {
            Some((_, l, c)) => (*l, *c),
            None => (self.line, self.col),
        };
        SyntaxError { line, col, message: message.into() }
    }

    fn lex(&mut self) -> Result<(Tok, usize, usize), SyntaxError> {
        self.skip_space();
        let (line, col) = (self.line, self.col);
        let Some(&(start, c)) = self.chars.peek() else { return Ok((Tok::End, line, col)) };
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            _ => None,
        };
        if let Some(t) = simple {
            self.bump();
            return Ok((t, line, col));
        }
        if c == '"' {
            self.bump();
            let mut text = String::new();
            loop {
                match self.bump() {
                    None => return Err(SyntaxError { line, col, message: "unterminated quoted name".into() }),
                    Some('"') => break,
                    Some('\\') => match self.bump() {
                        Some(e) => text.push(e),
                        None => return Err(SyntaxError { line, col, message: "unterminated quoted name".into() }),
                    },
                    Some(ch) => text.push(ch),
                }
            }
            return Ok((Tok::Name { text, quoted: true }, line, col));
        }
        if c.is_alphanumeric() || is_bare_punct(c) {
            let mut end = start;
            while let Some(&(i, ch)) = self.chars.peek() {
                if ch.is_alphanumeric() || is_bare_punct(ch) {
                    end = i + ch.len_utf8();
                    self.bump();
                } else {
                    break;
                }
            }
            return Ok((Tok::Name { text: self.src[start..end].to_string(), quoted: false }, line, col));
        }
        Err(SyntaxError { line, col, message: format!("unexpected character {c:?}") })
    }

    pub(crate) fn peek(&mut self) -> Result<&Tok, SyntaxError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex()?);
        }
        Ok(&self.peeked.as_ref().expect("just filled").0)
    }

    pub(crate) fn next(&mut self) -> Result<Tok, SyntaxError> {
        self.peek()?;
        Ok(self.peeked.take().expect("just filled").0)
    }

    pub(crate) fn eat(&mut self, t: &Tok) -> Result<bool, SyntaxError> {
        if self.peek()? == t {
            self.next()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    pub(crate) fn expect(&mut self, t: &Tok) -> Result<(), SyntaxError> {
        let got = self.peek()?.clone();
        if &got == t {
            self.next()?;
            Ok(())
        } else {
            Err(self.error_here(format!("expected {}, found {}", t.describe(), got.describe())))
        }
    }

    pub(crate) fn expect_end(&mut self) -> Result<(), SyntaxError> {
        self.expect(&Tok::End)
    }

    /// The next token as a name, quoted or bare.
    pub(crate) fn name(&mut self) -> Result<String, SyntaxError> {
        match self.peek()?.clone() {
            Tok::Name { text, .. } => {
                self.next()?;
                Ok(text)
            }
            other => Err(self.error_here(format!("expected a name, found {}", other.describe()))),
        }
    }

    /// Whether the next token is the unquoted keyword `kw`.
    pub(crate) fn at_keyword(&mut self, kw: &str) -> Result<bool, SyntaxError> {
        Ok(matches!(self.peek()?, Tok::Name { text, quoted: false } if text == kw))
    }

    pub(crate) fn keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.at_keyword(kw)? {
            self.next()?;
            Ok(())
        } else {
            let got = self.peek()?.describe();
            Err(self.error_here(format!("expected {kw:?}, found {got}")))
        }
    }

    /// Raw text up to the next `}`, which is consumed. Must follow `{` directly.
    pub(crate) fn raw_braced(&mut self) -> Result<(String, usize, usize), SyntaxError> {
        debug_assert!(self.peeked.is_none(), "raw text after a peeked token");
        let (line, col) = (self.line, self.col);
        let mut text = String::new();
        loop {
            match self.bump() {
                None => return Err(SyntaxError { line, col, message: "missing '}'".into() }),
                Some('}') => return Ok((text, line, col)),
                Some(c) => text.push(c),
            }
        }
    }
}
