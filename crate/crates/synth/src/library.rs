//! Component libraries: one `name :: type` declaration per line.
//!
//! `--` starts a comment. Names are identifiers or parenthesized operators
//! such as `(++)`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::types::{parse_type, TypeExpr, TypeParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub name: String,
    pub scheme: TypeExpr,
}

impl Component {
    pub fn new(name: &str, scheme: TypeExpr) -> Component {
        Component { name: name.to_string(), scheme }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :: {}", self.name, self.scheme)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LibraryError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}, {source}")]
    Type { line: usize, source: TypeParseError },
    #[error("line {line}: component {name} is declared twice")]
    Duplicate { line: usize, name: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Library {
    components: Vec<Component>,
}

impl Library {
    /// Fails on a repeated name.
    pub fn new(components: Vec<Component>) -> Result<Library, String> {
        let mut seen = BTreeSet::new();
        for c in &components {
            if !seen.insert(c.name.as_str()) {
                return Err(c.name.clone());
            }
        }
        Ok(Library { components })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.name == name)
    }

    /// Keeps the named components, in library order.
    pub fn restrict(&self, names: &[&str]) -> Library {
        Library { components: self.components.iter().filter(|c| names.contains(&c.name.as_str())).cloned().collect() }
    }
}

impl fmt::Display for Library {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.components {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn valid_name(name: &str) -> bool {
    if let Some(op) = name.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        return !op.is_empty() && !op.chars().any(|c| c.is_alphanumeric() || c.is_whitespace() || "()".contains(c));
    }
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// A comment is `--` at the start of a line or after whitespace, so
/// operators such as `(-->)` survive.
fn strip_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    for (k, _) in line.match_indices("--") {
        if k == 0 || bytes[k - 1].is_ascii_whitespace() {
            return &line[..k];
        }
    }
    line
}

pub fn parse_library(src: &str) -> Result<Library, LibraryError> {
    let mut components: Vec<Component> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = strip_comment(raw).trim();
        if text.is_empty() {
            continue;
        }
        let Some((name, ty)) = text.split_once("::") else {
            return Err(LibraryError::Syntax { line, message: "expected `name :: type`".into() });
        };
        let name = name.trim();
        if !valid_name(name) {
            return Err(LibraryError::Syntax { line, message: format!("invalid component name {name:?}") });
        }
        let scheme = parse_type(ty).map_err(|source| LibraryError::Type { line, source })?;
        if components.iter().any(|c| c.name == name) {
            return Err(LibraryError::Duplicate { line, name: name.to_string() });
        }
        components.push(Component::new(name, scheme));
    }
    Ok(Library { components })
}

/// A forty-component sample of the Haskell base library.
pub fn base_sample() -> Library {
    parse_library(include_str!("../data/base.lib")).expect("bundled library parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_declarations_and_comments() {
        let lib = parse_library("-- maybe\nfromMaybe :: a -> Maybe a -> a\n\n(++) :: [a] -> [a] -> [a] -- append\n").unwrap();
        assert_eq!(lib.len(), 2);
        assert_eq!(lib.components()[1].name, "(++)");
        assert_eq!(lib.components()[1].scheme.to_string(), "[a] -> [a] -> [a]");
        assert_eq!(parse_library(&lib.to_string()).unwrap(), lib);
    }

    #[test]
    fn reports_bad_lines() {
        assert_eq!(parse_library("x :: Int\nnonsense\n").unwrap_err(), LibraryError::Syntax {
            line: 2,
            message: "expected `name :: type`".into()
        });
        assert!(matches!(parse_library("x :: Int\nx :: Bool"), Err(LibraryError::Duplicate { line: 2, .. })));
        assert!(matches!(parse_library("fmap :: (a -> b) -> f a -> f b"), Err(LibraryError::Type { line: 1, .. })));
        assert!(matches!(parse_library("two words :: Int"), Err(LibraryError::Syntax { .. })));
    }

    #[test]
    fn bundled_sample() {
        let lib = base_sample();
        assert_eq!(lib.len(), 40);
        for name in ["fromMaybe", "listToMaybe", "catMaybes"] {
            assert!(lib.get(name).is_some(), "{name}");
        }
    }
}
