//! Type-directed synthesis of applicative programs from a component
//! library, by enumerating a constrained tree automaton of typed terms.

pub mod brute;
pub mod check;
pub mod encode;
pub mod library;
pub mod program;
pub mod synth;
pub mod types;

pub use check::{TypeCheckError, TypeEnv};
pub use encode::{attach_query, build_any_node, ArrowEncoding, Signature, TermSpace, TypeNodes};
pub use library::{base_sample, parse_library, Component, Library, LibraryError};
pub use program::Program;
pub use synth::{synthesize, synthesize_all, Solution, SynthConfig, SynthError, SynthStats, SynthesisProblem};
pub use types::{parse_type, TypeExpr, TypeParseError};
