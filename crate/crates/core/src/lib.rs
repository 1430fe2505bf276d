//! Equality-constrained tree automata.
//!
//! Nodes live in a hash-consed [`Store`]; every operation that builds nodes
//! takes the store mutably and returns interned [`NodeId`]s.

mod denote;
pub mod dot;
pub mod egraph;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod gen;
mod lex;
mod ops;
pub mod oracle;
pub mod pcs;
pub mod reduce;
pub mod store;
pub mod term;
pub mod text;

pub use dot::export_dot;
pub use egraph::{pcs_closure, pcs_consistent, PathEGraph};
pub use error::{EctaError, ParseConstraintError};
pub use pcs::{pcs_normalize, pec_prefix_free, pec_satisfied, Pcs, Pec};
pub use reduce::{ReductionAlgo, ReductionReport, DEFAULT_MAX_ROUNDS};
pub use store::{Edge, Node, NodeId, Store};
pub use lex::SyntaxError;
pub use term::{subterm_at, Path, Symbol, Term};
pub use text::{parse_ecta, print_ecta, TextError};
