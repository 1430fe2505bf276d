//! Boolean satisfiability by automaton enumeration.

pub mod dimacs;
pub mod encode;
pub mod solve;

pub use dimacs::{parse_dimacs, write_dimacs, CnfFormula, DimacsError};
pub use encode::{encode_cnf, EncodeError, Encoding};
pub use solve::{read_model, solve, Assignment, SolveConfig, SolveResult, Value};
