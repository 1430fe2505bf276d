//! DIMACS CNF input.

use thiserror::Error;

/// A formula in conjunctive normal form. Literals are signed 1-based variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: u32, clauses: Vec<Vec<i32>>) -> CnfFormula {
        CnfFormula { num_vars, clauses }
    }

    /// Whether `values[i]` (for variable `i + 1`) satisfies every clause.
    pub fn evaluate(&self, values: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| values[l.unsigned_abs() as usize - 1] == (l > 0)))
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct DimacsError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> DimacsError {
    DimacsError { line, message: message.into() }
}

/// Parses `p cnf` input. Comment lines start with `c`; a `%` line ends the input.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(u32, usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "second header"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(err(line_no, "expected `p cnf <variables> <clauses>`"));
            }
            let vars = parts[2].parse::<u32>().map_err(|_| err(line_no, "bad variable count"))?;
            let count = parts[3].parse::<usize>().map_err(|_| err(line_no, "bad clause count"))?;
            header = Some((vars, count, line_no));
            continue;
        }
        let Some((vars, _, _)) = header else {
            return Err(err(line_no, "clause before header"));
        };
        for tok in line.split_whitespace() {
            let lit = tok.parse::<i32>().map_err(|_| err(line_no, format!("bad literal {tok:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() > vars {
                return Err(err(line_no, format!("variable {} out of range 1..={vars}", lit.unsigned_abs())));
            } else {
                current.push(lit);
            }
        }
    }
    let (num_vars, count, header_line) = header.ok_or_else(|| err(last_line.max(1), "missing header"))?;
    if !current.is_empty() {
        return Err(err(last_line, "last clause is not terminated by 0"));
    }
    if clauses.len() != count {
        return Err(err(header_line, format!("header announces {count} clauses, found {}", clauses.len())));
    }
    Ok(CnfFormula { num_vars, clauses })
}

/// Writes the formula back out in DIMACS form.
pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            out.push_str(&l.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}
