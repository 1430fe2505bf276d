//! Reference answers: every well-typed application tree of a given size,
//! found by listing trees and type checking each one.

use std::collections::BTreeSet;

use crate::check::TypeEnv;
use crate::program::Program;
use crate::synth::SynthesisProblem;

/// Well-typed programs of each size from 1 to `max_size`; index 0 holds size 1.
pub fn typed_programs(env: &TypeEnv, names: &[String], max_size: usize) -> Vec<Vec<Program>> {
    let mut by_size: Vec<Vec<Program>> = Vec::new();
    for n in 1..=max_size {
        let mut row = Vec::new();
        if n == 1 {
            row.extend(names.iter().map(|s| Program::name(s)).filter(|p| env.infer(p).is_ok()));
        }
        for i in 1..n {
            for f in &by_size[i - 1] {
                for a in &by_size[n - i - 1] {
                    let p = Program::app(f.clone(), a.clone());
                    if env.infer(&p).is_ok() {
                        row.push(p);
                    }
                }
            }
        }
        by_size.push(row);
    }
    by_size
}

/// Solutions of `problem` of exactly `size`, rendered.
pub fn brute_force_solutions(problem: &SynthesisProblem, size: usize, relevancy: bool) -> BTreeSet<String> {
    let inputs = problem.inputs();
    let env = TypeEnv::new(&problem.library, &inputs);
    let mut names: Vec<String> = problem.library.components().iter().map(|c| c.name.clone()).collect();
    names.extend(inputs.iter().map(|c| c.name.clone()));
    let ret = problem.return_type();
    let all = typed_programs(&env, &names, size);
    all[size - 1]
        .iter()
        .filter(|p| env.check(p, &ret).is_ok())
        .filter(|p| !relevancy || inputs.iter().all(|c| p.mentions(&c.name)))
        .map(|p| p.to_string())
        .collect()
}
