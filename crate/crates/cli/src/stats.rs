//! `key=value` counter lines on stderr.

use std::fmt::Display;

#[derive(Default)]
pub struct StatLines {
    lines: Vec<String>,
}

impl StatLines {
    pub fn add(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.lines.push(format!("{key}={value}"));
        self
    }

    pub fn enumeration(&mut self, s: &ecta::enumerate::EnumStats) -> &mut Self {
        self.add("states_explored", s.states_explored)
            .add("rule_applications", s.rule_applications)
            .add("dead_branches", s.dead_branches)
            .add("yielded", s.yielded)
            .add("measure_violations", s.measure_violations)
            .add("stopped_early", s.stopped_early)
    }

    pub fn reduction(&mut self, r: &ecta::ReductionReport) -> &mut Self {
        self.add("reduction_rounds", r.rounds_run).add("edges_removed", r.edges_removed).add("converged", r.converged)
    }

    pub fn emit(&self, enabled: bool) {
        if enabled {
            for l in &self.lines {
                eprintln!("{l}");
            }
        }
    }
}
