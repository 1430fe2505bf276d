use std::ops::ControlFlow;

use ecta_synth::{base_sample, parse_library, parse_type, synthesize, synthesize_all, SynthConfig, SynthesisProblem, TypeEnv};

fn maybe_problem() -> SynthesisProblem {
    let query = parse_type("a -> [Maybe a] -> a").unwrap();
    SynthesisProblem::with_input_names(base_sample(), query, vec!["def".into(), "mbs".into()]).unwrap()
}

#[test]
fn first_non_empty_default() {
    let problem = maybe_problem();
    let env = TypeEnv::new(&problem.library, &problem.inputs());
    let want = "fromMaybe def (listToMaybe (catMaybes mbs))";
    let mut found = None;
    let mut before = Vec::new();
    let config = SynthConfig { max_size: 5, audit: true, ..SynthConfig::default() };
    let stats = synthesize(&problem, &config, |s| {
        env.check(&s.program, &problem.return_type()).unwrap();
        if s.program.to_string() == want {
            found = Some(s.size);
            return ControlFlow::Break(());
        }
        before.push(s.program.clone());
        ControlFlow::Continue(())
    })
    .unwrap();
    assert_eq!(found, Some(5));
    assert_eq!(stats.measure_violations, 0);
    assert!(before.iter().all(|p| p.mentions("def") && p.mentions("mbs")));
}

#[test]
fn constant_query() {
    let lib = parse_library("intZero :: Int\nsucc :: Int -> Int\nnull :: [a] -> Bool").unwrap();
    let problem = SynthesisProblem::new(lib, parse_type("Int").unwrap()).unwrap();
    let (sols, _) = synthesize_all(&problem, &SynthConfig { max_size: 3, ..SynthConfig::default() }).unwrap();
    let got: Vec<String> = sols.iter().map(|s| s.program.to_string()).collect();
    assert_eq!(got, ["intZero", "succ intZero", "succ (succ intZero)"]);
}
