use std::collections::BTreeSet;

use ecta_synth::brute::brute_force_solutions;
use ecta_synth::{
    synthesize_all, ArrowEncoding, Component, Library, SynthConfig, SynthesisProblem, TypeEnv, TypeExpr,
};
use proptest::prelude::*;

fn con(name: &str, args: Vec<TypeExpr>) -> TypeExpr {
    TypeExpr::con(name, args)
}

/// Types drawn from a small pool, so that components chain often.
fn type_expr(vars: &'static [&'static str]) -> BoxedStrategy<TypeExpr> {
    let int = con("Int", vec![]);
    let mut pool = vec![int.clone(), con("Bool", vec![]), con("[]", vec![int.clone()]), con("Maybe", vec![int])];
    for v in vars {
        let v = TypeExpr::var(v);
        pool.extend([v.clone(), con("[]", vec![v.clone()]), con("Maybe", vec![v.clone()])]);
    }
    if let [a, b, ..] = vars {
        pool.push(con("Either", vec![TypeExpr::var(a), TypeExpr::var(b)]));
    }
    prop::sample::select(pool).boxed()
}

/// A function type with up to three parameters, some possibly functions.
fn component_type(vars: &'static [&'static str]) -> BoxedStrategy<TypeExpr> {
    let param = prop_oneof![
        5 => type_expr(vars),
        1 => (type_expr(vars), type_expr(vars)).prop_map(|(a, b)| TypeExpr::arrow(a, b)),
    ];
    (prop::collection::vec(param, 0..=3), type_expr(vars))
        .prop_map(|(params, ret)| params.into_iter().rev().fold(ret, |acc, p| TypeExpr::arrow(p, acc)))
        .boxed()
}

fn library(types: Vec<TypeExpr>) -> Library {
    let comps = types.into_iter().enumerate().map(|(i, t)| Component::new(&format!("c{i}"), t)).collect();
    Library::new(comps).unwrap()
}

fn substitute(t: &TypeExpr, with: &TypeExpr) -> TypeExpr {
    match t {
        TypeExpr::Var(_) => with.clone(),
        TypeExpr::Con(c, args) => TypeExpr::Con(c.clone(), args.iter().map(|a| substitute(a, with)).collect()),
        TypeExpr::Arrow(a, b) => TypeExpr::arrow(substitute(a, with), substitute(b, with)),
    }
}

/// Parameter types and result types of the library, with variables
/// replaced by `Int` or by the query's own variable `q`.
fn candidate_types(types: &[TypeExpr]) -> (Vec<TypeExpr>, Vec<TypeExpr>) {
    let int = con("Int", vec![]);
    let q = TypeExpr::var("q");
    let (mut consumed, mut produced) = (vec![int.clone()], vec![int.clone()]);
    for t in types {
        let (params, ret) = t.spine();
        for u in params {
            consumed.extend([substitute(u, &int), substitute(u, &q)]);
        }
        produced.extend([substitute(ret, &int), substitute(ret, &q)]);
    }
    (consumed, produced)
}

/// A library with a query whose inputs the library consumes and whose result
/// it produces, so that many problems have solutions.
fn problem_for(components: BoxedStrategy<Vec<TypeExpr>>) -> BoxedStrategy<SynthesisProblem> {
    components
        .prop_flat_map(|types| {
            let (consumed, produced) = candidate_types(&types);
            (Just(types), prop::collection::vec(prop::sample::select(consumed), 0..=2), prop::sample::select(produced))
        })
        .prop_map(|(types, params, ret)| {
            let q = params.into_iter().rev().fold(ret, |acc, p| TypeExpr::arrow(p, acc));
            SynthesisProblem::new(library(types), q).unwrap()
        })
        .boxed()
}

fn solutions_by_size(problem: &SynthesisProblem, config: &SynthConfig) -> Vec<BTreeSet<String>> {
    let (sols, stats) = synthesize_all(problem, config).unwrap();
    assert_eq!(stats.unextracted, 0);
    assert_eq!(stats.measure_violations, 0);
    let mut out = vec![BTreeSet::new(); config.max_size];
    for s in sols {
        assert!(out[s.size - 1].insert(s.program.to_string()), "{} yielded twice", s.program);
    }
    out
}

fn audited(max_size: usize, relevancy: bool) -> SynthConfig {
    SynthConfig { max_size, relevancy, audit: true, ..SynthConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 60, ..ProptestConfig::default() })]

    #[test]
    fn polymorphic_output_is_well_typed(
        problem in problem_for(prop::collection::vec(component_type(&["a", "b"]), 1..=15).boxed()),
        relevancy in any::<bool>(),
    ) {
        let env = TypeEnv::new(&problem.library, &problem.inputs());
        let config = SynthConfig { max_states: Some(200_000), ..audited(3, relevancy) };
        let (sols, stats) = synthesize_all(&problem, &config).unwrap();
        prop_assert_eq!(stats.measure_violations, 0);
        for s in &sols {
            prop_assert_eq!(s.program.size(), s.size);
            prop_assert!(env.check(&s.program, &problem.return_type()).is_ok(), "{} :: {}", s.program, problem.query);
            if relevancy {
                for input in problem.inputs() {
                    prop_assert!(s.program.mentions(&input.name));
                }
            }
        }
    }

    #[test]
    fn monomorphic_matches_brute_force(
        problem in problem_for(prop::collection::vec(component_type(&[]), 1..=6).boxed()),
        relevancy in prop::bool::weighted(0.3),
    ) {
        let max_size = 4;
        let got = solutions_by_size(&problem, &audited(max_size, relevancy));
        for size in 1..=max_size {
            prop_assert_eq!(&got[size - 1], &brute_force_solutions(&problem, size, relevancy), "size {}", size);
        }
    }

    #[test]
    fn polymorphic_matches_brute_force(
        problem in problem_for(prop::collection::vec(component_type(&["a", "b"]), 1..=5).boxed()),
    ) {
        let max_size = 3;
        let got = solutions_by_size(&problem, &audited(max_size, false));
        for size in 1..=max_size {
            prop_assert_eq!(&got[size - 1], &brute_force_solutions(&problem, size, false), "size {}", size);
        }
    }

    #[test]
    fn relevancy_is_the_filtered_search(
        problem in problem_for(prop::collection::vec(component_type(&["a"]), 1..=8).boxed()),
    ) {
        let inputs = problem.inputs();
        let relevant = solutions_by_size(&problem, &audited(4, true));
        let all = solutions_by_size(&problem, &audited(4, false));
        for (r, a) in relevant.iter().zip(&all) {
            let filtered: BTreeSet<String> = a
                .iter()
                .filter(|p| inputs.iter().all(|c| p.split(|ch: char| " ()".contains(ch)).any(|w| w == c.name)))
                .cloned()
                .collect();
            prop_assert_eq!(r, &filtered);
        }
    }
}

fn problem(lib: &str, query: &str) -> SynthesisProblem {
    SynthesisProblem::new(ecta_synth::parse_library(lib).unwrap(), query.parse().unwrap()).unwrap()
}

#[test]
fn static_and_dynamic_reduction_agree() {
    let p = problem(
        "fromMaybe :: a -> Maybe a -> a\nlistToMaybe :: [a] -> Maybe a\ncatMaybes :: [Maybe a] -> [a]\n\
         map :: (a -> b) -> [a] -> [b]\nJust :: a -> Maybe a\nhead :: [a] -> a",
        "a -> [Maybe a] -> a",
    );
    let full = solutions_by_size(&p, &audited(5, true));
    let dynamic = solutions_by_size(&p, &SynthConfig { reduce_rounds: 0, ..audited(5, true) });
    assert_eq!(full, dynamic);
    assert!(full[4].contains("fromMaybe arg0 (listToMaybe (catMaybes arg1))"));
    for size in 1..=5 {
        assert_eq!(full[size - 1], brute_force_solutions(&p, size, true), "size {size}");
    }
}

#[test]
fn the_tag_keeps_constructors_from_passing_as_functions() {
    let p = problem("Left :: a -> Either a b\nx :: Int", "Int");
    let config = SynthConfig { max_size: 3, relevancy: false, ..SynthConfig::default() };
    let tagged = solutions_by_size(&p, &config);
    let untagged = solutions_by_size(&p, &SynthConfig { arrows: ArrowEncoding::Untagged, ..config });
    let env = TypeEnv::new(&p.library, &[]);
    assert_eq!(tagged[0], BTreeSet::from(["x".to_string()]));
    assert!(tagged[1].is_empty() && tagged[2].is_empty(), "{tagged:?}");
    assert!(untagged[2].contains("Left x x"), "{untagged:?}");
    let bad = ecta_synth::Program::call("Left", vec![ecta_synth::Program::name("x"), ecta_synth::Program::name("x")]);
    assert!(env.infer(&bad).is_err());
}

#[test]
fn tagged_results_match_brute_force_with_binary_constructors() {
    let p = problem("Left :: a -> Either a b\nRight :: b -> Either a b\neither :: (a -> c) -> (b -> c) -> Either a b -> c\nx :: Int\nsucc :: Int -> Int", "Int");
    let got = solutions_by_size(&p, &audited(4, false));
    for size in 1..=4 {
        assert_eq!(got[size - 1], brute_force_solutions(&p, size, false), "size {size}");
    }
}
