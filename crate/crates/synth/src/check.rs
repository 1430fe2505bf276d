//! Type checking by first-order unification, independent of the automaton.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::library::{Component, Library};
use crate::program::Program;
use crate::types::TypeExpr;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Ty {
    Meta(u32),
    Con(String, Vec<Ty>),
    Arrow(Box<Ty>, Box<Ty>),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TypeCheckError {
    #[error("unknown name {0}")]
    Unknown(String),
    #[error("cannot unify {0} with {1}")]
    Mismatch(String, String),
    #[error("infinite type: {0} occurs in {1}")]
    Occurs(String, String),
}

/// Component schemes are instantiated afresh at every use; inputs are
/// monomorphic.
#[derive(Clone, Debug, Default)]
pub struct TypeEnv {
    schemes: BTreeMap<String, TypeExpr>,
    monos: BTreeMap<String, TypeExpr>,
}

impl TypeEnv {
    pub fn new(library: &Library, inputs: &[Component]) -> TypeEnv {
        let schemes = library.components().iter().map(|c| (c.name.clone(), c.scheme.clone())).collect();
        let monos = inputs.iter().map(|c| (c.name.clone(), c.scheme.clone())).collect();
        TypeEnv { schemes, monos }
    }

    /// The principal type of `p`, with variables named `t0`, `t1`, ...
    pub fn infer(&self, p: &Program) -> Result<TypeExpr, TypeCheckError> {
        let mut u = Unifier::default();
        let t = u.infer(self, p)?;
        Ok(u.export(&t, &mut BTreeMap::new()))
    }

    /// Whether `p` can be given type `want`. Variables of `want` are rigid.
    pub fn check(&self, p: &Program, want: &TypeExpr) -> Result<(), TypeCheckError> {
        let mut u = Unifier::default();
        let t = u.infer(self, p)?;
        let want = u.import(&want.skolemize(), &mut BTreeMap::new());
        u.unify(&t, &want)
    }
}

#[derive(Default)]
struct Unifier {
    subst: Vec<Option<Ty>>,
}

impl Unifier {
    fn fresh(&mut self) -> Ty {
        self.subst.push(None);
        Ty::Meta(self.subst.len() as u32 - 1)
    }

    fn import(&mut self, t: &TypeExpr, vars: &mut BTreeMap<String, Ty>) -> Ty {
        match t {
            TypeExpr::Var(v) => {
                if let Some(m) = vars.get(v) {
                    return m.clone();
                }
                let m = self.fresh();
                vars.insert(v.clone(), m.clone());
                m
            }
            TypeExpr::Con(c, args) => Ty::Con(c.clone(), args.iter().map(|a| self.import(a, vars)).collect()),
            TypeExpr::Arrow(a, b) => Ty::Arrow(Box::new(self.import(a, vars)), Box::new(self.import(b, vars))),
        }
    }

    fn export(&self, t: &Ty, names: &mut BTreeMap<u32, String>) -> TypeExpr {
        match self.resolve(t) {
            Ty::Meta(m) => {
                let k = names.len();
                TypeExpr::Var(names.entry(m).or_insert_with(|| format!("t{k}")).clone())
            }
            Ty::Con(c, args) => TypeExpr::Con(c, args.iter().map(|a| self.export(a, names)).collect()),
            Ty::Arrow(a, b) => TypeExpr::arrow(self.export(&a, names), self.export(&b, names)),
        }
    }

    /// Follows bindings at the top of `t`.
    fn resolve(&self, t: &Ty) -> Ty {
        let mut t = t.clone();
        while let Ty::Meta(m) = t {
            match &self.subst[m as usize] {
                Some(next) => t = next.clone(),
                None => break,
            }
        }
        t
    }

    fn occurs(&self, m: u32, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Meta(n) => n == m,
            Ty::Con(_, args) => args.iter().any(|a| self.occurs(m, a)),
            Ty::Arrow(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
        }
    }

    fn show(&self, t: &Ty) -> String {
        self.export(t, &mut BTreeMap::new()).to_string()
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> Result<(), TypeCheckError> {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            (Ty::Meta(m), Ty::Meta(n)) if m == n => Ok(()),
            (Ty::Meta(m), t) | (t, Ty::Meta(m)) => {
                if self.occurs(*m, t) {
                    return Err(TypeCheckError::Occurs(self.show(&Ty::Meta(*m)), self.show(t)));
                }
                self.subst[*m as usize] = Some(t.clone());
                Ok(())
            }
            (Ty::Con(c, xs), Ty::Con(d, ys)) if c == d && xs.len() == ys.len() => {
                for (x, y) in xs.iter().zip(ys) {
                    self.unify(x, y)?;
                }
                Ok(())
            }
            (Ty::Arrow(a1, b1), Ty::Arrow(a2, b2)) => {
                self.unify(a1, a2)?;
                self.unify(b1, b2)
            }
            _ => Err(TypeCheckError::Mismatch(self.show(&a), self.show(&b))),
        }
    }

    fn infer(&mut self, env: &TypeEnv, p: &Program) -> Result<Ty, TypeCheckError> {
        match p {
            Program::Name(n) => {
                if let Some(t) = env.monos.get(n) {
                    Ok(self.import(&t.skolemize(), &mut BTreeMap::new()))
                } else if let Some(s) = env.schemes.get(n) {
                    Ok(self.import(s, &mut BTreeMap::new()))
                } else {
                    Err(TypeCheckError::Unknown(n.clone()))
                }
            }
            Program::App(f, a) => {
                let tf = self.infer(env, f)?;
                let ta = self.infer(env, a)?;
                let r = self.fresh();
                self.unify(&tf, &Ty::Arrow(Box::new(ta), Box::new(r.clone())))?;
                Ok(r)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::parse_library;
    use crate::types::parse_type;

    fn env() -> TypeEnv {
        let lib = parse_library(
            "fromMaybe :: a -> Maybe a -> a\nlistToMaybe :: [a] -> Maybe a\ncatMaybes :: [Maybe a] -> [a]\n\
             Left :: a -> Either a b\nid :: a -> a\nx :: Int",
        )
        .unwrap();
        let inputs = vec![
            Component::new("def", parse_type("a").unwrap()),
            Component::new("mbs", parse_type("[Maybe a]").unwrap()),
        ];
        TypeEnv::new(&lib, &inputs)
    }

    fn p(names: &[&str]) -> Program {
        Program::call(names[0], names[1..].iter().map(|n| Program::name(n)).collect())
    }

    #[test]
    fn accepts_the_maybe_pipeline() {
        let prog = Program::call(
            "fromMaybe",
            vec![
                Program::name("def"),
                Program::call("listToMaybe", vec![Program::call("catMaybes", vec![Program::name("mbs")])]),
            ],
        );
        assert_eq!(env().check(&prog, &parse_type("a").unwrap()), Ok(()));
        assert_eq!(env().infer(&prog).unwrap().to_string(), "a");
    }

    #[test]
    fn instantiates_each_use_separately() {
        assert_eq!(env().infer(&p(&["id", "id"])).unwrap().to_string(), "t0 -> t0");
        assert_eq!(env().infer(&p(&["id", "x"])).unwrap().to_string(), "Int");
    }

    #[test]
    fn rejects_ill_typed_programs() {
        assert!(matches!(env().infer(&p(&["Left", "x", "x"])), Err(TypeCheckError::Mismatch(..))));
        assert!(matches!(env().infer(&p(&["x", "x"])), Err(TypeCheckError::Mismatch(..))));
        assert!(matches!(env().infer(&p(&["nope"])), Err(TypeCheckError::Unknown(_))));
        // `def` has the rigid type `a`, so it is not an `Int`.
        assert!(env().check(&p(&["def"]), &parse_type("Int").unwrap()).is_err());
        assert!(env().check(&p(&["x"]), &parse_type("a").unwrap()).is_err());
    }

    #[test]
    fn occurs_check() {
        let lib = parse_library("twice :: (a -> a) -> a -> a\nwrap :: a -> [a]").unwrap();
        let env = TypeEnv::new(&lib, &[]);
        let nested = Program::app(Program::name("wrap"), Program::name("wrap"));
        assert!(env.infer(&nested).is_ok());
        let cyclic = Program::app(Program::name("twice"), Program::name("wrap"));
        assert!(matches!(env.infer(&cyclic), Err(TypeCheckError::Occurs(..))));
    }
}
