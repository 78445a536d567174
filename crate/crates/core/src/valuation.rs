//! Evaluation of formulas on subspace assignments, and a numerical check
//! of the restriction lemma.

use std::collections::HashMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{is_identifier, restrict, Formula};
use crate::subspace::{Isometry, Matrix, Subspace, SubspaceJson, Tolerance};

/// Projector distance under which two computed subspaces count as equal.
pub const LEMMA_PROJECTOR_TOL: f64 = 1e-8;

/// An ordered assignment of subspaces of a common `ℂ^n` to variable names.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    ambient: usize,
    bindings: IndexMap<String, Subspace>,
}

impl Environment {
    pub fn new(ambient: usize) -> Environment {
        Environment { ambient, bindings: IndexMap::new() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Add a binding. Names may not be rebound.
    pub fn bind(&mut self, name: impl Into<String>, s: Subspace) -> Result<()> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(Error::InvalidIdentifier(name));
        }
        if s.ambient() != self.ambient {
            return Err(Error::AmbientMismatch { left: self.ambient, right: s.ambient() });
        }
        if self.bindings.contains_key(&name) {
            return Err(Error::Rebinding(name));
        }
        self.bindings.insert(name, s);
        Ok(())
    }

    pub fn with(mut self, name: impl Into<String>, s: Subspace) -> Result<Environment> {
        self.bind(name, s)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Subspace> {
        self.bindings.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Subspace)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Append `suffix` to every bound name.
    pub fn freshen(&self, suffix: &str) -> Result<Environment> {
        let mut out = Environment::new(self.ambient);
        for (name, s) in self.iter() {
            out.bind(format!("{name}{suffix}"), s.clone())?;
        }
        Ok(out)
    }

    /// Every binding moved by the unitary `u`.
    pub fn apply_unitary(&self, u: &Matrix) -> Result<Environment> {
        let mut out = Environment::new(self.ambient);
        for (name, s) in self.iter() {
            out.bind(name, s.apply_unitary(u)?)?;
        }
        Ok(out)
    }

    /// Every binding copied into the first coordinates of `ℂ^ambient`.
    pub fn embed(&self, ambient: usize) -> Result<Environment> {
        let mut out = Environment::new(ambient);
        for (name, s) in self.iter() {
            out.bind(name, s.embed(ambient)?)?;
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct EnvironmentJson {
    ambient: usize,
    bindings: IndexMap<String, SubspaceJson>,
}

impl Serialize for Environment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EnvironmentJson {
            ambient: self.ambient,
            bindings: self.iter().map(|(k, v)| (k.to_owned(), SubspaceJson::from(v))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Environment {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = EnvironmentJson::deserialize(d)?;
        let tol = Tolerance::default();
        let mut env = Environment::new(raw.ambient);
        for (name, json) in raw.bindings {
            let s = json.into_subspace(&tol).map_err(D::Error::custom)?;
            env.bind(name, s).map_err(D::Error::custom)?;
        }
        Ok(env)
    }
}

/// Value of a formula together with whether every rank decision along the
/// way was clear of the guard band.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: Subspace,
    pub clear: bool,
}

/// Evaluate `f` with its variables bound by `env`.
pub fn evaluate(f: &Formula, env: &Environment, tol: &Tolerance) -> Result<Subspace> {
    Ok(evaluate_checked(f, env, tol)?.value)
}

pub fn evaluate_checked(f: &Formula, env: &Environment, tol: &Tolerance) -> Result<Evaluation> {
    struct Walker<'a> {
        env: &'a Environment,
        tol: &'a Tolerance,
        memo: HashMap<*const Formula, Subspace>,
        clear: bool,
    }
    impl Walker<'_> {
        fn eval(&mut self, f: &Formula) -> Result<Subspace> {
            let key = f as *const Formula;
            if let Some(done) = self.memo.get(&key) {
                return Ok(done.clone());
            }
            let n = self.env.ambient;
            let value = match f {
                Formula::Var(name) => self
                    .env
                    .get(name)
                    .cloned()
                    .ok_or_else(|| Error::UnboundVariable(name.clone()))?,
                Formula::Top => Subspace::top(n),
                Formula::Bot => Subspace::bot(n),
                Formula::Not(c) => {
                    let s = self.eval(c)?.complement_checked(self.tol);
                    self.clear &= s.clear;
                    s.subspace
                }
                Formula::And(l, r) => {
                    let (l, r) = (self.eval(l)?, self.eval(r)?);
                    let s = l.meet_checked(&r, self.tol)?;
                    self.clear &= s.clear;
                    s.subspace
                }
                Formula::Or(l, r) => {
                    let (l, r) = (self.eval(l)?, self.eval(r)?);
                    let s = l.join_checked(&r, self.tol)?;
                    self.clear &= s.clear;
                    s.subspace
                }
            };
            self.memo.insert(key, value.clone());
            Ok(value)
        }
    }
    let mut w = Walker { env, tol, memo: HashMap::new(), clear: true };
    let value = w.eval(f)?;
    Ok(Evaluation { value, clear: w.clear })
}

/// Both sides of the restriction lemma for one assignment.
#[derive(Debug, Clone, Serialize)]
pub struct RestrictionReport {
    /// Dimension of `Ξ(β)`, the relative top.
    pub relative_top_dim: usize,
    pub direct_dim: usize,
    pub relative_dim: usize,
    pub projector_distance: f64,
    pub equal: bool,
}

/// Evaluate `alpha|beta` directly in `ℂ^n`, and separately evaluate `alpha`
/// inside `W = Ξ(beta)` with each variable `u` bound to `S_u ∧ W`; report
/// whether the two results agree.
pub fn check_restriction_lemma(
    alpha: &Formula,
    beta: &Formula,
    env: &Environment,
    tol: &Tolerance,
) -> Result<RestrictionReport> {
    let restricted = restrict(alpha, beta)?;
    let direct = evaluate(&restricted, env, tol)?;

    let w = evaluate(beta, env, tol)?;
    let iso = Isometry::onto(&w);
    let mut inner = Environment::new(w.dim());
    for name in alpha.vars().iter() {
        let s = env.get(name).ok_or_else(|| Error::UnboundVariable(name.to_owned()))?;
        inner.bind(name, iso.pullback(&s.meet(&w, tol)?, tol)?)?;
    }
    let relative = iso.pushforward(&evaluate(alpha, &inner, tol)?)?;

    let projector_distance = direct.projector_distance(&relative)?;
    Ok(RestrictionReport {
        relative_top_dim: w.dim(),
        direct_dim: direct.dim(),
        relative_dim: relative.dim(),
        projector_distance,
        equal: direct.dim() == relative.dim() && projector_distance < LEMMA_PROJECTOR_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{mk_alpha, mk_p, parse};
    use crate::subspace::{random_subspace_with, random_unitary};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn line(v: &[f64]) -> Subspace {
        let v: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Subspace::from_spanning(std::slice::from_ref(&v), v.len(), &tol()).unwrap()
    }

    fn pair(s: Subspace, t: Subspace) -> Environment {
        Environment::new(s.ambient()).with("a", s).unwrap().with("b", t).unwrap()
    }

    #[test]
    fn contradiction_is_bottom() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = parse("a & !a").unwrap();
        for d in 0..=3 {
            let env = Environment::new(3).with("a", random_subspace_with(&mut rng, 3, d, &tol())).unwrap();
            assert!(evaluate(&f, &env, &tol()).unwrap().is_bot());
        }
    }

    #[test]
    fn alpha_on_equal_arguments_is_bottom() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_subspace_with(&mut rng, 4, 2, &tol());
        assert!(evaluate(&mk_alpha("a", "b"), &pair(s.clone(), s), &tol()).unwrap().is_bot());
    }

    #[test]
    fn alpha_on_line_pair() {
        let env = pair(line(&[1.0, 0.0]), line(&[1.0, 1.0]));
        assert_eq!(evaluate(&mk_alpha("a", "b"), &env, &tol()).unwrap().dim(), 1);
        assert_eq!(evaluate(&mk_p("a", "b"), &env, &tol()).unwrap().dim(), 1);
    }

    #[test]
    fn p_of_a_with_itself() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in 0..=4 {
            let s = random_subspace_with(&mut rng, 4, d, &tol());
            let env = Environment::new(4).with("a", s.clone()).unwrap();
            assert!(evaluate(&mk_p("a", "a"), &env, &tol()).unwrap().equal(&s, 1e-9).unwrap());
        }
    }

    #[test]
    fn unbound_variable_is_named() {
        let env = Environment::new(2).with("a", line(&[1.0, 0.0])).unwrap();
        match evaluate(&mk_p("a", "b"), &env, &tol()) {
            Err(Error::UnboundVariable(v)) => assert_eq!(v, "b"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn environment_rules() {
        let mut env = Environment::new(2);
        env.bind("a", line(&[1.0, 0.0])).unwrap();
        assert!(matches!(env.bind("a", line(&[0.0, 1.0])), Err(Error::Rebinding(_))));
        assert!(matches!(env.bind("b", line(&[1.0, 0.0, 0.0])), Err(Error::AmbientMismatch { .. })));
        assert!(matches!(env.bind("1x", line(&[1.0, 0.0])), Err(Error::InvalidIdentifier(_))));
    }

    #[test]
    fn environment_json_keeps_order() {
        let env = Environment::new(2)
            .with("z", line(&[1.0, 0.0]))
            .unwrap()
            .with("a", Subspace::bot(2))
            .unwrap();
        let json = serde_json::to_string(&env).unwrap();
        assert!(json.starts_with(r#"{"ambient":2,"bindings":{"z":"#), "{json}");
        let back: Environment = serde_json::from_str(&json).unwrap();
        assert_eq!(back.iter().map(|(k, _)| k).collect::<Vec<_>>(), vec!["z", "a"]);
        let bad = r#"{"ambient":2,"bindings":{"a":{"ambient":3,"basis":[]}}}"#;
        assert!(serde_json::from_str::<Environment>(bad).is_err());
    }

    #[test]
    fn restriction_lemma_base_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let alpha = mk_alpha("a", "b");
        let env = Environment::new(4)
            .with("a", random_subspace_with(&mut rng, 4, 2, &tol()))
            .unwrap()
            .with("b", random_subspace_with(&mut rng, 4, 2, &tol()))
            .unwrap()
            .with("u", random_subspace_with(&mut rng, 4, 3, &tol()))
            .unwrap()
            .with("v", random_subspace_with(&mut rng, 4, 3, &tol()))
            .unwrap();
        let top = check_restriction_lemma(&alpha, &Formula::Top, &env, &tol()).unwrap();
        assert!(top.equal);
        assert_eq!(top.direct_dim, evaluate(&alpha, &env, &tol()).unwrap().dim());

        let beta = parse("u | v & !u").unwrap();
        let single = check_restriction_lemma(&Formula::var("u2"), &beta, &env.clone().with("u2", random_subspace_with(&mut rng, 4, 2, &tol())).unwrap(), &tol()).unwrap();
        assert!(single.equal);

        let gamma = mk_alpha("u", "v");
        let r = check_restriction_lemma(&alpha, &gamma, &env, &tol()).unwrap();
        assert!(r.equal, "{r:?}");
        assert!(check_restriction_lemma(&alpha, &mk_alpha("a", "v"), &env, &tol()).is_err());
    }

    #[test]
    fn unitary_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = parse("(a | !b) & (c | a & !b) | !(b & c)").unwrap();
        for _ in 0..20 {
            let mut env = Environment::new(4);
            for name in ["a", "b", "c"] {
                let d = rng.random_range(0..=4);
                env.bind(name, random_subspace_with(&mut rng, 4, d, &tol())).unwrap();
            }
            let u = random_unitary(&mut rng, 4);
            let lhs = evaluate(&f, &env.apply_unitary(&u).unwrap(), &tol()).unwrap();
            let rhs = evaluate(&f, &env, &tol()).unwrap().apply_unitary(&u).unwrap();
            assert!(lhs.equal(&rhs, 1e-8).unwrap());
        }
    }

    use rand::Rng;
}
