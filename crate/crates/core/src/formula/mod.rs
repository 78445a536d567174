//! Quantum-logic formulas: the AST, its concrete syntax, negation normal
//! form, variable renaming, restriction, and the named constructions.
//!
//! Children are reference counted. Constructions such as [`restrict`]
//! substitute one subformula at many leaves, and the resulting trees are
//! exponentially larger than the DAG that actually gets built; every
//! traversal in this crate memoizes on node addresses so work stays
//! proportional to the number of distinct nodes.

mod construct;
mod parse;
mod print;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use construct::{
    gamma_depth, mk_alpha, mk_beta, mk_gamma, mk_p, mk_separator, separator_stage_formula,
    Constructed,
};
pub use parse::parse;
pub use print::print;

/// A well-formed formula over meet, join, orthocomplement, top and bottom.
#[derive(Clone, PartialEq, Eq)]
pub enum Formula {
    Var(String),
    Top,
    Bot,
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
}

const KEYWORDS: [&str; 2] = ["top", "bot"];

/// `letter { letter | digit | "_" }`, excluding the keywords `top` and `bot`.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphabetic() || c.is_ascii_digit() || c == '_') && !KEYWORDS.contains(&name)
}

impl Formula {
    /// A variable leaf.
    ///
    /// Panics if `name` is not a valid identifier; use [`Formula::try_var`]
    /// for untrusted input.
    pub fn var(name: impl Into<String>) -> Formula {
        let name = name.into();
        assert!(is_identifier(&name), "invalid identifier {name:?}");
        Formula::Var(name)
    }

    pub fn try_var(name: impl Into<String>) -> Result<Formula> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Formula::Var(name))
        } else {
            Err(Error::InvalidIdentifier(name))
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: impl Into<Arc<Formula>>) -> Formula {
        Formula::Not(f.into())
    }

    pub fn and(l: impl Into<Arc<Formula>>, r: impl Into<Arc<Formula>>) -> Formula {
        Formula::And(l.into(), r.into())
    }

    pub fn or(l: impl Into<Arc<Formula>>, r: impl Into<Arc<Formula>>) -> Formula {
        Formula::Or(l.into(), r.into())
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Var(_) | Formula::Top | Formula::Bot)
    }

    /// Variables in first-occurrence (left-to-right) order.
    pub fn vars(&self) -> VarList {
        fn walk(f: &Formula, seen: &mut HashSet<*const Formula>, out: &mut VarList) {
            if !seen.insert(f as *const Formula) {
                return;
            }
            match f {
                Formula::Var(name) => out.push_unique(name),
                Formula::Top | Formula::Bot => {}
                Formula::Not(c) => walk(c, seen, out),
                Formula::And(l, r) | Formula::Or(l, r) => {
                    walk(l, seen, out);
                    walk(r, seen, out);
                }
            }
        }
        let mut out = VarList::default();
        walk(self, &mut HashSet::new(), &mut out);
        out
    }

    /// Number of distinct nodes in the underlying DAG.
    pub fn dag_size(&self) -> usize {
        fn walk(f: &Formula, seen: &mut HashSet<*const Formula>) {
            if !seen.insert(f as *const Formula) {
                return;
            }
            match f {
                Formula::Not(c) => walk(c, seen),
                Formula::And(l, r) | Formula::Or(l, r) => {
                    walk(l, seen);
                    walk(r, seen);
                }
                _ => {}
            }
        }
        let mut seen = HashSet::new();
        walk(self, &mut seen);
        seen.len()
    }

    /// Number of nodes of the formula read as a tree. Saturates at `u64::MAX`.
    pub fn tree_size(&self) -> u64 {
        fn walk(f: &Formula, memo: &mut HashMap<*const Formula, u64>) -> u64 {
            let key = f as *const Formula;
            if let Some(&n) = memo.get(&key) {
                return n;
            }
            let n = match f {
                Formula::Var(_) | Formula::Top | Formula::Bot => 1,
                Formula::Not(c) => walk(c, memo).saturating_add(1),
                Formula::And(l, r) | Formula::Or(l, r) => walk(l, memo)
                    .saturating_add(walk(r, memo))
                    .saturating_add(1),
            };
            memo.insert(key, n);
            n
        }
        walk(self, &mut HashMap::new())
    }

    /// Merge structurally identical subtrees into shared nodes.
    ///
    /// Parsed formulas are plain trees; sharing them makes evaluation cost
    /// proportional to the number of distinct subterms.
    pub fn hash_cons(&self) -> Formula {
        #[derive(PartialEq, Eq, Hash)]
        enum Key {
            Var(String),
            Top,
            Bot,
            Not(usize),
            And(usize, usize),
            Or(usize, usize),
        }
        struct Interner {
            by_key: HashMap<Key, Arc<Formula>>,
            by_addr: HashMap<*const Formula, Arc<Formula>>,
        }
        impl Interner {
            fn intern(&mut self, f: &Formula) -> Arc<Formula> {
                let addr = f as *const Formula;
                if let Some(done) = self.by_addr.get(&addr) {
                    return done.clone();
                }
                let (key, node) = match f {
                    Formula::Var(v) => (Key::Var(v.clone()), f.clone()),
                    Formula::Top => (Key::Top, Formula::Top),
                    Formula::Bot => (Key::Bot, Formula::Bot),
                    Formula::Not(c) => {
                        let c = self.intern(c);
                        (Key::Not(Arc::as_ptr(&c) as usize), Formula::Not(c))
                    }
                    Formula::And(l, r) => {
                        let (l, r) = (self.intern(l), self.intern(r));
                        let key = Key::And(Arc::as_ptr(&l) as usize, Arc::as_ptr(&r) as usize);
                        (key, Formula::And(l, r))
                    }
                    Formula::Or(l, r) => {
                        let (l, r) = (self.intern(l), self.intern(r));
                        let key = Key::Or(Arc::as_ptr(&l) as usize, Arc::as_ptr(&r) as usize);
                        (key, Formula::Or(l, r))
                    }
                };
                let shared = self.by_key.entry(key).or_insert_with(|| Arc::new(node)).clone();
                self.by_addr.insert(addr, shared.clone());
                shared
            }
        }
        let mut interner = Interner { by_key: HashMap::new(), by_addr: HashMap::new() };
        interner.intern(self).as_ref().clone()
    }

    /// Rename every variable by appending `suffix`.
    pub fn freshen(&self, suffix: &str) -> Result<Formula> {
        if suffix.is_empty()
            || !suffix.chars().all(|c| c.is_alphabetic() || c.is_ascii_digit() || c == '_')
        {
            return Err(Error::InvalidArgument(format!("bad freshening suffix {suffix:?}")));
        }
        for v in self.vars().iter() {
            let renamed = format!("{v}{suffix}");
            if !is_identifier(&renamed) {
                return Err(Error::InvalidIdentifier(renamed));
            }
        }
        Ok(self.map_vars(&|name| Formula::Var(format!("{name}{suffix}"))))
    }

    /// Replace each variable leaf by `leaf(name)`, preserving sharing.
    fn map_vars(&self, leaf: &dyn Fn(&str) -> Formula) -> Formula {
        fn walk(
            f: &Formula,
            leaf: &dyn Fn(&str) -> Formula,
            memo: &mut HashMap<*const Formula, Arc<Formula>>,
        ) -> Arc<Formula> {
            let key = f as *const Formula;
            if let Some(done) = memo.get(&key) {
                return done.clone();
            }
            let out = Arc::new(match f {
                Formula::Var(name) => leaf(name),
                Formula::Top => Formula::Top,
                Formula::Bot => Formula::Bot,
                Formula::Not(c) => Formula::Not(walk(c, leaf, memo)),
                Formula::And(l, r) => Formula::And(walk(l, leaf, memo), walk(r, leaf, memo)),
                Formula::Or(l, r) => Formula::Or(walk(l, leaf, memo), walk(r, leaf, memo)),
            });
            memo.insert(key, out.clone());
            out
        }
        walk(self, leaf, &mut HashMap::new()).as_ref().clone()
    }

    /// Negation normal form: orthocomplements pushed down to variables by
    /// De Morgan, with `!top = bot`, `!bot = top` and `!!x = x`.
    pub fn nnf(&self) -> Formula {
        type Memo = HashMap<(*const Formula, bool), Arc<Formula>>;
        fn walk(f: &Formula, negated: bool, memo: &mut Memo) -> Arc<Formula> {
            let key = (f as *const Formula, negated);
            if let Some(done) = memo.get(&key) {
                return done.clone();
            }
            let out = match (f, negated) {
                (Formula::Var(_), false) => Arc::new(f.clone()),
                (Formula::Var(_), true) => Arc::new(Formula::Not(Arc::new(f.clone()))),
                (Formula::Top, false) | (Formula::Bot, true) => Arc::new(Formula::Top),
                (Formula::Bot, false) | (Formula::Top, true) => Arc::new(Formula::Bot),
                (Formula::Not(c), _) => walk(c, !negated, memo),
                (Formula::And(l, r), false) => {
                    Arc::new(Formula::And(walk(l, false, memo), walk(r, false, memo)))
                }
                (Formula::Or(l, r), false) => {
                    Arc::new(Formula::Or(walk(l, false, memo), walk(r, false, memo)))
                }
                (Formula::And(l, r), true) => {
                    Arc::new(Formula::Or(walk(l, true, memo), walk(r, true, memo)))
                }
                (Formula::Or(l, r), true) => {
                    Arc::new(Formula::And(walk(l, true, memo), walk(r, true, memo)))
                }
            };
            memo.insert(key, out.clone());
            out
        }
        walk(self, false, &mut HashMap::new()).as_ref().clone()
    }

    /// True when every `Not` sits directly on a variable.
    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => true,
            Formula::Not(c) => matches!(c.as_ref(), Formula::Var(_)),
            Formula::And(l, r) | Formula::Or(l, r) => l.is_nnf() && r.is_nnf(),
        }
    }
}

/// Relativize `alpha` to the subspace computed by `beta`.
///
/// Works on `nnf(alpha)`: a positive leaf `u` becomes `u & beta`, a
/// negated leaf `!u` becomes `!(u & beta) & beta`, `top` becomes `beta` and
/// `bot` stays `bot`. The variable sets must be disjoint.
pub fn restrict(alpha: &Formula, beta: &Formula) -> Result<Formula> {
    let beta_vars = beta.vars();
    let overlap: Vec<String> =
        alpha.vars().iter().filter(|v| beta_vars.contains(v)).map(str::to_owned).collect();
    if !overlap.is_empty() {
        return Err(Error::VariableOverlap(overlap));
    }

    struct Rewriter {
        beta: Arc<Formula>,
        // One `u & beta` node per variable, shared by its positive and
        // negated occurrences.
        relativized: HashMap<String, Arc<Formula>>,
        memo: HashMap<*const Formula, Arc<Formula>>,
    }
    impl Rewriter {
        fn leaf(&mut self, name: &str) -> Arc<Formula> {
            let beta = self.beta.clone();
            self.relativized
                .entry(name.to_owned())
                .or_insert_with(|| Arc::new(Formula::And(Arc::new(Formula::Var(name.to_owned())), beta)))
                .clone()
        }
        fn walk(&mut self, f: &Formula) -> Arc<Formula> {
            let key = f as *const Formula;
            if let Some(done) = self.memo.get(&key) {
                return done.clone();
            }
            let out = match f {
                Formula::Var(name) => self.leaf(name),
                Formula::Top => self.beta.clone(),
                Formula::Bot => Arc::new(Formula::Bot),
                Formula::Not(c) => match c.as_ref() {
                    Formula::Var(name) => {
                        let inner = self.leaf(name);
                        Arc::new(Formula::And(Arc::new(Formula::Not(inner)), self.beta.clone()))
                    }
                    _ => unreachable!("input is in negation normal form"),
                },
                Formula::And(l, r) => Arc::new(Formula::And(self.walk(l), self.walk(r))),
                Formula::Or(l, r) => Arc::new(Formula::Or(self.walk(l), self.walk(r))),
            };
            self.memo.insert(key, out.clone());
            out
        }
    }

    let normal = alpha.nnf();
    let mut rw = Rewriter {
        beta: Arc::new(beta.clone()),
        relativized: HashMap::new(),
        memo: HashMap::new(),
    };
    Ok(rw.walk(&normal).as_ref().clone())
}

/// Ordered, duplicate-free list of variable names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarList(Vec<String>);

impl VarList {
    fn push_unique(&mut self, name: &str) {
        if !self.contains(name) {
            self.0.push(name.to_owned());
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.iter().any(|v| v == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<String> {
        self.0
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({})", print(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = crate::error::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&print(self))
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map(|f| f.hash_cons()).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Formula {
        Formula::var(n)
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("a"));
        assert!(is_identifier("a_1"));
        assert!(is_identifier("ψ2"));
        assert!(!is_identifier("1a"));
        assert!(!is_identifier("_a"));
        assert!(!is_identifier("top"));
        assert!(!is_identifier(""));
        assert!(Formula::try_var("bot").is_err());
    }

    #[test]
    fn vars_in_first_occurrence_order() {
        let f = parse("(b | !a) & (c | b) & a").unwrap();
        assert_eq!(f.vars().into_vec(), vec!["b", "a", "c"]);
    }

    #[test]
    fn nnf_de_morgan() {
        assert_eq!(Formula::not(Formula::and(v("a"), v("b"))).nnf(), parse("!a | !b").unwrap());
        assert_eq!(Formula::not(Formula::not(v("a"))).nnf(), v("a"));
        assert_eq!(Formula::not(Formula::Top).nnf(), Formula::Bot);
        assert_eq!(Formula::not(Formula::Bot).nnf(), Formula::Top);
        let f = parse("!(a | !(b & top))").unwrap();
        assert_eq!(f.nnf(), parse("!a & (b & top)").unwrap());
        assert!(f.nnf().is_nnf());
    }

    #[test]
    fn freshen_renames_all() {
        assert_eq!(v("a").freshen("_1").unwrap(), v("a_1"));
        let alpha = mk_alpha("a", "b");
        assert_eq!(alpha.freshen("_s2").unwrap(), mk_alpha("a_s2", "b_s2"));
        let twice = v("a").freshen("_x").unwrap().freshen("_y").unwrap();
        assert_eq!(twice, v("a_x_y"));
        assert!(v("a").freshen("").is_err());
        assert!(v("a").freshen("-").is_err());
    }

    #[test]
    fn restrict_base_cases() {
        assert_eq!(restrict(&v("u"), &v("v")).unwrap(), parse("u & v").unwrap());
        assert_eq!(
            restrict(&Formula::not(v("u")), &v("v")).unwrap(),
            parse("!(u & v) & v").unwrap()
        );
        assert_eq!(restrict(&Formula::Top, &v("v")).unwrap(), v("v"));
        assert_eq!(restrict(&Formula::Bot, &v("v")).unwrap(), Formula::Bot);
    }

    #[test]
    fn restrict_rejects_overlap() {
        let err = restrict(&parse("a & b").unwrap(), &parse("b | c").unwrap()).unwrap_err();
        match err {
            Error::VariableOverlap(vs) => assert_eq!(vs, vec!["b".to_owned()]),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn restrict_wraps_every_variable() {
        // every occurrence of an alpha variable sits as the left child of an
        // `u & beta` node
        fn check(f: &Formula, alpha_vars: &VarList, beta: &Formula, parent_ok: bool) {
            match f {
                Formula::Var(name) if alpha_vars.contains(name) => assert!(parent_ok, "{name}"),
                Formula::And(l, r) => {
                    let wraps = matches!(l.as_ref(), Formula::Var(n) if alpha_vars.contains(n))
                        && r.as_ref() == beta;
                    check(l, alpha_vars, beta, wraps);
                    if !wraps {
                        check(r, alpha_vars, beta, false);
                    }
                }
                Formula::Or(l, r) => {
                    check(l, alpha_vars, beta, false);
                    check(r, alpha_vars, beta, false);
                }
                Formula::Not(c) => check(c, alpha_vars, beta, false),
                _ => {}
            }
        }
        let alpha = mk_alpha("a", "b");
        let beta = mk_alpha("c", "d");
        let r = restrict(&alpha, &beta).unwrap();
        check(&r, &alpha.vars(), &beta, false);
        assert_eq!(r.vars().into_vec(), vec!["b", "d", "c", "a"]);
    }

    #[test]
    fn hash_cons_shares_identical_subtrees() {
        let f = parse("(a & b) | (a & b) | !(a & b)").unwrap();
        let shared = f.hash_cons();
        assert_eq!(shared, f);
        assert!(shared.dag_size() < f.dag_size());
        assert_eq!(shared.tree_size(), f.tree_size());
    }
}
