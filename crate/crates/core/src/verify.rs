//! Randomized verification suites for the lattice laws and the dimension
//! lemmas, shared by the `verify` command and the test suites.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dbar::{
    estimate_dbar, witness_alpha_at, witness_beta, AlphaConditions, DimsStrategy,
};
use crate::dbar::alpha_projection_gap;
use crate::error::Result;
use crate::formula::{mk_alpha, mk_beta, mk_p, parse, print, Formula};
use crate::subspace::{random_subspace_with, Isometry, Subspace, Tolerance};
use crate::valuation::{check_restriction_lemma, evaluate, Environment, LEMMA_PROJECTOR_TOL};

/// Residual tolerance for subspace equality in the law checks.
const EQ_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Ortholattice,
    RestrictionLemma,
    PLemma,
    AlphaLemma,
    BetaLemma,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] =
        [Suite::Ortholattice, Suite::RestrictionLemma, Suite::PLemma, Suite::AlphaLemma, Suite::BetaLemma];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Ortholattice => "ortholattice",
            Suite::RestrictionLemma => "restriction-lemma",
            Suite::PLemma => "p-lemma",
            Suite::AlphaLemma => "alpha-lemma",
            Suite::BetaLemma => "beta-lemma",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        [Suite::All].iter().chain(Suite::EACH.iter()).find(|x| x.name() == s).copied().ok_or_else(|| {
            format!(
                "unknown suite {s:?}; expected one of all, ortholattice, restriction-lemma, p-lemma, alpha-lemma, beta-lemma"
            )
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub tol: Tolerance,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { trials: 200, seed: 0, tol: Tolerance::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    /// First failure, if any.
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Tally {
    suite: &'static str,
    name: String,
    trials: usize,
    failures: usize,
    detail: Option<String>,
}

impl Tally {
    fn new(suite: Suite, name: &str) -> Tally {
        Tally { suite: suite.name(), name: name.to_owned(), trials: 0, failures: 0, detail: None }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.detail.is_none() {
                self.detail = Some(detail());
            }
        }
    }

    fn record_result(&mut self, r: Result<bool>, detail: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, detail),
            Err(e) => self.record(false, || format!("{}: {e}", detail())),
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            suite: self.suite,
            name: self.name,
            trials: self.trials,
            failures: self.failures,
            detail: self.detail,
        }
    }
}

fn rng_for(cfg: &VerifyConfig, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    rng
}

fn any_subspace<R: Rng>(rng: &mut R, n: usize, tol: &Tolerance) -> Subspace {
    let d = rng.random_range(0..=n);
    random_subspace_with(rng, n, d, tol)
}

/// Random formula with at most `max_nodes` nodes over the given variables.
pub fn random_formula<R: Rng>(rng: &mut R, max_nodes: usize, vars: &[&str]) -> Formula {
    fn build<R: Rng>(rng: &mut R, budget: usize, vars: &[&str]) -> Formula {
        if budget <= 1 || rng.random_bool(0.2) {
            return match rng.random_range(0..10) {
                0 => Formula::Top,
                1 => Formula::Bot,
                _ => Formula::var(vars[rng.random_range(0..vars.len())]),
            };
        }
        if budget == 2 || rng.random_bool(0.25) {
            return Formula::not(build(rng, budget - 1, vars));
        }
        let left = rng.random_range(1..budget - 1);
        let (l, r) = (build(rng, left, vars), build(rng, budget - 1 - left, vars));
        if rng.random_bool(0.5) {
            Formula::and(l, r)
        } else {
            Formula::or(l, r)
        }
    }
    let budget = rng.random_range(1..=max_nodes.max(1));
    build(rng, budget, vars)
}

fn bind_all<R: Rng>(rng: &mut R, vars: &[&str], n: usize, tol: &Tolerance) -> Environment {
    let mut env = Environment::new(n);
    for v in vars {
        env.bind(*v, any_subspace(rng, n, tol)).expect("fresh names");
    }
    env
}

fn ortholattice(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let tol = &cfg.tol;
    let suite = Suite::Ortholattice;
    let mut out = Vec::new();

    let mut idem = Tally::new(suite, "meet idempotent (C^4)");
    let mut excluded = Tally::new(suite, "join with complement is top (C^4)");
    let mut contradiction = Tally::new(suite, "meet with complement is bottom (C^4)");
    let mut de_morgan = Tally::new(suite, "De Morgan (C^4)");
    let mut involution = Tally::new(suite, "double complement (C^5)");
    let mut rng = rng_for(cfg, 1);
    for _ in 0..cfg.trials {
        let s = any_subspace(&mut rng, 4, tol);
        let t = any_subspace(&mut rng, 4, tol);
        idem.record_result(s.meet(&s, tol).and_then(|m| m.equal(&s, EQ_TOL)), || format!("dim S = {}", s.dim()));
        excluded.record_result(s.join(&s.complement(tol), tol).map(|j| j.is_top()), || format!("dim S = {}", s.dim()));
        contradiction.record_result(s.meet(&s.complement(tol), tol).map(|m| m.is_bot()), || format!("dim S = {}", s.dim()));
        let lhs = s.join(&t, tol).map(|j| j.complement(tol));
        let rhs = s.complement(tol).meet(&t.complement(tol), tol);
        de_morgan.record_result(
            lhs.and_then(|l| rhs.and_then(|r| l.equal(&r, EQ_TOL))),
            || format!("dims ({}, {})", s.dim(), t.dim()),
        );
        let u = any_subspace(&mut rng, 5, tol);
        involution.record_result(u.complement(tol).complement(tol).equal(&u, EQ_TOL), || format!("dim {}", u.dim()));
    }
    out.extend([idem.finish(), excluded.finish(), contradiction.finish(), de_morgan.finish(), involution.finish()]);

    let mut modular = Tally::new(suite, "modular law S <= U => S | (T & U) = (S | T) & U (C^5)");
    let mut dims = Tally::new(suite, "dim(S|T) + dim(S&T) = dim S + dim T (C^5)");
    let mut rng = rng_for(cfg, 2);
    for _ in 0..cfg.trials {
        let u = any_subspace(&mut rng, 5, tol);
        let inner = any_subspace(&mut rng, u.dim(), tol);
        let s = Isometry::onto(&u).pushforward(&inner).expect("shapes agree");
        let t = any_subspace(&mut rng, 5, tol);
        let ok = (|| -> Result<bool> {
            let lhs = s.join(&t.meet(&u, tol)?, tol)?;
            let rhs = s.join(&t, tol)?.meet(&u, tol)?;
            lhs.equal(&rhs, EQ_TOL)
        })();
        modular.record_result(ok, || format!("dims S={}, T={}, U={}", s.dim(), t.dim(), u.dim()));
        let a = any_subspace(&mut rng, 5, tol);
        let ok = (|| -> Result<bool> {
            Ok(a.join(&t, tol)?.dim() + a.meet(&t, tol)?.dim() == a.dim() + t.dim())
        })();
        dims.record_result(ok, || format!("dims ({}, {})", a.dim(), t.dim()));
    }
    out.extend([modular.finish(), dims.finish()]);

    let vars = ["a", "b", "c", "d"];
    let mut nnf = Tally::new(suite, "negation normal form preserves value (C^4)");
    let mut round_trip = Tally::new(suite, "parse(print(f)) = f");
    let mut rng = rng_for(cfg, 3);
    for _ in 0..cfg.trials {
        let f = random_formula(&mut rng, 12, &vars);
        let env = bind_all(&mut rng, &vars, 4, tol);
        let normal = f.nnf();
        let ok = (|| -> Result<bool> {
            Ok(normal.is_nnf() && evaluate(&f, &env, tol)?.equal(&evaluate(&normal, &env, tol)?, EQ_TOL)?)
        })();
        nnf.record_result(ok, || print(&f));
        let text = print(&f);
        round_trip.record(parse(&text).map(|g| g == f).unwrap_or(false), || text.clone());
    }
    out.extend([nnf.finish(), round_trip.finish()]);
    out
}

fn restriction_lemma(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let tol = &cfg.tol;
    let mut tally = Tally::new(Suite::RestrictionLemma, "alpha|beta evaluated directly = alpha inside Xi(beta) (C^6)");
    let mut rng = rng_for(cfg, 10);
    let beta = mk_alpha("c", "d");
    let vars = ["u", "v", "w"];
    for _ in 0..cfg.trials {
        let alpha = random_formula(&mut rng, 10, &vars);
        let mut env = bind_all(&mut rng, &vars, 6, tol);
        for name in ["c", "d"] {
            env.bind(name, any_subspace(&mut rng, 6, tol)).expect("fresh names");
        }
        let report = check_restriction_lemma(&alpha, &beta, &env, tol);
        tally.record_result(report.as_ref().map(|r| r.equal).map_err(|e| crate::Error::InvalidArgument(e.to_string())), || {
            format!("alpha = {}, report = {:?}", print(&alpha), report.as_ref().ok())
        });
    }
    vec![tally.finish()]
}

fn p_lemma(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let tol = &cfg.tol;
    let suite = Suite::PLemma;
    let pab = mk_p("a", "b");
    let pba = mk_p("b", "a");
    let mut symmetric = Tally::new(suite, "dim P(S,T) = dim P(T,S) <= min(dim S, dim T) (C^5)");
    let mut meets = Tally::new(suite, "S & P(S,T) = T & P(T,S) = P(S,T) & P(T,S) = S & T (C^5)");
    let mut image = Tally::new(suite, "P(S,T) is the image of P_T P_S (C^5)");
    let mut rng = rng_for(cfg, 20);
    for _ in 0..cfg.trials {
        let s = any_subspace(&mut rng, 5, tol);
        let t = any_subspace(&mut rng, 5, tol);
        let dims = || format!("dims ({}, {})", s.dim(), t.dim());
        let env = Environment::new(5).with("a", s.clone()).and_then(|e| e.with("b", t.clone())).expect("fresh names");
        let (Ok(p_st), Ok(p_ts)) = (evaluate(&pab, &env, tol), evaluate(&pba, &env, tol)) else {
            symmetric.record(false, dims);
            continue;
        };
        symmetric.record(p_st.dim() == p_ts.dim() && p_st.dim() <= s.dim().min(t.dim()), dims);
        let ok = (|| -> Result<bool> {
            let st = s.meet(&t, tol)?;
            Ok(s.meet(&p_st, tol)?.equal(&st, EQ_TOL)?
                && t.meet(&p_ts, tol)?.equal(&st, EQ_TOL)?
                && p_st.meet(&p_ts, tol)?.equal(&st, EQ_TOL)?)
        })();
        meets.record_result(ok, dims);
        let range = Subspace::column_span(&(t.projector() * s.projector()), tol);
        image.record_result(range.equal(&p_st, EQ_TOL), dims);
    }
    vec![symmetric.finish(), meets.finish(), image.finish()]
}

fn alpha_lemma(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let tol = &cfg.tol;
    let suite = Suite::AlphaLemma;
    let alpha = mk_alpha("a", "b");
    let mut attain = Tally::new(suite, "witness attains floor(n/2), n = 2..8");
    let mut bound = Tally::new(suite, "sampling never exceeds floor(n/2), n = 2..8");
    for n in 2..=8 {
        let w = witness_alpha_at(n, tol);
        attain.record_result(w.map(|w| w.achieved == n / 2), || format!("n = {n}"));
        let found = estimate_dbar(&alpha, n, cfg.trials, &DimsStrategy::Auto, cfg.seed.wrapping_add(n as u64), tol);
        bound.record_result(found.map(|o| o.max_found <= n / 2), || format!("n = {n}"));
    }

    let mut necessary = Tally::new(suite, "attaining n/2 implies the four conditions (n = 2, 4, 6)");
    let mut sufficient = Tally::new(suite, "the four conditions imply n/2 and alpha = P(T,S) (n = 2, 4, 6)");
    let mut rng = rng_for(cfg, 30);
    for n in [2usize, 4, 6] {
        for _ in 0..cfg.trials {
            // half the draws balanced, so both directions get exercised
            let (s, t) = if rng.random_bool(0.5) {
                (random_subspace_with(&mut rng, n, n / 2, tol), random_subspace_with(&mut rng, n, n / 2, tol))
            } else {
                (any_subspace(&mut rng, n, tol), any_subspace(&mut rng, n, tol))
            };
            let env = Environment::new(n).with("a", s.clone()).and_then(|e| e.with("b", t.clone())).expect("fresh names");
            let dims = || format!("n = {n}, dims ({}, {})", s.dim(), t.dim());
            let (Ok(value), Ok(cond)) = (evaluate(&alpha, &env, tol), AlphaConditions::of(&s, &t, tol)) else {
                necessary.record(false, dims);
                continue;
            };
            if value.dim() == n / 2 {
                necessary.record(cond.all(), dims);
            }
            if cond.all() {
                let gap = alpha_projection_gap(&s, &t, tol).unwrap_or(f64::INFINITY);
                sufficient.record(value.dim() == n / 2 && gap < LEMMA_PROJECTOR_TOL, dims);
            }
        }
    }
    vec![attain.finish(), bound.finish(), necessary.finish(), sufficient.finish()]
}

fn beta_lemma(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let tol = &cfg.tol;
    let suite = Suite::BetaLemma;
    let mut attain = Tally::new(suite, "witnesses attain l at 2l and l+1 at 2l+1, l = 1..3");
    let mut bound = Tally::new(suite, "sampling at 2l never exceeds l, l = 1..3");
    for l in 1..=3usize {
        let even = witness_beta(l, 2 * l, tol).map(|w| w.achieved == l);
        attain.record_result(even, || format!("l = {l}, n = {}", 2 * l));
        let odd = witness_beta(l, 2 * l + 1, tol).map(|w| w.achieved == l + 1);
        attain.record_result(odd, || format!("l = {l}, n = {}", 2 * l + 1));
        let beta = mk_beta(l).map(|b| b.formula);
        let found = beta.and_then(|f| {
            estimate_dbar(&f, 2 * l, cfg.trials, &DimsStrategy::Auto, cfg.seed.wrapping_add(l as u64), tol)
        });
        bound.record_result(found.map(|o| o.max_found <= l), || format!("l = {l}"));
    }
    vec![attain.finish(), bound.finish()]
}

/// Run one suite (or all of them).
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<CheckResult> {
    match suite {
        Suite::Ortholattice => ortholattice(cfg),
        Suite::RestrictionLemma => restriction_lemma(cfg),
        Suite::PLemma => p_lemma(cfg),
        Suite::AlphaLemma => alpha_lemma(cfg),
        Suite::BetaLemma => beta_lemma(cfg),
        Suite::All => Suite::EACH.iter().flat_map(|s| run_suite(*s, cfg)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for s in Suite::EACH {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn random_formulas_respect_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..500 {
            let f = random_formula(&mut rng, 10, &["u", "v"]);
            assert!(f.tree_size() <= 10);
        }
    }

    #[test]
    fn quick_suites_pass() {
        let cfg = VerifyConfig { trials: 30, ..VerifyConfig::default() };
        for suite in [Suite::Ortholattice, Suite::PLemma, Suite::RestrictionLemma] {
            for check in run_suite(suite, &cfg) {
                assert!(check.passed(), "{check:?}");
            }
        }
    }
}
