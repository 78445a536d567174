//! Explicit subspace assignments attaining claimed dimensions.
//!
//! Witnesses for alpha come from the balanced configuration
//! `S = span(e_1..e_k)`, `T = span(e_i + e_{k+i})`. Witnesses for restricted
//! formulas are assembled from a witness for the inner formula and one for
//! the outer formula in `ℂ^{dim W}`, pushed into `W` through an isometry.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::StageKind;
use crate::error::{Error, Result};
use crate::formula::{gamma_depth, mk_alpha, mk_beta, mk_p, separator_stage_formula, Formula};
use crate::subspace::{random_unitary, Isometry, Matrix, Subspace, Tolerance};
use crate::valuation::{evaluate, Environment};
use crate::formula::restrict;

/// Attempts made by the randomized fallbacks before giving up.
pub const WITNESS_RETRY_BUDGET: u64 = 64;

/// How a witness was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Trace {
    /// A closed-form configuration.
    Structured { construction: String },
    /// A lower-dimensional witness copied into leading coordinates.
    Embedded { from_ambient: usize, inner: Box<Trace> },
    /// Outer witness pushed into the value of the inner witness.
    Restricted { outer: Box<Trace>, inner: Box<Trace> },
    /// Beta in odd dimension: alpha part plus a gamma witness rotated onto
    /// the orthocomplement of `P(b,a) ∨ P(a,b)`.
    Positioned { alpha: Box<Trace>, gamma: Box<Trace> },
    /// Positioning retried after a seeded random rotation.
    Refined { seed: u64, attempt: u64, base: Box<Trace> },
    /// Best draw of a seeded random search.
    Random { seed: u64, trial: u64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub formula: Formula,
    pub ambient: usize,
    pub environment: Environment,
    pub achieved: usize,
    pub trace: Trace,
}

impl WitnessRecord {
    fn build(formula: Formula, environment: Environment, trace: Trace, tol: &Tolerance) -> Result<WitnessRecord> {
        let achieved = evaluate(&formula, &environment, tol)?.dim();
        Ok(WitnessRecord { ambient: environment.ambient(), formula, environment, achieved, trace })
    }

    pub fn value(&self, tol: &Tolerance) -> Result<Subspace> {
        evaluate(&self.formula, &self.environment, tol)
    }

    /// Re-evaluate and confirm the recorded dimension.
    pub fn verify(&self, tol: &Tolerance) -> Result<()> {
        let dim = self.value(tol)?.dim();
        if dim != self.achieved {
            return Err(Error::Witness(format!("records dimension {} but re-evaluates to {dim}", self.achieved)));
        }
        Ok(())
    }

    /// Same witness with every variable renamed by `suffix`.
    pub fn freshen(&self, suffix: &str) -> Result<WitnessRecord> {
        Ok(WitnessRecord {
            formula: self.formula.freshen(suffix)?,
            ambient: self.ambient,
            environment: self.environment.freshen(suffix)?,
            achieved: self.achieved,
            trace: self.trace.clone(),
        })
    }

    fn expect(self, wanted: usize, what: &str) -> Result<WitnessRecord> {
        if self.achieved == wanted {
            Ok(self)
        } else {
            Err(Error::Witness(format!("{what} reached {} instead of {wanted}", self.achieved)))
        }
    }
}

/// The four conditions characterizing pairs on which alpha attains `n/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AlphaConditions {
    pub even: bool,
    pub balanced: bool,
    pub meet_is_bot: bool,
    pub meet_with_complement_is_bot: bool,
}

impl AlphaConditions {
    /// Evaluate the conditions for `a = s`, `b = t`.
    pub fn of(s: &Subspace, t: &Subspace, tol: &Tolerance) -> Result<AlphaConditions> {
        let n = s.ambient();
        Ok(AlphaConditions {
            even: n.is_multiple_of(2),
            balanced: 2 * s.dim() == n && 2 * t.dim() == n,
            meet_is_bot: s.meet(t, tol)?.is_bot(),
            meet_with_complement_is_bot: s.meet(&t.complement(tol), tol)?.is_bot(),
        })
    }

    pub fn all(&self) -> bool {
        self.even && self.balanced && self.meet_is_bot && self.meet_with_complement_is_bot
    }
}

fn pair_env(s: Subspace, t: Subspace) -> Result<Environment> {
    Environment::new(s.ambient()).with("a", s)?.with("b", t)
}

/// `S = span(e_1..e_k)` and `T = span(e_i + e_{k+i})` in `ℂ^{2k}`.
fn balanced_pair(k: usize) -> Result<(Subspace, Subspace)> {
    let n = 2 * k;
    let s = Subspace::coordinate(n, &(0..k).collect::<Vec<_>>())?;
    let vectors: Vec<Vec<Complex64>> = (0..k)
        .map(|i| {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[i] = Complex64::new(1.0, 0.0);
            v[k + i] = Complex64::new(1.0, 0.0);
            v
        })
        .collect();
    let t = Subspace::from_spanning(&vectors, n, &Tolerance::default())?;
    Ok((s, t))
}

/// Witness for alpha in even dimension `n`, attaining `n/2`.
pub fn witness_alpha(n: usize, tol: &Tolerance) -> Result<WitnessRecord> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("witness_alpha needs even n >= 2, got {n}")));
    }
    let (s, t) = balanced_pair(n / 2)?;
    let conditions = AlphaConditions::of(&s, &t, tol)?;
    if !conditions.all() {
        return Err(Error::Witness(format!("balanced pair fails the alpha conditions: {conditions:?}")));
    }
    let trace = Trace::Structured { construction: format!("balanced_pair({})", n / 2) };
    WitnessRecord::build(mk_alpha("a", "b"), pair_env(s, t)?, trace, tol)?.expect(n / 2, "alpha witness")
}

/// Witness for alpha in odd dimension `n ≥ 3`, attaining `⌊n/2⌋`.
///
/// The even witness for `n - 1` is embedded in the leading coordinates.
/// Should that ever fall short, seeded random rotations of a generic
/// balanced pair are tried.
pub fn witness_alpha_odd(n: usize, tol: &Tolerance) -> Result<WitnessRecord> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("witness_alpha_odd needs odd n >= 3, got {n}")));
    }
    let inner = witness_alpha(n - 1, tol)?;
    let embedded = inner.environment.embed(n)?;
    let trace = Trace::Embedded { from_ambient: n - 1, inner: Box::new(inner.trace.clone()) };
    let record = WitnessRecord::build(inner.formula.clone(), embedded, trace, tol)?;
    if record.achieved == n / 2 {
        return Ok(record);
    }
    let seed = n as u64;
    for attempt in 0..WITNESS_RETRY_BUDGET {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let k = n / 2;
        let s = crate::subspace::random_subspace_with(&mut rng, n, k, tol);
        let t = crate::subspace::random_subspace_with(&mut rng, n, k, tol);
        let trace = Trace::Random { seed, trial: attempt };
        let candidate = WitnessRecord::build(mk_alpha("a", "b"), pair_env(s, t)?, trace, tol)?;
        if candidate.achieved == k {
            return Ok(candidate);
        }
    }
    Err(Error::Witness(format!("no alpha witness attaining {} in C^{n}", n / 2)))
}

/// Witness for alpha attaining `⌊n/2⌋` for any `n` (trivial below 2).
pub fn witness_alpha_at(n: usize, tol: &Tolerance) -> Result<WitnessRecord> {
    match n {
        0 | 1 => {
            let env = pair_env(Subspace::bot(n), Subspace::bot(n))?;
            let trace = Trace::Structured { construction: "bottom_pair".to_owned() };
            WitnessRecord::build(mk_alpha("a", "b"), env, trace, tol)
        }
        n if n % 2 == 0 => witness_alpha(n, tol),
        n => witness_alpha_odd(n, tol),
    }
}

/// Witness for `alpha|beta`: the alpha witness (over `ℂ^d`) is pushed into
/// `W = Ξ(beta)` computed from the beta witness, which must have `dim W = d`.
pub fn witness_restrict(
    alpha: &Formula,
    alpha_witness: &WitnessRecord,
    beta: &Formula,
    beta_witness: &WitnessRecord,
    tol: &Tolerance,
) -> Result<WitnessRecord> {
    let w = evaluate(beta, &beta_witness.environment, tol)?;
    if w.dim() != alpha_witness.ambient {
        return Err(Error::Shape(format!(
            "inner value has dimension {} but the outer witness lives in C^{}",
            w.dim(),
            alpha_witness.ambient
        )));
    }
    let iso = Isometry::onto(&w);
    let mut env = beta_witness.environment.clone();
    for name in alpha.vars().iter() {
        let p = alpha_witness
            .environment
            .get(name)
            .ok_or_else(|| Error::UnboundVariable(name.to_owned()))?;
        env.bind(name, iso.pushforward(p)?)?;
    }
    let trace = Trace::Restricted {
        outer: Box::new(alpha_witness.trace.clone()),
        inner: Box::new(beta_witness.trace.clone()),
    };
    WitnessRecord::build(restrict(alpha, beta)?, env, trace, tol)?
        .expect(alpha_witness.achieved, "restricted witness")
}

/// Witness for alpha restricted to itself `depth` times, attaining
/// `⌊n / 2^{depth+1}⌋`. Variable naming matches [`crate::formula::mk_gamma`].
pub fn witness_self_restricted_alpha(depth: u32, n: usize, tol: &Tolerance) -> Result<WitnessRecord> {
    let alpha = mk_alpha("a", "b");
    let mut w = witness_alpha_at(n, tol)?;
    for j in 1..=depth {
        let inner = w.freshen(&format!("_r{j}"))?;
        let outer = witness_alpha_at(inner.achieved, tol)?;
        w = witness_restrict(&alpha, &outer, &inner.formula.clone(), &inner, tol)?;
    }
    Ok(w)
}

/// Witness for the gamma used by beta(l), in `ℂ^n`.
pub fn witness_gamma(l: usize, n: usize, tol: &Tolerance) -> Result<WitnessRecord> {
    witness_self_restricted_alpha(gamma_depth(l)?, n, tol)
}

/// A unitary reflection taking the unit vector `from` to a unit multiple of `to`.
fn reflection_onto(from: &[Complex64], to: &[Complex64]) -> Matrix {
    let n = from.len();
    let inner: Complex64 = to.iter().zip(from).map(|(z, w)| z.conj() * w).sum();
    let phase = if inner.norm() > 0.0 { inner / inner.norm() } else { Complex64::new(1.0, 0.0) };
    let v: Vec<Complex64> = from.iter().zip(to).map(|(w, z)| w - phase * z).collect();
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let mut h = Matrix::identity(n, n);
    if vv > 1e-28 {
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] -= v[i] * v[j].conj() * (2.0 / vv);
            }
        }
    }
    h
}

/// Witness for beta(l) at `n = 2l` (attaining `l`) or `n = 2l + 1`
/// (attaining `l + 1`).
pub fn witness_beta(l: usize, n: usize, tol: &Tolerance) -> Result<WitnessRecord> {
    if l == 0 || (n != 2 * l && n != 2 * l + 1) {
        return Err(Error::InvalidArgument(format!("witness_beta({l}) needs n in {{2l, 2l+1}}, got {n}")));
    }
    let beta = mk_beta(l)?.formula;
    let alpha_part = witness_alpha(2 * l, tol)?;
    let gamma = witness_gamma(l, n, tol)?.freshen("_c")?;

    if n == 2 * l {
        // P(b,a) ∨ P(a,b) is everything here, so the gamma half vanishes
        // whatever gamma evaluates to.
        let mut env = alpha_part.environment.clone();
        for (name, s) in gamma.environment.iter() {
            env.bind(name, s.clone())?;
        }
        let trace = Trace::Positioned { alpha: Box::new(alpha_part.trace), gamma: Box::new(gamma.trace) };
        return WitnessRecord::build(beta, env, trace, tol)?.expect(l, "beta witness");
    }

    let base_alpha = alpha_part.environment.embed(n)?;
    let base_trace = Trace::Positioned {
        alpha: Box::new(Trace::Embedded { from_ambient: 2 * l, inner: Box::new(alpha_part.trace.clone()) }),
        gamma: Box::new(gamma.trace.clone()),
    };
    let attempt = |alpha_env: &Environment| -> Result<Option<Environment>> {
        let cover = Formula::not(Formula::or(mk_p("b", "a"), mk_p("a", "b")));
        let target = evaluate(&cover, alpha_env, tol)?;
        let value = gamma.value(tol)?;
        if target.dim() != 1 || value.dim() != 1 {
            return Ok(None);
        }
        let u = reflection_onto(&value.basis_vectors()[0], &target.basis_vectors()[0]);
        let mut env = alpha_env.clone();
        for (name, s) in gamma.environment.apply_unitary(&u)?.iter() {
            env.bind(name, s.clone())?;
        }
        Ok(Some(env))
    };

    if let Some(env) = attempt(&base_alpha)? {
        let record = WitnessRecord::build(beta.clone(), env, base_trace.clone(), tol)?;
        if record.achieved == l + 1 {
            return Ok(record);
        }
    }
    let seed = (l as u64) << 32 | n as u64;
    for k in 0..WITNESS_RETRY_BUDGET {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k);
        let rotated = base_alpha.apply_unitary(&random_unitary(&mut rng, n))?;
        if let Some(env) = attempt(&rotated)? {
            let trace = Trace::Refined { seed, attempt: k, base: Box::new(base_trace.clone()) };
            let record = WitnessRecord::build(beta.clone(), env, trace, tol)?;
            if record.achieved == l + 1 {
                return Ok(record);
            }
        }
    }
    Err(Error::Witness(format!("no beta({l}) witness attaining {} in C^{n}", l + 1)))
}

/// Witness for a separator stage formula in `ℂ^k`.
pub fn witness_stage(kind: StageKind, k: usize, tol: &Tolerance) -> Result<WitnessRecord> {
    match kind {
        StageKind::Alpha => witness_alpha_at(k, tol),
        StageKind::Beta { l } => witness_beta(l, k, tol),
    }
}

/// Fold stage witnesses down a separator chain, producing a witness in
/// `ℂ^n` for the separator formula of `(m, n)`.
pub fn witness_separator(stages: &[super::Stage], n: usize, tol: &Tolerance) -> Result<WitnessRecord> {
    let first = stages.first().ok_or_else(|| Error::InvalidArgument("empty stage chain".to_owned()))?;
    let mut w = witness_stage(first.kind, n, tol)?;
    for stage in &stages[1..] {
        let inner = w.freshen(&format!("_s{}", stage.index))?;
        let outer = witness_stage(stage.kind, inner.achieved, tol)?;
        let outer_formula = separator_stage_formula(stage.kind)?;
        w = witness_restrict(&outer_formula, &outer, &inner.formula.clone(), &inner, tol)?;
    }
    Ok(w)
}

/// `Ξ(α)` against `Ξ(P(b,a))` for the pair bound to `a`, `b`: the projector
/// distance between them.
pub fn alpha_projection_gap(s: &Subspace, t: &Subspace, tol: &Tolerance) -> Result<f64> {
    let env = pair_env(s.clone(), t.clone())?;
    let alpha = evaluate(&mk_alpha("a", "b"), &env, tol)?;
    let p = evaluate(&mk_p("b", "a"), &env, tol)?;
    alpha.projector_distance(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{mk_gamma, mk_separator};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn alpha_witnesses() {
        let w2 = witness_alpha(2, &tol()).unwrap();
        assert_eq!(w2.achieved, 1);
        let (s, t) = (w2.environment.get("a").unwrap(), w2.environment.get("b").unwrap());
        assert!(s.equal(&Subspace::coordinate(2, &[0]).unwrap(), 1e-12).unwrap());
        assert!(AlphaConditions::of(s, t, &tol()).unwrap().all());
        assert!(alpha_projection_gap(s, t, &tol()).unwrap() < 1e-8);
        assert_eq!(witness_alpha(4, &tol()).unwrap().achieved, 2);
        assert!(witness_alpha(3, &tol()).is_err());
        assert!(witness_alpha(0, &tol()).is_err());
    }

    #[test]
    fn odd_alpha_witnesses() {
        for (n, k) in [(3, 1), (5, 2), (7, 3), (9, 4)] {
            let w = witness_alpha_odd(n, &tol()).unwrap();
            assert_eq!(w.achieved, k);
            assert!(matches!(w.trace, Trace::Embedded { .. }));
            w.verify(&tol()).unwrap();
        }
        assert!(witness_alpha_odd(4, &tol()).is_err());
        assert_eq!(witness_alpha_at(1, &tol()).unwrap().achieved, 0);
    }

    #[test]
    fn restrict_with_top_relabels() {
        let a = witness_alpha(4, &tol()).unwrap();
        let top = WitnessRecord::build(
            Formula::Top,
            Environment::new(4),
            Trace::Structured { construction: "top".into() },
            &tol(),
        )
        .unwrap();
        let w = witness_restrict(&a.formula, &a, &Formula::Top, &top, &tol()).unwrap();
        assert_eq!(w.achieved, 2);
        assert!(w.environment.get("a").unwrap().equal(a.environment.get("a").unwrap(), 1e-12).unwrap());
    }

    #[test]
    fn alpha_restricted_to_alpha() {
        for n in 4..=9 {
            let w = witness_self_restricted_alpha(1, n, &tol()).unwrap();
            assert_eq!(w.achieved, n / 4, "n = {n}");
            w.verify(&tol()).unwrap();
        }
    }

    #[test]
    fn gamma_witness_matches_construction() {
        for l in 1..=4 {
            for n in [2 * l, 2 * l + 1] {
                let w = witness_gamma(l, n, &tol()).unwrap();
                assert_eq!(w.achieved, 1, "l = {l}, n = {n}");
                assert_eq!(w.formula, mk_gamma(l).unwrap().formula);
            }
        }
    }

    #[test]
    fn beta_witnesses() {
        for l in 1..=3 {
            let even = witness_beta(l, 2 * l, &tol()).unwrap();
            assert_eq!(even.achieved, l);
            let odd = witness_beta(l, 2 * l + 1, &tol()).unwrap();
            assert_eq!(odd.achieved, l + 1);
            assert!(matches!(odd.trace, Trace::Positioned { .. }), "{:?}", odd.trace);
            odd.verify(&tol()).unwrap();
        }
        assert!(witness_beta(2, 6, &tol()).is_err());
        assert!(witness_beta(0, 1, &tol()).is_err());
    }

    #[test]
    fn separator_witness_formula_matches() {
        for (m, n) in [(2, 3), (4, 5), (3, 8), (5, 7)] {
            let (phi, cert) = mk_separator(m, n).unwrap();
            let w = witness_separator(&cert.stages, n, &tol()).unwrap();
            assert_eq!(w.formula, phi);
            assert_eq!(w.achieved, cert.claimed_dbar_n);
        }
    }

    #[test]
    fn reflection_maps_vector() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let from = vec![c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)];
        let to = vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)];
        let h = reflection_onto(&from, &to);
        assert!((h.adjoint() * &h - Matrix::identity(3, 3)).norm() < 1e-12);
        let image = &h * nalgebra::DVector::from_vec(from);
        assert!(image[0].norm() < 1e-12 && image[1].norm() < 1e-12);
        assert!((image[2].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let w = witness_beta(1, 3, &tol()).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        let back: WitnessRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.formula, w.formula);
        assert_eq!(back.trace, w.trace);
        back.verify(&tol()).unwrap();
    }
}
