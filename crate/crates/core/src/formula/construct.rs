use super::{restrict, Formula};
use crate::dbar::{Certificate, DimProfile, Stage, StageKind};
use crate::error::{Error, Result};

/// A constructed formula together with its known dimension profile.
#[derive(Debug, Clone)]
pub struct Constructed {
    pub formula: Formula,
    pub profile: DimProfile,
}

/// `(a | !b) & b`, whose value is the image of `P_b ∘ P_a`.
pub fn mk_p(a: &str, b: &str) -> Formula {
    Formula::and(Formula::or(Formula::var(a), Formula::not(Formula::var(b))), Formula::var(b))
}

/// `P(b, a) & !(a & b)`; attains `⌊n/2⌋` in `ℂ^n`.
pub fn mk_alpha(a: &str, b: &str) -> Formula {
    Formula::and(mk_p(b, a), Formula::not(Formula::and(Formula::var(a), Formula::var(b))))
}

/// Restrict `outer` to a copy of `inner` whose variables carry `suffix`.
pub fn restriction_step(outer: &Formula, inner: &Formula, suffix: &str) -> Result<Formula> {
    restrict(outer, &inner.freshen(suffix)?)
}

/// Number of self-restrictions of alpha needed so that the result has
/// maximum dimension exactly 1 in both `ℂ^{2l}` and `ℂ^{2l+1}`.
pub fn gamma_depth(l: usize) -> Result<u32> {
    if l == 0 {
        return Err(Error::InvalidArgument("l must be at least 1".to_owned()));
    }
    let (even, odd) = (2 * l, 2 * l + 1);
    (0..usize::BITS - 1)
        .find(|&t| even >> (t + 1) == 1 && odd >> (t + 1) == 1)
        .ok_or_else(|| Error::InvalidArgument(format!("no gamma depth for l = {l}")))
}

/// Alpha restricted to itself `gamma_depth(l)` times. Stage `j` renames the
/// inner copy with suffix `_r<j>`; the profile is `k ↦ ⌊k / 2^{t+1}⌋`.
pub fn mk_gamma(l: usize) -> Result<Constructed> {
    let t = gamma_depth(l)?;
    let alpha = mk_alpha("a", "b");
    let mut gamma = alpha.clone();
    for j in 1..=t {
        gamma = restriction_step(&alpha, &gamma, &format!("_r{j}"))?;
    }
    Ok(Constructed { formula: gamma, profile: DimProfile::floor_half_power(t + 1) })
}

/// `(!(P(b,a) | P(a,b)) & γ(c̄)) | α(a, b)` with γ's variables suffixed `_c`.
/// Attains `l` in `ℂ^{2l}` and `l + 1` in `ℂ^{2l+1}`.
pub fn mk_beta(l: usize) -> Result<Constructed> {
    let gamma = mk_gamma(l)?.formula.freshen("_c")?;
    let projections = Formula::or(mk_p("b", "a"), mk_p("a", "b"));
    let tilde = Formula::and(Formula::not(projections), gamma);
    Ok(Constructed {
        formula: Formula::or(tilde, mk_alpha("a", "b")),
        profile: StageKind::Beta { l }.profile(),
    })
}

/// The formula applied at a separator stage, over variables `a`, `b`
/// (and `*_c` for the gamma part of beta).
pub fn separator_stage_formula(kind: StageKind) -> Result<Formula> {
    match kind {
        StageKind::Alpha => Ok(mk_alpha("a", "b")),
        StageKind::Beta { l } => Ok(mk_beta(l)?.formula),
    }
}

/// Stage sequence separating `m < n`, starting from the pair `(m, n)`.
pub(crate) fn separator_stages(m: usize, n: usize) -> Result<Vec<Stage>> {
    if m == 0 || m >= n {
        return Err(Error::InvalidArgument(format!("separator needs 1 <= m < n, got m = {m}, n = {n}")));
    }
    let mut stages = Vec::new();
    let (mut a, mut b) = (m, n);
    while a > 0 {
        let kind = if a % 2 == 0 && b == a + 1 { StageKind::Beta { l: a / 2 } } else { StageKind::Alpha };
        let profile = kind.profile();
        let after = (profile.eval(a)?, profile.eval(b)?);
        stages.push(Stage { index: stages.len() + 1, kind, before: (a, b), after });
        (a, b) = after;
    }
    Ok(stages)
}

/// Build the formula that is a tautology in `ℂ^m` but not in `ℂ^n`.
///
/// Stage 1 is the bare stage formula; stage `s > 1` restricts the stage
/// formula to the previous result renamed with suffix `_s<s>`.
pub fn mk_separator(m: usize, n: usize) -> Result<(Formula, Certificate)> {
    let stages = separator_stages(m, n)?;
    let mut phi: Option<Formula> = None;
    for stage in &stages {
        let outer = separator_stage_formula(stage.kind)?;
        phi = Some(match phi {
            None => outer,
            Some(prev) => restriction_step(&outer, &prev, &format!("_s{}", stage.index))?,
        });
    }
    let phi = phi.expect("m >= 1 gives at least one stage");
    let (claimed_dbar_m, claimed_dbar_n) = stages.last().map(|s| s.after).unwrap_or((m, n));
    let cert = Certificate {
        m,
        n,
        claimed_dbar_m,
        claimed_dbar_n,
        formula_tree_size: phi.tree_size(),
        formula_dag_size: phi.dag_size(),
        stages,
    };
    cert.check()?;
    Ok((phi, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::print;

    fn chain(m: usize, n: usize) -> Vec<(StageKind, (usize, usize))> {
        mk_separator(m, n).unwrap().1.stages.iter().map(|s| (s.kind, s.after)).collect()
    }

    #[test]
    fn named_formulas_print() {
        assert_eq!(print(&mk_p("a", "b")), "(a | !b) & b");
        assert_eq!(print(&mk_alpha("a", "b")), "(b | !a) & a & !(a & b)");
    }

    #[test]
    fn gamma_depth_examples() {
        assert_eq!(gamma_depth(1).unwrap(), 0);
        assert_eq!(gamma_depth(2).unwrap(), 1);
        assert_eq!(gamma_depth(3).unwrap(), 1);
        assert_eq!(gamma_depth(4).unwrap(), 2);
        assert!(gamma_depth(0).is_err());
        for l in 1..200usize {
            let t = gamma_depth(l).unwrap();
            let p = mk_gamma_profile(t);
            assert_eq!(p.eval(2 * l).unwrap(), 1);
            assert_eq!(p.eval(2 * l + 1).unwrap(), 1);
            if t > 0 {
                let shallower = mk_gamma_profile(t - 1);
                assert!(shallower.eval(2 * l).unwrap() > 1);
            }
        }
    }

    fn mk_gamma_profile(t: u32) -> DimProfile {
        DimProfile::floor_half_power(t + 1)
    }

    #[test]
    fn gamma_is_alpha_for_l1() {
        let g = mk_gamma(1).unwrap();
        assert_eq!(g.formula, mk_alpha("a", "b"));
        assert_eq!(g.profile.eval(2).unwrap(), 1);
        assert_eq!(g.profile.eval(3).unwrap(), 1);
    }

    #[test]
    fn gamma_l2_is_one_self_restriction() {
        let g = mk_gamma(2).unwrap();
        let expected = restrict(&mk_alpha("a", "b"), &mk_alpha("a_r1", "b_r1")).unwrap();
        assert_eq!(g.formula, expected);
        assert_eq!(g.profile.eval(4).unwrap(), 1);
        assert_eq!(g.profile.eval(5).unwrap(), 1);
    }

    #[test]
    fn beta_variables_are_disjoint_from_ab() {
        let b = mk_beta(4).unwrap();
        let vars = b.formula.vars();
        assert!(vars.contains("a") && vars.contains("b"));
        assert_eq!(vars.iter().filter(|v| !v.ends_with("_c")).count(), 2);
        assert_eq!(b.profile.eval(8).unwrap(), 4);
        assert_eq!(b.profile.eval(9).unwrap(), 5);
        assert!(mk_beta(0).is_err());
    }

    #[test]
    fn separator_chains() {
        use StageKind::*;
        assert_eq!(chain(2, 3), vec![(Beta { l: 1 }, (1, 2)), (Alpha, (0, 1))]);
        assert_eq!(
            chain(4, 5),
            vec![(Beta { l: 2 }, (2, 3)), (Beta { l: 1 }, (1, 2)), (Alpha, (0, 1))]
        );
        assert_eq!(chain(4, 8), vec![(Alpha, (2, 4)), (Alpha, (1, 2)), (Alpha, (0, 1))]);
        assert_eq!(chain(1, 2), vec![(Alpha, (0, 1))]);
        assert!(mk_separator(3, 3).is_err());
        assert!(mk_separator(5, 2).is_err());
        assert!(mk_separator(0, 2).is_err());
    }

    #[test]
    fn separator_stage_one_is_bare() {
        let (phi, cert) = mk_separator(1, 3).unwrap();
        assert_eq!(cert.stages.len(), 1);
        assert_eq!(phi, mk_alpha("a", "b"));
    }

    #[test]
    fn separator_variables_are_unique_per_stage() {
        let (phi, _) = mk_separator(4, 5).unwrap();
        let vars = phi.vars();
        assert!(vars.contains("a") && vars.contains("a_s3") && vars.contains("a_s2_s3"));
        assert!(vars.contains("a_r1_c_s2_s3"));
    }

    #[test]
    fn certificates_hold_for_all_small_pairs() {
        for n in 2..=40 {
            for m in 1..n {
                let (_, cert) = mk_separator(m, n).unwrap();
                cert.check().unwrap();
                let profile = cert.profile();
                assert_eq!(profile.eval(m).unwrap(), 0);
                assert!(profile.eval(n).unwrap() >= 1);
                for w in cert.stages.windows(2) {
                    assert!(w[1].after.1 < w[0].after.1);
                }
            }
        }
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let (_, mut cert) = mk_separator(4, 5).unwrap();
        cert.stages[1].after = (1, 3);
        assert!(cert.check().is_err());
        let (_, mut cert) = mk_separator(4, 5).unwrap();
        cert.claimed_dbar_n = 2;
        assert!(cert.check().is_err());
    }
}
