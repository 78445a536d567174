use serde::{Deserialize, Serialize};

use super::search::{estimate_dbar, zero_test, DimsStrategy, ZeroTest};
use super::witness::WitnessRecord;
use super::DimProfile;
use crate::error::Result;
use crate::formula::Formula;
use crate::subspace::Tolerance;

/// Whether a formula is a tautology in `ℂ^n`, and on what evidence.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// The profile predicts 0 and sampling found nothing larger.
    CertifiedTautology { predicted: usize, zero_test: ZeroTest },
    /// A verified assignment with a nonzero value.
    CertifiedNonTautology { witness: Box<WitnessRecord> },
    /// No profile; every sampled assignment gave the zero subspace.
    StatisticalTautology { zero_test: ZeroTest },
    /// Profile and observation disagree. Both are reported as found.
    Inconclusive {
        predicted: usize,
        observed: usize,
        witness: Option<Box<WitnessRecord>>,
    },
}

impl Verdict {
    /// `Some(true)` for tautology verdicts, `Some(false)` for
    /// non-tautology, `None` when inconclusive.
    pub fn is_tautology(&self) -> Option<bool> {
        match self {
            Verdict::CertifiedTautology { .. } | Verdict::StatisticalTautology { .. } => Some(true),
            Verdict::CertifiedNonTautology { .. } => Some(false),
            Verdict::Inconclusive { .. } => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::CertifiedTautology { .. } | Verdict::CertifiedNonTautology { .. })
    }
}

/// Decide whether `f` is a tautology in `ℂ^n`.
///
/// With a profile, a predicted 0 is confirmed by a zero-test and a
/// predicted positive value by a witness: the supplied one if it verifies,
/// otherwise the best random draw. Without a profile, a random witness
/// still certifies a non-tautology; otherwise the verdict is statistical.
pub fn check_tautology(
    f: &Formula,
    n: usize,
    profile: Option<&DimProfile>,
    witness: Option<&WitnessRecord>,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<Verdict> {
    let predicted = profile.map(|p| p.eval(n)).transpose()?;
    if predicted == Some(0) {
        let zero = zero_test(f, n, trials, seed, tol)?;
        return Ok(if zero.passed() {
            Verdict::CertifiedTautology { predicted: 0, zero_test: zero }
        } else {
            let found = estimate_dbar(f, n, trials, &DimsStrategy::Auto, seed, tol)?;
            Verdict::Inconclusive {
                predicted: 0,
                observed: zero.max_dim_seen,
                witness: Some(Box::new(found.witness)),
            }
        });
    }

    let supplied = witness.filter(|w| {
        w.ambient == n && w.formula == *f && w.achieved > 0 && w.verify(tol).is_ok()
    });
    let candidate = match supplied {
        Some(w) => w.clone(),
        None => estimate_dbar(f, n, trials, &DimsStrategy::Auto, seed, tol)?.witness,
    };
    if candidate.achieved > 0 {
        return Ok(match predicted {
            Some(p) if candidate.achieved > p => Verdict::Inconclusive {
                predicted: p,
                observed: candidate.achieved,
                witness: Some(Box::new(candidate)),
            },
            _ => Verdict::CertifiedNonTautology { witness: Box::new(candidate) },
        });
    }
    Ok(match predicted {
        Some(p) => Verdict::Inconclusive { predicted: p, observed: 0, witness: None },
        None => Verdict::StatisticalTautology {
            zero_test: ZeroTest {
                n,
                trials: trials.max(1),
                seed,
                max_dim_seen: 0,
                rejected: 0,
                abandoned: 0,
            },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dbar::witness::witness_alpha;
    use crate::formula::{mk_alpha, parse};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn contradiction_is_certified() {
        let f = parse("a & !a").unwrap();
        for n in 1..=4 {
            let profile = DimProfile::point_table([(n, 0)]);
            let v = check_tautology(&f, n, Some(&profile), None, 200, 0, &tol()).unwrap();
            assert!(matches!(v, Verdict::CertifiedTautology { .. }), "{v:?}");
        }
    }

    #[test]
    fn alpha_in_two_dimensions_is_not_a_tautology() {
        let f = mk_alpha("a", "b");
        let w = witness_alpha(2, &tol()).unwrap();
        let profile = DimProfile::floor_half_power(1);
        match check_tautology(&f, 2, Some(&profile), Some(&w), 10, 0, &tol()).unwrap() {
            Verdict::CertifiedNonTautology { witness } => {
                assert_eq!(witness.achieved, 1);
                assert!(matches!(witness.trace, crate::dbar::Trace::Structured { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn no_profile_gives_statistical_or_witnessed_verdicts() {
        let v = check_tautology(&parse("a & !a").unwrap(), 3, None, None, 100, 0, &tol()).unwrap();
        assert!(matches!(v, Verdict::StatisticalTautology { .. }));
        let v = check_tautology(&mk_alpha("a", "b"), 3, None, None, 100, 0, &tol()).unwrap();
        assert_eq!(v.is_tautology(), Some(false));
    }

    #[test]
    fn contradicted_profile_is_inconclusive() {
        // claims alpha vanishes in C^4; sampling finds otherwise
        let wrong = DimProfile::point_table([(4, 0)]);
        let v = check_tautology(&mk_alpha("a", "b"), 4, Some(&wrong), None, 200, 0, &tol()).unwrap();
        match v {
            Verdict::Inconclusive { predicted: 0, observed, witness } => {
                assert!(observed > 0);
                assert!(witness.is_some());
            }
            other => panic!("{other:?}"),
        }
        // a witness exceeding the predicted value is also surfaced
        let low = DimProfile::point_table([(4, 1)]);
        let w = witness_alpha(4, &tol()).unwrap();
        let v = check_tautology(&mk_alpha("a", "b"), 4, Some(&low), Some(&w), 10, 0, &tol()).unwrap();
        assert!(matches!(v, Verdict::Inconclusive { predicted: 1, observed: 2, .. }));
    }
}
