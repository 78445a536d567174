use serde::{Deserialize, Serialize};

use super::search::{zero_test, ZeroTest};
use super::witness::{witness_separator, WitnessRecord};
use super::Certificate;
use crate::error::{Error, Result};
use crate::formula::{mk_separator, Formula};
use crate::subspace::Tolerance;

/// Evidence that `QL(ℂ^n)` is strictly smaller than `QL(ℂ^m)`: a formula
/// with a nonzero witness in `ℂ^n` that vanishes on every sample in `ℂ^m`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeparationReport {
    pub m: usize,
    pub n: usize,
    pub formula: Formula,
    pub certificate: Certificate,
    pub witness: WitnessRecord,
    pub zero_test: ZeroTest,
    pub tolerance: Tolerance,
}

impl SeparationReport {
    /// Recheck the report's invariants: certificate arithmetic, witness
    /// re-evaluation, and the zero-test outcome.
    pub fn check(&self, tol: &Tolerance) -> Result<()> {
        self.certificate.check()?;
        self.witness.verify(tol)?;
        if self.witness.achieved == 0 || self.witness.ambient != self.n {
            return Err(Error::Witness(format!(
                "witness reaches {} in C^{}",
                self.witness.achieved, self.witness.ambient
            )));
        }
        if self.witness.formula != self.formula {
            return Err(Error::Witness("witness is for a different formula".to_owned()));
        }
        if !self.zero_test.passed() {
            return Err(Error::Contradiction(format!(
                "formula reached dimension {} in C^{}",
                self.zero_test.max_dim_seen, self.m
            )));
        }
        Ok(())
    }
}

/// Construct the separating formula for `m < n`, a witness for it in `ℂ^n`,
/// and a `trials`-sample zero-test in `ℂ^m`.
pub fn separate(m: usize, n: usize, trials: usize, seed: u64, tol: &Tolerance) -> Result<SeparationReport> {
    let (formula, certificate) = mk_separator(m, n)?;
    let witness = witness_separator(&certificate.stages, n, tol)?;
    if witness.formula != formula {
        return Err(Error::Witness("witness fold produced a different formula".to_owned()));
    }
    if witness.achieved != certificate.claimed_dbar_n {
        return Err(Error::Witness(format!(
            "witness reaches {} but the certificate claims {}",
            witness.achieved, certificate.claimed_dbar_n
        )));
    }
    let zero_test = zero_test(&formula, m, trials, seed, tol)?;
    let report = SeparationReport { m, n, formula, certificate, witness, zero_test, tolerance: *tol };
    report.check(tol)?;
    Ok(report)
}
