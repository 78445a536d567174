//! The maximum-dimension function of a formula, approached three ways:
//! integer profiles that compose under restriction, explicit witnesses for
//! lower bounds, and seeded random search.

mod profile;
mod search;
mod separate;
mod verdict;
mod witness;

pub use profile::{Certificate, DimProfile, Stage, StageKind};
pub use search::{
    estimate_dbar, zero_test, DimsStrategy, SearchOutcome, ZeroTest, DEFAULT_ESTIMATE_TRIALS,
    DEFAULT_ZERO_TEST_TRIALS, MAX_REDRAWS,
};
pub use separate::{separate, SeparationReport};
pub use verdict::{check_tautology, Verdict};
pub use witness::{
    alpha_projection_gap, witness_alpha, witness_alpha_at, witness_alpha_odd, witness_beta,
    witness_gamma, witness_restrict, witness_self_restricted_alpha, witness_separator,
    witness_stage, AlphaConditions, Trace, WitnessRecord, WITNESS_RETRY_BUDGET,
};
