//! Integer bookkeeping for the maximum-dimension function of a formula and
//! its behaviour under restriction: if `alpha` has profile `f` and `beta`
//! has profile `g`, then `alpha` restricted to `beta` has profile `f ∘ g`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A (possibly partial) description of `k ↦ max dim Ξ(φ)` over `ℂ^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DimProfile {
    /// `k ↦ ⌊k / 2^t⌋`.
    FloorHalfPower { t: u32 },
    /// Known values at finitely many ambient dimensions.
    PointTable {
        #[serde(with = "pairs")]
        table: BTreeMap<usize, usize>,
    },
    /// Applied right to left: `[f, g]` is `f ∘ g`.
    Composition { parts: Vec<DimProfile> },
}

// Integer map keys do not survive the buffering used by tagged enums, so
// tables travel as `[[k, v], ...]`.
mod pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(table: &BTreeMap<usize, usize>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(usize, usize)> = table.iter().map(|(&k, &v)| (k, v)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, usize>, D::Error> {
        Ok(Vec::<(usize, usize)>::deserialize(d)?.into_iter().collect())
    }
}

impl DimProfile {
    pub fn floor_half_power(t: u32) -> DimProfile {
        DimProfile::FloorHalfPower { t }
    }

    pub fn point_table(entries: impl IntoIterator<Item = (usize, usize)>) -> DimProfile {
        DimProfile::PointTable { table: entries.into_iter().collect() }
    }

    pub fn compose(outer: DimProfile, inner: DimProfile) -> DimProfile {
        DimProfile::Composition { parts: vec![outer, inner] }
    }

    pub fn eval(&self, k: usize) -> Result<usize> {
        match self {
            DimProfile::FloorHalfPower { t } => Ok(k.checked_shr(*t).unwrap_or(0)),
            DimProfile::PointTable { table } => table.get(&k).copied().ok_or(Error::ProfileLookup(k)),
            DimProfile::Composition { parts } => {
                parts.iter().rev().try_fold(k, |acc, p| p.eval(acc))
            }
        }
    }
}

/// The formula applied at one stage of the separating construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "formula", rename_all = "snake_case")]
pub enum StageKind {
    Alpha,
    Beta { l: usize },
}

impl StageKind {
    pub fn profile(&self) -> DimProfile {
        match *self {
            StageKind::Alpha => DimProfile::floor_half_power(1),
            StageKind::Beta { l } => DimProfile::point_table([(2 * l, l), (2 * l + 1, l + 1)]),
        }
    }

    pub fn label(&self) -> String {
        match self {
            StageKind::Alpha => "alpha".to_owned(),
            StageKind::Beta { l } => format!("beta({l})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    /// 1-based stage number; also names the freshening suffix `_s<index>`.
    pub index: usize,
    pub kind: StageKind,
    /// Tracked `(d̄(m), d̄(n))` before and after this stage.
    pub before: (usize, usize),
    pub after: (usize, usize),
}

/// Claim that the separating formula for `m < n` vanishes identically in
/// `ℂ^m` but not in `ℂ^n`, justified stage by stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub m: usize,
    pub n: usize,
    pub stages: Vec<Stage>,
    pub claimed_dbar_m: usize,
    pub claimed_dbar_n: usize,
    /// Size of the final formula as a tree and as a shared DAG.
    pub formula_tree_size: u64,
    pub formula_dag_size: usize,
}

impl Certificate {
    /// Profile of the final formula: the stage profiles composed, first
    /// stage innermost.
    pub fn profile(&self) -> DimProfile {
        match self.stages.len() {
            0 => DimProfile::floor_half_power(0),
            1 => self.stages[0].kind.profile(),
            _ => DimProfile::Composition {
                parts: self.stages.iter().rev().map(|s| s.kind.profile()).collect(),
            },
        }
    }

    /// Recheck every stage's arithmetic against the stage profiles.
    pub fn check(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Certificate(msg));
        if self.m >= self.n {
            return fail(format!("m = {} is not below n = {}", self.m, self.n));
        }
        let mut pair = (self.m, self.n);
        for (i, stage) in self.stages.iter().enumerate() {
            if stage.index != i + 1 {
                return fail(format!("stage {} numbered {}", i + 1, stage.index));
            }
            if stage.before != pair {
                return fail(format!("stage {} starts at {:?}, expected {:?}", stage.index, stage.before, pair));
            }
            let (a, b) = pair;
            if a >= b {
                return fail(format!("stage {} input {:?} does not separate", stage.index, pair));
            }
            let profile = stage.kind.profile();
            let next = (profile.eval(a)?, profile.eval(b)?);
            if next != stage.after {
                return fail(format!(
                    "stage {} claims {:?} but {} maps {:?} to {:?}",
                    stage.index,
                    stage.after,
                    stage.kind.label(),
                    pair,
                    next
                ));
            }
            if next.0 >= next.1 {
                return fail(format!("stage {} output {:?} does not separate", stage.index, next));
            }
            if next.1 >= b {
                return fail(format!("stage {} does not decrease {b}", stage.index));
            }
            pair = next;
        }
        if pair.0 != 0 || pair.1 == 0 {
            return fail(format!("final pair {pair:?} is not (0, b >= 1)"));
        }
        if (self.claimed_dbar_m, self.claimed_dbar_n) != pair {
            return fail(format!(
                "claims ({}, {}) but chain ends at {:?}",
                self.claimed_dbar_m, self.claimed_dbar_n, pair
            ));
        }
        let composed = self.profile();
        if (composed.eval(self.m)?, composed.eval(self.n)?) != pair {
            return fail("composed profile disagrees with the stage chain".to_owned());
        }
        Ok(())
    }
}
