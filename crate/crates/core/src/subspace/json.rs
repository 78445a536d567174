use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Subspace, Tolerance};
use crate::error::{Error, Result};

/// Wire form of a subspace: `{"ambient": n, "basis": [[[re, im], ...], ...]}`,
/// one inner list of `n` complex pairs per basis vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub ambient: usize,
    pub basis: Vec<Vec<[f64; 2]>>,
}

impl From<&Subspace> for SubspaceJson {
    fn from(s: &Subspace) -> Self {
        SubspaceJson {
            ambient: s.ambient(),
            basis: s
                .basis()
                .row_iter()
                .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

impl SubspaceJson {
    /// Re-orthonormalize the listed vectors; fails if they span fewer
    /// dimensions than there are rows.
    pub fn into_subspace(self, tol: &Tolerance) -> Result<Subspace> {
        let claimed = self.basis.len();
        let vectors: Vec<Vec<Complex64>> = self
            .basis
            .iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        let s = Subspace::from_spanning(&vectors, self.ambient, tol)?;
        if s.dim() != claimed {
            return Err(Error::DimensionCollapse { claimed, actual: s.dim() });
        }
        Ok(s)
    }
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SubspaceJson::deserialize(d)?
            .into_subspace(&Tolerance::default())
            .map_err(serde::de::Error::custom)
    }
}
