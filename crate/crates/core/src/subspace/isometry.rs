use super::{Matrix, Subspace, Tolerance};
use crate::error::{Error, Result};

/// An `n × d` matrix with orthonormal columns identifying `ℂ^d` with a
/// `d`-dimensional subspace of `ℂ^n`.
#[derive(Debug, Clone)]
pub struct Isometry {
    map: Matrix,
}

impl Isometry {
    /// The isometry whose columns are the basis of `s`.
    pub fn onto(s: &Subspace) -> Isometry {
        Isometry { map: s.columns() }
    }

    pub fn from_matrix(map: Matrix) -> Result<Isometry> {
        let d = map.ncols();
        let deviation = (map.adjoint() * &map - Matrix::identity(d, d)).norm();
        if deviation > 1e-8 {
            return Err(Error::Shape(format!("columns are not orthonormal (deviation {deviation:.3e})")));
        }
        Ok(Isometry { map })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.map
    }

    /// Ambient dimension of the target space.
    pub fn target_dim(&self) -> usize {
        self.map.nrows()
    }

    /// Dimension of the abstract source space.
    pub fn source_dim(&self) -> usize {
        self.map.ncols()
    }

    /// Image of a subspace of `ℂ^d` in `ℂ^n`.
    pub fn pushforward(&self, p: &Subspace) -> Result<Subspace> {
        if p.ambient() != self.source_dim() {
            return Err(Error::Shape(format!(
                "subspace of C^{} pushed through an isometry from C^{}",
                p.ambient(),
                self.source_dim()
            )));
        }
        Ok(Subspace::from_orthonormal_rows(p.basis() * self.map.transpose()))
    }

    /// Coordinates, in `ℂ^d`, of the part of `w` inside the image.
    ///
    /// For `w` contained in the image this inverts [`Isometry::pushforward`].
    pub fn pullback(&self, w: &Subspace, tol: &Tolerance) -> Result<Subspace> {
        if w.ambient() != self.target_dim() {
            return Err(Error::AmbientMismatch { left: w.ambient(), right: self.target_dim() });
        }
        Ok(Subspace::column_span(&(self.map.adjoint() * w.columns()), tol))
    }
}
