//! Linear subspaces of `ℂ^n` and their ortholattice operations.
//!
//! A subspace is stored as a `d × n` matrix whose rows are an orthonormal
//! basis. Every rank decision goes through [`span_of_columns`], which
//! thresholds singular values relative to the largest one (or to 1 for the
//! internally generated, unit-scale spanning sets) and flags decisions that
//! fall near the cutoff.

mod isometry;
mod json;
mod random;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use isometry::Isometry;
pub use json::SubspaceJson;
pub use random::{random_subspace, random_subspace_with, random_unitary};

pub type Matrix = DMatrix<Complex64>;

/// Residual below which a vector counts as lying in a subspace.
pub const DEFAULT_CONTAINMENT_TOL: f64 = 1e-7;

/// Rank-decision tolerances.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    /// Singular values below `rank_threshold · σ_max` are treated as zero.
    pub rank_threshold: f64,
    /// A decision is ambiguous when some relative singular value lies in
    /// `(rank_threshold² / guard_band, guard_band)`, a band centred on the
    /// cutoff on a log scale. Zero (or anything not above the threshold)
    /// disables the band.
    pub guard_band: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rank_threshold: 1e-9, guard_band: 1e-6 }
    }
}

impl Tolerance {
    pub fn new(rank_threshold: f64, guard_band: f64) -> Result<Tolerance> {
        if !(rank_threshold > 0.0 && rank_threshold < 1.0) {
            return Err(Error::InvalidTolerance(format!(
                "rank threshold must lie in (0, 1), got {rank_threshold}"
            )));
        }
        if !(guard_band >= 0.0 && guard_band.is_finite()) {
            return Err(Error::InvalidTolerance(format!("guard band must be >= 0, got {guard_band}")));
        }
        Ok(Tolerance { rank_threshold, guard_band })
    }

    fn ambiguous(&self, ratio: f64) -> bool {
        if self.guard_band <= self.rank_threshold {
            return false;
        }
        let low = self.rank_threshold * self.rank_threshold / self.guard_band;
        ratio > low && ratio < self.guard_band
    }
}

/// Outcome of a rank decision: the span plus whether any singular value
/// came close enough to the cutoff to make the rank doubtful.
#[derive(Debug, Clone)]
pub struct Spanned {
    pub subspace: Subspace,
    pub clear: bool,
}

#[derive(Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in C^{})", self.dim(), self.ambient)
    }
}

/// Scale used for the relative rank cutoff.
#[derive(Debug, Clone, Copy)]
enum Reference {
    /// Relative to the largest singular value.
    Largest,
    /// Relative to `max(σ_max, 1)`; used for spanning sets made of unit
    /// vectors, where an all-tiny spectrum means rank zero.
    Unit,
}

/// Left singular vectors and singular values of a nonempty matrix.
fn thin_svd(m: &Matrix) -> (Matrix, Vec<f64>) {
    let f = faer::Mat::<Complex64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let svd = f.thin_svd().expect("svd of a finite matrix");
    let u = svd.U();
    let u = Matrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]);
    let sv = svd.S().column_vector().iter().map(|z| z.re).collect();
    (u, sv)
}

/// Span of the columns of an `n × k` matrix.
fn span_of_columns(cols: &Matrix, reference: Reference, tol: &Tolerance) -> Spanned {
    let n = cols.nrows();
    if n == 0 || cols.ncols() == 0 {
        return Spanned { subspace: Subspace::bot(n), clear: true };
    }
    let (u, sv) = thin_svd(cols);
    let largest = sv.iter().copied().fold(0.0_f64, f64::max);
    let scale = match reference {
        Reference::Largest => largest,
        Reference::Unit => largest.max(1.0),
    };
    if scale == 0.0 {
        return Spanned { subspace: Subspace::bot(n), clear: true };
    }
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));
    let mut clear = true;
    let mut kept = Vec::new();
    for &i in &order {
        let ratio = sv[i] / scale;
        if tol.ambiguous(ratio) {
            clear = false;
        }
        if ratio >= tol.rank_threshold {
            kept.push(i);
        }
    }
    let mut basis = Matrix::zeros(kept.len(), n);
    for (row, &i) in kept.iter().enumerate() {
        for j in 0..n {
            basis[(row, j)] = u[(j, i)];
        }
    }
    Spanned { subspace: Subspace { ambient: n, basis }, clear }
}

fn identity(n: usize) -> Matrix {
    Matrix::identity(n, n)
}

impl Subspace {
    /// The zero subspace of `ℂ^n`.
    pub fn bot(ambient: usize) -> Subspace {
        Subspace { ambient, basis: Matrix::zeros(0, ambient) }
    }

    /// All of `ℂ^n`.
    pub fn top(ambient: usize) -> Subspace {
        Subspace { ambient, basis: identity(ambient) }
    }

    /// Span of the unit vectors `e_i` for the given zero-based indices.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Result<Subspace> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&i) = sorted.iter().find(|&&i| i >= ambient) {
            return Err(Error::Shape(format!("coordinate {i} outside C^{ambient}")));
        }
        let mut basis = Matrix::zeros(sorted.len(), ambient);
        for (row, &i) in sorted.iter().enumerate() {
            basis[(row, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(Subspace { ambient, basis })
    }

    /// Span of a list of vectors in `ℂ^n`; an empty list gives `⊥`.
    pub fn from_spanning(vectors: &[Vec<Complex64>], ambient: usize, tol: &Tolerance) -> Result<Subspace> {
        Ok(Subspace::from_spanning_checked(vectors, ambient, tol)?.subspace)
    }

    pub fn from_spanning_checked(
        vectors: &[Vec<Complex64>],
        ambient: usize,
        tol: &Tolerance,
    ) -> Result<Spanned> {
        if let Some(bad) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::Shape(format!("vector of length {} in C^{ambient}", bad.len())));
        }
        let cols = Matrix::from_fn(ambient, vectors.len(), |i, j| vectors[j][i]);
        Ok(span_of_columns(&cols, Reference::Largest, tol))
    }

    /// Span of the columns of an `n × k` matrix, thresholded relative to its
    /// largest singular value.
    pub fn column_span(cols: &Matrix, tol: &Tolerance) -> Subspace {
        span_of_columns(cols, Reference::Largest, tol).subspace
    }

    pub(crate) fn from_orthonormal_rows(basis: Matrix) -> Subspace {
        Subspace { ambient: basis.ncols(), basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_bot(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_top(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Orthonormal basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Complex64>> {
        self.basis.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(Error::AmbientMismatch { left: self.ambient, right: other.ambient })
        }
    }

    /// Basis vectors as the columns of an `n × d` matrix.
    pub(crate) fn columns(&self) -> Matrix {
        self.basis.transpose()
    }

    /// Orthogonal projector onto this subspace.
    pub fn projector(&self) -> Matrix {
        self.columns() * self.basis.map(|z| z.conj())
    }

    pub fn complement_checked(&self, tol: &Tolerance) -> Spanned {
        if self.is_bot() {
            return Spanned { subspace: Subspace::top(self.ambient), clear: true };
        }
        if self.is_top() {
            return Spanned { subspace: Subspace::bot(self.ambient), clear: true };
        }
        let residual = identity(self.ambient) - self.projector();
        span_of_columns(&residual, Reference::Unit, tol)
    }

    /// Orthogonal complement in `ℂ^n`.
    pub fn complement(&self, tol: &Tolerance) -> Subspace {
        self.complement_checked(tol).subspace
    }

    pub fn join_checked(&self, other: &Subspace, tol: &Tolerance) -> Result<Spanned> {
        self.same_ambient(other)?;
        if other.is_bot() || self.is_top() {
            return Ok(Spanned { subspace: self.clone(), clear: true });
        }
        if self.is_bot() || other.is_top() {
            return Ok(Spanned { subspace: other.clone(), clear: true });
        }
        let mut cols = Matrix::zeros(self.ambient, self.dim() + other.dim());
        cols.columns_mut(0, self.dim()).copy_from(&self.columns());
        cols.columns_mut(self.dim(), other.dim()).copy_from(&other.columns());
        Ok(span_of_columns(&cols, Reference::Unit, tol))
    }

    /// Span of the union.
    pub fn join(&self, other: &Subspace, tol: &Tolerance) -> Result<Subspace> {
        Ok(self.join_checked(other, tol)?.subspace)
    }

    /// Intersection, computed as `¬(¬S ∨ ¬T)`.
    pub fn meet_checked(&self, other: &Subspace, tol: &Tolerance) -> Result<Spanned> {
        self.same_ambient(other)?;
        if self.is_bot() || other.is_top() {
            return Ok(Spanned { subspace: self.clone(), clear: true });
        }
        if other.is_bot() || self.is_top() {
            return Ok(Spanned { subspace: other.clone(), clear: true });
        }
        let a = self.complement_checked(tol);
        let b = other.complement_checked(tol);
        let j = a.subspace.join_checked(&b.subspace, tol)?;
        let m = j.subspace.complement_checked(tol);
        Ok(Spanned { subspace: m.subspace, clear: a.clear && b.clear && j.clear && m.clear })
    }

    pub fn meet(&self, other: &Subspace, tol: &Tolerance) -> Result<Subspace> {
        Ok(self.meet_checked(other, tol)?.subspace)
    }

    /// Largest distance from a basis vector of `other` to this subspace.
    pub fn max_residual(&self, other: &Subspace) -> Result<f64> {
        self.same_ambient(other)?;
        if other.is_bot() {
            return Ok(0.0);
        }
        let p = self.projector();
        let cols = other.columns();
        let residual = &cols - &p * &cols;
        Ok(residual.column_iter().map(|c| c.norm()).fold(0.0, f64::max))
    }

    /// Whether `other ⊆ self`, up to residual `tol`.
    pub fn contains(&self, other: &Subspace, tol: f64) -> Result<bool> {
        Ok(self.max_residual(other)? < tol)
    }

    pub fn equal(&self, other: &Subspace, tol: f64) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.contains(other, tol)? && other.contains(self, tol)?)
    }

    /// Frobenius distance between the two orthogonal projectors.
    pub fn projector_distance(&self, other: &Subspace) -> Result<f64> {
        self.same_ambient(other)?;
        Ok((self.projector() - other.projector()).norm())
    }

    /// Principal angles in ascending order; there are `min(dim S, dim T)`.
    pub fn principal_angles(&self, other: &Subspace) -> Result<Vec<f64>> {
        self.same_ambient(other)?;
        if self.is_bot() || other.is_bot() {
            return Ok(Vec::new());
        }
        let cross = self.basis.map(|z| z.conj()) * other.columns();
        let (_, sv) = thin_svd(&cross);
        let mut angles: Vec<f64> = sv.iter().map(|&c| c.clamp(0.0, 1.0).acos()).collect();
        angles.sort_by(f64::total_cmp);
        angles.truncate(self.dim().min(other.dim()));
        Ok(angles)
    }

    /// Image under a unitary `u`: each basis vector `v` becomes `u v`.
    pub fn apply_unitary(&self, u: &Matrix) -> Result<Subspace> {
        if u.nrows() != self.ambient || u.ncols() != self.ambient {
            return Err(Error::Shape(format!(
                "{}x{} matrix acting on C^{}",
                u.nrows(),
                u.ncols(),
                self.ambient
            )));
        }
        let deviation = (u.adjoint() * u - identity(self.ambient)).norm();
        if deviation > 1e-8 {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Subspace { ambient: self.ambient, basis: &self.basis * u.transpose() })
    }

    /// Copy into `ℂ^{n'}`, `n' ≥ n`, using the first `n` coordinates.
    pub fn embed(&self, ambient: usize) -> Result<Subspace> {
        if ambient < self.ambient {
            return Err(Error::Shape(format!("cannot embed C^{} into C^{ambient}", self.ambient)));
        }
        let mut basis = Matrix::zeros(self.dim(), ambient);
        basis.columns_mut(0, self.ambient).copy_from(&self.basis);
        Ok(Subspace { ambient, basis })
    }
}
