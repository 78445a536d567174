use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{Matrix, Subspace, Tolerance};
use crate::error::{Error, Result};

fn gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    Matrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    })
}

/// A `d`-dimensional subspace of `ℂ^n` drawn from the unitarily invariant
/// distribution: the span of `d` i.i.d. complex Gaussian vectors.
pub fn random_subspace_with<R: Rng + ?Sized>(rng: &mut R, n: usize, d: usize, tol: &Tolerance) -> Subspace {
    assert!(d <= n, "dimension {d} exceeds ambient {n}");
    if d == 0 {
        return Subspace::bot(n);
    }
    if d == n {
        return Subspace::top(n);
    }
    loop {
        let s = Subspace::column_span(&gaussian(rng, n, d), tol);
        // rank deficiency has probability zero; redraw if it happens
        if s.dim() == d {
            return s;
        }
    }
}

/// Seeded variant of [`random_subspace_with`].
pub fn random_subspace(n: usize, d: usize, seed: u64) -> Result<Subspace> {
    if d > n {
        return Err(Error::InvalidArgument(format!("dimension {d} exceeds ambient {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_subspace_with(&mut rng, n, d, &Tolerance::default()))
}

/// A Haar-distributed unitary on `ℂ^n` (QR of a Gaussian matrix with the
/// phases of R's diagonal absorbed).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let qr = gaussian(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes_and_determinism() {
        assert!(random_subspace(4, 0, 1).unwrap().is_bot());
        assert!(random_subspace(4, 4, 1).unwrap().is_top());
        assert_eq!(random_subspace(5, 2, 9).unwrap(), random_subspace(5, 2, 9).unwrap());
        assert_ne!(random_subspace(5, 2, 9).unwrap(), random_subspace(5, 2, 10).unwrap());
        assert!(random_subspace(3, 4, 0).is_err());
    }

    #[test]
    fn orthonormal_rows() {
        let s = random_subspace(6, 3, 42).unwrap();
        let gram = s.basis() * s.basis().adjoint();
        assert!((gram - Matrix::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_unitary(&mut rng, 5);
        assert!((u.adjoint() * &u - Matrix::identity(5, 5)).norm() < 1e-12);
    }
}
