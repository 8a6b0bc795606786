//! Dense complex matrix helpers on top of `nalgebra`.
//!
//! Everything in this crate works with matrices of dimension at most a few
//! dozen, so plain dense routines are used throughout.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Kronecker product `a ⊗ b` with row index `i * b.nrows() + k`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermitian_residual(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Rebuild `V diag(f(λ)) V*` from the Hermitian part of `m`.
pub fn spectral_map(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let s = f(lambda);
        scaled.column_mut(j).scale_mut(s);
    }
    &scaled * vectors.adjoint()
}

/// Positive square root of a (numerically) positive semidefinite matrix.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    spectral_map(m, |x| x.max(0.0).sqrt())
}

pub fn clamp_spectrum(m: &CMatrix, lo: f64, hi: f64) -> CMatrix {
    spectral_map(m, |x| x.clamp(lo, hi))
}

/// Operator 2-norm of a Hermitian matrix: its largest absolute eigenvalue.
pub fn hermitian_norm(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m)
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max)
}

/// Operator 2-norm of an arbitrary matrix.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Dimension of the kernel of `a`, counting singular values below
/// `rel_tol * max(1, σ_max)` as zero.
pub fn null_space_dim(a: &CMatrix, rel_tol: f64) -> usize {
    let cols = a.ncols();
    if a.nrows() == 0 {
        return cols;
    }
    let sv = a.clone().svd(false, false).singular_values;
    let scale = sv.iter().copied().fold(1.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > rel_tol * scale).count();
    cols - rank
}

pub fn random_complex<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

/// Hermitian matrix with standard-normal entries (GUE up to scaling).
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    hermitian_part(&random_complex(dim, dim, rng))
}

/// Haar-ish random unitary from the QR factorisation of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let (mut q, r) = random_complex(dim, dim, rng).qr().unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Row-major `[re, im]` pairs.
pub fn to_pairs(m: &CMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out.push([z.re, z.im]);
        }
    }
    out
}

/// Inverse of [`to_pairs`] for a square matrix; the dimension is inferred.
pub fn from_pairs(pairs: &[[f64; 2]]) -> Result<CMatrix> {
    let dim = (pairs.len() as f64).sqrt().round() as usize;
    if dim * dim != pairs.len() || dim == 0 {
        return Err(Error::InvalidPoint(format!(
            "{} entries do not form a non-empty square matrix",
            pairs.len()
        )));
    }
    if pairs.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidPoint("non-finite matrix entry".into()));
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        let [re, im] = pairs[i * dim + j];
        C64::new(re, im)
    }))
}

/// Columns `range` of `m` as a new matrix.
pub fn columns(m: &CMatrix, range: std::ops::Range<usize>) -> CMatrix {
    m.columns(range.start, range.len()).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eigen_reconstructs_and_sorts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = random_hermitian(6, &mut rng);
        let (vals, vecs) = hermitian_eigen(&h);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            6,
            vals.iter().map(|&x| C64::new(x, 0.0)),
        ));
        let back = &vecs * d * vecs.adjoint();
        assert!(max_abs_diff(&back, &h) < 1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = random_complex(4, 4, &mut rng);
        let p = &m * m.adjoint();
        let s = psd_sqrt(&p);
        assert!(max_abs_diff(&(&s * &s), &p) < 1e-10);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = random_unitary(5, &mut rng);
        assert!(max_abs_diff(&(&u * u.adjoint()), &identity(5)) < 1e-12);
    }

    #[test]
    fn null_space_of_rank_one() {
        let v = CMatrix::from_fn(3, 1, |i, _| C64::new(i as f64 + 1.0, 0.0));
        let p = &v * v.adjoint();
        assert_eq!(null_space_dim(&p, 1e-10), 2);
        assert_eq!(null_space_dim(&identity(3), 1e-10), 0);
    }

    #[test]
    fn pairs_roundtrip_and_reject() {
        let m = CMatrix::from_fn(2, 2, |i, j| C64::new(i as f64, j as f64));
        assert_eq!(from_pairs(&to_pairs(&m)).unwrap(), m);
        assert!(from_pairs(&[[0.0, 0.0]; 3]).is_err());
        assert!(from_pairs(&[]).is_err());
        assert!(from_pairs(&[[f64::NAN, 0.0]]).is_err());
    }

    #[test]
    fn kron_trace_is_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_complex(2, 2, &mut rng);
        let b = random_complex(3, 3, &mut rng);
        assert!((trace(&kron(&a, &b)) - trace(&a) * trace(&b)).norm() < 1e-12);
    }
}
