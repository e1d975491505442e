//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Max entrywise deviation of `u† u` from the identity.
pub fn unitarity_deviation(u: &DMatrix<C64>) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max((prod[(i, j)] - expect).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut vals: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Full eigendecomposition of a Hermitian matrix: (eigenvalues, eigenvectors
/// as columns), in the order nalgebra returns them.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Square root of an eigenvalue of a PSD matrix. Values below 1e-12 are
/// treated as exact zeros: the square root would otherwise blow
/// O(1e-16) eigen-noise up to O(1e-8).
pub fn psd_sqrt_eigenvalue(v: f64) -> f64 {
    if v < 1e-12 {
        0.0
    } else {
        v.sqrt()
    }
}

/// Hermitian PSD square root via eigendecomposition, with noise eigenvalues
/// clipped to zero.
pub fn hermitian_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let (vals, vecs) = hermitian_eigen(m);
    let n = m.nrows();
    let mut diag = DMatrix::<C64>::zeros(n, n);
    for (i, &v) in vals.iter().enumerate() {
        diag[(i, i)] = C64::new(psd_sqrt_eigenvalue(v), 0.0);
    }
    &vecs * diag * vecs.adjoint()
}

/// Haar-distributed random unitary: QR of a complex Gaussian matrix with the
/// R diagonal phases folded back into Q.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> DMatrix<C64> {
    let g = DMatrix::<C64>::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) / 2f64.sqrt()
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}
