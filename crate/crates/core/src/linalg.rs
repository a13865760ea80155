//! Small dense complex linear algebra on ℂⁿ with the Hermitian inner product
//! `⟨u, v⟩ = Σ uᵢ conj(vᵢ)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

/// Hermitian pairing `⟨u, v⟩`; linear in `u`, conjugate-linear in `v`.
///
/// In the Hilbert norm the duality map is `J(x) = {x}`, so this is also the
/// duality pairing `⟨u, x*⟩` used throughout.
pub fn pairing(u: &[C64], v: &[C64]) -> C64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sqr(u: &[C64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum()
}

pub fn norm(u: &[C64]) -> f64 {
    norm_sqr(u).sqrt()
}

pub fn scale(s: C64, u: &[C64]) -> Vec<C64> {
    u.iter().map(|z| s * z).collect()
}

pub fn sub(u: &[C64], v: &[C64]) -> Vec<C64> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn add(u: &[C64], v: &[C64]) -> Vec<C64> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

pub fn mat_vec(a: &CMatrix, x: &[C64]) -> Vec<C64> {
    let v = a * DVector::from_column_slice(x);
    v.iter().copied().collect()
}

/// Extremes of `Re⟨e^{iθ}A u, u⟩` over the unit sphere: the smallest and
/// largest eigenvalues of the Hermitian part of `e^{iθ}A`.
pub fn hermitian_part_extremes(a: &CMatrix, theta: f64) -> (f64, f64) {
    let rotated = a * cis(theta);
    let herm = (&rotated + rotated.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigenvalues();
    let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Eigenvalues of a complex square matrix via the Schur form.
pub fn eigenvalues(a: &CMatrix) -> Vec<C64> {
    if a.nrows() == 1 {
        return vec![a[(0, 0)]];
    }
    match a.clone().schur().eigenvalues() {
        Some(v) => v.iter().copied().collect(),
        // Triangular Schur factor always exposes the eigenvalues on its diagonal.
        None => {
            let (_, t) = a.clone().schur().unpack();
            (0..t.nrows()).map(|i| t[(i, i)]).collect()
        }
    }
}

/// 2-norm condition number from the singular values; `inf` when singular.
pub fn condition_number(a: &CMatrix) -> f64 {
    let sv = a.clone().singular_values();
    let hi = sv.iter().copied().fold(0.0_f64, f64::max);
    let lo = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if lo == 0.0 || !lo.is_finite() {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Solves `A x = b`; `None` when the LU factorization is singular.
pub fn solve(a: &CMatrix, b: &[C64]) -> Option<Vec<C64>> {
    let lu = a.clone().lu();
    lu.solve(&DVector::from_column_slice(b))
        .map(|v| v.iter().copied().collect())
        .filter(|v: &Vec<C64>| v.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
}

pub fn is_finite_vec(u: &[C64]) -> bool {
    u.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}
