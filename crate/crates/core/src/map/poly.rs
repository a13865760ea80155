//! Sparse multivariate polynomial maps ℂⁿ → ℂⁿ.

use crate::error::{validation, Result};
use crate::linalg::{CMatrix, C64};

pub const MAX_DEGREE: u32 = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub idx: Vec<u32>,
    pub coef: C64,
}

impl Monomial {
    pub fn new(idx: Vec<u32>, coef: C64) -> Self {
        Self { idx, coef }
    }

    pub fn degree(&self) -> u32 {
        self.idx.iter().sum()
    }
}

/// One list of monomials per output coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMap {
    components: Vec<Vec<Monomial>>,
    max_exp: u32,
}

impl PolyMap {
    pub fn new(components: Vec<Vec<Monomial>>) -> Result<Self> {
        let dim = components.len();
        if dim == 0 {
            return Err(validation("poly", "at least one component is required"));
        }
        let mut max_exp = 0;
        for (i, comp) in components.iter().enumerate() {
            for (j, m) in comp.iter().enumerate() {
                let path = format!("poly[{i}][{j}]");
                if m.idx.len() != dim {
                    return Err(validation(
                        format!("{path}.idx"),
                        format!("expected {dim} exponents, got {}", m.idx.len()),
                    ));
                }
                if m.degree() > MAX_DEGREE {
                    return Err(validation(
                        format!("{path}.idx"),
                        format!("total degree {} exceeds cap {MAX_DEGREE}", m.degree()),
                    ));
                }
                if !(m.coef.re.is_finite() && m.coef.im.is_finite()) {
                    return Err(validation(path, "coefficient must be finite"));
                }
                max_exp = max_exp.max(m.idx.iter().copied().max().unwrap_or(0));
            }
        }
        Ok(Self { components, max_exp })
    }

    /// The linear map `x ↦ A x`.
    pub fn linear(a: &CMatrix) -> Self {
        let n = a.nrows();
        let components = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| a[(i, j)] != C64::new(0.0, 0.0))
                    .map(|j| Monomial::new(unit_idx(n, j), a[(i, j)]))
                    .collect()
            })
            .collect();
        Self::new(components).expect("linear maps are always valid")
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<Monomial>] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.components
            .iter()
            .flatten()
            .map(Monomial::degree)
            .max()
            .unwrap_or(0)
    }

    fn powers(&self, x: &[C64]) -> Vec<Vec<C64>> {
        x.iter()
            .map(|&xi| {
                let mut p = Vec::with_capacity(self.max_exp as usize + 1);
                let mut acc = C64::new(1.0, 0.0);
                p.push(acc);
                for _ in 0..self.max_exp {
                    acc *= xi;
                    p.push(acc);
                }
                p
            })
            .collect()
    }

    pub fn eval(&self, x: &[C64]) -> Vec<C64> {
        let pw = self.powers(x);
        self.components
            .iter()
            .map(|comp| {
                comp.iter()
                    .map(|m| {
                        m.idx
                            .iter()
                            .enumerate()
                            .fold(m.coef, |acc, (k, &e)| acc * pw[k][e as usize])
                    })
                    .sum()
            })
            .collect()
    }

    /// Exact Jacobian by termwise differentiation.
    pub fn jacobian(&self, x: &[C64]) -> CMatrix {
        let n = self.dim();
        let pw = self.powers(x);
        let mut jac = CMatrix::zeros(n, n);
        for (i, comp) in self.components.iter().enumerate() {
            for m in comp {
                for j in 0..n {
                    let ej = m.idx[j];
                    if ej == 0 {
                        continue;
                    }
                    let mut term = m.coef * f64::from(ej);
                    for (k, &e) in m.idx.iter().enumerate() {
                        let e = if k == j { e - 1 } else { e };
                        term *= pw[k][e as usize];
                    }
                    jac[(i, j)] += term;
                }
            }
        }
        jac
    }

    /// Coefficients of total degree one, i.e. the derivative at the origin.
    pub fn linear_part(&self) -> CMatrix {
        let n = self.dim();
        let mut a = CMatrix::zeros(n, n);
        for (i, comp) in self.components.iter().enumerate() {
            for m in comp.iter().filter(|m| m.degree() == 1) {
                let j = m.idx.iter().position(|&e| e == 1).unwrap();
                a[(i, j)] += m.coef;
            }
        }
        a
    }

    /// Largest coefficient modulus over monomials of degree ≥ 2.
    pub fn nonlinear_size(&self) -> f64 {
        self.components
            .iter()
            .flatten()
            .filter(|m| m.degree() >= 2)
            .map(|m| m.coef.norm())
            .fold(0.0, f64::max)
    }

    /// `c·I + s·self`, used to pass between `h` and `F = I − h`.
    pub fn affine_with_identity(&self, c: C64, s: C64) -> Self {
        let n = self.dim();
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(i, comp)| {
                let mut out: Vec<Monomial> =
                    comp.iter().map(|m| Monomial::new(m.idx.clone(), s * m.coef)).collect();
                out.push(Monomial::new(unit_idx(n, i), c));
                out
            })
            .collect();
        Self::new(components).expect("affine combination of a valid map is valid")
    }
}

pub fn unit_idx(n: usize, j: usize) -> Vec<u32> {
    let mut idx = vec![0; n];
    idx[j] = 1;
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sample() -> PolyMap {
        // h(x, y) = (2x + i y² , x y − 3)
        PolyMap::new(vec![
            vec![Monomial::new(vec![1, 0], c(2.0, 0.0)), Monomial::new(vec![0, 2], c(0.0, 1.0))],
            vec![Monomial::new(vec![1, 1], c(1.0, 0.0)), Monomial::new(vec![0, 0], c(-3.0, 0.0))],
        ])
        .unwrap()
    }

    #[test]
    fn evaluates_by_hand() {
        let h = sample();
        let x = [c(0.5, 0.0), c(0.0, 1.0)];
        let v = h.eval(&x);
        assert!((v[0] - c(1.0, -1.0)).norm() < 1e-15);
        assert!((v[1] - c(-3.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn jacobian_matches_hand_derivative() {
        let h = sample();
        let x = [c(0.5, 0.2), c(-0.1, 0.3)];
        let j = h.jacobian(&x);
        assert!((j[(0, 0)] - c(2.0, 0.0)).norm() < 1e-15);
        assert!((j[(0, 1)] - c(0.0, 2.0) * x[1]).norm() < 1e-15);
        assert!((j[(1, 0)] - x[1]).norm() < 1e-15);
        assert!((j[(1, 1)] - x[0]).norm() < 1e-15);
        assert_eq!(h.linear_part()[(0, 0)], c(2.0, 0.0));
        assert_eq!(h.linear_part()[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn rejects_bad_indices() {
        let err = PolyMap::new(vec![vec![Monomial::new(vec![1, 0], c(1.0, 0.0))]]).unwrap_err();
        assert!(err.to_string().contains("poly[0][0].idx"));
        let err = PolyMap::new(vec![vec![Monomial::new(vec![65], c(1.0, 0.0))]]).unwrap_err();
        assert!(err.to_string().contains("degree"));
    }

    #[test]
    fn identity_shift() {
        let h = sample();
        let f = h.affine_with_identity(c(1.0, 0.0), c(-1.0, 0.0));
        let x = [c(0.3, -0.2), c(0.1, 0.4)];
        let hx = h.eval(&x);
        let fx = f.eval(&x);
        for k in 0..2 {
            assert!((fx[k] - (x[k] - hx[k])).norm() < 1e-15);
        }
    }
}
