//! Named analytic maps.

use crate::error::{Error, Result};
use crate::linalg::{cis, mat_vec, CMatrix, C64};

const SINGULAR_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    /// `h(x) = i x (1 + x)/(1 − x)` on the unit disc.
    CayleyI,
    /// `f(x) = x / (1 − x₁)^{1 + e^{2iθ}}` (principal branch), any dimension.
    SpiralRef { theta: f64 },
    /// Disc automorphism `e^{it}(x − a)/(1 − ā x)`.
    MoebiusAuto { a: C64, phase: f64 },
    /// `x ↦ A x`.
    Linear(CMatrix),
}

impl Builtin {
    pub fn tag(&self) -> &'static str {
        match self {
            Builtin::CayleyI => "cayley_i",
            Builtin::SpiralRef { .. } => "spiral_ref",
            Builtin::MoebiusAuto { .. } => "moebius_auto",
            Builtin::Linear(_) => "linear",
        }
    }

    /// Largest radius on which the map is holomorphic in dimension `dim`.
    pub fn max_radius(&self) -> f64 {
        match self {
            Builtin::CayleyI | Builtin::SpiralRef { .. } => 1.0,
            Builtin::MoebiusAuto { a, .. } => {
                if a.norm() == 0.0 {
                    f64::INFINITY
                } else {
                    1.0 / a.norm()
                }
            }
            Builtin::Linear(_) => f64::INFINITY,
        }
    }

    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            Builtin::CayleyI | Builtin::MoebiusAuto { .. } => Some(1),
            Builtin::SpiralRef { .. } => None,
            Builtin::Linear(a) => Some(a.nrows()),
        }
    }

    pub fn eval(&self, x: &[C64]) -> Result<Vec<C64>> {
        let one = C64::new(1.0, 0.0);
        match self {
            Builtin::CayleyI => {
                let z = x[0];
                let den = one - z;
                if den.norm() <= SINGULAR_TOL {
                    return Err(Error::SingularPoint(format!("cayley_i pole at x = {z}")));
                }
                Ok(vec![C64::new(0.0, 1.0) * z * (one + z) / den])
            }
            Builtin::SpiralRef { theta } => {
                let base = one - x[0];
                if base.norm() <= SINGULAR_TOL {
                    return Err(Error::SingularPoint(format!("spiral_ref branch point at x₁ = {}", x[0])));
                }
                let expo = one + cis(2.0 * theta);
                let g = (-expo * base.ln()).exp();
                Ok(x.iter().map(|xi| xi * g).collect())
            }
            Builtin::MoebiusAuto { a, phase } => {
                let z = x[0];
                let den = one - a.conj() * z;
                if den.norm() <= SINGULAR_TOL {
                    return Err(Error::SingularPoint(format!("moebius_auto pole at x = {z}")));
                }
                Ok(vec![cis(*phase) * (z - a) / den])
            }
            Builtin::Linear(a) => Ok(mat_vec(a, x)),
        }
    }
}
