//! Holomorphic maps on balls of ℂⁿ.

mod builtin;
pub mod cauchy;
mod poly;
mod spec;

pub use builtin::Builtin;
pub use poly::{unit_idx, Monomial, PolyMap, MAX_DEGREE};
pub use spec::{load_map, load_map_file, MapSpec, MonomialSpec};

use crate::error::{validation, Error, Result};
use crate::linalg::{cis, is_finite_vec, norm, CMatrix, C64};
use std::f64::consts::TAU;

/// Nodes for the derivative at the origin (circle of radius R/2).
pub const ORIGIN_NODES: usize = 256;
/// Nodes for the Jacobian at an interior point (circle of radius (R − ‖x‖)/4).
/// Singularities sit at least four radii away, so the aliasing error is ~4^{−32}.
pub const JACOBIAN_NODES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallDomain {
    pub dim: usize,
    pub radius: f64,
}

impl BallDomain {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(validation("dim", "must be at least 1"));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(validation("R", format!("must be positive and finite, got {radius}")));
        }
        Ok(Self { dim, radius })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapBody {
    Poly(PolyMap),
    Builtin(Builtin),
}

/// An immutable holomorphic map on `B_R ⊂ ℂⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloMap {
    domain: BallDomain,
    body: MapBody,
}

impl HoloMap {
    pub fn poly(radius: f64, p: PolyMap) -> Result<Self> {
        let domain = BallDomain::new(p.dim(), radius)?;
        Self::checked(domain, MapBody::Poly(p))
    }

    pub fn builtin(dim: usize, radius: f64, b: Builtin) -> Result<Self> {
        let domain = BallDomain::new(dim, radius)?;
        if let Some(d) = b.fixed_dim() {
            if d != dim {
                return Err(validation("dim", format!("builtin {} requires dim {d}", b.tag())));
            }
        }
        if radius > b.max_radius() {
            return Err(validation(
                "R",
                format!("builtin {} is singular inside radius {radius}", b.tag()),
            ));
        }
        Self::checked(domain, MapBody::Builtin(b))
    }

    /// The linear map `x ↦ A x` as an exact polynomial.
    pub fn linear(radius: f64, a: &CMatrix) -> Result<Self> {
        Self::poly(radius, PolyMap::linear(a))
    }

    fn checked(domain: BallDomain, body: MapBody) -> Result<Self> {
        let map = Self { domain, body };
        for x in probe_points(domain.dim, 0.99 * domain.radius) {
            let v = map.eval(&x)?;
            if !is_finite_vec(&v) {
                return Err(validation("map", format!("non-finite value at probe point {x:?}")));
            }
        }
        Ok(map)
    }

    pub fn dim(&self) -> usize {
        self.domain.dim
    }

    pub fn radius(&self) -> f64 {
        self.domain.radius
    }

    pub fn domain(&self) -> BallDomain {
        self.domain
    }

    pub fn body(&self) -> &MapBody {
        &self.body
    }

    pub fn as_poly(&self) -> Option<&PolyMap> {
        match &self.body {
            MapBody::Poly(p) => Some(p),
            MapBody::Builtin(_) => None,
        }
    }

    /// Polynomials extend continuously to the closed ball.
    pub fn closed_ball_ok(&self) -> bool {
        matches!(self.body, MapBody::Poly(_) | MapBody::Builtin(Builtin::Linear(_)))
    }

    fn check_dim(&self, x: &[C64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }

    pub fn eval(&self, x: &[C64]) -> Result<Vec<C64>> {
        self.check_dim(x)?;
        match &self.body {
            MapBody::Poly(p) => Ok(p.eval(x)),
            MapBody::Builtin(b) => b.eval(x),
        }
    }

    pub fn at_zero(&self) -> Result<Vec<C64>> {
        self.eval(&vec![C64::new(0.0, 0.0); self.dim()])
    }

    /// `h′(0)`: exact for polynomials and linear builtins, Cauchy integral otherwise.
    pub fn derivative_at_zero(&self) -> Result<CMatrix> {
        match &self.body {
            MapBody::Poly(p) => Ok(p.linear_part()),
            MapBody::Builtin(Builtin::Linear(a)) => Ok(a.clone()),
            MapBody::Builtin(_) => {
                let zero = vec![C64::new(0.0, 0.0); self.dim()];
                self.cauchy_jacobian(&zero, self.radius() / 2.0, ORIGIN_NODES)
            }
        }
    }

    /// `h′(x)` for `‖x‖ < R` (any `x` for polynomials).
    pub fn jacobian(&self, x: &[C64]) -> Result<CMatrix> {
        self.check_dim(x)?;
        match &self.body {
            MapBody::Poly(p) => Ok(p.jacobian(x)),
            MapBody::Builtin(Builtin::Linear(a)) => Ok(a.clone()),
            MapBody::Builtin(_) => {
                let gap = self.radius() - norm(x);
                if gap <= 0.0 {
                    return Err(Error::SingularPoint(format!(
                        "Jacobian requested outside the ball (‖x‖ = {})",
                        norm(x)
                    )));
                }
                self.cauchy_jacobian(x, gap / 4.0, JACOBIAN_NODES)
            }
        }
    }

    fn cauchy_jacobian(&self, x: &[C64], rho: f64, nodes: usize) -> Result<CMatrix> {
        let n = self.dim();
        let mut jac = CMatrix::zeros(n, n);
        for j in 0..n {
            let col = cauchy::derivative(
                |t| {
                    let mut y = x.to_vec();
                    y[j] += t;
                    self.eval(&y)
                },
                rho,
                nodes,
                n,
            )?;
            for (i, v) in col.into_iter().enumerate() {
                jac[(i, j)] = v;
            }
        }
        Ok(jac)
    }

    /// Largest nonlinear coefficient; `None` when not a polynomial.
    pub fn nonlinear_size(&self) -> Option<f64> {
        match &self.body {
            MapBody::Poly(p) => Some(p.nonlinear_size()),
            MapBody::Builtin(Builtin::Linear(_)) => Some(0.0),
            MapBody::Builtin(_) => None,
        }
    }

    /// `c·I + s·h` on the same ball; defined for polynomial and linear maps.
    pub fn affine_with_identity(&self, c: C64, s: C64) -> Result<Self> {
        let p = match &self.body {
            MapBody::Poly(p) => p.clone(),
            MapBody::Builtin(Builtin::Linear(a)) => PolyMap::linear(a),
            MapBody::Builtin(b) => {
                return Err(Error::Precondition(format!(
                    "identity shift is only defined for polynomial maps, not {}",
                    b.tag()
                )))
            }
        };
        Self::poly(self.radius(), p.affine_with_identity(c, s))
    }
}

/// Deterministic probe set: origin, scaled axis directions with several phases,
/// and the normalized all-ones direction.
fn probe_points(dim: usize, r: f64) -> Vec<Vec<C64>> {
    let zero = C64::new(0.0, 0.0);
    let mut pts = vec![vec![zero; dim]];
    for j in 0..dim {
        for k in 0..8 {
            let mut x = vec![zero; dim];
            x[j] = cis(TAU * (k as f64 + 0.5) / 8.0) * r;
            pts.push(x);
        }
    }
    let s = r / (dim as f64).sqrt();
    pts.push(vec![C64::new(s, 0.0); dim]);
    pts
}
