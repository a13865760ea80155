//! Nonlinear resolvent `λx − h(x) = z`, the map `Φ_λ = (λI − h)⁻¹ ∘ λI`, and
//! null/fixed points obtained by iterating it.

use super::mu::{fixp_radius, nullp_radius, FixpRadius};
use crate::error::{Error, Result};
use crate::growth::BoundInputs;
use crate::linalg::{condition_number, norm, scale, solve, sub, CMatrix, C64};
use crate::map::HoloMap;
use crate::oracle::deriv_bounds;
use crate::oracle::sampler::unit_vector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Residual tolerance, scaled by `1 + ‖z‖`.
    pub tol: f64,
    pub max_iter: usize,
    /// Above this condition number Newton hands over to the fixed-point step.
    pub cond_limit: f64,
    pub damping: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 500, cond_limit: 1e12, damping: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Newton,
    FixedPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveTrace {
    pub lambda: C64,
    pub z: Vec<C64>,
    pub solution: Vec<C64>,
    pub iterations: usize,
    pub residual: f64,
    pub residuals: Vec<f64>,
    pub converged: bool,
    /// Method used for the final step.
    pub method: Method,
    /// `‖z‖ + ω(r) < r Re λ`, when oracle inputs were supplied.
    pub certified: Option<bool>,
}

fn residual_vec(map: &HoloMap, lambda: C64, z: &[C64], x: &[C64]) -> Option<Vec<C64>> {
    let hx = map.eval(x).ok()?;
    let v: Vec<C64> = x.iter().zip(&hx).zip(z).map(|((xi, hi), zi)| lambda * xi - hi - zi).collect();
    v.iter().all(|c| c.re.is_finite() && c.im.is_finite()).then_some(v)
}

/// Solves `λx − h(x) = z` by Newton from `z/λ`, falling back to the damped
/// fixed-point step `x ← (z + h(x))/λ` when `λI − h′(x)` is ill-conditioned.
///
/// Non-convergence is reported in the trace, not as an error; an error is
/// returned only when the Jacobian is singular and no fallback exists (`λ = 0`).
pub fn solve_resolvent(map: &HoloMap, lambda: C64, z: &[C64], r_cap: f64, cfg: &SolverConfig) -> Result<SolveTrace> {
    if z.len() != map.dim() {
        return Err(Error::DimensionMismatch { expected: map.dim(), got: z.len() });
    }
    let n = map.dim();
    let target = cfg.tol * (1.0 + norm(z));
    let mut x: Vec<C64> = if lambda == C64::new(0.0, 0.0) { vec![C64::new(0.0, 0.0); n] } else { scale(1.0 / lambda, z) };
    let mut res = residual_vec(map, lambda, z, &x)
        .ok_or_else(|| Error::SingularPoint("initial iterate is not evaluable".into()))?;
    let mut rnorm = norm(&res);
    let mut trace = SolveTrace {
        lambda,
        z: z.to_vec(),
        solution: x.clone(),
        iterations: 0,
        residual: rnorm,
        residuals: vec![rnorm],
        converged: false,
        method: Method::Newton,
        certified: None,
    };
    // one extra step after reaching the tolerance so iterated solves do not stall
    let mut polished = false;
    for it in 1..=cfg.max_iter {
        if rnorm <= target {
            if polished || rnorm == 0.0 {
                break;
            }
            polished = true;
        }
        let step = match map.jacobian(&x) {
            Ok(jh) => {
                let j = CMatrix::identity(n, n) * lambda - jh;
                if condition_number(&j) <= cfg.cond_limit {
                    solve(&j, &res).map(|d| (d, Method::Newton))
                } else {
                    None
                }
            }
            Err(_) => None,
        };
        let (dir, method) = match step {
            Some(s) => s,
            None if lambda != C64::new(0.0, 0.0) => {
                // x − (z + h(x))/λ = res/λ
                (scale(1.0 / lambda, &res), Method::FixedPoint)
            }
            None => return Err(Error::JacobianSingular(format!("λ = 0 and h′(x) singular at iteration {it}"))),
        };
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let cand = sub(&x, &scale(C64::new(t, 0.0), &dir));
            if let Some(r) = residual_vec(map, lambda, z, &cand) {
                let rn = norm(&r);
                if rn < rnorm || t < 1e-12 {
                    accepted = Some((cand, r, rn));
                    break;
                }
            }
            t *= cfg.damping;
        }
        let Some((cand, r, rn)) = accepted else {
            break;
        };
        x = cand;
        res = r;
        rnorm = rn;
        trace.iterations = it;
        trace.method = method;
        trace.residuals.push(rn);
    }
    trace.converged = rnorm <= target && norm(&x) <= r_cap;
    trace.residual = rnorm;
    trace.solution = x;
    Ok(trace)
}

/// `‖z‖ + ω(r) < r Re λ`, the sufficient condition for a unique solution in `B_r`.
pub fn certify(inp: &BoundInputs, lambda: C64, z: &[C64], r: f64) -> Result<bool> {
    let omega = super::mu::omega_of_r(inp, r)?;
    Ok(norm(z) + omega < r * lambda.re)
}

/// [`solve_resolvent`] with the certification recorded.
pub fn solve_certified(
    map: &HoloMap,
    inp: &BoundInputs,
    lambda: C64,
    z: &[C64],
    r_cap: f64,
    cfg: &SolverConfig,
) -> Result<SolveTrace> {
    let certified = certify(inp, lambda, z, r_cap)?;
    let mut trace = solve_resolvent(map, lambda, z, r_cap, cfg)?;
    trace.certified = Some(certified);
    Ok(trace)
}

/// `Φ_λ(y)`: the solution of `λx − h(x) = λy`.
pub fn phi(map: &HoloMap, lambda: C64, y: &[C64], r_cap: f64, cfg: &SolverConfig) -> Result<SolveTrace> {
    solve_resolvent(map, lambda, &scale(lambda, y), r_cap, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiTrace {
    pub lambda: f64,
    pub limit: Vec<C64>,
    pub iterations: usize,
    pub steps: Vec<f64>,
}

const PHI_STEP_TOL: f64 = 1e-12;
const PHI_MAX_ITER: usize = 10_000;

/// Iterates `y ← Φ_λ(y)` until successive iterates differ by at most 1e-12.
pub fn iterate_phi(map: &HoloMap, lambda: f64, y0: &[C64], r_cap: f64, cfg: &SolverConfig) -> Result<PhiTrace> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("λ must be positive, got {lambda}")));
    }
    let lam = C64::new(lambda, 0.0);
    let mut y = y0.to_vec();
    let mut steps = Vec::new();
    for it in 1..=PHI_MAX_ITER {
        let t = phi(map, lam, &y, f64::INFINITY, cfg)?;
        if t.residual > cfg.tol * (1.0 + lambda * norm(&y)) {
            return Err(Error::NoConvergence { iterations: it, residual: t.residual });
        }
        let step = norm(&sub(&t.solution, &y));
        steps.push(step);
        y = t.solution;
        if step <= PHI_STEP_TOL {
            if norm(&y) > r_cap {
                return Err(Error::Domain(format!("limit ‖x₀‖ = {} exceeds r_cap = {r_cap}", norm(&y))));
            }
            return Ok(PhiTrace { lambda, limit: y, iterations: it, steps });
        }
    }
    Err(Error::NoConvergence { iterations: PHI_MAX_ITER, residual: steps.last().copied().unwrap_or(f64::NAN) })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullPointReport {
    pub c: f64,
    #[serde(rename = "L")]
    pub lip: f64,
    /// Radius bound `r₁`; `None` when `L + 4c < 0` fails.
    pub radius_bound: Option<f64>,
    pub trace: PhiTrace,
    pub limit_norm: f64,
    pub h_at_limit: f64,
    /// Distance to the limit obtained with `2λ`.
    pub lambda_gap: f64,
}

impl NullPointReport {
    pub fn within_radius(&self, slack: f64) -> bool {
        self.radius_bound.is_some_and(|r| self.limit_norm <= r + slack)
    }
}

/// Null point of `h` on its ball via `Φ_λ` iteration from the origin, with the
/// radius bound and a `2λ` rerun.
pub fn null_point(map: &HoloMap, lambda: f64, cfg: &SolverConfig) -> Result<NullPointReport> {
    let h0 = map.at_zero()?;
    let c = norm(&h0);
    let lip = deriv_bounds(map, 0.0)?.upper;
    let zero = vec![C64::new(0.0, 0.0); map.dim()];
    let trace = iterate_phi(map, lambda, &zero, map.radius(), cfg)?;
    let again = iterate_phi(map, 2.0 * lambda, &zero, map.radius(), cfg)?;
    let h_at_limit = norm(&map.eval(&trace.limit)?);
    Ok(NullPointReport {
        c,
        lip,
        radius_bound: nullp_radius(c, lip),
        limit_norm: norm(&trace.limit),
        lambda_gap: norm(&sub(&trace.limit, &again.limit)),
        h_at_limit,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointReport {
    pub fixed_point: Vec<C64>,
    pub defect: f64,
    pub radius: FixpRadius,
    pub within_radius: bool,
}

/// Fixed point of a self-map `F` of the unit ball via the null point of `F − I`,
/// when `L_F < 1 − 4‖F(0)‖`.
pub fn fixed_point_selfmap(f: &HoloMap, cfg: &SolverConfig) -> Result<FixedPointReport> {
    let c = norm(&f.at_zero()?);
    let lip_f = deriv_bounds(f, 0.0)?.upper;
    let Some(radius) = fixp_radius(c, lip_f) else {
        return Err(Error::ConditionFailed(format!("L_F = {lip_f} is not below 1 − 4‖F(0)‖ = {}", 1.0 - 4.0 * c)));
    };
    if let Some(x) = self_map_violation(f) {
        return Err(Error::Precondition(format!("F does not map the ball into itself (‖F(x)‖ ≥ 1 at {x:?})")));
    }
    let h = f.affine_with_identity(C64::new(-1.0, 0.0), C64::new(1.0, 0.0))?;
    let zero = vec![C64::new(0.0, 0.0); f.dim()];
    let trace = iterate_phi(&h, 1.0, &zero, f.radius(), cfg)?;
    let fx = f.eval(&trace.limit)?;
    let defect = norm(&sub(&fx, &trace.limit));
    let within_radius = norm(&trace.limit) <= radius.nullp_style_root + 1e-6;
    Ok(FixedPointReport { fixed_point: trace.limit, defect, radius, within_radius })
}

/// Spot check of `‖F(x)‖ < R` on 10³ points of the sphere of radius 0.999 R.
fn self_map_violation(f: &HoloMap) -> Option<Vec<C64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f);
    (0..1000)
        .map(|_| scale(C64::new(0.999 * f.radius(), 0.0), &unit_vector(&mut rng, f.dim())))
        .find(|x| f.eval(x).map_or(true, |v| norm(&v) >= f.radius()))
}
