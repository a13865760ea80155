//! One-variable inequality kernel: Hadamard–Borel–Carathéodory, Kresin–Maz'ya,
//! and the lifted bounds on `Re(ζ̄ f(ζ))` that the vector estimates reduce to.
//!
//! Throughout, `R` is the effective radius of the scalar function (slightly
//! inside the nominal one), `|ζ| = r < R`, `f₀ = f(0)`, `a = f′(0)`, and
//! `S = sup_{|ξ|=R} Re(ξ̄ f(ξ))`.

use crate::error::{Error, Result};
use crate::linalg::{cis, mat_vec, norm, pairing, scale, C64};
use crate::map::HoloMap;
use crate::oracle::{sphere_sup, SamplerConfig};
use serde::Serialize;
use std::f64::consts::{PI, TAU};

/// Inset used for polynomials, whose extrema sit on the boundary circle.
pub const POLY_INSET: f64 = 1e-9;
/// Builtins may be singular on the boundary, so lines are checked up to 0.99 R.
pub const LINE_FRACTION: f64 = 0.99;
pub const VIOLATION_TOL: f64 = 1e-9;

/// `ℒ(θ, r) = 2r(R − r cos θ)/(R² − r²)`.
pub fn km_factor(theta: f64, r: f64, big_r: f64) -> Result<f64> {
    if !(r >= 0.0 && r < big_r) {
        return Err(Error::Domain(format!("km_factor needs 0 ≤ r < R, got r = {r}, R = {big_r}")));
    }
    Ok(2.0 * r * (big_r - r * theta.cos()) / (big_r * big_r - r * r))
}

/// A holomorphic function on the disc of radius `R`.
#[derive(Debug, Clone)]
pub enum ScalarFn {
    Poly { coefs: Vec<C64>, radius: f64 },
    /// `ζ ↦ ⟨h(ζu), u⟩` for a unit vector `u`.
    Line { map: HoloMap, dir: Vec<C64> },
}

impl ScalarFn {
    pub fn poly(coefs: Vec<C64>, radius: f64) -> Result<Self> {
        if coefs.len() > 65 {
            return Err(Error::Domain(format!("degree {} exceeds cap 64", coefs.len() - 1)));
        }
        if coefs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) || !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain("coefficients and radius must be finite".into()));
        }
        Ok(ScalarFn::Poly { coefs, radius })
    }

    pub fn line(map: HoloMap, dir: &[C64]) -> Result<Self> {
        if dir.len() != map.dim() {
            return Err(Error::DimensionMismatch { expected: map.dim(), got: dir.len() });
        }
        let len = norm(dir);
        if len == 0.0 {
            return Err(Error::Domain("direction must be nonzero".into()));
        }
        Ok(ScalarFn::Line { dir: scale(C64::new(1.0 / len, 0.0), dir), map })
    }

    pub fn radius(&self) -> f64 {
        match self {
            ScalarFn::Poly { radius, .. } => *radius,
            ScalarFn::Line { map, .. } => map.radius(),
        }
    }

    pub fn effective_radius(&self) -> f64 {
        match self {
            ScalarFn::Poly { radius, .. } => radius * (1.0 - POLY_INSET),
            ScalarFn::Line { map, .. } => map.radius() * LINE_FRACTION,
        }
    }

    /// `f(ζ)`; NaN if the underlying map cannot be evaluated.
    pub fn eval(&self, z: C64) -> C64 {
        match self {
            ScalarFn::Poly { coefs, .. } => coefs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c),
            ScalarFn::Line { map, dir } => match map.eval(&scale(z, dir)) {
                Ok(v) => pairing(&v, dir),
                Err(_) => C64::new(f64::NAN, f64::NAN),
            },
        }
    }

    pub fn derivative_at_zero(&self) -> Result<C64> {
        match self {
            ScalarFn::Poly { coefs, .. } => Ok(coefs.get(1).copied().unwrap_or_default()),
            ScalarFn::Line { map, dir } => Ok(pairing(&mat_vec(&map.derivative_at_zero()?, dir), dir)),
        }
    }

    /// `sup_{|ξ| = R_eff} obj(ξ, f(ξ))`.
    pub fn circle_sup(&self, obj: impl Fn(C64, C64) -> f64) -> f64 {
        let cfg = SamplerConfig::default();
        sphere_sup(1, self.effective_radius(), |x| obj(x[0], self.eval(x[0])), &cfg).value
    }
}

/// Boundary data shared by the lifted bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiftData {
    pub radius: f64,
    pub f0: C64,
    pub a: C64,
    /// `sup_{|ξ|=R} Re(ξ̄ f(ξ))`.
    pub s: f64,
}

impl LiftData {
    pub fn new(f: &ScalarFn) -> Result<Self> {
        Ok(Self {
            radius: f.effective_radius(),
            f0: f.eval(C64::new(0.0, 0.0)),
            a: f.derivative_at_zero()?,
            s: f.circle_sup(|xi, fx| (xi.conj() * fx).re),
        })
    }

    fn check(&self, zeta: C64) -> Result<f64> {
        let r = zeta.norm();
        if r >= self.radius {
            return Err(Error::Domain(format!("|ζ| = {r} must be < R = {}", self.radius)));
        }
        Ok(r)
    }

    /// Upper bound for `Re(ζ̄ f(ζ))` from the Borel–Carathéodory inequality applied to
    /// `g(ζ) = (f(ζ) − f₀)/ζ + ζ conj(f₀)/R²`, whose real part on `|ξ| = R` is `Re(ξ̄ f)/R²`.
    pub fn pairing(&self, zeta: C64) -> Result<f64> {
        let r = self.check(zeta)?;
        let big_r = self.radius;
        let q = r * r / (big_r * big_r);
        Ok((1.0 - q) * (zeta.conj() * self.f0).re
            + r * r * (self.a.re * (big_r - r) / (big_r + r) + 2.0 * r / (big_r * big_r * (big_r + r)) * self.s))
    }

    /// Upper bound for `Re(e^{iθ} f(ζ) ζ̄)`: Kresin–Maz'ya applied to the same `g`.
    /// Multiplying back by `|ζ|²` keeps the `ζ̄ f₀` and `ζ conj f₀` factors.
    pub fn rotated(&self, theta: f64, zeta: C64) -> Result<f64> {
        let r = self.check(zeta)?;
        let big_r = self.radius;
        let l = km_factor(theta, r, big_r)?;
        let rot = cis(theta);
        let q = r * r / (big_r * big_r);
        let head = (rot * (zeta.conj() * self.f0 - q * zeta * self.f0.conj())).re;
        Ok(head + r * r * ((self.a * (rot - l)).re + l * self.s / (big_r * big_r)))
    }
}

/// `r²[ℒ/R² · S_θ + Re(a) − ℒ Re(e^{iθ} a)]` bounding `Re((f(ζ) − f₀) ζ̄)`,
/// where `S_θ = sup_{|ξ|=R} Re(e^{iθ}(f(ξ) − f₀) ξ̄)`.
pub fn centered_bound_rhs(radius: f64, a: C64, s_theta: f64, theta: f64, zeta: C64) -> Result<f64> {
    let r = zeta.norm();
    let l = km_factor(theta, r, radius)?;
    Ok(r * r * (l * s_theta / (radius * radius) + a.re - l * (cis(theta) * a).re))
}

pub fn lifted_pairing_bound(f: &ScalarFn, zeta: C64) -> Result<f64> {
    LiftData::new(f)?.pairing(zeta)
}

pub fn lifted_rotated_bound(f: &ScalarFn, theta: f64, zeta: C64) -> Result<f64> {
    LiftData::new(f)?.rotated(theta, zeta)
}

pub fn lifted_centered_bound(f: &ScalarFn, theta: f64, zeta: C64) -> Result<f64> {
    let f0 = f.eval(C64::new(0.0, 0.0));
    let rot = cis(theta);
    let s_theta = f.circle_sup(|xi, fx| (rot * (fx - f0) * xi.conj()).re);
    centered_bound_rhs(f.effective_radius(), f.derivative_at_zero()?, s_theta, theta, zeta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPlan {
    pub radii: usize,
    pub angles: usize,
}

impl Default for GridPlan {
    fn default() -> Self {
        Self { radii: 64, angles: 64 }
    }
}

impl GridPlan {
    /// Chebyshev radii in `(0, R)` crossed with equispaced angles.
    pub fn points(&self, radius: f64) -> Vec<C64> {
        let n = self.radii as f64;
        let mut pts = Vec::with_capacity(self.radii * self.angles);
        for j in 0..self.radii {
            let r = 0.5 * radius * (1.0 - ((2 * j + 1) as f64 * PI / (2.0 * n)).cos());
            for k in 0..self.angles {
                pts.push(cis(TAU * k as f64 / self.angles as f64) * r);
            }
        }
        pts
    }
}

/// Largest excess `lhs − rhs` over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ViolationReport {
    pub checked: usize,
    pub max_excess: f64,
    pub violations: usize,
    #[serde(skip)]
    pub worst_at: Option<C64>,
}

impl ViolationReport {
    fn new() -> Self {
        Self { checked: 0, max_excess: f64::NEG_INFINITY, violations: 0, worst_at: None }
    }

    fn record(&mut self, zeta: C64, excess: f64) {
        self.checked += 1;
        let excess = if excess.is_nan() { f64::INFINITY } else { excess };
        if excess > VIOLATION_TOL {
            self.violations += 1;
        }
        if excess > self.max_excess {
            self.max_excess = excess;
            self.worst_at = Some(zeta);
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn sweep(g: &ScalarFn, plan: &GridPlan, mut excess: impl FnMut(C64, C64) -> f64) -> ViolationReport {
    let mut rep = ViolationReport::new();
    for z in plan.points(g.effective_radius()) {
        let e = excess(z, g.eval(z));
        rep.record(z, e);
    }
    rep
}

/// `Re g(ζ) ≤ ((R−r)/(R+r)) Re g(0) + (2r/(R+r)) sup Re g`.
pub fn check_borel_caratheodory(g: &ScalarFn, plan: &GridPlan) -> ViolationReport {
    let big_r = g.effective_radius();
    let g0 = g.eval(C64::new(0.0, 0.0)).re;
    let sup = g.circle_sup(|_, gx| gx.re);
    sweep(g, plan, |z, gz| {
        let r = z.norm();
        gz.re - ((big_r - r) / (big_r + r) * g0 + 2.0 * r / (big_r + r) * sup)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

/// Upper: `Re(e^{iθ}(g(ζ) − g(0))) ≤ ℒ(θ,r)[sup Re g − Re g(0)]`;
/// lower: `≥ ℒ(θ,r)[inf Re g − Re g(0)]`.
pub fn check_km(g: &ScalarFn, theta: f64, side: Side, plan: &GridPlan) -> ViolationReport {
    let big_r = g.effective_radius();
    let g0 = g.eval(C64::new(0.0, 0.0));
    let rot = cis(theta);
    let ext = match side {
        Side::Upper => g.circle_sup(|_, gx| gx.re),
        Side::Lower => -g.circle_sup(|_, gx| -gx.re),
    };
    sweep(g, plan, |z, gz| {
        let l = km_factor(theta, z.norm(), big_r).unwrap_or(f64::NAN);
        let lhs = (rot * (gz - g0)).re;
        let bound = l * (ext - g0.re);
        match side {
            Side::Upper => lhs - bound,
            Side::Lower => bound - lhs,
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarSuiteReport {
    pub borel_caratheodory: ViolationReport,
    pub km_upper: ViolationReport,
    pub km_lower: ViolationReport,
    pub pairing: ViolationReport,
    pub rotated: ViolationReport,
    pub centered: ViolationReport,
    /// `Re f′(0) − S/R²`; must be ≤ 0.
    pub derivative_excess: f64,
}

impl ScalarSuiteReport {
    pub fn passed(&self) -> bool {
        [self.borel_caratheodory, self.km_upper, self.km_lower, self.pairing, self.rotated, self.centered]
            .iter()
            .all(ViolationReport::passed)
            && self.derivative_excess <= VIOLATION_TOL
    }

    pub fn max_excess(&self) -> f64 {
        [self.borel_caratheodory, self.km_upper, self.km_lower, self.pairing, self.rotated, self.centered]
            .iter()
            .map(|v| v.max_excess)
            .fold(self.derivative_excess, f64::max)
    }
}

/// Every scalar inequality for `f` (also used as `g`) at angle `θ`.
pub fn check_scalar_suite(f: &ScalarFn, theta: f64, plan: &GridPlan) -> Result<ScalarSuiteReport> {
    let lift = LiftData::new(f)?;
    let rot = cis(theta);
    let s_theta = f.circle_sup(|xi, fx| (rot * (fx - lift.f0) * xi.conj()).re);
    let pairing = sweep(f, plan, |z, fz| (z.conj() * fz).re - lift.pairing(z).unwrap_or(f64::NAN));
    let rotated = sweep(f, plan, |z, fz| (rot * fz * z.conj()).re - lift.rotated(theta, z).unwrap_or(f64::NAN));
    let centered = sweep(f, plan, |z, fz| {
        ((fz - lift.f0) * z.conj()).re - centered_bound_rhs(lift.radius, lift.a, s_theta, theta, z).unwrap_or(f64::NAN)
    });
    Ok(ScalarSuiteReport {
        borel_caratheodory: check_borel_caratheodory(f, plan),
        km_upper: check_km(f, theta, Side::Upper, plan),
        km_lower: check_km(f, theta, Side::Lower, plan),
        pairing,
        rotated,
        centered,
        derivative_excess: lift.a.re - lift.s / (lift.radius * lift.radius),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LittlewoodBounds {
    /// `r² p(r)` with `p(r) = ((R+r)/(R−r))L − (2r/(R−r)) M_R/R²`.
    pub lower: f64,
    pub p: f64,
    /// `r² L`.
    pub sandwich_lower: f64,
    /// `r²[((R−r)/(R+r))L + (2r/(R+r)) M_R/R²]`.
    pub sandwich_upper: f64,
}

pub fn littlewood_lower(l: f64, m_big: f64, big_r: f64, r: f64) -> Result<LittlewoodBounds> {
    if !(r > 0.0 && r < big_r) {
        return Err(Error::Domain(format!("littlewood_lower needs 0 < r < R, got r = {r}")));
    }
    let p = (big_r + r) / (big_r - r) * l - 2.0 * r / (big_r - r) * m_big / (big_r * big_r);
    let upper = (big_r - r) / (big_r + r) * l + 2.0 * r / (big_r + r) * m_big / (big_r * big_r);
    Ok(LittlewoodBounds { lower: r * r * p, p, sandwich_lower: r * r * l, sandwich_upper: r * r * upper })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use crate::map::Builtin;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn small_plan() -> GridPlan {
        GridPlan { radii: 24, angles: 24 }
    }

    #[test]
    fn km_factor_values() {
        assert!((km_factor(0.0, 0.5, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(km_factor(1.3, 0.0, 1.0).unwrap(), 0.0);
        let r = 1.0 - 1e-9;
        assert!((km_factor(0.0, r, 1.0).unwrap() - 2.0 * r / (1.0 + r)).abs() < 1e-9);
        assert!(km_factor(0.0, 1.0, 1.0).is_err());
        assert_eq!(km_factor(0.7, 0.4, 1.0).unwrap(), km_factor(-0.7, 0.4, 1.0).unwrap());
    }

    #[test]
    fn km_factor_increasing_at_zero_angle() {
        let mut prev = 0.0;
        for k in 1..1000 {
            let v = km_factor(0.0, k as f64 / 1000.0, 1.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn borel_caratheodory_constant_is_equality() {
        let g = ScalarFn::poly(vec![c(0.3, -2.0)], 1.0).unwrap();
        let rep = check_borel_caratheodory(&g, &small_plan());
        assert!(rep.passed() && rep.max_excess.abs() < 1e-14);
    }

    #[test]
    fn borel_caratheodory_identity_on_real_axis() {
        let g = ScalarFn::poly(vec![c(0.0, 0.0), c(1.0, 0.0)], 1.0).unwrap();
        let rep = check_borel_caratheodory(&g, &small_plan());
        assert!(rep.passed());
        // the real axis saturates r ≤ 2r/(1+r) only at r = R
        assert!(rep.max_excess < 0.0);
    }

    #[test]
    fn km_identity_example() {
        let g = ScalarFn::poly(vec![c(0.0, 0.0), c(1.0, 0.0)], 1.0).unwrap();
        assert!(check_km(&g, 0.0, Side::Upper, &small_plan()).passed());
        assert!(check_km(&g, 0.0, Side::Lower, &small_plan()).passed());
    }

    #[test]
    fn linear_saturates_lifted_bounds() {
        let alpha = c(0.7, -0.4);
        let f = ScalarFn::poly(vec![c(0.0, 0.0), alpha], 1.0).unwrap();
        let lift = LiftData::new(&f).unwrap();
        for z in [c(0.3, 0.1), c(-0.5, 0.6), c(0.0, -0.9)] {
            let lhs = (z.conj() * f.eval(z)).re;
            assert!((lift.pairing(z).unwrap() - lhs).abs() < 1e-12);
        }
        let id = ScalarFn::poly(vec![c(0.0, 0.0), c(1.0, 0.0)], 1.0).unwrap();
        let lift = LiftData::new(&id).unwrap();
        let z = c(0.4, 0.3);
        assert!((lift.rotated(0.0, z).unwrap() - z.norm_sqr()).abs() < 1e-12);
        // the centered bound for f(ζ) = ζ at θ = 0 is also an equality
        let b = lifted_centered_bound(&id, 0.0, z).unwrap();
        assert!((b - z.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn zero_function_bounds_vanish() {
        let f = ScalarFn::poly(vec![c(0.0, 0.0)], 1.0).unwrap();
        let z = c(0.2, 0.5);
        assert_eq!(lifted_pairing_bound(&f, z).unwrap(), 0.0);
        assert_eq!(lifted_rotated_bound(&f, 0.3, z).unwrap(), 0.0);
        assert_eq!(lifted_centered_bound(&f, 0.3, z).unwrap(), 0.0);
        let k = ScalarFn::poly(vec![c(0.4, 0.2)], 1.0).unwrap();
        assert!(lifted_centered_bound(&k, 0.3, z).unwrap().abs() < 1e-15);
    }

    #[test]
    fn lifted_bounds_reject_outside_points() {
        let f = ScalarFn::poly(vec![c(0.0, 0.0), c(1.0, 0.0)], 1.0).unwrap();
        assert!(matches!(lifted_pairing_bound(&f, c(1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn random_polynomials_pass_suite() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let deg = rng.gen_range(0..=8);
            let coefs = (0..=deg).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let f = ScalarFn::poly(coefs, rng.gen_range(0.5..2.0)).unwrap();
            let theta = rng.gen_range(-PI..PI);
            let rep = check_scalar_suite(&f, theta, &small_plan()).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn builtin_line_passes_suite() {
        let h = HoloMap::builtin(1, 1.0, Builtin::CayleyI).unwrap();
        let f = ScalarFn::line(h, &[c(1.0, 0.0)]).unwrap();
        assert!((f.derivative_at_zero().unwrap() - c(0.0, 1.0)).norm() < 1e-10);
        let rep = check_scalar_suite(&f, PI / 3.0, &small_plan()).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);
        let lin = HoloMap::builtin(2, 1.0, Builtin::Linear(a)).unwrap();
        let f = ScalarFn::line(lin, &[c(1.0, 0.0), c(1.0, 1.0)]).unwrap();
        assert!(check_scalar_suite(&f, 1.0, &small_plan()).unwrap().passed());
    }

    #[test]
    fn littlewood_identities() {
        let b = littlewood_lower(0.5, 0.5, 1.0, 0.3).unwrap();
        assert!((b.p - 0.5).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let l = rng.gen_range(-2.0..2.0);
            let m = l + rng.gen_range(0.0..3.0);
            let r = rng.gen_range(0.01..0.99);
            let b = littlewood_lower(l, m, 1.0, r).unwrap();
            assert!(b.p <= l + 1e-12);
            assert!(b.sandwich_lower <= b.sandwich_upper + 1e-12);
        }
        assert!(littlewood_lower(0.0, 1.0, 1.0, 1.0).is_err());
        let small = littlewood_lower(0.7, 2.0, 1.0, 1e-9).unwrap();
        assert!(small.lower.abs() < 1e-15 && (small.p - 0.7).abs() < 1e-8);
    }

    #[test]
    fn littlewood_lower_bounds_sphere_inf() {
        // for f(0) = 0: r² p(r) ≤ Re(ζ̄ f(ζ)) on |ζ| = r, with L = Re f′(0), M_R = S
        let f = ScalarFn::poly(vec![c(0.0, 0.0), c(0.4, 0.3), c(-0.5, 0.2), c(0.1, 0.6)], 1.0).unwrap();
        let lift = LiftData::new(&f).unwrap();
        for r in [0.1, 0.4, 0.8] {
            let b = littlewood_lower(lift.a.re, lift.s, lift.radius, r).unwrap();
            for k in 0..360 {
                let z = cis(TAU * k as f64 / 360.0) * r;
                assert!((z.conj() * f.eval(z)).re >= b.lower - 1e-12);
                assert!((z.conj() * f.eval(z)).re <= b.sandwich_upper + 1e-12);
            }
        }
    }
}
