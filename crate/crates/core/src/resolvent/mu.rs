//! The radius calculus for `ω(r) = r μ(r)`: minima, roots, semi-complete
//! intervals and null-point radii.
//!
//! With `b = N_R/R²` and `c = ‖h(0)‖`,
//! `μ(r) = c(1 − r²/R²)/r + L + 2r(b − L)/(R + r)`.

use crate::error::{Error, Result};
use crate::growth::BoundInputs;
use crate::roots::bisect;
use serde::Serialize;
use std::f64::consts::PI;

/// Relative width below which `b` and `L` are treated as equal.
const FLAT_TOL: f64 = 1e-12;
/// Closed-form and bisection roots must agree to this.
pub const ROOT_AGREEMENT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuParams {
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "L")]
    pub lip: f64,
    pub b: f64,
    pub c: f64,
}

impl MuParams {
    pub fn new(radius: f64, lip: f64, b: f64, c: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !lip.is_finite() || !(c >= 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("bad μ parameters R={radius} L={lip} c={c}")));
        }
        if !b.is_finite() {
            return Err(Error::InfiniteInput("N_R"));
        }
        Ok(Self { radius, lip, b, c })
    }

    pub fn from_inputs(inp: &BoundInputs) -> Result<Self> {
        Self::new(inp.radius, inp.lip, inp.n_big / (inp.radius * inp.radius), inp.h0_norm)
    }

    pub fn mu(&self, r: f64) -> f64 {
        let big_r = self.radius;
        self.c * (1.0 - r * r / (big_r * big_r)) / r + self.lip + 2.0 * r * (self.b - self.lip) / (big_r + r)
    }

    pub fn mu_prime(&self, r: f64) -> f64 {
        let big_r = self.radius;
        -self.c / (r * r) - self.c / (big_r * big_r) + 2.0 * big_r * (self.b - self.lip) / ((big_r + r) * (big_r + r))
    }

    /// `ω(r) = r μ(r)`, written in the growth-bound form.
    pub fn omega(&self, r: f64) -> f64 {
        let big_r = self.radius;
        self.c * (1.0 - r * r / (big_r * big_r))
            + r / (big_r + r) * ((big_r - r) * self.lip + 2.0 * r * self.b)
    }

    /// `β` solves `c β² + 2cβ = 2R(b − L)`; then `r* + R²/r* = Rβ`.
    pub fn beta(&self) -> Option<f64> {
        if self.c == 0.0 {
            return None;
        }
        let c = self.c;
        let disc = c * c + 2.0 * c * self.radius * (self.b - self.lip);
        (disc >= 0.0).then(|| (disc.sqrt() - c) / c)
    }

    /// Condition `R(b − L) > 4c`, equivalent to `β > 2`.
    pub fn suf(&self) -> bool {
        self.radius * (self.b - self.lip) > 4.0 * self.c
    }
}

/// `ω(r) = ‖h(0)‖(1 − r²/R²) + (r/(R+r))[(R−r)L + 2r N_R/R²]`.
pub fn omega_of_r(inp: &BoundInputs, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < inp.radius) {
        return Err(Error::Domain(format!("radius {r} outside (0, {})", inp.radius)));
    }
    Ok(MuParams::from_inputs(inp)?.omega(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MuBranch {
    CZeroConstant,
    CZeroIncreasing,
    NoInteriorMin,
    InteriorMin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicRoots {
    pub r1: f64,
    pub r2: f64,
    /// Largest root, beyond `R`; reported only.
    pub r3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuProfile {
    pub params: MuParams,
    pub branch: MuBranch,
    pub beta: Option<f64>,
    pub r_star: Option<f64>,
    pub mu_at_r_star: Option<f64>,
    /// `(r₁, r₂)` from bisection, which is authoritative.
    pub roots: Option<(f64, f64)>,
    pub closed_form: Option<CubicRoots>,
    /// Largest closed-form/bisection gap when it exceeds the agreement tolerance.
    pub discrepancy: Option<f64>,
}

/// Trigonometric solution of `r(R+r)R² μ(r) = 0` divided by `−c`:
/// `r³ + m r² − ((LR³ + cR²)/c) r − R³ = 0`.
pub fn cubic_roots(p: &MuParams) -> Option<CubicRoots> {
    let MuParams { radius: big_r, lip: l, b, c } = *p;
    if c == 0.0 {
        return None;
    }
    let r2 = big_r * big_r;
    let r3 = r2 * big_r;
    let m = big_r * (big_r * l - 2.0 * big_r * b + c) / c;
    let q = (c * m * m + 3.0 * l * r3 + 3.0 * c * r2) / (9.0 * c);
    let a = (2.0 * c * m * m * m + 9.0 * m * (l * r3 + c * r2) - 27.0 * c * r3) / (54.0 * c);
    if q <= 0.0 {
        return None;
    }
    let ratio = a / q.powf(1.5);
    if !ratio.is_finite() || ratio.abs() > 1.0 + 1e-12 {
        return None;
    }
    let phi = ratio.clamp(-1.0, 1.0).acos() / 3.0;
    let s = 2.0 * q.sqrt();
    Some(CubicRoots {
        r1: -s * phi.cos() - m / 3.0,
        r2: -s * (phi - 2.0 * PI / 3.0).cos() - m / 3.0,
        r3: -s * (phi + 2.0 * PI / 3.0).cos() - m / 3.0,
    })
}

pub fn mu_profile(p: &MuParams) -> Result<MuProfile> {
    let big_r = p.radius;
    let mut out = MuProfile {
        params: *p,
        branch: MuBranch::NoInteriorMin,
        beta: p.beta(),
        r_star: None,
        mu_at_r_star: None,
        roots: None,
        closed_form: None,
        discrepancy: None,
    };
    if p.c == 0.0 {
        out.branch = if (p.b - p.lip).abs() <= FLAT_TOL * p.lip.abs().max(1.0) {
            MuBranch::CZeroConstant
        } else {
            MuBranch::CZeroIncreasing
        };
        return Ok(out);
    }
    let beta = out.beta.unwrap_or(f64::NEG_INFINITY);
    if !(beta > 2.0) {
        return Ok(out);
    }
    out.branch = MuBranch::InteriorMin;
    let r_star = big_r * (beta - (beta * beta - 4.0).sqrt()) / 2.0;
    let mu_star = p.mu(r_star);
    out.r_star = Some(r_star);
    out.mu_at_r_star = Some(mu_star);
    if mu_star < 0.0 {
        let f = |r: f64| p.mu(r);
        // μ → +∞ as r → 0⁺ and μ(R) = b ≥ 0
        let mut lo = r_star;
        while f(lo) < 0.0 && lo > f64::MIN_POSITIVE {
            lo *= 0.5;
        }
        let r1 = bisect(f, lo, r_star, 0.0)?;
        let r2 = bisect(f, r_star, big_r, 0.0)?;
        out.roots = Some((r1, r2));
        out.closed_form = cubic_roots(p);
        let gap = match out.closed_form {
            Some(cf) => (cf.r1 - r1).abs().max((cf.r2 - r2).abs()),
            None => f64::INFINITY,
        };
        if !(gap <= ROOT_AGREEMENT) {
            out.discrepancy = Some(gap);
        }
    }
    Ok(out)
}

/// Interval of radii on which `−h` is semi-complete, if the criterion applies.
pub fn semi_complete_interval(p: &MuParams) -> Result<Option<(f64, f64)>> {
    let big_r = p.radius;
    let n_big = p.b * big_r * big_r;
    if p.c == 0.0 {
        if p.lip < 0.0_f64.min(p.b) {
            let r3 = big_r * big_r * big_r;
            return Ok(Some((0.0, -r3 * p.lip / (2.0 * n_big - p.lip * big_r * big_r))));
        }
        return Ok(None);
    }
    if !p.suf() {
        return Ok(None);
    }
    Ok(mu_profile(p)?.roots)
}

/// Smaller root of `c(1 + r)² + L r = 0` when `L + 4c < 0`.
pub fn nullp_radius(c: f64, lip: f64) -> Option<f64> {
    if !(lip + 4.0 * c < 0.0) {
        return None;
    }
    if c == 0.0 {
        return Some(0.0);
    }
    Some((-(2.0 * c + lip) - ((lip + 4.0 * c) * lip).sqrt()) / (2.0 * c))
}

/// The same root without cancellation: the two roots multiply to 1.
pub fn nullp_radius_stable(c: f64, lip: f64) -> Option<f64> {
    if !(lip + 4.0 * c < 0.0) {
        return None;
    }
    let big = (-(2.0 * c + lip) + ((lip + 4.0 * c) * lip).sqrt()) / 2.0;
    Some(c / big)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixpRadius {
    /// Fixed point in `(0, 1)` of `φ(r) = c(1 + r)² + r L_F`.
    pub fixed_point_of_phi: f64,
    /// Smaller root of `c(1 + r)² + r(L_F − 1) = 0`.
    pub nullp_style_root: f64,
}

/// Radius bound for the fixed point of a self-map with `c = ‖F(0)‖`,
/// available when `L_F < 1 − 4c`. Both readings of the bound give the same
/// equation, and both are reported.
pub fn fixp_radius(c: f64, lip_f: f64) -> Option<FixpRadius> {
    let nullp_style_root = nullp_radius(c, lip_f - 1.0)?;
    let phi_gap = |r: f64| c * (1.0 + r) * (1.0 + r) + r * lip_f - r;
    let fixed_point_of_phi = if c == 0.0 { 0.0 } else { bisect(phi_gap, 0.0, 1.0, 0.0).ok()? };
    Some(FixpRadius { fixed_point_of_phi, nullp_style_root })
}
