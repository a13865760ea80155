//! Vector growth estimates for `Re⟨h(x), x⟩` on spheres of a ball, and
//! rigidity detection.

use crate::error::{Error, Result};
use crate::linalg::{cis, norm, pairing, C64};
use crate::map::HoloMap;
use crate::oracle::{ball_pairing, deriv_bounds, sphere_sup, Mode, OracleConfig};
use crate::scalar::km_factor;
use serde::Serialize;

/// Oracle quantities the closed-form bounds are built from. Infinite sups are
/// stored as `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundInputs {
    #[serde(rename = "R")]
    pub radius: f64,
    /// `N_R = sup_{‖x‖<R} Re⟨h(x), x⟩`.
    pub n_big: f64,
    /// `N_R(θ)`.
    pub n_big_theta: f64,
    pub theta: f64,
    #[serde(skip)]
    pub h0: Vec<C64>,
    pub h0_norm: f64,
    /// `L = L(0)`.
    pub lip: f64,
    /// `l(0)`.
    pub lip_low: f64,
    /// `L(θ)`.
    pub lip_theta: f64,
    /// `l(θ)`.
    pub lip_low_theta: f64,
    /// `m_R(θ) = inf_{‖x‖<R} Re⟨e^{iθ}(h(x) − h(0)), x⟩`.
    pub m_small_theta: f64,
    /// `M_R(θ)`, the matching sup.
    pub m_big_theta: f64,
}

impl BoundInputs {
    /// Fills every field from the oracles.
    pub fn from_map(map: &HoloMap, theta: f64, cfg: &OracleConfig) -> Result<Self> {
        let h0 = map.at_zero()?;
        let d0 = deriv_bounds(map, 0.0)?;
        let dt = deriv_bounds(map, theta)?;
        let n_big = ball_pairing(map, 0.0, false, Mode::Sup, cfg)?.value;
        let n_big_theta = if theta == 0.0 { n_big } else { ball_pairing(map, theta, false, Mode::Sup, cfg)?.value };
        Ok(Self {
            radius: map.radius(),
            n_big,
            n_big_theta,
            theta,
            h0_norm: norm(&h0),
            h0,
            lip: d0.upper,
            lip_low: d0.lower,
            lip_theta: dt.upper,
            lip_low_theta: dt.lower,
            m_small_theta: ball_pairing(map, theta, true, Mode::Inf, cfg)?.value,
            m_big_theta: ball_pairing(map, theta, true, Mode::Sup, cfg)?.value,
        })
    }

    fn check_r(&self, r: f64) -> Result<()> {
        if !(r > 0.0 && r < self.radius) {
            return Err(Error::Domain(format!("radius {r} outside (0, {})", self.radius)));
        }
        Ok(())
    }

    fn finite_n(&self) -> Result<f64> {
        if self.n_big.is_finite() {
            Ok(self.n_big)
        } else {
            Err(Error::InfiniteInput("N_R"))
        }
    }

    fn finite_n_theta(&self) -> Result<f64> {
        if self.n_big_theta.is_finite() {
            Ok(self.n_big_theta)
        } else {
            Err(Error::InfiniteInput("N_R(theta)"))
        }
    }
}

/// `F(r) = r‖h(0)‖(1 − r²/R²) + (r²/(R+r))[(R−r)L + 2r N_R/R²]`.
pub fn bound_f(inp: &BoundInputs, r: f64) -> Result<f64> {
    inp.check_r(r)?;
    let n = inp.finite_n()?;
    let big_r = inp.radius;
    Ok(r * inp.h0_norm * (1.0 - r * r / (big_r * big_r))
        + r * r / (big_r + r) * ((big_r - r) * inp.lip + 2.0 * r * n / (big_r * big_r)))
}

fn f1_tail(inp: &BoundInputs, r: f64) -> Result<f64> {
    let n = inp.finite_n_theta()?;
    let big_r = inp.radius;
    let l = km_factor(inp.theta, r, big_r)?;
    Ok(r * r * (inp.lip + l * (n / (big_r * big_r) - inp.lip_low_theta)))
}

/// Sup over `‖x‖ = r` of `Re(⟨h₀, x⟩ − (r²/R²) e^{−iθ} conj⟨e^{iθ}h₀, x⟩)`.
///
/// The `e^{−iθ}` comes from lifting the rotated scalar bound back to
/// `Re⟨h(x), x⟩`; without it the bound fails for `θ ≠ 0`.
pub fn f1_first_term(inp: &BoundInputs, r: f64, cfg: &OracleConfig) -> f64 {
    let q = r * r / (inp.radius * inp.radius);
    let rot = cis(inp.theta);
    first_term_sup(inp, r, cfg, |w, wr| (w - q * cis(-inp.theta) * wr.conj()).re, rot)
}

/// The same term without the `e^{−iθ}` factor, kept for comparison only.
pub fn f1_first_term_unrotated(inp: &BoundInputs, r: f64, cfg: &OracleConfig) -> f64 {
    let q = r * r / (inp.radius * inp.radius);
    let rot = cis(inp.theta);
    first_term_sup(inp, r, cfg, |w, wr| (w - q * wr.conj()).re, rot)
}

fn first_term_sup(inp: &BoundInputs, r: f64, cfg: &OracleConfig, obj: impl Fn(C64, C64) -> f64, rot: C64) -> f64 {
    if inp.h0_norm == 0.0 {
        return 0.0;
    }
    let rotated: Vec<C64> = inp.h0.iter().map(|z| rot * z).collect();
    sphere_sup(inp.h0.len(), r, |x| obj(pairing(&inp.h0, x), pairing(&rotated, x)), &cfg.sampler).value
}

/// `F₁(r, θ) = [first term] + r²[L + ℒ(θ,r)(N_R(θ)/R² − l(θ))]`.
pub fn bound_f1(inp: &BoundInputs, r: f64, cfg: &OracleConfig) -> Result<f64> {
    inp.check_r(r)?;
    let tail = f1_tail(inp, r)?;
    Ok(f1_first_term(inp, r, cfg) + tail)
}

/// `F₁` with the first term replaced by its majorant `‖h(0)‖ r (1 + r²/R²)`.
pub fn bound_f1_loose(inp: &BoundInputs, r: f64) -> Result<f64> {
    inp.check_r(r)?;
    let tail = f1_tail(inp, r)?;
    Ok(inp.h0_norm * r * (1.0 + r * r / (inp.radius * inp.radius)) + tail)
}

/// The θ = 0, `h(0) = 0` sharpening: `r²[((R−r)/(R+r))L + (2r/(R+r)) N/R²]`.
pub fn bound_theta_zero_sharp(inp: &BoundInputs, r: f64) -> Result<f64> {
    inp.check_r(r)?;
    let n = inp.finite_n()?;
    let big_r = inp.radius;
    Ok(r * r * ((big_r - r) / (big_r + r) * inp.lip + 2.0 * r / (big_r + r) * n / (big_r * big_r)))
}

/// Two-sided bounds on `Re⟨h(x) − h(0), x⟩` for `‖x‖ = r`.
pub fn two_sided_bounds(inp: &BoundInputs, r: f64) -> Result<(f64, f64)> {
    inp.check_r(r)?;
    let big_r2 = inp.radius * inp.radius;
    if !(inp.m_small_theta.is_finite() && inp.m_big_theta.is_finite()) {
        return Err(Error::InfiniteInput("m_R(theta)/M_R(theta)"));
    }
    let l = km_factor(inp.theta, r, inp.radius)?;
    let lower = r * r * (inp.lip_low + l * (inp.m_small_theta / big_r2 - inp.lip_theta));
    let upper = r * r * (l * (inp.m_big_theta / big_r2 - inp.lip_low_theta) + inp.lip);
    Ok((lower, upper))
}

/// Bound on `Re⟨h(x), x⟩` given `Re⟨h′(0)x, x⟩` at the probe point, for `h(0) = 0`.
pub fn probe_bound(inp: &BoundInputs, probe_pairing: f64, r: f64) -> Result<f64> {
    if inp.h0_norm > 1e-12 {
        return Err(Error::Precondition(format!("needs h(0) = 0, got ‖h(0)‖ = {:e}", inp.h0_norm)));
    }
    inp.check_r(r)?;
    let n = inp.finite_n()?;
    let l = km_factor(0.0, r, inp.radius)?;
    Ok(probe_pairing * (1.0 - l) + r * r / (inp.radius * inp.radius) * l * n)
}

/// `(Vr_bound, Wr_bound)` with `Vr = (r²/(R+r))[(R−r)L + 2rN_R/R²]` and
/// `Wr = 2R² |V_R| / (R − r)²`.
///
/// `Vr_bound` dominates `Re⟨h(x), x⟩` on the sphere, not `|⟨h(x), x⟩|`:
/// `h(x) = ix` has `L = N_R = 0` but numerical radius `r²`.
pub fn numerical_radius_bounds(inp: &BoundInputs, v_big_abs: f64, r: f64) -> Result<(f64, f64)> {
    if inp.h0_norm > 1e-12 {
        return Err(Error::Precondition(format!("needs h(0) = 0, got ‖h(0)‖ = {:e}", inp.h0_norm)));
    }
    inp.check_r(r)?;
    let n = inp.finite_n()?;
    let big_r = inp.radius;
    let v = r * r / (big_r + r) * ((big_r - r) * inp.lip + 2.0 * r * n / (big_r * big_r));
    let w = 2.0 * big_r * big_r / ((big_r - r) * (big_r - r)) * v_big_abs;
    Ok((v, w))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub r: f64,
    #[serde(rename = "F")]
    pub f: Option<f64>,
    #[serde(rename = "F1")]
    pub f1: Option<f64>,
    pub two_sided_upper: Option<f64>,
    pub two_sided_lower: Option<f64>,
    pub probe_bound: Option<f64>,
    #[serde(rename = "Vr_bound")]
    pub vr_bound: Option<f64>,
    #[serde(rename = "Wr_bound")]
    pub wr_bound: Option<f64>,
}

/// Every bound over a radius grid; bounds whose inputs are infinite are `None`.
pub fn bound_profile(inp: &BoundInputs, v_big_abs: Option<f64>, grid: &[f64], cfg: &OracleConfig) -> Result<Vec<BoundRow>> {
    grid.iter()
        .map(|&r| {
            inp.check_r(r)?;
            let pair = two_sided_bounds(inp, r).ok();
            let cor = v_big_abs.and_then(|v| numerical_radius_bounds(inp, v, r).ok());
            // the probe bound at its worst point, Re⟨h′(0)x, x⟩ = r²L (1 − ℒ ≥ 0)
            let lem = probe_bound(inp, r * r * inp.lip, r).ok();
            Ok(BoundRow {
                r,
                f: bound_f(inp, r).ok(),
                f1: bound_f1(inp, r, cfg).ok(),
                two_sided_upper: pair.map(|p| p.1),
                two_sided_lower: pair.map(|p| p.0),
                probe_bound: lem,
                vr_bound: cor.map(|c| c.0),
                wr_bound: cor.map(|c| c.1),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RigidityVerdict {
    pub affine_rigid: bool,
    /// `|M_R(θ) − R² l(θ)|`.
    pub gap_upper: f64,
    /// `|m_R(θ) − R² L(θ)|`.
    pub gap_lower: f64,
    /// Largest nonlinear coefficient, when the map is a polynomial.
    pub nonlinear_size: Option<f64>,
    pub nonlinear_check: Option<bool>,
}

/// Equality in the range bounds forces an affine map; this reports whether
/// either equality holds (within `tol`) and, for polynomials, whether the
/// nonlinear coefficients indeed vanish.
pub fn detect_rigidity(map: &HoloMap, theta: f64, tol: f64, cfg: &OracleConfig) -> Result<RigidityVerdict> {
    let big_r2 = map.radius() * map.radius();
    let d = deriv_bounds(map, theta)?;
    let m_big = ball_pairing(map, theta, true, Mode::Sup, cfg)?.value;
    let m_small = ball_pairing(map, theta, true, Mode::Inf, cfg)?.value;
    let gap_upper = (m_big - big_r2 * d.lower).abs();
    let gap_lower = (m_small - big_r2 * d.upper).abs();
    let affine_rigid = gap_upper <= tol || gap_lower <= tol;
    let nonlinear_size = map.nonlinear_size();
    Ok(RigidityVerdict {
        affine_rigid,
        gap_upper,
        gap_lower,
        nonlinear_check: if affine_rigid { nonlinear_size.map(|s| s <= tol) } else { None },
        nonlinear_size,
    })
}
