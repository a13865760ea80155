//! Bloch radii for `F = I − h` on the unit ball: the profile `ρ(r)`, its first
//! zero `r*`, the two-radius family `ρ_s(r)` and its case analysis.

use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::map::HoloMap;
use crate::oracle::{deriv_bounds, estimate_nr, OracleConfig};
use crate::roots::bisect;
use crate::scalar::km_factor;
use serde::Serialize;

/// Closed forms and bisection must agree to this much.
pub const ROOT_TOL: f64 = 1e-10;
/// Width of the window routing `2δ cos θ = 1 − L` to the special branch.
pub const SPECIAL_WINDOW: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochInputs {
    pub theta: f64,
    /// `N(θ)`: sup over the ball of `Re⟨e^{iθ}h(x), x⟩`; absent for hand data.
    #[serde(rename = "N_theta")]
    pub n_theta: Option<f64>,
    /// `L = L(0)`.
    #[serde(rename = "L")]
    pub lip: f64,
    #[serde(rename = "L_theta")]
    pub lip_theta: Option<f64>,
    #[serde(rename = "l_theta")]
    pub lip_low_theta: Option<f64>,
    /// `δ(θ) = N(θ) − l(θ)`, or `N − L` at `θ = 0`.
    pub delta: f64,
}

impl BlochInputs {
    /// Hand-specified `θ`, `L` and `δ`.
    pub fn new(theta: f64, lip: f64, delta: f64) -> Result<Self> {
        let inp = Self { theta, n_theta: None, lip, lip_theta: None, lip_low_theta: None, delta };
        inp.validate()?;
        Ok(inp)
    }

    /// Oracle inputs for `h` on the unit ball with `h(0) = 0`. At `θ = 0` the
    /// sharper estimate needs only `N` and `L`, so `δ = N − L`.
    pub fn from_map(map: &HoloMap, theta: f64, cfg: &OracleConfig) -> Result<Self> {
        if map.radius() != 1.0 {
            return Err(Error::Precondition(format!("Bloch radii need the unit ball, got R = {}", map.radius())));
        }
        let c = norm(&map.at_zero()?);
        if c > 1e-12 {
            return Err(Error::Precondition(format!("Bloch radii need h(0) = 0, got ‖h(0)‖ = {c:e}")));
        }
        let nr = estimate_nr(map, theta, cfg)?;
        if nr.infinite {
            return Err(Error::InfiniteInput("N(θ)"));
        }
        let lip = deriv_bounds(map, 0.0)?.upper;
        let d = deriv_bounds(map, theta)?;
        let floor = if theta.cos() == 1.0 { lip } else { d.lower };
        let mut delta = nr.value - floor;
        if (-1e-9..0.0).contains(&delta) {
            delta = 0.0;
        }
        let inp = Self {
            theta,
            n_theta: Some(nr.value),
            lip,
            lip_theta: Some(d.upper),
            lip_low_theta: Some(d.lower),
            delta,
        };
        inp.validate()?;
        Ok(inp)
    }

    fn validate(&self) -> Result<()> {
        if !(self.lip < 1.0) {
            return Err(Error::Precondition(format!("Bloch radii need L < 1, got {}", self.lip)));
        }
        if !(self.delta >= 0.0) || !self.delta.is_finite() || !self.theta.is_finite() {
            return Err(Error::Precondition(format!("δ(θ) must be finite and ≥ 0, got {}", self.delta)));
        }
        Ok(())
    }

    fn one_minus_l(&self) -> f64 {
        1.0 - self.lip
    }

    fn theta_zero(&self) -> bool {
        self.theta.cos() == 1.0
    }

    /// `Q(s) = ℒ(θ, s)·δ`.
    pub fn q(&self, s: f64) -> Result<f64> {
        Ok(km_factor(self.theta, s, 1.0)? * self.delta)
    }

    /// `A(s) = 1 − L − 2Q(s)`.
    pub fn a_coef(&self, s: f64) -> Result<f64> {
        Ok(self.one_minus_l() - 2.0 * self.q(s)?)
    }
}

/// `ρ(r) = r(1 − L − δℒ(θ, r))`; at `θ = 0` the form `(r/(1+r))((1−L)(1+r) − 2δr)`,
/// which extends to `r = 1`.
pub fn rho(inp: &BlochInputs, r: f64) -> Result<f64> {
    let om = inp.one_minus_l();
    if inp.theta_zero() {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::Domain(format!("ρ needs 0 < r ≤ 1 at θ = 0, got {r}")));
        }
        return Ok(r / (1.0 + r) * (om * (1.0 + r) - 2.0 * inp.delta * r));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("ρ needs 0 < r < 1, got {r}")));
    }
    let c = inp.theta.cos();
    Ok(r / (1.0 - r * r) * (om * (1.0 - r * r) - 2.0 * inp.delta * r * (1.0 - r * c)))
}

/// `ρ′(r)`.
pub fn rho_prime(inp: &BlochInputs, r: f64) -> f64 {
    let om = inp.one_minus_l();
    if inp.theta_zero() {
        return om - 2.0 * inp.delta * r * (r + 2.0) / ((1.0 + r) * (1.0 + r));
    }
    let c = inp.theta.cos();
    let d = 1.0 - r * r;
    om - 2.0 * inp.delta * (2.0 * r - 3.0 * c * r * r + c * r.powi(4)) / (d * d)
}

/// `φ(r) = r²(2δ cos θ − (1−L)) − 2δr + 1 − L`, whose sign is that of `ρ` on `(0, 1)`.
fn root_quadratic(inp: &BlochInputs, r: f64) -> f64 {
    let om = inp.one_minus_l();
    r * r * (2.0 * inp.delta * inp.theta.cos() - om) - 2.0 * inp.delta * r + om
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseBranch {
    /// `δ = 0`: `ρ(r) = r(1 − L)`, no zero.
    DeltaZero,
    /// `2δ cos θ = 1 − L`: `r* = (1 − L)/(2δ) = cos θ`.
    LinearRoot,
    /// `θ = 0` with `δ = N − L`: a zero exists iff `N > 1`.
    ThetaZero,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RStar {
    /// First zero of `ρ` in `(0, 1)`, or 1 when there is none.
    pub value: f64,
    pub root_found: bool,
    pub branch: CaseBranch,
    pub closed_form: Option<f64>,
    pub bisection: Option<f64>,
    pub discrepancy: Option<f64>,
}

fn branch_of(inp: &BlochInputs) -> CaseBranch {
    if inp.delta == 0.0 {
        CaseBranch::DeltaZero
    } else if inp.theta_zero() {
        CaseBranch::ThetaZero
    } else if (2.0 * inp.delta * inp.theta.cos() - inp.one_minus_l()).abs() <= SPECIAL_WINDOW {
        CaseBranch::LinearRoot
    } else {
        CaseBranch::Generic
    }
}

fn agree(closed: f64, bis: f64) -> (f64, f64) {
    let gap = (closed - bis).abs();
    (if gap <= ROOT_TOL { closed } else { bis }, gap)
}

/// `r*`, the first zero of `ρ` in `(0, 1)`, by closed form with a bisection
/// cross-check; bisection wins on disagreement.
pub fn r_star(inp: &BlochInputs) -> Result<RStar> {
    let om = inp.one_minus_l();
    let branch = branch_of(inp);
    let none = |branch| RStar { value: 1.0, root_found: false, branch, closed_form: None, bisection: None, discrepancy: None };
    let (closed, bis) = match branch {
        CaseBranch::DeltaZero => return Ok(none(branch)),
        CaseBranch::ThetaZero => {
            let n = inp.delta + inp.lip;
            if n <= 1.0 {
                return Ok(none(branch));
            }
            let closed = om / (2.0 * n - inp.lip - 1.0);
            let bis = bisect(|r| om * (1.0 + r) - 2.0 * inp.delta * r, 0.0, 1.0, 0.0)?;
            (closed, bis)
        }
        // (1 − L)/(2δ) equals cos θ here and avoids the rounding of cos
        CaseBranch::LinearRoot => (om / (2.0 * inp.delta), bisect(|r| root_quadratic(inp, r), 0.0, 1.0, 0.0)?),
        CaseBranch::Generic => {
            let d = inp.delta;
            let c = inp.theta.cos();
            let closed = (d - (d * d + (om - 2.0 * d * c) * om).sqrt()) / (2.0 * d * c - om);
            (closed, bisect(|r| root_quadratic(inp, r), 0.0, 1.0, 0.0)?)
        }
    };
    let (value, gap) = agree(closed, bis);
    Ok(RStar { value, root_found: true, branch, closed_form: Some(closed), bisection: Some(bis), discrepancy: Some(gap) })
}

/// `ρ_s(r) = (A(s)r² + B(s)r)/(s + r)` with `B = s(1 − L)`, for `0 < r ≤ s < r*`.
pub fn rho_s(inp: &BlochInputs, s: f64, r: f64) -> Result<f64> {
    let rs = r_star(inp)?.value;
    if !(r > 0.0 && r <= s && s < rs && s < 1.0) {
        return Err(Error::Domain(format!("ρ_s(r) needs 0 < r ≤ s < r* = {rs}, got s = {s}, r = {r}")));
    }
    rho_s_unchecked(inp, s, r)
}

fn rho_s_unchecked(inp: &BlochInputs, s: f64, r: f64) -> Result<f64> {
    let a = inp.a_coef(s)?;
    let b = s * inp.one_minus_l();
    Ok((a * r * r + b * r) / (s + r))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SStar {
    /// First zero of `A` in `(0, r*)`.
    pub value: f64,
    pub closed_form: f64,
    pub bisection: f64,
    pub discrepancy: f64,
    /// `ρ(s*)`, equal to `(1 − L)s*/2`.
    pub rho_at: f64,
}

/// `s*`, the first zero of `A(s)`, by closed form with a bisection cross-check.
pub fn s_star(inp: &BlochInputs) -> Result<SStar> {
    let om = inp.one_minus_l();
    let d = inp.delta;
    if d == 0.0 {
        return Err(Error::NoRoot("A(s) = 1 − L > 0 when δ = 0".into()));
    }
    let rs = r_star(inp)?;
    // numerator of A(s)(1 − s²)
    let lead = 4.0 * d * inp.theta.cos() - om;
    let p = |s: f64| lead * s * s - 4.0 * d * s + om;
    let hi = if rs.root_found { rs.value } else { 1.0 - 1e-12 };
    if p(hi) >= 0.0 {
        return Err(Error::NoRoot(format!("A(s) > 0 on (0, {hi})")));
    }
    let closed = if lead.abs() <= SPECIAL_WINDOW { om / (4.0 * d) } else { (2.0 * d - (4.0 * d * d - lead * om).sqrt()) / lead };
    let bis = bisect(p, 0.0, hi, 0.0)?;
    let (value, gap) = agree(closed, bis);
    Ok(SStar { value, closed_form: closed, bisection: bis, discrepancy: gap, rho_at: rho(inp, value)? })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SBranch {
    /// `s = s*`: `ε(r)` is affine.
    A,
    /// `s < s*`: `ρ_s` increases up to `s`.
    B,
    /// `s* < s < r*`: interior maximum at `r⁰` when `Q > (2/3)(1 − L)`.
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseResult {
    pub s: f64,
    pub argmax: f64,
    pub max: f64,
    pub branch: SBranch,
    #[serde(rename = "Q")]
    pub q: f64,
    /// `r⁰`, in branch (c) when `Q > (2/3)(1 − L)`.
    pub r0: Option<f64>,
}

/// Window for treating `s` as `s*`.
pub const S_STAR_WINDOW: f64 = 1e-12;

/// Maximum of `ρ_s` over `(0, s]` by the three-way case analysis.
pub fn bloch_case_analysis(inp: &BlochInputs, s: f64) -> Result<CaseResult> {
    let rs = r_star(inp)?.value;
    if !(s > 0.0 && s < rs && s < 1.0) {
        return Err(Error::Domain(format!("s must lie in (0, r* = {rs}), got {s}")));
    }
    let om = inp.one_minus_l();
    let q = inp.q(s)?;
    let s_star = match s_star(inp) {
        Ok(v) => Some(v.value),
        Err(Error::NoRoot(_)) => None,
        Err(e) => return Err(e),
    };
    let at_s = |branch| -> Result<CaseResult> { Ok(CaseResult { s, argmax: s, max: rho(inp, s)?, branch, q, r0: None }) };
    match s_star {
        Some(ss) if (s - ss).abs() <= S_STAR_WINDOW => Ok(CaseResult { s, argmax: ss, max: om * ss / 2.0, branch: SBranch::A, q, r0: None }),
        Some(ss) if s > ss => {
            if q > 2.0 / 3.0 * om {
                let r0 = ((2.0 * q / (2.0 * q - om)).sqrt() - 1.0) * s;
                Ok(CaseResult { s, argmax: r0, max: rho_s_unchecked(inp, s, r0)?, branch: SBranch::C, q, r0: Some(r0) })
            } else {
                at_s(SBranch::C)
            }
        }
        _ => at_s(SBranch::B),
    }
}

/// Distortion `ε(r) = (s* + r)/(s*(1 − L))` along `ρ_{s*}`.
pub fn epsilon_affine(inp: &BlochInputs, s_star: f64, r: f64) -> f64 {
    (s_star + r) / (s_star * inp.one_minus_l())
}

/// Global maximizer `(r₀, ρ₀)` of `ρ` on `(0, r*)`, as the zero of the
/// decreasing `ρ′`; `r₀ = 1` when `ρ` increases throughout.
pub fn maximizer(inp: &BlochInputs) -> Result<(f64, f64)> {
    let rs = r_star(inp)?;
    if !rs.root_found && !inp.theta_zero() {
        // δ = 0: ρ(r) = r(1 − L)
        return Ok((1.0, inp.one_minus_l()));
    }
    let hi = rs.value;
    if rho_prime(inp, hi) >= 0.0 {
        return Ok((hi, rho(inp, hi)?));
    }
    let r0 = bisect(|r| rho_prime(inp, r), 0.0, hi, 0.0)?;
    Ok((r0, rho(inp, r0)?))
}

/// The `θ = 0` profile `(r/(1+r))((1 − L)(1 + r) − 2(N − L)r)` on `(0, 1]`.
pub fn rho_theta_zero(n: f64, lip: f64, r: f64) -> f64 {
    r / (1.0 + r) * ((1.0 - lip) * (1.0 + r) - 2.0 * (n - lip) * r)
}

/// `(r₀, ρ₀)` for `F = I − h` from `N` and `L` alone (the `θ = 0` profile).
pub fn maximizer_theta_zero(n: f64, lip: f64) -> Result<(f64, f64)> {
    if !(lip < 1.0) || !(n >= lip) || !n.is_finite() {
        return Err(Error::Precondition(format!("need L < 1 and N ≥ L, got N = {n}, L = {lip}")));
    }
    if n >= (2.0 + lip) / 3.0 {
        let r0 = (2.0 * (lip - n) / (1.0 + lip - 2.0 * n)).sqrt() - 1.0;
        Ok((r0, rho_theta_zero(n, lip, r0)))
    } else {
        Ok((1.0, 1.0 - n))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlochReport {
    pub inputs: BlochInputs,
    pub r_star: RStar,
    pub s_star: Option<SStar>,
    /// `(r, ρ(r))` on `(0, r*)`.
    pub rho_of: Vec<(f64, f64)>,
    pub case_branch: CaseBranch,
    pub maximizer: (f64, f64),
    pub per_s: Vec<CaseResult>,
    /// `(r, ε(r))` along `ρ_{s*}`.
    pub epsilon: Vec<(f64, f64)>,
}

/// Tabulates the Bloch-radii calculus on `points` radii.
pub fn bloch_report(inp: &BlochInputs, points: usize) -> Result<BlochReport> {
    if points == 0 {
        return Err(Error::Domain("empty grid".into()));
    }
    let rs = r_star(inp)?;
    let ss = match s_star(inp) {
        Ok(v) => Some(v),
        Err(Error::NoRoot(_)) => None,
        Err(e) => return Err(e),
    };
    let top = if rs.root_found || inp.theta_zero() { rs.value } else { 1.0 - 1e-9 };
    let frac = |k: usize| (k as f64 + 1.0) / (points as f64 + 1.0);
    let rho_of = (0..points).map(|k| Ok((top * frac(k), rho(inp, top * frac(k))?))).collect::<Result<Vec<_>>>()?;
    let s_top = top.min(1.0 - 1e-9);
    let per_s = (0..points).map(|k| bloch_case_analysis(inp, s_top * frac(k))).collect::<Result<Vec<_>>>()?;
    let epsilon = match &ss {
        Some(s) => (0..points).map(|k| {
            let r = s.value * frac(k);
            (r, epsilon_affine(inp, s.value, r))
        }).collect(),
        None => Vec::new(),
    };
    Ok(BlochReport {
        inputs: *inp,
        case_branch: rs.branch,
        r_star: rs,
        s_star: ss,
        rho_of,
        maximizer: maximizer(inp)?,
        per_s,
        epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::grid_argmax;
    use std::f64::consts::{FRAC_PI_3, PI};

    fn example() -> BlochInputs {
        BlochInputs::new(FRAC_PI_3, 0.0, 1.0).unwrap()
    }

    #[test]
    fn example_profile() {
        let inp = example();
        for k in 1..50 {
            let r = k as f64 / 50.0;
            let expect = r * (1.0 - 2.0 * r) / (1.0 - r * r);
            assert!((rho(&inp, r).unwrap() - expect).abs() < 1e-14);
            // ρ′ against a central difference
            let h = 1e-6;
            let fd = (rho(&inp, r + h).unwrap() - rho(&inp, r - h).unwrap()) / (2.0 * h);
            if r <= 0.9 {
                assert!((rho_prime(&inp, r) - fd).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn example_radii() {
        let inp = example();
        let rs = r_star(&inp).unwrap();
        assert!(rs.root_found);
        assert!((rs.value - 0.5).abs() < 1e-15);
        assert!((rs.bisection.unwrap() - 0.5).abs() < 1e-10);
        let ss = s_star(&inp).unwrap();
        let exact = 2.0 - 3f64.sqrt();
        assert!((ss.value - exact).abs() < 1e-10 && (ss.bisection - exact).abs() < 1e-10);
        assert!((ss.rho_at - exact / 2.0).abs() < 1e-10);
        let (r0, rho0) = maximizer(&inp).unwrap();
        assert!((r0 - exact).abs() < 1e-8 && (rho0 - exact / 2.0).abs() < 1e-12);
        let (g, _) = grid_argmax(|r| rho(&inp, r).unwrap(), 1e-6, 0.5, 1000, 1e-12);
        assert!((g - exact).abs() < 1e-6);
    }

    #[test]
    fn example_is_on_special_branch_boundary() {
        // 2δ cos(π/3) = 1 = 1 − L up to rounding
        let inp = example();
        assert_eq!(r_star(&inp).unwrap().branch, CaseBranch::LinearRoot);
        let off = BlochInputs::new(FRAC_PI_3, 0.1, 1.0).unwrap();
        let rs = r_star(&off).unwrap();
        assert_eq!(rs.branch, CaseBranch::Generic);
        assert!(rho(&off, rs.value).unwrap().abs() < 1e-9);
        assert!(rs.discrepancy.unwrap() < 1e-10);
    }

    #[test]
    fn example_s_quantities() {
        let inp = example();
        for k in 1..20 {
            let s = 0.5 * k as f64 / 20.0;
            let q = inp.q(s).unwrap();
            assert!((q - s * (2.0 - s) / (1.0 - s * s)).abs() < 1e-14);
            let a = inp.a_coef(s).unwrap();
            assert!((a - (s * s - 4.0 * s + 1.0) / (1.0 - s * s)).abs() < 1e-14);
            assert!((rho_s(&inp, s, s).unwrap() - rho(&inp, s).unwrap()).abs() < 1e-12);
            assert!(rho_s(&inp, s, s * 1e-9).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn example_case_b() {
        let inp = example();
        let s = 0.2;
        let c = bloch_case_analysis(&inp, s).unwrap();
        assert_eq!(c.branch, SBranch::B);
        assert!((c.max - s * (1.0 - 2.0 * s) / (1.0 - s * s)).abs() < 1e-14);
        let ss = s_star(&inp).unwrap().value;
        let a = bloch_case_analysis(&inp, ss).unwrap();
        assert_eq!(a.branch, SBranch::A);
        assert!((a.max - ss / 2.0).abs() < 1e-12);
        assert!((epsilon_affine(&inp, ss, 0.1) - (ss + 0.1) / ss).abs() < 1e-15);
    }

    #[test]
    fn case_c_both_sub_branches() {
        let inp = example();
        let ss = s_star(&inp).unwrap().value;
        let om = 1.0;
        let mut seen = (false, false);
        for k in 1..100 {
            let s = ss + (0.5 - ss) * k as f64 / 100.0;
            let c = bloch_case_analysis(&inp, s).unwrap();
            assert_eq!(c.branch, SBranch::C);
            // numeric sweep of ρ_s on (0, s]
            let (_, best) = grid_argmax(|r| rho_s(&inp, s, r.min(s)).unwrap(), s * 1e-9, s, 2000, 1e-13);
            assert!((c.max - best).abs() < 1e-9, "s = {s}: {} vs {best}", c.max);
            if let Some(r0) = c.r0 {
                seen.0 = true;
                assert!(r0 > 0.0 && r0 < s);
            } else {
                seen.1 = true;
                assert!(c.max >= s / 3.0 * om - 1e-15);
            }
        }
        assert!(seen.0 && seen.1);
    }

    #[test]
    fn delta_zero_branch() {
        let inp = BlochInputs::new(0.7, 0.5, 0.0).unwrap();
        assert!((rho(&inp, 0.4).unwrap() - 0.2).abs() < 1e-15);
        let rs = r_star(&inp).unwrap();
        assert!(!rs.root_found && rs.value == 1.0 && rs.branch == CaseBranch::DeltaZero);
        assert_eq!(maximizer(&inp).unwrap(), (1.0, 0.5));
        assert!(matches!(s_star(&inp), Err(Error::NoRoot(_))));
        assert_eq!(bloch_case_analysis(&inp, 0.3).unwrap().branch, SBranch::B);
    }

    #[test]
    fn theta_zero_cases() {
        // N = 1, L = 0: no zero, maximum at √2 − 1
        let inp = BlochInputs::new(0.0, 0.0, 1.0).unwrap();
        let rs = r_star(&inp).unwrap();
        assert!(!rs.root_found && rs.value == 1.0 && rs.branch == CaseBranch::ThetaZero);
        let (r0, rho0) = maximizer(&inp).unwrap();
        assert!((r0 - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!((rho0 - (2f64.sqrt() - 1.0).powi(2)).abs() < 1e-12);
        // N = 2, L = 0.5: zero at (1 − L)/(2N − L − 1)
        let inp = BlochInputs::new(0.0, 0.5, 1.5).unwrap();
        let rs = r_star(&inp).unwrap();
        assert!(rs.root_found && (rs.value - 0.5 / 2.5).abs() < 1e-15);
        assert!(rho(&inp, rs.value).unwrap().abs() < 1e-15);
        // ρ(1) = 1 − N
        let inp = BlochInputs::new(0.0, 0.2, 0.3).unwrap();
        assert!((rho(&inp, 1.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn maximizer_theta_zero_values() {
        let (r0, rho0) = maximizer_theta_zero(1.0, 0.0).unwrap();
        assert!((r0 - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((rho0 - (2f64.sqrt() - 1.0).powi(2)).abs() < 1e-15);
        assert_eq!(maximizer_theta_zero(0.4, 0.0).unwrap(), (1.0, 0.6));
        assert!(matches!(maximizer_theta_zero(0.1, 0.2), Err(Error::Precondition(_))));
        assert!(matches!(maximizer_theta_zero(0.5, 1.0), Err(Error::Precondition(_))));
        for &(n, l) in &[(0.9, 0.1), (1.5, -0.5), (0.7, 0.0), (3.0, 0.9), (0.3, -2.0)] {
            let (r0, rho0) = maximizer_theta_zero(n, l).unwrap();
            let (g, gv) = grid_argmax(|r| rho_theta_zero(n, l, r), 1e-9, 1.0, 4000, 1e-12);
            assert!((r0 - g).abs() < 1e-6 && (rho0 - gv).abs() < 1e-9, "N = {n}, L = {l}");
        }
    }

    #[test]
    fn concavity_and_dominance() {
        for &(th, l, d) in &[(0.4, 0.0, 0.5), (1.2, -0.3, 2.0), (2.5, 0.5, 0.1), (-PI / 5.0, 0.2, 1.0)] {
            let inp = BlochInputs::new(th, l, d).unwrap();
            let rs = r_star(&inp).unwrap();
            assert!(rs.root_found && rs.discrepancy.unwrap() < 1e-10);
            let h = 1e-4;
            for k in 1..99 {
                let r = k as f64 / 100.0;
                if r + h < 1.0 {
                    let dd = rho(&inp, r + h).unwrap() - 2.0 * rho(&inp, r).unwrap() + rho(&inp, r - h).unwrap();
                    assert!(dd < 0.0);
                }
                if r < rs.value {
                    assert!(rho(&inp, r).unwrap() > 0.0);
                }
            }
            // ρ_s(r) ≤ ρ(r) for r ≤ s; ρ_s(r) ≤ ρ(s) only where ρ_s is monotone
            for i in 1..30 {
                let s = rs.value * i as f64 / 30.0;
                let case = bloch_case_analysis(&inp, s).unwrap();
                for j in 1..=20 {
                    let r = (s * j as f64 / 20.0).min(s);
                    let v = rho_s(&inp, s, r).unwrap();
                    assert!(v <= rho(&inp, r).unwrap() + 1e-14);
                    if case.r0.is_none() {
                        assert!(v <= rho(&inp, s).unwrap() + 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn interior_maximum_exceeds_rho_at_s() {
        // in branch (c) with Q > (2/3)(1 − L), ρ_s(r⁰) > ρ_s(s) = ρ(s)
        let inp = example();
        let s = 0.49;
        let c = bloch_case_analysis(&inp, s).unwrap();
        let r0 = c.r0.unwrap();
        assert!(c.max > rho(&inp, s).unwrap() + 0.05);
        assert!(c.max <= rho(&inp, r0).unwrap());
    }

    #[test]
    fn report_shape() {
        let rep = bloch_report(&example(), 16).unwrap();
        assert_eq!(rep.rho_of.len(), 16);
        assert_eq!(rep.per_s.len(), 16);
        assert_eq!(rep.epsilon.len(), 16);
        assert!(rep.rho_of.iter().all(|&(_, v)| v > 0.0));
        let ss = rep.s_star.unwrap().value;
        assert!(ss > 0.0 && ss < rep.r_star.value && rep.r_star.value < 1.0);
    }

    #[test]
    fn inputs_validation() {
        assert!(BlochInputs::new(0.3, 1.0, 0.5).is_err());
        assert!(BlochInputs::new(0.3, 0.0, -0.1).is_err());
        assert!(rho(&example(), 1.0).is_err());
        assert!(rho_s(&example(), 0.6, 0.1).is_err());
        assert!(bloch_case_analysis(&example(), 0.5).is_err());
    }
}
