//! Brute-force numerical-range quantities: sups and infs of
//! `Re⟨e^{iθ}h(x), x⟩` over spheres and balls.

pub mod sampler;

pub use sampler::{sphere_sup, SamplerConfig, SupEstimate};

use crate::error::{Error, Result};
use crate::linalg::{cis, hermitian_part_extremes, norm, pairing, sub, C64};
use crate::map::HoloMap;
use sampler::{chart_dim, chart_point, refine, sanitize};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sup,
    Inf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    pub sampler: SamplerConfig,
    /// Ball sups above this are reported as infinite.
    pub infinity_threshold: f64,
    /// Relative change at the last ladder rung that counts as "not stabilized".
    pub growth_tol: f64,
    pub ladder_rungs: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            sampler: SamplerConfig::default(),
            infinity_threshold: 1e8,
            growth_tol: 1e-3,
            ladder_rungs: 12,
        }
    }
}

impl OracleConfig {
    pub fn with_seed(seed: u64) -> Self {
        let mut cfg = Self::default();
        cfg.sampler.seed = seed;
        cfg
    }
}

/// Ladder radii `R(1 − 2^{−k})`, `k = 1..=rungs`.
pub fn ladder(radius: f64, rungs: u32) -> Vec<f64> {
    (1..=rungs).map(|k| radius * (1.0 - 0.5f64.powi(k as i32))).collect()
}

fn check_radius(map: &HoloMap, r: f64) -> Result<()> {
    let big_r = map.radius();
    let ok = r > 0.0 && (r < big_r || (r == big_r && map.closed_ball_ok()));
    if !ok {
        return Err(Error::Domain(format!("radius {r} outside (0, {big_r})")));
    }
    Ok(())
}

/// `x ↦ Re⟨e^{iθ}(h(x) − shift), x⟩`, with evaluation failures mapped to NaN.
fn pairing_objective<'a>(map: &'a HoloMap, theta: f64, shift: Option<Vec<C64>>) -> impl Fn(&[C64]) -> f64 + 'a {
    let rot = cis(theta);
    move |x: &[C64]| match map.eval(x) {
        Ok(hx) => {
            let v = match &shift {
                Some(s) => sub(&hx, s),
                None => hx,
            };
            (rot * pairing(&v, x)).re
        }
        Err(_) => f64::NAN,
    }
}

fn signed<F: Fn(&[C64]) -> f64>(f: F, mode: Mode) -> impl Fn(&[C64]) -> f64 {
    move |x| match mode {
        Mode::Sup => f(x),
        Mode::Inf => -f(x),
    }
}

/// Sup (or inf) over `‖x‖ = r` of `Re⟨e^{iθ}(h(x) − [h(0)]), x⟩`.
pub fn sup_re_pairing(map: &HoloMap, r: f64, theta: f64, subtract_h0: bool, mode: Mode, cfg: &OracleConfig) -> Result<SupEstimate> {
    check_radius(map, r)?;
    let shift = if subtract_h0 { Some(map.at_zero()?) } else { None };
    let f = signed(pairing_objective(map, theta, shift), mode);
    let mut est = sphere_sup(map.dim(), r, f, &cfg.sampler);
    if mode == Mode::Inf {
        est.value = -est.value;
    }
    Ok(est)
}

/// Sup of an objective over the open ball, possibly infinite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallSup {
    pub value: f64,
    pub infinite: bool,
    /// `(r, sup over ‖x‖ = r)` for every radius tried.
    pub rungs: Vec<(f64, f64)>,
    pub samples: usize,
    pub refine_iters: usize,
}

/// Sup over `‖x‖ < R` of `f`, via the origin, a few interior spheres, the
/// ladder `R(1 − 2^{−k})`, the boundary when `closed` is set, and a joint
/// refinement in radius and angles from the best sphere.
pub fn ball_sup<F: Fn(&[C64]) -> f64>(dim: usize, radius: f64, closed: bool, f: F, cfg: &OracleConfig) -> BallSup {
    let mut radii: Vec<f64> = (1..=3).map(|j| radius * j as f64 / 8.0).collect();
    let lad = ladder(radius, cfg.ladder_rungs);
    radii.extend(&lad);
    if closed {
        radii.push(radius);
    }
    let zero = vec![C64::new(0.0, 0.0); dim];
    let mut best = sanitize(f(&zero));
    let mut best_at: Option<(f64, Vec<f64>)> = None;
    let mut rungs = vec![(0.0, best)];
    let mut samples = 1;
    let mut iters = 0;
    for &r in &radii {
        let est = sphere_sup(dim, r, &f, &cfg.sampler);
        samples += est.samples;
        iters += est.refine_iters;
        rungs.push((r, est.value));
        if est.value > best {
            best = est.value;
            best_at = Some((r, est.argmax_chart));
        }
    }

    let ladder_vals: Vec<f64> = rungs.iter().filter(|(r, _)| lad.contains(r)).map(|&(_, v)| v).collect();
    let infinite = best > cfg.infinity_threshold || !ladder_stable(&ladder_vals, cfg.growth_tol);
    if infinite {
        return BallSup { value: f64::INFINITY, infinite, rungs, samples, refine_iters: iters };
    }

    if let Some((r0, t0)) = best_at {
        let r_max = if closed { radius } else { *lad.last().unwrap() };
        let mut start = vec![r0];
        start.extend(&t0);
        let mut clamp = vec![(0.0, r_max)];
        clamp.extend(std::iter::repeat_n((f64::NEG_INFINITY, f64::INFINITY), chart_dim(dim)));
        let width = radius / 64.0;
        let (_, v, s) = refine(|t| f(&chart_point(dim, t[0], &t[1..])), &start, best, width, &clamp, &cfg.sampler);
        iters += s;
        best = best.max(v);
    }
    BallSup { value: best, infinite: false, rungs, samples, refine_iters: iters }
}

/// False when the last rung still moves by more than `tol` (relative) and the
/// increments over the last three rungs are not shrinking.
fn ladder_stable(vals: &[f64], tol: f64) -> bool {
    let n = vals.len();
    if vals.iter().any(|v| !v.is_finite()) {
        return false;
    }
    if n < 4 {
        return true;
    }
    let d = |k: usize| (vals[k] - vals[k - 1]).abs();
    let last = d(n - 1);
    if last / vals[n - 1].abs().max(1.0) <= tol {
        return true;
    }
    // increments shrinking geometrically
    d(n - 1) < 0.9 * d(n - 2) && d(n - 2) < 0.9 * d(n - 3)
}

/// Sup (or inf) over the open ball of `Re⟨e^{iθ}(h(x) − [h(0)]), x⟩`.
pub fn ball_pairing(map: &HoloMap, theta: f64, subtract_h0: bool, mode: Mode, cfg: &OracleConfig) -> Result<BallSup> {
    let shift = if subtract_h0 { Some(map.at_zero()?) } else { None };
    let f = signed(pairing_objective(map, theta, shift), mode);
    let mut out = ball_sup(map.dim(), map.radius(), map.closed_ball_ok(), f, cfg);
    if mode == Mode::Inf {
        out.value = -out.value;
        for rung in &mut out.rungs {
            rung.1 = -rung.1;
        }
    }
    Ok(out)
}

/// `N_R(θ)`: sup over the open ball of `Re⟨e^{iθ}h(x), x⟩`.
pub fn estimate_nr(map: &HoloMap, theta: f64, cfg: &OracleConfig) -> Result<BallSup> {
    ball_pairing(map, theta, false, Mode::Sup, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivBounds {
    pub theta: f64,
    #[serde(rename = "L_theta")]
    pub upper: f64,
    #[serde(rename = "l_theta")]
    pub lower: f64,
}

/// `L(θ)` and `l(θ)` for `h′(0)`: the extreme eigenvalues of the Hermitian part
/// of `e^{iθ}h′(0)`, which are exactly the sup and inf of the quadratic form.
pub fn deriv_bounds(map: &HoloMap, theta: f64) -> Result<DerivBounds> {
    let a = map.derivative_at_zero()?;
    let (lower, upper) = if a.nrows() == 1 {
        let v = (cis(theta) * a[(0, 0)]).re;
        (v, v)
    } else {
        hermitian_part_extremes(&a, theta)
    };
    Ok(DerivBounds { theta, upper, lower })
}

/// Sampling counterpart of [`deriv_bounds`], for cross-checks.
pub fn deriv_bounds_sampled(map: &HoloMap, theta: f64, cfg: &OracleConfig) -> Result<DerivBounds> {
    let lin = HoloMap::linear(1.0, &map.derivative_at_zero()?)?;
    let upper = sup_re_pairing(&lin, 1.0, theta, false, Mode::Sup, cfg)?.value;
    let lower = sup_re_pairing(&lin, 1.0, theta, false, Mode::Inf, cfg)?.value;
    Ok(DerivBounds { theta, upper, lower })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DissipativeVerdict {
    pub dissipative: bool,
    /// Largest pairing value found on the annulus.
    pub worst: f64,
    #[serde(skip)]
    pub witness: Option<Vec<C64>>,
}

/// Checks `Re⟨e^{iθ}h(x), x⟩ ≤ ω` on the annulus `R − ε < ‖x‖ < R`, sampled on
/// the radii `R − ε 2^{−k}`.
pub fn check_dissipative(map: &HoloMap, omega: f64, theta: f64, eps: f64, cfg: &OracleConfig) -> Result<DissipativeVerdict> {
    let big_r = map.radius();
    if !(eps > 0.0 && eps < big_r) {
        return Err(Error::Domain(format!("eps {eps} outside (0, {big_r})")));
    }
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for k in 1..=cfg.ladder_rungs {
        let r = big_r - eps * 0.5f64.powi(k as i32);
        let est = sup_re_pairing(map, r, theta, false, Mode::Sup, cfg)?;
        if est.value > worst {
            worst = est.value;
            witness = Some(est.argmax);
        }
    }
    let dissipative = worst <= omega + 1e-9;
    Ok(DissipativeVerdict {
        dissipative,
        worst,
        witness: if dissipative { None } else { witness },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct RangeStats {
    pub r: f64,
    pub theta: f64,
    pub N_r: f64,
    pub M_r: f64,
    pub m_r: f64,
    pub V_abs: f64,
    pub W_r: f64,
    pub samples: usize,
    pub refine_iters: usize,
}

/// All sphere quantities at radius `r` and angle `θ`.
pub fn range_stats(map: &HoloMap, r: f64, theta: f64, cfg: &OracleConfig) -> Result<RangeStats> {
    let n_r = sup_re_pairing(map, r, theta, false, Mode::Sup, cfg)?;
    let big_m = sup_re_pairing(map, r, theta, true, Mode::Sup, cfg)?;
    let small_m = sup_re_pairing(map, r, theta, true, Mode::Inf, cfg)?;
    let v_abs = sphere_sup(
        map.dim(),
        r,
        |x| map.eval(x).map(|hx| pairing(&hx, x).norm()).unwrap_or(f64::NAN),
        &cfg.sampler,
    );
    let w = sphere_sup(map.dim(), r, |x| map.eval(x).map(|hx| norm(&hx)).unwrap_or(f64::NAN), &cfg.sampler);
    let parts = [&n_r, &big_m, &small_m, &v_abs, &w];
    Ok(RangeStats {
        r,
        theta,
        N_r: n_r.value,
        M_r: big_m.value,
        m_r: small_m.value,
        V_abs: v_abs.value,
        W_r: w.value,
        samples: parts.iter().map(|p| p.samples).sum(),
        refine_iters: parts.iter().map(|p| p.refine_iters).sum(),
    })
}
