//! Verification suites: exact-value reproductions and seeded property sweeps.

pub mod corpus;

use crate::bloch::{bloch_case_analysis, maximizer, r_star, s_star, BlochInputs};
use crate::error::{Error, Result};
use crate::geometry::{spiral_radius, spiral_radius_bisect, starlike_radius, verify_spirallike_on_ball};
use crate::growth::{bound_f, bound_f1, BoundInputs};
use crate::linalg::{cis, norm, scale, C64};
use crate::map::{Builtin, HoloMap, Monomial, PolyMap};
use crate::oracle::sampler::unit_vector;
use crate::oracle::{sup_re_pairing, Mode, OracleConfig};
use crate::resolvent::{
    certify, mu_profile, null_point, nullp_radius, solve_certified, solve_resolvent, verify_key_domain, MuBranch,
    MuParams, SolverConfig,
};
use crate::scalar::{check_scalar_suite, GridPlan};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

/// At most this many failure messages are kept per criterion.
const MAX_FAILURES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub failures: Vec<String>,
    /// Named worst-case quantities.
    pub metrics: Vec<(String, f64)>,
}

struct Tally {
    cases: usize,
    failed: usize,
    failures: Vec<String>,
    metrics: Vec<(String, f64)>,
}

impl Tally {
    fn new() -> Self {
        Self { cases: 0, failed: 0, failures: Vec::new(), metrics: Vec::new() }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(msg());
            }
        }
    }

    fn fail(&mut self, msg: String) {
        self.check(false, || msg);
    }

    fn metric(&mut self, name: &str, v: f64) {
        self.metrics.push((name.to_string(), v));
    }

    fn finish(self, id: u32, name: &'static str) -> CriterionReport {
        CriterionReport { id, name, passed: self.failed == 0 && self.cases > 0, cases: self.cases, failures: self.failures, metrics: self.metrics }
    }
}

fn max_of(acc: &mut f64, v: f64) {
    if v > *acc || v.is_nan() {
        *acc = v;
    }
}

/// 1: the stylized example `θ = π/3, L = 0, δ = 1`.
pub fn bloch_example() -> CriterionReport {
    let mut t = Tally::new();
    let exact = 2.0 - 3f64.sqrt();
    match (|| -> Result<()> {
        let inp = BlochInputs::new(FRAC_PI_3, 0.0, 1.0)?;
        let rs = r_star(&inp)?;
        let closed = rs.closed_form.unwrap_or(f64::NAN);
        let bis = rs.bisection.unwrap_or(f64::NAN);
        t.check(closed == 0.5, || format!("closed-form r* = {closed}"));
        t.check((bis - 0.5).abs() <= 1e-10, || format!("bisection r* = {bis}"));
        let ss = s_star(&inp)?;
        t.check((ss.value - exact).abs() <= 1e-10, || format!("s* = {}", ss.value));
        t.check((ss.rho_at - exact / 2.0).abs() <= 1e-10, || format!("ρ(s*) = {}", ss.rho_at));
        let (r0, rho0) = maximizer(&inp)?;
        t.check((r0 - exact).abs() <= 1e-8, || format!("argmax r₀ = {r0}"));
        t.metric("r_star", rs.value);
        t.metric("s_star", ss.value);
        t.metric("rho_s_star", ss.rho_at);
        t.metric("r0", r0);
        t.metric("rho0", rho0);
        Ok(())
    })() {
        Ok(()) => {}
        Err(e) => t.fail(e.to_string()),
    }
    t.finish(1, "bloch example")
}

/// 2: closed-form starlike and spiral radii.
pub fn geometric_radii() -> CriterionReport {
    let mut t = Tally::new();
    match (|| -> Result<()> {
        let q = starlike_radius(FRAC_PI_4)?;
        t.check((q - 0.5f64.sqrt()).abs() <= 1e-12, || format!("r*(π/4) = {q}"));
        let z = starlike_radius(0.0)?;
        t.check(z == 1.0, || format!("r*(0) = {z}"));
        let s0 = spiral_radius(0.0)?;
        t.check(s0 == 1.0, || format!("spiral_radius(0) = {s0}"));
        let mut worst: f64 = 0.0;
        for k in 0..50 {
            let theta = -1.5 + 3.0 * (k as f64 + 0.5) / 50.0;
            let gap = (spiral_radius(theta)? - spiral_radius_bisect(theta)?).abs();
            worst = worst.max(gap);
            t.check(gap <= 1e-10, || format!("θ = {theta}: gap {gap:e}"));
        }
        t.metric("starlike_pi_4", q);
        t.metric("max_bisection_gap", worst);
        Ok(())
    })() {
        Ok(()) => {}
        Err(e) => t.fail(e.to_string()),
    }
    t.finish(2, "geometric radii")
}

/// 3: sign flip of the spirallike margin across the radii on the reference maps.
pub fn sharpness(cfg: &OracleConfig) -> CriterionReport {
    let mut t = Tally::new();
    let one = C64::new(1.0, 0.0);
    for &theta in &[FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
        let res = (|| -> Result<()> {
            let f = HoloMap::builtin(1, 1.0, Builtin::SpiralRef { theta })?;
            let rs = starlike_radius(theta)?;
            let below = verify_spirallike_on_ball(&f, one, 0.99 * rs, cfg)?;
            let above = verify_spirallike_on_ball(&f, one, 1.01 * rs, cfg)?;
            t.check(below.passed, || format!("starlike θ = {theta}: fails below r* (margin {:e})", below.worst_margin));
            t.check(!above.passed, || format!("starlike θ = {theta}: passes above r* (margin {:e})", above.worst_margin));
            t.metric(&format!("starlike_below_{theta:.4}"), below.worst_margin);
            t.metric(&format!("starlike_above_{theta:.4}"), above.worst_margin);

            let g = HoloMap::builtin(1, 1.0, Builtin::SpiralRef { theta: 0.0 })?;
            let rr = spiral_radius(theta)?;
            let below = verify_spirallike_on_ball(&g, cis(theta), 0.99 * rr, cfg)?;
            let above = verify_spirallike_on_ball(&g, cis(theta), 1.01 * rr, cfg)?;
            t.check(below.passed, || format!("spiral θ = {theta}: fails below r(θ) (margin {:e})", below.worst_margin));
            t.check(!above.passed, || format!("spiral θ = {theta}: passes above r(θ) (margin {:e})", above.worst_margin));
            t.metric(&format!("spiral_below_{theta:.4}"), below.worst_margin);
            t.metric(&format!("spiral_above_{theta:.4}"), above.worst_margin);
            Ok(())
        })();
        if let Err(e) = res {
            t.fail(format!("θ = {theta}: {e}"));
        }
    }
    t.finish(3, "sharpness")
}

/// 4: the scalar inequalities on random polynomials.
pub fn scalar_corpus(seed: u64, count: usize) -> CriterionReport {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plan = GridPlan::default();
    let mut worst = f64::NEG_INFINITY;
    for k in 0..count {
        let f = corpus::scalar_poly(&mut rng, 8);
        let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        match check_scalar_suite(&f, theta, &plan) {
            Ok(rep) => {
                max_of(&mut worst, rep.max_excess());
                t.check(rep.passed(), || format!("polynomial {k}: max excess {:e}", rep.max_excess()));
            }
            Err(e) => t.fail(format!("polynomial {k}: {e}")),
        }
    }
    t.metric("max_excess", worst);
    t.finish(4, "scalar inequality corpus")
}

/// Radii on which the growth bounds are compared with the oracle.
pub const GROWTH_GRID: [f64; 7] = [0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 0.95];

/// 5: `N_r ≤ F(r)` and `N_r ≤ F₁(r, θ)`, and `F(r) → N_R` near the boundary.
pub fn growth_domination(seed: u64, count: usize, cfg: &OracleConfig) -> CriterionReport {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst_f, mut worst_f1, mut worst_gap) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for k in 0..count {
        let n = 1 + k % 3;
        let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let p = corpus::poly_map(&mut rng, n, 3, 3, 0.5);
        let res = (|| -> Result<()> {
            let map = HoloMap::poly(1.0, p)?;
            let inp = BoundInputs::from_map(&map, theta, cfg)?;
            if !inp.n_big.is_finite() {
                return Err(Error::InfiniteInput("N_R"));
            }
            for &r in &GROWTH_GRID {
                let nr = sup_re_pairing(&map, r, 0.0, false, Mode::Sup, cfg)?.value;
                let ef = nr - bound_f(&inp, r)?;
                let ef1 = nr - bound_f1(&inp, r, cfg)?;
                max_of(&mut worst_f, ef);
                max_of(&mut worst_f1, ef1);
                t.check(ef <= 1e-6, || format!("map {k}, r = {r}: N_r exceeds F by {ef:e}"));
                t.check(ef1 <= 1e-6, || format!("map {k}, r = {r}: N_r exceeds F₁ by {ef1:e}"));
            }
            let rk = 1.0 - 0.5f64.powi(12);
            let gap = (bound_f(&inp, rk)? - inp.n_big).abs();
            let allowed = 1e-2 * inp.n_big.abs().max(1.0);
            max_of(&mut worst_gap, gap / allowed);
            t.check(gap <= allowed, || format!("map {k}: |F(r_k) − N_R| = {gap:e}"));
            Ok(())
        })();
        if let Err(e) = res {
            t.fail(format!("map {k}: {e}"));
        }
    }
    t.metric("max_excess_F", worst_f);
    t.metric("max_excess_F1", worst_f1);
    t.metric("max_relative_limit_gap", worst_gap);
    t.finish(5, "vector bound domination")
}

/// 6: null points of dissipative maps with `L + 4‖h(0)‖ < 0`, and certified solves.
pub fn resolvent_null_points(seed: u64, count: usize, cfg: &OracleConfig) -> CriterionReport {
    let mut t = Tally::new();
    let scfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // worked value h(x) = −x + 0.05
    let worked = (|| -> Result<()> {
        let comp = vec![Monomial::new(vec![0], C64::new(0.05, 0.0)), Monomial::new(vec![1], C64::new(-1.0, 0.0))];
        let h = HoloMap::poly(1.0, PolyMap::new(vec![comp])?)?;
        let rep = null_point(&h, 1.0, &scfg)?;
        let x0 = rep.trace.limit[0];
        t.check((x0 - C64::new(0.05, 0.0)).norm() <= 1e-9, || format!("worked x₀ = {x0}"));
        let r1 = rep.radius_bound.unwrap_or(f64::NAN);
        t.check((r1 - (9.0 - 80f64.sqrt())).abs() <= 1e-12, || format!("worked r₁ = {r1}"));
        Ok(())
    })();
    if let Err(e) = worked {
        t.fail(format!("worked example: {e}"));
    }

    let (mut worst_h, mut worst_excess, mut worst_gap) = (0.0f64, f64::NEG_INFINITY, 0.0f64);
    let mut certified = 0;
    for k in 0..count {
        let n = 1 + k % 2;
        let h = corpus::dissipative_map(&mut rng, n);
        let res = (|| -> Result<()> {
            let rep = null_point(&h, 1.0, &scfg)?;
            let bound = nullp_radius(rep.c, rep.lip).ok_or_else(|| Error::ConditionFailed("L + 4c < 0 fails".into()))?;
            worst_h = worst_h.max(rep.h_at_limit);
            max_of(&mut worst_excess, rep.limit_norm - bound);
            worst_gap = worst_gap.max(rep.lambda_gap);
            t.check(rep.h_at_limit <= 1e-9, || format!("map {k}: ‖h(x₀)‖ = {:e}", rep.h_at_limit));
            t.check(rep.limit_norm <= bound + 1e-6, || format!("map {k}: ‖x₀‖ = {} > r₁ = {bound}", rep.limit_norm));
            t.check(rep.lambda_gap <= 1e-8, || format!("map {k}: λ-gap {:e}", rep.lambda_gap));

            let inp = BoundInputs::from_map(&h, 0.0, cfg)?;
            for _ in 0..10 {
                let lambda = C64::new(rng.gen_range(0.5..=3.0), rng.gen_range(-1.0..=1.0));
                let r = rng.gen_range(0.2..=0.95);
                let z = scale(C64::new(rng.gen_range(0.0..=1.0) * r * lambda.re, 0.0), &unit_vector(&mut rng, n));
                if certify(&inp, lambda, &z, r)? {
                    certified += 1;
                    let tr = solve_certified(&h, &inp, lambda, &z, r, &scfg)?;
                    t.check(tr.converged && norm(&tr.solution) < r, || {
                        format!("map {k}: certified solve failed (λ = {lambda}, r = {r}, residual {:e})", tr.residual)
                    });
                }
            }
            Ok(())
        })();
        if let Err(e) = res {
            t.fail(format!("map {k}: {e}"));
        }
    }
    t.check(certified > 0, || "no certified solve was sampled".into());
    t.metric("max_h_at_limit", worst_h);
    t.metric("max_radius_excess", worst_excess);
    t.metric("max_lambda_gap", worst_gap);
    t.metric("certified_solves", certified as f64);
    t.finish(6, "resolvent and null points")
}

/// 7: trigonometric cubic roots against bisection on `μ(r) = 0`.
pub fn root_agreement(seed: u64, count: usize) -> CriterionReport {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = 0;
    let (mut worst_gap, mut worst_mu) = (0.0f64, 0.0f64);
    let mut logged = 0;
    let mut draws = 0;
    while found < count && draws < 100_000 {
        draws += 1;
        let big_r = rng.gen_range(0.5..=2.0);
        let c = rng.gen_range(0.01..=0.5);
        let lip = rng.gen_range(-3.0..=0.5);
        let b = rng.gen_range(0.0..=2.0);
        let Ok(p) = MuParams::new(big_r, lip, b, c) else { continue };
        let Ok(prof) = mu_profile(&p) else { continue };
        if prof.branch != MuBranch::InteriorMin {
            continue;
        }
        let Some((r1, r2)) = prof.roots else { continue };
        found += 1;
        let res1 = p.mu(r1).abs();
        let res2 = p.mu(r2).abs();
        worst_mu = worst_mu.max(res1).max(res2);
        match prof.discrepancy {
            None => {
                let cf = prof.closed_form.expect("agreeing profiles carry the closed form");
                worst_gap = worst_gap.max((cf.r1 - r1).abs().max((cf.r2 - r2).abs()));
                t.check(true, String::new);
            }
            Some(gap) => {
                logged += 1;
                worst_gap = worst_gap.max(gap);
                t.check(res1 <= 1e-10 && res2 <= 1e-10, || {
                    format!("R = {big_r}, L = {lip}, b = {b}, c = {c}: gap {gap:e} and |μ| = {res1:e}, {res2:e}")
                });
            }
        }
    }
    t.check(found == count, || format!("only {found} admissible tuples in {draws} draws"));
    t.metric("max_gap", worst_gap);
    t.metric("max_abs_mu_at_roots", worst_mu);
    t.metric("logged_discrepancies", logged as f64);
    t.finish(7, "root-formula agreement")
}

/// 8: `F(B_r) ⊇ B_ρ` for `F = I − h` with `ρ = ρ_s(r)` from oracle inputs.
pub fn bloch_soundness(seed: u64, maps: usize, targets: usize, cfg: &OracleConfig) -> CriterionReport {
    let mut t = Tally::new();
    let scfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst_res, mut worst_ratio) = (0.0f64, 0.0f64);
    for k in 0..maps {
        let h = corpus::bloch_map(&mut rng);
        let theta = rng.gen_range(0.2..=1.3);
        let res = (|| -> Result<()> {
            let inp = BlochInputs::from_map(&h, theta, cfg)?;
            let rs = r_star(&inp)?.value;
            let s = rng.gen_range(0.2..=0.9) * rs.min(1.0 - 1e-6);
            let case = bloch_case_analysis(&inp, s)?;
            let (r, rho) = (case.argmax, case.max);
            if !(rho > 0.0) {
                return Err(Error::ConditionFailed(format!("ρ_s(r) = {rho} is not positive")));
            }
            for _ in 0..targets {
                let z = cis(rng.gen_range(0.0..std::f64::consts::TAU)) * (rho * rng.gen::<f64>().sqrt());
                let tr = solve_resolvent(&h, C64::new(1.0, 0.0), &[z], r, &scfg)?;
                let x = tr.solution[0].norm();
                worst_res = worst_res.max(tr.residual);
                worst_ratio = worst_ratio.max(x / r);
                t.check(tr.residual <= 1e-10 && x < r, || {
                    format!("map {k}: |z| = {} gives |x| = {x} vs r = {r}, residual {:e}", z.norm(), tr.residual)
                });
            }
            Ok(())
        })();
        if let Err(e) = res {
            t.fail(format!("map {k}: {e}"));
        }
    }
    t.metric("max_residual", worst_res);
    t.metric("max_x_over_r", worst_ratio);
    t.finish(8, "Bloch-pair soundness")
}

/// 9: `Φ_λ(S_r) ⊆ B̄_{r+1e-8}` for `h(x) = −x + x²/4` and `λ` in the key domain.
pub fn key_domain_check(seed: u64, lambdas: usize, points: usize) -> CriterionReport {
    let mut t = Tally::new();
    let scfg = SolverConfig::default();
    let res = (|| -> Result<()> {
        let comp = vec![Monomial::new(vec![1], C64::new(-1.0, 0.0)), Monomial::new(vec![2], C64::new(0.25, 0.0))];
        let h = HoloMap::poly(1.0, PolyMap::new(vec![comp])?)?;
        for &r in &[0.3, 0.6, 0.9] {
            let rep = verify_key_domain(&h, r, lambdas, points, seed, &scfg)?;
            t.check(rep.passed, || format!("r = {r}: max excess {:e}, {} unconverged", rep.max_excess, rep.unconverged));
            t.metric(&format!("max_excess_r{r}"), rep.max_excess);
        }
        Ok(())
    })();
    if let Err(e) = res {
        t.fail(e.to_string());
    }
    t.finish(9, "key domain")
}

/// Acceptance sizes: counts of maps, polynomials and samples per criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteSizes {
    pub scalar_polys: usize,
    pub growth_maps: usize,
    pub null_point_maps: usize,
    pub root_tuples: usize,
    pub bloch_maps: usize,
    pub bloch_targets: usize,
    pub key_lambdas: usize,
    pub key_points: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        Self {
            scalar_polys: 200,
            growth_maps: 100,
            null_point_maps: 20,
            root_tuples: 50,
            bloch_maps: 20,
            bloch_targets: 100,
            key_lambdas: 64,
            key_points: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Scalar,
    Growth,
    Resolvent,
    Bloch,
    Geom,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "scalar" => Suite::Scalar,
            "growth" => Suite::Growth,
            "resolvent" => Suite::Resolvent,
            "bloch" => Suite::Bloch,
            "geom" => Suite::Geom,
            "all" => Suite::All,
            other => return Err(Error::Parse(format!("unknown suite `{other}`"))),
        })
    }
}

/// Runs the criteria that make up `suite`.
pub fn run_suite(suite: Suite, seed: u64, sizes: &SuiteSizes, cfg: &OracleConfig) -> Vec<CriterionReport> {
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Bloch {
        out.push(bloch_example());
    }
    if all || suite == Suite::Geom {
        out.push(geometric_radii());
        out.push(sharpness(cfg));
    }
    if all || suite == Suite::Scalar {
        out.push(scalar_corpus(seed, sizes.scalar_polys));
    }
    if all || suite == Suite::Growth {
        out.push(growth_domination(seed, sizes.growth_maps, cfg));
    }
    if all || suite == Suite::Resolvent {
        out.push(resolvent_null_points(seed, sizes.null_point_maps, cfg));
        out.push(root_agreement(seed, sizes.root_tuples));
    }
    if all || suite == Suite::Bloch {
        out.push(bloch_soundness(seed, sizes.bloch_maps, sizes.bloch_targets, cfg));
    }
    if all || suite == Suite::Resolvent {
        out.push(key_domain_check(seed, sizes.key_lambdas, sizes.key_points));
    }
    out.sort_by_key(|c| c.id);
    out
}
