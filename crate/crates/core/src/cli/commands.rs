//! Command drivers over the library modules.

use super::report::{num, opt, to_json, Envelope, OracleUsage, Summary, Table, SCHEMA};
use super::{parse_complex, Command, Outcome, RunConfig, UsageError};
use crate::bloch::{bloch_report, BlochInputs};
use crate::error::{Error, Result};
use crate::geometry::{spiral_radius, spiral_radius_bisect, starlike_radius, verify_spirallike_on_ball};
use crate::growth::{bound_profile, detect_rigidity, BoundInputs};
use crate::linalg::{cis, norm, pairing, C64};
use crate::map::{load_map_file, HoloMap};
use crate::oracle::{ball_sup, deriv_bounds, estimate_nr, range_stats};
use crate::resolvent::{certify, mu_profile, null_point, solve_resolvent, MuParams};
use crate::verify::{run_suite, Suite, SuiteSizes};
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::FRAC_PI_2;

pub enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

type Run = std::result::Result<Outcome, Failure>;

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Run {
    match cmd {
        Command::Range => range(cfg),
        Command::Bounds => bounds(cfg),
        Command::Resolvent { lambda, z, r_cap } => resolvent(cfg, lambda, z.as_deref(), *r_cap),
        Command::Bloch { lip, delta } => bloch(cfg, *lip, *delta),
        Command::Geom => geom(cfg),
        Command::Verify { suite } => verify(cfg, suite),
    }
}

fn need_map(cfg: &RunConfig) -> std::result::Result<HoloMap, Failure> {
    let path = cfg.map.as_ref().ok_or_else(|| Failure::Usage(format!("`{}` needs --map", cfg.command)))?;
    load_map_file(path).map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{path}: {io}"))).into(),
        other => other.into(),
    })
}

fn envelope(cfg: &RunConfig, usage: OracleUsage, results: Value, summary: Option<Summary>) -> Result<Envelope> {
    Ok(Envelope {
        schema: SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        config: to_json(cfg)?,
        oracle: json!({ "settings": to_json(&cfg.tolerances)?, "usage": to_json(&usage)? }),
        results,
        summary,
    })
}

/// Ok value or the error message, for optional report sections.
#[derive(Serialize)]
#[serde(rename_all = "lowercase")]
enum Section<T> {
    Ok(T),
    Error(String),
}

fn section<T>(r: Result<T>) -> Section<T> {
    match r {
        Ok(v) => Section::Ok(v),
        Err(e) => Section::Error(e.to_string()),
    }
}

fn range(cfg: &RunConfig) -> Run {
    let map = need_map(cfg)?;
    let ocfg = &cfg.tolerances.oracle;
    let radii = cfg.r_grid.radii(map.radius());
    let mut usage = OracleUsage::default();
    let mut table = Table::new(&["theta", "r", "N_r", "M_r", "m_r", "V_abs", "W_r", "L_theta", "l_theta", "N_R_theta"]);
    let mut per_theta = Vec::new();
    for theta in cfg.thetas() {
        let d = deriv_bounds(&map, theta)?;
        let nr = estimate_nr(&map, theta, ocfg)?;
        usage.add(nr.samples, nr.refine_iters);
        let mut rows = Vec::new();
        for &r in &radii {
            let s = range_stats(&map, r, theta, ocfg)?;
            usage.add(s.samples, s.refine_iters);
            table.push(vec![
                num(theta),
                num(r),
                num(s.N_r),
                num(s.M_r),
                num(s.m_r),
                num(s.V_abs),
                num(s.W_r),
                num(d.upper),
                num(d.lower),
                num(nr.value),
            ]);
            rows.push(s);
        }
        per_theta.push(json!({
            "theta": theta,
            "deriv": to_json(&d)?,
            "N_R_theta": to_json(&nr.value)?,
            "N_R_theta_infinite": nr.infinite,
            "rows": to_json(&rows)?,
        }));
    }
    let results = json!({ "R": map.radius(), "dim": map.dim(), "per_theta": per_theta });
    Ok(Outcome { envelope: envelope(cfg, usage, results, None)?, table })
}

fn bounds(cfg: &RunConfig) -> Run {
    let map = need_map(cfg)?;
    let ocfg = &cfg.tolerances.oracle;
    let radii = cfg.r_grid.radii(map.radius());
    let mut usage = OracleUsage::default();
    let v_big = ball_sup(map.dim(), map.radius(), false, |x| map.eval(x).map(|hx| pairing(&hx, x).norm()).unwrap_or(f64::NAN), ocfg);
    usage.add(v_big.samples, v_big.refine_iters);
    let v_abs = (!v_big.infinite).then_some(v_big.value);
    let mut table = Table::new(&["theta", "r", "F", "F1", "two_sided_upper", "two_sided_lower", "probe_bound", "Vr_bound", "Wr_bound"]);
    let mut per_theta = Vec::new();
    for theta in cfg.thetas() {
        let inp = BoundInputs::from_map(&map, theta, ocfg)?;
        let rows = bound_profile(&inp, v_abs, &radii, ocfg)?;
        let rigidity = detect_rigidity(&map, theta, cfg.tolerances.rigidity, ocfg)?;
        for row in &rows {
            table.push(vec![
                num(theta),
                num(row.r),
                opt(row.f),
                opt(row.f1),
                opt(row.two_sided_upper),
                opt(row.two_sided_lower),
                opt(row.probe_bound),
                opt(row.vr_bound),
                opt(row.wr_bound),
            ]);
        }
        per_theta.push(json!({
            "theta": theta,
            "inputs": to_json(&inp)?,
            "profile": to_json(&rows)?,
            "rigidity": to_json(&rigidity)?,
        }));
    }
    let results = json!({ "V_R_abs": to_json(&v_big.value)?, "per_theta": per_theta });
    Ok(Outcome { envelope: envelope(cfg, usage, results, None)?, table })
}

fn resolvent(cfg: &RunConfig, lambda: &str, z: Option<&str>, r_cap: Option<f64>) -> Run {
    let map = need_map(cfg)?;
    let lambda = parse_complex(lambda)?;
    let z: Vec<C64> = match z {
        Some(s) => s.split(',').map(parse_complex).collect::<std::result::Result<_, _>>()?,
        None => vec![C64::new(0.0, 0.0); map.dim()],
    };
    if z.len() != map.dim() {
        return Err(Error::DimensionMismatch { expected: map.dim(), got: z.len() }.into());
    }
    let cap = r_cap.unwrap_or(f64::INFINITY);
    let scfg = &cfg.tolerances.solver;
    let trace = solve_resolvent(&map, lambda, &z, cap, scfg)?;
    if !trace.converged {
        return Err(Error::NoConvergence { iterations: trace.iterations, residual: trace.residual }.into());
    }
    let mut table = Table::new(&["iteration", "residual"]);
    for (k, r) in trace.residuals.iter().enumerate() {
        table.push(vec![k.to_string(), num(*r)]);
    }
    let inputs = BoundInputs::from_map(&map, 0.0, &cfg.tolerances.oracle);
    let certified = match (&inputs, r_cap) {
        (Ok(inp), Some(r)) => Some(section(certify(inp, lambda, &z, r))),
        _ => None,
    };
    let profile = inputs.as_ref().ok().map(|inp| section(MuParams::from_inputs(inp).and_then(|p| mu_profile(&p))));
    let null = lambda.im == 0.0 && lambda.re > 0.0;
    let results = json!({
        "trace": to_json(&trace)?,
        "solution_norm": norm(&trace.solution),
        "inputs": to_json(&match &inputs { Ok(i) => Section::Ok(i), Err(e) => Section::Error(e.to_string()) })?,
        "certified": to_json(&certified)?,
        "mu_profile": to_json(&profile)?,
        "null_point": to_json(&null.then(|| section(null_point(&map, lambda.re, scfg))))?,
    });
    Ok(Outcome { envelope: envelope(cfg, OracleUsage::default(), results, None)?, table })
}

fn bloch(cfg: &RunConfig, lip: Option<f64>, delta: Option<f64>) -> Run {
    let thetas = cfg.thetas();
    let [theta] = thetas[..] else {
        return Err(Failure::Usage("`bloch` takes a single --theta".into()));
    };
    let inp = match (lip, delta) {
        (Some(l), Some(d)) => BlochInputs::new(theta, l, d)?,
        (None, None) => BlochInputs::from_map(&need_map(cfg)?, theta, &cfg.tolerances.oracle)?,
        _ => return Err(Failure::Usage("--lip and --delta go together".into())),
    };
    let rep = bloch_report(&inp, cfg.r_grid.n)?;
    let mut table = Table::new(&["r", "rho"]);
    for (r, v) in &rep.rho_of {
        table.push(vec![num(*r), num(*v)]);
    }
    Ok(Outcome { envelope: envelope(cfg, OracleUsage::default(), to_json(&rep)?, None)?, table })
}

#[derive(Serialize)]
struct GeomRow {
    theta: f64,
    starlike_radius: f64,
    spiral_radius: f64,
    spiral_radius_bisect: f64,
}

/// Default θ sweep: 31 midpoints of `(−π/2, π/2)`, which include 0.
fn default_sweep() -> Vec<f64> {
    (0..31).map(|k| -FRAC_PI_2 + std::f64::consts::PI * (k as f64 + 0.5) / 31.0).map(|t| if t.abs() < 1e-15 { 0.0 } else { t }).collect()
}

fn geom(cfg: &RunConfig) -> Run {
    let thetas = cfg.theta.clone().unwrap_or_else(default_sweep);
    let mut table = Table::new(&["theta", "starlike_radius", "spiral_radius", "spiral_radius_bisect"]);
    let mut rows = Vec::new();
    for &t in &thetas {
        let row = GeomRow { theta: t, starlike_radius: starlike_radius(t)?, spiral_radius: spiral_radius(t)?, spiral_radius_bisect: spiral_radius_bisect(t)? };
        table.push(vec![num(t), num(row.starlike_radius), num(row.spiral_radius), num(row.spiral_radius_bisect)]);
        rows.push(row);
    }
    let mut usage = OracleUsage::default();
    let checks = match &cfg.map {
        None => None,
        Some(_) => {
            let map = need_map(cfg)?;
            let mut v = Vec::new();
            for &t in &thetas {
                for r in cfg.r_grid.radii(map.radius()) {
                    let verdict = verify_spirallike_on_ball(&map, cis(t), r, &cfg.tolerances.oracle)?;
                    usage.add(verdict.samples, 0);
                    v.push(verdict);
                }
            }
            Some(v)
        }
    };
    let results = json!({ "radii": to_json(&rows)?, "spirallike": to_json(&checks)? });
    Ok(Outcome { envelope: envelope(cfg, usage, results, None)?, table })
}

fn verify(cfg: &RunConfig, suite: &str) -> Run {
    let suite: Suite = suite.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let reports = run_suite(suite, cfg.seed, &SuiteSizes::default(), &cfg.tolerances.oracle);
    let passed = reports.iter().filter(|r| r.passed).count();
    let summary = Summary { passed, failed: reports.len() - passed, all_passed: passed == reports.len() };
    let mut table = Table::new(&["id", "name", "passed", "cases", "failures"]);
    for r in &reports {
        table.push(vec![r.id.to_string(), r.name.to_string(), r.passed.to_string(), r.cases.to_string(), r.failures.join("; ")]);
    }
    let results = json!({ "suite": to_json(&suite)?, "sizes": to_json(&SuiteSizes::default())?, "criteria": to_json(&reports)? });
    Ok(Outcome { envelope: envelope(cfg, OracleUsage::default(), results, Some(summary))?, table })
}
