//! The nine acceptance criteria at full size. Each test prints one line
//! `criterion N: PASS|FAIL ...` and asserts both the verdict and the time budget.

use numrange::oracle::OracleConfig;
use numrange::verify::{self, CriterionReport, SuiteSizes};
use std::sync::Mutex;
use std::time::{Duration, Instant};

const SEED: u64 = 42;

// Criteria run one at a time so the time budgets are not shared.
static SERIAL: Mutex<()> = Mutex::new(());

fn run(budget: Duration, f: impl FnOnce() -> CriterionReport) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let rep = f();
    let took = start.elapsed();
    let in_time = took < budget;
    let verdict = if rep.passed && in_time { "PASS" } else { "FAIL" };
    println!(
        "criterion {}: {verdict} {} ({} cases, {:.2}s of {}s)",
        rep.id,
        rep.name,
        rep.cases,
        took.as_secs_f64(),
        budget.as_secs()
    );
    for (k, v) in &rep.metrics {
        println!("  {k} = {v:e}");
    }
    for msg in &rep.failures {
        println!("  failure: {msg}");
    }
    assert!(rep.passed, "criterion {} failed: {:?}", rep.id, rep.failures);
    assert!(in_time, "criterion {} took {took:?}, budget {budget:?}", rep.id);
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

#[test]
fn criterion_1_bloch_example() {
    run(secs(1), verify::bloch_example);
}

#[test]
fn criterion_2_geometric_radii() {
    run(secs(1), verify::geometric_radii);
}

#[test]
fn criterion_3_sharpness() {
    run(secs(30), || verify::sharpness(&OracleConfig::default()));
}

#[test]
fn criterion_4_scalar_corpus() {
    let n = SuiteSizes::default().scalar_polys;
    run(secs(60), || verify::scalar_corpus(SEED, n));
}

#[test]
fn criterion_5_growth_domination() {
    let n = SuiteSizes::default().growth_maps;
    run(secs(300), || verify::growth_domination(SEED, n, &OracleConfig::default()));
}

#[test]
fn criterion_6_resolvent_null_points() {
    let n = SuiteSizes::default().null_point_maps;
    run(secs(60), || verify::resolvent_null_points(SEED, n, &OracleConfig::default()));
}

#[test]
fn criterion_7_root_agreement() {
    let n = SuiteSizes::default().root_tuples;
    run(secs(10), || verify::root_agreement(SEED, n));
}

#[test]
fn criterion_8_bloch_soundness() {
    let s = SuiteSizes::default();
    run(secs(120), || verify::bloch_soundness(SEED, s.bloch_maps, s.bloch_targets, &OracleConfig::default()));
}

#[test]
fn criterion_9_key_domain() {
    let s = SuiteSizes::default();
    run(secs(60), || verify::key_domain_check(SEED, s.key_lambdas, s.key_points));
}
