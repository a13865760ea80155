//! Two-phase maximization of a real objective over a sphere `‖x‖ = r` in ℂⁿ.
//!
//! Phase 1 evaluates a shifted Halton point set in an angular chart; phase 2
//! runs coordinate-wise golden-section ascent from the best few samples.
//!
//! Chart: for n = 1 a single phase. For n ≥ 2 the moduli come from n − 1
//! hyperspherical angles `α` (cos α₁, sin α₁ cos α₂, …) and each coordinate
//! gets its own phase, 2n − 1 real coordinates in total.

use crate::linalg::{cis, C64};
use crate::roots::golden_max;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, TAU};

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplerConfig {
    /// Phase-1 points per complex dimension.
    pub samples_per_dim: usize,
    pub seed: u64,
    pub max_sweeps: usize,
    /// Stop once a sweep gains less than this and the bracket is below `min_width`.
    pub tol: f64,
    pub min_width: f64,
    /// Number of phase-1 candidates refined in phase 2.
    pub starts: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            samples_per_dim: 4096,
            seed: 42,
            max_sweeps: 200,
            tol: 1e-12,
            min_width: 1e-7,
            starts: 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupEstimate {
    pub value: f64,
    #[serde(skip)]
    pub argmax: Vec<C64>,
    #[serde(skip)]
    pub argmax_chart: Vec<f64>,
    pub samples: usize,
    pub refine_iters: usize,
}

/// NaN and evaluation failures count as −∞ so they never win a max.
pub fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

pub fn chart_dim(n: usize) -> usize {
    if n == 1 {
        1
    } else {
        2 * n - 1
    }
}

/// Maps chart coordinates to a point of norm `r`.
pub fn chart_point(n: usize, r: f64, t: &[f64]) -> Vec<C64> {
    if n == 1 {
        return vec![cis(t[0]) * r];
    }
    let (alphas, phases) = t.split_at(n - 1);
    let mut out = Vec::with_capacity(n);
    let mut tail = r;
    for k in 0..n {
        let m = if k < n - 1 {
            let m = tail * alphas[k].cos();
            tail *= alphas[k].sin();
            m
        } else {
            tail
        };
        out.push(cis(phases[k]) * m);
    }
    out
}

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = u64::from(base);
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut acc = 0.0;
    while i > 0 {
        acc += f * (i % b) as f64;
        i /= b;
        f *= inv;
    }
    acc
}

/// Shifted Halton point `i` in the chart box.
fn halton_chart(n: usize, i: usize, shift: &[f64]) -> Vec<f64> {
    let d = chart_dim(n);
    (0..d)
        .map(|k| {
            let u = (radical_inverse(i as u64 + 1, PRIMES[k % PRIMES.len()]) + shift[k]).fract();
            if n > 1 && k < n - 1 {
                u * FRAC_PI_2
            } else {
                u * TAU
            }
        })
        .collect()
}

/// Coordinate-wise golden-section ascent from `start`.
///
/// `clamp` bounds each coordinate; returns the final coordinates, value, and
/// number of sweeps.
pub fn refine<F>(mut f: F, start: &[f64], start_val: f64, width: f64, clamp: &[(f64, f64)], cfg: &SamplerConfig) -> (Vec<f64>, f64, usize)
where
    F: FnMut(&[f64]) -> f64,
{
    let mut c = start.to_vec();
    let mut best = start_val;
    let mut w = width;
    let mut sweeps = 0;
    while sweeps < cfg.max_sweeps {
        sweeps += 1;
        let before = best;
        let mut moved = 0.0_f64;
        for k in 0..c.len() {
            let (lo_b, hi_b) = clamp[k];
            let lo = (c[k] - w).max(lo_b);
            let hi = (c[k] + w).min(hi_b);
            if hi <= lo {
                continue;
            }
            let mut probe = c.clone();
            let (xk, vk) = golden_max(
                |s| {
                    probe[k] = s;
                    sanitize(f(&probe))
                },
                lo,
                hi,
                (hi - lo) * 1e-3,
            );
            if vk > best {
                moved = moved.max((xk - c[k]).abs());
                c[k] = xk;
                best = vk;
            }
        }
        if best - before <= cfg.tol && w <= cfg.min_width {
            break;
        }
        if moved <= w / 2.0 {
            w /= 4.0;
        }
    }
    (c, best, sweeps)
}

/// Sup of `f` over the sphere of radius `r` in ℂⁿ.
pub fn sphere_sup<F>(n: usize, r: f64, mut f: F, cfg: &SamplerConfig) -> SupEstimate
where
    F: FnMut(&[C64]) -> f64,
{
    let d = chart_dim(n);
    let count = cfg.samples_per_dim * n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let shift: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();

    let mut pts: Vec<(Vec<f64>, f64)> = Vec::with_capacity(count);
    if n == 1 {
        let step = TAU / count as f64;
        for i in 0..count {
            let t = vec![(i as f64 + shift[0]) * step];
            let v = sanitize(f(&chart_point(1, r, &t)));
            pts.push((t, v));
        }
    } else {
        for i in 0..count {
            let t = halton_chart(n, i, &shift);
            let v = sanitize(f(&chart_point(n, r, &t)));
            pts.push((t, v));
        }
    }

    let mut order: Vec<usize> = if n == 1 {
        // discrete local maxima on the periodic grid
        (0..count)
            .filter(|&i| {
                let prev = pts[(i + count - 1) % count].1;
                let next = pts[(i + 1) % count].1;
                pts[i].1 >= prev && pts[i].1 >= next
            })
            .collect()
    } else {
        (0..count).collect()
    };
    order.sort_by(|&a, &b| pts[b].1.total_cmp(&pts[a].1).then(a.cmp(&b)));
    order.truncate(cfg.starts.max(1));

    let (mut best_t, mut best_v) = order
        .first()
        .map(|&i| pts[i].clone())
        .unwrap_or_else(|| (vec![0.0; d], f64::NEG_INFINITY));
    let mut iters = 0;
    let width = if n == 1 {
        TAU / count as f64
    } else {
        (TAU / (count as f64).powf(1.0 / d as f64)).min(FRAC_PI_2)
    };
    let clamp = vec![(f64::NEG_INFINITY, f64::INFINITY); d];
    for &i in &order {
        let (t0, v0) = &pts[i];
        if !v0.is_finite() {
            continue;
        }
        let (t, v, s) = refine(|t| f(&chart_point(n, r, t)), t0, *v0, width, &clamp, cfg);
        iters += s;
        if v > best_v {
            best_v = v;
            best_t = t;
        }
    }
    SupEstimate {
        value: best_v,
        argmax: chart_point(n, r, &best_t),
        argmax_chart: best_t,
        samples: count,
        refine_iters: iters,
    }
}

/// Uniform random point on the unit sphere of ℂⁿ (normalized Gaussians).
pub fn unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n)
            .map(|_| {
                let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                let u2: f64 = rng.gen();
                C64::from_polar((-2.0 * u1.ln()).sqrt(), TAU * u2)
            })
            .collect();
        let len = crate::linalg::norm(&v);
        if len > 1e-12 {
            return v.into_iter().map(|z| z / len).collect();
        }
    }
}
