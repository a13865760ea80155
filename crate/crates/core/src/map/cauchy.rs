//! Derivatives of holomorphic functions by the trapezoid rule on a circle.
//!
//! For `g` holomorphic on a disc of radius `ρ·q` around `t = 0`, the mean of
//! `g(ρω^k)/(ρω^k)` over the `N`-th roots of unity `ω^k` equals `g′(0)` up to
//! an aliasing error of order `q^{−N}`.

use crate::linalg::{cis, C64};
use std::f64::consts::TAU;

/// `g′(0)` for a vector-valued `g`, using `nodes` points on `|t| = rho`.
pub fn derivative<E, G>(g: G, rho: f64, nodes: usize, dim: usize) -> Result<Vec<C64>, E>
where
    G: Fn(C64) -> Result<Vec<C64>, E>,
{
    let mut acc = vec![C64::new(0.0, 0.0); dim];
    for k in 0..nodes {
        let t = cis(TAU * k as f64 / nodes as f64) * rho;
        let v = g(t)?;
        for (a, vi) in acc.iter_mut().zip(v) {
            *a += vi / t;
        }
    }
    let n = nodes as f64;
    Ok(acc.into_iter().map(|a| a / n).collect())
}
