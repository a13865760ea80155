//! Radii of starlikeness and spirallikeness, and a numerical check of
//! `μ`-spirallikeness through the generator `h = μ f′(x)⁻¹ f(x)`.

use crate::error::{Error, Result};
use crate::linalg::{condition_number, norm, pairing, scale, solve, CMatrix, C64};
use crate::map::{cauchy, HoloMap, ORIGIN_NODES};
use crate::oracle::sampler::{sanitize, sphere_sup};
use crate::oracle::{ladder, OracleConfig};
use crate::roots::bisect;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

/// Margin below which the spirallike check fails.
pub const MARGIN_TOL: f64 = 1e-6;

fn check_angle(theta: f64) -> Result<()> {
    if !(theta.abs() < FRAC_PI_2) {
        return Err(Error::Domain(format!("need |θ| < π/2, got {theta}")));
    }
    Ok(())
}

/// `[√2 cos(|θ| − π/4)]⁻¹`: an `e^{iθ}`-spirallike map is starlike on this ball.
pub fn starlike_radius(theta: f64) -> Result<f64> {
    check_angle(theta)?;
    // √2 cos(t − π/4) = cos t + sin t, exact at t = 0
    let t = theta.abs();
    Ok(1.0 / (t.cos() + t.sin()))
}

/// `(1 − |sin θ|)/cos θ`: a starlike map is `e^{iθ}`-spirallike on this ball.
pub fn spiral_radius(theta: f64) -> Result<f64> {
    check_angle(theta)?;
    Ok((1.0 - theta.sin().abs()) / theta.cos())
}

/// `2r(1 − r cos θ) − cos θ(1 − r²)`, negative at 0 and positive at 1 for `θ ≠ 0`.
pub fn spiral_phi(theta: f64, r: f64) -> f64 {
    let c = theta.cos();
    2.0 * r * (1.0 - r * c) - c * (1.0 - r * r)
}

/// Root of [`spiral_phi`] in `(0, 1)` by bisection; `θ = 0` gives the double root 1.
pub fn spiral_radius_bisect(theta: f64) -> Result<f64> {
    check_angle(theta)?;
    if theta == 0.0 {
        return Ok(1.0);
    }
    bisect(|r| spiral_phi(theta, r), 0.0, 1.0, 0.0)
}

/// Pointwise evaluator of `h(x) = μ f′(x)⁻¹ f(x)`.
#[derive(Debug, Clone)]
pub struct Generator<'a> {
    f: &'a HoloMap,
    mu: C64,
}

/// Tolerance on `h(0) = 0` and `h′(0) = μI`.
pub const GENERATOR_TOL: f64 = 1e-8;

/// Builds the generator of `f` for `μ` and checks its normalization at 0.
pub fn extract_generator(f: &HoloMap, mu: C64) -> Result<Generator<'_>> {
    let f0 = norm(&f.at_zero()?);
    if f0 > GENERATOR_TOL {
        return Err(Error::Precondition(format!("need f(0) = 0, got ‖f(0)‖ = {f0:e}")));
    }
    let d = f.derivative_at_zero()?;
    if !(condition_number(&d) < 1e12) {
        return Err(Error::JacobianSingular("f′(0) is not invertible".into()));
    }
    let g = Generator { f, mu };
    let h0 = norm(&g.eval(&vec![C64::new(0.0, 0.0); f.dim()])?);
    let dh = g.derivative_at_zero()?;
    let n = f.dim();
    let defect = (dh - CMatrix::identity(n, n) * mu).iter().map(|z| z.norm()).fold(h0, f64::max);
    if defect > GENERATOR_TOL {
        return Err(Error::ConditionFailed(format!("generator normalization off by {defect:e}")));
    }
    Ok(g)
}

impl Generator<'_> {
    pub fn mu(&self) -> C64 {
        self.mu
    }

    pub fn eval(&self, x: &[C64]) -> Result<Vec<C64>> {
        let j = self.f.jacobian(x)?;
        let fx = self.f.eval(x)?;
        let y = solve(&j, &fx).ok_or_else(|| Error::JacobianSingular(format!("f′(x) singular at ‖x‖ = {}", norm(x))))?;
        Ok(scale(self.mu, &y))
    }

    /// `h′(0)` by Cauchy integrals on `|t| = R/4`.
    pub fn derivative_at_zero(&self) -> Result<CMatrix> {
        let n = self.f.dim();
        let rho = if self.f.radius().is_finite() { self.f.radius() / 4.0 } else { 0.25 };
        let mut out = CMatrix::zeros(n, n);
        for j in 0..n {
            let col = cauchy::derivative(
                |t| {
                    let mut y = vec![C64::new(0.0, 0.0); n];
                    y[j] = t;
                    self.eval(&y)
                },
                rho,
                ORIGIN_NODES,
                n,
            )?;
            for (i, v) in col.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpiralVerdict {
    /// `μ` normalized to modulus 1.
    pub mu: C64,
    pub r: f64,
    pub passed: bool,
    /// Smallest `Re⟨h(x), x⟩` found.
    pub worst_margin: f64,
    pub worst_radius: f64,
    /// `(ρ, inf over ‖x‖ = ρ)` on the ladder `r(1 − 2^{−k})`.
    pub rungs: Vec<(f64, f64)>,
    pub samples: usize,
}

/// Checks `Re⟨h(x), x⟩ ≥ −1e-6` with `h = μ f′(x)⁻¹ f(x)` on spheres inside `B_r`;
/// `μ = 1` is the starlikeness check. Points where `f′` is singular are skipped.
pub fn verify_spirallike_on_ball(f: &HoloMap, mu: C64, r: f64, cfg: &OracleConfig) -> Result<SpiralVerdict> {
    if !(mu.re > 0.0) || !mu.norm().is_finite() {
        return Err(Error::Domain(format!("need Re μ > 0, got {mu}")));
    }
    if !(r > 0.0 && r <= f.radius()) {
        return Err(Error::Domain(format!("radius {r} outside (0, {}]", f.radius())));
    }
    let mu = mu / mu.norm();
    let g = extract_generator(f, mu)?;
    let objective = |x: &[C64]| match g.eval(x) {
        Ok(hx) => -pairing(&hx, x).re,
        Err(_) => f64::NAN,
    };
    let mut rungs = Vec::new();
    let mut samples = 0;
    let (mut worst, mut worst_radius) = (f64::INFINITY, 0.0);
    for rho in ladder(r, cfg.ladder_rungs) {
        let est = sphere_sup(f.dim(), rho, |x| sanitize(objective(x)), &cfg.sampler);
        samples += est.samples;
        let inf = -est.value;
        rungs.push((rho, inf));
        if inf < worst {
            worst = inf;
            worst_radius = rho;
        }
    }
    Ok(SpiralVerdict { mu, r, passed: worst >= -MARGIN_TOL, worst_margin: worst, worst_radius, rungs, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cis;
    use crate::map::{Builtin, Monomial, PolyMap};
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn spiral(theta: f64, dim: usize) -> HoloMap {
        HoloMap::builtin(dim, 1.0, Builtin::SpiralRef { theta }).unwrap()
    }

    #[test]
    fn radii_values() {
        assert!((starlike_radius(FRAC_PI_4).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(starlike_radius(0.0).unwrap(), 1.0);
        for k in 0..20 {
            let t = -1.5 + 0.15 * k as f64;
            let via_cos = 1.0 / (2f64.sqrt() * (t.abs() - FRAC_PI_4).cos());
            assert!((starlike_radius(t).unwrap() - via_cos).abs() < 1e-14);
        }
        assert!((spiral_radius(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((spiral_radius(FRAC_PI_4).unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!(spiral_radius(FRAC_PI_2 - 1e-9).unwrap() < 1e-8);
        assert!(starlike_radius(FRAC_PI_2).is_err() && spiral_radius(-2.0).is_err());
        let best = (0..1000).map(|k| starlike_radius(-1.5 + 3.0 * k as f64 / 1000.0).unwrap()).fold(f64::INFINITY, f64::min);
        assert!(best >= 0.5f64.sqrt() - 1e-15);
    }

    #[test]
    fn radii_even_and_monotone() {
        let mut prev = f64::INFINITY;
        for k in 0..100 {
            let t = 1.55 * k as f64 / 100.0;
            assert_eq!(starlike_radius(t).unwrap(), starlike_radius(-t).unwrap());
            assert_eq!(spiral_radius(t).unwrap(), spiral_radius(-t).unwrap());
            let s = spiral_radius(t).unwrap();
            assert!(s < prev);
            prev = s;
        }
    }

    #[test]
    fn spiral_bisection_agrees() {
        for k in 1..50 {
            let t = -1.5 + 3.0 * k as f64 / 50.0;
            if t == 0.0 {
                continue;
            }
            assert!((spiral_radius_bisect(t).unwrap() - spiral_radius(t).unwrap()).abs() < 1e-10);
        }
        assert_eq!(spiral_radius_bisect(0.0).unwrap(), 1.0);
    }

    #[test]
    fn identity_generator() {
        let id = HoloMap::linear(1.0, &CMatrix::identity(2, 2)).unwrap();
        let g = extract_generator(&id, C64::new(1.0, 0.0)).unwrap();
        let x = [C64::new(0.3, 0.1), C64::new(-0.2, 0.4)];
        let hx = g.eval(&x).unwrap();
        assert!(hx.iter().zip(&x).all(|(a, b)| (a - b).norm() < 1e-15));
    }

    #[test]
    fn koebe_generator() {
        let f = spiral(0.0, 1);
        let g = extract_generator(&f, C64::new(1.0, 0.0)).unwrap();
        for k in 0..100 {
            let z = cis(0.37 * k as f64) * (0.95 * (k as f64 + 1.0) / 100.0);
            let expect = z * (1.0 - z) / (1.0 + z);
            assert!((g.eval(&[z]).unwrap()[0] - expect).norm() < 1e-9, "z = {z}");
        }
    }

    #[test]
    fn spiral_generator_normalized() {
        for &t in &[FRAC_PI_6, 1.2] {
            for dim in [1, 2] {
                let f = spiral(t, dim);
                let g = extract_generator(&f, cis(t)).unwrap();
                let d = g.derivative_at_zero().unwrap();
                assert!((d[(0, 0)] - cis(t)).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn singular_derivative_rejected() {
        // f(x) = x² has f′(0) = 0
        let p = PolyMap::new(vec![vec![Monomial::new(vec![2], C64::new(1.0, 0.0))]]).unwrap();
        let f = HoloMap::poly(1.0, p).unwrap();
        assert!(matches!(extract_generator(&f, C64::new(1.0, 0.0)), Err(Error::JacobianSingular(_))));
    }

    #[test]
    fn spiral_ref_is_spirallike_on_ball() {
        let cfg = OracleConfig::default();
        let t = FRAC_PI_3;
        let v = verify_spirallike_on_ball(&spiral(t, 1), cis(t), 1.0, &cfg).unwrap();
        assert!(v.passed, "{v:?}");
        assert!((v.mu - cis(t)).norm() < 1e-15);
    }

    #[test]
    fn starlike_sharpness_one_dim() {
        let cfg = OracleConfig::default();
        for &t in &[FRAC_PI_6, FRAC_PI_4] {
            let f = spiral(t, 1);
            let rs = starlike_radius(t).unwrap();
            let one = C64::new(1.0, 0.0);
            assert!(verify_spirallike_on_ball(&f, one, 0.99 * rs, &cfg).unwrap().passed);
            assert!(!verify_spirallike_on_ball(&f, one, 1.01 * rs, &cfg).unwrap().passed);
        }
    }

    #[test]
    fn spiral_sharpness_two_dim() {
        let cfg = OracleConfig::default();
        let f = spiral(0.0, 2);
        let t = FRAC_PI_4;
        let rs = spiral_radius(t).unwrap();
        assert!(verify_spirallike_on_ball(&f, cis(t), 0.99 * rs, &cfg).unwrap().passed);
        assert!(!verify_spirallike_on_ball(&f, cis(t), 1.01 * rs, &cfg).unwrap().passed);
    }

    #[test]
    fn mu_normalized_and_checked() {
        let cfg = OracleConfig::default();
        let f = spiral(0.0, 1);
        let v = verify_spirallike_on_ball(&f, C64::new(3.0, 0.0), 0.5, &cfg).unwrap();
        assert_eq!(v.mu, C64::new(1.0, 0.0));
        assert!(verify_spirallike_on_ball(&f, C64::new(-1.0, 0.0), 0.5, &cfg).is_err());
        assert!(verify_spirallike_on_ball(&f, C64::new(1.0, 0.0), 1.5, &cfg).is_err());
    }
}
