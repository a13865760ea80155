//! The key domain `Ω` of spectral parameters for which `Φ_λ` maps `B_r` into
//! itself, and the spectrum check `σ(h) = σ(h′(0))`.

use super::solver::{phi, SolverConfig};
use crate::error::{Error, Result};
use crate::linalg::{cis, eigenvalues, norm, scale, CMatrix, C64};
use crate::map::HoloMap;
use crate::oracle::sampler::unit_vector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KeyDomain {
    pub r: f64,
    /// `Ω₁ = {|λ| < disc_radius}`.
    pub disc_radius: f64,
    /// `Ω₂ = {λ ≠ 0 : |arg λ| < sector_half_angle}`.
    pub sector_half_angle: f64,
}

impl KeyDomain {
    pub fn contains(&self, lambda: C64) -> bool {
        lambda.norm() < self.disc_radius || (lambda.norm() > 0.0 && lambda.arg().abs() < self.sector_half_angle)
    }
}

pub fn key_domain(r: f64) -> Result<KeyDomain> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("key domain needs 0 < r < 1, got {r}")));
    }
    Ok(KeyDomain {
        r,
        disc_radius: 0.5 * (1.0 - r) / (1.0 + r),
        sector_half_angle: ((1.0 - r * r) / (1.0 + r * r)).asin(),
    })
}

/// `count` spectral parameters in `Ω` inset by 1%: disc boundary and interior,
/// sector edges and interior over moduli from 10⁻² to 10².
pub fn omega_samples(dom: &KeyDomain, count: usize) -> Vec<C64> {
    let inset = 0.99;
    let quarter = (count / 4).max(1);
    let mut out = Vec::with_capacity(count);
    for k in 0..quarter {
        let t = std::f64::consts::TAU * (k as f64 + 0.5) / quarter as f64;
        out.push(cis(t) * (inset * dom.disc_radius));
        out.push(cis(-t) * (0.5 * dom.disc_radius * (k as f64 + 1.0) / quarter as f64));
    }
    let rest = count.saturating_sub(out.len());
    let edge = rest / 2;
    for k in 0..rest {
        let modulus = 10f64.powf(-2.0 + 4.0 * (k as f64 + 0.5) / rest as f64);
        let angle = if k < edge {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * inset * dom.sector_half_angle
        } else {
            dom.sector_half_angle * (2.0 * ((k - edge) as f64 + 0.5) / (rest - edge) as f64 - 1.0) * inset
        };
        out.push(cis(angle) * modulus);
    }
    out.truncate(count);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeyDomainReport {
    pub domain: KeyDomain,
    pub lambdas: usize,
    pub points_per_lambda: usize,
    /// Largest `‖Φ_λ(y)‖ − r`.
    pub max_excess: f64,
    pub unconverged: usize,
    pub passed: bool,
}

pub const KEY_DOMAIN_SLACK: f64 = 1e-8;

/// Checks `‖Φ_λ(y)‖ ≤ r + 1e-8` for sphere points `‖y‖ = r` and `λ` sampled in
/// `Ω`; requires `h(0) = 0` and `h′(0) = −I`.
pub fn verify_key_domain(map: &HoloMap, r: f64, lambda_samples: usize, points: usize, seed: u64, cfg: &SolverConfig) -> Result<KeyDomainReport> {
    let n = map.dim();
    if norm(&map.at_zero()?) > 1e-12 {
        return Err(Error::Precondition("key domain needs h(0) = 0".into()));
    }
    let a = map.derivative_at_zero()?;
    let defect = (&a + CMatrix::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if defect > 1e-8 {
        return Err(Error::Precondition(format!("key domain needs h′(0) = −I (defect {defect:e})")));
    }
    let dom = key_domain(r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ys: Vec<Vec<C64>> = (0..points).map(|_| scale(C64::new(r, 0.0), &unit_vector(&mut rng, n))).collect();
    let lambdas = omega_samples(&dom, lambda_samples);
    let mut max_excess = f64::NEG_INFINITY;
    let mut unconverged = 0;
    for &lambda in &lambdas {
        for y in &ys {
            let t = phi(map, lambda, y, f64::INFINITY, cfg)?;
            if !t.converged {
                unconverged += 1;
            }
            max_excess = max_excess.max(norm(&t.solution) - r);
        }
    }
    Ok(KeyDomainReport {
        domain: dom,
        lambdas: lambdas.len(),
        points_per_lambda: points,
        max_excess,
        unconverged,
        passed: unconverged == 0 && max_excess <= KEY_DOMAIN_SLACK,
    })
}

/// True iff `λ` is at distance > 1e-10 from every eigenvalue of `h′(0)`.
pub fn spectrum_check(map: &HoloMap, lambda: C64) -> Result<bool> {
    let ev = eigenvalues(&map.derivative_at_zero()?);
    Ok(ev.iter().all(|e| (e - lambda).norm() > 1e-10))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{Monomial, PolyMap};
    use nalgebra::DVector;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn scalar_poly(coefs: &[C64]) -> HoloMap {
        let comp = coefs.iter().enumerate().map(|(k, &a)| Monomial::new(vec![k as u32], a)).collect();
        HoloMap::poly(1.0, PolyMap::new(vec![comp]).unwrap()).unwrap()
    }

    #[test]
    fn key_domain_values() {
        let d = key_domain(0.5).unwrap();
        assert!((d.disc_radius - 1.0 / 6.0).abs() < 1e-15);
        assert!((d.sector_half_angle - 0.6f64.asin()).abs() < 1e-15);
        assert!((d.sector_half_angle - 0.6435).abs() < 1e-4);
        let d = key_domain(1e-9).unwrap();
        assert!((d.disc_radius - 0.5).abs() < 1e-8 && (d.sector_half_angle - std::f64::consts::FRAC_PI_2).abs() < 1e-4);
        let d = key_domain(1.0 - 1e-9).unwrap();
        assert!(d.disc_radius < 1e-9 && d.sector_half_angle < 1e-4);
        assert!(key_domain(1.0).is_err() && key_domain(0.0).is_err());
    }

    #[test]
    fn key_domain_shrinks() {
        let mut prev = key_domain(0.005).unwrap();
        for k in 2..=100 {
            let d = key_domain(k as f64 * 0.00995).unwrap();
            assert!(d.disc_radius < prev.disc_radius && d.sector_half_angle < prev.sector_half_angle);
            prev = d;
        }
    }

    #[test]
    fn samples_lie_in_domain() {
        let d = key_domain(0.6).unwrap();
        let s = omega_samples(&d, 64);
        assert_eq!(s.len(), 64);
        assert!(s.iter().all(|&l| d.contains(l)));
    }

    #[test]
    fn negative_identity_closed_form() {
        let h = scalar_poly(&[c(0.0, 0.0), c(-1.0, 0.0)]);
        let cfg = SolverConfig::default();
        let lambda = c(0.3, 0.1);
        let y = [c(0.2, 0.4)];
        let t = phi(&h, lambda, &y, 1.0, &cfg).unwrap();
        assert!((t.solution[0] - lambda * y[0] / (lambda + 1.0)).norm() < 1e-14);
        let rep = verify_key_domain(&h, 0.9, 16, 8, 1, &cfg).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn key_domain_preconditions() {
        let h = scalar_poly(&[c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!(matches!(verify_key_domain(&h, 0.5, 4, 4, 1, &SolverConfig::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn spectrum_examples() {
        let h = scalar_poly(&[c(0.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        assert!(!spectrum_check(&h, c(2.0, 0.0)).unwrap());
        assert!(spectrum_check(&h, c(3.0, 0.0)).unwrap());
        let a = CMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0)]));
        let lin = HoloMap::linear(1.0, &a).unwrap();
        assert!(!spectrum_check(&lin, c(0.0, 1.0)).unwrap());
    }
}
