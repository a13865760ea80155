//! Seeded random maps for the verification suites.

use crate::linalg::{CMatrix, C64};
use crate::map::{HoloMap, Monomial, PolyMap};
use crate::scalar::ScalarFn;
use rand::Rng;

/// Uniform point of the square `[−s, s]²` in ℂ.
pub fn random_c64<R: Rng>(rng: &mut R, s: f64) -> C64 {
    C64::new(rng.gen_range(-s..=s), rng.gen_range(-s..=s))
}

/// Random exponent vector of length `n` and total degree `deg`.
fn random_idx<R: Rng>(rng: &mut R, n: usize, deg: u32) -> Vec<u32> {
    let mut idx = vec![0; n];
    for _ in 0..deg {
        idx[rng.gen_range(0..n)] += 1;
    }
    idx
}

/// Scalar polynomial of degree `1..=max_deg` on a disc of radius in `[0.5, 2]`.
pub fn scalar_poly<R: Rng>(rng: &mut R, max_deg: usize) -> ScalarFn {
    let deg = rng.gen_range(1..=max_deg);
    let radius: f64 = rng.gen_range(0.5..=2.0);
    let coefs = (0..=deg).map(|k| random_c64(rng, 1.0) / radius.powi(k as i32)).collect();
    ScalarFn::poly(coefs, radius).expect("finite coefficients on a finite disc")
}

/// `h(0) + A x + q(x)` with entries of size `scale` and up to `extra` monomials
/// of degree `2..=max_deg` per component.
pub fn poly_map<R: Rng>(rng: &mut R, n: usize, max_deg: u32, extra: usize, scale: f64) -> PolyMap {
    let comps = (0..n)
        .map(|_| {
            let mut comp = vec![Monomial::new(vec![0; n], random_c64(rng, scale))];
            for j in 0..n {
                let mut idx = vec![0; n];
                idx[j] = 1;
                comp.push(Monomial::new(idx, random_c64(rng, scale)));
            }
            for _ in 0..rng.gen_range(0..=extra) {
                let deg = rng.gen_range(2..=max_deg.max(2));
                comp.push(Monomial::new(random_idx(rng, n, deg), random_c64(rng, scale)));
            }
            comp
        })
        .collect();
    PolyMap::new(comps).expect("generated polynomial is valid")
}

/// `h(x) = b − κx + iSx + q(x)` on the unit ball with `S` Hermitian and
/// `‖b‖ < κ/4`, so that `L = −κ` and `L + 4‖h(0)‖ < 0`. The quadratic part has
/// coefficient mass below `(κ − ‖b‖)/2`, which keeps `Re⟨h(x), x⟩ < 0` on the sphere.
pub fn dissipative_map<R: Rng>(rng: &mut R, n: usize) -> HoloMap {
    let kappa = rng.gen_range(1.0..=2.0);
    let mut b: Vec<C64> = (0..n).map(|_| random_c64(rng, 1.0)).collect();
    let bn = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = rng.gen_range(0.05..=0.9) * kappa / 4.0;
    for z in &mut b {
        *z *= target / bn;
    }
    let mut s = CMatrix::zeros(n, n);
    for i in 0..n {
        s[(i, i)] = C64::new(rng.gen_range(-1.0..=1.0), 0.0);
        for j in 0..i {
            let v = random_c64(rng, 0.5);
            s[(i, j)] = v;
            s[(j, i)] = v.conj();
        }
    }
    let mass = 0.5 * (kappa - target);
    let quad: Vec<Vec<(Vec<u32>, C64)>> = (0..n)
        .map(|_| (0..2).map(|_| (random_idx(rng, n, 2), random_c64(rng, 1.0))).collect())
        .collect();
    let total: f64 = quad.iter().flatten().map(|(_, c)| c.norm()).sum();
    let comps = (0..n)
        .map(|i| {
            let mut comp = vec![Monomial::new(vec![0; n], b[i])];
            for j in 0..n {
                let mut idx = vec![0; n];
                idx[j] = 1;
                let diag = if i == j { C64::new(-kappa, 0.0) } else { C64::new(0.0, 0.0) };
                comp.push(Monomial::new(idx, diag + C64::new(0.0, 1.0) * s[(i, j)]));
            }
            for (idx, c) in &quad[i] {
                comp.push(Monomial::new(idx.clone(), c * (mass / total)));
            }
            comp
        })
        .collect();
    HoloMap::poly(1.0, PolyMap::new(comps).expect("valid")).expect("valid")
}

/// Scalar `h(z) = a₁z + a₂z² + a₃z³` on the unit disc with `Re a₁ < 1`.
pub fn bloch_map<R: Rng>(rng: &mut R) -> HoloMap {
    let a1 = C64::new(rng.gen_range(-1.0..=0.5), rng.gen_range(-1.0..=1.0));
    let a2 = random_c64(rng, 0.3);
    let a3 = random_c64(rng, 0.2);
    let comp = vec![Monomial::new(vec![1], a1), Monomial::new(vec![2], a2), Monomial::new(vec![3], a3)];
    HoloMap::poly(1.0, PolyMap::new(vec![comp]).expect("valid")).expect("valid")
}
