//! Randomized invariants over the closed forms and solvers.

use numrange::bloch::{maximizer, r_star, rho, rho_s, s_star, BlochInputs};
use numrange::geometry::{spiral_radius, spiral_radius_bisect, starlike_radius};
use numrange::linalg::C64;
use numrange::resolvent::{mu_profile, null_point, nullp_radius, solve_resolvent, MuBranch, MuParams, SolverConfig};
use numrange::scalar::km_factor;
use numrange::{HoloMap, Monomial, PolyMap};
use proptest::prelude::*;

fn affine(b: C64, a: C64, q: C64) -> HoloMap {
    let comp = vec![Monomial::new(vec![0], b), Monomial::new(vec![1], a), Monomial::new(vec![2], q)];
    HoloMap::poly(1.0, PolyMap::new(vec![comp]).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn radii_even_bounded_and_consistent(t in -1.55f64..1.55) {
        let s = starlike_radius(t).unwrap();
        prop_assert_eq!(s, starlike_radius(-t).unwrap());
        prop_assert!(s >= 0.5f64.sqrt() - 1e-15 && s <= 1.0);
        let r = spiral_radius(t).unwrap();
        prop_assert!(r > 0.0 && r <= 1.0);
        prop_assert!((r - spiral_radius_bisect(t).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn km_factor_at_least_koebe_lower(t in -3.0f64..3.0, r in 0.0f64..0.99) {
        // 2r(1 − r cos θ)/(1 − r²) ≥ 2r(1 − r)/(1 − r²) = 2r/(1 + r)
        let k = km_factor(t, r, 1.0).unwrap();
        prop_assert!(k >= 2.0 * r / (1.0 + r) - 1e-12);
    }

    #[test]
    fn bloch_root_and_maximizer(theta in 0.05f64..1.5, lip in -2.0f64..0.9, delta in 0.01f64..3.0) {
        let inp = BlochInputs::new(theta, lip, delta).unwrap();
        let rs = r_star(&inp).unwrap();
        prop_assume!(rs.root_found);
        prop_assert!(rs.value > 0.0 && rs.value < 1.0);
        prop_assert!(rho(&inp, rs.value).unwrap().abs() <= 1e-9);
        if let (Some(c), Some(b)) = (rs.closed_form, rs.bisection) {
            prop_assert!((c - b).abs() <= 1e-8 || rs.discrepancy.is_some());
        }
        let (r0, rho0) = maximizer(&inp).unwrap();
        prop_assert!(r0 > 0.0 && r0 < rs.value);
        for k in 1..50 {
            let r = rs.value * k as f64 / 50.0;
            prop_assert!(rho(&inp, r).unwrap() <= rho0 + 1e-12);
        }
    }

    #[test]
    fn bloch_s_star_inside_and_rho_s_below_rho(theta in 0.05f64..1.5, lip in -2.0f64..0.9, delta in 0.01f64..3.0, u in 0.05f64..0.95, v in 0.05f64..1.0) {
        let inp = BlochInputs::new(theta, lip, delta).unwrap();
        let rs = r_star(&inp).unwrap();
        prop_assume!(rs.root_found);
        if let Ok(ss) = s_star(&inp) {
            prop_assert!(ss.value > 0.0 && ss.value < rs.value);
        }
        let s = u * rs.value;
        let r = (v * s).min(s);
        prop_assert!(rho_s(&inp, s, r).unwrap() <= rho(&inp, r).unwrap() + 1e-12);
    }

    #[test]
    fn interior_roots_vanish(big_r in 0.5f64..2.0, c in 0.01f64..0.5, lip in -3.0f64..0.5, b in 0.0f64..2.0) {
        let Ok(p) = MuParams::new(big_r, lip, b, c) else { return Ok(()) };
        let prof = mu_profile(&p).unwrap();
        prop_assume!(prof.branch == MuBranch::InteriorMin);
        // two roots exactly when the interior minimum is negative
        prop_assert_eq!(prof.roots.is_some(), prof.mu_at_r_star.unwrap() < 0.0);
        let Some((r1, r2)) = prof.roots else { return Ok(()) };
        prop_assert!(0.0 < r1 && r1 < r2 && r2 < big_r);
        prop_assert!(p.mu(r1).abs() <= 1e-10 && p.mu(r2).abs() <= 1e-10);
    }

    #[test]
    fn null_point_inside_radius(kappa in 1.0f64..2.0, br in -0.2f64..0.2, bi in -0.2f64..0.2, q in 0.0f64..0.3) {
        // h(z) = b − κz + q z² with |b| < κ/4 and small q
        let b = C64::new(br, bi) * (kappa / 4.0) / 0.3;
        let h = affine(b, C64::new(-kappa, 0.0), C64::new(q * (kappa - b.norm()) / 2.0, 0.0));
        let rep = null_point(&h, 1.0, &SolverConfig::default()).unwrap();
        let bound = nullp_radius(rep.c, rep.lip).unwrap();
        prop_assert!(rep.h_at_limit <= 1e-9);
        prop_assert!(rep.limit_norm <= bound + 1e-9);
    }

    #[test]
    fn resolvent_solution_satisfies_equation(lr in 0.5f64..4.0, li in -2.0f64..2.0, zr in -0.3f64..0.3, zi in -0.3f64..0.3) {
        // h(x) = −x + x²/4, so λx − h(x) = z is well posed on the unit disc
        let h = affine(C64::new(0.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.25, 0.0));
        let lambda = C64::new(lr, li);
        let z = C64::new(zr, zi);
        let t = solve_resolvent(&h, lambda, &[z], 1.0, &SolverConfig::default()).unwrap();
        prop_assert!(t.converged);
        let x = t.solution[0];
        let lhs = lambda * x - (-x + x * x / 4.0);
        prop_assert!((lhs - z).norm() <= 1e-9);
    }
}
