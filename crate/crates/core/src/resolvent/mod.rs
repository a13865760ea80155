//! Resolvents, semi-completeness radii, null points and the key domain.

mod keydomain;
mod mu;
mod solver;

pub use keydomain::{key_domain, omega_samples, spectrum_check, verify_key_domain, KeyDomain, KeyDomainReport, KEY_DOMAIN_SLACK};
pub use mu::{
    cubic_roots, fixp_radius, mu_profile, nullp_radius, nullp_radius_stable, omega_of_r, semi_complete_interval, CubicRoots,
    FixpRadius, MuBranch, MuParams, MuProfile, ROOT_AGREEMENT,
};
pub use solver::{
    certify, fixed_point_selfmap, iterate_phi, null_point, phi, solve_certified, solve_resolvent, FixedPointReport, Method,
    NullPointReport, PhiTrace, SolveTrace, SolverConfig,
};
