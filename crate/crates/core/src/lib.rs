//! Numerical ranges of holomorphic maps on Hilbert balls in ℂⁿ: sampling
//! oracles, growth bounds, resolvent and null-point radii, Bloch radii, and
//! starlikeness/spirallikeness radii.

// `!(x < y)` is used on purpose so that NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bloch;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod growth;
pub mod linalg;
pub mod map;
pub mod oracle;
pub mod resolvent;
pub mod roots;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use map::{load_map, BallDomain, Builtin, HoloMap, Monomial, PolyMap};
