//! Curvature invariants of submanifolds tangent to ξ in locally conformal
//! almost cosymplectic spaces of pointwise constant φ-sectional curvature.
//!
//! The pipeline is pointwise and algebraic:
//!
//! * [`ambient`] holds (φ, ξ, η, c, f, f′) and evaluates R̃;
//! * [`subpoint`] holds frames and σ at a point, and classifies the point;
//! * [`invariants`] builds the induced curvature through the Gauss equation
//!   and computes Ricci, k-Ricci and θ_k;
//! * [`inequalities`] evaluates every scalar, Ricci and k-Ricci bound with
//!   slack accounting and equality diagnosis;
//! * [`immersion`] differentiates concrete immersions into the flat model
//!   and provides an independent finite-difference curvature oracle;
//! * [`scenario`] and [`fuzz`] drive all of the above from JSON files.

pub mod ambient;
pub mod error;
pub mod fuzz;
pub mod immersion;
pub mod inequalities;
pub mod invariants;
pub mod linalg;
pub mod scenario;
pub mod subpoint;
pub mod tol;

pub use error::{Error, Result};
