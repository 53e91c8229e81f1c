//! Tolerances shared across the crate.

/// Algebraic identities of the ambient structure and frame orthonormality.
pub const STRUCTURAL: f64 = 1e-12;

/// Equalities derived from several contractions (Gauss cross-check, frame
/// invariance, unit-vector preconditions).
pub const DERIVED: f64 = 1e-10;

/// `holds` threshold on slack normalized by `1 + |lhs| + |rhs|`.
pub const HOLDS: f64 = 1e-9;

/// Equality threshold, used both for slack and for the characterizing
/// conditions on second fundamental form coefficients.
pub const EQUALITY: f64 = 1e-7;

/// Eigenvalue clustering for the D / D-perp split of a CR point.
pub const CR_CLUSTER: f64 = 1e-7;

/// Default angular tolerance for classification.
pub const ANGLE: f64 = 1e-6;

/// Relative threshold below which a Gram-Schmidt residual counts as dependent.
pub const RANK: f64 = 1e-9;

/// Gauss oracle agreement between the algebraic and finite-difference routes.
pub const GAUSS_ORACLE: f64 = 5e-4;
