//! Pointwise almost contact metric data and the curvature tensor of a
//! locally conformal almost cosymplectic space of pointwise constant
//! φ-sectional curvature.
//!
//! All ambient data lives in a g-orthonormal basis, so the metric is the
//! Euclidean dot product and η is the coordinate covector of ξ.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// The three scalars driving the curvature tensor at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureParams {
    /// Pointwise φ-sectional curvature.
    pub c: f64,
    /// The function with ω = f η.
    pub f: f64,
    /// ξ f.
    pub f_prime: f64,
}

impl CurvatureParams {
    pub fn new(c: f64, f: f64, f_prime: f64) -> Self {
        Self { c, f, f_prime }
    }

    pub fn flat() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    /// Coefficient (c - 3f²)/4 of the metric block.
    pub fn metric_coeff(&self) -> f64 {
        (self.c - 3.0 * self.f * self.f) / 4.0
    }

    /// Coefficient (c + f²)/4 of the φ block.
    pub fn phi_coeff(&self) -> f64 {
        (self.c + self.f * self.f) / 4.0
    }

    /// Coefficient (c + f²)/4 + f′ of the η block.
    pub fn eta_coeff(&self) -> f64 {
        self.phi_coeff() + self.f_prime
    }

    pub fn is_flat(&self) -> bool {
        self.c == 0.0 && self.f == 0.0 && self.f_prime == 0.0
    }

    fn is_finite(&self) -> bool {
        self.c.is_finite() && self.f.is_finite() && self.f_prime.is_finite()
    }
}

/// Unvalidated structure data, e.g. straight from a scenario file.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureData {
    pub m: usize,
    pub phi: DMatrix<f64>,
    pub xi: DVector<f64>,
    pub eta: DVector<f64>,
    pub params: CurvatureParams,
}

impl StructureData {
    /// The canonical structure on R^{2m+1} in coordinates
    /// (x₁..x_m, y₁..y_m, z): φ∂xᵢ = ∂yᵢ, φ∂yᵢ = -∂xᵢ, ξ = ∂z, η = dz.
    pub fn standard(m: usize, params: CurvatureParams) -> Self {
        let dim = 2 * m + 1;
        let mut phi = DMatrix::zeros(dim, dim);
        for i in 0..m {
            phi[(m + i, i)] = 1.0;
            phi[(i, m + i)] = -1.0;
        }
        let mut xi = DVector::zeros(dim);
        xi[2 * m] = 1.0;
        Self {
            m,
            phi,
            eta: xi.clone(),
            xi,
            params,
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.m + 1
    }
}

/// Identities checked by [`validate_structure`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// φ² = -I + η⊗ξ
    PhiSquared,
    /// η(ξ) = 1
    EtaOfXi,
    /// φξ = 0
    PhiXi,
    /// η∘φ = 0
    EtaPhi,
    /// ⟨X,Y⟩ = ⟨φX,φY⟩ + η(X)η(Y)
    Compatibility,
    /// ⟨X,φY⟩ = -⟨φX,Y⟩
    Skew,
    /// ⟨X,ξ⟩ = η(X)
    XiDual,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub identity: Identity,
    pub max_residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn residual(&self, identity: Identity) -> Option<f64> {
        self.violations
            .iter()
            .find(|v| v.identity == identity)
            .map(|v| v.max_residual)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "no violations");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?} (max residual {:.3e})", v.identity, v.max_residual)?;
        }
        Ok(())
    }
}

fn max_abs_vec(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Checks the almost contact metric identities at [`tol::STRUCTURAL`].
///
/// Dimension mismatches and non-finite entries are errors; violated
/// identities are reported, not raised.
pub fn validate_structure(s: &StructureData) -> Result<ValidationReport> {
    let dim = s.dim();
    if s.m < 2 {
        return Err(Error::Dimension(format!(
            "m = {} but the ambient dimension 2m+1 must be at least 5",
            s.m
        )));
    }
    if s.phi.nrows() != dim || s.phi.ncols() != dim {
        return Err(Error::Dimension(format!(
            "phi is {}x{}, expected {dim}x{dim}",
            s.phi.nrows(),
            s.phi.ncols()
        )));
    }
    if s.xi.len() != dim || s.eta.len() != dim {
        return Err(Error::Dimension(format!(
            "xi has length {}, eta has length {}, expected {dim}",
            s.xi.len(),
            s.eta.len()
        )));
    }
    let finite = s.phi.iter().chain(s.xi.iter()).chain(s.eta.iter()).all(|v| v.is_finite());
    if !finite || !s.params.is_finite() {
        return Err(Error::Data("structure contains NaN or infinite entries".into()));
    }

    let id = DMatrix::<f64>::identity(dim, dim);
    let phi = &s.phi;
    let eta_row = s.eta.transpose();
    let mut report = ValidationReport::default();
    let mut check = |identity, residual: f64| {
        if residual > tol::STRUCTURAL {
            report.violations.push(Violation {
                identity,
                max_residual: residual,
            });
        }
    };

    let phi_sq = phi * phi;
    let target = -&id + &s.xi * &eta_row;
    check(Identity::PhiSquared, crate::linalg::max_abs(&(phi_sq - target)));
    check(Identity::EtaOfXi, (s.eta.dot(&s.xi) - 1.0).abs());
    check(Identity::PhiXi, max_abs_vec(&(phi * &s.xi)));
    check(Identity::EtaPhi, max_abs_vec(&(phi.transpose() * &s.eta)));
    let compat = phi.transpose() * phi + &s.eta * &eta_row - &id;
    check(Identity::Compatibility, crate::linalg::max_abs(&compat));
    check(Identity::Skew, crate::linalg::max_abs(&(phi + phi.transpose())));
    check(Identity::XiDual, max_abs_vec(&(&s.xi - &s.eta)));
    Ok(report)
}

/// A validated ambient structure. Only obtainable through validation, so
/// curvature evaluation never runs on inconsistent data.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientStructure {
    data: StructureData,
}

impl AmbientStructure {
    pub fn new(data: StructureData) -> Result<Self> {
        let report = validate_structure(&data)?;
        if !report.is_empty() {
            return Err(Error::Structure(report));
        }
        Ok(Self { data })
    }

    pub fn standard(m: usize, params: CurvatureParams) -> Result<Self> {
        Self::new(StructureData::standard(m, params))
    }

    pub fn m(&self) -> usize {
        self.data.m
    }

    pub fn dim(&self) -> usize {
        self.data.dim()
    }

    pub fn phi(&self) -> &DMatrix<f64> {
        &self.data.phi
    }

    pub fn xi(&self) -> &DVector<f64> {
        &self.data.xi
    }

    pub fn eta(&self) -> &DVector<f64> {
        &self.data.eta
    }

    pub fn params(&self) -> CurvatureParams {
        self.data.params
    }

    pub fn data(&self) -> &StructureData {
        &self.data
    }

    /// Same φ, ξ, η with different curvature scalars.
    pub fn with_params(&self, params: CurvatureParams) -> Self {
        let mut data = self.data.clone();
        data.params = params;
        Self { data }
    }

    fn check_len(&self, v: &DVector<f64>) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "ambient vector has length {}, expected {}",
                v.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// R̃(X,Y)Z.
    pub fn curvature(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        z: &DVector<f64>,
    ) -> Result<DVector<f64>> {
        self.check_len(x)?;
        self.check_len(y)?;
        self.check_len(z)?;
        Ok(self.curvature_unchecked(x, y, z))
    }

    pub(crate) fn curvature_unchecked(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        z: &DVector<f64>,
    ) -> DVector<f64> {
        let p = self.params();
        let phi = self.phi();
        let (eta, xi) = (self.eta(), self.xi());
        let (phi_x, phi_y, phi_z) = (phi * x, phi * y, phi * z);

        let yz = y.dot(z);
        let xz = x.dot(z);
        let mut out = (x * yz - y * xz) * p.metric_coeff();

        let x_phi_y = x.dot(&phi_y);
        let x_phi_z = x.dot(&phi_z);
        let y_phi_z = y.dot(&phi_z);
        out += (phi_z * (2.0 * x_phi_y) + &phi_y * x_phi_z - &phi_x * y_phi_z) * p.phi_coeff();

        let (ex, ey, ez) = (eta.dot(x), eta.dot(y), eta.dot(z));
        out += (y * (ex * ez) - x * (ey * ez) + xi * (xz * ey - yz * ex)) * p.eta_coeff();
        out
    }

    /// ⟨R̃(X,Y)Z, W⟩; the sectional curvature of an orthonormal pair is
    /// `curvature_form(x, y, y, x)`.
    pub fn curvature_form(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        z: &DVector<f64>,
        w: &DVector<f64>,
    ) -> Result<f64> {
        self.check_len(w)?;
        Ok(self.curvature(x, y, z)?.dot(w))
    }

    /// ⟨R̃(X,φX)φX, X⟩ for a unit X orthogonal to ξ.
    pub fn phi_section_curvature(&self, x: &DVector<f64>) -> Result<f64> {
        self.check_len(x)?;
        let eta_x = self.eta().dot(x);
        let norm = x.norm();
        if eta_x.abs() > tol::DERIVED || (norm - 1.0).abs() > tol::DERIVED {
            return Err(Error::Domain(format!(
                "phi-section needs a unit vector orthogonal to xi (|X| = {norm}, eta(X) = {eta_x})"
            )));
        }
        let phi_x = self.phi() * x;
        Ok(self.curvature_unchecked(x, &phi_x, &phi_x).dot(x))
    }
}
