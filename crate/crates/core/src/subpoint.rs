//! Pointwise submanifold data: orthonormal frames with ξ tangent, the
//! second fundamental form, mean curvature, and the tangential/normal split
//! of φ used to classify the submanifold.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::ambient::AmbientStructure;
use crate::error::{Error, Result};
use crate::linalg;
use crate::tol;

/// σ^r_{ij} in orthonormal tangent/normal frames, stored as one symmetric
/// n×n matrix per normal direction r (this is also the shape operator A_r).
#[derive(Clone, Debug, PartialEq)]
pub struct SecondFundamentalForm {
    n: usize,
    components: Vec<DMatrix<f64>>,
}

impl SecondFundamentalForm {
    pub fn zeros(n: usize, codim: usize) -> Self {
        Self {
            n,
            components: vec![DMatrix::zeros(n, n); codim],
        }
    }

    /// σ^r = λ_r I for each normal direction.
    pub fn umbilic(n: usize, lambdas: &[f64]) -> Self {
        Self {
            n,
            components: lambdas
                .iter()
                .map(|&l| DMatrix::identity(n, n) * l)
                .collect(),
        }
    }

    /// Accepts one n×n matrix per normal direction; each must be symmetric
    /// and finite.
    pub fn from_components(n: usize, components: Vec<DMatrix<f64>>) -> Result<Self> {
        for (r, a) in components.iter().enumerate() {
            if a.nrows() != n || a.ncols() != n {
                return Err(Error::Dimension(format!(
                    "sigma component {r} is {}x{}, expected {n}x{n}",
                    a.nrows(),
                    a.ncols()
                )));
            }
            if a.iter().any(|v| !v.is_finite()) {
                return Err(Error::Data(format!("sigma component {r} is not finite")));
            }
            let asym = linalg::max_abs(&(a - a.transpose()));
            if asym > tol::STRUCTURAL * (1.0 + linalg::max_abs(a)) {
                return Err(Error::Domain(format!(
                    "sigma component {r} is not symmetric (max asymmetry {asym:.3e})"
                )));
            }
        }
        Ok(Self { n, components })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn codim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, r: usize) -> &DMatrix<f64> {
        &self.components[r]
    }

    pub fn components(&self) -> &[DMatrix<f64>] {
        &self.components
    }

    pub fn get(&self, r: usize, i: usize, j: usize) -> f64 {
        self.components[r][(i, j)]
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self {
            n: self.n,
            components: self.components.iter().map(|a| a * t).collect(),
        }
    }

    /// ‖σ‖² = Σ (σ^r_{ij})².
    pub fn norm_sq(&self) -> f64 {
        self.components.iter().map(|a| a.norm_squared()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(linalg::max_abs).fold(0.0, f64::max)
    }

    /// Normal coefficients of σ(X, Y) for tangent coordinate vectors.
    pub fn eval(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.codim(),
            self.components.iter().map(|a| x.dot(&(a * y))),
        )
    }

    /// Re-expresses σ in the rotated tangent frame whose columns are `q`
    /// (tangent coordinates), i.e. σ'(e'_a, e'_b) = σ(q_a, q_b).
    pub fn rotated(&self, q: &DMatrix<f64>) -> Self {
        Self {
            n: q.ncols(),
            components: self
                .components
                .iter()
                .map(|a| q.transpose() * a * q)
                .collect(),
        }
    }
}

/// Orthonormal frames at a point with ξ = e₁ tangent, plus σ.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmanifoldPoint {
    tangent: DMatrix<f64>,
    normal: DMatrix<f64>,
    sigma: SecondFundamentalForm,
}

impl SubmanifoldPoint {
    pub fn n(&self) -> usize {
        self.tangent.ncols()
    }

    pub fn codim(&self) -> usize {
        self.normal.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.tangent.nrows()
    }

    /// Tangent frame e₁..e_n as columns; e₁ = ξ.
    pub fn tangent_frame(&self) -> &DMatrix<f64> {
        &self.tangent
    }

    /// Normal frame e_{n+1}..e_{2m+1} as columns.
    pub fn normal_frame(&self) -> &DMatrix<f64> {
        &self.normal
    }

    pub fn sigma(&self) -> &SecondFundamentalForm {
        &self.sigma
    }

    /// Replaces σ, keeping frames. σ must be expressed in this point's frames.
    pub fn with_sigma(&self, sigma: SecondFundamentalForm) -> Result<Self> {
        check_sigma_shape(&sigma, self.n(), self.codim())?;
        Ok(Self {
            tangent: self.tangent.clone(),
            normal: self.normal.clone(),
            sigma,
        })
    }

    /// Ambient vector for tangent frame coordinates.
    pub fn to_ambient(&self, coords: &DVector<f64>) -> DVector<f64> {
        &self.tangent * coords
    }

    /// Tangent frame coordinates of an ambient vector, failing if the vector
    /// has a normal component above [`tol::DERIVED`].
    pub fn to_tangent_coords(&self, v: &DVector<f64>) -> Result<DVector<f64>> {
        if v.len() != self.ambient_dim() {
            return Err(Error::Dimension(format!(
                "vector has length {}, expected {}",
                v.len(),
                self.ambient_dim()
            )));
        }
        let coords = self.tangent.transpose() * v;
        let normal_part = (self.normal.transpose() * v).norm();
        if normal_part > tol::DERIVED * (1.0 + v.norm()) {
            return Err(Error::Domain(format!(
                "vector is not tangent (normal component {normal_part:.3e})"
            )));
        }
        Ok(coords)
    }

    /// η(eᵢ) for each tangent frame vector.
    pub fn eta_coords(&self, s: &AmbientStructure) -> DVector<f64> {
        self.tangent.transpose() * s.eta()
    }
}

fn check_sigma_shape(sigma: &SecondFundamentalForm, n: usize, codim: usize) -> Result<()> {
    if sigma.n() != n || sigma.codim() != codim {
        return Err(Error::Dimension(format!(
            "sigma has shape [{}][{}][{}], expected [{codim}][{n}][{n}]",
            sigma.codim(),
            sigma.n(),
            sigma.n()
        )));
    }
    Ok(())
}

/// Builds a point from a raw spanning set of the tangent space and σ given in
/// the resulting frames (σ[r] is indexed by the normalized tangent frame, with
/// r running over the computed normal complement).
///
/// The tangent frame is Gram-Schmidt of (ξ, raw₁, .., raw_n) with the one
/// dependent vector dropped, so e₁ = ξ.
pub fn build_point(
    s: &AmbientStructure,
    raw_frame: &[DVector<f64>],
    sigma: SecondFundamentalForm,
) -> Result<SubmanifoldPoint> {
    let dim = s.dim();
    let n = raw_frame.len();
    if n == 0 || n > dim {
        return Err(Error::Dimension(format!(
            "tangent frame has {n} vectors, expected 1..={dim}"
        )));
    }
    for (i, v) in raw_frame.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::Dimension(format!(
                "frame vector {i} has length {}, expected {dim}",
                v.len()
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Data(format!("frame vector {i} is not finite")));
        }
    }
    check_sigma_shape(&sigma, n, dim - n)?;

    // Rank of the raw frame on its own.
    let mut span: Vec<DVector<f64>> = Vec::with_capacity(n);
    for (i, v) in raw_frame.iter().enumerate() {
        let r = linalg::project_out(v, span.iter());
        let norm = r.norm();
        if norm <= tol::RANK * v.norm().max(f64::MIN_POSITIVE) || norm == 0.0 {
            return Err(Error::Domain(format!(
                "tangent frame is rank deficient (vector {i} depends on the previous ones)"
            )));
        }
        span.push(r / norm);
    }

    let xi = s.xi();
    let residual = linalg::project_out(xi, span.iter()).norm();
    if residual > tol::DERIVED {
        return Err(Error::XiNotTangent { residual });
    }

    let mut frame: Vec<DVector<f64>> = vec![xi.normalize()];
    for v in raw_frame {
        if frame.len() == n {
            break;
        }
        let r = linalg::project_out(v, frame.iter());
        let norm = r.norm();
        if norm > tol::RANK * v.norm() {
            frame.push(r / norm);
        }
    }
    if frame.len() != n {
        return Err(Error::Domain("tangent frame is rank deficient".into()));
    }

    let tangent = DMatrix::from_columns(&frame);
    let normal = if n < dim {
        linalg::orthonormal_complement(&tangent)
    } else {
        DMatrix::zeros(dim, 0)
    };
    Ok(SubmanifoldPoint {
        tangent,
        normal,
        sigma,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeanCurvature {
    /// H^r = (1/n) Σᵢ σ^r_{ii}.
    pub coeffs: DVector<f64>,
    /// H as an ambient vector.
    pub vector: DVector<f64>,
    pub norm_sq: f64,
}

pub fn mean_curvature(p: &SubmanifoldPoint) -> MeanCurvature {
    let n = p.n() as f64;
    let coeffs = DVector::from_iterator(
        p.codim(),
        p.sigma.components().iter().map(|a| a.trace() / n),
    );
    let vector = &p.normal * &coeffs;
    let norm_sq = coeffs.norm_squared();
    MeanCurvature {
        coeffs,
        vector,
        norm_sq,
    }
}

/// A_r for the normal direction with 0-based index `r` (in the 1-based
/// numbering that continues after the tangent frame it is n + 1 + r).
pub fn shape_operator(p: &SubmanifoldPoint, r: usize) -> Result<DMatrix<f64>> {
    if r >= p.codim() {
        return Err(Error::Domain(format!(
            "normal index {r} out of range 0..{}",
            p.codim()
        )));
    }
    Ok(p.sigma.component(r).clone())
}

/// φ restricted to the tangent space: φX = PX + FX.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiSplit {
    /// Pᵢⱼ = ⟨eᵢ, φeⱼ⟩ over tangent indices.
    pub p: DMatrix<f64>,
    /// F_{rj} = ⟨e_r, φeⱼ⟩ over normal r, tangent j.
    pub f: DMatrix<f64>,
    pub norm_p_sq: f64,
}

pub fn phi_split(s: &AmbientStructure, pt: &SubmanifoldPoint) -> PhiSplit {
    let phi_t = s.phi() * &pt.tangent;
    let p = pt.tangent.transpose() * &phi_t;
    let f = pt.normal.transpose() * &phi_t;
    let norm_p_sq = p.norm_squared();
    PhiSplit { p, f, norm_p_sq }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Kind {
    Invariant,
    AntiInvariant,
    Slant { theta: f64 },
    Cr { h: usize, dim_d_perp: usize },
    Generic,
}

impl Kind {
    pub fn label(&self) -> &'static str {
        match self {
            Kind::Invariant => "invariant",
            Kind::AntiInvariant => "anti-invariant",
            Kind::Slant { .. } => "slant",
            Kind::Cr { .. } => "cr",
            Kind::Generic => "generic",
        }
    }

    /// Slant angle when the kind is a slant type (invariant = 0,
    /// anti-invariant = π/2).
    pub fn slant_angle(&self) -> Option<f64> {
        match self {
            Kind::Invariant => Some(0.0),
            Kind::AntiInvariant => Some(std::f64::consts::FRAC_PI_2),
            Kind::Slant { theta } => Some(*theta),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: Kind,
    pub norm_p_sq: f64,
    /// Wirtinger angle range over the sampled directions orthogonal to ξ.
    pub angle_min: f64,
    pub angle_max: f64,
    pub samples: usize,
    pub tol_angle: f64,
    /// Eigenvalues of PᵀP on the complement of ξ, ascending.
    pub pt_p_eigenvalues: Vec<f64>,
    /// Orthonormal basis of D in tangent coordinates (CR points only).
    pub d_basis: Vec<Vec<f64>>,
    /// Orthonormal basis of D⊥ in tangent coordinates (CR points only).
    pub d_perp_basis: Vec<Vec<f64>>,
}

impl Classification {
    pub fn angle_spread(&self) -> f64 {
        self.angle_max - self.angle_min
    }

    fn projection_residual(basis: &[Vec<f64>], x: &DVector<f64>) -> f64 {
        let mut r = x.clone();
        for b in basis {
            let b = DVector::from_column_slice(b);
            let d = b.dot(&r);
            r.axpy(-d, &b, 1.0);
        }
        r.norm()
    }

    /// Whether tangent coordinates `x` lie in D, at [`tol::CR_CLUSTER`].
    pub fn in_d(&self, x: &DVector<f64>) -> bool {
        matches!(self.kind, Kind::Cr { .. })
            && Self::projection_residual(&self.d_basis, x) < tol::CR_CLUSTER * (1.0 + x.norm())
    }

    /// Whether tangent coordinates `x` lie in D⊥, at [`tol::CR_CLUSTER`].
    pub fn in_d_perp(&self, x: &DVector<f64>) -> bool {
        matches!(self.kind, Kind::Cr { .. })
            && Self::projection_residual(&self.d_perp_basis, x) < tol::CR_CLUSTER * (1.0 + x.norm())
    }
}

/// Number of sampled directions used by [`classify`].
pub const CLASSIFY_SAMPLES: usize = 256;

/// Classifies the point as invariant, anti-invariant, slant, CR or generic.
///
/// Wirtinger angles are sampled on a fixed direction net orthogonal to ξ
/// (θ(X) = atan2(‖FX‖, ‖PX‖) for unit X); the CR split comes from the
/// spectrum of PᵀP on the complement of ξ.
pub fn classify(s: &AmbientStructure, p: &SubmanifoldPoint, tol_angle: f64) -> Result<Classification> {
    let n = p.n();
    if n < 2 {
        return Err(Error::DegenerateClassification(
            "the tangent space is spanned by xi; no direction is orthogonal to it".into(),
        ));
    }
    let split = phi_split(s, p);
    // e₁ = ξ, so coordinates 1..n span the complement of ξ.
    let pb = split.p.view((0, 1), (n, n - 1)).into_owned();
    let fb = split.f.view((0, 1), (p.codim(), n - 1)).into_owned();

    let mut angle_min = f64::INFINITY;
    let mut angle_max = f64::NEG_INFINITY;
    let mut all_sin_small = true;
    let mut all_cos_small = true;
    let mut angle_sum = 0.0;
    let net = linalg::sphere_net(n - 1, CLASSIFY_SAMPLES);
    for v in &net {
        let cos = (&pb * v).norm();
        let sin = (&fb * v).norm();
        let theta = sin.atan2(cos);
        angle_min = angle_min.min(theta);
        angle_max = angle_max.max(theta);
        angle_sum += theta;
        all_sin_small &= sin < tol_angle;
        all_cos_small &= cos < tol_angle;
    }

    let eig = SymmetricEigen::new(pb.transpose() * &pb);
    let mut order: Vec<usize> = (0..n - 1).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let lift = |i: usize| {
        let mut v = vec![0.0; n];
        for (k, x) in eig.eigenvectors.column(i).iter().enumerate() {
            v[k + 1] = *x;
        }
        v
    };

    let mut d_basis = Vec::new();
    let mut d_perp_basis = Vec::new();
    let kind = if all_sin_small {
        Kind::Invariant
    } else if all_cos_small {
        Kind::AntiInvariant
    } else if angle_max - angle_min < tol_angle {
        Kind::Slant {
            theta: angle_sum / net.len() as f64,
        }
    } else {
        let ones: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&i| (eig.eigenvalues[i] - 1.0).abs() < tol::CR_CLUSTER)
            .collect();
        let zeros: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&i| eig.eigenvalues[i].abs() < tol::CR_CLUSTER)
            .collect();
        if ones.len() + zeros.len() == n - 1 && ones.len().is_multiple_of(2) && !ones.is_empty() && !zeros.is_empty() {
            d_basis = ones.iter().map(|&i| lift(i)).collect();
            d_perp_basis = zeros.iter().map(|&i| lift(i)).collect();
            Kind::Cr {
                h: ones.len() / 2,
                dim_d_perp: zeros.len(),
            }
        } else {
            Kind::Generic
        }
    };

    Ok(Classification {
        kind,
        norm_p_sq: split.norm_p_sq,
        angle_min,
        angle_max,
        samples: net.len(),
        tol_angle,
        pt_p_eigenvalues: eigenvalues,
        d_basis,
        d_perp_basis,
    })
}

/// Both sides of the decomposition of ‖σ‖² with e₁ singled out.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaNorms {
    pub norm_sq: f64,
    /// ½ n² ‖H‖²
    pub mean_term: f64,
    /// ½ Σ_r (σ^r₁₁ - σ^r₂₂ - .. - σ^r_nn)²
    pub split_term: f64,
    /// 2 Σ_r Σ_{j≥2} (σ^r₁ⱼ)²
    pub cross_term: f64,
    /// -2 Σ_r Σ_{2≤i<j} (σ^r_ii σ^r_jj - (σ^r_ij)²)
    pub pair_term: f64,
    pub rhs: f64,
}

pub fn sigma_norms(p: &SubmanifoldPoint) -> SigmaNorms {
    let n = p.n();
    let h = mean_curvature(p);
    let nf = n as f64;
    let mean_term = 0.5 * nf * nf * h.norm_sq;
    let mut split_term = 0.0;
    let mut cross_term = 0.0;
    let mut pair_term = 0.0;
    for a in p.sigma.components() {
        let mut d = a[(0, 0)];
        for j in 1..n {
            d -= a[(j, j)];
            cross_term += a[(0, j)] * a[(0, j)];
        }
        split_term += d * d;
        for i in 1..n {
            for j in i + 1..n {
                pair_term += a[(i, i)] * a[(j, j)] - a[(i, j)] * a[(i, j)];
            }
        }
    }
    let split_term = 0.5 * split_term;
    let cross_term = 2.0 * cross_term;
    let pair_term = -2.0 * pair_term;
    SigmaNorms {
        norm_sq: p.sigma.norm_sq(),
        mean_term,
        split_term,
        cross_term,
        pair_term,
        rhs: mean_term + split_term + cross_term + pair_term,
    }
}

/// Orthonormal basis (columns, tangent coordinates) of
/// N_p = {X : σ(X, Y) = 0 for all Y}, by singular-value thresholding of the
/// stacked shape operators.
pub fn relative_null_space(p: &SubmanifoldPoint, tol: f64) -> DMatrix<f64> {
    let n = p.n();
    let rows = (p.codim() * n).max(n);
    let mut stacked = DMatrix::<f64>::zeros(rows, n);
    for (r, a) in p.sigma.components().iter().enumerate() {
        stacked.view_mut((r * n, 0), (n, n)).copy_from(a);
    }
    let svd = stacked.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let cols: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &sv)| sv < tol)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::CurvatureParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    // coordinates of R⁵: (x₁, x₂, y₁, y₂, z)
    fn e(dim: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(dim);
        v[i] = 1.0;
        v
    }

    fn flat5() -> AmbientStructure {
        AmbientStructure::standard(2, CurvatureParams::flat()).unwrap()
    }

    fn random_sigma(rng: &mut impl Rng, n: usize, codim: usize) -> SecondFundamentalForm {
        let comps = (0..codim)
            .map(|_| {
                let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
                (&a + a.transpose()) * 0.5
            })
            .collect();
        SecondFundamentalForm::from_components(n, comps).unwrap()
    }

    #[test]
    fn orthonormal_frame_is_kept() {
        let s = flat5();
        let raw = [e(5, 4), e(5, 0), e(5, 2)];
        let p = build_point(&s, &raw, SecondFundamentalForm::zeros(3, 2)).unwrap();
        for (i, v) in raw.iter().enumerate() {
            assert!((p.tangent_frame().column(i) - v).norm() < 1e-15);
        }
        let gram = p.normal_frame().transpose() * p.normal_frame();
        assert!(linalg::max_abs(&(gram - DMatrix::identity(2, 2))) < 1e-14);
        assert!(linalg::max_abs(&(p.normal_frame().transpose() * p.tangent_frame())) < 1e-14);
    }

    #[test]
    fn gram_schmidt_by_hand() {
        let s = flat5();
        let raw = [e(5, 4), e(5, 0) + e(5, 2), e(5, 2)];
        let p = build_point(&s, &raw, SecondFundamentalForm::zeros(3, 2)).unwrap();
        let r = 0.5f64.sqrt();
        assert!((p.tangent_frame().column(1) - (e(5, 0) + e(5, 2)) * r).norm() < 1e-15);
        assert!((p.tangent_frame().column(2) - (e(5, 0) - e(5, 2)) * -r).norm() < 1e-15);
    }

    #[test]
    fn xi_not_tangent_is_a_named_error() {
        let s = flat5();
        let err = build_point(&s, &[e(5, 0), e(5, 2)], SecondFundamentalForm::zeros(2, 3));
        assert!(matches!(err, Err(Error::XiNotTangent { .. })));
    }

    #[test]
    fn rank_deficient_frame() {
        let s = flat5();
        let err = build_point(&s, &[e(5, 4), e(5, 0), e(5, 0) * 2.0], SecondFundamentalForm::zeros(3, 2));
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn mean_curvature_examples() {
        let s = flat5();
        let raw = [e(5, 4), e(5, 0), e(5, 2)];
        let p = build_point(&s, &raw, SecondFundamentalForm::zeros(3, 2)).unwrap();
        assert_eq!(mean_curvature(&p).norm_sq, 0.0);

        let lambda = 0.7;
        let p = p.with_sigma(SecondFundamentalForm::umbilic(3, &[lambda, 0.0])).unwrap();
        let h = mean_curvature(&p);
        assert!((h.vector.clone() - p.normal_frame().column(0) * lambda).norm() < 1e-15);
        assert!((h.norm_sq - lambda * lambda).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = p.with_sigma(random_sigma(&mut rng, 3, 2)).unwrap();
        let h = mean_curvature(&p);
        for r in 0..2 {
            let mut sum = 0.0;
            for i in 0..3 {
                sum += p.sigma().get(r, i, i);
            }
            assert!((h.coeffs[r] - sum / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn shape_operator_matches_bilinear_form() {
        let s = flat5();
        let raw = [e(5, 4), e(5, 0), e(5, 2)];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = build_point(&s, &raw, random_sigma(&mut rng, 3, 2)).unwrap();
        for r in 0..2 {
            let a = shape_operator(&p, r).unwrap();
            assert!(linalg::max_abs(&(&a - a.transpose())) == 0.0);
            for _ in 0..100 {
                let x = DVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0));
                let y = DVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0));
                let mut direct = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        direct += x[i] * y[j] * p.sigma().get(r, i, j);
                    }
                }
                assert!(((&a * &x).dot(&y) - direct).abs() < 1e-12);
            }
        }
        assert!(shape_operator(&p, 2).is_err());
        let umb = p.with_sigma(SecondFundamentalForm::umbilic(3, &[2.0, 0.0])).unwrap();
        assert_eq!(shape_operator(&umb, 0).unwrap(), DMatrix::identity(3, 3) * 2.0);
    }

    #[test]
    fn phi_split_examples() {
        let s = flat5();
        let inv = build_point(&s, &[e(5, 4), e(5, 0), e(5, 2)], SecondFundamentalForm::zeros(3, 2)).unwrap();
        let sp = phi_split(&s, &inv);
        assert!(linalg::max_abs(&sp.f) < 1e-15);
        assert!((sp.norm_p_sq - 2.0).abs() < 1e-15);

        let anti = build_point(&s, &[e(5, 4), e(5, 0), e(5, 1)], SecondFundamentalForm::zeros(3, 2)).unwrap();
        let sp = phi_split(&s, &anti);
        assert!(linalg::max_abs(&sp.p) < 1e-15);
        assert_eq!(sp.norm_p_sq, 0.0);

        let t = PI / 3.0;
        let v = e(5, 2) * t.cos() + e(5, 1) * t.sin();
        let slant = build_point(&s, &[e(5, 4), e(5, 0), v], SecondFundamentalForm::zeros(3, 2)).unwrap();
        let sp = phi_split(&s, &slant);
        // P by hand: P e₂ = cosθ e₃, P e₃ = -cosθ e₂
        let mut expect = DMatrix::zeros(3, 3);
        expect[(2, 1)] = t.cos();
        expect[(1, 2)] = -t.cos();
        assert!(linalg::max_abs(&(&sp.p - expect)) < 1e-15);
        assert!((sp.norm_p_sq - 0.5).abs() < 1e-15);
        assert!((sp.norm_p_sq - 2.0 * t.cos().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn classify_examples() {
        let s = flat5();
        let inv = build_point(&s, &[e(5, 4), e(5, 0), e(5, 2)], SecondFundamentalForm::zeros(3, 2)).unwrap();
        assert_eq!(classify(&s, &inv, tol::ANGLE).unwrap().kind, Kind::Invariant);

        let anti = build_point(&s, &[e(5, 4), e(5, 0), e(5, 1)], SecondFundamentalForm::zeros(3, 2)).unwrap();
        assert_eq!(classify(&s, &anti, tol::ANGLE).unwrap().kind, Kind::AntiInvariant);

        let t = PI / 3.0;
        let v = e(5, 2) * t.cos() + e(5, 1) * t.sin();
        let slant = build_point(&s, &[e(5, 4), e(5, 0), v], SecondFundamentalForm::zeros(3, 2)).unwrap();
        let c = classify(&s, &slant, tol::ANGLE).unwrap();
        match c.kind {
            Kind::Slant { theta } => assert!((theta - t).abs() < 1e-12),
            k => panic!("expected slant, got {k:?}"),
        }
        assert!(c.angle_spread() < 1e-12);

        // R⁷: (x₁, x₂, x₃, y₁, y₂, y₃, z)
        let s7 = AmbientStructure::standard(3, CurvatureParams::flat()).unwrap();
        let cr = build_point(&s7, &[e(7, 6), e(7, 0), e(7, 3), e(7, 1)], SecondFundamentalForm::zeros(4, 3)).unwrap();
        let c = classify(&s7, &cr, tol::ANGLE).unwrap();
        assert_eq!(c.kind, Kind::Cr { h: 1, dim_d_perp: 1 });
        assert!((c.norm_p_sq - 2.0).abs() < 1e-15);
        let x1 = cr.to_tangent_coords(&e(7, 0)).unwrap();
        let x2 = cr.to_tangent_coords(&e(7, 1)).unwrap();
        assert!(c.in_d(&x1) && !c.in_d_perp(&x1));
        assert!(c.in_d_perp(&x2) && !c.in_d(&x2));
    }

    #[test]
    fn classify_degenerate_dimension() {
        let s = flat5();
        let p = build_point(&s, &[e(5, 4)], SecondFundamentalForm::zeros(1, 4)).unwrap();
        assert!(matches!(classify(&s, &p, tol::ANGLE), Err(Error::DegenerateClassification(_))));
    }

    #[test]
    fn classification_survives_reframing() {
        let s = flat5();
        let t: f64 = 0.4;
        let v = e(5, 2) * t.cos() + e(5, 1) * t.sin();
        let a = build_point(&s, &[e(5, 4), e(5, 0), v.clone()], SecondFundamentalForm::zeros(3, 2)).unwrap();
        let b = build_point(
            &s,
            &[&e(5, 0) * 0.3 + &v * 0.9 + e(5, 4), &e(5, 0) - &v * 0.2, e(5, 4) * 2.0],
            SecondFundamentalForm::zeros(3, 2),
        )
        .unwrap();
        let (ca, cb) = (classify(&s, &a, tol::ANGLE).unwrap(), classify(&s, &b, tol::ANGLE).unwrap());
        let (ta, tb) = (ca.kind.slant_angle().unwrap(), cb.kind.slant_angle().unwrap());
        assert_eq!(ca.kind.label(), cb.kind.label());
        assert!((ta - tb).abs() < 1e-9 && (ta - t).abs() < 1e-9);
    }

    #[test]
    fn sigma_norms_examples() {
        let s = flat5();
        let p = build_point(&s, &[e(5, 4), e(5, 0), e(5, 2)], SecondFundamentalForm::zeros(3, 2)).unwrap();
        let z = sigma_norms(&p);
        assert_eq!((z.norm_sq, z.rhs), (0.0, 0.0));

        let l = 1.3;
        let p = p.with_sigma(SecondFundamentalForm::umbilic(3, &[l, 0.0])).unwrap();
        let u = sigma_norms(&p);
        assert!((u.norm_sq - 3.0 * l * l).abs() < 1e-14);
        assert!((u.rhs - 3.0 * l * l).abs() < 1e-14);
    }

    #[test]
    fn relative_null_space_examples() {
        let s = flat5();
        let p = build_point(&s, &[e(5, 4), e(5, 0), e(5, 2)], SecondFundamentalForm::zeros(3, 2)).unwrap();
        assert_eq!(relative_null_space(&p, 1e-9).ncols(), 3);

        let umb = p.with_sigma(SecondFundamentalForm::umbilic(3, &[0.5, 0.0])).unwrap();
        assert_eq!(relative_null_space(&umb, 1e-9).ncols(), 0);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut sig = random_sigma(&mut rng, 3, 2);
        for a in sig.components.iter_mut() {
            for j in 0..3 {
                a[(0, j)] = 0.0;
                a[(j, 0)] = 0.0;
            }
        }
        let p = p.with_sigma(sig).unwrap();
        let ns = relative_null_space(&p, 1e-9);
        assert_eq!(ns.ncols(), 1);
        assert!((ns[(0, 0)].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phi_split_compatibility_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let s = AmbientStructure::standard(3, CurvatureParams::flat()).unwrap();
        for _ in 0..20 {
            let n = rng.random_range(2..=7);
            let mut raw = vec![s.xi().clone()];
            while raw.len() < n {
                raw.push(DVector::from_fn(7, |_, _| rng.random_range(-1.0..1.0)));
            }
            let p = build_point(&s, &raw, SecondFundamentalForm::zeros(n, 7 - n)).unwrap();
            let sp = phi_split(&s, &p);
            assert!(linalg::max_abs(&(&sp.p + sp.p.transpose())) < 1e-12);
            assert!(sp.p.column(0).amax() < 1e-12);
            let eta = p.eta_coords(&s);
            for _ in 0..10 {
                let x = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)).normalize();
                let total = (&sp.p * &x).norm_squared() + (&sp.f * &x).norm_squared() + eta.dot(&x).powi(2);
                assert!((total - 1.0).abs() < 1e-10);
            }
        }
    }
}
