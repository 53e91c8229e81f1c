//! Induced curvature via the Gauss equation; Ricci, k-Ricci and θ_k.
//!
//! Sectional curvature convention throughout: K(X,Y) = R(X,Y,Y,X) with
//! R(X,Y,Z,W) = ⟨R(X,Y)Z, W⟩.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ambient::AmbientStructure;
use crate::error::{Error, Result};
use crate::linalg;
use crate::subpoint::{phi_split, SubmanifoldPoint};
use crate::tol;

/// Intrinsic curvature of the submanifold at a point, in its orthonormal
/// tangent frame.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedCurvature {
    n: usize,
    r: Vec<f64>,
    /// Scalar curvature Σ_{i<j} K_ij.
    pub tau: f64,
    /// Ric(eᵢ).
    pub ric: DVector<f64>,
    /// K_ij = R(eᵢ,eⱼ,eⱼ,eᵢ).
    pub sectional: DMatrix<f64>,
}

impl InducedCurvature {
    /// Wraps a full 4-index array (row-major, n⁴ entries) and derives τ,
    /// Ric and the sectional matrix from it.
    pub fn from_array(n: usize, r: Vec<f64>) -> Self {
        assert_eq!(r.len(), n * n * n * n);
        let idx = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
        let sectional = DMatrix::from_fn(n, n, |i, j| r[idx(i, j, j, i)]);
        let mut tau = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                tau += sectional[(i, j)];
            }
        }
        let ric = DVector::from_fn(n, |i, _| (0..n).map(|j| sectional[(i, j)]).sum());
        Self {
            n,
            r,
            tau,
            ric,
            sectional,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.r[((i * n + j) * n + k) * n + l]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.r
    }

    /// R(X,Y,Z,W) for tangent coordinate vectors.
    pub fn form(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>, w: &DVector<f64>) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        acc += xy * z[k] * w[l] * self.get(i, j, k, l);
                    }
                }
            }
        }
        acc
    }

    /// Sectional curvature of the plane spanned by two orthonormal vectors.
    pub fn sectional_of(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        self.form(x, y, y, x)
    }

    /// Matrix of the quadratic form v ↦ R(X,v,v,X) in the tangent frame.
    pub fn jacobi_form(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n;
        let mut b = DMatrix::zeros(n, n);
        for c in 0..n {
            for d in 0..n {
                let w = x[c] * x[d];
                if w == 0.0 {
                    continue;
                }
                for a in 0..n {
                    for bb in 0..n {
                        b[(a, bb)] += w * self.get(c, a, bb, d);
                    }
                }
            }
        }
        b
    }

    /// Largest violation of the algebraic curvature identities.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.get(i, j, k, l);
                        worst = worst
                            .max((v + self.get(j, i, k, l)).abs())
                            .max((v + self.get(i, j, l, k)).abs())
                            .max((v - self.get(k, l, i, j)).abs())
                            .max((v + self.get(j, k, i, l) + self.get(k, i, j, l)).abs());
                    }
                }
            }
        }
        worst
    }
}

fn check_xi_tangent(s: &AmbientStructure, p: &SubmanifoldPoint) -> Result<()> {
    if s.dim() != p.ambient_dim() {
        return Err(Error::Dimension(format!(
            "point lives in R^{}, structure in R^{}",
            p.ambient_dim(),
            s.dim()
        )));
    }
    let coords = p.tangent_frame().transpose() * s.xi();
    let residual = (s.xi() - p.tangent_frame() * coords).norm();
    if residual > tol::DERIVED {
        return Err(Error::XiNotTangent { residual });
    }
    Ok(())
}

fn sigma_block(p: &SubmanifoldPoint, i: usize, j: usize, k: usize, l: usize) -> f64 {
    p.sigma()
        .components()
        .iter()
        .map(|a| a[(i, l)] * a[(j, k)] - a[(i, k)] * a[(j, l)])
        .sum()
}

/// Induced curvature from the tangential form of the Gauss equation, with P
/// in place of φ and η evaluated on the tangent frame.
pub fn induced_curvature(s: &AmbientStructure, p: &SubmanifoldPoint) -> Result<InducedCurvature> {
    check_xi_tangent(s, p)?;
    let n = p.n();
    let params = s.params();
    let (a, b, d) = (params.metric_coeff(), params.phi_coeff(), params.eta_coeff());
    let pm = phi_split(s, p).p;
    let eta = p.eta_coords(s);
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };

    let mut r = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let metric = delta(i, l) * delta(j, k) - delta(i, k) * delta(j, l);
                    let phi = pm[(i, l)] * pm[(j, k)] - pm[(i, k)] * pm[(j, l)]
                        - 2.0 * pm[(i, j)] * pm[(k, l)];
                    let eta_t = eta[i] * eta[k] * delta(j, l) - eta[j] * eta[k] * delta(i, l)
                        + delta(i, k) * eta[j] * eta[l]
                        - delta(j, k) * eta[i] * eta[l];
                    r[((i * n + j) * n + k) * n + l] =
                        a * metric + b * phi + d * eta_t + sigma_block(p, i, j, k, l);
                }
            }
        }
    }
    Ok(InducedCurvature::from_array(n, r))
}

/// Induced curvature assembled from the ambient tensor directly:
/// R = R̃ + ⟨σ(X,W),σ(Y,Z)⟩ - ⟨σ(X,Z),σ(Y,W)⟩.
pub fn induced_curvature_from_ambient(
    s: &AmbientStructure,
    p: &SubmanifoldPoint,
) -> Result<InducedCurvature> {
    check_xi_tangent(s, p)?;
    let n = p.n();
    let e: Vec<DVector<f64>> = p.tangent_frame().column_iter().map(|c| c.into_owned()).collect();
    let mut r = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let rijk = s.curvature_unchecked(&e[i], &e[j], &e[k]);
                for l in 0..n {
                    r[((i * n + j) * n + k) * n + l] = rijk.dot(&e[l]) + sigma_block(p, i, j, k, l);
                }
            }
        }
    }
    Ok(InducedCurvature::from_array(n, r))
}

/// Max |difference| between the two Gauss-equation routes.
pub fn gauss_cross_check(s: &AmbientStructure, p: &SubmanifoldPoint) -> Result<f64> {
    let a = induced_curvature(s, p)?;
    let b = induced_curvature_from_ambient(s, p)?;
    Ok(a.r
        .iter()
        .zip(&b.r)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs())))
}

fn check_unit(x: &DVector<f64>, n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::Dimension(format!(
            "tangent vector has {} coordinates, expected {n}",
            x.len()
        )));
    }
    let norm = x.norm();
    if (norm - 1.0).abs() > tol::DERIVED {
        return Err(Error::Domain(format!("expected a unit vector, got norm {norm}")));
    }
    Ok(())
}

/// Ric(X) for a unit tangent X (frame coordinates): the sum of sectional
/// curvatures K(X, eⱼ) over an orthonormal completion of X.
pub fn ricci(ic: &InducedCurvature, x: &DVector<f64>) -> Result<f64> {
    check_unit(x, ic.n)?;
    let c = linalg::unit_complement(x);
    let b = ic.jacobi_form(x);
    Ok((c.transpose() * b * c).trace())
}

/// A k-plane section with orthonormal basis; the first column is the
/// distinguished unit vector X.
#[derive(Clone, Debug, PartialEq)]
pub struct KPlane {
    basis: DMatrix<f64>,
}

impl KPlane {
    /// `basis` holds k orthonormal columns in tangent coordinates.
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        let (n, k) = basis.shape();
        if k < 2 || k > n {
            return Err(Error::Domain(format!("k = {k} out of range [2,{n}]")));
        }
        let gram = basis.transpose() * &basis;
        let defect = linalg::max_abs(&(gram - DMatrix::identity(k, k)));
        if defect > tol::STRUCTURAL * 10.0 {
            return Err(Error::Domain(format!(
                "k-plane basis is not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(Self { basis })
    }

    pub fn k(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KRicci {
    /// Ric_L(X) = K₁₂ + .. + K₁ₖ.
    pub ric_l: f64,
    /// τ(L) = Σ_{i<j≤k} K_ij.
    pub tau_l: f64,
}

pub fn k_ricci(ic: &InducedCurvature, plane: &KPlane) -> Result<KRicci> {
    if plane.basis.nrows() != ic.n {
        return Err(Error::Dimension(format!(
            "k-plane lives in R^{}, tangent space is R^{}",
            plane.basis.nrows(),
            ic.n
        )));
    }
    let cols: Vec<DVector<f64>> = plane.basis.column_iter().map(|c| c.into_owned()).collect();
    let k = cols.len();
    let mut ric_l = 0.0;
    let mut tau_l = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            let kij = ic.sectional_of(&cols[i], &cols[j]);
            tau_l += kij;
            if i == 0 {
                ric_l += kij;
            }
        }
    }
    Ok(KRicci { ric_l, tau_l })
}

/// Outer search budget for θ_k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub restarts: usize,
    pub net_size: usize,
    pub step_tol: f64,
    pub max_iters: usize,
    /// Central-difference step for the numerical sphere gradient.
    pub fd_step: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            net_size: 1024,
            step_tol: 1e-10,
            max_iters: 500,
            fd_step: 1e-6,
        }
    }
}

impl SearchConfig {
    /// A small budget for bulk fuzzing.
    pub fn light() -> Self {
        Self {
            restarts: 1,
            net_size: 32,
            step_tol: 1e-10,
            max_iters: 40,
            fd_step: 1e-6,
        }
    }
}

/// inf over (k-1)-dimensional subspaces V of X⊥ of Σ_{v∈V} R(X,v,v,X): the
/// sum of the k-1 smallest eigenvalues of the Jacobi form restricted to X⊥.
/// Returns the value and an orthonormal basis of the minimizing subspace
/// (tangent coordinates, k-1 columns).
pub fn inner_infimum(ic: &InducedCurvature, x: &DVector<f64>, k: usize) -> Result<(f64, DMatrix<f64>)> {
    check_unit(x, ic.n)?;
    check_k(k, ic.n)?;
    Ok(inner_unchecked(ic, x, k, true))
}

fn inner_unchecked(ic: &InducedCurvature, x: &DVector<f64>, k: usize, want_vectors: bool) -> (f64, DMatrix<f64>) {
    let c = linalg::unit_complement(x);
    let q = c.transpose() * ic.jacobi_form(x) * &c;
    let eig = SymmetricEigen::new(q);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let value = order[..k - 1].iter().map(|&i| eig.eigenvalues[i]).sum();
    let vectors = if want_vectors {
        let cols: Vec<DVector<f64>> = order[..k - 1]
            .iter()
            .map(|&i| &c * eig.eigenvectors.column(i))
            .collect();
        DMatrix::from_columns(&cols)
    } else {
        DMatrix::zeros(0, 0)
    };
    (value, vectors)
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k < 2 || k > n {
        return Err(Error::Domain(format!("k out of range [2,{n}]")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaK {
    pub k: usize,
    /// θ_k(p), best value found.
    pub value: f64,
    /// Minimizing unit X (tangent coordinates).
    pub argmin_x: Vec<f64>,
    /// Orthonormal basis of the minimizing k-plane, X first.
    pub argmin_plane: Vec<Vec<f64>>,
    pub candidates: usize,
    pub restarts_used: usize,
    pub restarts_converged: usize,
    /// The inner infimum over planes is exact for each X.
    pub certified_inner: bool,
    /// The outer infimum over X is a multi-start local search.
    pub heuristic_outer: bool,
    pub budget_exhausted: bool,
    pub warnings: Vec<String>,
}

struct Descent {
    x: DVector<f64>,
    value: f64,
    converged: bool,
}

fn sphere_value(ic: &InducedCurvature, y: &DVector<f64>, k: usize) -> f64 {
    inner_unchecked(ic, &y.normalize(), k, false).0
}

fn descend(ic: &InducedCurvature, start: DVector<f64>, k: usize, cfg: &SearchConfig) -> Descent {
    let n = ic.n;
    let mut x = start;
    let mut fx = sphere_value(ic, &x, k);
    let mut step = 0.1;
    for _ in 0..cfg.max_iters {
        let mut grad = DVector::zeros(n);
        for a in 0..n {
            let mut plus = x.clone();
            plus[a] += cfg.fd_step;
            let mut minus = x.clone();
            minus[a] -= cfg.fd_step;
            grad[a] = (sphere_value(ic, &plus, k) - sphere_value(ic, &minus, k)) / (2.0 * cfg.fd_step);
        }
        let radial = grad.dot(&x);
        grad.axpy(-radial, &x, 1.0);
        let gnorm_sq = grad.norm_squared();
        if gnorm_sq.sqrt() < cfg.step_tol {
            return Descent { x, value: fx, converged: true };
        }

        // Armijo backtracking along the retracted gradient path.
        let mut t = step * 2.0;
        let mut accepted = None;
        while t * gnorm_sq.sqrt() >= cfg.step_tol {
            let trial = (&x - &grad * t).normalize();
            let ft = sphere_value(ic, &trial, k);
            if ft <= fx - 1e-4 * t * gnorm_sq {
                accepted = Some((trial, ft));
                break;
            }
            t *= 0.5;
        }
        let Some((next, fnext)) = accepted else {
            return Descent { x, value: fx, converged: true };
        };
        let moved = (&next - &x).norm();
        x = next;
        fx = fnext;
        step = t;
        if moved < cfg.step_tol {
            return Descent { x, value: fx, converged: true };
        }
    }
    Descent { x, value: fx, converged: false }
}

/// θ_k(p) = (1/(k-1)) inf_{L ∋ X} Ric_L(X).
///
/// The inner infimum over k-planes through X is an exact eigenvalue sum
/// (see [`inner_infimum`]). The outer infimum over unit X is searched from
/// the frame directions plus a low-discrepancy net, refined by projected
/// gradient descent from the best `restarts` candidates. Because every frame
/// direction is a candidate, the result never exceeds the frame-level bound
/// min_i inner(eᵢ)/(k-1).
pub fn theta_k(ic: &InducedCurvature, k: usize, cfg: &SearchConfig) -> Result<ThetaK> {
    let n = ic.n;
    check_k(k, n)?;

    let mut candidates: Vec<DVector<f64>> = Vec::with_capacity(n + cfg.net_size);
    for i in 0..n {
        let mut e = DVector::zeros(n);
        e[i] = 1.0;
        candidates.push(e);
    }
    candidates.extend(linalg::sphere_net(n, cfg.net_size));
    let values: Vec<f64> = candidates
        .par_iter()
        .map(|x| inner_unchecked(ic, x, k, false).0)
        .collect();

    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut starts: Vec<usize> = Vec::with_capacity(cfg.restarts);
    for &i in &order {
        if starts.len() >= cfg.restarts {
            break;
        }
        // g(X) = g(-X), so antipodal duplicates are skipped.
        if starts
            .iter()
            .all(|&j| candidates[i].dot(&candidates[j]).abs() < 1.0 - 1e-12)
        {
            starts.push(i);
        }
    }

    let runs: Vec<Descent> = starts
        .par_iter()
        .map(|&i| descend(ic, candidates[i].clone(), k, cfg))
        .collect();

    let mut best_x = candidates[order[0]].clone();
    let mut best = values[order[0]];
    for run in &runs {
        if run.value < best {
            best = run.value;
            best_x = run.x.clone();
        }
    }
    let converged = runs.iter().filter(|r| r.converged).count();
    let budget_exhausted = !runs.is_empty() && converged == 0;
    let mut warnings = Vec::new();
    if budget_exhausted {
        warnings.push(format!(
            "no restart met the step tolerance {:e} within {} iterations",
            cfg.step_tol, cfg.max_iters
        ));
    }

    let (value, vectors) = inner_unchecked(ic, &best_x, k, true);
    let mut plane = vec![best_x.iter().copied().collect::<Vec<_>>()];
    plane.extend(vectors.column_iter().map(|c| c.iter().copied().collect()));
    Ok(ThetaK {
        k,
        value: value / (k - 1) as f64,
        argmin_x: best_x.iter().copied().collect(),
        argmin_plane: plane,
        candidates: candidates.len(),
        restarts_used: runs.len(),
        restarts_converged: converged,
        certified_inner: true,
        heuristic_outer: true,
        budget_exhausted,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::CurvatureParams;
    use crate::subpoint::{build_point, SecondFundamentalForm};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(dim: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(dim);
        v[i] = 1.0;
        v
    }

    fn invariant_c4() -> (AmbientStructure, SubmanifoldPoint) {
        let s = AmbientStructure::standard(2, CurvatureParams::new(4.0, 0.0, 0.0)).unwrap();
        let p = build_point(&s, &[e(5, 4), e(5, 0), e(5, 2)], SecondFundamentalForm::zeros(3, 2)).unwrap();
        (s, p)
    }

    fn umbilic(lambda: f64) -> (AmbientStructure, SubmanifoldPoint) {
        let s = AmbientStructure::standard(2, CurvatureParams::flat()).unwrap();
        let p = build_point(&s, &[e(5, 4), e(5, 0), e(5, 2)], SecondFundamentalForm::umbilic(3, &[lambda, 0.0])).unwrap();
        (s, p)
    }

    fn random_point(rng: &mut impl Rng, m: usize, n: usize) -> (AmbientStructure, SubmanifoldPoint) {
        let s = AmbientStructure::standard(
            m,
            CurvatureParams::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)),
        )
        .unwrap();
        let dim = 2 * m + 1;
        let mut raw = vec![s.xi().clone()];
        while raw.len() < n {
            raw.push(DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0)));
        }
        let comps = (0..dim - n)
            .map(|_| {
                let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
                (&a + a.transpose()) * 0.5
            })
            .collect();
        let sigma = SecondFundamentalForm::from_components(n, comps).unwrap();
        let p = build_point(&s, &raw, sigma).unwrap();
        (s, p)
    }

    #[test]
    fn flat_totally_geodesic_is_flat() {
        let s = AmbientStructure::standard(2, CurvatureParams::flat()).unwrap();
        let p = build_point(&s, &[e(5, 4), e(5, 0), e(5, 2)], SecondFundamentalForm::zeros(3, 2)).unwrap();
        let ic = induced_curvature(&s, &p).unwrap();
        assert!(ic.as_slice().iter().all(|&v| v == 0.0));
        assert_eq!(ic.tau, 0.0);
        let t = theta_k(&ic, 2, &SearchConfig::light()).unwrap();
        assert_eq!(t.value, 0.0);
    }

    #[test]
    fn umbilic_has_constant_curvature() {
        let l = 0.8;
        let (s, p) = umbilic(l);
        let ic = induced_curvature(&s, &p).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!((ic.sectional[(i, j)] - l * l).abs() < 1e-15);
                }
            }
        }
        assert!((ic.tau - 3.0 * l * l).abs() < 1e-14);
        let x = DVector::from_vec(vec![0.2, -0.5, 0.3]).normalize();
        assert!((ricci(&ic, &x).unwrap() - 2.0 * l * l).abs() < 1e-14);
        for k in 2..=3 {
            let t = theta_k(&ic, k, &SearchConfig::default()).unwrap();
            assert!((t.value - l * l).abs() < 1e-12);
        }
        let plane = KPlane::new(DMatrix::identity(3, 3)).unwrap();
        let kr = k_ricci(&ic, &plane).unwrap();
        assert!((kr.ric_l - 2.0 * l * l).abs() < 1e-14);
        assert!((kr.tau_l - 3.0 * l * l).abs() < 1e-14);
    }

    #[test]
    fn invariant_point_curvatures() {
        let (s, p) = invariant_c4();
        let ic = induced_curvature(&s, &p).unwrap();
        assert!(ic.sectional[(0, 1)].abs() < 1e-15);
        assert!(ic.sectional[(0, 2)].abs() < 1e-15);
        assert!((ic.sectional[(1, 2)] - 4.0).abs() < 1e-14);
        assert!((ic.tau - 4.0).abs() < 1e-14);
        assert!((ricci(&ic, &e(3, 1)).unwrap() - 4.0).abs() < 1e-14);
        assert!(ricci(&ic, &e(3, 0)).unwrap().abs() < 1e-14);

        let plane = KPlane::new(DMatrix::from_columns(&[e(3, 1), e(3, 2)])).unwrap();
        assert!((k_ricci(&ic, &plane).unwrap().ric_l - 4.0).abs() < 1e-14);

        let t = theta_k(&ic, 2, &SearchConfig::default()).unwrap();
        assert!(t.value.abs() < 1e-12, "theta_2 = {}", t.value);
    }

    #[test]
    fn errors() {
        let (s, p) = invariant_c4();
        let ic = induced_curvature(&s, &p).unwrap();
        assert!(matches!(ricci(&ic, &(e(3, 0) * 2.0)), Err(Error::Domain(_))));
        assert!(matches!(theta_k(&ic, 4, &SearchConfig::light()), Err(Error::Domain(_))));
        assert!(matches!(theta_k(&ic, 1, &SearchConfig::light()), Err(Error::Domain(_))));
        assert!(KPlane::new(DMatrix::from_columns(&[e(3, 1)])).is_err());
        assert!(KPlane::new(DMatrix::from_columns(&[e(3, 1), e(3, 1)])).is_err());

        // a point built over a different ξ
        let s2 = AmbientStructure::new(crate::ambient::StructureData {
            m: 2,
            phi: {
                let mut phi = DMatrix::zeros(5, 5);
                // ξ = ∂x₁, φ pairs (x₂,y₁) and (y₂,z)
                phi[(2, 1)] = 1.0;
                phi[(1, 2)] = -1.0;
                phi[(4, 3)] = 1.0;
                phi[(3, 4)] = -1.0;
                phi
            },
            xi: e(5, 0),
            eta: e(5, 0),
            params: CurvatureParams::flat(),
        })
        .unwrap();
        let q = build_point(&s2, &[e(5, 0), e(5, 1)], SecondFundamentalForm::zeros(2, 3)).unwrap();
        assert!(matches!(induced_curvature(&s, &q), Err(Error::XiNotTangent { .. })));
    }

    #[test]
    fn gauss_routes_agree_and_identities_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..30 {
            let m = rng.random_range(2..=3);
            let n = rng.random_range(2..=2 * m + 1);
            let (s, p) = random_point(&mut rng, m, n);
            let ic = induced_curvature(&s, &p).unwrap();
            assert!(gauss_cross_check(&s, &p).unwrap() < 1e-10);
            assert!(ic.symmetry_defect() < 1e-10);
            for i in 0..n {
                let x = e(n, i);
                assert!((ricci(&ic, &x).unwrap() - ic.ric[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn ricci_is_completion_independent_and_equals_full_k_ricci() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (s, p) = random_point(&mut rng, 3, 5);
        let ic = induced_curvature(&s, &p).unwrap();
        for _ in 0..10 {
            let x = DVector::from_fn(5, |_, _| rng.random_range(-1.0..1.0)).normalize();
            let r = ricci(&ic, &x).unwrap();
            // a different completion: rotate the complement randomly
            let c = linalg::unit_complement(&x);
            let g = DMatrix::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0));
            let q = g.qr().q();
            let comp = c * q;
            let mut cols = vec![x.clone()];
            cols.extend(comp.column_iter().map(|c| c.into_owned()));
            let plane = KPlane::new(DMatrix::from_columns(&cols)).unwrap();
            assert!((k_ricci(&ic, &plane).unwrap().ric_l - r).abs() < 1e-10);
        }
    }

    #[test]
    fn theta_2_never_exceeds_frame_sections() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let (s, p) = random_point(&mut rng, 2, 4);
            let ic = induced_curvature(&s, &p).unwrap();
            let t = theta_k(&ic, 2, &SearchConfig::light()).unwrap();
            let mut min_k = f64::INFINITY;
            for i in 0..4 {
                for j in i + 1..4 {
                    min_k = min_k.min(ic.sectional[(i, j)]);
                }
            }
            assert!(t.value <= min_k + 1e-12);
            assert!(ic.tau >= 6.0 * t.value - 1e-9);
        }
    }
}
