//! Concrete immersions into the flat model ℝ^{2m+1} (c = f = f′ = 0) and a
//! finite-difference oracle for the intrinsic curvature of the induced
//! metric.
//!
//! Ambient coordinates follow the standard structure: (x₁..x_m, y₁..y_m, z)
//! with ξ = ∂z. Every catalog entry uses its last chart coordinate as z, so
//! ξ is tangent everywhere.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::ambient::AmbientStructure;
use crate::error::{Error, Result};
use crate::invariants::{induced_curvature, InducedCurvature};
use crate::linalg;
use crate::subpoint::{build_point, SecondFundamentalForm, SubmanifoldPoint};

/// One monomial `coeff · u₁^p₁ ⋯ u_k^p_k` of a height function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: f64,
    pub powers: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "snake_case")]
pub enum Catalog {
    /// Span of ∂x₁, ∂y₁, .., ∂x_q, ∂y_q, ∂z: an invariant (2q+1)-plane.
    #[serde(rename = "linear_invariant")]
    LinearInvariant { q: usize },
    /// Span of ∂x₁, .., ∂x_{n-1}, ∂z: an anti-invariant n-plane.
    #[serde(rename = "linear_anti_invariant")]
    LinearAntiInvariant { n: usize },
    /// Span of ∂xᵢ, cos θ ∂yᵢ + sin θ ∂x_{q+i} (i ≤ q) and ∂z: a slant
    /// (2q+1)-plane with angle θ.
    #[serde(rename = "linear_slant")]
    LinearSlant { q: usize, theta: f64 },
    /// S^{n-1}(r) × ℝ_z, the sphere as a graph over its first n-1
    /// coordinates: chart (w₁..w_{n-1}, t) with |w| < r.
    #[serde(rename = "sphere_cylinder")]
    SphereCylinder { n: usize, r: f64 },
    /// Torus of radii a > b in (x₁, x₂, y₁) times ℝ_z: chart (θ, φ, t).
    #[serde(rename = "torus_cylinder")]
    TorusCylinder { a: f64, b: f64 },
    /// Graph (u₁..u_{n-1}, h₁(u), .., h_s(u)) × ℝ_z with polynomial heights
    /// of total degree ≤ 4 in the first n-1 chart coordinates.
    #[serde(rename = "polynomial_graph")]
    PolynomialGraph { n: usize, heights: Vec<Vec<Term>> },
}

/// Catalog entry description for listings.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub chart: &'static str,
    pub ambient: &'static str,
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "linear_invariant",
            params: "q >= 1 (integer)",
            chart: "u in R^(2q+1), last coordinate is z",
            ambient: "m >= q",
        },
        CatalogEntry {
            name: "linear_anti_invariant",
            params: "n >= 2 (integer)",
            chart: "u in R^n, last coordinate is z",
            ambient: "m >= n-1",
        },
        CatalogEntry {
            name: "linear_slant",
            params: "q >= 1 (integer), theta in [0, pi/2]",
            chart: "u in R^(2q+1), last coordinate is z",
            ambient: "m >= 2q",
        },
        CatalogEntry {
            name: "sphere_cylinder",
            params: "n >= 2 (integer), r > 0",
            chart: "(w_1..w_(n-1), t) with |w| < r",
            ambient: "2m >= n",
        },
        CatalogEntry {
            name: "torus_cylinder",
            params: "a > b > 0",
            chart: "(theta, phi, t), any real values",
            ambient: "m >= 2",
        },
        CatalogEntry {
            name: "polynomial_graph",
            params: "n >= 2 (integer), heights: list of polynomials in u_1..u_(n-1), each a list of {coeff, powers}, total degree <= 4",
            chart: "u in R^n, last coordinate is z",
            ambient: "n - 1 + len(heights) <= 2m",
        },
    ]
}

/// Value and partial derivatives of an immersion at a chart point.
#[derive(Clone, Debug)]
pub struct Jet {
    pub position: DVector<f64>,
    /// first[i] = ∂ᵢx
    pub first: Vec<DVector<f64>>,
    /// second[i][j] = ∂ᵢ∂ⱼx
    pub second: Vec<Vec<DVector<f64>>>,
    /// third[i][j][k] = ∂ᵢ∂ⱼ∂ₖx
    pub third: Vec<Vec<Vec<DVector<f64>>>>,
}

/// A validated catalog immersion into ℝ^{2m+1}.
#[derive(Clone, Debug, PartialEq)]
pub struct Immersion {
    spec: Catalog,
    m: usize,
}

fn invalid(msg: String) -> Error {
    Error::Configuration(msg)
}

impl Immersion {
    pub fn new(spec: Catalog, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Dimension(format!("ambient m = {m}, expected m >= 2")));
        }
        match &spec {
            Catalog::LinearInvariant { q } => {
                if *q < 1 || *q > m {
                    return Err(invalid(format!("linear_invariant needs 1 <= q <= m, got q = {q}")));
                }
            }
            Catalog::LinearAntiInvariant { n } => {
                if *n < 2 || n - 1 > m {
                    return Err(invalid(format!("linear_anti_invariant needs 2 <= n <= m+1, got n = {n}")));
                }
            }
            Catalog::LinearSlant { q, theta } => {
                if *q < 1 || 2 * q > m {
                    return Err(invalid(format!("linear_slant needs 1 <= q <= m/2, got q = {q}")));
                }
                if !(0.0..=std::f64::consts::FRAC_PI_2).contains(theta) {
                    return Err(invalid(format!("linear_slant needs theta in [0, pi/2], got {theta}")));
                }
            }
            Catalog::SphereCylinder { n, r } => {
                if *n < 2 || *n > 2 * m {
                    return Err(invalid(format!("sphere_cylinder needs 2 <= n <= 2m, got n = {n}")));
                }
                if !(r.is_finite() && *r > 0.0) {
                    return Err(invalid(format!("sphere_cylinder needs r > 0, got {r}")));
                }
            }
            Catalog::TorusCylinder { a, b } => {
                if !(b.is_finite() && a.is_finite() && *b > 0.0 && a > b) {
                    return Err(invalid(format!("torus_cylinder needs a > b > 0, got a = {a}, b = {b}")));
                }
            }
            Catalog::PolynomialGraph { n, heights } => {
                if *n < 2 || n - 1 + heights.len() > 2 * m {
                    return Err(invalid(format!(
                        "polynomial_graph needs n >= 2 and n - 1 + {} heights <= 2m",
                        heights.len()
                    )));
                }
                for (hi, h) in heights.iter().enumerate() {
                    for t in h {
                        if t.powers.len() != n - 1 {
                            return Err(invalid(format!(
                                "height {hi}: term has {} powers, expected {}",
                                t.powers.len(),
                                n - 1
                            )));
                        }
                        if t.powers.iter().sum::<u32>() > 4 {
                            return Err(invalid(format!("height {hi}: term degree exceeds 4")));
                        }
                        if !t.coeff.is_finite() {
                            return Err(invalid(format!("height {hi}: coefficient is not finite")));
                        }
                    }
                }
            }
        }
        Ok(Self { spec, m })
    }

    pub fn spec(&self) -> &Catalog {
        &self.spec
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ambient_dim(&self) -> usize {
        2 * self.m + 1
    }

    pub fn n(&self) -> usize {
        match &self.spec {
            Catalog::LinearInvariant { q } | Catalog::LinearSlant { q, .. } => 2 * q + 1,
            Catalog::LinearAntiInvariant { n }
            | Catalog::SphereCylinder { n, .. }
            | Catalog::PolynomialGraph { n, .. } => *n,
            Catalog::TorusCylinder { .. } => 3,
        }
    }

    fn z(&self) -> usize {
        2 * self.m
    }

    /// Errors unless u lies in the chart with the given margin.
    pub fn check_domain(&self, u: &[f64], margin: f64) -> Result<()> {
        let n = self.n();
        if u.len() != n {
            return Err(Error::Dimension(format!("chart point has {} coordinates, expected {n}", u.len())));
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("chart point is not finite".into()));
        }
        if let Catalog::SphereCylinder { r, .. } = self.spec {
            let w = u[..n - 1].iter().map(|v| v * v).sum::<f64>().sqrt();
            if w + margin * ((n - 1) as f64).sqrt() >= r {
                return Err(Error::Domain(format!(
                    "chart point |w| = {w} is not inside the sphere chart of radius {r} with margin {margin}"
                )));
            }
        }
        Ok(())
    }

    /// Deterministic interior chart points spread over a bounded region.
    pub fn interior_samples(&self, count: usize) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut out = Vec::with_capacity(count);
        let mut index = 1u64;
        while out.len() < count {
            let h: Vec<f64> = (0..n)
                .map(|d| linalg::radical_inverse(index, [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37][d % 12]))
                .collect();
            index += 1;
            let u: Vec<f64> = match &self.spec {
                Catalog::SphereCylinder { r, .. } => {
                    let mut u: Vec<f64> = h.iter().map(|v| (2.0 * v - 1.0) * 0.6 * r).collect();
                    let w = u[..n - 1].iter().map(|v| v * v).sum::<f64>().sqrt();
                    if w >= 0.6 * r {
                        continue;
                    }
                    u[n - 1] = 2.0 * h[n - 1] - 1.0;
                    u
                }
                Catalog::TorusCylinder { .. } => {
                    let tau = 2.0 * std::f64::consts::PI;
                    vec![tau * h[0], tau * h[1], 2.0 * h[2] - 1.0]
                }
                _ => h.iter().map(|v| 2.0 * v - 1.0).collect(),
            };
            out.push(u);
        }
        out
    }

    /// Mixed partial ∂_{idx}x for an index list of length 0 to 3.
    pub fn partial(&self, u: &[f64], idx: &[usize]) -> DVector<f64> {
        assert!(idx.len() <= 3);
        let n = self.n();
        let dim = self.ambient_dim();
        let m = self.m;
        let z = self.z();
        let mut out = DVector::zeros(dim);
        let last = n - 1;
        let uses_z = idx.contains(&last);

        match &self.spec {
            Catalog::LinearInvariant { .. } | Catalog::LinearAntiInvariant { .. } | Catalog::LinearSlant { .. } => {
                let dirs = self.linear_directions();
                match idx.len() {
                    0 => {
                        for (a, d) in dirs.iter().enumerate() {
                            out += d * u[a];
                        }
                    }
                    1 => out = dirs[idx[0]].clone(),
                    _ => {}
                }
                return out;
            }
            _ => {}
        }

        // z = u_last is linear and decoupled from the rest.
        if uses_z {
            if idx.len() == 1 {
                out[z] = 1.0;
            }
            return out;
        }
        if idx.is_empty() {
            out[z] = u[last];
        }

        match &self.spec {
            Catalog::SphereCylinder { r, .. } => {
                let w = &u[..last];
                let s = (r * r - w.iter().map(|v| v * v).sum::<f64>()).sqrt();
                for (a, wa) in w.iter().enumerate() {
                    out[a] = match idx.len() {
                        0 => *wa,
                        1 if idx[0] == a => 1.0,
                        _ => 0.0,
                    };
                }
                let d = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
                out[last] = match idx {
                    [] => s,
                    [i] => -w[*i] / s,
                    [i, j] => -d(*i, *j) / s - w[*i] * w[*j] / s.powi(3),
                    [i, j, k] => {
                        -(d(*i, *j) * w[*k] + d(*i, *k) * w[*j] + d(*j, *k) * w[*i]) / s.powi(3)
                            - 3.0 * w[*i] * w[*j] * w[*k] / s.powi(5)
                    }
                    _ => unreachable!(),
                };
            }
            Catalog::TorusCylinder { a, b } => {
                let (th, ph) = (u[0], u[1]);
                let p = idx.iter().filter(|&&i| i == 0).count();
                let q = idx.len() - p;
                // k-th derivative of cos / sin
                let dcos = |k: usize, x: f64| match k % 4 {
                    0 => x.cos(),
                    1 => -x.sin(),
                    2 => -x.cos(),
                    _ => x.sin(),
                };
                let dsin = |k: usize, x: f64| match k % 4 {
                    0 => x.sin(),
                    1 => x.cos(),
                    2 => -x.sin(),
                    _ => -x.cos(),
                };
                let rho = if p == 0 { a + b * th.cos() } else { b * dcos(p, th) };
                out[0] = rho * dcos(q, ph);
                out[1] = rho * dsin(q, ph);
                out[m] = if q == 0 { b * dsin(p, th) } else { 0.0 };
            }
            Catalog::PolynomialGraph { heights, .. } => {
                for (a, ua) in u[..last].iter().enumerate() {
                    out[a] = match idx.len() {
                        0 => *ua,
                        1 if idx[0] == a => 1.0,
                        _ => 0.0,
                    };
                }
                for (hi, h) in heights.iter().enumerate() {
                    out[last + hi] = poly_partial(h, &u[..last], idx);
                }
            }
            _ => unreachable!(),
        }
        out
    }

    fn linear_directions(&self) -> Vec<DVector<f64>> {
        let dim = self.ambient_dim();
        let m = self.m;
        let e = |i: usize| {
            let mut v = DVector::zeros(dim);
            v[i] = 1.0;
            v
        };
        let mut dirs = Vec::new();
        match &self.spec {
            Catalog::LinearInvariant { q } => {
                for i in 0..*q {
                    dirs.push(e(i));
                    dirs.push(e(m + i));
                }
            }
            Catalog::LinearAntiInvariant { n } => {
                for i in 0..n - 1 {
                    dirs.push(e(i));
                }
            }
            Catalog::LinearSlant { q, theta } => {
                for i in 0..*q {
                    dirs.push(e(i));
                    dirs.push(e(m + i) * theta.cos() + e(q + i) * theta.sin());
                }
            }
            _ => unreachable!(),
        }
        dirs.push(e(2 * m));
        dirs
    }

    pub fn jet(&self, u: &[f64]) -> Result<Jet> {
        self.check_domain(u, 0.0)?;
        let n = self.n();
        let first = (0..n).map(|i| self.partial(u, &[i])).collect();
        let second = (0..n)
            .map(|i| (0..n).map(|j| self.partial(u, &[i, j])).collect())
            .collect();
        let third = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.partial(u, &[i, j, k])).collect())
                    .collect()
            })
            .collect();
        Ok(Jet {
            position: self.partial(u, &[]),
            first,
            second,
            third,
        })
    }

    /// Induced metric gᵢⱼ = ⟨∂ᵢx, ∂ⱼx⟩ from exact first derivatives.
    pub fn metric(&self, u: &[f64]) -> DMatrix<f64> {
        let n = self.n();
        let d: Vec<DVector<f64>> = (0..n).map(|i| self.partial(u, &[i])).collect();
        DMatrix::from_fn(n, n, |i, j| d[i].dot(&d[j]))
    }
}

fn poly_partial(terms: &[Term], u: &[f64], idx: &[usize]) -> f64 {
    let mut total = 0.0;
    for t in terms {
        let mut powers = t.powers.clone();
        let mut coeff = t.coeff;
        for &i in idx {
            if powers[i] == 0 {
                coeff = 0.0;
                break;
            }
            coeff *= powers[i] as f64;
            powers[i] -= 1;
        }
        if coeff == 0.0 {
            continue;
        }
        total += coeff
            * powers
                .iter()
                .zip(u)
                .map(|(&p, &x)| x.powi(p as i32))
                .product::<f64>();
    }
    total
}

fn check_ambient(s: &AmbientStructure, imm: &Immersion) -> Result<()> {
    if s.m() != imm.m() {
        return Err(Error::Dimension(format!(
            "immersion targets m = {}, ambient has m = {}",
            imm.m(),
            s.m()
        )));
    }
    Ok(())
}

/// Coefficients C with eᵢ = Σ_a C_{ai} ∂_a for the point's tangent frame.
fn frame_coefficients(jac: &DMatrix<f64>, tangent: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let gram = jac.transpose() * jac;
    let chol = gram
        .cholesky()
        .ok_or_else(|| Error::Domain("Jacobian is rank deficient".into()))?;
    Ok(chol.solve(&(jac.transpose() * tangent)))
}

/// Tangent frame from the first derivatives (ξ first), normal frame as the
/// complement, and σ^r_ij = ⟨∂²x(eᵢ, eⱼ), ν_r⟩.
pub fn point_from_immersion(s: &AmbientStructure, imm: &Immersion, u: &[f64]) -> Result<SubmanifoldPoint> {
    check_ambient(s, imm)?;
    let jet = imm.jet(u)?;
    let n = imm.n();
    let dim = imm.ambient_dim();
    let skeleton = build_point(s, &jet.first, SecondFundamentalForm::zeros(n, dim - n))?;
    let jac = DMatrix::from_columns(&jet.first);
    let c = frame_coefficients(&jac, skeleton.tangent_frame())?;
    let nu = skeleton.normal_frame();
    let components = (0..dim - n)
        .map(|r| {
            let nur = nu.column(r);
            let hess = DMatrix::from_fn(n, n, |a, b| jet.second[a][b].dot(&nur));
            let sig = c.transpose() * hess * &c;
            // symmetrize away rounding only
            (&sig + sig.transpose()) * 0.5
        })
        .collect();
    skeleton.with_sigma(SecondFundamentalForm::from_components(n, components)?)
}

/// Intrinsic curvature of the induced metric by finite differences.
#[derive(Clone, Debug)]
pub struct FdCurvature {
    /// In the same orthonormal frame as [`point_from_immersion`].
    pub curvature: InducedCurvature,
    pub step: f64,
    pub warnings: Vec<String>,
}

pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Christoffel symbols Γ^l_jk (index [l][j][k]) at u, with ∂g by central
/// differences of step h.
fn christoffel(imm: &Immersion, u: &[f64], h: f64) -> Vec<DMatrix<f64>> {
    let n = imm.n();
    let dg: Vec<DMatrix<f64>> = (0..n)
        .map(|k| {
            let mut up = u.to_vec();
            let mut dn = u.to_vec();
            up[k] += h;
            dn[k] -= h;
            (imm.metric(&up) - imm.metric(&dn)) / (2.0 * h)
        })
        .collect();
    let ginv = imm
        .metric(u)
        .try_inverse()
        .expect("metric of a full-rank immersion is invertible");
    // lowered Γ_{m,jk} = ½(∂_j g_mk + ∂_k g_mj − ∂_m g_jk)
    let lowered: Vec<DMatrix<f64>> = (0..n)
        .map(|mm| DMatrix::from_fn(n, n, |j, k| 0.5 * (dg[j][(mm, k)] + dg[k][(mm, j)] - dg[mm][(j, k)])))
        .collect();
    (0..n)
        .map(|l| {
            let mut g = DMatrix::zeros(n, n);
            for (mm, low) in lowered.iter().enumerate() {
                g += low * ginv[(l, mm)];
            }
            g
        })
        .collect()
}

pub fn intrinsic_riemann_fd(s: &AmbientStructure, imm: &Immersion, u: &[f64], h: f64) -> Result<FdCurvature> {
    check_ambient(s, imm)?;
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Configuration(format!("finite-difference step must be positive, got {h}")));
    }
    imm.check_domain(u, 2.0 * h)?;
    let mut warnings = Vec::new();
    if h < 1e-7 {
        warnings.push(format!("step {h} is below 1e-7; rounding dominates the differences"));
    }
    let n = imm.n();
    let gamma = christoffel(imm, u, h);
    let dgamma: Vec<Vec<DMatrix<f64>>> = (0..n)
        .map(|i| {
            let mut up = u.to_vec();
            let mut dn = u.to_vec();
            up[i] += h;
            dn[i] -= h;
            let gp = christoffel(imm, &up, h);
            let gm = christoffel(imm, &dn, h);
            gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * h)).collect()
        })
        .collect();
    let g = imm.metric(u);

    // R^l_ijk = ∂ᵢΓ^l_jk − ∂ⱼΓ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik
    let idx4 = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
    let mut up = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = dgamma[i][l][(j, k)] - dgamma[j][l][(i, k)];
                    for mm in 0..n {
                        v += gamma[l][(i, mm)] * gamma[mm][(j, k)] - gamma[l][(j, mm)] * gamma[mm][(i, k)];
                    }
                    up[idx4(i, j, k, l)] = v;
                }
            }
        }
    }
    let mut coord = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    coord[idx4(i, j, k, l)] = (0..n).map(|mm| g[(l, mm)] * up[idx4(i, j, k, mm)]).sum();
                }
            }
        }
    }

    let jet_first: Vec<DVector<f64>> = (0..n).map(|i| imm.partial(u, &[i])).collect();
    let skeleton = build_point(s, &jet_first, SecondFundamentalForm::zeros(n, imm.ambient_dim() - n))?;
    let c = frame_coefficients(&DMatrix::from_columns(&jet_first), skeleton.tangent_frame())?;
    let orth = transform4(&coord, &c, n);
    Ok(FdCurvature {
        curvature: InducedCurvature::from_array(n, orth),
        step: h,
        warnings,
    })
}

/// T'_{ijkl} = Σ C_ai C_bj C_ck C_dl T_abcd, one index at a time.
fn transform4(t: &[f64], c: &DMatrix<f64>, n: usize) -> Vec<f64> {
    let mut cur = t.to_vec();
    for slot in 0..4 {
        let stride = n.pow(3 - slot as u32);
        let mut next = vec![0.0; cur.len()];
        for (pos, out) in next.iter_mut().enumerate() {
            let new_i = (pos / stride) % n;
            let base = pos - new_i * stride;
            *out = (0..n).map(|a| c[(a, new_i)] * cur[base + a * stride]).sum();
        }
        cur = next;
    }
    cur
}

#[derive(Clone, Debug)]
pub struct GaussOracle {
    /// Largest absolute entry of the difference.
    pub residual: f64,
    /// Gauss-equation curvature from σ.
    pub algebraic: InducedCurvature,
    /// Finite-difference curvature of the induced metric.
    pub intrinsic: InducedCurvature,
    pub warnings: Vec<String>,
}

pub fn gauss_residual(s: &AmbientStructure, imm: &Immersion, u: &[f64]) -> Result<GaussOracle> {
    gauss_residual_step(s, imm, u, DEFAULT_FD_STEP)
}

pub fn gauss_residual_step(s: &AmbientStructure, imm: &Immersion, u: &[f64], h: f64) -> Result<GaussOracle> {
    if !s.params().is_flat() {
        return Err(Error::Configuration(
            "the immersion oracle needs the flat model c = f = f' = 0".into(),
        ));
    }
    let p = point_from_immersion(s, imm, u)?;
    let algebraic = induced_curvature(s, &p)?;
    let fd = intrinsic_riemann_fd(s, imm, u, h)?;
    let residual = algebraic
        .as_slice()
        .iter()
        .zip(fd.curvature.as_slice())
        .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
    Ok(GaussOracle {
        residual,
        algebraic,
        intrinsic: fd.curvature,
        warnings: fd.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::CurvatureParams;
    use crate::subpoint::{classify, mean_curvature, Kind};
    use crate::tol;

    fn flat(m: usize) -> AmbientStructure {
        AmbientStructure::standard(m, CurvatureParams::flat()).unwrap()
    }

    fn sphere(r: f64) -> Immersion {
        Immersion::new(Catalog::SphereCylinder { n: 3, r }, 2).unwrap()
    }

    fn torus() -> Immersion {
        Immersion::new(Catalog::TorusCylinder { a: 2.0, b: 0.7 }, 2).unwrap()
    }

    #[test]
    fn linear_immersions_are_flat_and_classified() {
        let s = flat(2);
        let inv = Immersion::new(Catalog::LinearInvariant { q: 1 }, 2).unwrap();
        let anti = Immersion::new(Catalog::LinearAntiInvariant { n: 3 }, 2).unwrap();
        let sl = Immersion::new(Catalog::LinearSlant { q: 1, theta: 1.0 }, 2).unwrap();
        let u = [0.3, -0.2, 0.5];
        for (imm, want) in [
            (&inv, Kind::Invariant),
            (&anti, Kind::AntiInvariant),
            (&sl, Kind::Slant { theta: 1.0 }),
        ] {
            let p = point_from_immersion(&s, imm, &u).unwrap();
            assert_eq!(p.sigma().max_abs(), 0.0);
            let g = gauss_residual(&s, imm, &u).unwrap();
            assert!(g.residual < 1e-8);
            let cls = classify(&s, &p, tol::ANGLE).unwrap();
            match (cls.kind, want) {
                (Kind::Slant { theta }, Kind::Slant { theta: w }) => assert!((theta - w).abs() < 1e-6),
                (k, w) => assert_eq!(k, w),
            }
        }
    }

    #[test]
    fn sphere_cylinder_closed_forms() {
        let s = flat(2);
        for r in [1.0, 2.5] {
            let imm = sphere(r);
            for u in imm.interior_samples(5) {
                let p = point_from_immersion(&s, &imm, &u).unwrap();
                let h = mean_curvature(&p);
                assert!((h.norm_sq.sqrt() - 2.0 / (3.0 * r)).abs() < 1e-10);
                let ic = induced_curvature(&s, &p).unwrap();
                assert!((ic.tau - 1.0 / (r * r)).abs() < 1e-10);
                // σ vanishes along ξ = e₁
                for a in p.sigma().components() {
                    assert!(a.row(0).amax() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn torus_closed_forms() {
        let s = flat(2);
        let (a, b) = (2.0, 0.7);
        let imm = torus();
        for u in imm.interior_samples(8) {
            let th = u[0];
            let p = point_from_immersion(&s, &imm, &u).unwrap();
            let k_tor = th.cos() / (b * (a + b * th.cos()));
            let k_phi = th.cos() / (a + b * th.cos());
            assert!((p.sigma().norm_sq() - (1.0 / (b * b) + k_phi * k_phi)).abs() < 1e-8);
            let ic = induced_curvature(&s, &p).unwrap();
            assert!((ic.tau - k_tor).abs() < 1e-8);
            let fd = intrinsic_riemann_fd(&s, &imm, &u, DEFAULT_FD_STEP).unwrap();
            assert!((fd.curvature.tau - k_tor).abs() < 5e-4);
        }
    }

    #[test]
    fn fd_converges_at_second_order() {
        let s = flat(2);
        let imm = sphere(1.0);
        let u = [0.31, -0.22, 0.4];
        let err = |h: f64| {
            let fd = intrinsic_riemann_fd(&s, &imm, &u, h).unwrap();
            let p = point_from_immersion(&s, &imm, &u).unwrap();
            let exact = induced_curvature(&s, &p).unwrap();
            exact
                .as_slice()
                .iter()
                .zip(fd.curvature.as_slice())
                .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()))
        };
        let ratio = err(1e-2) / err(5e-3);
        assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio}");
    }

    #[test]
    fn third_derivatives_match_differences_of_second() {
        let imm = Immersion::new(
            Catalog::PolynomialGraph {
                n: 3,
                heights: vec![vec![
                    Term { coeff: 0.5, powers: vec![2, 1] },
                    Term { coeff: -0.3, powers: vec![0, 4] },
                ]],
            },
            2,
        )
        .unwrap();
        for spec in [&imm, &sphere(1.3), &torus()] {
            let u = spec.interior_samples(1).remove(0);
            let jet = spec.jet(&u).unwrap();
            let h = 1e-5;
            for k in 0..3 {
                let mut up = u.clone();
                let mut dn = u.clone();
                up[k] += h;
                dn[k] -= h;
                for i in 0..3 {
                    for j in 0..3 {
                        let fd = (spec.partial(&up, &[i, j]) - spec.partial(&dn, &[i, j])) / (2.0 * h);
                        assert!((fd - &jet.third[i][j][k]).amax() < 1e-6);
                    }
                }
            }
        }
    }

    #[test]
    fn catalog_gauss_residuals() {
        let s = flat(2);
        let graph = Immersion::new(
            Catalog::PolynomialGraph {
                n: 3,
                heights: vec![
                    vec![Term { coeff: 0.4, powers: vec![2, 0] }, Term { coeff: 0.2, powers: vec![1, 1] }],
                    vec![Term { coeff: -0.1, powers: vec![1, 3] }],
                ],
            },
            2,
        )
        .unwrap();
        for imm in [sphere(1.0), torus(), graph] {
            for u in imm.interior_samples(25) {
                let g = gauss_residual(&s, &imm, &u).unwrap();
                assert!(g.residual < 5e-4, "{:?} at {u:?}: {}", imm.spec(), g.residual);
                let p = point_from_immersion(&s, &imm, &u).unwrap();
                for a in p.sigma().components() {
                    assert!((a - a.transpose()).amax() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            Immersion::new(Catalog::SphereCylinder { n: 3, r: -1.0 }, 2),
            Err(Error::Configuration(_))
        ));
        assert!(matches!(
            Immersion::new(Catalog::TorusCylinder { a: 1.0, b: 2.0 }, 2),
            Err(Error::Configuration(_))
        ));
        let imm = sphere(1.0);
        assert!(matches!(imm.jet(&[0.9, 0.9, 0.0]), Err(Error::Domain(_))));
        let curved = AmbientStructure::standard(2, CurvatureParams::new(1.0, 0.0, 0.0)).unwrap();
        assert!(matches!(
            gauss_residual(&curved, &imm, &[0.1, 0.1, 0.0]),
            Err(Error::Configuration(_))
        ));
        let fd = intrinsic_riemann_fd(&flat(2), &imm, &[0.1, 0.1, 0.0], 1e-8).unwrap();
        assert_eq!(fd.warnings.len(), 1);
        assert!(matches!(point_from_immersion(&flat(3), &imm, &[0.1, 0.1, 0.0]), Err(Error::Dimension(_))));
    }

    #[test]
    fn catalog_round_trips_through_json() {
        let v: Catalog =
            serde_json::from_str(r#"{"name":"sphere_cylinder","params":{"n":3,"r":1.0}}"#).unwrap();
        assert_eq!(v, Catalog::SphereCylinder { n: 3, r: 1.0 });
        assert_eq!(catalog().len(), 6);
    }
}
