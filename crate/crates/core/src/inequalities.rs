//! Scalar, Ricci and k-Ricci curvature bounds with slack accounting and
//! equality diagnosis.
//!
//! Every right-hand side is assembled term by term from its closed form.
//! Specialized bounds (slant, invariant, anti-invariant, CR) are emitted
//! next to the general one whenever the classification applies, so the two
//! can be compared.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientStructure, CurvatureParams};
use crate::error::{Error, Result};
use crate::invariants::{induced_curvature, ricci, ThetaK};
use crate::linalg;
use crate::subpoint::{mean_curvature, phi_split, Classification, Kind, SubmanifoldPoint};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// lhs ≤ rhs
    Le,
    /// lhs ≥ rhs
    Ge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnosis {
    None,
    /// Equality holds iff σ = 0.
    TotallyGeodesic { geodesic: bool },
    /// Equality at X holds iff σ(X,Y) = 0 for Y ⊥ X and 2σ(X,X) = trace σ;
    /// at a minimal point this is X ∈ N_p.
    RicciConditions {
        conditions: bool,
        minimal: bool,
        in_null_space: bool,
    },
}

impl Diagnosis {
    fn characterizes_equality(&self) -> Option<bool> {
        match self {
            Diagnosis::None => None,
            Diagnosis::TotallyGeodesic { geodesic } => Some(*geodesic),
            Diagnosis::RicciConditions { conditions, .. } => Some(*conditions),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    /// rhs - lhs for ≤, lhs - rhs for ≥.
    pub slack: f64,
    pub holds: bool,
    /// Equality case: the exact characterization when one is known,
    /// otherwise `slack_vanishes`.
    pub equality: bool,
    /// |slack| below [`tol::EQUALITY`] relative to the magnitudes involved.
    pub slack_vanishes: bool,
    pub diagnosis: Diagnosis,
    pub classification: Option<String>,
    /// θ_k came from a heuristic outer search.
    pub heuristic_outer: bool,
}

impl InequalityReport {
    pub fn new(name: &str, relation: Relation, lhs: f64, rhs: f64, diagnosis: Diagnosis) -> Self {
        let slack = match relation {
            Relation::Le => rhs - lhs,
            Relation::Ge => lhs - rhs,
        };
        let scale = 1.0 + lhs.abs() + rhs.abs();
        let holds = slack / scale >= -tol::HOLDS;
        let slack_vanishes = slack.abs() <= tol::EQUALITY * scale;
        let equality = holds && diagnosis.characterizes_equality().unwrap_or(slack_vanishes);
        Self {
            name: name.to_string(),
            relation,
            lhs,
            rhs,
            slack,
            holds,
            equality,
            slack_vanishes,
            diagnosis,
            classification: None,
            heuristic_outer: false,
        }
    }

    fn classified(mut self, cls: &Classification) -> Self {
        self.classification = Some(cls.kind.label().to_string());
        self
    }
}

/// Both sides of n²‖H‖² = 2τ + ‖σ‖² - ¼n(n-1)(c-3f²) - ¾‖P‖²(c+f²)
/// + 2(n-1)((c+f²)/4 + f′).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// Sum of absolute values of all terms.
    pub scale: f64,
    pub normalized: f64,
}

pub fn identity_tau_check(s: &AmbientStructure, p: &SubmanifoldPoint) -> Result<IdentityResidual> {
    let ic = induced_curvature(s, p)?;
    let n = p.n() as f64;
    let h2 = mean_curvature(p).norm_sq;
    let norm_p_sq = phi_split(s, p).norm_p_sq;
    let cp = s.params();
    let terms = [
        2.0 * ic.tau,
        p.sigma().norm_sq(),
        -0.25 * n * (n - 1.0) * (cp.c - 3.0 * cp.f * cp.f),
        -0.75 * norm_p_sq * (cp.c + cp.f * cp.f),
        2.0 * (n - 1.0) * cp.eta_coeff(),
    ];
    let lhs = n * n * h2;
    let rhs: f64 = terms.iter().sum();
    let residual = lhs - rhs;
    let scale = lhs.abs() + terms.iter().map(|t| t.abs()).sum::<f64>();
    Ok(IdentityResidual {
        lhs,
        rhs,
        residual,
        scale,
        normalized: residual.abs() / (1.0 + scale),
    })
}

#[derive(Clone, Debug)]
pub enum EqualityMode {
    Geodesic,
    Umbilic,
    /// Equality conditions of the Ricci bound at a unit tangent X (frame
    /// coordinates); at a minimal point they say X ∈ N_p.
    NullSpace(DVector<f64>),
}

/// Pointwise equality criteria at [`tol::EQUALITY`].
pub fn equality_diagnose(p: &SubmanifoldPoint, mode: &EqualityMode) -> bool {
    equality_diagnose_tol(p, mode, tol::EQUALITY)
}

pub fn equality_diagnose_tol(p: &SubmanifoldPoint, mode: &EqualityMode, tol: f64) -> bool {
    match mode {
        EqualityMode::Geodesic => p.sigma().norm_sq().sqrt() < tol,
        EqualityMode::Umbilic => {
            let h = mean_curvature(p);
            let n = p.n();
            p.sigma().components().iter().enumerate().all(|(r, a)| {
                let mut d = a.clone();
                for i in 0..n {
                    d[(i, i)] -= h.coeffs[r];
                }
                linalg::max_abs(&d) < tol
            })
        }
        EqualityMode::NullSpace(x) => ricci_condition_defect(p, x) < tol,
    }
}

/// Largest violation of σ(X,Y) = 0 (Y ⊥ X) and 2σ(X,X) = trace σ.
fn ricci_condition_defect(p: &SubmanifoldPoint, x: &DVector<f64>) -> f64 {
    let mut worst = 0.0f64;
    for a in p.sigma().components() {
        let ax = a * x;
        let sxx = x.dot(&ax);
        // component of A X orthogonal to X is (σ(X, Y))_Y for Y ⊥ X
        let off = (&ax - x * sxx).amax();
        let diag = (2.0 * sxx - a.trace()).abs();
        worst = worst.max(off).max(diag);
    }
    worst
}

fn in_null_space(p: &SubmanifoldPoint, x: &DVector<f64>, tol: f64) -> bool {
    p.sigma().components().iter().all(|a| (a * x).amax() < tol)
}

/// Checks that `cls` actually describes this point.
pub fn check_classification(s: &AmbientStructure, p: &SubmanifoldPoint, cls: &Classification) -> Result<()> {
    let n = p.n();
    let actual = phi_split(s, p).norm_p_sq;
    let nf = n as f64;
    let close = |a: f64, b: f64, t: f64| (a - b).abs() <= t * (1.0 + a.abs() + b.abs());
    if !close(actual, cls.norm_p_sq, 1e-7) {
        return Err(Error::Configuration(format!(
            "classification has |P|^2 = {}, the point has {actual}",
            cls.norm_p_sq
        )));
    }
    let angle_slack = 4.0 * (nf - 1.0) * cls.tol_angle.max(tol::ANGLE) + 1e-9;
    let implied = match &cls.kind {
        Kind::Generic => return Ok(()),
        Kind::Cr { h, dim_d_perp } => {
            if 2 * h + dim_d_perp + 1 != n {
                return Err(Error::Configuration(format!(
                    "CR split 2h + dim D-perp + 1 = {} does not match n = {n}",
                    2 * h + dim_d_perp + 1
                )));
            }
            (2 * h) as f64
        }
        k => (nf - 1.0) * k.slant_angle().expect("slant type").cos().powi(2),
    };
    if !close(actual, implied, angle_slack) {
        return Err(Error::Configuration(format!(
            "{} bounds do not apply: |P|^2 = {actual} but the classification implies {implied}",
            cls.kind.label()
        )));
    }
    Ok(())
}

/// ½n²‖H‖² + ⅛n(n-1)(c-3f²) + ⅛{3‖P‖² - 2(n-1)}(c+f²) - (n-1)f′.
pub fn scalar_rhs_general(n: usize, h2: f64, norm_p_sq: f64, cp: CurvatureParams) -> f64 {
    let n = n as f64;
    let f2 = cp.f * cp.f;
    0.5 * n * n * h2 + n * (n - 1.0) * (cp.c - 3.0 * f2) / 8.0
        + (3.0 * norm_p_sq - 2.0 * (n - 1.0)) * (cp.c + f2) / 8.0
        - (n - 1.0) * cp.f_prime
}

pub fn scalar_rhs_slant(n: usize, h2: f64, theta: f64, cp: CurvatureParams) -> f64 {
    let n = n as f64;
    let f2 = cp.f * cp.f;
    let cos2 = theta.cos().powi(2);
    0.5 * n * n * h2
        + (n - 1.0) / 8.0 * (n * (cp.c - 3.0 * f2) + (3.0 * cos2 - 2.0) * (cp.c + f2) - 8.0 * cp.f_prime)
}

pub fn scalar_rhs_invariant(n: usize, h2: f64, cp: CurvatureParams) -> f64 {
    let n = n as f64;
    let f2 = cp.f * cp.f;
    0.5 * n * n * h2 + (n - 1.0) / 8.0 * ((n + 1.0) * cp.c - (3.0 * n - 1.0) * f2 - 8.0 * cp.f_prime)
}

pub fn scalar_rhs_anti_invariant(n: usize, h2: f64, cp: CurvatureParams) -> f64 {
    let n = n as f64;
    let f2 = cp.f * cp.f;
    0.5 * n * n * h2 + (n - 1.0) / 8.0 * ((n - 2.0) * cp.c - (3.0 * n + 2.0) * f2 - 8.0 * cp.f_prime)
}

pub fn scalar_rhs_cr(n: usize, h2: f64, h: usize, cp: CurvatureParams) -> f64 {
    let n = n as f64;
    let f2 = cp.f * cp.f;
    0.5 * n * n * h2 + n * (n - 1.0) * (cp.c - 3.0 * f2) / 8.0
        + (6.0 * h as f64 - 2.0 * (n - 1.0)) * (cp.c + f2) / 8.0
        - (n - 1.0) * cp.f_prime
}

/// τ ≤ bound, the general form plus every specialization that applies to
/// `cls`. Equality is characterized by σ = 0.
pub fn scalar_suite(s: &AmbientStructure, p: &SubmanifoldPoint, cls: &Classification) -> Result<Vec<InequalityReport>> {
    check_classification(s, p, cls)?;
    let ic = induced_curvature(s, p)?;
    let n = p.n();
    let h2 = mean_curvature(p).norm_sq;
    let norm_p_sq = phi_split(s, p).norm_p_sq;
    let cp = s.params();
    let diag = || Diagnosis::TotallyGeodesic {
        geodesic: equality_diagnose(p, &EqualityMode::Geodesic),
    };
    let report = |name: &str, rhs: f64| {
        InequalityReport::new(name, Relation::Le, ic.tau, rhs, diag()).classified(cls)
    };

    let mut out = vec![report("scalar-lc", scalar_rhs_general(n, h2, norm_p_sq, cp))];
    if let Some(theta) = cls.kind.slant_angle() {
        out.push(report("scalar-lc-slant", scalar_rhs_slant(n, h2, theta, cp)));
    }
    match cls.kind {
        Kind::Invariant => out.push(report("scalar-lc-inv", scalar_rhs_invariant(n, h2, cp))),
        Kind::AntiInvariant => out.push(report("scalar-lc-anti", scalar_rhs_anti_invariant(n, h2, cp))),
        Kind::Cr { h, .. } => out.push(report("scalar-lc-cr", scalar_rhs_cr(n, h2, h, cp))),
        _ => {}
    }
    Ok(out)
}

/// ¼{n²‖H‖² + (n-1)(c-3f²) + (3‖PX‖² - (n-2)η(X)² - 1)(c+f²)}
/// - (1 + (n-2)η(X)²)f′.
pub fn ricci_rhs_general(n: usize, h2: f64, px_sq: f64, eta_x: f64, cp: CurvatureParams) -> f64 {
    let n = n as f64;
    let f2 = cp.f * cp.f;
    let e2 = eta_x * eta_x;
    0.25 * (n * n * h2 + (n - 1.0) * (cp.c - 3.0 * f2) + (3.0 * px_sq - (n - 2.0) * e2 - 1.0) * (cp.c + f2))
        - (1.0 + (n - 2.0) * e2) * cp.f_prime
}

pub fn ricci_rhs_slant(n: usize, h2: f64, theta: f64, eta_x: f64, cp: CurvatureParams) -> f64 {
    let n = n as f64;
    let f2 = cp.f * cp.f;
    let e2 = eta_x * eta_x;
    let cos2 = theta.cos().powi(2);
    0.25 * (n * n * h2
        + (n - 1.0) * (cp.c - 3.0 * f2)
        + (3.0 * cos2 - (n + 3.0 * cos2 - 2.0) * e2 - 1.0) * (cp.c + f2))
        - (1.0 + (n - 2.0) * e2) * cp.f_prime
}

pub fn ricci_rhs_invariant(n: usize, h2: f64, eta_x: f64, cp: CurvatureParams) -> f64 {
    let n = n as f64;
    let f2 = cp.f * cp.f;
    let e2 = eta_x * eta_x;
    0.25 * (n * n * h2 + (n - 1.0) * (cp.c - 3.0 * f2) + (2.0 - (n + 1.0) * e2) * (cp.c + f2))
        - (1.0 + (n - 2.0) * e2) * cp.f_prime
}

pub fn ricci_rhs_anti_invariant(n: usize, h2: f64, eta_x: f64, cp: CurvatureParams) -> f64 {
    let n = n as f64;
    let f2 = cp.f * cp.f;
    let e2 = eta_x * eta_x;
    0.25 * (n * n * h2 + (n - 1.0) * (cp.c - 3.0 * f2)
        - (1.0 + (n - 2.0) * e2) * (cp.c + f2 + 4.0 * cp.f_prime))
}

/// Bound for unit X ∈ D, divided through by 4.
pub fn ricci_rhs_cr_d(n: usize, h2: f64, cp: CurvatureParams) -> f64 {
    let n = n as f64;
    let f2 = cp.f * cp.f;
    (n * n * h2 + (n + 1.0) * cp.c - (3.0 * n - 5.0) * f2 - 4.0 * cp.f_prime) / 4.0
}

/// Bound for unit X ∈ D⊥, divided through by 4.
pub fn ricci_rhs_cr_d_perp(n: usize, h2: f64, cp: CurvatureParams) -> f64 {
    let n = n as f64;
    let f2 = cp.f * cp.f;
    (n * n * h2 + (n - 2.0) * cp.c - (3.0 * n - 2.0) * f2 - 4.0 * cp.f_prime) / 4.0
}

struct RicciInputs {
    ric: f64,
    h2: f64,
    px_sq: f64,
    eta_x: f64,
    diagnosis: Diagnosis,
}

fn ricci_inputs(s: &AmbientStructure, p: &SubmanifoldPoint, x: &DVector<f64>) -> Result<RicciInputs> {
    let ic = induced_curvature(s, p)?;
    let ric = ricci(&ic, x)?;
    let h = mean_curvature(p);
    let px_sq = (phi_split(s, p).p * x).norm_squared();
    let eta_x = p.eta_coords(s).dot(x);
    let minimal = h.norm_sq.sqrt() < tol::EQUALITY;
    let diagnosis = Diagnosis::RicciConditions {
        conditions: equality_diagnose(p, &EqualityMode::NullSpace(x.clone())),
        minimal,
        in_null_space: in_null_space(p, x, tol::EQUALITY),
    };
    Ok(RicciInputs {
        ric,
        h2: h.norm_sq,
        px_sq,
        eta_x,
        diagnosis,
    })
}

/// Ric(X) ≤ bound for a unit tangent X (frame coordinates): the general
/// form plus the slant/invariant/anti-invariant forms, and the CR forms when
/// X lies in D or D⊥.
pub fn ricci_suite(
    s: &AmbientStructure,
    p: &SubmanifoldPoint,
    x: &DVector<f64>,
    cls: &Classification,
) -> Result<Vec<InequalityReport>> {
    check_classification(s, p, cls)?;
    let inp = ricci_inputs(s, p, x)?;
    let n = p.n();
    let cp = s.params();
    let report = |name: &str, rhs: f64| {
        InequalityReport::new(name, Relation::Le, inp.ric, rhs, inp.diagnosis.clone()).classified(cls)
    };
    let mut out = vec![report("ricci-1", ricci_rhs_general(n, inp.h2, inp.px_sq, inp.eta_x, cp))];
    if let Some(theta) = cls.kind.slant_angle() {
        out.push(report("ricci-slant", ricci_rhs_slant(n, inp.h2, theta, inp.eta_x, cp)));
    }
    match cls.kind {
        Kind::Invariant => out.push(report("ricci-inv", ricci_rhs_invariant(n, inp.h2, inp.eta_x, cp))),
        Kind::AntiInvariant => out.push(report("ricci-anti", ricci_rhs_anti_invariant(n, inp.h2, inp.eta_x, cp))),
        Kind::Cr { .. } => {
            if cls.in_d(x) {
                out.push(report("ricci-cr-1", ricci_rhs_cr_d(n, inp.h2, cp)));
            } else if cls.in_d_perp(x) {
                out.push(report("ricci-cr-2", ricci_rhs_cr_d_perp(n, inp.h2, cp)));
            }
        }
        _ => {}
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrDistribution {
    D,
    DPerp,
}

/// The CR Ricci bound for X in the requested distribution; errors when X is
/// not in it.
pub fn ricci_cr_bound(
    s: &AmbientStructure,
    p: &SubmanifoldPoint,
    x: &DVector<f64>,
    cls: &Classification,
    which: CrDistribution,
) -> Result<InequalityReport> {
    check_classification(s, p, cls)?;
    if !matches!(cls.kind, Kind::Cr { .. }) {
        return Err(Error::Configuration(format!(
            "CR Ricci bound requested for a {} point",
            cls.kind.label()
        )));
    }
    let member = match which {
        CrDistribution::D => cls.in_d(x),
        CrDistribution::DPerp => cls.in_d_perp(x),
    };
    if !member {
        return Err(Error::Domain(format!("X does not lie in {which:?}")));
    }
    let inp = ricci_inputs(s, p, x)?;
    let n = p.n();
    let (name, rhs) = match which {
        CrDistribution::D => ("ricci-cr-1", ricci_rhs_cr_d(n, inp.h2, s.params())),
        CrDistribution::DPerp => ("ricci-cr-2", ricci_rhs_cr_d_perp(n, inp.h2, s.params())),
    };
    Ok(InequalityReport::new(name, Relation::Le, inp.ric, rhs, inp.diagnosis).classified(cls))
}

/// Equality of the Ricci bound for every unit X at once.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RicciSweep {
    /// σ^r_ij = 0 (i ≠ j) and 2σ^r_ii = trace A_r for every frame index.
    pub conditions_hold: bool,
    pub conditions_defect: f64,
    /// Slack of the general bound vanishes at every frame direction.
    pub frame_equal: bool,
    /// Slack vanishes at every sampled direction.
    pub sampled_equal: bool,
    pub samples: usize,
    /// Totally geodesic, or n = 2 and totally umbilical.
    pub geodesic_or_umbilic_surface: bool,
}

pub fn ricci_equality_sweep(s: &AmbientStructure, p: &SubmanifoldPoint) -> Result<RicciSweep> {
    let n = p.n();
    let ic = induced_curvature(s, p)?;
    let h2 = mean_curvature(p).norm_sq;
    let pm = phi_split(s, p).p;
    let eta = p.eta_coords(s);
    let cp = s.params();
    let vanishes = |x: &DVector<f64>| -> Result<bool> {
        let lhs = ricci(&ic, x)?;
        let rhs = ricci_rhs_general(n, h2, (&pm * x).norm_squared(), eta.dot(x), cp);
        let scale = 1.0 + lhs.abs() + rhs.abs();
        Ok((rhs - lhs).abs() <= tol::EQUALITY * scale)
    };

    let mut defect = 0.0f64;
    for a in p.sigma().components() {
        let tr = a.trace();
        for i in 0..n {
            defect = defect.max((2.0 * a[(i, i)] - tr).abs());
            for j in 0..n {
                if i != j {
                    defect = defect.max(a[(i, j)].abs());
                }
            }
        }
    }

    let mut frame_equal = true;
    for i in 0..n {
        let mut x = DVector::zeros(n);
        x[i] = 1.0;
        frame_equal &= vanishes(&x)?;
    }
    let net = linalg::sphere_net(n, 256);
    let mut sampled_equal = true;
    for x in &net {
        sampled_equal &= vanishes(x)?;
    }
    let geodesic = equality_diagnose(p, &EqualityMode::Geodesic);
    let umbilic = equality_diagnose(p, &EqualityMode::Umbilic);
    Ok(RicciSweep {
        conditions_hold: defect < tol::EQUALITY,
        conditions_defect: defect,
        frame_equal,
        sampled_equal,
        samples: net.len(),
        geodesic_or_umbilic_surface: geodesic || (n == 2 && umbilic),
    })
}

/// -(c-3f²)/4 + (2/n)((c+f²)/4 + f′): the part shared by every k-Ricci
/// bound.
fn kricci_common(n: f64, cp: CurvatureParams) -> f64 {
    -cp.metric_coeff() + 2.0 / n * cp.eta_coeff()
}

pub fn kricci_rhs_general(n: usize, lead: f64, norm_p_sq: f64, cp: CurvatureParams) -> f64 {
    let nf = n as f64;
    lead - 3.0 * norm_p_sq * (cp.c + cp.f * cp.f) / (4.0 * nf * (nf - 1.0)) + kricci_common(nf, cp)
}

pub fn kricci_rhs_slant(n: usize, theta_k: f64, theta: f64, cp: CurvatureParams) -> f64 {
    let nf = n as f64;
    theta_k - 3.0 * (cp.c + cp.f * cp.f) * theta.cos().powi(2) / (4.0 * nf) + kricci_common(nf, cp)
}

pub fn kricci_rhs_invariant(n: usize, theta_k: f64, cp: CurvatureParams) -> f64 {
    let nf = n as f64;
    theta_k - 3.0 * (cp.c + cp.f * cp.f) / (4.0 * nf) + kricci_common(nf, cp)
}

pub fn kricci_rhs_anti_invariant(n: usize, theta_k: f64, cp: CurvatureParams) -> f64 {
    theta_k + kricci_common(n as f64, cp)
}

pub fn kricci_rhs_cr(n: usize, theta_k: f64, h: usize, cp: CurvatureParams) -> f64 {
    let nf = n as f64;
    theta_k - 6.0 * h as f64 * (cp.c + cp.f * cp.f) / (4.0 * nf * (nf - 1.0)) + kricci_common(nf, cp)
}

/// ‖H‖² ≥ bound: the scalar-curvature form, the θ_k form, and the
/// classification-specific θ_k forms.
pub fn kricci_suite(
    s: &AmbientStructure,
    p: &SubmanifoldPoint,
    k: usize,
    theta: &ThetaK,
    cls: &Classification,
) -> Result<Vec<InequalityReport>> {
    let n = p.n();
    if k < 2 || k > n {
        return Err(Error::Domain(format!("k out of range [2,{n}]")));
    }
    if theta.k != k {
        return Err(Error::Configuration(format!(
            "theta_k was computed for k = {}, bound requested for k = {k}",
            theta.k
        )));
    }
    check_classification(s, p, cls)?;
    let ic = induced_curvature(s, p)?;
    let h2 = mean_curvature(p).norm_sq;
    let norm_p_sq = phi_split(s, p).norm_p_sq;
    let cp = s.params();
    let nf = n as f64;
    let tk = theta.value;

    let plain = |name: &str, rhs: f64| {
        InequalityReport::new(name, Relation::Ge, h2, rhs, Diagnosis::None).classified(cls)
    };
    let with_theta = |name: &str, rhs: f64| {
        let mut r = plain(name, rhs);
        r.heuristic_outer = theta.heuristic_outer;
        r
    };

    let mut out = vec![
        plain("kricci", kricci_rhs_general(n, 2.0 * ic.tau / (nf * (nf - 1.0)), norm_p_sq, cp)),
        with_theta("kricci-prime", kricci_rhs_general(n, tk, norm_p_sq, cp)),
    ];
    match cls.kind {
        Kind::Slant { theta } => out.push(with_theta("kricci-prime-slant", kricci_rhs_slant(n, tk, theta, cp))),
        Kind::Invariant => out.push(with_theta("kricci-prime-inv", kricci_rhs_invariant(n, tk, cp))),
        Kind::AntiInvariant => out.push(with_theta("kricci-prime-anti", kricci_rhs_anti_invariant(n, tk, cp))),
        Kind::Cr { h, .. } => out.push(with_theta("kricci-prime-cr", kricci_rhs_cr(n, tk, h, cp))),
        Kind::Generic => {}
    }
    Ok(out)
}
