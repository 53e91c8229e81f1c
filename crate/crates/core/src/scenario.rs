//! JSON scenarios: load, validate, run the requested checks in order and
//! produce a report.
//!
//! Matrices are row-major arrays; σ is `[r][i][j]` in the normalized frames
//! (tangent frame starting with ξ, normal frame the computed complement).

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::ambient::{validate_structure, AmbientStructure, CurvatureParams, StructureData, Violation};
use crate::error::Error;
use crate::immersion::{gauss_residual_step, point_from_immersion, Catalog, Immersion, DEFAULT_FD_STEP};
use crate::inequalities::{identity_tau_check, kricci_suite, ricci_suite, scalar_suite, IdentityResidual, InequalityReport};
use crate::invariants::{gauss_cross_check, induced_curvature, theta_k, SearchConfig, ThetaK};
use crate::subpoint::{build_point, classify, sigma_norms, Classification, SecondFundamentalForm, SubmanifoldPoint};
use crate::tol;

pub const SCHEMA_VERSION: u32 = 1;

/// Largest finite-difference Gauss residual accepted for catalog immersions.
pub const GAUSS_FD_THRESHOLD: f64 = 5e-4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientSpec {
    pub m: usize,
    pub c: f64,
    pub f: f64,
    pub f_prime: f64,
    /// Optional explicit structure; the standard one is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<f64>>,
}

impl AmbientSpec {
    fn is_standard(&self) -> bool {
        self.phi.is_none() && self.xi.is_none() && self.eta.is_none()
    }

    pub fn structure_data(&self) -> Result<StructureData, Error> {
        let params = CurvatureParams::new(self.c, self.f, self.f_prime);
        let mut data = StructureData::standard(self.m, params);
        let dim = data.dim();
        if let Some(phi) = &self.phi {
            data.phi = matrix(phi, dim, dim, "ambient.phi")?;
        }
        if let Some(xi) = &self.xi {
            data.xi = vector(xi, dim, "ambient.xi")?;
        }
        if let Some(eta) = &self.eta {
            data.eta = vector(eta, dim, "ambient.eta")?;
        }
        Ok(data)
    }
}

fn vector(v: &[f64], len: usize, what: &str) -> Result<DVector<f64>, Error> {
    if v.len() != len {
        return Err(Error::Dimension(format!("{what} has length {}, expected {len}", v.len())));
    }
    Ok(DVector::from_column_slice(v))
}

fn matrix(rows: &[Vec<f64>], nrows: usize, ncols: usize, what: &str) -> Result<DMatrix<f64>, Error> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Dimension(format!("{what} must be {nrows}x{ncols}")));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SubmanifoldSpec {
    AlgebraicPoint {
        /// Spanning tangent vectors in ambient coordinates.
        frame: Vec<Vec<f64>>,
        /// σ as [r][i][j].
        sigma: Vec<Vec<Vec<f64>>>,
    },
    Immersion {
        name: String,
        #[serde(default)]
        params: serde_json::Value,
        chart_point: Vec<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Structure,
    IdentityTau,
    Scalar,
    Ricci,
    KRicci,
    GaussOracle,
    Classify,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Wirtinger-angle spread below which a point counts as slant.
    pub angle: f64,
    /// Step of the finite-difference curvature oracle.
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            angle: tol::ANGLE,
            fd_step: DEFAULT_FD_STEP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    pub ambient: AmbientSpec,
    pub submanifold: SubmanifoldSpec,
    pub checks: Vec<Check>,
    /// k values for the k-Ricci check; all of 2..=n when empty.
    #[serde(default)]
    pub k: Vec<usize>,
    /// Unit tangent vectors (ambient coordinates) for the Ricci check. When
    /// absent the frame directions are used, plus D and D⊥ bases at CR points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<Vec<f64>>>,
    /// Extra random unit tangent directions for the Ricci check, drawn from
    /// `seed`.
    #[serde(default)]
    pub random_directions: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub search: SearchConfig,
    /// Used by fuzz runs only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
}

/// Why a scenario could not be run; always exit code 2.
#[derive(Debug)]
pub enum ScenarioError {
    Io(String),
    Schema(String),
    Engine(Error),
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Io(m) => write!(f, "cannot read scenario: {m}"),
            ScenarioError::Schema(m) => write!(f, "schema error: {m}"),
            ScenarioError::Engine(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ScenarioError {}

impl From<Error> for ScenarioError {
    fn from(e: Error) -> Self {
        ScenarioError::Engine(e)
    }
}

/// Parses a scenario, reporting the failing field path and position.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let sc: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ScenarioError::Schema(format!("at `{path}`: {}", e.into_inner()))
    })?;
    if sc.schema != SCHEMA_VERSION {
        return Err(ScenarioError::Schema(format!(
            "at `schema`: unsupported version {}, expected {SCHEMA_VERSION}",
            sc.schema
        )));
    }
    Ok(sc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum CheckResult {
    Structure {
        passed: bool,
        violations: Vec<Violation>,
    },
    Classify {
        passed: bool,
        kind: String,
        angle_spread: f64,
    },
    IdentityTau {
        passed: bool,
        identity: IdentityResidual,
        /// ‖σ‖² minus its split with e₁ = ξ singled out.
        sigma_split_residual: f64,
    },
    Scalar {
        passed: bool,
        reports: Vec<InequalityReport>,
    },
    Ricci {
        passed: bool,
        /// Tangent-frame coordinates of X.
        direction: Vec<f64>,
        reports: Vec<InequalityReport>,
    },
    KRicci {
        passed: bool,
        k: usize,
        theta_k: ThetaK,
        reports: Vec<InequalityReport>,
    },
    GaussOracle {
        passed: bool,
        route: String,
        residual: f64,
        threshold: f64,
        warnings: Vec<String>,
    },
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        match self {
            CheckResult::Structure { passed, .. }
            | CheckResult::Classify { passed, .. }
            | CheckResult::IdentityTau { passed, .. }
            | CheckResult::Scalar { passed, .. }
            | CheckResult::Ricci { passed, .. }
            | CheckResult::KRicci { passed, .. }
            | CheckResult::GaussOracle { passed, .. } => *passed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub scenario: Scenario,
    pub classification: Option<Classification>,
    pub checks: Vec<CheckResult>,
    pub verdict: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.verdict {
            0
        } else {
            1
        }
    }
}

struct Prepared {
    structure: AmbientStructure,
    point: SubmanifoldPoint,
    immersion: Option<(Immersion, Vec<f64>)>,
}

fn prepare(sc: &Scenario) -> Result<Prepared, ScenarioError> {
    let structure = AmbientStructure::new(sc.ambient.structure_data()?)?;
    let dim = structure.dim();
    match &sc.submanifold {
        SubmanifoldSpec::AlgebraicPoint { frame, sigma } => {
            let raw = frame
                .iter()
                .enumerate()
                .map(|(i, v)| vector(v, dim, &format!("submanifold.frame[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let n = raw.len();
            let components = sigma
                .iter()
                .enumerate()
                .map(|(r, rows)| matrix(rows, n, n, &format!("submanifold.sigma[{r}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let sigma = SecondFundamentalForm::from_components(n, components)?;
            let point = build_point(&structure, &raw, sigma)?;
            Ok(Prepared {
                structure,
                point,
                immersion: None,
            })
        }
        SubmanifoldSpec::Immersion {
            name,
            params,
            chart_point,
        } => {
            if !sc.ambient.is_standard() {
                return Err(Error::Configuration(
                    "catalog immersions live in the standard structure; drop ambient.phi/xi/eta".into(),
                )
                .into());
            }
            let tagged = serde_json::json!({ "name": name, "params": params });
            let spec: Catalog = serde_path_to_error::deserialize(tagged).map_err(|e| {
                let path = e.path().to_string();
                ScenarioError::Schema(format!("at `submanifold.params` ({path}): {}", e.into_inner()))
            })?;
            let imm = Immersion::new(spec, sc.ambient.m)?;
            let point = point_from_immersion(&structure, &imm, chart_point)?;
            Ok(Prepared {
                structure,
                point,
                immersion: Some((imm, chart_point.clone())),
            })
        }
    }
}

fn ricci_directions(
    sc: &Scenario,
    prep: &Prepared,
    cls: &Classification,
) -> Result<Vec<DVector<f64>>, ScenarioError> {
    let n = prep.point.n();
    let dim = prep.structure.dim();
    let mut dirs = Vec::new();
    match &sc.directions {
        Some(list) => {
            for (i, v) in list.iter().enumerate() {
                let amb = vector(v, dim, &format!("directions[{i}]"))?;
                let x = prep.point.to_tangent_coords(&amb).map_err(|_| {
                    Error::Configuration(format!("directions[{i}] is not tangent to the submanifold"))
                })?;
                if (x.norm() - 1.0).abs() > tol::DERIVED {
                    return Err(Error::Configuration(format!(
                        "directions[{i}] is not a unit vector (norm {})",
                        x.norm()
                    ))
                    .into());
                }
                dirs.push(x);
            }
        }
        None => {
            for i in 0..n {
                let mut x = DVector::zeros(n);
                x[i] = 1.0;
                dirs.push(x);
            }
            for b in cls.d_basis.iter().chain(&cls.d_perp_basis) {
                dirs.push(DVector::from_column_slice(b));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
    for _ in 0..sc.random_directions {
        let g = DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
        dirs.push(g.normalize());
    }
    Ok(dirs)
}

fn all_hold(reports: &[InequalityReport]) -> bool {
    reports.iter().all(|r| r.holds)
}

/// Runs every check of a parsed scenario in declared order.
pub fn run(sc: Scenario) -> Result<Report, ScenarioError> {
    let prep = prepare(&sc)?;
    let n = prep.point.n();
    let ks: Vec<usize> = if sc.k.is_empty() { (2..=n).collect() } else { sc.k.clone() };
    if sc.checks.contains(&Check::KRicci) {
        if let Some(&bad) = ks.iter().find(|&&k| k < 2 || k > n) {
            return Err(Error::Domain(format!("k = {bad}: k out of range [2,{n}]")).into());
        }
    }
    if sc.checks.contains(&Check::GaussOracle) && prep.immersion.is_some() && !prep.structure.params().is_flat() {
        return Err(Error::Configuration("gauss_oracle on an immersion needs c = f = f' = 0".into()).into());
    }

    let needs_cls = sc
        .checks
        .iter()
        .any(|c| matches!(c, Check::Classify | Check::Scalar | Check::Ricci | Check::KRicci));
    let cls = if needs_cls {
        Some(classify(&prep.structure, &prep.point, sc.tolerances.angle)?)
    } else {
        None
    };
    let s = &prep.structure;
    let p = &prep.point;

    let mut checks = Vec::new();
    for check in &sc.checks {
        match check {
            Check::Structure => {
                let report = validate_structure(s.data())?;
                checks.push(CheckResult::Structure {
                    passed: report.is_empty(),
                    violations: report.violations,
                });
            }
            Check::Classify => {
                let c = cls.as_ref().expect("classified");
                checks.push(CheckResult::Classify {
                    passed: true,
                    kind: c.kind.label().to_string(),
                    angle_spread: c.angle_spread(),
                });
            }
            Check::IdentityTau => {
                let identity = identity_tau_check(s, p)?;
                let sn = sigma_norms(p);
                let split = sn.norm_sq - sn.rhs;
                let passed = identity.normalized < tol::HOLDS
                    && split.abs() <= tol::HOLDS * (1.0 + sn.norm_sq);
                checks.push(CheckResult::IdentityTau {
                    passed,
                    identity,
                    sigma_split_residual: split,
                });
            }
            Check::Scalar => {
                let reports = scalar_suite(s, p, cls.as_ref().expect("classified"))?;
                checks.push(CheckResult::Scalar {
                    passed: all_hold(&reports),
                    reports,
                });
            }
            Check::Ricci => {
                let c = cls.as_ref().expect("classified");
                for x in ricci_directions(&sc, &prep, c)? {
                    let reports = ricci_suite(s, p, &x, c)?;
                    checks.push(CheckResult::Ricci {
                        passed: all_hold(&reports),
                        direction: x.iter().copied().collect(),
                        reports,
                    });
                }
            }
            Check::KRicci => {
                let c = cls.as_ref().expect("classified");
                let ic = induced_curvature(s, p)?;
                for &k in &ks {
                    let t = theta_k(&ic, k, &sc.search)?;
                    let reports = kricci_suite(s, p, k, &t, c)?;
                    checks.push(CheckResult::KRicci {
                        passed: all_hold(&reports),
                        k,
                        theta_k: t,
                        reports,
                    });
                }
            }
            Check::GaussOracle => match &prep.immersion {
                Some((imm, u)) => {
                    let g = gauss_residual_step(s, imm, u, sc.tolerances.fd_step)?;
                    checks.push(CheckResult::GaussOracle {
                        passed: g.residual < GAUSS_FD_THRESHOLD,
                        route: "finite_difference".into(),
                        residual: g.residual,
                        threshold: GAUSS_FD_THRESHOLD,
                        warnings: g.warnings,
                    });
                }
                None => {
                    let residual = gauss_cross_check(s, p)?;
                    let cp = s.params();
                    let scale = 1.0 + p.sigma().norm_sq() + cp.c.abs() + cp.f * cp.f + cp.f_prime.abs();
                    let threshold = tol::HOLDS * scale;
                    checks.push(CheckResult::GaussOracle {
                        passed: residual < threshold,
                        route: "ambient_tensor".into(),
                        residual,
                        threshold,
                        warnings: Vec::new(),
                    });
                }
            },
        }
    }
    let verdict = checks.iter().all(CheckResult::passed);
    Ok(Report {
        schema: SCHEMA_VERSION,
        scenario: sc,
        classification: cls,
        checks,
        verdict,
    })
}

/// Reads, parses and runs a scenario file. `seed` overrides the file's seed.
pub fn run_scenario(path: &std::path::Path, seed: Option<u64>) -> Result<Report, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io(format!("{}: {e}", path.display())))?;
    let mut sc = parse_scenario(&text)?;
    if let Some(seed) = seed {
        sc.seed = seed;
    }
    run(sc)
}
