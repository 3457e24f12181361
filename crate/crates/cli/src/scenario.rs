//! Scenario schema, named presets, and the check runner behind `cpc run`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cpc_core::construct::{
    characterization_check, codimension_scan, complex_lines_scenario, normalizer_check,
};
use cpc_core::geometry::{
    cpc_sweep, principal_curvatures, string_block, OrbitModel, SweepConfig, Tolerances,
};
use cpc_core::liealg::{
    build_sl_complex, build_sl_quaternion, build_sl_real, build_so_pq, build_sp_real,
    RestrictedDecomposition,
};
use cpc_core::linalg::{Rat, RatVec};
use cpc_core::report::{
    CertificateOut, DecompositionSummary, NormalizerOut, VerdictOut, SCHEMA_VERSION,
};
use cpc_core::rootsys::RootVector;

/// Failure modes mapped to process exit codes by main.
#[derive(Debug)]
pub enum CliError {
    /// Schema or usage problem (exit 2).
    Usage(String),
    /// Internal consistency failure (exit 3).
    Internal(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Internal(m) => write!(f, "internal consistency error: {m}"),
        }
    }
}

fn lift(e: cpc_core::Error) -> CliError {
    match &e {
        cpc_core::Error::Internal(_)
        | cpc_core::Error::SymmetryResidual(_)
        | cpc_core::Error::LeakageViolation(_) => CliError::Internal(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
}

impl SpaceSpec {
    /// Parses "sl_real:3", "so_pq:2,5", "sp_real:3".
    pub fn parse_cli(s: &str) -> Result<SpaceSpec, CliError> {
        let (family, args) = s
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("space `{s}`: expected family:params")))?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("bad size parameter `{x}`")))
            })
            .collect::<Result<_, _>>()?;
        match (family, nums.as_slice()) {
            ("so_pq", [p, q]) => Ok(SpaceSpec {
                family: family.into(),
                n: None,
                p: Some(*p),
                q: Some(*q),
            }),
            ("sl_real" | "sl_complex" | "sl_quaternion" | "sp_real", [n]) => {
                Ok(SpaceSpec { family: family.into(), n: Some(*n), p: None, q: None })
            }
            _ => Err(CliError::Usage(format!("unknown space `{s}`"))),
        }
    }

    pub fn build(&self) -> Result<RestrictedDecomposition, CliError> {
        let need_n = || {
            self.n.ok_or_else(|| CliError::Usage(format!("{}: missing n", self.family)))
        };
        let built = match self.family.as_str() {
            "sl_real" => build_sl_real(need_n()?),
            "sl_complex" => build_sl_complex(need_n()?),
            "sl_quaternion" => build_sl_quaternion(need_n()?),
            "sp_real" => build_sp_real(need_n()?),
            "so_pq" => {
                let p = self.p.ok_or_else(|| CliError::Usage("so_pq: missing p".into()))?;
                let q = self.q.ok_or_else(|| CliError::Usage("so_pq: missing q".into()))?;
                build_so_pq(p, q)
            }
            other => return Err(CliError::Usage(format!("unknown space family `{other}`"))),
        }
        .map_err(lift)?;
        RestrictedDecomposition::new(built.alg, built.canonical).map_err(lift)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VEntryIn {
    pub root: Vec<i64>,
    /// Exact rational basis vectors in algebra coordinates, or a dimension
    /// selecting the first basis vectors of the root space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VSpecIn {
    Preset { preset: String },
    Explicit { entries: Vec<VEntryIn> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanIn {
    pub dims: (usize, usize),
    pub trials: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesIn {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cpc_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leakage_tol: Option<f64>,
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub space: SpaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_spec: Option<VSpecIn>,
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesIn>,
    /// "pass" (default) or "fail": expected-fail scenarios are green when
    /// the sweep/characterization refute the property.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_transitive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanIn>,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "schema_version {} unsupported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        for c in &self.checks {
            if !matches!(
                c.as_str(),
                "decompose" | "invariants" | "sweep" | "characterize" | "blocks"
                    | "normalizer" | "codim-scan"
            ) {
                return Err(CliError::Usage(format!("unknown check `{c}`")));
            }
        }
        if let Some(e) = &self.expect {
            if e != "pass" && e != "fail" {
                return Err(CliError::Usage(format!("expect must be pass|fail, got `{e}`")));
            }
        }
        Ok(())
    }

    pub fn expected_pass(&self) -> bool {
        self.expect.as_deref() != Some("fail")
    }

    pub fn tolerances(&self, tol_flag: Option<f64>) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(o) = &self.tolerances {
            if let Some(v) = o.cpc_tol {
                t.cpc_tol = v;
            }
            if let Some(v) = o.cluster_tol {
                t.cluster_tol = v;
            }
            if let Some(v) = o.symmetry_tol {
                t.symmetry_tol = v;
            }
            if let Some(v) = o.leakage_tol {
                t.leakage_tol = v;
            }
        }
        if let Some(v) = tol_flag {
            t.cpc_tol = v;
        }
        t
    }
}

/// A named preset with its default expectation.
pub fn preset_defaults(name: &str) -> Option<(&'static str, bool)> {
    // (description, default expected_pass)
    match name {
        "a2-lines" | "a2-complex-lines" => Some(("one line removed per adjacent simple root", true)),
        "main-theorem-II-ii-b" => Some(("complex lines from a k0 structure generator", true)),
        "full-pair" | "quaternionic-lines" => {
            Some(("both adjacent simple root spaces removed entirely", true))
        }
        "case-i-line" => Some(("one line removed from a single simple root space", true)),
        "orthogonal-roots" => Some(("lines at two orthogonal simple roots", false)),
        "flat-extension" => Some(("extension of the rank-2 maximal flat", false)),
        "length-obstruction" => {
            Some(("corank-one short removal plus full long removal", false))
        }
        _ => None,
    }
}

/// Expands a preset into explicit exact entries on the given space, with
/// the structure certificate when the construction produces one.
pub fn expand_preset(
    name: &str,
    decomp: &RestrictedDecomposition,
) -> Result<(Vec<(RootVector, Vec<RatVec>)>, Option<CertificateOut>), CliError> {
    let simple = |i: usize| -> Result<RootVector, CliError> {
        decomp
            .system
            .simple_roots
            .get(i)
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("space has no simple root {i}")))
    };
    let line =
        |r: &RootVector| -> Result<Vec<RatVec>, CliError> {
            Ok(vec![decomp.root(r).map_err(lift)?.basis[0].clone()])
        };
    let full = |r: &RootVector| -> Result<Vec<RatVec>, CliError> {
        Ok(decomp.root(r).map_err(lift)?.basis.clone())
    };
    match name {
        "a2-lines" | "a2-complex-lines" => {
            let (r0, r1) = (simple(0)?, simple(1)?);
            Ok((vec![(r0.clone(), line(&r0)?), (r1.clone(), line(&r1)?)], None))
        }
        "full-pair" | "quaternionic-lines" => {
            let (r0, r1) = (simple(0)?, simple(1)?);
            Ok((vec![(r0.clone(), full(&r0)?), (r1.clone(), full(&r1)?)], None))
        }
        "case-i-line" => {
            let r0 = simple(0)?;
            Ok((vec![(r0.clone(), line(&r0)?)], None))
        }
        "orthogonal-roots" => {
            let (r0, r2) = (simple(0)?, simple(2)?);
            Ok((vec![(r0.clone(), line(&r0)?), (r2.clone(), line(&r2)?)], None))
        }
        "flat-extension" => {
            let (r0, r1) = (simple(0)?, simple(1)?);
            let sum = r0.add(&r1);
            Ok((
                vec![
                    (r0.clone(), full(&r0)?),
                    (r1.clone(), full(&r1)?),
                    (sum.clone(), full(&sum)?),
                ],
                None,
            ))
        }
        "length-obstruction" => {
            // rank-2 B-type: [0] long, [1] short
            let (long, short) = (simple(0)?, simple(1)?);
            let short_basis = decomp.root(&short).map_err(lift)?.basis.clone();
            if short_basis.len() < 2 {
                return Err(CliError::Usage("short multiplicity must be >= 2".into()));
            }
            Ok((
                vec![
                    (short.clone(), short_basis[..short_basis.len() - 1].to_vec()),
                    (long.clone(), full(&long)?),
                ],
                None,
            ))
        }
        "main-theorem-II-ii-b" => {
            let (spec, cert) = complex_lines_scenario(decomp, 0, 1).map_err(lift)?;
            Ok((spec.entries, Some(CertificateOut::from(&cert))))
        }
        other => Err(CliError::Usage(format!("unknown preset `{other}`"))),
    }
}

fn parse_rat(s: &str) -> Result<Rat, CliError> {
    s.parse::<Rat>().map_err(|e| CliError::Usage(format!("bad rational `{s}`: {e}")))
}

pub fn expand_v_spec(
    v: &VSpecIn,
    decomp: &RestrictedDecomposition,
) -> Result<(Vec<(RootVector, Vec<RatVec>)>, Option<CertificateOut>), CliError> {
    match v {
        VSpecIn::Preset { preset } => expand_preset(preset, decomp),
        VSpecIn::Explicit { entries } => {
            let mut out = Vec::new();
            for e in entries {
                let root = RootVector::new(e.root.clone());
                let basis: Vec<RatVec> = match (&e.basis, e.dim) {
                    (Some(rows), _) => rows
                        .iter()
                        .map(|row| row.iter().map(|x| parse_rat(x)).collect())
                        .collect::<Result<_, _>>()?,
                    (None, Some(d)) => {
                        let rr = decomp.root(&root).map_err(lift)?;
                        if d == 0 || d > rr.basis.len() {
                            return Err(CliError::Usage(format!(
                                "dim {d} out of range for root {root}"
                            )));
                        }
                        rr.basis[..d].to_vec()
                    }
                    (None, None) => {
                        return Err(CliError::Usage(format!(
                            "entry for root {root} needs `basis` or `dim`"
                        )))
                    }
                };
                out.push((root, basis));
            }
            Ok((out, None))
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub payload: Value,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub artifact_version: String,
    pub scenario: Scenario,
    /// The fully explicit removal pattern the scenario expanded to.
    pub expanded_v: Vec<ExpandedEntry>,
    /// Structure certificate, when the removal pattern was built from one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateOut>,
    pub space: DecompositionSummary,
    pub checks: Vec<CheckResult>,
    pub all_pass: bool,
    pub timing_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct ExpandedEntry {
    pub root: Vec<i64>,
    pub basis: Vec<Vec<String>>,
}

pub fn run_scenario(scenario: &Scenario, tol_flag: Option<f64>) -> Result<RunReport, CliError> {
    scenario.validate()?;
    let start = std::time::Instant::now();
    let decomp = scenario.space.build()?;
    let tol = scenario.tolerances(tol_flag);
    let sweep_cfg = SweepConfig { seed: scenario.seed, tol, ..Default::default() };
    let expected_pass = scenario.expected_pass();

    let (entries, certificate) = match &scenario.v_spec {
        Some(v) => expand_v_spec(v, &decomp)?,
        None => (Vec::new(), None),
    };
    let expanded_v: Vec<ExpandedEntry> = entries
        .iter()
        .map(|(r, basis)| ExpandedEntry {
            root: r.coeffs.clone(),
            basis: basis
                .iter()
                .map(|v| v.iter().map(|x| x.to_string()).collect())
                .collect(),
        })
        .collect();

    let orbit: Option<OrbitModel> = if entries.is_empty() {
        None
    } else {
        Some(OrbitModel::new(&decomp, entries.clone()).map_err(lift)?)
    };

    let mut checks: Vec<CheckResult> = Vec::new();
    for name in &scenario.checks {
        let result = match name.as_str() {
            "decompose" => CheckResult {
                name: name.clone(),
                pass: true,
                payload: serde_json::to_value(DecompositionSummary::from_decomposition(&decomp))
                    .unwrap(),
            },
            "invariants" => {
                let rows = cpc_core::battery::exact_identities(&decomp, scenario.seed);
                let pass = rows.iter().all(|(_, ok)| *ok);
                CheckResult {
                    name: name.clone(),
                    pass,
                    payload: json!(rows
                        .iter()
                        .map(|(n, ok)| json!({"identity": n, "exact": ok}))
                        .collect::<Vec<_>>()),
                }
            }
            "sweep" => {
                let orbit = orbit
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("sweep needs a v_spec".into()))?;
                let verdict = cpc_sweep(orbit, &sweep_cfg).map_err(lift)?;
                let xi = orbit.normal_from_coords(&unit_coord(orbit.normal_dim(), 0));
                let sample = principal_curvatures(orbit, &xi, &tol).map_err(lift)?;
                let pass = verdict.is_cpc == expected_pass;
                CheckResult {
                    name: name.clone(),
                    pass,
                    payload: json!({
                        "verdict": VerdictOut::from(&verdict),
                        "expected_cpc": expected_pass,
                        "sample_spectrum": cpc_core::report::SpectrumOut::from(&sample),
                    }),
                }
            }
            "characterize" => {
                let orbit = orbit
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("characterize needs a v_spec".into()))?;
                if orbit.v_entries.len() != 2 {
                    return Err(CliError::Usage(
                        "characterize needs exactly two removal summands".into(),
                    ));
                }
                let rep = characterization_check(
                    &decomp,
                    &orbit.v_entries[0].1,
                    &orbit.v_entries[1].1,
                );
                let pass = rep.passes == expected_pass;
                CheckResult { name: name.clone(), pass, payload: serde_json::to_value(rep).unwrap() }
            }
            "blocks" => {
                let orbit = orbit
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("blocks needs a v_spec".into()))?;
                if orbit.classes.is_empty() {
                    return Err(CliError::Usage(
                        "blocks needs a removal pattern with a string partition".into(),
                    ));
                }
                let mut payload = Vec::new();
                let mut pass = true;
                for phi in [0.0, std::f64::consts::FRAC_PI_4] {
                    let coords = two_angle(orbit.normal_dim(), phi);
                    let xi = orbit.normal_from_coords(&coords);
                    for ci in 0..orbit.classes.len() {
                        match string_block(orbit, &xi, ci, &tol) {
                            Ok(b) => payload.push(json!({
                                "class": ci,
                                "kind": format!("{:?}", orbit.classes[ci].kind),
                                "phi": phi,
                                "spectrum": b.spectrum,
                                "leakage": b.leakage,
                            })),
                            Err(e) => {
                                pass = false;
                                payload.push(json!({
                                    "class": ci,
                                    "phi": phi,
                                    "error": e.to_string(),
                                }));
                            }
                        }
                    }
                }
                CheckResult { name: name.clone(), pass, payload: json!(payload) }
            }
            "normalizer" => {
                let orbit = orbit
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("normalizer needs a v_spec".into()))?;
                let rep = normalizer_check(orbit, scenario.seed).map_err(lift)?;
                let pass = match scenario.expect_transitive {
                    Some(want) => rep.transitive_possible == want,
                    None => true,
                };
                CheckResult {
                    name: name.clone(),
                    pass,
                    payload: serde_json::to_value(NormalizerOut::from(&rep)).unwrap(),
                }
            }
            "codim-scan" => {
                let scan = scenario
                    .scan
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("codim-scan needs a `scan` section".into()))?;
                let cfg = SweepConfig {
                    seed: scenario.seed,
                    fail_fast: true,
                    random_count: 16,
                    grid_points: 9,
                    tol,
                    ..Default::default()
                };
                let rep = codimension_scan(
                    &decomp,
                    0,
                    1,
                    scan.dims,
                    scan.trials,
                    scenario.seed,
                    &cfg,
                )
                .map_err(lift)?;
                let mut pass = rep.mismatches == 0;
                if !expected_pass {
                    pass &= rep.sweep_passes == 0 && rep.characterization_passes == 0;
                }
                CheckResult { name: name.clone(), pass, payload: serde_json::to_value(rep).unwrap() }
            }
            other => return Err(CliError::Usage(format!("unknown check `{other}`"))),
        };
        checks.push(result);
    }

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: scenario.clone(),
        expanded_v,
        certificate,
        space: DecompositionSummary::from_decomposition(&decomp),
        checks,
        all_pass,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn unit_coord(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

fn two_angle(n: usize, phi: f64) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[0] = phi.cos();
    if n > 1 {
        v[n - 1] = phi.sin();
    }
    v
}
