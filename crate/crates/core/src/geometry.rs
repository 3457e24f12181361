//! Riemannian data of A N = G/K: Levi-Civita connection, shape operators of
//! orbits S . o with s = a + (n minus V), phi-maps between root spaces,
//! principal curvature spectra, and the sweep over unit normal directions.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eigen::{cluster_eigenvalues, jacobi_eigenvalues, spectrum_distance};
use crate::error::{Error, Result};
use crate::liealg::{RestrictedDecomposition, SubspaceTag};
use crate::linalg::{is_zero_vec, rat_to_f64, vec_to_f64, RatMat, RatVec, SpanSolver};
use crate::rootsys::{RootVector, StringShape};
use num_traits::Zero;

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub cpc_tol: f64,
    pub cluster_tol: f64,
    /// Bound on |M - M^T| before the eigensolve refuses the matrix.
    pub symmetry_tol: f64,
    /// Bound for unit/normal validation of sweep directions.
    pub normal_tol: f64,
    /// Bound on off-block leakage across string classes.
    pub leakage_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            cpc_tol: 1e-8,
            cluster_tol: 1e-7,
            symmetry_tol: 1e-8,
            normal_tol: 1e-10,
            leakage_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub seed: u64,
    pub random_count: usize,
    pub grid_points: usize,
    pub fail_fast: bool,
    pub tol: Tolerances,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: 0,
            random_count: 128,
            grid_points: 33,
            fail_fast: false,
            tol: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    /// The class of alpha_0 itself (the rank-2 block of a two-root orbit).
    Core,
    Singleton,
    Len3,
    Len6,
    /// Single-root orbit class: the nu-string of the representative.
    NuString(usize),
}

impl From<StringShape> for ClassKind {
    fn from(s: StringShape) -> Self {
        match s {
            StringShape::Singleton => ClassKind::Singleton,
            StringShape::Len3 => ClassKind::Len3,
            StringShape::Len6 => ClassKind::Len6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrbitClass {
    pub representative: RootVector,
    pub roots: Vec<RootVector>,
    pub kind: ClassKind,
    /// Index range of the class block in the tangent basis.
    pub range: Range<usize>,
}

/// The orbit S . o of s = a + (n minus V): exact orthogonal pre-bases, the
/// matching orthonormal floating bases, and the string partition of the
/// tangent space when the removal pattern admits one.
pub struct OrbitModel<'d> {
    pub decomp: &'d RestrictedDecomposition,
    /// (root, exactly orthogonalized basis of V_root), sorted by root.
    pub v_entries: Vec<(RootVector, Vec<RatVec>)>,
    /// Exact metric-orthogonal tangent pre-basis, a block first.
    pub tangent_pre: Vec<RatVec>,
    /// Orthonormal tangent basis (same order as tangent_pre).
    pub tangent: Vec<Vec<f64>>,
    pub normal_pre: Vec<RatVec>,
    pub normal: Vec<Vec<f64>>,
    /// (root, range into the normal basis) per V summand.
    pub normal_groups: Vec<(RootVector, Range<usize>)>,
    pub a_range: Range<usize>,
    /// (root, tangent range) for every positive root with a nonzero tangent
    /// part, in layout order.
    pub root_tangent_ranges: Vec<(RootVector, Range<usize>)>,
    pub classes: Vec<OrbitClass>,
}

impl<'d> OrbitModel<'d> {
    /// Builds the orbit for the removal pattern V = sum of V_root. Verifies
    /// that every V_root sits inside its root space and that
    /// s = a + (n minus V) closes under the bracket, both exactly.
    pub fn new(
        decomp: &'d RestrictedDecomposition,
        v_entries: Vec<(RootVector, Vec<RatVec>)>,
    ) -> Result<Self> {
        let mut v_entries = v_entries;
        v_entries.sort_by_key(|(r, _)| (r.level(), r.coeffs.clone()));
        let mut v_orth: Vec<(RootVector, Vec<RatVec>)> = Vec::new();
        for (root, basis) in &v_entries {
            if basis.is_empty() {
                return Err(Error::InvalidParameter(format!("empty V summand at {root}")));
            }
            if !decomp.system.is_positive_root(root) {
                return Err(Error::NotARoot(root.to_string()));
            }
            for v in basis {
                let proj = decomp.project(v, &SubspaceTag::Root(root.clone()))?;
                if &proj != v || is_zero_vec(v) {
                    return Err(Error::NotInRootSpace(format!(
                        "V summand vector is not inside g_{root}"
                    )));
                }
            }
            let ortho = crate::linalg::gram_schmidt(basis, |x, y| decomp.metric_an(x, y))
                .map_err(Error::DependentInput)?;
            v_orth.push((root.clone(), ortho));
        }
        for w in v_orth.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidParameter(format!(
                    "root {} appears twice in the V specification",
                    w[0].0
                )));
            }
        }

        // Tangent complement per positive root.
        let mut root_parts: Vec<(RootVector, Vec<RatVec>)> = Vec::new();
        for rr in decomp.positive_roots() {
            let v_basis = v_orth.iter().find(|(r, _)| r == &rr.coeffs).map(|(_, b)| b);
            let part = match v_basis {
                None => rr.basis.clone(),
                Some(vb) => {
                    if vb.len() == rr.basis.len() {
                        Vec::new()
                    } else {
                        let mut rows = RatMat::zeros(vb.len(), rr.basis.len());
                        for (j, v) in vb.iter().enumerate() {
                            for (i, b) in rr.basis.iter().enumerate() {
                                *rows.at_mut(j, i) = decomp.metric_an(b, v);
                            }
                        }
                        let coords = rows.nullspace();
                        let vecs: Vec<RatVec> = coords
                            .iter()
                            .map(|c| {
                                let mut acc = crate::linalg::zero_vec(decomp.dim());
                                for (i, ci) in c.iter().enumerate() {
                                    if !ci.is_zero() {
                                        crate::linalg::vec_axpy(&mut acc, ci, &rr.basis[i]);
                                    }
                                }
                                acc
                            })
                            .collect();
                        crate::linalg::gram_schmidt(&vecs, |x, y| decomp.metric_an(x, y))
                            .map_err(|_| Error::Internal("dependent tangent complement".into()))?
                    }
                }
            };
            root_parts.push((rr.coeffs.clone(), part));
        }

        // Subalgebra closure check on the exact pre-basis.
        let mut pre: Vec<RatVec> = Vec::new();
        let a_ortho = crate::linalg::gram_schmidt(&decomp.a_basis, |x, y| decomp.metric_an(x, y))
            .map_err(|_| Error::Internal("dependent a basis".into()))?;
        pre.extend(a_ortho.iter().cloned());
        for (_, part) in &root_parts {
            pre.extend(part.iter().cloned());
        }
        let span = SpanSolver::new(&pre);
        for i in 0..pre.len() {
            for j in (i + 1)..pre.len() {
                let br = decomp.alg.bracket(&pre[i], &pre[j]);
                if !is_zero_vec(&br) && !span.contains(&br) {
                    return Err(Error::ClosureFailure { i, j });
                }
            }
        }

        let psi: Vec<RootVector> = v_orth.iter().map(|(r, _)| r.clone()).collect();
        let partition = partition_for(decomp, &psi);

        // Tangent layout: a block, then class blocks (or plain root order
        // when no partition applies).
        let mut tangent_pre: Vec<RatVec> = Vec::new();
        let mut tangent: Vec<Vec<f64>> = Vec::new();
        let push_group =
            |pre_out: &mut Vec<RatVec>, f64_out: &mut Vec<Vec<f64>>, vecs: &[RatVec]| {
                for v in vecs {
                    let n2 = rat_to_f64(&decomp.metric_an(v, v));
                    let s = 1.0 / n2.sqrt();
                    pre_out.push(v.clone());
                    f64_out.push(vec_to_f64(v).iter().map(|x| x * s).collect());
                }
            };
        push_group(&mut tangent_pre, &mut tangent, &a_ortho);
        let a_range = 0..tangent_pre.len();

        let mut root_tangent_ranges: Vec<(RootVector, Range<usize>)> = Vec::new();
        let mut classes: Vec<OrbitClass> = Vec::new();
        let part_of = |root: &RootVector| -> &[RatVec] {
            root_parts
                .iter()
                .find(|(r, _)| r == root)
                .map(|(_, p)| p.as_slice())
                .unwrap_or(&[])
        };
        match &partition {
            Some(cls) => {
                for (rep, roots, kind) in cls {
                    let start = tangent_pre.len();
                    for r in roots {
                        let p = part_of(r);
                        if p.is_empty() {
                            continue;
                        }
                        let s = tangent_pre.len();
                        push_group(&mut tangent_pre, &mut tangent, p);
                        root_tangent_ranges.push((r.clone(), s..tangent_pre.len()));
                    }
                    classes.push(OrbitClass {
                        representative: rep.clone(),
                        roots: roots.clone(),
                        kind: *kind,
                        range: start..tangent_pre.len(),
                    });
                }
            }
            None => {
                for (r, p) in &root_parts {
                    if p.is_empty() {
                        continue;
                    }
                    let s = tangent_pre.len();
                    push_group(&mut tangent_pre, &mut tangent, p);
                    root_tangent_ranges.push((r.clone(), s..tangent_pre.len()));
                }
            }
        }

        let mut normal_pre: Vec<RatVec> = Vec::new();
        let mut normal: Vec<Vec<f64>> = Vec::new();
        let mut normal_groups = Vec::new();
        for (r, basis) in &v_orth {
            let s = normal_pre.len();
            push_group(&mut normal_pre, &mut normal, basis);
            normal_groups.push((r.clone(), s..normal_pre.len()));
        }

        Ok(OrbitModel {
            decomp,
            v_entries: v_orth,
            tangent_pre,
            tangent,
            normal_pre,
            normal,
            normal_groups,
            a_range,
            root_tangent_ranges,
            classes,
        })
    }

    pub fn tangent_dim(&self) -> usize {
        self.tangent.len()
    }

    pub fn normal_dim(&self) -> usize {
        self.normal.len()
    }

    /// Exact orthogonal projection of x onto the tangent space s.
    pub fn project_tangent_exact(&self, x: &RatVec) -> RatVec {
        let mut acc = crate::linalg::zero_vec(self.decomp.dim());
        for u in &self.tangent_pre {
            let c = self.decomp.metric_an(x, u) / self.decomp.metric_an(u, u);
            if !c.is_zero() {
                crate::linalg::vec_axpy(&mut acc, &c, u);
            }
        }
        acc
    }

    fn check_normal(&self, xi: &[f64], tol: f64) -> Result<()> {
        let num = self.decomp.numeric();
        let norm = num.metric_an_f64(xi, xi);
        // |n^2 - 1| ~ 2 |n - 1| near a unit vector
        if (norm - 1.0).abs() > 2.0 * tol {
            return Err(Error::BadNormal(format!("norm^2 = {norm}")));
        }
        let mut res: Vec<f64> = xi.to_vec();
        for b in &self.normal {
            let c = num.metric_an_f64(&res, b);
            for (r, bb) in res.iter_mut().zip(b) {
                *r -= c * bb;
            }
        }
        let out = num.metric_an_f64(&res, &res);
        if out.sqrt() > tol.max(1e-12) * 10.0 {
            return Err(Error::BadNormal(format!("component outside V has norm^2 {out}")));
        }
        Ok(())
    }

    /// Normal-space coordinates (over the orthonormal normal basis).
    pub fn normal_coords(&self, xi: &[f64]) -> Vec<f64> {
        let num = self.decomp.numeric();
        self.normal.iter().map(|b| num.metric_an_f64(xi, b)).collect()
    }

    pub fn normal_from_coords(&self, coords: &[f64]) -> Vec<f64> {
        let dim = self.decomp.dim();
        let mut out = vec![0.0; dim];
        for (c, b) in coords.iter().zip(&self.normal) {
            for (o, bb) in out.iter_mut().zip(b) {
                *o += c * bb;
            }
        }
        out
    }
}

/// Decides which tangent-space partition the removal pattern admits: two
/// adjacent equal-length reduced simple roots give the two-root string
/// classes, a single reduced simple root gives nu-string classes.
fn partition_for(
    decomp: &RestrictedDecomposition,
    psi: &[RootVector],
) -> Option<Vec<(RootVector, Vec<RootVector>, ClassKind)>> {
    let sys = &decomp.system;
    let simple_index = |r: &RootVector| -> Option<usize> {
        sys.simple_roots
            .iter()
            .position(|s| s == r)
            .filter(|i| sys.reduced_simple.contains(i))
    };
    if psi.len() == 2 {
        let (i0, i1) = (simple_index(&psi[0])?, simple_index(&psi[1])?);
        if sys.cartan_matrix[i0][i1] != -1 || sys.cartan_matrix[i1][i0] != -1 {
            return None;
        }
        let classes = sys.pair_partition(i0, i1);
        let mut out = Vec::new();
        for members in classes {
            let rep = members[0].clone();
            let in_plane = members.iter().any(|m| m == &psi[0] || m == &psi[1]);
            let kind = if in_plane {
                ClassKind::Core
            } else {
                match sys.pair_string_class(i0, i1, &rep) {
                    Ok(c) => ClassKind::from(c.shape),
                    Err(_) => return None,
                }
            };
            out.push((rep, members, kind));
        }
        Some(out)
    } else if psi.len() == 1 {
        simple_index(&psi[0])?;
        let nu = &psi[0];
        let mut seen: std::collections::HashSet<RootVector> = Default::default();
        let mut out = Vec::new();
        for r in &sys.positive_roots {
            if seen.contains(r) {
                continue;
            }
            let members: Vec<RootVector> = sys
                .positive_roots
                .iter()
                .filter(|m| is_multiple(&m.sub(r), nu))
                .cloned()
                .collect();
            for m in &members {
                seen.insert(m.clone());
            }
            out.push((members[0].clone(), members.clone(), ClassKind::NuString(members.len())));
        }
        Some(out)
    } else {
        None
    }
}

fn is_multiple(d: &RootVector, nu: &RootVector) -> bool {
    if d.is_zero() {
        return true;
    }
    let k = nu.coeffs.iter().position(|&c| c != 0).unwrap();
    if nu.coeffs[k] == 0 || d.coeffs[k] % nu.coeffs[k] != 0 {
        return false;
    }
    let m = d.coeffs[k] / nu.coeffs[k];
    d.coeffs == nu.scaled(m).coeffs
}

/// The shape operator matrix over the orbit's tangent basis, with its
/// symmetry residual.
pub struct ShapeOp {
    pub matrix: Vec<Vec<f64>>,
    pub symmetry_residual: f64,
}

/// S_xi over the tangent basis: M(i,j) = <S_xi e_i, e_j>_AN, from the
/// Koszul identity 4<nabla_X xi, Z> = <(X,xi-bracket) + (1-theta)(theta X,xi-bracket), Z>.
pub fn shape_operator(orbit: &OrbitModel, xi: &[f64], tol: &Tolerances) -> Result<ShapeOp> {
    orbit.check_normal(xi, tol.normal_tol)?;
    let num = orbit.decomp.numeric();
    let n = orbit.tangent.len();
    let mut raw = vec![vec![0.0; n]; n];
    for (i, e) in orbit.tangent.iter().enumerate() {
        let w = num.bracket_f64(e, xi);
        let t = num.bracket_f64(&num.theta_f64(e), xi);
        let tt = num.theta_f64(&t);
        let u: Vec<f64> =
            w.iter().zip(t.iter().zip(&tt)).map(|(a, (b, c))| a + b - c).collect();
        for (j, f) in orbit.tangent.iter().enumerate() {
            raw[i][j] = -0.25 * num.inner_bt_f64(&u, f);
        }
    }
    let mut residual = 0.0f64;
    let mut matrix = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            residual = residual.max((raw[i][j] - raw[j][i]).abs());
            matrix[i][j] = 0.5 * (raw[i][j] + raw[j][i]);
        }
    }
    Ok(ShapeOp { matrix, symmetry_residual: residual })
}

/// A clustered eigenvalue multiset of a shape operator.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    /// Coordinates of the direction in the orbit's normal basis.
    pub direction: Vec<f64>,
    /// (value, multiplicity), ascending.
    pub eigenvalues: Vec<(f64, usize)>,
    /// Raw sorted spectrum (with multiplicity).
    pub sorted: Vec<f64>,
    pub cluster_tol: f64,
    pub self_adjoint_residual: f64,
}

impl SpectrumReport {
    pub fn trace(&self) -> f64 {
        self.sorted.iter().sum()
    }
}

pub fn principal_curvatures(
    orbit: &OrbitModel,
    xi: &[f64],
    tol: &Tolerances,
) -> Result<SpectrumReport> {
    let op = shape_operator(orbit, xi, tol)?;
    if op.symmetry_residual > tol.symmetry_tol {
        return Err(Error::SymmetryResidual(op.symmetry_residual));
    }
    let sorted = jacobi_eigenvalues(&op.matrix);
    let eigenvalues = cluster_eigenvalues(&sorted, tol.cluster_tol);
    Ok(SpectrumReport {
        direction: orbit.normal_coords(xi),
        eigenvalues,
        sorted,
        cluster_tol: tol.cluster_tol,
        self_adjoint_residual: op.symmetry_residual,
    })
}

/// (austere, minimal): spectrum symmetric about zero within cluster_tol,
/// and |trace| below 1e-8.
pub fn austere_minimal_check(report: &SpectrumReport) -> (bool, bool) {
    let n = report.sorted.len();
    let austere =
        (0..n).all(|i| (report.sorted[i] + report.sorted[n - 1 - i]).abs() <= report.cluster_tol);
    let minimal = report.trace().abs() <= 1e-8;
    (austere, minimal)
}

/// Verdict of a constant-principal-curvatures sweep over sampled unit
/// normal directions.
#[derive(Debug, Clone)]
pub struct CpcVerdict {
    pub is_cpc: bool,
    /// Max L-infinity distance between sorted spectra over sampled pairs.
    pub max_spectrum_deviation: f64,
    pub witness_directions: Option<(Vec<f64>, Vec<f64>)>,
    pub samples: usize,
    pub cpc_tol: f64,
}

/// Deterministic direction sampler (coordinates over the normal basis):
/// antipodal pair for a line, the quadrant grids for a plane, and basis
/// directions plus pairwise diagonals plus seeded random unit vectors in
/// higher dimensions.
pub fn sample_directions(dim_v: usize, cfg: &SweepConfig) -> Vec<Vec<f64>> {
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    let unit = |i: usize, s: f64| -> Vec<f64> {
        let mut v = vec![0.0; dim_v];
        v[i] = s;
        v
    };
    match dim_v {
        0 => {}
        1 => {
            dirs.push(unit(0, 1.0));
            dirs.push(unit(0, -1.0));
        }
        2 => {
            let g = cfg.grid_points.max(2);
            for sign in [1.0, -1.0] {
                for k in 0..g {
                    let phi = std::f64::consts::FRAC_PI_2 * k as f64 / (g - 1) as f64;
                    let d = vec![phi.cos(), sign * phi.sin()];
                    dirs.push(d.clone());
                    dirs.push(d.iter().map(|x| -x).collect());
                }
            }
        }
        _ => {
            for i in 0..dim_v {
                dirs.push(unit(i, 1.0));
                dirs.push(unit(i, -1.0));
            }
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..dim_v {
                for j in (i + 1)..dim_v {
                    for (si, sj) in [(s, s), (s, -s)] {
                        let mut v = vec![0.0; dim_v];
                        v[i] = si;
                        v[j] = sj;
                        dirs.push(v);
                    }
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut produced = 0;
            while produced < cfg.random_count {
                let v: Vec<f64> = (0..dim_v)
                    .map(|_| {
                        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                        let u2: f64 = rng.gen_range(0.0..1.0);
                        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
                    })
                    .collect();
                let n2: f64 = v.iter().map(|x| x * x).sum();
                if n2 < 1e-12 {
                    continue;
                }
                let n = n2.sqrt();
                dirs.push(v.iter().map(|x| x / n).collect());
                produced += 1;
            }
        }
    }
    dirs
}

/// Compares principal-curvature spectra across sampled unit normals.
pub fn cpc_sweep(orbit: &OrbitModel, cfg: &SweepConfig) -> Result<CpcVerdict> {
    if orbit.normal_dim() == 0 {
        return Err(Error::InvalidParameter("orbit has no normal space".into()));
    }
    let dirs = sample_directions(orbit.normal_dim(), cfg);
    let mut spectra: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(dirs.len());
    let mut max_dev = 0.0f64;
    let mut witness: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut seen = 0usize;
    for coords in &dirs {
        let xi = orbit.normal_from_coords(coords);
        let rep = principal_curvatures(orbit, &xi, &cfg.tol)?;
        seen += 1;
        if cfg.fail_fast {
            if let Some((c0, s0)) = spectra.first() {
                let d = spectrum_distance(s0, &rep.sorted);
                if d > max_dev {
                    max_dev = d;
                    witness = Some((c0.clone(), coords.clone()));
                }
                if d > cfg.tol.cpc_tol {
                    return Ok(CpcVerdict {
                        is_cpc: false,
                        max_spectrum_deviation: max_dev,
                        witness_directions: witness,
                        samples: seen,
                        cpc_tol: cfg.tol.cpc_tol,
                    });
                }
            } else {
                spectra.push((coords.clone(), rep.sorted));
            }
        } else {
            spectra.push((coords.clone(), rep.sorted));
        }
    }
    if !cfg.fail_fast {
        for i in 0..spectra.len() {
            for j in (i + 1)..spectra.len() {
                let d = spectrum_distance(&spectra[i].1, &spectra[j].1);
                if d > max_dev {
                    max_dev = d;
                    witness = Some((spectra[i].0.clone(), spectra[j].0.clone()));
                }
            }
        }
    }
    Ok(CpcVerdict {
        is_cpc: max_dev <= cfg.tol.cpc_tol,
        max_spectrum_deviation: max_dev,
        witness_directions: if max_dev > cfg.tol.cpc_tol { witness } else { None },
        samples: dirs.len(),
        cpc_tol: cfg.tol.cpc_tol,
    })
}

/// Levi-Civita connection of the left-invariant metric, evaluated through
/// the orthonormal a+n basis of the decomposition.
pub fn levi_civita(decomp: &RestrictedDecomposition, x: &[f64], y: &[f64]) -> Vec<f64> {
    let num = decomp.numeric();
    let br = num.bracket_f64(x, y);
    let t = num.bracket_f64(&num.theta_f64(x), y);
    let tt = num.theta_f64(&t);
    let u: Vec<f64> = br.iter().zip(t.iter().zip(&tt)).map(|(a, (b, c))| a + b - c).collect();
    let mut out = vec![0.0; decomp.dim()];
    for z in &num.an_basis {
        let c = 0.25 * num.inner_bt_f64(&u, z);
        for (o, zz) in out.iter_mut().zip(z) {
            *o += c * zz;
        }
    }
    out
}

/// The map phi_xi = |nu|^{-1} (-A_{nu,gamma})^{-1/2} ad(xi) from g_gamma to
/// g_{gamma+nu}, for gamma of minimum level in its nontrivial nu-string.
pub struct PhiMap {
    pub source: RootVector,
    pub target: RootVector,
    pub scalar: f64,
    /// matrix(t,s): coordinates over the orthonormal bases of the target
    /// and source root spaces.
    pub matrix: Vec<Vec<f64>>,
}

pub fn phi_scalar(
    decomp: &RestrictedDecomposition,
    nu: &RootVector,
    gamma: &RootVector,
) -> Result<f64> {
    let sys = &decomp.system;
    if !sys.is_positive_root(nu) || !sys.is_positive_root(gamma) {
        return Err(Error::NotARoot(format!("({nu}, {gamma})")));
    }
    if is_multiple(&gamma.sub(nu), nu) {
        return Err(Error::InvalidParameter("nu and gamma are proportional".into()));
    }
    let a = sys.cartan_integer(nu, gamma)?;
    if a == 0 {
        return Err(Error::TrivialString);
    }
    if a > 0 || sys.in_delta0(&gamma.sub(nu)) {
        return Err(Error::NotMinimumLevel(gamma.to_string()));
    }
    let nu_len = rat_to_f64(&sys.length_sq(nu)).sqrt();
    Ok(1.0 / (nu_len * ((-a) as f64).sqrt()))
}

/// Applies phi_xi to an algebra vector (xi unit in g_nu, x in g_gamma).
pub fn phi_apply(
    decomp: &RestrictedDecomposition,
    nu: &RootVector,
    gamma: &RootVector,
    xi: &[f64],
    x: &[f64],
) -> Result<Vec<f64>> {
    let s = phi_scalar(decomp, nu, gamma)?;
    let num = decomp.numeric();
    Ok(num.bracket_f64(xi, x).iter().map(|v| v * s).collect())
}

/// Applies phi_{theta xi} = -|nu|^{-1} (-A)^{-1/2} ad(theta xi).
pub fn phi_theta_apply(
    decomp: &RestrictedDecomposition,
    nu: &RootVector,
    gamma: &RootVector,
    xi: &[f64],
    x: &[f64],
) -> Result<Vec<f64>> {
    let s = phi_scalar(decomp, nu, gamma)?;
    let num = decomp.numeric();
    Ok(num.bracket_f64(&num.theta_f64(xi), x).iter().map(|v| -v * s).collect())
}

/// Matrix of phi_xi between the orthonormal root-space bases.
pub fn phi_map(
    decomp: &RestrictedDecomposition,
    nu: &RootVector,
    gamma: &RootVector,
    xi: &[f64],
) -> Result<PhiMap> {
    let scalar = phi_scalar(decomp, nu, gamma)?;
    let num = decomp.numeric();
    let norm = num.metric_an_f64(xi, xi);
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::BadNormal(format!("xi norm^2 = {norm}")));
    }
    let target = gamma.add(nu);
    let src = decomp.root(gamma)?;
    let tgt = decomp.root(&target)?;
    let src_on = orthonormal_f64(decomp, &src.basis);
    let tgt_on = orthonormal_f64(decomp, &tgt.basis);
    let mut matrix = vec![vec![0.0; src_on.len()]; tgt_on.len()];
    for (s_idx, sv) in src_on.iter().enumerate() {
        let img: Vec<f64> = num.bracket_f64(xi, sv).iter().map(|v| v * scalar).collect();
        for (t_idx, tv) in tgt_on.iter().enumerate() {
            matrix[t_idx][s_idx] = num.metric_an_f64(&img, tv);
        }
    }
    Ok(PhiMap { source: gamma.clone(), target, scalar, matrix })
}

pub fn orthonormal_f64(decomp: &RestrictedDecomposition, basis: &[RatVec]) -> Vec<Vec<f64>> {
    basis
        .iter()
        .map(|v| {
            let n2 = rat_to_f64(&decomp.metric_an(v, v));
            let s = 1.0 / n2.sqrt();
            vec_to_f64(v).iter().map(|x| x * s).collect()
        })
        .collect()
}

/// The block of the shape operator on one string class, with the off-block
/// leakage (which the string invariance says must vanish).
pub struct BlockReport {
    pub matrix: Vec<Vec<f64>>,
    pub spectrum: Vec<f64>,
    pub leakage: f64,
}

pub fn string_block(
    orbit: &OrbitModel,
    xi: &[f64],
    class_index: usize,
    tol: &Tolerances,
) -> Result<BlockReport> {
    let class = orbit
        .classes
        .get(class_index)
        .ok_or_else(|| Error::InvalidParameter(format!("no string class {class_index}")))?;
    let op = shape_operator(orbit, xi, tol)?;
    let r = class.range.clone();
    let n = orbit.tangent.len();
    let mut leakage = 0.0f64;
    for i in r.clone() {
        for j in 0..n {
            if !r.contains(&j) {
                leakage = leakage.max(op.matrix[i][j].abs());
            }
        }
    }
    if leakage > tol.leakage_tol {
        return Err(Error::LeakageViolation(leakage));
    }
    let k = r.len();
    let mut matrix = vec![vec![0.0; k]; k];
    for (bi, i) in r.clone().enumerate() {
        for (bj, j) in r.clone().enumerate() {
            matrix[bi][bj] = op.matrix[i][j];
        }
    }
    let spectrum = jacobi_eigenvalues(&matrix);
    Ok(BlockReport { matrix, spectrum, leakage })
}
