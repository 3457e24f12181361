//! Builders and checkers for the classified orbit families: case (I) and
//! case (II) constructions, complex/quaternionic structures on root spaces,
//! the algebraic characterization of the constant-curvature property,
//! codimension scans, the explicit obstruction blocks, and the normalizer
//! (slice-representation) certificate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eigen::{eigen3_via_charpoly, jacobi_eigenvalues};
use crate::error::{Error, Result};
use crate::geometry::{
    cpc_sweep, orthonormal_f64, phi_apply, shape_operator, CpcVerdict, OrbitModel, SweepConfig,
};
use crate::liealg::{RestrictedDecomposition, SubspaceTag};
use crate::linalg::{
    is_zero_vec, rat_to_f64, rint, vec_scale, vec_sub, vec_to_f64, zero_vec, Rat, RatMat, RatVec,
};
use crate::rootsys::RootVector;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CaseTag {
    I,
    IIi,
    IIiiA,
    IIiiB,
    IIiiC,
    Custom,
}

/// A removal pattern V = sum of V_alpha with its classification tag.
pub struct VSpec {
    pub entries: Vec<(RootVector, Vec<RatVec>)>,
    pub case_tag: CaseTag,
}

impl VSpec {
    pub fn build_orbit<'d>(&self, decomp: &'d RestrictedDecomposition) -> Result<OrbitModel<'d>> {
        OrbitModel::new(decomp, self.entries.clone())
    }
}

fn simple_root_checked(decomp: &RestrictedDecomposition, idx: usize) -> Result<RootVector> {
    let sys = &decomp.system;
    if idx >= sys.rank {
        return Err(Error::NotSimple(format!("index {idx}")));
    }
    if !sys.reduced_simple.contains(&idx) {
        return Err(Error::NotSimple(format!(
            "simple root {idx} is not reduced (2 alpha is a root)"
        )));
    }
    Ok(sys.simple_roots[idx].clone())
}

/// Case (I): V inside a single reduced simple root space.
pub enum CaseISelection {
    Dim(usize),
    Basis(Vec<RatVec>),
}

pub fn build_case_i<'d>(
    decomp: &'d RestrictedDecomposition,
    lambda_idx: usize,
    selection: CaseISelection,
) -> Result<OrbitModel<'d>> {
    let lambda = simple_root_checked(decomp, lambda_idx)?;
    let space = decomp.root(&lambda)?;
    let basis = match selection {
        CaseISelection::Dim(d) => {
            if d == 0 || d > space.basis.len() {
                return Err(Error::InvalidParameter(format!(
                    "case I subspace dimension {d} out of range 1..={}",
                    space.basis.len()
                )));
            }
            space.basis[..d].to_vec()
        }
        CaseISelection::Basis(b) => b,
    };
    OrbitModel::new(decomp, vec![(lambda, basis)])
}

fn check_pair(
    decomp: &RestrictedDecomposition,
    a0: usize,
    a1: usize,
) -> Result<(RootVector, RootVector)> {
    let r0 = simple_root_checked(decomp, a0)?;
    let r1 = simple_root_checked(decomp, a1)?;
    let sys = &decomp.system;
    if sys.cartan_matrix[a0][a1] != -1 || sys.cartan_matrix[a1][a0] != -1 {
        return Err(Error::InvalidParameter(format!(
            "simple roots {r0}, {r1} are not connected by a single edge"
        )));
    }
    if sys.length_sq(&r0) != sys.length_sq(&r1) {
        return Err(Error::InvalidParameter(format!(
            "simple roots {r0}, {r1} have different lengths"
        )));
    }
    Ok((r0, r1))
}

/// Case (II): V = V_0 + V_1 over two adjacent equal-length reduced simple
/// roots. The subalgebra closure is verified exactly by the orbit builder.
pub fn build_case_ii<'d>(
    decomp: &'d RestrictedDecomposition,
    a0: usize,
    a1: usize,
    v0: Vec<RatVec>,
    v1: Vec<RatVec>,
) -> Result<OrbitModel<'d>> {
    let (r0, r1) = check_pair(decomp, a0, a1)?;
    if v0.is_empty() || v1.is_empty() {
        return Err(Error::InvalidParameter("case II requires nonzero V_0 and V_1".into()));
    }
    OrbitModel::new(decomp, vec![(r0, v0), (r1, v1)])
}

/// Canonical extension: the case (II) pattern inside a higher-rank space;
/// the string partition then covers all of Delta^+.
pub fn canonical_extension_scenario<'d>(
    decomp: &'d RestrictedDecomposition,
    a0: usize,
    a1: usize,
    v0: Vec<RatVec>,
    v1: Vec<RatVec>,
) -> Result<OrbitModel<'d>> {
    let orbit = build_case_ii(decomp, a0, a1, v0, v1)?;
    let covered: usize = orbit.classes.iter().map(|c| c.roots.len()).sum();
    if covered != decomp.system.positive_roots.len() {
        return Err(Error::Internal("string partition does not cover Delta^+".into()));
    }
    Ok(orbit)
}

/// The canonical extension of the maximal flat of the rank-2 boundary
/// component: removes every root space of the A2 subsystem spanned by the
/// pair. Still a subalgebra, but not of the reduced-simple removal form.
pub fn flat_extension_orbit<'d>(
    decomp: &'d RestrictedDecomposition,
    a0: usize,
    a1: usize,
) -> Result<OrbitModel<'d>> {
    let (r0, r1) = check_pair(decomp, a0, a1)?;
    let sum = r0.add(&r1);
    let mut entries = Vec::new();
    for r in [r0, r1, sum] {
        let basis = decomp.root(&r)?.basis.clone();
        entries.push((r, basis));
    }
    OrbitModel::new(decomp, entries)
}

/// Exact rank data for the algebraic characterization
/// dim V_0 = dim V_1 = dim [V_0, V_1].
#[derive(Debug, Clone, serde::Serialize)]
pub struct CharacterizationReport {
    pub dim_v0: usize,
    pub dim_v1: usize,
    pub dim_bracket: usize,
    pub passes: bool,
}

pub fn characterization_check(
    decomp: &RestrictedDecomposition,
    v0: &[RatVec],
    v1: &[RatVec],
) -> CharacterizationReport {
    let dim_v0 = crate::linalg::span_rank(v0);
    let dim_v1 = crate::linalg::span_rank(v1);
    let mut brackets = Vec::new();
    for u in v0 {
        for v in v1 {
            brackets.push(decomp.alg.bracket(u, v));
        }
    }
    let dim_bracket = crate::linalg::span_rank(&brackets);
    CharacterizationReport {
        dim_v0,
        dim_v1,
        dim_bracket,
        passes: dim_v0 == dim_v1 && dim_v1 == dim_bracket,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum CertKind {
    Complex,
    Quaternionic,
}

/// Certificate for a complex or quaternionic structure built from k_0
/// elements; residuals are exact zeros when the defining identities hold.
pub struct StructureCertificate {
    pub kind: CertKind,
    pub generators: Vec<RatVec>,
    pub residuals: Vec<(String, f64)>,
}

impl StructureCertificate {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }
}

fn a2_top_root(decomp: &RestrictedDecomposition, a0: usize, a1: usize) -> Result<RootVector> {
    let (r0, r1) = check_pair(decomp, a0, a1)?;
    Ok(r0.add(&r1))
}

fn exact_residual(v: &RatVec) -> f64 {
    if is_zero_vec(v) {
        0.0
    } else {
        vec_to_f64(v).iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

/// Complex structure from two orthogonal vectors of g_{a0+a1}: the scaled
/// ad([theta X, Y]) squares to a negative multiple of the identity on the
/// span of X, Y and on both simple root spaces. All checks exact.
pub fn complex_structure(
    decomp: &RestrictedDecomposition,
    a0: usize,
    a1: usize,
    x: &RatVec,
    y: &RatVec,
) -> Result<StructureCertificate> {
    let top = a2_top_root(decomp, a0, a1)?;
    let space = decomp.root(&top)?;
    if space.basis.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "dim g_{top} < 2: no complex structure available"
        )));
    }
    for v in [x, y] {
        let proj = decomp.project(v, &SubspaceTag::Root(top.clone()))?;
        if &proj != v || is_zero_vec(v) {
            return Err(Error::NotInRootSpace(format!("generator not inside g_{top}")));
        }
    }
    if !decomp.metric_an(x, y).is_zero() {
        return Err(Error::InvalidParameter("generators must be orthogonal".into()));
    }
    let lambda_sq = decomp.system.length_sq(&top);
    let qx = decomp.metric_an(x, x);
    let qy = decomp.metric_an(y, y);
    let t = decomp.alg.bracket(&decomp.alg.theta_vec(x), y);
    let k0_part = decomp.project(&t, &SubspaceTag::K0)?;
    if k0_part != t {
        return Err(Error::Internal("[theta X, Y] is not inside k0".into()));
    }
    let mut residuals = Vec::new();
    // on span{X,Y}: [T, X] = 2 |lambda|^2 <X,X>_AN Y, [T, Y] = -2 |lambda|^2 <Y,Y>_AN X
    let r1 = vec_sub(&decomp.alg.bracket(&t, x), &vec_scale(y, &(rint(2) * &lambda_sq * &qx)));
    residuals.push(("square_on_span_x".into(), exact_residual(&r1)));
    let r2 =
        vec_sub(&decomp.alg.bracket(&t, y), &vec_scale(x, &(-(rint(2) * &lambda_sq * &qy))));
    residuals.push(("square_on_span_y".into(), exact_residual(&r2)));
    // on g_{a0}, g_{a1}: (ad T)^2 = -4 <X,X>_AN <Y,Y>_AN id (|lambda|^2 = 2)
    let kappa = rint(4) * &qx * &qy;
    for (name, idx) in [("square_on_g_a0", a0), ("square_on_g_a1", a1)] {
        let root = decomp.system.simple_roots[idx].clone();
        let mut worst = 0.0f64;
        for w in &decomp.root(&root)?.basis {
            let jw = decomp.alg.bracket(&t, w);
            let jjw = decomp.alg.bracket(&t, &jw);
            let r = vec_sub(&jjw, &vec_scale(w, &-kappa.clone()));
            worst = worst.max(exact_residual(&r));
        }
        residuals.push((name.into(), worst));
    }
    let cert = StructureCertificate { kind: CertKind::Complex, generators: vec![t], residuals };
    if cert.max_residual() > 1e-10 {
        return Err(Error::StructureResidual(format!(
            "complex structure residual {:.3e}",
            cert.max_residual()
        )));
    }
    Ok(cert)
}

/// Quaternionic structure from three pairwise orthogonal vectors of
/// g_{a0+a1}: J1, J2 anticommute on the simple root spaces and J3 = J1 J2
/// squares to a negative multiple of the identity. All checks exact.
pub fn quaternionic_structure(
    decomp: &RestrictedDecomposition,
    a0: usize,
    a1: usize,
    x: &RatVec,
    y: &RatVec,
    z: &RatVec,
) -> Result<StructureCertificate> {
    let top = a2_top_root(decomp, a0, a1)?;
    if decomp.root(&top)?.basis.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "dim g_{top} < 3: no quaternionic structure available"
        )));
    }
    for (u, v) in [(x, y), (x, z), (y, z)] {
        if !decomp.metric_an(u, v).is_zero() {
            return Err(Error::InvalidParameter(
                "generators must be pairwise orthogonal".into(),
            ));
        }
    }
    let c1 = complex_structure(decomp, a0, a1, x, y)?;
    let c2 = complex_structure(decomp, a0, a1, x, z)?;
    let k1 = c1.generators[0].clone();
    let k2 = c2.generators[0].clone();
    let mut residuals = c1.residuals.clone();
    residuals.extend(c2.residuals.iter().map(|(n, r)| (format!("j2_{n}"), *r)));
    let qx = decomp.metric_an(x, x);
    let qy = decomp.metric_an(y, y);
    let qz = decomp.metric_an(z, z);
    for (name, idx) in [("anticommute_on_g_a0", a0), ("anticommute_on_g_a1", a1)] {
        let root = decomp.system.simple_roots[idx].clone();
        let mut worst = 0.0f64;
        let mut worst_j3 = 0.0f64;
        for w in &decomp.root(&root)?.basis {
            let j1j2 = decomp.alg.bracket(&k1, &decomp.alg.bracket(&k2, w));
            let j2j1 = decomp.alg.bracket(&k2, &decomp.alg.bracket(&k1, w));
            let r = crate::linalg::vec_add(&j1j2, &j2j1);
            worst = worst.max(exact_residual(&r));
            // J3^2 = -16 qx^2 qy qz on w, for J3 = ad(K1) ad(K2)
            let j3j3w = decomp.alg.bracket(&k1, &decomp.alg.bracket(&k2, &j1j2));
            let kappa = rint(16) * &qx * &qx * &qy * &qz;
            let rr = vec_sub(&j3j3w, &vec_scale(w, &-kappa));
            worst_j3 = worst_j3.max(exact_residual(&rr));
        }
        residuals.push((name.into(), worst));
        residuals.push((format!("j3_{name}"), worst_j3));
    }
    let cert = StructureCertificate {
        kind: CertKind::Quaternionic,
        generators: vec![k1, k2],
        residuals,
    };
    if cert.max_residual() > 1e-10 {
        return Err(Error::StructureResidual(format!(
            "quaternionic structure residual {:.3e}",
            cert.max_residual()
        )));
    }
    Ok(cert)
}

/// Verifies that ad(t) restricts to a complex structure on span{x, ad(t)x}
/// inside the given root space; returns the span and the exact square scale.
fn j_span(
    decomp: &RestrictedDecomposition,
    t: &RatVec,
    x: &RatVec,
    root: &RootVector,
) -> Result<(Vec<RatVec>, Rat)> {
    if is_zero_vec(x) {
        return Err(Error::InvalidParameter("zero seed vector".into()));
    }
    let jx = decomp.alg.bracket(t, x);
    if is_zero_vec(&jx) {
        return Err(Error::StructureResidual(format!(
            "ad(T) kills the seed vector in g_{root}"
        )));
    }
    let in_root = decomp.project(&jx, &SubspaceTag::Root(root.clone()))?;
    if in_root != jx {
        return Err(Error::StructureResidual(format!("ad(T) leaves g_{root}")));
    }
    let jjx = decomp.alg.bracket(t, &jx);
    let pivot = x.iter().position(|c| !c.is_zero()).unwrap();
    let kappa = -(&jjx[pivot] / &x[pivot]);
    if !kappa.is_positive() {
        return Err(Error::StructureResidual("ad(T)^2 is not a negative scalar".into()));
    }
    let r = vec_sub(&jjx, &vec_scale(x, &-kappa.clone()));
    if !is_zero_vec(&r) {
        return Err(Error::StructureResidual(
            "ad(T)^2 is not scalar on the candidate complex line".into(),
        ));
    }
    Ok((vec![x.clone(), jx], kappa))
}

/// Builds the complex-lines removal pattern: V_k = span{X_k, ad(T) X_k}
/// with T in k_0 defining complex structures on both V_k and annihilating
/// [V_0, V_1]. All hypotheses checked exactly; dim [V_0, V_1] = 2 enforced.
pub fn build_v_complex(
    decomp: &RestrictedDecomposition,
    a0: usize,
    a1: usize,
    x0: &RatVec,
    x1: &RatVec,
    t: &RatVec,
) -> Result<(VSpec, StructureCertificate)> {
    let (r0, r1) = check_pair(decomp, a0, a1)?;
    let k0_part = decomp.project(t, &SubspaceTag::K0)?;
    if &k0_part != t || is_zero_vec(t) {
        return Err(Error::InvalidParameter("structure generator must lie in k0".into()));
    }
    let (v0, kappa0) = j_span(decomp, t, x0, &r0)?;
    let (v1, kappa1) = j_span(decomp, t, x1, &r1)?;
    if kappa0 != kappa1 {
        return Err(Error::StructureResidual(
            "ad(T) squares to different scalars on V_0 and V_1".into(),
        ));
    }
    let mut brackets = Vec::new();
    for u in &v0 {
        for v in &v1 {
            brackets.push(decomp.alg.bracket(u, v));
        }
    }
    let dim_bracket = crate::linalg::span_rank(&brackets);
    if dim_bracket != 2 {
        return Err(Error::StructureResidual(format!(
            "dim [V_0, V_1] = {dim_bracket}, expected 2"
        )));
    }
    let mut vanish = 0.0f64;
    for w in &brackets {
        vanish = vanish.max(exact_residual(&decomp.alg.bracket(t, w)));
    }
    if vanish > 1e-10 {
        return Err(Error::StructureResidual(format!(
            "ad(T) does not annihilate [V_0, V_1]: residual {vanish:.3e}"
        )));
    }
    let residuals = vec![
        ("square_on_v0".into(), 0.0),
        ("square_on_v1".into(), 0.0),
        ("vanish_on_bracket".into(), vanish),
    ];
    let cert =
        StructureCertificate { kind: CertKind::Complex, generators: vec![t.clone()], residuals };
    let spec = VSpec { entries: vec![(r0, v0), (r1, v1)], case_tag: CaseTag::IIiiB };
    Ok((spec, cert))
}

/// Quaternionic counterpart: V_k = span{X_k, J1 X_k, J2 X_k, J3 X_k} with
/// the J's from k_0 generators k1, k2; structure identities and the
/// vanishing on [V_0, V_1] checked exactly.
pub fn build_v_quaternionic(
    decomp: &RestrictedDecomposition,
    a0: usize,
    a1: usize,
    x0: &RatVec,
    x1: &RatVec,
    k1: &RatVec,
    k2: &RatVec,
) -> Result<(VSpec, StructureCertificate)> {
    let (r0, r1) = check_pair(decomp, a0, a1)?;
    for t in [k1, k2] {
        let k0_part = decomp.project(t, &SubspaceTag::K0)?;
        if &k0_part != t || is_zero_vec(t) {
            return Err(Error::InvalidParameter("structure generators must lie in k0".into()));
        }
    }
    let build = |x: &RatVec, root: &RootVector| -> Result<Vec<RatVec>> {
        j_span(decomp, k1, x, root)?;
        j_span(decomp, k2, x, root)?;
        let j1x = decomp.alg.bracket(k1, x);
        let j2x = decomp.alg.bracket(k2, x);
        let j3x = decomp.alg.bracket(k1, &j2x);
        let v = vec![x.clone(), j1x, j2x, j3x];
        if crate::linalg::span_rank(&v) != 4 {
            return Err(Error::StructureResidual(format!(
                "quaternionic span in g_{root} is degenerate"
            )));
        }
        Ok(v)
    };
    let v0 = build(x0, &r0)?;
    let v1 = build(x1, &r1)?;
    let mut brackets = Vec::new();
    for u in &v0 {
        for v in &v1 {
            brackets.push(decomp.alg.bracket(u, v));
        }
    }
    let dim_bracket = crate::linalg::span_rank(&brackets);
    if dim_bracket != 4 {
        return Err(Error::StructureResidual(format!(
            "dim [V_0, V_1] = {dim_bracket}, expected 4"
        )));
    }
    let mut vanish = 0.0f64;
    for w in &brackets {
        for t in [k1, k2] {
            vanish = vanish.max(exact_residual(&decomp.alg.bracket(t, w)));
        }
    }
    if vanish > 1e-10 {
        return Err(Error::StructureResidual(format!(
            "ad(l) does not annihilate [V_0, V_1]: residual {vanish:.3e}"
        )));
    }
    let cert = StructureCertificate {
        kind: CertKind::Quaternionic,
        generators: vec![k1.clone(), k2.clone()],
        residuals: vec![("vanish_on_bracket".into(), vanish)],
    };
    let spec = VSpec { entries: vec![(r0, v0), (r1, v1)], case_tag: CaseTag::IIiiC };
    Ok((spec, cert))
}

/// Deterministic search for a valid complex-lines scenario: seeds X_0, X_1
/// with the first root-space basis vectors and scans ordered pairs of
/// g_{a0+a1} basis vectors for a generator T = [theta X, Y] that passes
/// every exact check of the builder.
pub fn complex_lines_scenario(
    decomp: &RestrictedDecomposition,
    a0: usize,
    a1: usize,
) -> Result<(VSpec, StructureCertificate)> {
    let (r0, r1) = check_pair(decomp, a0, a1)?;
    let top = r0.add(&r1);
    let x0 = decomp.root(&r0)?.basis[0].clone();
    let x1 = decomp.root(&r1)?.basis[0].clone();
    let top_basis = decomp.root(&top)?.basis.clone();
    for i in 0..top_basis.len() {
        for j in 0..top_basis.len() {
            if i == j {
                continue;
            }
            let t =
                decomp.alg.bracket(&decomp.alg.theta_vec(&top_basis[i]), &top_basis[j]);
            if is_zero_vec(&t) {
                continue;
            }
            if let Ok(found) = build_v_complex(decomp, a0, a1, &x0, &x1, &t) {
                return Ok(found);
            }
        }
    }
    Err(Error::StructureResidual(
        "no valid complex-structure generator found in g_{a0+a1}".into(),
    ))
}

/// Explicit block matrices and their spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    G2,
    Orthogonal4,
    CaseIi3x3,
    CaseIii6x6,
    Tail3x3,
}

impl std::str::FromStr for BlockKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g2" => Ok(BlockKind::G2),
            "orthogonal4" => Ok(BlockKind::Orthogonal4),
            "case-ii-3x3" => Ok(BlockKind::CaseIi3x3),
            "case-iii-6x6" => Ok(BlockKind::CaseIii6x6),
            "tail-3x3" => Ok(BlockKind::Tail3x3),
            other => Err(Error::UnknownBlockKind(other.to_string())),
        }
    }
}

pub struct BlockSpectrum {
    pub matrix: Vec<Vec<f64>>,
    /// Sorted ascending.
    pub spectrum: Vec<f64>,
    pub symmetric: bool,
}

/// The displayed block matrices. The non-symmetric rank-2 exceptional block
/// is diagonalized through its characteristic polynomial (its displayed
/// basis is not orthonormal); the symmetric ones go through Jacobi.
pub fn obstruction_block(kind: BlockKind, phi: f64, alpha0_len: f64) -> Result<BlockSpectrum> {
    if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&phi) {
        return Err(Error::InvalidParameter(format!("phi = {phi} outside [0, pi/2]")));
    }
    let c = phi.cos();
    let s = phi.sin();
    let h = alpha0_len / 2.0;
    let (matrix, symmetric): (Vec<Vec<f64>>, bool) = match kind {
        BlockKind::G2 => (
            vec![
                vec![0.0, 4.0, 0.0],
                vec![0.5, 0.0, 3.0],
                vec![0.0, 0.5, 0.0],
            ],
            false,
        ),
        BlockKind::CaseIi3x3 => (
            vec![
                vec![0.0, h * c, 0.0],
                vec![h * c, 0.0, h * s],
                vec![0.0, h * s, 0.0],
            ],
            true,
        ),
        BlockKind::Tail3x3 => (
            vec![
                vec![0.0, h * s, 0.0],
                vec![h * s, 0.0, h * c],
                vec![0.0, h * c, 0.0],
            ],
            true,
        ),
        BlockKind::Orthogonal4 => (
            vec![
                vec![0.0, h * c, h * s, 0.0],
                vec![h * c, 0.0, 0.0, h * s],
                vec![h * s, 0.0, 0.0, h * c],
                vec![0.0, h * s, h * c, 0.0],
            ],
            true,
        ),
        BlockKind::CaseIii6x6 => {
            let r2 = std::f64::consts::SQRT_2;
            (
                vec![
                    vec![0.0, h * r2 * c, 0.0, 0.0, 0.0, 0.0],
                    vec![h * r2 * c, 0.0, h * r2 * c, h * s, 0.0, 0.0],
                    vec![0.0, h * r2 * c, 0.0, 0.0, h * r2 * s, 0.0],
                    vec![0.0, h * s, 0.0, 0.0, h * c, 0.0],
                    vec![0.0, 0.0, h * r2 * s, h * c, 0.0, h * r2 * s],
                    vec![0.0, 0.0, 0.0, 0.0, h * r2 * s, 0.0],
                ],
                true,
            )
        }
    };
    let spectrum = if symmetric {
        jacobi_eigenvalues(&matrix)
    } else {
        let m = [
            [matrix[0][0], matrix[0][1], matrix[0][2]],
            [matrix[1][0], matrix[1][1], matrix[1][2]],
            [matrix[2][0], matrix[2][1], matrix[2][2]],
        ];
        eigen3_via_charpoly(&m)
    };
    Ok(BlockSpectrum { matrix, spectrum, symmetric })
}

/// Seeded random rational subspaces of the two simple root spaces with
/// exact rank decisions, recording characterization and sweep agreement.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ScanReport {
    pub trials: usize,
    pub dims: (usize, usize),
    pub characterization_passes: usize,
    pub sweep_passes: usize,
    pub mismatches: usize,
    pub bracket_dims_seen: Vec<usize>,
}

fn random_subspace(
    rng: &mut ChaCha8Rng,
    ambient: &[RatVec],
    dim: usize,
    alg_dim: usize,
) -> Vec<RatVec> {
    loop {
        let mut vecs = Vec::with_capacity(dim);
        for _ in 0..dim {
            let mut v = zero_vec(alg_dim);
            for b in ambient {
                let c = rint(rng.gen_range(-9i64..=9));
                if !c.is_zero() {
                    crate::linalg::vec_axpy(&mut v, &c, b);
                }
            }
            vecs.push(v);
        }
        if crate::linalg::span_rank(&vecs) == dim {
            return vecs;
        }
    }
}

pub fn codimension_scan(
    decomp: &RestrictedDecomposition,
    a0: usize,
    a1: usize,
    dims: (usize, usize),
    trials: usize,
    seed: u64,
    sweep: &SweepConfig,
) -> Result<ScanReport> {
    let (r0, r1) = check_pair(decomp, a0, a1)?;
    let b0 = decomp.root(&r0)?.basis.clone();
    let b1 = decomp.root(&r1)?.basis.clone();
    if dims.0 == 0 || dims.0 > b0.len() || dims.1 == 0 || dims.1 > b1.len() {
        return Err(Error::InvalidParameter(format!(
            "scan dims {dims:?} out of range for multiplicities ({}, {})",
            b0.len(),
            b1.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ScanReport {
        trials,
        dims,
        characterization_passes: 0,
        sweep_passes: 0,
        mismatches: 0,
        bracket_dims_seen: Vec::new(),
    };
    for _ in 0..trials {
        let v0 = random_subspace(&mut rng, &b0, dims.0, decomp.dim());
        let v1 = random_subspace(&mut rng, &b1, dims.1, decomp.dim());
        let check = characterization_check(decomp, &v0, &v1);
        if !report.bracket_dims_seen.contains(&check.dim_bracket) {
            report.bracket_dims_seen.push(check.dim_bracket);
        }
        let orbit = build_case_ii(decomp, a0, a1, v0, v1)?;
        let verdict = cpc_sweep(&orbit, sweep)?;
        if check.passes {
            report.characterization_passes += 1;
        }
        if verdict.is_cpc {
            report.sweep_passes += 1;
        }
        if check.passes != verdict.is_cpc {
            report.mismatches += 1;
        }
    }
    report.bracket_dims_seen.sort_unstable();
    Ok(report)
}

/// Sweep/characterization agreement over random V pairs with random
/// dimensions (the if-and-only-if statement as a scan).
pub fn equivalence_scan(
    decomp: &RestrictedDecomposition,
    a0: usize,
    a1: usize,
    trials: usize,
    seed: u64,
    sweep: &SweepConfig,
) -> Result<ScanReport> {
    let (r0, r1) = check_pair(decomp, a0, a1)?;
    let m0 = decomp.root(&r0)?.basis.len();
    let m1 = decomp.root(&r1)?.basis.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = ScanReport {
        trials,
        dims: (0, 0),
        characterization_passes: 0,
        sweep_passes: 0,
        mismatches: 0,
        bracket_dims_seen: Vec::new(),
    };
    for _ in 0..trials {
        let d0 = rng.gen_range(1..=m0);
        let d1 = rng.gen_range(1..=m1);
        let trial_seed = rng.gen::<u64>();
        let one = codimension_scan(decomp, a0, a1, (d0, d1), 1, trial_seed, sweep)?;
        total.characterization_passes += one.characterization_passes;
        total.sweep_passes += one.sweep_passes;
        total.mismatches += one.mismatches;
        for b in one.bracket_dims_seen {
            if !total.bracket_dims_seen.contains(&b) {
                total.bracket_dims_seen.push(b);
            }
        }
    }
    total.bracket_dims_seen.sort_unstable();
    Ok(total)
}

/// Witness data for the mixed-length obstruction: the tangent vector
/// X + phi_{xi2}(X) is an eigenvector of S_xi with eigenvalue
/// sin(phi) |alpha_long| / 2, which depends on the direction.
#[derive(Debug, Clone, serde::Serialize)]
pub struct WitnessSample {
    pub phi: f64,
    pub eigenvalue: f64,
    pub expected: f64,
    pub residual: f64,
}

pub struct LengthObstructionReport {
    pub verdict: CpcVerdict,
    pub witness: Vec<WitnessSample>,
    pub long_len: f64,
}

/// The rank-2 mixed-length scenario: V_short a corank-one subspace of the
/// short simple root space, V_long the whole long one. Runs the sweep
/// (expected to fail) and reproduces the witness eigenvalue along the grid.
pub fn length_obstruction_scenario(
    decomp: &RestrictedDecomposition,
    sweep: &SweepConfig,
) -> Result<LengthObstructionReport> {
    let sys = &decomp.system;
    if sys.family != crate::rootsys::Family::B || sys.rank != 2 {
        return Err(Error::InvalidParameter(
            "length obstruction scenario needs a rank-2 B-type space".into(),
        ));
    }
    // ordered simples: [0] = long (e1 - e2), [1] = short (e2)
    let long = sys.simple_roots[0].clone();
    let short = sys.simple_roots[1].clone();
    let short_basis = decomp.root(&short)?.basis.clone();
    let n = short_basis.len();
    if n < 2 {
        return Err(Error::InvalidParameter("short multiplicity must be >= 2".into()));
    }
    let v_short: Vec<RatVec> = short_basis[..n - 1].to_vec();
    let v_long = decomp.root(&long)?.basis.clone();
    let orbit = OrbitModel::new(
        decomp,
        vec![(short.clone(), v_short.clone()), (long.clone(), v_long.clone())],
    )?;
    let verdict = cpc_sweep(&orbit, sweep)?;

    // Witness: X spans the tangent part of the short root space.
    let x = short_basis[n - 1].clone();
    let x_f = {
        let n2 = rat_to_f64(&decomp.metric_an(&x, &x));
        vec_to_f64(&x).iter().map(|v| v / n2.sqrt()).collect::<Vec<f64>>()
    };
    let xi2 = orthonormal_f64(decomp, &v_long)[0].clone();
    let xi1 = orthonormal_f64(decomp, &[v_short[0].clone()])[0].clone();
    let phi_x = phi_apply(decomp, &long, &short, &xi2, &x_f)?;
    let num = decomp.numeric();
    let mut w: Vec<f64> = x_f.iter().zip(&phi_x).map(|(a, b)| a + b).collect();
    let wn = num.metric_an_f64(&w, &w).sqrt();
    for v in w.iter_mut() {
        *v /= wn;
    }
    let w_coords: Vec<f64> = orbit.tangent.iter().map(|e| num.metric_an_f64(&w, e)).collect();
    let long_len = rat_to_f64(&sys.length_sq(&long)).sqrt();
    let tol = sweep.tol;
    let mut witness = Vec::new();
    for k in 0..9 {
        let phi = std::f64::consts::FRAC_PI_2 * k as f64 / 8.0;
        let xi: Vec<f64> = xi1
            .iter()
            .zip(&xi2)
            .map(|(a, b)| phi.cos() * a + phi.sin() * b)
            .collect();
        let op = shape_operator(&orbit, &xi, &tol)?;
        let mut s_w = vec![0.0; orbit.tangent_dim()];
        for i in 0..orbit.tangent_dim() {
            for j in 0..orbit.tangent_dim() {
                s_w[i] += op.matrix[j][i] * w_coords[j];
            }
        }
        let eigenvalue: f64 = s_w.iter().zip(&w_coords).map(|(a, b)| a * b).sum::<f64>();
        let expected = phi.sin() * long_len / 2.0;
        let residual = s_w
            .iter()
            .zip(&w_coords)
            .map(|(a, b)| (a - eigenvalue * b).abs())
            .fold(0.0, f64::max);
        witness.push(WitnessSample { phi, eigenvalue, expected, residual });
    }
    Ok(LengthObstructionReport { verdict, witness, long_len })
}

/// Normalizer certificate: m = {Z in k : [Z, (1-theta) s] in (1-theta) s}
/// computed exactly, then refined by subalgebra closure against s (the Lie
/// algebra of the submanifold normalizer must close: [Z, s] stays inside
/// s + m at every stage). The slice rank dim([m, xi] + R xi) is reported per
/// sampled normal direction; transitivity on the unit normal sphere needs
/// the rank to reach dim V everywhere.
#[derive(Debug, Clone, serde::Serialize)]
pub struct NormalizerReport {
    /// Dimension of the plain linear normalizer kernel.
    pub m_dim: usize,
    /// Dimension after the subalgebra-closure refinement (the bound actually
    /// used for the slice ranks).
    pub m_refined_dim: usize,
    pub dim_v: usize,
    pub orbit_ranks: Vec<usize>,
    pub transitive_possible: bool,
}

pub fn normalizer_check(orbit: &OrbitModel, seed: u64) -> Result<NormalizerReport> {
    let decomp = orbit.decomp;
    let alg = &decomp.alg;
    let dim = decomp.dim();
    let one_minus_theta = |v: &RatVec| -> RatVec { vec_sub(v, &alg.theta_vec(v)) };

    // Basis of k: k0 plus X + theta X over the positive root spaces.
    let mut k_basis: Vec<RatVec> = decomp.k0_basis.clone();
    for r in decomp.positive_roots() {
        for v in &r.basis {
            k_basis.push(crate::linalg::vec_add(v, &alg.theta_vec(v)));
        }
    }
    let w_basis: Vec<RatVec> = orbit.tangent_pre.iter().map(&one_minus_theta).collect();
    let v_basis: Vec<RatVec> = orbit.normal_pre.iter().map(&one_minus_theta).collect();

    // p = a + (1-theta) n; complement of W inside p via exact orthogonality.
    let mut p_basis: Vec<RatVec> = decomp.a_basis.clone();
    for r in decomp.positive_roots() {
        for v in &r.basis {
            p_basis.push(one_minus_theta(v));
        }
    }
    let mut rows = RatMat::zeros(w_basis.len(), p_basis.len());
    for (i, w) in w_basis.iter().enumerate() {
        for (j, p) in p_basis.iter().enumerate() {
            *rows.at_mut(i, j) = alg.b_theta(w, p);
        }
    }
    let q_coords = rows.nullspace();
    let q_basis: Vec<RatVec> = q_coords
        .iter()
        .map(|c| {
            let mut acc = zero_vec(dim);
            for (j, cj) in c.iter().enumerate() {
                if !cj.is_zero() {
                    crate::linalg::vec_axpy(&mut acc, cj, &p_basis[j]);
                }
            }
            acc
        })
        .collect();
    if q_basis.len() != v_basis.len() {
        return Err(Error::Internal("normal complement dimension mismatch".into()));
    }

    // Linear conditions <[Z, w_i], q_j> = 0 over the k coordinates of Z.
    let mut cond = RatMat::zeros(w_basis.len() * q_basis.len(), k_basis.len());
    for (b, z) in k_basis.iter().enumerate() {
        for (i, w) in w_basis.iter().enumerate() {
            let bw = alg.bracket(z, w);
            for (j, q) in q_basis.iter().enumerate() {
                *cond.at_mut(i * q_basis.len() + j, b) = alg.b_theta(&bw, q);
            }
        }
    }
    let m_coords = cond.nullspace();
    let m_basis: Vec<RatVec> = m_coords
        .iter()
        .map(|c| {
            let mut acc = zero_vec(dim);
            for (j, cj) in c.iter().enumerate() {
                if !cj.is_zero() {
                    crate::linalg::vec_axpy(&mut acc, cj, &k_basis[j]);
                }
            }
            acc
        })
        .collect();
    let m_dim = m_basis.len();

    // Subalgebra-closure refinement: the normalizer algebra of the orbit is
    // s + h with h inside the linear kernel and [h, s] inside s + h, so
    // iterate m <- {Z in m : [Z, s] in span(s + m)} until stable. The true h
    // survives every step, making rank failure a sound certificate.
    let mut m_cur = m_basis;
    loop {
        let mut span_basis: Vec<RatVec> = orbit.tangent_pre.clone();
        span_basis.extend(m_cur.iter().cloned());
        let span = crate::linalg::SpanSolver::new(&span_basis);
        let mut rows: Vec<RatVec> = Vec::new();
        for s_vec in &orbit.tangent_pre {
            // obstruction([Z, s_vec]) = 0, linear in the m coordinates
            let obs_dim = dim - span.rank();
            let mut cols: Vec<RatVec> = Vec::new();
            for z in &m_cur {
                cols.push(span.obstruction(&alg.bracket(z, s_vec)));
            }
            for r in 0..obs_dim {
                rows.push(cols.iter().map(|c| c[r].clone()).collect());
            }
        }
        if m_cur.is_empty() {
            break;
        }
        let cond = RatMat::from_rows(rows);
        let kept = cond.nullspace();
        if kept.len() == m_cur.len() {
            break;
        }
        m_cur = kept
            .iter()
            .map(|c| {
                let mut acc = zero_vec(dim);
                for (j, cj) in c.iter().enumerate() {
                    if !cj.is_zero() {
                        crate::linalg::vec_axpy(&mut acc, cj, &m_cur[j]);
                    }
                }
                acc
            })
            .collect();
    }
    let m_basis = m_cur;

    // Sample xi over the normal basis directions plus seeded rational
    // combinations; transitivity needs rank dim V at every xi.
    let mut samples: Vec<RatVec> = v_basis.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while samples.len() < v_basis.len() + 16 {
        let mut v = zero_vec(dim);
        for b in &v_basis {
            let c = rint(rng.gen_range(-9i64..=9));
            if !c.is_zero() {
                crate::linalg::vec_axpy(&mut v, &c, b);
            }
        }
        if !is_zero_vec(&v) {
            samples.push(v);
        }
    }
    let mut orbit_ranks = Vec::with_capacity(samples.len());
    for xi in &samples {
        let mut span: Vec<RatVec> = vec![xi.clone()];
        for z in &m_basis {
            span.push(alg.bracket(z, xi));
        }
        orbit_ranks.push(crate::linalg::span_rank(&span));
    }
    let dim_v = v_basis.len();
    let transitive_possible = orbit_ranks.iter().all(|&r| r == dim_v);
    Ok(NormalizerReport {
        m_dim,
        m_refined_dim: m_basis.len(),
        dim_v,
        orbit_ranks,
        transitive_possible,
    })
}

/// The subspace {Z in k0 : [Z, V] = 0}, which the normalizer always
/// contains (used as an invariant check).
pub fn k0_annihilator_of_v(orbit: &OrbitModel) -> Vec<RatVec> {
    let decomp = orbit.decomp;
    let k0 = &decomp.k0_basis;
    if k0.is_empty() {
        return Vec::new();
    }
    let mut rows = RatMat::zeros(orbit.normal_pre.len() * decomp.dim(), k0.len());
    for (b, z) in k0.iter().enumerate() {
        for (i, v) in orbit.normal_pre.iter().enumerate() {
            let bv = decomp.alg.bracket(z, v);
            for (c, val) in bv.iter().enumerate() {
                *rows.at_mut(i * decomp.dim() + c, b) = val.clone();
            }
        }
    }
    rows.nullspace()
        .iter()
        .map(|co| {
            let mut acc = zero_vec(decomp.dim());
            for (j, cj) in co.iter().enumerate() {
                if !cj.is_zero() {
                    crate::linalg::vec_axpy(&mut acc, cj, &k0[j]);
                }
            }
            acc
        })
        .collect()
}
