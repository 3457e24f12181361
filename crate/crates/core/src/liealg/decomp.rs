//! Restricted root space decomposition of a realized algebra with respect to
//! its canonical maximal abelian subspace, plus the left-invariant metric on
//! a + n and exact projections onto the summands.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::OnceLock;

use num_traits::Zero;

use super::{CanonicalData, StructureConstantAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{
    gram_schmidt, is_zero_vec, rat_to_f64, rint, vec_add, vec_scale, vec_to_f64, zero_vec, Rat,
    RatMat, RatVec,
};
use crate::rootsys::{AbstractRootSystem, RootVector};

/// One realized restricted root: abstract coordinates, the functional as a
/// value vector on the a-basis, an exactly B_theta-orthogonal basis of the
/// root space, and the root vector H_lambda (in the scaled metric).
pub struct RealizedRoot {
    pub coeffs: RootVector,
    pub functional: RatVec,
    pub basis: Vec<RatVec>,
    pub h_vec: RatVec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubspaceTag {
    A,
    N,
    AN,
    K0,
    G0,
    Root(RootVector),
}

impl std::str::FromStr for SubspaceTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(SubspaceTag::A),
            "n" => Ok(SubspaceTag::N),
            "an" | "a+n" => Ok(SubspaceTag::AN),
            "k0" => Ok(SubspaceTag::K0),
            "g0" => Ok(SubspaceTag::G0),
            other => Err(Error::UnknownSubspace(other.to_string())),
        }
    }
}

/// Cached floating-point mirrors of the exact data, built once per
/// decomposition and shared by the geometry layer.
pub struct NumericCtx {
    pub bracket: Vec<Vec<Vec<(usize, f64)>>>,
    pub theta: Vec<Vec<f64>>,
    /// Scaled B_theta Gram matrix over the algebra basis.
    pub gram_bt: Vec<Vec<f64>>,
    /// a+n metric extended to the algebra by exact projection.
    pub gram_an: Vec<Vec<f64>>,
    /// Orthonormal basis of a+n: the a block first, then one block per
    /// positive root, in decomposition order.
    pub an_basis: Vec<Vec<f64>>,
    /// (root index or None for the a block, range into an_basis).
    pub an_groups: Vec<(Option<usize>, Range<usize>)>,
}

impl NumericCtx {
    pub fn bracket_f64(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let dim = self.theta.len();
        let mut out = vec![0.0; dim];
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0.0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if *yj == 0.0 {
                    continue;
                }
                let f = xi * yj;
                for (k, c) in &self.bracket[i][j] {
                    out[*k] += f * c;
                }
            }
        }
        out
    }

    pub fn theta_f64(&self, x: &[f64]) -> Vec<f64> {
        let dim = self.theta.len();
        let mut out = vec![0.0; dim];
        for (r, row) in self.theta.iter().enumerate() {
            let mut acc = 0.0;
            for (c, t) in row.iter().enumerate() {
                if *t != 0.0 {
                    acc += t * x[c];
                }
            }
            out[r] = acc;
        }
        out
    }

    pub fn inner_bt_f64(&self, x: &[f64], y: &[f64]) -> f64 {
        bilinear(&self.gram_bt, x, y)
    }

    pub fn metric_an_f64(&self, x: &[f64], y: &[f64]) -> f64 {
        bilinear(&self.gram_an, x, y)
    }
}

fn bilinear(g: &[Vec<f64>], x: &[f64], y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0.0 {
            continue;
        }
        let row = &g[i];
        let mut r = 0.0;
        for (j, yj) in y.iter().enumerate() {
            if *yj != 0.0 {
                r += row[j] * yj;
            }
        }
        acc += xi * r;
    }
    acc
}

/// The data g = g_0 + sum g_lambda with a in p, root functionals, root
/// vectors, k_0, and the metric scale, together with the abstract system the
/// realization carries.
pub struct RestrictedDecomposition {
    pub alg: StructureConstantAlgebra,
    pub label: String,
    pub a_basis: Vec<RatVec>,
    pub h_reg: RatVec,
    /// Positives first (abstract order), then the matching negatives.
    pub roots: Vec<RealizedRoot>,
    pub g0_basis: Vec<RatVec>,
    pub k0_basis: Vec<RatVec>,
    /// Positive rational c applied to B_theta so the shortest simple root
    /// has squared length 2.
    pub metric_scale: Rat,
    pub system: AbstractRootSystem,
    root_lookup: HashMap<RootVector, usize>,
    /// Columns: a, k0, then every root basis in `roots` order.
    component_basis: Vec<RatVec>,
    component_inv: RatMat,
    a_range: Range<usize>,
    k0_range: Range<usize>,
    root_ranges: Vec<Range<usize>>,
    numeric: OnceLock<NumericCtx>,
}

impl RestrictedDecomposition {
    pub fn new(alg: StructureConstantAlgebra, canonical: CanonicalData) -> Result<Self> {
        let dim = alg.dim;
        let rank = canonical.rank;
        let a_basis = canonical.a_basis_vectors(dim);
        let h_reg = canonical.h_reg_vector(dim);
        let ad_h = alg.ad(&h_reg);

        // Candidate eigenvalues; regularity means they are pairwise distinct.
        let mut mus: Vec<Rat> = Vec::new();
        for f in &canonical.candidates {
            let mu: Rat = f.iter().zip(&canonical.h_reg_a).map(|(a, b)| a * b).sum();
            if mu.is_zero() || mus.contains(&mu) {
                return Err(Error::Internal(format!(
                    "{}: regular element is not regular for the candidate functionals",
                    canonical.label
                )));
            }
            mus.push(mu);
        }

        struct Raw {
            functional: RatVec,
            basis: Vec<RatVec>,
        }
        let mut raw: Vec<Raw> = Vec::new();
        let mut total = 0usize;
        for (f, mu) in canonical.candidates.iter().zip(&mus) {
            let mut shifted = ad_h.clone();
            for i in 0..dim {
                *shifted.at_mut(i, i) -= mu;
            }
            let basis = shifted.nullspace();
            if basis.is_empty() {
                continue;
            }
            total += basis.len();
            raw.push(Raw { functional: f.clone(), basis });
        }
        let g0_raw = ad_h.nullspace();
        total += g0_raw.len();
        if total != dim {
            return Err(Error::Internal(format!(
                "{}: decomposition dimension mismatch: {} root/zero dims vs algebra dim {}",
                canonical.label, total, dim
            )));
        }

        // Joint-eigenspace verification against every a-basis element.
        for r in &raw {
            for v in &r.basis {
                for (m, am) in a_basis.iter().enumerate() {
                    let got = alg.bracket(am, v);
                    let want = vec_scale(v, &r.functional[m]);
                    if got != want {
                        return Err(Error::Internal(format!(
                            "{}: eigenvector fails the joint eigen equation",
                            canonical.label
                        )));
                    }
                }
            }
        }
        for v in &g0_raw {
            for am in &a_basis {
                if !is_zero_vec(&alg.bracket(am, v)) {
                    return Err(Error::Internal(format!(
                        "{}: g0 vector does not centralize a",
                        canonical.label
                    )));
                }
            }
        }

        // k0 = g0 minus a, orthogonal w.r.t. B_theta.
        let mut rows = RatMat::zeros(rank, g0_raw.len());
        for (m, am) in a_basis.iter().enumerate() {
            for (j, v) in g0_raw.iter().enumerate() {
                *rows.at_mut(m, j) = alg.b_theta(am, v);
            }
        }
        let k0_coords = rows.nullspace();
        let k0_basis: Vec<RatVec> = k0_coords
            .iter()
            .map(|c| {
                let mut acc = zero_vec(dim);
                for (j, cj) in c.iter().enumerate() {
                    if !cj.is_zero() {
                        crate::linalg::vec_axpy(&mut acc, cj, &g0_raw[j]);
                    }
                }
                acc
            })
            .collect();
        if k0_basis.len() + rank != g0_raw.len() {
            return Err(Error::Internal(format!(
                "{}: g0 does not split as a + k0",
                canonical.label
            )));
        }

        // Gram of a under (unscaled) B_theta; H_lambda in a-coordinates.
        let mut g_a = RatMat::zeros(rank, rank);
        for i in 0..rank {
            for j in 0..rank {
                *g_a.at_mut(i, j) = alg.b_theta(&a_basis[i], &a_basis[j]);
            }
        }
        let g_a_inv = g_a
            .inverse()
            .ok_or_else(|| Error::Internal("degenerate Gram matrix on a".into()))?;
        let h_coords = |f: &RatVec| -> RatVec { g_a_inv.mul_vec(f) };
        let ip = |f: &RatVec, g: &RatVec| -> Rat {
            let hf = h_coords(f);
            g.iter().zip(&hf).map(|(a, b)| a * b).sum()
        };

        // Positive roots, simple roots, diagram ordering.
        let positives: Vec<&Raw> = raw
            .iter()
            .filter(|r| {
                let mu: Rat =
                    r.functional.iter().zip(&canonical.h_reg_a).map(|(a, b)| a * b).sum();
                mu > Rat::zero()
            })
            .collect();
        let pos_funcs: Vec<RatVec> = positives.iter().map(|r| r.functional.clone()).collect();
        let is_sum = |f: &RatVec| -> bool {
            for g in &pos_funcs {
                for h in &pos_funcs {
                    if vec_add(g, h) == *f {
                        return true;
                    }
                }
            }
            false
        };
        let simple_idx: Vec<usize> =
            (0..positives.len()).filter(|&i| !is_sum(&pos_funcs[i])).collect();
        if simple_idx.len() != rank {
            return Err(Error::Internal(format!(
                "{}: found {} simple roots, expected rank {}",
                canonical.label,
                simple_idx.len(),
                rank
            )));
        }
        let cartan =
            |f: &RatVec, g: &RatVec| -> Result<i64> {
                let v = rint(2) * ip(f, g) / ip(g, g);
                if !v.is_integer() {
                    return Err(Error::Internal("non-integer realized Cartan integer".into()));
                }
                Ok(num_traits::ToPrimitive::to_i64(&v.to_integer()).unwrap())
            };

        // Order the simple roots along the diagram path, orientation fixed by
        // matching the abstract Cartan matrix.
        let order = {
            let fs: Vec<&RatVec> = simple_idx.iter().map(|&i| &pos_funcs[i]).collect();
            let mut adj = vec![Vec::new(); rank];
            for i in 0..rank {
                for j in 0..rank {
                    if i != j && !ip(fs[i], fs[j]).is_zero() {
                        adj[i].push(j);
                    }
                }
            }
            let chain = if rank == 1 {
                vec![0usize]
            } else {
                let ends: Vec<usize> = (0..rank).filter(|&i| adj[i].len() == 1).collect();
                if ends.len() != 2 || adj.iter().any(|a| a.len() > 2) {
                    return Err(Error::Internal(format!(
                        "{}: simple-root diagram is not a path",
                        canonical.label
                    )));
                }
                let mut chain = vec![ends[0]];
                let mut prev = usize::MAX;
                while chain.len() < rank {
                    let cur = *chain.last().unwrap();
                    let next = *adj[cur].iter().find(|&&x| x != prev).unwrap();
                    prev = cur;
                    chain.push(next);
                }
                chain
            };
            chain
        };

        // Trial abstract system with the realized multiplicity profile.
        let mut length_classes: Vec<Rat> =
            pos_funcs.iter().map(|f| ip(f, f)).collect::<Vec<_>>();
        length_classes.sort();
        length_classes.dedup();
        let mut profile = vec![0usize; length_classes.len()];
        for (i, f) in pos_funcs.iter().enumerate() {
            let l = ip(f, f);
            let ci = length_classes.iter().position(|c| *c == l).unwrap();
            let d = positives[i].basis.len();
            if profile[ci] == 0 {
                profile[ci] = d;
            } else if profile[ci] != d {
                return Err(Error::Internal(format!(
                    "{}: root multiplicity varies within a length class",
                    canonical.label
                )));
            }
        }
        let system = AbstractRootSystem::build(canonical.family, rank, Some(&profile))?;

        // Pick the chain orientation whose Cartan matrix matches.
        let mut ordered_simple: Option<Vec<usize>> = None;
        for cand in [order.clone(), order.iter().rev().copied().collect::<Vec<_>>()] {
            let mut ok = true;
            'outer: for i in 0..rank {
                for j in 0..rank {
                    let a = cartan(
                        &pos_funcs[simple_idx[cand[j]]],
                        &pos_funcs[simple_idx[cand[i]]],
                    )?;
                    if a != system.cartan_matrix[i][j] {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            if ok {
                ordered_simple = Some(cand.iter().map(|&c| simple_idx[c]).collect());
                break;
            }
        }
        let ordered_simple = ordered_simple.ok_or_else(|| {
            Error::Internal(format!(
                "{}: realized Cartan matrix matches neither chain orientation",
                canonical.label
            ))
        })?;

        // Coefficients of each positive root over the ordered simples.
        let simple_funcs: Vec<RatVec> =
            ordered_simple.iter().map(|&i| pos_funcs[i].clone()).collect();
        let solver = crate::linalg::SpanSolver::new(&simple_funcs);
        let mut coeffs_per_pos: Vec<RootVector> = Vec::with_capacity(positives.len());
        for f in &pos_funcs {
            let c = solver
                .solve(f)
                .ok_or_else(|| Error::Internal("root outside simple span".into()))?;
            let ints: Vec<i64> = c
                .iter()
                .map(|r| {
                    if !r.is_integer() {
                        return Err(Error::Internal("non-integer root coefficient".into()));
                    }
                    Ok(num_traits::ToPrimitive::to_i64(&r.to_integer()).unwrap())
                })
                .collect::<Result<_>>()?;
            coeffs_per_pos.push(RootVector::new(ints));
        }

        // Metric scale: shortest simple root gets squared length 2.
        let shortest = simple_funcs
            .iter()
            .map(|f| ip(f, f))
            .min()
            .ok_or_else(|| Error::Internal("no simple roots".into()))?;
        let metric_scale = shortest / rint(2);

        // Cross-check the scaled Gram of simple roots against the abstract one.
        for i in 0..rank {
            for j in 0..rank {
                let got = ip(&simple_funcs[i], &simple_funcs[j]) / &metric_scale;
                if &got != system.gram.at(i, j) {
                    return Err(Error::Internal(format!(
                        "{}: realized simple-root Gram differs from abstract",
                        canonical.label
                    )));
                }
            }
        }

        // Assemble roots in abstract order (positives then negatives), with
        // exactly orthogonalized bases and scaled H_lambda.
        let bt = |x: &[Rat], y: &[Rat]| alg.b_theta(x, y);
        let mut roots: Vec<RealizedRoot> = Vec::with_capacity(2 * positives.len());
        for ar in &system.positive_roots {
            let i = coeffs_per_pos
                .iter()
                .position(|c| c == ar)
                .ok_or_else(|| Error::Internal(format!(
                    "{}: abstract root {ar} not realized",
                    canonical.label
                )))?;
            if positives[i].basis.len() != system.multiplicity(ar)? {
                return Err(Error::Internal("realized multiplicity mismatch".into()));
            }
            let basis = gram_schmidt(&positives[i].basis, bt)
                .map_err(|_| Error::Internal("dependent root-space basis".into()))?;
            let f = pos_funcs[i].clone();
            let h_unscaled = {
                let ha = h_coords(&f);
                let mut v = zero_vec(dim);
                for (m, hm) in ha.iter().enumerate() {
                    crate::linalg::vec_axpy(&mut v, hm, &a_basis[m]);
                }
                v
            };
            let h_vec = vec_scale(&h_unscaled, &metric_scale.recip());
            roots.push(RealizedRoot { coeffs: ar.clone(), functional: f, basis, h_vec });
        }
        let npos = roots.len();
        for p in 0..npos {
            let neg_f: RatVec = roots[p].functional.iter().map(|x| -x).collect();
            let j = raw
                .iter()
                .position(|r| r.functional == neg_f)
                .ok_or_else(|| Error::Internal("missing negative root space".into()))?;
            let basis = gram_schmidt(&raw[j].basis, bt)
                .map_err(|_| Error::Internal("dependent root-space basis".into()))?;
            roots.push(RealizedRoot {
                coeffs: roots[p].coeffs.neg(),
                functional: neg_f,
                basis,
                h_vec: roots[p].h_vec.iter().map(|x| -x).collect(),
            });
        }

        let mut root_lookup = HashMap::new();
        for (i, r) in roots.iter().enumerate() {
            root_lookup.insert(r.coeffs.clone(), i);
        }

        // Component change-of-basis: a | k0 | root spaces.
        let mut component_basis: Vec<RatVec> = Vec::with_capacity(dim);
        let a_range = 0..rank;
        component_basis.extend(a_basis.iter().cloned());
        let k0_range = rank..rank + k0_basis.len();
        component_basis.extend(k0_basis.iter().cloned());
        let mut root_ranges = Vec::with_capacity(roots.len());
        for r in &roots {
            let start = component_basis.len();
            component_basis.extend(r.basis.iter().cloned());
            root_ranges.push(start..component_basis.len());
        }
        if component_basis.len() != dim {
            return Err(Error::Internal("component basis has wrong size".into()));
        }
        let component_inv = RatMat::from_cols(component_basis.clone())
            .inverse()
            .ok_or_else(|| Error::Internal("component basis is singular".into()))?;

        let decomp = RestrictedDecomposition {
            alg,
            label: canonical.label,
            a_basis,
            h_reg,
            roots,
            g0_basis: g0_raw,
            k0_basis,
            metric_scale,
            system,
            root_lookup,
            component_basis,
            component_inv,
            a_range,
            k0_range,
            root_ranges,
            numeric: OnceLock::new(),
        };
        decomp.verify_bracket_relations()?;
        Ok(decomp)
    }

    /// [g_lambda, g_mu] in g_{lambda+mu} and theta g_lambda = g_{-lambda},
    /// both exactly, over all realized root pairs.
    fn verify_bracket_relations(&self) -> Result<()> {
        let npos = self.npos();
        for i in 0..2 * npos {
            let li = &self.roots[i].coeffs;
            // theta g_lambda = g_{-lambda}
            let neg = self.root_index(&li.neg()).unwrap();
            for v in &self.roots[i].basis {
                let img = self.alg.theta_vec(v);
                let comps = self.components(&img);
                for (j, range) in self.root_ranges.iter().enumerate() {
                    if j != neg && comps[range.clone()].iter().any(|c| !c.is_zero()) {
                        return Err(Error::Internal(format!(
                            "{}: theta(g_{li}) leaks outside g_{}",
                            self.label,
                            li.neg()
                        )));
                    }
                }
            }
            for j in 0..2 * npos {
                let lj = &self.roots[j].coeffs;
                let sum = li.add(lj);
                let target = self.root_index(&sum);
                for u in &self.roots[i].basis {
                    for v in &self.roots[j].basis {
                        let br = self.alg.bracket(u, v);
                        if is_zero_vec(&br) {
                            continue;
                        }
                        let comps = self.components(&br);
                        let ok = if sum.is_zero() {
                            // lands in g0: no root-space components allowed
                            self.root_ranges
                                .iter()
                                .all(|r| comps[r.clone()].iter().all(Rat::is_zero))
                        } else {
                            match target {
                                Some(t) => self
                                    .root_ranges
                                    .iter()
                                    .enumerate()
                                    .all(|(k, r)| {
                                        k == t || comps[r.clone()].iter().all(Rat::is_zero)
                                    })
                                    && comps[self.a_range.clone()].iter().all(Rat::is_zero)
                                    && comps[self.k0_range.clone()].iter().all(Rat::is_zero),
                                None => false, // bracket must vanish, but it did not
                            }
                        };
                        if !ok {
                            return Err(Error::Internal(format!(
                                "{}: [g_{li}, g_{lj}] leaves g_{{{li}+{lj}}}",
                                self.label
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.alg.dim
    }

    pub fn rank(&self) -> usize {
        self.a_basis.len()
    }

    pub fn npos(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn positive_roots(&self) -> &[RealizedRoot] {
        &self.roots[..self.npos()]
    }

    pub fn root_index(&self, coeffs: &RootVector) -> Option<usize> {
        self.root_lookup.get(coeffs).copied()
    }

    pub fn root(&self, coeffs: &RootVector) -> Result<&RealizedRoot> {
        self.root_index(coeffs)
            .map(|i| &self.roots[i])
            .ok_or_else(|| Error::NotARoot(coeffs.to_string()))
    }

    /// H_lambda: the vector in a with lambda(H) = <H, H_lambda> in the scaled
    /// metric.
    pub fn root_vector(&self, coeffs: &RootVector) -> Result<&RatVec> {
        Ok(&self.root(coeffs)?.h_vec)
    }

    /// Scaled inner product c * (-B(x, theta y)).
    pub fn inner_bt(&self, x: &[Rat], y: &[Rat]) -> Rat {
        self.alg.b_theta(x, y) * &self.metric_scale
    }

    /// Exact coordinates over the component basis (a | k0 | root spaces).
    pub fn components(&self, x: &[Rat]) -> RatVec {
        self.component_inv.mul_vec(x)
    }

    fn part_from_components(&self, comps: &[Rat], range: Range<usize>) -> RatVec {
        let mut acc = zero_vec(self.dim());
        for i in range {
            if !comps[i].is_zero() {
                crate::linalg::vec_axpy(&mut acc, &comps[i], &self.component_basis[i]);
            }
        }
        acc
    }

    pub fn project(&self, x: &[Rat], tag: &SubspaceTag) -> Result<RatVec> {
        let comps = self.components(x);
        let npos = self.npos();
        Ok(match tag {
            SubspaceTag::A => self.part_from_components(&comps, self.a_range.clone()),
            SubspaceTag::K0 => self.part_from_components(&comps, self.k0_range.clone()),
            SubspaceTag::G0 => {
                let mut v = self.part_from_components(&comps, self.a_range.clone());
                v = vec_add(&v, &self.part_from_components(&comps, self.k0_range.clone()));
                v
            }
            SubspaceTag::N => {
                let mut v = zero_vec(self.dim());
                for p in 0..npos {
                    v = vec_add(&v, &self.part_from_components(&comps, self.root_ranges[p].clone()));
                }
                v
            }
            SubspaceTag::AN => {
                let mut v = self.part_from_components(&comps, self.a_range.clone());
                for p in 0..npos {
                    v = vec_add(&v, &self.part_from_components(&comps, self.root_ranges[p].clone()));
                }
                v
            }
            SubspaceTag::Root(coeffs) => {
                let i = self
                    .root_index(coeffs)
                    .ok_or_else(|| Error::NotARoot(coeffs.to_string()))?;
                self.part_from_components(&comps, self.root_ranges[i].clone())
            }
        })
    }

    /// Membership of x in a + n (no k0 or negative-root components).
    pub fn in_an(&self, x: &[Rat]) -> bool {
        let comps = self.components(x);
        let npos = self.npos();
        if comps[self.k0_range.clone()].iter().any(|c| !c.is_zero()) {
            return false;
        }
        for p in npos..2 * npos {
            if comps[self.root_ranges[p].clone()].iter().any(|c| !c.is_zero()) {
                return false;
            }
        }
        true
    }

    /// Left-invariant metric on a + n:
    /// <H1+X1, H2+X2> = <H1,H2>_{B_theta} + (1/2) <X1,X2>_{B_theta}, applied
    /// to the a+n projections of the arguments.
    pub fn metric_an(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let xa = self.project(x, &SubspaceTag::A).unwrap();
        let ya = self.project(y, &SubspaceTag::A).unwrap();
        let xn = self.project(x, &SubspaceTag::N).unwrap();
        let yn = self.project(y, &SubspaceTag::N).unwrap();
        self.inner_bt(&xa, &ya) + self.inner_bt(&xn, &yn) / rint(2)
    }

    /// Exact Gram-Schmidt against the a+n metric followed by floating-point
    /// normalization. Pairwise inner products of the output are exact zeros.
    pub fn orthonormalize_an(&self, vectors: &[RatVec]) -> Result<Vec<Vec<f64>>> {
        let ortho = gram_schmidt(vectors, |x, y| self.metric_an(x, y))
            .map_err(Error::DependentInput)?;
        Ok(ortho
            .iter()
            .map(|v| {
                let n2 = rat_to_f64(&self.metric_an(v, v));
                let s = 1.0 / n2.sqrt();
                vec_to_f64(v).iter().map(|x| x * s).collect()
            })
            .collect())
    }

    pub fn numeric(&self) -> &NumericCtx {
        self.numeric.get_or_init(|| self.build_numeric())
    }

    fn build_numeric(&self) -> NumericCtx {
        let dim = self.dim();
        let bracket = self.alg.bracket_f64_table();
        let theta = self.alg.theta.to_f64();
        let mut gram_bt = vec![vec![0.0; dim]; dim];
        let mut gram_an = vec![vec![0.0; dim]; dim];
        let basis: Vec<RatVec> = (0..dim).map(|i| super::basis_vec(dim, i)).collect();
        let an_parts: Vec<(RatVec, RatVec)> = basis
            .iter()
            .map(|e| {
                (
                    self.project(e, &SubspaceTag::A).unwrap(),
                    self.project(e, &SubspaceTag::N).unwrap(),
                )
            })
            .collect();
        for i in 0..dim {
            for j in i..dim {
                let bt = rat_to_f64(&self.inner_bt(&basis[i], &basis[j]));
                gram_bt[i][j] = bt;
                gram_bt[j][i] = bt;
                let an = rat_to_f64(
                    &(self.inner_bt(&an_parts[i].0, &an_parts[j].0)
                        + self.inner_bt(&an_parts[i].1, &an_parts[j].1) / rint(2)),
                );
                gram_an[i][j] = an;
                gram_an[j][i] = an;
            }
        }
        // Orthonormal a+n basis: a block, then per-positive-root blocks.
        let mut an_basis: Vec<Vec<f64>> = Vec::new();
        let mut an_groups = Vec::new();
        let a_ortho = self.orthonormalize_an(&self.a_basis).expect("a basis independent");
        an_groups.push((None, 0..a_ortho.len()));
        an_basis.extend(a_ortho);
        for p in 0..self.npos() {
            let start = an_basis.len();
            for v in &self.roots[p].basis {
                let n2 = rat_to_f64(&self.metric_an(v, v));
                let s = 1.0 / n2.sqrt();
                an_basis.push(vec_to_f64(v).iter().map(|x| x * s).collect());
            }
            an_groups.push((Some(p), start..an_basis.len()));
        }
        NumericCtx { bracket, theta, gram_bt, gram_an, an_basis, an_groups }
    }

    /// dim(a) + dim(n).
    pub fn an_dim(&self) -> usize {
        self.rank() + self.positive_roots().iter().map(|r| r.basis.len()).sum::<usize>()
    }

    /// Exact Gram matrix of the H_lambda over the positive roots.
    pub fn h_gram(&self) -> RatMat {
        let npos = self.npos();
        let mut g = RatMat::zeros(npos, npos);
        for i in 0..npos {
            for j in 0..npos {
                *g.at_mut(i, j) = self.inner_bt(&self.roots[i].h_vec, &self.roots[j].h_vec);
            }
        }
        g
    }
}

impl std::fmt::Debug for RestrictedDecomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "RestrictedDecomposition({}, dim {}, rank {}, {} positive roots, k0 dim {})",
            self.label,
            self.dim(),
            self.rank(),
            self.npos(),
            self.k0_basis.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{
        build_sl_complex, build_sl_quaternion, build_sl_real, build_so_pq, build_sp_real,
        SpaceBuild,
    };
    use crate::rootsys::Family;

    fn decompose(b: SpaceBuild) -> RestrictedDecomposition {
        RestrictedDecomposition::new(b.alg, b.canonical).unwrap()
    }

    #[test]
    fn sl3_real_decomposition() {
        let d = decompose(build_sl_real(3).unwrap());
        assert_eq!(d.system.family, Family::A);
        assert_eq!(d.npos(), 3);
        assert!(d.k0_basis.is_empty());
        for r in d.positive_roots() {
            assert_eq!(r.basis.len(), 1);
        }
        // normalization: every root has squared length 2
        for r in d.positive_roots() {
            assert_eq!(d.system.length_sq(&r.coeffs), rint(2));
            // lambda(H_lambda) = |lambda|^2 via the realized metric
            let lam_of_h: Rat = {
                // value of the functional on H_lambda
                let comps = d.components(&r.h_vec);
                let mut acc = Rat::zero();
                for (m, c) in comps[0..d.rank()].iter().enumerate() {
                    acc += c * &r.functional[m];
                }
                acc
            };
            assert_eq!(lam_of_h, rint(2));
        }
    }

    #[test]
    fn sl3_complex_decomposition() {
        let d = decompose(build_sl_complex(3).unwrap());
        assert_eq!(d.npos(), 3);
        assert_eq!(d.k0_basis.len(), 2);
        for r in d.positive_roots() {
            assert_eq!(r.basis.len(), 2);
        }
        // <H_a0, H_a1> = -1 in the normalized metric
        let a0 = RootVector::new(vec![1, 0]);
        let a1 = RootVector::new(vec![0, 1]);
        let h0 = d.root_vector(&a0).unwrap().clone();
        let h1 = d.root_vector(&a1).unwrap().clone();
        assert_eq!(d.inner_bt(&h0, &h1), rint(-1));
        assert_eq!(d.inner_bt(&h0, &h0), rint(2));
    }

    #[test]
    fn sl3_quaternion_decomposition() {
        let d = decompose(build_sl_quaternion(3).unwrap());
        assert_eq!(d.npos(), 3);
        assert_eq!(d.k0_basis.len(), 9);
        for r in d.positive_roots() {
            assert_eq!(r.basis.len(), 4);
        }
        assert_eq!(d.an_dim(), 2 + 12);
    }

    #[test]
    fn so25_decomposition() {
        let d = decompose(build_so_pq(2, 5).unwrap());
        assert_eq!(d.system.family, Family::B);
        assert_eq!(d.npos(), 4);
        // short roots have multiplicity 3, long roots 1
        for r in d.positive_roots() {
            let len = d.system.length_sq(&r.coeffs);
            if len == rint(2) {
                assert_eq!(r.basis.len(), 3, "short root {}", r.coeffs);
            } else {
                assert_eq!(len, rint(4));
                assert_eq!(r.basis.len(), 1, "long root {}", r.coeffs);
            }
        }
        assert_eq!(d.k0_basis.len(), 3); // so(3)
    }

    #[test]
    fn sp6_decomposition() {
        let d = decompose(build_sp_real(3).unwrap());
        assert_eq!(d.system.family, Family::C);
        assert_eq!(d.npos(), 9);
        for r in d.positive_roots() {
            assert_eq!(r.basis.len(), 1);
        }
        assert!(d.k0_basis.is_empty());
    }

    #[test]
    fn sl4_real_decomposition() {
        let d = decompose(build_sl_real(4).unwrap());
        assert_eq!(d.npos(), 6);
        assert_eq!(d.rank(), 3);
        assert_eq!(d.an_dim(), 9);
    }

    #[test]
    fn projections_and_metric() {
        let d = decompose(build_sl_real(3).unwrap());
        // metric on a agrees with the scaled B_theta
        let h = &d.a_basis[0];
        assert_eq!(d.metric_an(h, h), d.inner_bt(h, h));
        // a root-space vector picks up the 1/2
        let x = d.positive_roots()[0].basis[0].clone();
        assert_eq!(d.metric_an(&x, &x), d.inner_bt(&x, &x) / rint(2));
        // projection round trip: a+n vector reassembles
        let v = vec_add(h, &x);
        let back = d.project(&v, &SubspaceTag::AN).unwrap();
        assert_eq!(v, back);
        assert!(d.in_an(&v));
        // negative root vectors are not in a+n
        let y = d.alg.theta_vec(&x);
        assert!(!d.in_an(&y));
    }

    #[test]
    fn orthonormalize_an_contract() {
        let d = decompose(build_sl_quaternion(3).unwrap());
        let a0 = RootVector::new(vec![1, 0]);
        let basis = d.root(&a0).unwrap().basis.clone();
        let on = d.orthonormalize_an(&basis).unwrap();
        assert_eq!(on.len(), 4);
        let num = d.numeric();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((num.metric_an_f64(&on[i], &on[j]) - want).abs() < 1e-12);
            }
        }
        // idempotence up to 1e-12: feeding back orthonormal-ish rational
        // vectors returns them unchanged up to normalization
        let mut dep = basis.clone();
        dep.push(basis[0].clone());
        match d.orthonormalize_an(&dep) {
            Err(crate::error::Error::DependentInput(4)) => {}
            other => panic!("expected DependentInput(4), got {other:?}"),
        }
    }

    #[test]
    fn subspace_tags_parse_and_reject() {
        use std::str::FromStr;
        assert_eq!(SubspaceTag::from_str("a").unwrap(), SubspaceTag::A);
        assert_eq!(SubspaceTag::from_str("a+n").unwrap(), SubspaceTag::AN);
        assert_eq!(SubspaceTag::from_str("k0").unwrap(), SubspaceTag::K0);
        assert!(matches!(
            SubspaceTag::from_str("nonsense"),
            Err(crate::error::Error::UnknownSubspace(_))
        ));
    }

    #[test]
    fn orthonormalize_unit_vector_is_fixed() {
        // so(2,5) has root-space vectors of exact unit a+n norm after a
        // rational rescale; orthonormalization must return them unchanged.
        let d = decompose(build_so_pq(2, 5).unwrap());
        let lam = d.positive_roots()[0].coeffs.clone();
        let v = d.roots[d.root_index(&lam).unwrap()].basis[0].clone();
        let n2 = d.metric_an(&v, &v);
        // rescale to unit norm when the norm is a perfect rational square
        let target = crate::linalg::vec_scale(&v, &rint(2));
        if d.metric_an(&target, &target) == rint(1) {
            let on = d.orthonormalize_an(std::slice::from_ref(&target)).unwrap();
            let direct = crate::linalg::vec_to_f64(&target);
            for (a, b) in on[0].iter().zip(&direct) {
                assert!((a - b).abs() < 1e-12);
            }
        } else {
            // at minimum the normalized output has unit norm
            let on = d.orthonormalize_an(&[v]).unwrap();
            let num = d.numeric();
            assert!((num.metric_an_f64(&on[0], &on[0]) - 1.0).abs() < 1e-12);
            assert!(n2 > crate::linalg::rint(0));
        }
    }

    #[test]
    fn theta_x_x_is_twice_an_norm_h_lambda() {
        // [theta X, X] = 2 <X,X>_AN H_lambda, exactly, on every root space
        for b in [
            build_sl_real(3).unwrap(),
            build_sl_complex(3).unwrap(),
            build_so_pq(2, 4).unwrap(),
            build_sp_real(2).unwrap(),
        ] {
            let d = decompose(b);
            for p in 0..d.npos() {
                let r = &d.roots[p];
                for x in &r.basis {
                    let lhs = d.alg.bracket(&d.alg.theta_vec(x), x);
                    let want = vec_scale(&r.h_vec, &(rint(2) * d.metric_an(x, x)));
                    assert_eq!(lhs, want, "{} root {}", d.label, r.coeffs);
                }
            }
        }
    }
}

