//! Abstract (realization-free) restricted root systems.
//!
//! Roots are integer coefficient vectors over the simple roots; the inner
//! product is an exact rational Gram matrix normalized so the shortest simple
//! root has squared length 2. Enumeration, Cartan integers, alpha-strings,
//! levels, Weyl reflections, the reduced simple set, and the two-root string
//! equivalence classes all live here.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::linalg::{rint, Rat, RatMat, SpanSolver};
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    BC,
    G2,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::BC => "BC",
            Family::G2 => "G2",
        };
        write!(f, "{s}")
    }
}

/// A root in simple-root coordinates. The zero vector stands for 0 in
/// string computations over Delta_0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootVector {
    pub coeffs: Vec<i64>,
}

impl RootVector {
    pub fn new(coeffs: Vec<i64>) -> Self {
        RootVector { coeffs }
    }

    pub fn zero(rank: usize) -> Self {
        RootVector { coeffs: vec![0; rank] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        RootVector { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &RootVector) -> Self {
        RootVector {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &RootVector) -> Self {
        RootVector {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scaled(&self, k: i64) -> Self {
        RootVector { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Coefficient sum; the level of a positive root.
    pub fn level(&self) -> i64 {
        self.coeffs.iter().sum()
    }
}

impl std::fmt::Display for RootVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum StringShape {
    Singleton,
    Len3,
    Len6,
}

/// A two-root string equivalence class with its minimum-level representative.
#[derive(Debug, Clone)]
pub struct StringClass {
    pub representative: RootVector,
    pub members: Vec<RootVector>,
    pub shape: StringShape,
}

#[derive(Debug, Clone)]
pub struct AbstractRootSystem {
    pub family: Family,
    pub rank: usize,
    pub simple_roots: Vec<RootVector>,
    /// cartan_matrix(i,j) = A_{alpha_i, alpha_j} = 2 <alpha_j, alpha_i> / |alpha_i|^2
    pub cartan_matrix: Vec<Vec<i64>>,
    /// Sorted by (level, coeffs lexicographic).
    pub positive_roots: Vec<RootVector>,
    /// Indices into `simple_roots` of the reduced simple roots Pi'.
    pub reduced_simple: Vec<usize>,
    /// Gram matrix of the simple roots; shortest simple root has length^2 = 2.
    pub gram: RatMat,
    /// Per positive root multiplicity (same order as `positive_roots`).
    pub multiplicities: Vec<usize>,
    root_set: HashSet<RootVector>,
}

/// Positive roots and simple roots in e-coordinates per family, plus the
/// scale on the e-space dot product making the shortest simple root have
/// squared length 2. G2 is handled directly in simple-root coordinates.
fn family_positive_roots(
    family: Family,
    rank: usize,
) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>, Rat)> {
    let bad = || Error::InvalidFamilyRank { family: family.to_string(), rank };
    let e = |dim: usize, entries: &[(usize, i64)]| -> Vec<i64> {
        let mut v = vec![0i64; dim];
        for &(i, c) in entries {
            v[i] = c;
        }
        v
    };
    match family {
        Family::A => {
            if rank < 1 {
                return Err(bad());
            }
            let n = rank + 1;
            let mut pos = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    pos.push(e(n, &[(i, 1), (j, -1)]));
                }
            }
            let simple: Vec<Vec<i64>> = (0..rank).map(|k| e(n, &[(k, 1), (k + 1, -1)])).collect();
            Ok((pos, simple, rint(1)))
        }
        Family::B | Family::BC => {
            if rank < 1 {
                return Err(bad());
            }
            let n = rank;
            let mut pos = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    pos.push(e(n, &[(i, 1), (j, -1)]));
                    pos.push(e(n, &[(i, 1), (j, 1)]));
                }
            }
            for i in 0..n {
                pos.push(e(n, &[(i, 1)]));
            }
            if family == Family::BC {
                for i in 0..n {
                    pos.push(e(n, &[(i, 2)]));
                }
            }
            let mut simple: Vec<Vec<i64>> =
                (0..rank.saturating_sub(1)).map(|k| e(n, &[(k, 1), (k + 1, -1)])).collect();
            simple.push(e(n, &[(n - 1, 1)]));
            // shortest simple root is e_n: scale the e-dot by 2
            Ok((pos, simple, rint(2)))
        }
        Family::C => {
            if rank < 2 {
                return Err(bad());
            }
            let n = rank;
            let mut pos = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    pos.push(e(n, &[(i, 1), (j, -1)]));
                    pos.push(e(n, &[(i, 1), (j, 1)]));
                }
            }
            for i in 0..n {
                pos.push(e(n, &[(i, 2)]));
            }
            let mut simple: Vec<Vec<i64>> =
                (0..rank - 1).map(|k| e(n, &[(k, 1), (k + 1, -1)])).collect();
            simple.push(e(n, &[(n - 1, 2)]));
            Ok((pos, simple, rint(1)))
        }
        Family::D => {
            if rank < 3 {
                return Err(bad());
            }
            let n = rank;
            let mut pos = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    pos.push(e(n, &[(i, 1), (j, -1)]));
                    pos.push(e(n, &[(i, 1), (j, 1)]));
                }
            }
            let mut simple: Vec<Vec<i64>> =
                (0..rank - 1).map(|k| e(n, &[(k, 1), (k + 1, -1)])).collect();
            simple.push(e(n, &[(n - 2, 1), (n - 1, 1)]));
            Ok((pos, simple, rint(1)))
        }
        Family::G2 => {
            if rank != 2 {
                return Err(bad());
            }
            // Simple-root coordinates (long a0, short a1).
            let pos = vec![
                vec![0, 1],
                vec![1, 0],
                vec![1, 1],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
            ];
            let simple = vec![vec![1, 0], vec![0, 1]];
            Ok((pos, simple, rint(1)))
        }
    }
}

impl AbstractRootSystem {
    /// Enumerates the positive roots, Cartan matrix and Pi' for the family.
    /// `multiplicity_profile` optionally assigns a multiplicity per squared
    /// root length class (shortest first); default is 1 everywhere.
    pub fn build(
        family: Family,
        rank: usize,
        multiplicity_profile: Option<&[usize]>,
    ) -> Result<AbstractRootSystem> {
        let (pos_e, simple_e, e_scale) = family_positive_roots(family, rank)?;

        let (positive_coeffs, gram) = if family == Family::G2 {
            let gram =
                RatMat::from_rows(vec![vec![rint(6), rint(-3)], vec![rint(-3), rint(2)]]);
            (pos_e.into_iter().map(RootVector::new).collect::<Vec<_>>(), gram)
        } else {
            let simple_rat: Vec<Vec<Rat>> = simple_e
                .iter()
                .map(|s| s.iter().map(|&c| rint(c)).collect())
                .collect();
            let solver = SpanSolver::new(&simple_rat);
            let mut coeffs = Vec::with_capacity(pos_e.len());
            for p in &pos_e {
                let v: Vec<Rat> = p.iter().map(|&c| rint(c)).collect();
                let c = solver
                    .solve(&v)
                    .ok_or_else(|| Error::Internal("root outside simple-root span".into()))?;
                let ints: Vec<i64> = c
                    .iter()
                    .map(|r| {
                        if !r.is_integer() {
                            return Err(Error::Internal("non-integer root coefficient".into()));
                        }
                        Ok(num_traits::ToPrimitive::to_i64(&r.to_integer()).unwrap())
                    })
                    .collect::<Result<_>>()?;
                coeffs.push(RootVector::new(ints));
            }
            let mut gram = RatMat::zeros(rank, rank);
            for i in 0..rank {
                for j in 0..rank {
                    let dot: i64 =
                        simple_e[i].iter().zip(&simple_e[j]).map(|(a, b)| a * b).sum();
                    *gram.at_mut(i, j) = rint(dot) * &e_scale;
                }
            }
            (coeffs, gram)
        };

        let mut positive_roots = positive_coeffs;
        positive_roots.sort_by_key(|r| (r.level(), r.coeffs.clone()));

        let mut root_set: HashSet<RootVector> = HashSet::new();
        for r in &positive_roots {
            root_set.insert(r.clone());
            root_set.insert(r.neg());
        }

        let simple_roots: Vec<RootVector> = (0..rank)
            .map(|k| {
                let mut c = vec![0i64; rank];
                c[k] = 1;
                RootVector::new(c)
            })
            .collect();

        let mut sys = AbstractRootSystem {
            family,
            rank,
            simple_roots,
            cartan_matrix: vec![vec![0; rank]; rank],
            positive_roots,
            reduced_simple: Vec::new(),
            gram,
            multiplicities: Vec::new(),
            root_set,
        };

        for i in 0..rank {
            for j in 0..rank {
                sys.cartan_matrix[i][j] = sys.cartan_integer(
                    &sys.simple_roots[i].clone(),
                    &sys.simple_roots[j].clone(),
                )?;
            }
        }

        sys.reduced_simple = (0..rank)
            .filter(|&k| !sys.is_root(&sys.simple_roots[k].scaled(2)))
            .collect();

        // Multiplicities keyed by squared length class, shortest first.
        let lengths: Vec<Rat> = sys.positive_roots.iter().map(|r| sys.inner(r, r)).collect();
        let mut classes: Vec<Rat> = lengths.clone();
        classes.sort();
        classes.dedup();
        let profile: Vec<usize> = match multiplicity_profile {
            None => vec![1; classes.len()],
            Some(p) => {
                if p.len() != classes.len() {
                    return Err(Error::InvalidParameter(format!(
                        "multiplicity profile has {} entries, system has {} length classes",
                        p.len(),
                        classes.len()
                    )));
                }
                p.to_vec()
            }
        };
        sys.multiplicities = lengths
            .iter()
            .map(|l| profile[classes.iter().position(|c| c == l).unwrap()])
            .collect();

        Ok(sys)
    }

    pub fn is_root(&self, v: &RootVector) -> bool {
        self.root_set.contains(v)
    }

    pub fn is_positive_root(&self, v: &RootVector) -> bool {
        self.is_root(v) && v.level() > 0
    }

    /// Membership in Delta_0 = Delta plus zero.
    pub fn in_delta0(&self, v: &RootVector) -> bool {
        v.is_zero() || self.is_root(v)
    }

    pub fn inner(&self, a: &RootVector, b: &RootVector) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.rank {
            if a.coeffs[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if b.coeffs[j] != 0 {
                    acc += rint(a.coeffs[i] * b.coeffs[j]) * self.gram.at(i, j);
                }
            }
        }
        acc
    }

    pub fn length_sq(&self, a: &RootVector) -> Rat {
        self.inner(a, a)
    }

    /// A_{alpha,lambda} = 2 <lambda, alpha> / |alpha|^2, an exact integer.
    pub fn cartan_integer(&self, alpha: &RootVector, lambda: &RootVector) -> Result<i64> {
        if !self.is_root(alpha) {
            return Err(Error::NotARoot(alpha.to_string()));
        }
        if !self.in_delta0(lambda) {
            return Err(Error::NotARoot(lambda.to_string()));
        }
        let v = rint(2) * self.inner(lambda, alpha) / self.length_sq(alpha);
        if !v.is_integer() {
            return Err(Error::Internal(format!(
                "non-integral Cartan integer for ({alpha}, {lambda})"
            )));
        }
        Ok(num_traits::ToPrimitive::to_i64(&v.to_integer()).unwrap())
    }

    /// The alpha-string through lambda inside Delta_0, ordered from
    /// lambda - p alpha to lambda + q alpha.
    pub fn alpha_string(&self, alpha: &RootVector, lambda: &RootVector) -> Result<Vec<RootVector>> {
        if !self.is_root(alpha) {
            return Err(Error::NotARoot(alpha.to_string()));
        }
        if !self.in_delta0(lambda) {
            return Err(Error::NotARoot(lambda.to_string()));
        }
        let mut down = 0i64;
        while self.in_delta0(&lambda.add(&alpha.scaled(-(down + 1)))) {
            down += 1;
        }
        let mut up = 0i64;
        while self.in_delta0(&lambda.add(&alpha.scaled(up + 1))) {
            up += 1;
        }
        Ok((-down..=up).map(|n| lambda.add(&alpha.scaled(n))).collect())
    }

    pub fn level(&self, lambda: &RootVector) -> Result<i64> {
        if !self.is_positive_root(lambda) {
            return Err(Error::NotARoot(lambda.to_string()));
        }
        Ok(lambda.level())
    }

    /// s_alpha(lambda) = lambda - A_{alpha,lambda} alpha.
    pub fn weyl_reflect(&self, alpha: &RootVector, lambda: &RootVector) -> Result<RootVector> {
        if !self.is_root(alpha) || !self.is_root(lambda) {
            return Err(Error::NotARoot(format!("({alpha}, {lambda})")));
        }
        let a = self.cartan_integer(alpha, lambda)?;
        Ok(lambda.sub(&alpha.scaled(a)))
    }

    /// All members of the (alpha0, alpha1)-equivalence class of lambda in
    /// Delta^+, by brute-force scan over the definition. alpha0, alpha1 must
    /// be simple (unit coordinate vectors).
    pub fn pair_class_members(
        &self,
        alpha0: &RootVector,
        alpha1: &RootVector,
        lambda: &RootVector,
    ) -> Vec<RootVector> {
        let mut members: Vec<RootVector> = self
            .positive_roots
            .iter()
            .filter(|mu| in_simple_pair_lattice(&mu.sub(lambda), alpha0, alpha1))
            .cloned()
            .collect();
        members.sort_by_key(|r| (r.level(), r.coeffs.clone()));
        members
    }

    /// The string class of a minimum-level positive root lambda outside the
    /// plane of the two adjacent equal-length simple roots alpha0, alpha1.
    pub fn pair_string_class(
        &self,
        alpha0_idx: usize,
        alpha1_idx: usize,
        lambda: &RootVector,
    ) -> Result<StringClass> {
        let a0 = self.simple_roots[alpha0_idx].clone();
        let a1 = self.simple_roots[alpha1_idx].clone();
        let a01 = self.cartan_integer(&a0, &a1)?;
        let a10 = self.cartan_integer(&a1, &a0)?;
        if a01 != -1 || a10 != -1 {
            return Err(Error::InvalidParameter(format!(
                "simple pair ({a0}, {a1}) is not connected by a single edge"
            )));
        }
        if !self.is_positive_root(lambda) {
            return Err(Error::NotARoot(lambda.to_string()));
        }
        if in_simple_pair_lattice(lambda, &a0, &a1) {
            return Err(Error::InvalidParameter(format!(
                "{lambda} lies in the plane of the simple pair"
            )));
        }
        let members = self.pair_class_members(&a0, &a1, lambda);
        let min_level = members.iter().map(|m| m.level()).min().unwrap();
        if lambda.level() != min_level {
            return Err(Error::NotMinimumLevel(lambda.to_string()));
        }
        let shape = match members.len() {
            1 => StringShape::Singleton,
            3 => StringShape::Len3,
            6 => StringShape::Len6,
            n => {
                return Err(Error::Internal(format!(
                    "string class of {lambda} has unexpected size {n}"
                )))
            }
        };
        Ok(StringClass { representative: lambda.clone(), members, shape })
    }

    /// Partition of Delta^+ into (alpha0, alpha1)-classes, each sorted by
    /// (level, coeffs); classes ordered by their first member.
    pub fn pair_partition(&self, alpha0_idx: usize, alpha1_idx: usize) -> Vec<Vec<RootVector>> {
        let a0 = &self.simple_roots[alpha0_idx];
        let a1 = &self.simple_roots[alpha1_idx];
        let mut seen: HashSet<RootVector> = HashSet::new();
        let mut classes = Vec::new();
        for r in &self.positive_roots {
            if seen.contains(r) {
                continue;
            }
            let members = self.pair_class_members(a0, a1, r);
            for m in &members {
                seen.insert(m.clone());
            }
            classes.push(members);
        }
        classes
    }

    pub fn multiplicity(&self, lambda: &RootVector) -> Result<usize> {
        self.positive_roots
            .iter()
            .position(|r| r == lambda)
            .map(|i| self.multiplicities[i])
            .ok_or_else(|| Error::NotARoot(lambda.to_string()))
    }

    /// Text table of Delta^+ with levels, lengths, multiplicities and the
    /// Cartan integers against every simple root.
    pub fn dump_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{}{} root system, {} positive roots, Pi' indices {:?}\n",
            self.family,
            self.rank,
            self.positive_roots.len(),
            self.reduced_simple
        ));
        let simple_cols: Vec<String> =
            (0..self.rank).map(|k| format!("A(a{k},.)")).collect();
        out.push_str(&format!(
            "coeffs | level | length^2 | mult | {}\n",
            simple_cols.join(" ")
        ));
        for (i, r) in self.positive_roots.iter().enumerate() {
            let cartans: Vec<String> = self
                .simple_roots
                .iter()
                .map(|a| self.cartan_integer(a, r).map_or("?".into(), |c| c.to_string()))
                .collect();
            out.push_str(&format!(
                "{:?} | {} | {} | {} | {}\n",
                r.coeffs,
                r.level(),
                self.length_sq(r),
                self.multiplicities[i],
                cartans.join(" ")
            ));
        }
        out
    }
}

/// Is d an integer combination of the two (distinct, simple) coordinate
/// vectors? Simple roots are unit coordinate vectors, so this is a support
/// check on the complementary coordinates.
fn in_simple_pair_lattice(d: &RootVector, a0: &RootVector, a1: &RootVector) -> bool {
    let i0 = a0.coeffs.iter().position(|&c| c == 1).unwrap();
    let i1 = a1.coeffs.iter().position(|&c| c == 1).unwrap();
    d.coeffs.iter().enumerate().all(|(k, &c)| k == i0 || k == i1 || c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> AbstractRootSystem {
        AbstractRootSystem::build(Family::A, 2, None).unwrap()
    }

    #[test]
    fn a2_positive_roots() {
        let s = a2();
        let want: Vec<Vec<i64>> = vec![vec![0, 1], vec![1, 0], vec![1, 1]];
        let got: Vec<Vec<i64>> = s.positive_roots.iter().map(|r| r.coeffs.clone()).collect();
        assert_eq!(got, want);
        assert_eq!(s.reduced_simple, vec![0, 1]);
        for r in &s.positive_roots {
            assert_eq!(s.length_sq(r), rint(2));
        }
    }

    #[test]
    fn a1_trivial() {
        let s = AbstractRootSystem::build(Family::A, 1, None).unwrap();
        assert_eq!(s.positive_roots.len(), 1);
        assert_eq!(s.reduced_simple, vec![0]);
    }

    #[test]
    fn cartan_integers_a2_and_g2() {
        let s = a2();
        let a0 = s.simple_roots[0].clone();
        let a1 = s.simple_roots[1].clone();
        assert_eq!(s.cartan_integer(&a0, &a1).unwrap(), -1);
        assert_eq!(s.cartan_integer(&a1, &a0).unwrap(), -1);
        assert_eq!(s.cartan_integer(&a0, &a0).unwrap(), 2);

        let g = AbstractRootSystem::build(Family::G2, 2, None).unwrap();
        let long = g.simple_roots[0].clone();
        let short = g.simple_roots[1].clone();
        assert_eq!(g.cartan_integer(&short, &long).unwrap(), -3);
        assert_eq!(g.cartan_integer(&long, &short).unwrap(), -1);
        assert_eq!(g.length_sq(&long), rint(6));
        assert_eq!(g.length_sq(&short), rint(2));
    }

    #[test]
    fn g2_has_six_positive_roots_including_a0_plus_3a1() {
        let g = AbstractRootSystem::build(Family::G2, 2, None).unwrap();
        assert_eq!(g.positive_roots.len(), 6);
        assert!(g.is_positive_root(&RootVector::new(vec![1, 3])));
    }

    #[test]
    fn g2_string_of_long_along_short() {
        let g = AbstractRootSystem::build(Family::G2, 2, None).unwrap();
        let long = g.simple_roots[0].clone();
        let short = g.simple_roots[1].clone();
        let s = g.alpha_string(&short, &long).unwrap();
        let want: Vec<Vec<i64>> = vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 3]];
        assert_eq!(s.iter().map(|r| r.coeffs.clone()).collect::<Vec<_>>(), want);
    }

    #[test]
    fn a2_string_of_a0_along_a1() {
        let s = a2();
        let a0 = s.simple_roots[0].clone();
        let a1 = s.simple_roots[1].clone();
        let st = s.alpha_string(&a1, &a0).unwrap();
        assert_eq!(
            st.iter().map(|r| r.coeffs.clone()).collect::<Vec<_>>(),
            vec![vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn level_is_coefficient_sum() {
        let s = a2();
        let sum = RootVector::new(vec![1, 1]);
        assert_eq!(s.level(&sum).unwrap(), 2);
        assert_eq!(s.level(&s.simple_roots[0]).unwrap(), 1);
        // negative and non-roots rejected
        assert!(s.level(&sum.neg()).is_err());
        assert!(s.level(&RootVector::new(vec![2, 0])).is_err());
    }

    #[test]
    fn singleton_string_for_orthogonal_pair() {
        let s = AbstractRootSystem::build(Family::A, 3, None).unwrap();
        let a1 = s.simple_roots[0].clone();
        let a3 = s.simple_roots[2].clone();
        let st = s.alpha_string(&a1, &a3).unwrap();
        assert_eq!(st, vec![a3]);
    }

    #[test]
    fn string_p_minus_q_is_cartan_integer() {
        for (fam, rank) in [
            (Family::A, 3),
            (Family::B, 2),
            (Family::C, 3),
            (Family::BC, 2),
            (Family::G2, 2),
            (Family::D, 4),
        ] {
            let s = AbstractRootSystem::build(fam, rank, None).unwrap();
            let mut all: Vec<RootVector> = s.positive_roots.clone();
            all.extend(s.positive_roots.iter().map(|r| r.neg()));
            let mut delta0 = all.clone();
            delta0.push(RootVector::zero(s.rank));
            for alpha in &all {
                for lambda in &delta0 {
                    let st = s.alpha_string(alpha, lambda).unwrap();
                    // gap-free by construction; check contiguity explicitly
                    for w in st.windows(2) {
                        assert_eq!(w[1].sub(&w[0]), *alpha);
                    }
                    let p = st.iter().position(|x| x == lambda).unwrap() as i64;
                    let q = (st.len() as i64 - 1) - p;
                    assert_eq!(
                        p - q,
                        s.cartan_integer(alpha, lambda).unwrap(),
                        "{fam:?} string of {lambda} along {alpha}"
                    );
                    let roots = st.iter().filter(|x| !x.is_zero()).count();
                    assert!(roots <= 4);
                }
            }
        }
    }

    #[test]
    fn weyl_reflection_involution_and_length() {
        for (fam, rank) in [(Family::A, 3), (Family::B, 3), (Family::C, 3), (Family::G2, 2)] {
            let s = AbstractRootSystem::build(fam, rank, None).unwrap();
            let mut all = s.positive_roots.clone();
            all.extend(s.positive_roots.iter().map(|r| r.neg()));
            for alpha in &all {
                assert_eq!(s.weyl_reflect(alpha, alpha).unwrap(), alpha.neg());
                for lambda in &all {
                    let r = s.weyl_reflect(alpha, lambda).unwrap();
                    assert!(s.is_root(&r), "reflection left the system");
                    assert_eq!(s.length_sq(&r), s.length_sq(lambda));
                    assert_eq!(s.weyl_reflect(alpha, &r).unwrap(), *lambda);
                }
            }
        }
    }

    #[test]
    fn b2_short_reflection_shifts_string() {
        let s = AbstractRootSystem::build(Family::B, 2, None).unwrap();
        let long = s.simple_roots[0].clone(); // e1 - e2
        let short = s.simple_roots[1].clone(); // e2
        let st = s.alpha_string(&short, &long).unwrap();
        assert_eq!(st.len(), 3);
        assert_eq!(s.weyl_reflect(&short, &long).unwrap(), long.add(&short.scaled(2)));
    }

    #[test]
    fn bc_reduced_simple_and_cartan_four() {
        let s = AbstractRootSystem::build(Family::BC, 2, None).unwrap();
        assert_eq!(s.simple_roots.len() - s.reduced_simple.len(), 1);
        let short = s.simple_roots[1].clone(); // e2; 2e2 is a root
        let doubled = short.scaled(2);
        assert!(s.is_root(&doubled));
        assert_eq!(s.cartan_integer(&short, &doubled).unwrap(), 4);
        // |A| = 4 nowhere else
        let mut all = s.positive_roots.clone();
        all.extend(s.positive_roots.iter().map(|r| r.neg()));
        for a in &all {
            for l in &all {
                let c = s.cartan_integer(a, l).unwrap();
                if c.abs() == 4 {
                    assert!(*l == a.scaled(2) || *l == a.scaled(-2));
                }
            }
        }
    }

    #[test]
    fn bc_matches_independent_enumeration() {
        // Independent oracle: BC_r positives in e-coords are exactly the B_r
        // positives plus the doubled short roots.
        let r = 3usize;
        let b = AbstractRootSystem::build(Family::B, r, None).unwrap();
        let bc = AbstractRootSystem::build(Family::BC, r, None).unwrap();
        let bset: HashSet<_> = b.positive_roots.iter().cloned().collect();
        let mut extra = 0;
        for root in &bc.positive_roots {
            if !bset.contains(root) {
                extra += 1;
                // doubled short roots: twice a B_r short root
                let half = RootVector::new(root.coeffs.iter().map(|c| c / 2).collect());
                assert!(root.coeffs.iter().all(|c| c % 2 == 0));
                assert!(bset.contains(&half));
            }
        }
        assert_eq!(extra, r);
        assert_eq!(bc.positive_roots.len(), b.positive_roots.len() + r);
    }

    #[test]
    fn pair_class_cases() {
        // A3: lambda = a3, class {a3, a3+a2, a3+a2+a1}
        let s = AbstractRootSystem::build(Family::A, 3, None).unwrap();
        let lam = RootVector::new(vec![0, 0, 1]);
        let c = s.pair_string_class(0, 1, &lam).unwrap();
        assert_eq!(c.shape, StringShape::Len3);
        assert_eq!(
            c.members.iter().map(|r| r.coeffs.clone()).collect::<Vec<_>>(),
            vec![vec![0, 0, 1], vec![0, 1, 1], vec![1, 1, 1]]
        );

        // orthogonal singleton in A4
        let s4 = AbstractRootSystem::build(Family::A, 4, None).unwrap();
        let lam = RootVector::new(vec![0, 0, 0, 1]);
        let c = s4.pair_string_class(0, 1, &lam).unwrap();
        assert_eq!(c.shape, StringShape::Singleton);
        assert_eq!(c.members.len(), 1);

        // C3: pair = the two short simples, lambda = 2e3 -> len6 ending at
        // lambda + 2 alpha1 + 2 alpha0 (coeffs [2,2,1]).
        let s = AbstractRootSystem::build(Family::C, 3, None).unwrap();
        let lam = RootVector::new(vec![0, 0, 1]);
        let c = s.pair_string_class(0, 1, &lam).unwrap();
        assert_eq!(c.shape, StringShape::Len6);
        assert_eq!(c.members.len(), 6);
        assert!(c.members.contains(&RootVector::new(vec![2, 2, 1])));

        // non-minimum-level representative rejected
        let lam_bad = RootVector::new(vec![0, 1, 1]);
        assert!(matches!(s.pair_string_class(0, 1, &lam_bad), Err(Error::NotMinimumLevel(_))));
    }

    #[test]
    fn pair_partition_covers_delta_plus() {
        for (fam, rank) in [(Family::A, 3), (Family::C, 3), (Family::A, 4)] {
            let s = AbstractRootSystem::build(fam, rank, None).unwrap();
            let classes = s.pair_partition(0, 1);
            let total: usize = classes.iter().map(|c| c.len()).sum();
            assert_eq!(total, s.positive_roots.len());
            let mut seen = HashSet::new();
            for c in &classes {
                for m in c {
                    assert!(seen.insert(m.clone()), "root in two classes");
                }
            }
        }
    }

    #[test]
    fn invalid_pairs_rejected() {
        assert!(AbstractRootSystem::build(Family::G2, 3, None).is_err());
        assert!(AbstractRootSystem::build(Family::C, 1, None).is_err());
        assert!(AbstractRootSystem::build(Family::D, 2, None).is_err());
        assert!(AbstractRootSystem::build(Family::A, 0, None).is_err());
    }

    #[test]
    fn positivity_dichotomy_and_negatives() {
        for (fam, rank) in [(Family::A, 3), (Family::B, 3), (Family::C, 2), (Family::BC, 3)] {
            let s = AbstractRootSystem::build(fam, rank, None).unwrap();
            for r in &s.positive_roots {
                assert!(r.coeffs.iter().all(|&c| c >= 0));
                assert!(s.is_root(&r.neg()));
                assert!(s.length_sq(r) > Rat::zero());
            }
        }
    }

    fn is_proportional(a: &RootVector, b: &RootVector) -> bool {
        for i in 0..a.coeffs.len() {
            for j in 0..a.coeffs.len() {
                if a.coeffs[i] * b.coeffs[j] != a.coeffs[j] * b.coeffs[i] {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn prop_short_cartan_and_sum_difference_rules() {
        for (fam, rank) in [(Family::A, 3), (Family::B, 2), (Family::C, 3), (Family::G2, 2)] {
            let s = AbstractRootSystem::build(fam, rank, None).unwrap();
            let mut all = s.positive_roots.clone();
            all.extend(s.positive_roots.iter().map(|r| r.neg()));
            for a in &all {
                for l in &all {
                    if !is_proportional(a, l) && s.length_sq(l) <= s.length_sq(a) {
                        let c = s.cartan_integer(a, l).unwrap();
                        assert!(c.abs() <= 1, "{fam:?}: A_{{{a},{l}}} = {c}");
                    }
                    let ip = s.inner(a, l);
                    if ip > Rat::zero() {
                        assert!(s.in_delta0(&a.sub(l)));
                    } else if ip < Rat::zero() {
                        assert!(s.in_delta0(&a.add(l)));
                    }
                }
            }
        }
    }

    // Oracle for the enumeration of reduced systems: close the simple roots
    // under Weyl reflections (and sign), then compare.
    fn reflection_closure(s: &AbstractRootSystem) -> HashSet<RootVector> {
        let mut set: HashSet<RootVector> = HashSet::new();
        for r in &s.simple_roots {
            set.insert(r.clone());
            set.insert(r.neg());
        }
        loop {
            let mut grew = false;
            let snapshot: Vec<RootVector> = set.iter().cloned().collect();
            for a in &snapshot {
                for l in &snapshot {
                    // s_a(l) = l - A_{a,l} a computed from the Gram form
                    let two_ip = rint(2) * s.inner(l, a);
                    let c = two_ip / s.length_sq(a);
                    assert!(c.is_integer());
                    let ci = num_traits::ToPrimitive::to_i64(&c.to_integer()).unwrap();
                    let refl = l.sub(&a.scaled(ci));
                    if set.insert(refl) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        set
    }

    #[test]
    fn enumeration_matches_reflection_closure_oracle() {
        for (fam, rank) in [
            (Family::A, 2),
            (Family::A, 3),
            (Family::B, 2),
            (Family::B, 3),
            (Family::C, 3),
            (Family::D, 4),
            (Family::G2, 2),
        ] {
            let s = AbstractRootSystem::build(fam, rank, None).unwrap();
            let closure = reflection_closure(&s);
            let mut ours: HashSet<RootVector> = s.positive_roots.iter().cloned().collect();
            ours.extend(s.positive_roots.iter().map(|r| r.neg()));
            assert_eq!(closure, ours, "{fam:?} rank {rank}");
        }
    }
}
