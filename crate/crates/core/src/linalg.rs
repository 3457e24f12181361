//! Exact rational vectors and matrices: row reduction, rank, nullspace,
//! solving, and Gram-Schmidt against an arbitrary inner product.
//!
//! Everything here is exact; floating point never enters. Sizes stay small
//! (dim <= 35 algebras, ambient matrices <= 12x12), so dense storage with
//! fraction-normalizing arithmetic is plenty fast.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rat = BigRational;
pub type RatVec = Vec<Rat>;

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rfrac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

pub fn zero_vec(n: usize) -> RatVec {
    vec![Rat::zero(); n]
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Rat::is_zero)
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> RatVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> RatVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Rat], c: &Rat) -> RatVec {
    a.iter().map(|x| x * c).collect()
}

/// a += c * b
pub fn vec_axpy(a: &mut [Rat], c: &Rat, b: &[Rat]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += c * y;
    }
}

pub fn vec_to_f64(a: &[Rat]) -> Vec<f64> {
    a.iter().map(rat_to_f64).collect()
}

#[derive(Clone, PartialEq, Eq)]
pub struct RatMat {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<Rat>,
}

impl std::fmt::Debug for RatMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RatMat {}x{} [", self.nrows, self.ncols)?;
        for r in 0..self.nrows {
            let row: Vec<String> = (0..self.ncols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RatMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        RatMat { nrows, ncols, data: vec![Rat::zero(); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = rint(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<RatVec>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r);
        }
        RatMat { nrows, ncols, data }
    }

    pub fn from_cols(cols: Vec<RatVec>) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.ncols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rat {
        &mut self.data[r * self.ncols + c]
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.ncols..(r + 1) * self.ncols]
    }

    pub fn col(&self, c: usize) -> RatVec {
        (0..self.nrows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rat]> {
        self.data.chunks(self.ncols.max(1)).take(self.nrows)
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.ncols, self.nrows);
        for r in 0..self.nrows {
            for c in 0..self.ncols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn matmul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.ncols, other.nrows);
        let mut out = RatMat::zeros(self.nrows, other.ncols);
        for r in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.ncols {
                    let b = other.at(k, c);
                    if !b.is_zero() {
                        *out.at_mut(r, c) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> RatVec {
        assert_eq!(self.ncols, v.len());
        let mut out = zero_vec(self.nrows);
        for r in 0..self.nrows {
            let mut acc = Rat::zero();
            for c in 0..self.ncols {
                let a = self.at(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    acc += a * &v[c];
                }
            }
            out[r] = acc;
        }
        out
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.nrows).map(|r| self.row(r).iter().map(rat_to_f64).collect()).collect()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == self.nrows {
                break;
            }
            let Some(p) = (r..self.nrows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for k in 0..self.ncols {
                    let (a, b) = (self.at(r, k).clone(), self.at(p, k).clone());
                    *self.at_mut(r, k) = b;
                    *self.at_mut(p, k) = a;
                }
            }
            let inv = self.at(r, c).recip();
            for k in c..self.ncols {
                let v = self.at(r, k) * &inv;
                *self.at_mut(r, k) = v;
            }
            for i in 0..self.nrows {
                if i != r && !self.at(i, c).is_zero() {
                    let f = self.at(i, c).clone();
                    for k in c..self.ncols {
                        let v = self.at(i, k) - &f * self.at(r, k);
                        *self.at_mut(i, k) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// Basis of { x : A x = 0 }.
    pub fn nullspace(&self) -> Vec<RatVec> {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = zero_vec(self.ncols);
            v[free] = rint(1);
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -m.at(prow, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Exact inverse; None when singular.
    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let mut aug = RatMat::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                *aug.at_mut(r, c) = self.at(r, c).clone();
            }
            *aug.at_mut(r, n + r) = rint(1);
        }
        let pivots = aug.row_reduce();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = RatMat::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                *inv.at_mut(r, c) = aug.at(r, n + c).clone();
            }
        }
        Some(inv)
    }

    /// True iff the matrix is symmetric positive definite. Uses symmetric
    /// Gaussian elimination: positive definite iff every pivot is positive.
    pub fn is_positive_definite(&self) -> bool {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        for r in 0..n {
            for c in 0..r {
                if self.at(r, c) != self.at(c, r) {
                    return false;
                }
            }
        }
        let mut m = self.clone();
        for k in 0..n {
            if !m.at(k, k).is_positive() {
                return false;
            }
            let piv = m.at(k, k).clone();
            for i in (k + 1)..n {
                let f = m.at(i, k) / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = m.at(i, j) - &f * m.at(k, j);
                    *m.at_mut(i, j) = v;
                }
            }
        }
        true
    }
}

/// Expresses vectors in the span of a fixed generating set.
///
/// Precomputes the row reduction of the column matrix once so repeated
/// membership / coordinate queries are a single back-substitution.
pub struct SpanSolver {
    dim: usize,
    ngen: usize,
    // RREF of [cols(generators) | I], i.e. E*[B|I] = [R|E].
    rref: RatMat,
    pivots: Vec<usize>,
}

impl SpanSolver {
    pub fn new(generators: &[RatVec]) -> Self {
        let ngen = generators.len();
        let dim = generators.first().map_or(0, |v| v.len());
        let mut aug = RatMat::zeros(dim, ngen + dim);
        for (j, g) in generators.iter().enumerate() {
            assert_eq!(g.len(), dim);
            for i in 0..dim {
                *aug.at_mut(i, j) = g[i].clone();
            }
        }
        for i in 0..dim {
            *aug.at_mut(i, ngen + i) = rint(1);
        }
        let pivots = {
            // Row-reduce only against the generator columns; the identity
            // block just records the row operations.
            let mut piv = Vec::new();
            let mut r = 0;
            for c in 0..ngen {
                if r == dim {
                    break;
                }
                let Some(p) = (r..dim).find(|&i| !aug.at(i, c).is_zero()) else { continue };
                if p != r {
                    for k in 0..(ngen + dim) {
                        let (a, b) = (aug.at(r, k).clone(), aug.at(p, k).clone());
                        *aug.at_mut(r, k) = b;
                        *aug.at_mut(p, k) = a;
                    }
                }
                let inv = aug.at(r, c).recip();
                for k in 0..(ngen + dim) {
                    let v = aug.at(r, k) * &inv;
                    *aug.at_mut(r, k) = v;
                }
                for i in 0..dim {
                    if i != r && !aug.at(i, c).is_zero() {
                        let f = aug.at(i, c).clone();
                        for k in 0..(ngen + dim) {
                            let v = aug.at(i, k) - &f * aug.at(r, k);
                            *aug.at_mut(i, k) = v;
                        }
                    }
                }
                piv.push(c);
                r += 1;
            }
            piv
        };
        SpanSolver { dim, ngen, rref: aug, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates c with sum_j c_j g_j = v, or None when v is outside the span.
    /// Free generators get coordinate zero.
    pub fn solve(&self, v: &[Rat]) -> Option<RatVec> {
        assert_eq!(v.len(), self.dim);
        // w = E v
        let mut w = zero_vec(self.dim);
        for r in 0..self.dim {
            let mut acc = Rat::zero();
            for c in 0..self.dim {
                let e = self.rref.at(r, self.ngen + c);
                if !e.is_zero() && !v[c].is_zero() {
                    acc += e * &v[c];
                }
            }
            w[r] = acc;
        }
        // Rows beyond the pivot rows must vanish for consistency.
        for r in self.pivots.len()..self.dim {
            if !w[r].is_zero() {
                return None;
            }
        }
        let mut coords = zero_vec(self.ngen);
        // R is in RREF over the generator columns: row r reads
        // g_{pivots[r]} + sum_{free} R[r,free] g_free = (E B) row; since free
        // coordinates are pinned to zero the pivot coordinate is just w[r].
        for (r, &pc) in self.pivots.iter().enumerate() {
            coords[pc] = w[r].clone();
        }
        // Consistency: with free coords zero we need R * coords = w exactly on
        // pivot rows, which holds by construction of RREF.
        Some(coords)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.solve(v).is_some()
    }

    /// Linear obstruction to membership: the coordinates of E v on the rows
    /// beyond the pivot rows. Zero exactly when v lies in the span; linear
    /// in v, so it can serve as a constraint row in larger systems.
    pub fn obstruction(&self, v: &[Rat]) -> RatVec {
        assert_eq!(v.len(), self.dim);
        let mut out = Vec::with_capacity(self.dim - self.pivots.len());
        for r in self.pivots.len()..self.dim {
            let mut acc = Rat::zero();
            for c in 0..self.dim {
                let e = self.rref.at(r, self.ngen + c);
                if !e.is_zero() && !v[c].is_zero() {
                    acc += e * &v[c];
                }
            }
            out.push(acc);
        }
        out
    }
}

pub fn span_rank(vectors: &[RatVec]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    RatMat::from_rows(vectors.to_vec()).rank()
}

/// Exact Gram-Schmidt orthogonalization (no normalization) against the given
/// inner product. Fails with the index of the first dependent input vector.
pub fn gram_schmidt<F>(vectors: &[RatVec], inner: F) -> Result<Vec<RatVec>, usize>
where
    F: Fn(&[Rat], &[Rat]) -> Rat,
{
    let mut out: Vec<RatVec> = Vec::with_capacity(vectors.len());
    let mut norms: Vec<Rat> = Vec::with_capacity(vectors.len());
    for (idx, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for (u, n) in out.iter().zip(&norms) {
            let c = -(inner(&w, u) / n);
            vec_axpy(&mut w, &c, u);
        }
        if is_zero_vec(&w) {
            return Err(idx);
        }
        let n = inner(&w, &w);
        norms.push(n);
        out.push(w);
    }
    Ok(out)
}
