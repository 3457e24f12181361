//! From a list of ambient matrices to exact structure constants.
//!
//! Every realized algebra is handed to us as a linearly independent family of
//! rational N x N matrices closed under commutators and under X -> -X^T. The
//! bracket table, Cartan involution matrix and Killing form are all derived
//! here; nothing family-specific survives past this boundary.

use crate::error::{Error, Result};
use crate::linalg::{zero_vec, Rat, RatMat, RatVec, SpanSolver};
use num_traits::Zero;

/// Sparse rational matrix in a fixed ambient dimension.
#[derive(Debug, Clone)]
pub struct AmbientMat {
    pub n: usize,
    /// (row, col, value) with distinct positions.
    pub entries: Vec<(usize, usize, Rat)>,
}

impl AmbientMat {
    pub fn new(n: usize) -> Self {
        AmbientMat { n, entries: Vec::new() }
    }

    pub fn with(mut self, r: usize, c: usize, v: Rat) -> Self {
        debug_assert!(r < self.n && c < self.n);
        if !v.is_zero() {
            self.entries.push((r, c, v));
        }
        self
    }

    fn normalized(mut self) -> Self {
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut out: Vec<(usize, usize, Rat)> = Vec::with_capacity(self.entries.len());
        for (r, c, v) in self.entries.drain(..) {
            if let Some(last) = out.last_mut() {
                if last.0 == r && last.1 == c {
                    last.2 += v;
                    continue;
                }
            }
            out.push((r, c, v));
        }
        out.retain(|(_, _, v)| !v.is_zero());
        self.entries = out;
        self
    }

    pub fn mul(&self, other: &AmbientMat) -> AmbientMat {
        let mut out = AmbientMat::new(self.n);
        for (r, k, a) in &self.entries {
            for (k2, c, b) in &other.entries {
                if k == k2 {
                    out.entries.push((*r, *c, a * b));
                }
            }
        }
        out.normalized()
    }

    pub fn sub(&self, other: &AmbientMat) -> AmbientMat {
        let mut out = self.clone();
        for (r, c, v) in &other.entries {
            out.entries.push((*r, *c, -v));
        }
        out.normalized()
    }

    pub fn commutator(&self, other: &AmbientMat) -> AmbientMat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn neg_transpose(&self) -> AmbientMat {
        AmbientMat {
            n: self.n,
            entries: self.entries.iter().map(|(r, c, v)| (*c, *r, -v)).collect(),
        }
        .normalized()
    }

    pub fn flatten(&self) -> RatVec {
        let mut v = zero_vec(self.n * self.n);
        for (r, c, val) in &self.entries {
            v[r * self.n + c] = val.clone();
        }
        v
    }
}

/// Sparse bracket row: coefficients of [e_i, e_j] over the basis.
pub type SparseRow = Vec<(usize, Rat)>;

pub struct Realization {
    pub dim: usize,
    pub bracket: Vec<Vec<SparseRow>>,
    pub theta: RatMat,
    pub killing: RatMat,
}

/// Expands commutators and the involution over the given basis and computes
/// the Killing form from the adjoint representation.
pub fn realize(basis: &[AmbientMat]) -> Result<Realization> {
    let dim = basis.len();
    if dim == 0 {
        return Err(Error::InvalidParameter("empty basis".into()));
    }
    let flat: Vec<RatVec> = basis.iter().map(AmbientMat::flatten).collect();
    let solver = SpanSolver::new(&flat);
    if solver.rank() != dim {
        return Err(Error::Internal("realization basis is linearly dependent".into()));
    }

    let mut bracket: Vec<Vec<SparseRow>> = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in (i + 1)..dim {
            let comm = basis[i].commutator(&basis[j]);
            let coords = solver
                .solve(&comm.flatten())
                .ok_or_else(|| Error::Internal(format!("[e_{i}, e_{j}] leaves the span")))?;
            let row: SparseRow = coords
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect();
            bracket[j][i] = row.iter().map(|(k, v)| (*k, -v)).collect();
            bracket[i][j] = row;
        }
    }

    let mut theta = RatMat::zeros(dim, dim);
    for (j, b) in basis.iter().enumerate() {
        let img = b.neg_transpose();
        let coords = solver
            .solve(&img.flatten())
            .ok_or_else(|| Error::Internal(format!("theta(e_{j}) leaves the span")))?;
        for (i, v) in coords.into_iter().enumerate() {
            *theta.at_mut(i, j) = v;
        }
    }

    // Killing form from the adjoint representation:
    // B(e_i, e_j) = sum_{a,b} c_{i,b}^a c_{j,a}^b.
    let mut killing = RatMat::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let mut acc = Rat::zero();
            for b in 0..dim {
                for (a, cia) in &bracket[i][b] {
                    for (k, cjb) in &bracket[j][*a] {
                        if k == &b {
                            acc += cia * cjb;
                        }
                    }
                }
            }
            *killing.at_mut(i, j) = acc.clone();
            *killing.at_mut(j, i) = acc;
        }
    }

    Ok(Realization { dim, bracket, theta, killing })
}
