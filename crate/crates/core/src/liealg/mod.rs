//! Concrete real semisimple Lie algebras with exact rational structure
//! constants: Killing form, Cartan involution, restricted root space
//! decompositions, Iwasawa data and the left-invariant metric on a + n.

mod decomp;
mod families;
mod matreal;

pub use decomp::{NumericCtx, RealizedRoot, RestrictedDecomposition, SubspaceTag};
pub use families::{build_sl_complex, build_sl_quaternion, build_sl_real, build_so_pq, build_sp_real, SpaceBuild};

use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, vec_axpy, zero_vec, Rat, RatMat, RatVec};
use crate::rootsys::Family;
use matreal::SparseRow;
use num_traits::Zero;

/// A real Lie algebra given by exact rational structure constants, a Cartan
/// involution and its Killing form. Immutable after construction.
pub struct StructureConstantAlgebra {
    pub dim: usize,
    pub basis_labels: Vec<String>,
    bracket: Vec<Vec<SparseRow>>,
    pub theta: RatMat,
    pub killing: RatMat,
}

impl StructureConstantAlgebra {
    pub(crate) fn from_realization(
        real: matreal::Realization,
        basis_labels: Vec<String>,
    ) -> Result<Self> {
        let alg = StructureConstantAlgebra {
            dim: real.dim,
            basis_labels,
            bracket: real.bracket,
            theta: real.theta,
            killing: real.killing,
        };
        alg.verify_construction()?;
        Ok(alg)
    }

    /// Structural checks run on every construction: theta is an involutive
    /// automorphism, the Jacobi identity holds on all basis triples, the
    /// Killing form is symmetric and B_theta is positive definite.
    fn verify_construction(&self) -> Result<()> {
        let n = self.dim;
        if self.theta.matmul(&self.theta) != RatMat::identity(n) {
            return Err(Error::Internal("theta^2 != id".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.theta.mul_vec(&self.bracket_basis_vec(i, j));
                let ti = self.theta.col(i);
                let tj = self.theta.col(j);
                let rhs = self.bracket(&ti, &tj);
                if lhs != rhs {
                    return Err(Error::Internal(format!(
                        "theta is not an automorphism at pair ({i},{j})"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    if !self.jacobi_holds(i, j, k) {
                        return Err(Error::Internal(format!(
                            "Jacobi identity fails on triple ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        let mut btheta = RatMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                *btheta.at_mut(i, j) = self.b_theta_basis(i, j);
            }
        }
        if !btheta.is_positive_definite() {
            return Err(Error::Internal("B_theta is not positive definite".into()));
        }
        Ok(())
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Rat)] {
        &self.bracket[i][j]
    }

    fn bracket_basis_vec(&self, i: usize, j: usize) -> RatVec {
        let mut out = zero_vec(self.dim);
        for (k, c) in &self.bracket[i][j] {
            out[*k] = c.clone();
        }
        out
    }

    /// [x, y] over the structure constants.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> RatVec {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        let mut out = zero_vec(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let f = xi * yj;
                for (k, c) in &self.bracket[i][j] {
                    out[*k] += &f * c;
                }
            }
        }
        out
    }

    pub fn theta_vec(&self, x: &[Rat]) -> RatVec {
        self.theta.mul_vec(x)
    }

    pub fn killing_form(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    acc += xi * yj * self.killing.at(i, j);
                }
            }
        }
        acc
    }

    fn b_theta_basis(&self, i: usize, j: usize) -> Rat {
        let tj = self.theta.col(j);
        let mut acc = Rat::zero();
        for (k, t) in tj.iter().enumerate() {
            if !t.is_zero() {
                acc -= t * self.killing.at(i, k);
            }
        }
        acc
    }

    /// <x, y>_{B_theta} = -B(x, theta y), unscaled.
    pub fn b_theta(&self, x: &[Rat], y: &[Rat]) -> Rat {
        -self.killing_form(x, &self.theta_vec(y))
    }

    /// Matrix of ad(x) over the basis.
    pub fn ad(&self, x: &[Rat]) -> RatMat {
        let mut m = RatMat::zeros(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for (k, c) in &self.bracket[i][j] {
                    *m.at_mut(*k, j) += xi * c;
                }
            }
        }
        m
    }

    pub fn jacobi_holds(&self, i: usize, j: usize, k: usize) -> bool {
        let ei = basis_vec(self.dim, i);
        let ej = basis_vec(self.dim, j);
        let ek = basis_vec(self.dim, k);
        let mut acc = self.bracket(&ei, &self.bracket(&ej, &ek));
        vec_axpy(&mut acc, &crate::linalg::rint(1), &self.bracket(&ej, &self.bracket(&ek, &ei)));
        vec_axpy(&mut acc, &crate::linalg::rint(1), &self.bracket(&ek, &self.bracket(&ei, &ej)));
        is_zero_vec(&acc)
    }

    /// Bracket as an f64 sparse table (for the floating geometry layer).
    pub(crate) fn bracket_f64_table(&self) -> Vec<Vec<Vec<(usize, f64)>>> {
        self.bracket
            .iter()
            .map(|row| {
                row.iter()
                    .map(|sr| {
                        sr.iter().map(|(k, c)| (*k, crate::linalg::rat_to_f64(c))).collect()
                    })
                    .collect()
            })
            .collect()
    }
}

pub(crate) fn basis_vec(dim: usize, i: usize) -> RatVec {
    let mut v = zero_vec(dim);
    v[i] = crate::linalg::rint(1);
    v
}

/// Family-specific data attached by the builders: the canonical maximal
/// abelian subspace, a regular element and the candidate root functionals.
pub struct CanonicalData {
    /// Indices into the algebra basis spanning a (each a basis element).
    pub a_indices: Vec<usize>,
    /// Regular element in a-coordinates (over `a_indices` order).
    pub h_reg_a: RatVec,
    /// Candidate root functionals as value vectors on the a-basis.
    pub candidates: Vec<RatVec>,
    pub family: Family,
    pub rank: usize,
    pub label: String,
}

impl CanonicalData {
    pub fn a_basis_vectors(&self, dim: usize) -> Vec<RatVec> {
        self.a_indices.iter().map(|&i| basis_vec(dim, i)).collect()
    }

    pub fn h_reg_vector(&self, dim: usize) -> RatVec {
        let mut v = zero_vec(dim);
        for (m, &i) in self.a_indices.iter().enumerate() {
            v[i] = self.h_reg_a[m].clone();
        }
        v
    }
}
