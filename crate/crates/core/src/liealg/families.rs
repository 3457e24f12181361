//! Canonical realizations: sl_n over R, C, H; so(p,q); sp(2n, R).
//!
//! Complex entries are realized over a real basis {1, i} as 2x2
//! left-multiplication blocks, quaternionic entries over {1, i, j, k} as 4x4
//! blocks, so every structure constant is an integer and theta(X) = -X^T in
//! the ambient realization for all five families.

use super::matreal::{realize, AmbientMat};
use super::{CanonicalData, StructureConstantAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{rfrac, rint, Rat, RatVec};
use crate::rootsys::Family;

pub struct SpaceBuild {
    pub alg: StructureConstantAlgebra,
    pub canonical: CanonicalData,
}

/// 2x2 left-multiplication blocks of the complex units 1, i.
fn complex_units() -> Vec<Vec<(usize, usize, i64)>> {
    vec![
        vec![(0, 0, 1), (1, 1, 1)],
        vec![(1, 0, 1), (0, 1, -1)],
    ]
}

/// 4x4 left-multiplication blocks of the quaternion units 1, i, j, k
/// (coordinates ordered 1, i, j, k).
fn quaternion_units() -> Vec<Vec<(usize, usize, i64)>> {
    vec![
        vec![(0, 0, 1), (1, 1, 1), (2, 2, 1), (3, 3, 1)],
        vec![(1, 0, 1), (0, 1, -1), (3, 2, 1), (2, 3, -1)],
        vec![(2, 0, 1), (3, 1, -1), (0, 2, -1), (1, 3, 1)],
        vec![(3, 0, 1), (2, 1, 1), (1, 2, -1), (0, 3, -1)],
    ]
}

/// E_{ab} tensor unit block u inside an (d*n x d*n) ambient matrix.
fn block(n: usize, d: usize, a: usize, b: usize, unit: &[(usize, usize, i64)]) -> AmbientMat {
    let mut m = AmbientMat::new(d * n);
    for &(r, c, v) in unit {
        m = m.with(d * a + r, d * b + c, rint(v));
    }
    m
}

/// Regular element for sl_n: diag(2^{n-1}, ..., 1) minus its trace average;
/// expressed in coordinates over D_k = E_kk - E_{k+1,k+1} as partial sums.
fn sl_h_reg_coords(n: usize) -> RatVec {
    let total: i64 = (0..n).map(|i| 1i64 << i).sum();
    let h: Vec<Rat> = (0..n)
        .map(|i| rint(1 << (n - 1 - i)) - rfrac(total, n as i64))
        .collect();
    (0..n - 1)
        .map(|k| h[..=k].iter().fold(Rat::from_integer(0.into()), |a, b| a + b))
        .collect()
}

/// Candidate functionals e_i - e_j (i != j) of sl_n, as value vectors on
/// the D_k coordinates.
fn sl_candidates(n: usize) -> Vec<RatVec> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            // (e_i - e_j)(D_k) with D_k = E_kk - E_{k+1,k+1}
            let v: RatVec = (0..n - 1)
                .map(|k| {
                    let d = |x: usize| -> i64 {
                        if x == k {
                            1
                        } else if x == k + 1 {
                            -1
                        } else {
                            0
                        }
                    };
                    rint(d(i) - d(j))
                })
                .collect();
            out.push(v);
        }
    }
    out
}

fn build_sl_family(n: usize, d: usize, label: String) -> Result<SpaceBuild> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("{label}: need n >= 2, got {n}")));
    }
    let units = match d {
        1 => vec![vec![(0usize, 0usize, 1i64)]],
        2 => complex_units(),
        4 => quaternion_units(),
        _ => unreachable!(),
    };
    let unit_names = match d {
        1 => vec![""],
        2 => vec!["", "i"],
        4 => vec!["", "i", "j", "k"],
        _ => unreachable!(),
    };
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            for (u, unit) in units.iter().enumerate() {
                basis.push(block(n, d, a, b, unit));
                labels.push(format!("E{}{}{}", a + 1, b + 1, unit_names[u]));
            }
        }
    }
    let mut a_indices = Vec::new();
    for k in 0..n - 1 {
        a_indices.push(basis.len());
        let dk = block(n, d, k, k, &units[0]).sub(&block(n, d, k + 1, k + 1, &units[0]));
        basis.push(dk);
        labels.push(format!("D{}", k + 1));
    }
    match d {
        1 => {}
        2 => {
            // traceless imaginary diagonal: D_k (x) i
            for k in 0..n - 1 {
                let m = block(n, d, k, k, &units[1]).sub(&block(n, d, k + 1, k + 1, &units[1]));
                basis.push(m);
                labels.push(format!("D{}i", k + 1));
            }
        }
        4 => {
            // imaginary diagonal entries are unconstrained for sl_n(H)
            for a in 0..n {
                for (u, unit) in units.iter().enumerate().skip(1) {
                    basis.push(block(n, d, a, a, unit));
                    labels.push(format!("E{}{}{}", a + 1, a + 1, unit_names[u]));
                }
            }
        }
        _ => unreachable!(),
    }
    let real = realize(&basis)?;
    let alg = StructureConstantAlgebra::from_realization(real, labels)?;
    let canonical = CanonicalData {
        a_indices,
        h_reg_a: sl_h_reg_coords(n),
        candidates: sl_candidates(n),
        family: Family::A,
        rank: n - 1,
        label,
    };
    Ok(SpaceBuild { alg, canonical })
}

pub fn build_sl_real(n: usize) -> Result<SpaceBuild> {
    build_sl_family(n, 1, format!("sl{n}(R)"))
}

pub fn build_sl_complex(n: usize) -> Result<SpaceBuild> {
    build_sl_family(n, 2, format!("sl{n}(C)"))
}

pub fn build_sl_quaternion(n: usize) -> Result<SpaceBuild> {
    build_sl_family(n, 4, format!("sl{n}(H)"))
}

/// so(p, q) in the block form for the diagonal form diag(I_p, -I_q);
/// a is spanned by E_{m,p+m} + E_{p+m,m}. Requires p < q (type B_p).
pub fn build_so_pq(p: usize, q: usize) -> Result<SpaceBuild> {
    if p < 1 {
        return Err(Error::InvalidParameter(format!("so(p,q): need p >= 1, got {p}")));
    }
    if p >= q {
        return Err(Error::InvalidParameter(format!(
            "so(p,q): supported realizations need p < q (type B), got ({p},{q})"
        )));
    }
    let n = p + q;
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    let mut a_indices = Vec::new();
    for i in 0..p {
        for j in (i + 1)..p {
            basis.push(AmbientMat::new(n).with(i, j, rint(1)).with(j, i, rint(-1)));
            labels.push(format!("A{}{}", i + 1, j + 1));
        }
    }
    for i in 0..q {
        for j in (i + 1)..q {
            basis.push(
                AmbientMat::new(n).with(p + i, p + j, rint(1)).with(p + j, p + i, rint(-1)),
            );
            labels.push(format!("D{}{}", i + 1, j + 1));
        }
    }
    for i in 0..p {
        for j in 0..q {
            if i == j {
                a_indices.push(basis.len());
            }
            basis.push(AmbientMat::new(n).with(i, p + j, rint(1)).with(p + j, i, rint(1)));
            labels.push(format!("B{}{}", i + 1, j + 1));
        }
    }
    let mut candidates: Vec<RatVec> = Vec::new();
    let e = |i: usize, s: i64| -> RatVec {
        (0..p).map(|m| if m == i { rint(s) } else { rint(0) }).collect()
    };
    for i in 0..p {
        for j in (i + 1)..p {
            for (si, sj) in [(1i64, -1i64), (-1, 1), (1, 1), (-1, -1)] {
                let mut v = e(i, si);
                v[j] = rint(sj);
                candidates.push(v);
            }
        }
    }
    for i in 0..p {
        candidates.push(e(i, 1));
        candidates.push(e(i, -1));
    }
    let h_reg_a: RatVec = (0..p).map(|m| rint(1 << (2 * (p - m)))).collect(); // powers of 4
    let real = realize(&basis)?;
    let alg = StructureConstantAlgebra::from_realization(real, labels)?;
    let canonical = CanonicalData {
        a_indices,
        h_reg_a,
        candidates,
        family: Family::B,
        rank: p,
        label: format!("so({p},{q})"),
    };
    Ok(SpaceBuild { alg, canonical })
}

/// sp(2n, R) for the standard symplectic form; a is the diagonal split torus.
pub fn build_sp_real(n: usize) -> Result<SpaceBuild> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("sp(2n,R): need n >= 2, got {n}")));
    }
    let dim2 = 2 * n;
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    let mut a_indices = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                a_indices.push(basis.len());
            }
            basis.push(
                AmbientMat::new(dim2).with(i, j, rint(1)).with(n + j, n + i, rint(-1)),
            );
            labels.push(format!("G{}{}", i + 1, j + 1));
        }
    }
    for i in 0..n {
        for j in i..n {
            let mut m = AmbientMat::new(dim2).with(i, n + j, rint(1));
            if i != j {
                m = m.with(j, n + i, rint(1));
            }
            basis.push(m);
            labels.push(format!("B{}{}", i + 1, j + 1));
        }
    }
    for i in 0..n {
        for j in i..n {
            let mut m = AmbientMat::new(dim2).with(n + i, j, rint(1));
            if i != j {
                m = m.with(n + j, i, rint(1));
            }
            basis.push(m);
            labels.push(format!("C{}{}", i + 1, j + 1));
        }
    }
    let mut candidates: Vec<RatVec> = Vec::new();
    let e = |i: usize, s: i64| -> RatVec {
        (0..n).map(|m| if m == i { rint(s) } else { rint(0) }).collect()
    };
    for i in 0..n {
        for j in (i + 1)..n {
            for (si, sj) in [(1i64, -1i64), (-1, 1), (1, 1), (-1, -1)] {
                let mut v = e(i, si);
                v[j] = rint(sj);
                candidates.push(v);
            }
        }
    }
    for i in 0..n {
        candidates.push(e(i, 2));
        candidates.push(e(i, -2));
    }
    let h_reg_a: RatVec = (0..n).map(|m| rint(1 << (2 * (n - m)))).collect();
    let real = realize(&basis)?;
    let alg = StructureConstantAlgebra::from_realization(real, labels)?;
    let canonical = CanonicalData {
        a_indices,
        h_reg_a,
        candidates,
        family: Family::C,
        rank: n,
        label: format!("sp{}(R)", 2 * n),
    };
    Ok(SpaceBuild { alg, canonical })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(build_sl_real(3).unwrap().alg.dim, 8);
        assert_eq!(build_sl_complex(3).unwrap().alg.dim, 16);
        assert_eq!(build_sl_quaternion(3).unwrap().alg.dim, 35);
        assert_eq!(build_so_pq(2, 5).unwrap().alg.dim, 21);
        assert_eq!(build_sp_real(3).unwrap().alg.dim, 21);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(build_sl_real(1).is_err());
        assert!(build_so_pq(0, 3).is_err());
        assert!(build_so_pq(3, 3).is_err());
        assert!(build_sp_real(1).is_err());
    }

    #[test]
    fn quaternion_units_multiply_correctly() {
        // L_i L_j = L_k in the 4x4 realization
        let us = quaternion_units();
        let li = {
            let mut m = AmbientMat::new(4);
            for &(r, c, v) in &us[1] {
                m = m.with(r, c, rint(v));
            }
            m
        };
        let lj = {
            let mut m = AmbientMat::new(4);
            for &(r, c, v) in &us[2] {
                m = m.with(r, c, rint(v));
            }
            m
        };
        let lk = {
            let mut m = AmbientMat::new(4);
            for &(r, c, v) in &us[3] {
                m = m.with(r, c, rint(v));
            }
            m
        };
        let prod = li.mul(&lj);
        assert_eq!(prod.flatten(), lk.flatten());
    }
}
