//! Small dense eigenproblems: cyclic Jacobi for symmetric matrices and a
//! characteristic-polynomial solver for general 3x3 blocks.

/// Off-diagonal Frobenius norm threshold for Jacobi convergence.
pub const JACOBI_OFFDIAG_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

fn offdiag_frobenius(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i][j] * a[i][j];
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending. Panics on non-square input; symmetry is the caller's contract.
pub fn jacobi_eigenvalues(matrix: &[Vec<f64>]) -> Vec<f64> {
    let n = matrix.len();
    if n == 0 {
        return Vec::new();
    }
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    for row in &a {
        assert_eq!(row.len(), n, "jacobi: matrix must be square");
    }
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if offdiag_frobenius(&a) < JACOBI_OFFDIAG_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p][p];
                let aqq = a[q][q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

/// Groups a sorted eigenvalue list into (representative, multiplicity)
/// clusters; consecutive values closer than `tol` share a cluster. The
/// representative is the cluster mean.
pub fn cluster_eigenvalues(sorted: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && (sorted[j] - sorted[j - 1]).abs() <= tol {
            j += 1;
        }
        let mean = sorted[i..j].iter().sum::<f64>() / (j - i) as f64;
        out.push((mean, j - i));
        i = j;
    }
    out
}

/// L-infinity distance between two sorted spectra of equal length.
pub fn spectrum_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "spectra of different sizes");
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Real roots of x^3 + a2 x^2 + a1 x + a0, with multiplicity, sorted
/// ascending. A cubic with real coefficients always has at least one real
/// root; the symmetric-spectrum blocks handled here have three.
pub fn cubic_real_roots(a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    // Depress: x = t - a2/3 => t^3 + p t + q
    let shift = a2 / 3.0;
    let p = a1 - a2 * a2 / 3.0;
    let q = 2.0 * a2.powi(3) / 27.0 - a2 * a1 / 3.0 + a0;
    let mut roots: Vec<f64>;
    let disc = -4.0 * p.powi(3) - 27.0 * q * q;
    if disc > 0.0 {
        // three distinct real roots, trig form
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        roots = (0..3)
            .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
            .collect();
    } else if p.abs() < 1e-14 && q.abs() < 1e-14 {
        roots = vec![0.0, 0.0, 0.0];
    } else {
        // one real root (or a repeated pair), Cardano
        let d = (q * q / 4.0 + p.powi(3) / 27.0).max(0.0).sqrt();
        let u = (-q / 2.0 + d).cbrt();
        let v = (-q / 2.0 - d).cbrt();
        roots = vec![u + v];
        if disc.abs() <= 1e-12 * (p.abs().powi(3) + q * q + 1.0) {
            // repeated real root at -(u+v)/2
            let r = -(u + v) / 2.0;
            roots.push(r);
            roots.push(r);
        }
    }
    // Newton polish on the depressed cubic.
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let f = r.powi(3) + p * *r + q;
            let df = 3.0 * *r * *r + p;
            if df.abs() > 1e-30 {
                *r -= f / df;
            }
        }
    }
    let mut out: Vec<f64> = roots.iter().map(|t| t - shift).collect();
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out
}

/// Eigenvalues of a general (possibly non-symmetric) real 3x3 matrix with a
/// real spectrum, via its characteristic polynomial.
pub fn eigen3_via_charpoly(m: &[[f64; 3]; 3]) -> Vec<f64> {
    let tr = m[0][0] + m[1][1] + m[2][2];
    // sum of principal 2x2 minors
    let c1 = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2] - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    // char poly: x^3 - tr x^2 + c1 x - det
    cubic_real_roots(-tr, c1, -det)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_on_known_symmetric() {
        // eigenvalues of [[0,1],[1,0]] are +-1
        let eigs = jacobi_eigenvalues(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!((eigs[0] + 1.0).abs() < 1e-14);
        assert!((eigs[1] - 1.0).abs() < 1e-14);

        // 3x3 with spectrum {0, +-sqrt(2)}
        let a = vec![
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
        ];
        let eigs = jacobi_eigenvalues(&a);
        let s = 2.0_f64.sqrt();
        for (got, want) in eigs.iter().zip([-s, 0.0, s]) {
            assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        }
    }

    #[test]
    fn clustering() {
        let eigs = [-1.0, -1.0 + 1e-9, 0.0, 1.0];
        let clusters = cluster_eigenvalues(&eigs, 1e-7);
        assert_eq!(clusters.len(), 3);
        assert_eq!(clusters[0].1, 2);
    }

    #[test]
    fn cubic_roots_match_factored_polynomials() {
        // (x-1)(x+2)(x-3) = x^3 -2x^2 -5x + 6
        let r = cubic_real_roots(-2.0, -5.0, 6.0);
        for (got, want) in r.iter().zip([-2.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        // x^3 - (7/2) x: roots 0, +-sqrt(7/2)
        let r = cubic_real_roots(0.0, -3.5, 0.0);
        let s = (3.5_f64).sqrt();
        for (got, want) in r.iter().zip([-s, 0.0, s]) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn charpoly_eigen_nonsymmetric() {
        // [[0,4],[1/2... as a 3x3 embedding with asymmetric entries:
        let m = [[0.0, 4.0, 0.0], [0.5, 0.0, 3.0], [0.0, 0.5, 0.0]];
        let eigs = eigen3_via_charpoly(&m);
        let s = (3.5_f64).sqrt();
        for (got, want) in eigs.iter().zip([-s, 0.0, s]) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
