//! Cross-module invariants: the exact identity battery on every realized
//! algebra, floating-point connection/shape-operator properties, string
//! invariance, and the subspace identities behind the rank-2 classification.

use std::sync::OnceLock;

use cpc_core::battery::{exact_identities, Battery};
use cpc_core::construct::{
    build_case_ii, characterization_check, codimension_scan, complex_lines_scenario,
    normalizer_check, obstruction_block, BlockKind,
};
use cpc_core::geometry::{
    cpc_sweep, levi_civita, phi_apply, phi_theta_apply, principal_curvatures, sample_directions,
    shape_operator, string_block, ClassKind, OrbitModel, SweepConfig, Tolerances,
};
use cpc_core::liealg::RestrictedDecomposition;
use cpc_core::linalg::{rat_to_f64, span_rank, vec_to_f64, RatVec};
use cpc_core::rootsys::RootVector;

fn battery() -> &'static Battery {
    static B: OnceLock<Battery> = OnceLock::new();
    B.get_or_init(|| Battery::build().expect("spaces build"))
}

fn unit_f64(d: &RestrictedDecomposition, v: &RatVec) -> Vec<f64> {
    let n2 = rat_to_f64(&d.metric_an(v, v));
    vec_to_f64(v).iter().map(|x| x / n2.sqrt()).collect()
}

fn line_orbit<'d>(d: &'d RestrictedDecomposition, roots: &[usize]) -> OrbitModel<'d> {
    let v = roots
        .iter()
        .map(|&i| {
            let r = d.system.simple_roots[i].clone();
            (r.clone(), vec![d.root(&r).unwrap().basis[0].clone()])
        })
        .collect();
    OrbitModel::new(d, v).unwrap()
}

#[test]
fn exact_identities_all_spaces() {
    for d in battery().spaces() {
        for (name, ok) in exact_identities(d, 99) {
            assert!(ok, "{}: identity {name} failed", d.label);
        }
    }
}

#[test]
fn shape_operator_self_adjoint_and_linear() {
    let b = battery();
    let tol = Tolerances::default();
    for d in [&b.sl3c, &b.sl3h] {
        let orbit = line_orbit(d, &[0, 1]);
        let cfg = SweepConfig { seed: 5, ..Default::default() };
        let dirs = sample_directions(orbit.normal_dim(), &cfg);
        for coords in dirs.iter().take(6) {
            let xi = orbit.normal_from_coords(coords);
            let op = shape_operator(&orbit, &xi, &tol).unwrap();
            assert!(op.symmetry_residual <= 1e-10, "{}", op.symmetry_residual);
        }
        // linearity in xi over the normal basis pair
        let xi0 = orbit.normal_from_coords(&unit_coord(orbit.normal_dim(), 0));
        let xi1 = orbit.normal_from_coords(&unit_coord(orbit.normal_dim(), 1));
        let (a, bb) = (0.6, 0.8);
        let mixed: Vec<f64> = xi0.iter().zip(&xi1).map(|(x, y)| a * x + bb * y).collect();
        let m0 = shape_operator(&orbit, &xi0, &tol).unwrap().matrix;
        let m1 = shape_operator(&orbit, &xi1, &tol).unwrap().matrix;
        let mm = shape_operator(&orbit, &mixed, &tol).unwrap().matrix;
        for i in 0..mm.len() {
            for j in 0..mm.len() {
                let want = a * m0[i][j] + bb * m1[i][j];
                assert!((mm[i][j] - want).abs() <= 1e-10);
            }
        }
    }
}

fn unit_coord(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

#[test]
fn connection_identity_on_every_two_step_string() {
    // nabla_{phi_xi(X)} xi = -(|nu|/2) X within 1e-10 for every minimum-level
    // pair with a two-member string, in every realized space.
    let b = battery();
    for d in b.spaces() {
        let sys = &d.system;
        for nu_r in d.positive_roots() {
            for gam_r in d.positive_roots() {
                let nu = &nu_r.coeffs;
                let gamma = &gam_r.coeffs;
                if nu == gamma {
                    continue;
                }
                let Ok(a) = sys.cartan_integer(nu, gamma) else { continue };
                if a != -1 || sys.in_delta0(&gamma.sub(nu)) {
                    continue;
                }
                let xi = unit_f64(d, &nu_r.basis[0]);
                let nu_len = rat_to_f64(&sys.length_sq(nu)).sqrt();
                for x in &gam_r.basis {
                    let xf = vec_to_f64(x);
                    let up = phi_apply(d, nu, gamma, &xi, &xf).unwrap();
                    let grad = levi_civita(d, &up, &xi);
                    for (g, w) in grad.iter().zip(&xf) {
                        assert!(
                            (g + nu_len / 2.0 * w).abs() < 1e-10,
                            "{} pair ({nu}, {gamma})",
                            d.label
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn three_step_string_connection_and_isometry() {
    // A_{nu,gamma} = -2 cases (sp6 and so(2,5)): the five connection
    // identities of the three-member string.
    let b = battery();
    for d in [&b.sp6, &b.so25] {
        let sys = &d.system;
        for nu_r in d.positive_roots() {
            for gam_r in d.positive_roots() {
                let nu = &nu_r.coeffs;
                let gamma = &gam_r.coeffs;
                let Ok(a) = sys.cartan_integer(nu, gamma) else { continue };
                if nu == gamma || a != -2 || sys.in_delta0(&gamma.sub(nu)) {
                    continue;
                }
                let xi = unit_f64(d, &nu_r.basis[0]);
                let nu_len = rat_to_f64(&sys.length_sq(nu)).sqrt();
                let c = nu_len / 2f64.sqrt();
                for x in &gam_r.basis {
                    let xf = vec_to_f64(x);
                    // (i) nabla_X xi = -c phi(X)
                    let phi_x = phi_apply(d, nu, gamma, &xi, &xf).unwrap();
                    let g1 = levi_civita(d, &xf, &xi);
                    for (g, w) in g1.iter().zip(&phi_x) {
                        assert!((g + c * w).abs() < 1e-10, "{}", d.label);
                    }
                    // (ii) nabla_{phi(X)} xi = -c (X + phi^2 X), with
                    // phi^2 = (1/(2 |nu|^2)) ad(xi)^2 under the A = -2
                    // normalization
                    let num = d.numeric();
                    let raw2 = num.bracket_f64(&xi, &num.bracket_f64(&xi, &xf));
                    let phi2: Vec<f64> =
                        raw2.iter().map(|v| v / (2.0 * nu_len * nu_len)).collect();
                    let g2 = levi_civita(d, &phi_x, &xi);
                    for ((g, x0), p2) in g2.iter().zip(&xf).zip(&phi2) {
                        assert!((g + c * (x0 + p2)).abs() < 1e-10, "{}", d.label);
                    }
                    // (iii) nabla_{phi^2 X} xi = -c phi(X)
                    let g3 = levi_civita(d, &phi2, &xi);
                    for (g, w) in g3.iter().zip(&phi_x) {
                        assert!((g + c * w).abs() < 1e-10, "{}", d.label);
                    }
                    // (iv) phi^2 is an isometry onto g_{gamma+2nu}
                    let n_in = num.metric_an_f64(&xf, &xf);
                    let n_out = num.metric_an_f64(&phi2, &phi2);
                    assert!((n_in - n_out).abs() < 1e-10);
                }
                // (v) nabla_W xi = 0 for W in g_{gamma+nu} minus phi(g_gamma)
                let mid = gamma.add(nu);
                let mid_r = d.root(&mid).unwrap();
                if mid_r.basis.len() > gam_r.basis.len() {
                    let num = d.numeric();
                    // W: project out phi(g_gamma) from each mid basis vector
                    let imgs: Vec<Vec<f64>> = gam_r
                        .basis
                        .iter()
                        .map(|x| {
                            let xf = vec_to_f64(x);
                            let v = phi_apply(d, nu, gamma, &xi, &xf).unwrap();
                            let n = num.metric_an_f64(&v, &v).sqrt();
                            v.iter().map(|t| t / n).collect()
                        })
                        .collect();
                    for w0 in &mid_r.basis {
                        let mut w = vec_to_f64(w0);
                        for img in &imgs {
                            let c0 = num.metric_an_f64(&w, img);
                            for (a, b2) in w.iter_mut().zip(img) {
                                *a -= c0 * b2;
                            }
                        }
                        let n2 = num.metric_an_f64(&w, &w);
                        if n2 < 1e-20 {
                            continue;
                        }
                        let grad = levi_civita(d, &w, &xi);
                        let g2 = num.metric_an_f64(&grad, &grad);
                        assert!(g2 < 1e-20, "{}: residual {g2}", d.label);
                    }
                }
            }
        }
    }
}

#[test]
fn phi_leg_commutation_float_form() {
    // (phi_next . phi_k)(Y) = 2 (phi_k . phi_next)(Y) on Y in phi_k(g_lambda),
    // with both phi factors carrying the 1/(sqrt2 |a0|) normalization of
    // their three-member strings.
    let b = battery();
    let d = &b.sp6;
    let lambda = RootVector::new(vec![0, 0, 1]); // the long root starting the class
    let a0 = d.system.simple_roots[0].clone();
    let a1 = d.system.simple_roots[1].clone();
    // xi_k is the simple root with nonzero product against lambda
    let (k_root, next_root) = if d.system.inner(&lambda, &a0) == cpc_core::linalg::rint(0) {
        (a1.clone(), a0.clone())
    } else {
        (a0.clone(), a1.clone())
    };
    let xi_k = unit_f64(d, &d.root(&k_root).unwrap().basis[0]);
    let xi_next = unit_f64(d, &d.root(&next_root).unwrap().basis[0]);
    let num = d.numeric();
    let len = rat_to_f64(&d.system.length_sq(&a0)).sqrt();
    let scale = 1.0 / (2f64.sqrt() * len);
    for x in &d.root(&lambda).unwrap().basis {
        let y = num.bracket_f64(&xi_k, &vec_to_f64(x));
        let lhs: Vec<f64> = num
            .bracket_f64(&xi_next, &num.bracket_f64(&xi_k, &y))
            .iter()
            .map(|v| v * scale * scale)
            .collect();
        let rhs: Vec<f64> = num
            .bracket_f64(&xi_k, &num.bracket_f64(&xi_next, &y))
            .iter()
            .map(|v| 2.0 * v * scale * scale)
            .collect();
        for (l, r) in lhs.iter().zip(&rhs) {
            assert!((l - r).abs() < 1e-10);
        }
    }
}

#[test]
fn six_by_six_block_matrix_entrywise() {
    // The six-member string block, reproduced entry by entry over the basis
    // X, phi_k X, phi_k^2 X, phi_{k+1} phi_k X, phi_{k+1} phi_k^2 X,
    // phi_{k+1}^2 phi_k^2 X, where each phi leg carries the isometric
    // normalization of its own string.
    let b = battery();
    let d = &b.sp6;
    let orbit = line_orbit(d, &[0, 1]);
    let lambda = RootVector::new(vec![0, 0, 1]);
    let a0 = d.system.simple_roots[0].clone();
    let a1 = d.system.simple_roots[1].clone();
    let (k_root, next_root) = if d.system.inner(&lambda, &a0) == cpc_core::linalg::rint(0) {
        (a1.clone(), a0.clone())
    } else {
        (a0.clone(), a1.clone())
    };
    let num = d.numeric();
    let xi_k = unit_f64(d, &d.root(&k_root).unwrap().basis[0]);
    let xi_next = unit_f64(d, &d.root(&next_root).unwrap().basis[0]);
    let x = unit_f64(d, &d.root(&lambda).unwrap().basis[0]);

    // scalars: the two-step strings are A = -2, the cross legs A = -1
    let s_k = cpc_core::geometry::phi_scalar(d, &k_root, &lambda).unwrap();
    let mid = lambda.add(&k_root);
    let s_next_cross = cpc_core::geometry::phi_scalar(d, &next_root, &mid).unwrap();
    let top2 = lambda.add(&k_root.scaled(2));
    let s_next = cpc_core::geometry::phi_scalar(d, &next_root, &top2).unwrap();
    let ad = |xi: &[f64], v: &[f64], s: f64| -> Vec<f64> {
        num.bracket_f64(xi, v).iter().map(|t| t * s).collect()
    };
    let w2 = ad(&xi_k, &x, s_k);
    let w3 = ad(&xi_k, &w2, s_k);
    let w4 = ad(&xi_next, &w2, s_next_cross);
    let w5 = ad(&xi_next, &w3, s_next);
    let w6 = ad(&xi_next, &w5, s_next);
    let ws = [x.clone(), w2, w3, w4, w5, w6];
    for w in &ws {
        assert!((num.metric_an_f64(w, w) - 1.0).abs() < 1e-12, "basis vector not unit");
    }

    let tol = Tolerances::default();
    let h = rat_to_f64(&d.system.length_sq(&a0)).sqrt() / 2.0;
    let r2 = std::f64::consts::SQRT_2;
    for k in 0..9 {
        let phi = std::f64::consts::FRAC_PI_2 * k as f64 / 8.0;
        let (c, s) = (phi.cos(), phi.sin());
        let xi: Vec<f64> =
            xi_k.iter().zip(&xi_next).map(|(a, b2)| c * a + s * b2).collect();
        let op = shape_operator(&orbit, &xi, &tol).unwrap();
        let coords = |v: &[f64]| -> Vec<f64> {
            orbit.tangent.iter().map(|e| num.metric_an_f64(v, e)).collect()
        };
        let want = [
            [0.0, r2 * c, 0.0, 0.0, 0.0, 0.0],
            [r2 * c, 0.0, r2 * c, s, 0.0, 0.0],
            [0.0, r2 * c, 0.0, 0.0, r2 * s, 0.0],
            [0.0, s, 0.0, 0.0, c, 0.0],
            [0.0, 0.0, r2 * s, c, 0.0, r2 * s],
            [0.0, 0.0, 0.0, 0.0, r2 * s, 0.0],
        ];
        for (i, wi) in ws.iter().enumerate() {
            let wi_c = coords(wi);
            let mut s_wi = vec![0.0; orbit.tangent_dim()];
            for a2 in 0..orbit.tangent_dim() {
                for b2 in 0..orbit.tangent_dim() {
                    s_wi[a2] += op.matrix[b2][a2] * wi_c[b2];
                }
            }
            for (j, wj) in ws.iter().enumerate() {
                let wj_c = coords(wj);
                let got: f64 = s_wi.iter().zip(&wj_c).map(|(p, q)| p * q).sum();
                assert!(
                    (got - h * want[i][j]).abs() < 1e-10,
                    "entry ({i},{j}) at phi {phi}: got {got}, want {}",
                    h * want[i][j]
                );
            }
        }
    }
}

#[test]
fn orthogonal_pair_four_by_four_entrywise() {
    // The connecting-root block of the orthogonal removal pattern over the
    // basis X, phi_{xi0} X, phi_{xi1} X, phi_{xi1} phi_{xi0} X.
    let b = battery();
    let d = &b.sl4r;
    let v = vec![
        (
            d.system.simple_roots[0].clone(),
            vec![d.root(&d.system.simple_roots[0]).unwrap().basis[0].clone()],
        ),
        (
            d.system.simple_roots[2].clone(),
            vec![d.root(&d.system.simple_roots[2]).unwrap().basis[0].clone()],
        ),
    ];
    let orbit = OrbitModel::new(d, v).unwrap();
    let num = d.numeric();
    let r0 = d.system.simple_roots[0].clone();
    let r1 = d.system.simple_roots[2].clone();
    let gamma = d.system.simple_roots[1].clone();
    let xi0 = unit_f64(d, &d.root(&r0).unwrap().basis[0]);
    let xi1 = unit_f64(d, &d.root(&r1).unwrap().basis[0]);
    let x = unit_f64(d, &d.root(&gamma).unwrap().basis[0]);
    let w2 = phi_apply(d, &r0, &gamma, &xi0, &x).unwrap();
    let w3 = phi_apply(d, &r1, &gamma, &xi1, &x).unwrap();
    let w4 = phi_apply(d, &r1, &gamma.add(&r0), &xi1, &w2).unwrap();
    let ws = [x, w2, w3, w4];
    for w in &ws {
        assert!((num.metric_an_f64(w, w) - 1.0).abs() < 1e-12);
    }
    let tol = Tolerances::default();
    let h = rat_to_f64(&d.system.length_sq(&r0)).sqrt() / 2.0;
    for k in 0..9 {
        let phi = std::f64::consts::FRAC_PI_2 * k as f64 / 8.0;
        let (c, s) = (phi.cos(), phi.sin());
        let xi: Vec<f64> = xi0.iter().zip(&xi1).map(|(a, b2)| c * a + s * b2).collect();
        let op = shape_operator(&orbit, &xi, &tol).unwrap();
        let coords = |v: &[f64]| -> Vec<f64> {
            orbit.tangent.iter().map(|e| num.metric_an_f64(v, e)).collect()
        };
        let want = [
            [0.0, c, s, 0.0],
            [c, 0.0, 0.0, s],
            [s, 0.0, 0.0, c],
            [0.0, s, c, 0.0],
        ];
        for (i, wi) in ws.iter().enumerate() {
            let wi_c = coords(wi);
            let mut s_wi = vec![0.0; orbit.tangent_dim()];
            for a2 in 0..orbit.tangent_dim() {
                for b2 in 0..orbit.tangent_dim() {
                    s_wi[a2] += op.matrix[b2][a2] * wi_c[b2];
                }
            }
            for (j, wj) in ws.iter().enumerate() {
                let wj_c = coords(wj);
                let got: f64 = s_wi.iter().zip(&wj_c).map(|(p, q)| p * q).sum();
                assert!(
                    (got - h * want[i][j]).abs() < 1e-10,
                    "entry ({i},{j}) at phi {phi}: got {got}, want {}",
                    h * want[i][j]
                );
            }
        }
    }
}

#[test]
fn string_invariance_leakage() {
    let b = battery();
    for d in [&b.sl4r, &b.sp6] {
        let orbit = line_orbit(d, &[0, 1]);
        let tol = Tolerances::default();
        for phi_i in 0..5 {
            let phi = std::f64::consts::FRAC_PI_2 * phi_i as f64 / 4.0;
            let xi = orbit.normal_from_coords(&[phi.cos(), phi.sin()]);
            for ci in 0..orbit.classes.len() {
                let block = string_block(&orbit, &xi, ci, &tol).unwrap();
                assert!(block.leakage <= 1e-9, "{} class {ci}", d.label);
            }
        }
    }
}

#[test]
fn abstract_block_matches_realized_len3_block() {
    let b = battery();
    let d = &b.sl4r;
    let orbit = line_orbit(d, &[0, 1]);
    let tol = Tolerances::default();
    let len3_idx = orbit
        .classes
        .iter()
        .position(|c| c.kind == ClassKind::Len3)
        .expect("len3 class exists");
    for phi_i in 0..9 {
        let phi = std::f64::consts::FRAC_PI_2 * phi_i as f64 / 8.0;
        let xi = orbit.normal_from_coords(&[phi.cos(), phi.sin()]);
        let realized = string_block(&orbit, &xi, len3_idx, &tol).unwrap();
        let abstract_block =
            obstruction_block(BlockKind::CaseIi3x3, phi, 2f64.sqrt()).unwrap();
        let dev =
            cpc_core::eigen::spectrum_distance(&realized.spectrum, &abstract_block.spectrum);
        assert!(dev <= 1e-9, "phi {phi}: {dev}");
    }
}

#[test]
fn characterisation_three_by_three_block() {
    // On the span of X, phi_{xi1}(X), phi_{theta xi0}(phi_{xi1}(X)) the shape
    // operator has matrix (1/sqrt2) [[0,sin,0],[sin,0,cos],[0,cos,0]].
    let b = battery();
    for d in [&b.sl3c, &b.sl3h] {
        let orbit = line_orbit(d, &[0, 1]);
        let a0 = d.system.simple_roots[0].clone();
        let a1 = d.system.simple_roots[1].clone();
        let num = d.numeric();
        // xi0, xi1: the removed unit lines; X in T_0 (orthogonal complement
        // of xi0 inside g_{a0}).
        let (v0_root, range0) = &orbit.normal_groups[0];
        let xi0_coords = unit_coord(orbit.normal_dim(), range0.start);
        let xi0 = orbit.normal_from_coords(&xi0_coords);
        let other = orbit
            .normal_groups
            .iter()
            .find(|(r, _)| r != v0_root)
            .unwrap()
            .1
            .clone();
        let xi1 = orbit.normal_from_coords(&unit_coord(orbit.normal_dim(), other.start));
        // X: a unit tangent vector in the same root space as xi0.
        let (x_root, other_root) =
            if *v0_root == a0 { (a0.clone(), a1.clone()) } else { (a1.clone(), a0.clone()) };
        let x_range = orbit
            .root_tangent_ranges
            .iter()
            .find(|(r, _)| *r == x_root)
            .unwrap()
            .1
            .clone();
        let x = orbit.tangent[x_range.start].clone();
        // w1 = phi_{xi1}(X) in g_{a0+a1}; w2 = phi_{theta xi0}(w1) in the
        // other simple root space.
        let w1 = phi_apply(d, &other_root, &x_root, &xi1, &x).unwrap();
        let w2 = phi_theta_apply(d, &x_root, &other_root, &xi0, &w1).unwrap();
        // normalize (phi maps are isometries, but renormalize to be safe)
        let n1 = num.metric_an_f64(&w1, &w1).sqrt();
        let w1: Vec<f64> = w1.iter().map(|v| v / n1).collect();
        let n2 = num.metric_an_f64(&w2, &w2).sqrt();
        let w2: Vec<f64> = w2.iter().map(|v| v / n2).collect();
        let tol = Tolerances::default();
        for phi_i in 0..5 {
            let phi = std::f64::consts::FRAC_PI_2 * phi_i as f64 / 4.0;
            let xi: Vec<f64> =
                xi0.iter().zip(&xi1).map(|(a, b2)| phi.cos() * a + phi.sin() * b2).collect();
            let op = shape_operator(&orbit, &xi, &tol).unwrap();
            // matrix entries over the w-basis via tangent coordinates
            let coords = |v: &[f64]| -> Vec<f64> {
                orbit.tangent.iter().map(|e| num.metric_an_f64(v, e)).collect()
            };
            let ws = [coords(&x), coords(&w1), coords(&w2)];
            let mut m = [[0.0f64; 3]; 3];
            for (i, wi) in ws.iter().enumerate() {
                // S wi in tangent coordinates
                let mut s_wi = vec![0.0; orbit.tangent_dim()];
                for a2 in 0..orbit.tangent_dim() {
                    for b2 in 0..orbit.tangent_dim() {
                        s_wi[a2] += op.matrix[b2][a2] * wi[b2];
                    }
                }
                for (j, wj) in ws.iter().enumerate() {
                    m[i][j] = s_wi.iter().zip(wj).map(|(p, q)| p * q).sum();
                }
            }
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let want = [
                [0.0, s * phi.sin(), 0.0],
                [s * phi.sin(), 0.0, s * phi.cos()],
                [0.0, s * phi.cos(), 0.0],
            ];
            for i in 0..3 {
                for j in 0..3 {
                    assert!(
                        (m[i][j] - want[i][j]).abs() < 1e-10,
                        "{} phi {phi}: {:?}",
                        d.label,
                        m
                    );
                }
            }
        }
    }
}

#[test]
fn auxiliar_subspace_identities_exact() {
    // With equal dims, phi_{xi0}(V1) = phi_{xi1}(V0) = [V0, V1] and
    // phi_{xi0}(T1) = phi_{xi1}(T0) = [V0, T1] = [V1, T0], as exact spans
    // (the phi scalars drop out of span comparisons).
    let b = battery();
    for d in [&b.sl3c, &b.sl3h] {
        let a0 = d.system.simple_roots[0].clone();
        let a1 = d.system.simple_roots[1].clone();
        let g0 = d.root(&a0).unwrap().basis.clone();
        let g1 = d.root(&a1).unwrap().basis.clone();
        let v0 = vec![g0[0].clone()];
        let v1 = vec![g1[0].clone()];
        let t0: Vec<RatVec> = g0[1..].to_vec();
        let t1: Vec<RatVec> = g1[1..].to_vec();
        let alg = &d.alg;
        let span_eq = |a: &[RatVec], b2: &[RatVec]| -> bool {
            let ra = span_rank(a);
            let rb = span_rank(b2);
            let mut joint = a.to_vec();
            joint.extend(b2.to_vec());
            ra == rb && span_rank(&joint) == ra
        };
        let bracket_span = |us: &[RatVec], vs: &[RatVec]| -> Vec<RatVec> {
            let mut out = Vec::new();
            for u in us {
                for v in vs {
                    out.push(alg.bracket(u, v));
                }
            }
            out
        };
        // phi_{xi0}(V1) = [xi0, V1] up to scalar
        let phi0_v1 = bracket_span(&v0, &v1);
        let phi1_v0 = bracket_span(&v1, &v0);
        let v0v1 = bracket_span(&v0, &v1);
        assert!(span_eq(&phi0_v1, &v0v1));
        assert!(span_eq(&phi1_v0, &v0v1));
        let phi0_t1 = bracket_span(&v0, &t1);
        let phi1_t0 = bracket_span(&v1, &t0);
        assert!(span_eq(&phi0_t1, &phi1_t0));
        assert!(span_eq(&phi0_t1, &bracket_span(&t1, &v0)));
        // and the two pieces are complementary inside g_{a0+a1}
        let top = a0.add(&a1);
        let mut joint = phi0_v1.clone();
        joint.extend(phi0_t1.clone());
        assert_eq!(span_rank(&joint), d.root(&top).unwrap().basis.len());
    }
}

#[test]
fn auxiliar_dimension_bound_on_cpc_instances() {
    // Every CPC instance found by scanning obeys dim T_k >= dim V_k when
    // T_k is nonzero.
    let b = battery();
    let d = &b.sl3h;
    let cfg = SweepConfig {
        seed: 31,
        fail_fast: true,
        random_count: 12,
        grid_points: 9,
        ..Default::default()
    };
    // dims (2,2): CPC instances exist (complex pairs); all have T = 2 >= 2.
    let rep = codimension_scan(d, 0, 1, (2, 2), 40, 31, &cfg).unwrap();
    assert_eq!(rep.mismatches, 0);
    // the bound dim T >= dim V is violated only for dims (3,3), which the
    // scan shows never pass
    let rep33 = codimension_scan(d, 0, 1, (3, 3), 40, 31, &cfg).unwrap();
    assert_eq!(rep33.characterization_passes, 0);
    assert_eq!(rep33.sweep_passes, 0);
}

#[test]
fn normalizer_contains_k0_annihilator_and_is_monotone() {
    let b = battery();
    let d = &b.sl3h;
    let (spec, _) = complex_lines_scenario(d, 0, 1).unwrap();
    let orbit = spec.build_orbit(d).unwrap();
    // every k0 annihilator element normalizes (1-theta)s by definition
    let ann = cpc_core::construct::k0_annihilator_of_v(&orbit);
    let alg = &d.alg;
    for z in &ann {
        for u in &orbit.tangent_pre {
            let w = cpc_core::linalg::vec_sub(u, &alg.theta_vec(u));
            let img = alg.bracket(z, &w);
            // [Z, (1-theta)u] must stay inside (1-theta)s
            let mut gens: Vec<RatVec> = orbit
                .tangent_pre
                .iter()
                .map(|t| cpc_core::linalg::vec_sub(t, &alg.theta_vec(t)))
                .collect();
            let before = span_rank(&gens);
            gens.push(img.clone());
            assert_eq!(span_rank(&gens), before, "annihilator leaves (1-theta)s");
        }
    }
    // proper removal: not transitive; full removal: transitive
    let rep = normalizer_check(&orbit, 3).unwrap();
    assert!(!rep.transitive_possible);
    let a0 = d.system.simple_roots[0].clone();
    let a1 = d.system.simple_roots[1].clone();
    let full = build_case_ii(
        d,
        0,
        1,
        d.root(&a0).unwrap().basis.clone(),
        d.root(&a1).unwrap().basis.clone(),
    )
    .unwrap();
    let rep_full = normalizer_check(&full, 3).unwrap();
    assert!(rep_full.transitive_possible);
}

#[test]
fn cpc_examples_are_austere_and_minimal() {
    let b = battery();
    let tol = Tolerances::default();
    for (d, roots) in [(&b.sl3c, vec![0usize, 1]), (&b.sl4r, vec![0, 1])] {
        let orbit = line_orbit(d, &roots);
        let cfg = SweepConfig { seed: 17, ..Default::default() };
        let verdict = cpc_sweep(&orbit, &cfg).unwrap();
        assert!(verdict.is_cpc);
        for coords in sample_directions(orbit.normal_dim(), &cfg).iter().take(8) {
            let xi = orbit.normal_from_coords(coords);
            let rep = principal_curvatures(&orbit, &xi, &tol).unwrap();
            let (austere, minimal) = cpc_core::geometry::austere_minimal_check(&rep);
            assert!(austere && minimal);
        }
    }
}

#[test]
fn random_v_pairs_match_characterization_in_sl3c() {
    let b = battery();
    let cfg = SweepConfig {
        seed: 23,
        fail_fast: true,
        random_count: 16,
        grid_points: 9,
        ..Default::default()
    };
    let rep =
        cpc_core::construct::equivalence_scan(&b.sl3c, 0, 1, 40, 23, &cfg).unwrap();
    assert_eq!(rep.mismatches, 0);
    assert!(rep.sweep_passes > 0);
    assert!(rep.sweep_passes < 40);
}

#[test]
fn non_split_removal_patterns_break_closure() {
    // A removal V inside the sum of the simple root spaces that is not a
    // per-root sum: s = a + (n minus V) fails to close under the bracket.
    // Randomized diagonal lines across the two simple spaces.
    use rand::{Rng, SeedableRng};
    let b = battery();
    for d in [&b.sl3c, &b.sl3h] {
        let a0 = d.system.simple_roots[0].clone();
        let a1 = d.system.simple_roots[1].clone();
        let g0 = d.root(&a0).unwrap().basis.clone();
        let g1 = d.root(&a1).unwrap().basis.clone();
        let alg = &d.alg;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..6 {
            // diagonal vector with nonzero parts in both simple root spaces
            let mut v = cpc_core::linalg::zero_vec(d.dim());
            let c0 = rng.gen_range(1i64..=5);
            let c1 = rng.gen_range(1i64..=5);
            cpc_core::linalg::vec_axpy(&mut v, &cpc_core::linalg::rint(c0), &g0[0]);
            cpc_core::linalg::vec_axpy(&mut v, &cpc_core::linalg::rint(c1), &g1[0]);
            // s = a + (n minus R v): v-orthogonal parts of the simple
            // spaces, all other root spaces in full
            let mut s_basis: Vec<RatVec> = d.a_basis.clone();
            let vv = d.metric_an(&v, &v);
            for r in d.positive_roots() {
                for w in &r.basis {
                    if r.coeffs == a0 || r.coeffs == a1 {
                        let c = d.metric_an(w, &v);
                        let mut adj = w.clone();
                        if c != cpc_core::linalg::rint(0) {
                            cpc_core::linalg::vec_axpy(&mut adj, &(-(c / vv.clone())), &v);
                        }
                        if !cpc_core::linalg::is_zero_vec(&adj) {
                            s_basis.push(adj);
                        }
                    } else {
                        s_basis.push(w.clone());
                    }
                }
            }
            let s_span = cpc_core::linalg::SpanSolver::new(&s_basis);
            assert_eq!(s_span.rank(), d.an_dim() - 1);
            let mut closed = true;
            'outer: for i in 0..s_basis.len() {
                for j in (i + 1)..s_basis.len() {
                    let br = alg.bracket(&s_basis[i], &s_basis[j]);
                    if !cpc_core::linalg::is_zero_vec(&br) && !s_span.contains(&br) {
                        closed = false;
                        break 'outer;
                    }
                }
            }
            assert!(!closed, "{}: diagonal removal unexpectedly closed", d.label);
        }
    }
}

#[test]
fn unbalanced_dims_never_characterize() {
    let b = battery();
    let d = &b.sl3h;
    let a0 = d.system.simple_roots[0].clone();
    let a1 = d.system.simple_roots[1].clone();
    let v0 = vec![d.root(&a0).unwrap().basis[0].clone()];
    let v1 = d.root(&a1).unwrap().basis[..2].to_vec();
    let rep = characterization_check(d, &v0, &v1);
    assert!(!rep.passes);
    assert_eq!((rep.dim_v0, rep.dim_v1), (1, 2));
}
