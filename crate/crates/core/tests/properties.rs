mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use serendip::assemble::{
    apply_bc, assemble_bilinear, assemble_coboundary, assemble_load, BcMode, BilinearForm, CsrMatrix,
};
use serendip::cli::{global_dof_count, maxwell_level, poisson_level, read_rows, write_rows, ExperimentRow, MaxwellOptions, RunConfig};
use serendip::mesh::{boundary_dofs, global_numbering, BoxMesh, TraceKind};
use serendip::poly::{gauss_legendre, gauss_rule, legendre};
use serendip::refelem::{build_element, ElementName, Family};
use serendip::solve::{eig_dense, eig_shift_invert_with, EigenOptions};

use common::FAMILIES;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exterior_derivative_squares_to_zero(seed in any::<u64>(), n in 2usize..=3, deg in 0usize..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        for k in 0..n - 1 {
            let w = common::random_form(&mut rng, n, k, deg);
            let dd = w.exterior_derivative().unwrap().exterior_derivative().unwrap();
            prop_assert!(dd.is_zero());
        }
    }

    #[test]
    fn legendre_bounded_by_one(j in 0usize..30, x in -1.0f64..=1.0) {
        prop_assert!(legendre(j, x).abs() <= 1.0 + 1e-12);
        prop_assert!((legendre(j, 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_rule_exact_to_degree(m in 1usize..12, a in 0u32..24, b in 0u32..24) {
        let (a, b) = (a % (2 * m as u32), b % (2 * m as u32));
        let q = gauss_rule(2, m);
        let got = q.integrate(|x| x[0].powi(a as i32) * x[1].powi(b as i32));
        let mono = |p: u32| if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
        prop_assert!((got - mono(a) * mono(b)).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip(rows in prop::collection::vec((1usize..200, 0.0f64..1.0, 0.0f64..10.0, 0.0f64..10.0), 1..8)) {
        let mut rows: Vec<ExperimentRow> = rows
            .into_iter()
            .enumerate()
            .map(|(i, (dofs, error, a, s))| ExperimentRow {
                h: 1.0 / (i + 1) as f64,
                dofs,
                error,
                time: a + s,
                rate: None,
                assembly_time: a,
                solve_time: s,
            })
            .collect();
        serendip::cli::fill_rates(&mut rows);
        let mut buf = Vec::new();
        write_rows(&mut buf, &rows).unwrap();
        prop_assert_eq!(read_rows(&buf[..]).unwrap(), rows);
    }
}

#[test]
fn gauss_weights_sum_to_interval_length() {
    for m in 1..20 {
        let (_, w) = gauss_legendre(m);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
    }
}

#[test]
fn traces_are_continuous_across_cells() {
    for family in FAMILIES {
        for n in 2..=3 {
            for k in 0..n {
                for r in 1..=4 {
                    let j = common::conformity_jump(family, n, k, r);
                    assert!(j <= 1e-11, "{family} n={n} k={k} r={r}: jump {j:e}");
                }
            }
        }
    }
}

#[test]
fn exterior_derivative_maps_into_next_space() {
    for family in FAMILIES {
        for n in 2..=3 {
            for k in 0..n {
                for r in 1..=3 {
                    let res = common::coboundary_residual(family, n, k, r);
                    assert!(res <= 1e-10, "{family} n={n} k={k} r={r}: residual {res:e}");
                }
            }
        }
    }
}

#[test]
fn polynomials_are_reproduced() {
    for family in FAMILIES {
        for n in 2..=3 {
            for k in 0..=n {
                for r in 1..=3 {
                    let e = common::reproduction_error(family, n, k, r, 100 + r as u64);
                    assert!(e <= 1e-10, "{family} n={n} k={k} r={r}: error {e:e}");
                }
            }
        }
    }
}

#[test]
fn reference_gram_is_well_conditioned() {
    for family in FAMILIES {
        for n in 2..=3 {
            for k in 0..=n {
                for r in 1..=6 {
                    let s = common::smallest_gram_eigenvalue(family, n, k, r);
                    assert!(s > 1e-10, "{family} n={n} k={k} r={r}: smallest eigenvalue {s:e}");
                }
            }
        }
    }
}

fn dense_min_eigenvalue(a: &CsrMatrix) -> f64 {
    a.to_dense().symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

#[test]
fn mass_matrices_are_spd_and_operators_symmetric() {
    for family in FAMILIES {
        for n in 2..=3 {
            let mesh = BoxMesh::uniform(n, 2).unwrap();
            for k in 0..=n {
                let e = build_element(family, n, k, 2).unwrap();
                let map = global_numbering(&mesh, &e).unwrap();
                let m = assemble_bilinear(&mesh, &map, &map, BilinearForm::Mass).unwrap();
                assert!(m.max_asymmetry() < 1e-13);
                assert!(dense_min_eigenvalue(&m) > 0.0, "{family} n={n} k={k}");
                let form = match k {
                    0 => Some(BilinearForm::GradGrad),
                    _ if k == n => None,
                    _ if k == n - 1 => Some(BilinearForm::DivDiv),
                    _ => Some(BilinearForm::CurlCurl),
                };
                if let Some(f) = form {
                    let a = assemble_bilinear(&mesh, &map, &map, f).unwrap();
                    assert!(a.max_asymmetry() < 1e-12, "{family} n={n} k={k}");
                    assert!(dense_min_eigenvalue(&a) > -1e-10);
                }
            }
        }
    }
}

/// The stiffness of `d` equals `Dᵀ M D` with `D` the global coboundary.
#[test]
fn stiffness_commutes_with_coboundary() {
    for family in FAMILIES {
        for n in 2..=3 {
            let mesh = BoxMesh::uniform(n, 2).unwrap();
            for (k, form) in [(0, BilinearForm::GradGrad), (1, BilinearForm::CurlCurl), (n - 1, BilinearForm::DivDiv)] {
                if n == 2 && k == 1 && form == BilinearForm::CurlCurl {
                    continue;
                }
                let ek = build_element(family, n, k, 2).unwrap();
                let ek1 = build_element(family, n, k + 1, 2).unwrap();
                let (mk, mk1) = (global_numbering(&mesh, &ek).unwrap(), global_numbering(&mesh, &ek1).unwrap());
                let a = assemble_bilinear(&mesh, &mk, &mk, form).unwrap();
                let d = assemble_coboundary(&mesh, &mk, &mk1).unwrap();
                let m = assemble_bilinear(&mesh, &mk1, &mk1, BilinearForm::Mass).unwrap();
                let dmd = d.transpose().matmul(&m.matmul(&d));
                let diff = a.add_scaled(&dmd, -1.0);
                let scale = a.data.iter().fold(0.0f64, |s, v| s.max(v.abs()));
                let err = diff.data.iter().fold(0.0f64, |s, v| s.max(v.abs())) / scale;
                assert!(err < 1e-11, "{family} n={n} k={k}: {err:e}");
            }
        }
    }
}

#[test]
fn assembly_is_deterministic() {
    let e = build_element(Family::TrimmedSerendipity, 3, 1, 3).unwrap();
    let mesh = BoxMesh::uniform(3, 3).unwrap();
    let run = || {
        let map = global_numbering(&mesh, &e).unwrap();
        let a = assemble_bilinear(&mesh, &map, &map, BilinearForm::CurlCurl).unwrap();
        let b = assemble_load(&mesh, &map, &|x| vec![x[0].sin(), x[1] * x[2], 1.0]);
        (a, b)
    };
    let (a1, b1) = run();
    let (a2, b2) = run();
    assert_eq!(a1, a2);
    assert_eq!(b1, b2);
}

#[test]
fn numbering_matches_entity_counts() {
    for family in FAMILIES {
        for n in 2..=3 {
            for k in 0..=n {
                for r in 1..=3 {
                    let e = build_element(family, n, k, r).unwrap();
                    let mesh = BoxMesh::new(n, &[3, 2, 4][..n]).unwrap();
                    let map = global_numbering(&mesh, &e).unwrap();
                    assert_eq!(map.total, global_dof_count(&mesh, &e));
                    let mut seen = vec![false; map.total];
                    for c in 0..mesh.num_cells() {
                        for &d in map.cell_dofs(c) {
                            seen[d] = true;
                        }
                    }
                    assert!(seen.iter().all(|&s| s));
                }
            }
        }
    }
}

#[test]
fn maxwell_spectrum_is_nonnegative() {
    let mesh = BoxMesh::uniform(3, 2).unwrap();
    for family in FAMILIES {
        let e = build_element(family, 3, 1, 2).unwrap();
        let map = global_numbering(&mesh, &e).unwrap();
        let a = assemble_bilinear(&mesh, &map, &map, BilinearForm::CurlCurl).unwrap();
        let m = assemble_bilinear(&mesh, &map, &map, BilinearForm::Mass).unwrap();
        let bnd = boundary_dofs(&mesh, &map, TraceKind::Tangential).unwrap();
        let zero = vec![0.0; map.total];
        let (sa, sm) = (
            apply_bc(&a, &zero, &bnd, BcMode::Eliminate),
            apply_bc(&m, &zero, &bnd, BcMode::Eliminate),
        );
        let (vals, _) = eig_dense(&sa.matrix.to_dense(), &sm.matrix.to_dense()).unwrap();
        assert!(vals[0] >= -1e-9, "{family}: {}", vals[0]);
    }
}

#[test]
fn shift_invert_agrees_with_dense() {
    let opts = MaxwellOptions {
        repeats: 1,
        warmup: false,
        ..MaxwellOptions::default()
    };
    let sparse = maxwell_level(Family::TrimmedSerendipity, 2, 4, &opts).unwrap();
    for (v, r) in sparse.eigenvalues.iter().zip(&sparse.residuals) {
        assert!(*r <= 10.0 * opts.tol, "residual {r:e} for {v}");
    }
    let mesh = BoxMesh::uniform(3, 4).unwrap();
    let e = build_element(Family::TrimmedSerendipity, 3, 1, 2).unwrap();
    let map = global_numbering(&mesh, &e).unwrap();
    let pi2 = std::f64::consts::PI.powi(2);
    let a = assemble_bilinear(&mesh, &map, &map, BilinearForm::CurlCurl).unwrap().scale(1.0 / pi2);
    let m = assemble_bilinear(&mesh, &map, &map, BilinearForm::Mass).unwrap();
    let bnd = boundary_dofs(&mesh, &map, TraceKind::Tangential).unwrap();
    let zero = vec![0.0; map.total];
    let sa = apply_bc(&a, &zero, &bnd, BcMode::Eliminate);
    let sm = apply_bc(&m, &zero, &bnd, BcMode::Eliminate);
    let (dense, _) = eig_dense(&sa.matrix.to_dense(), &sm.matrix.to_dense()).unwrap();
    // the nonzero spectrum sorted by distance to the target
    let mut near: Vec<f64> = dense.iter().cloned().filter(|v| *v > 1e-6).collect();
    near.sort_by(|a, b| (a - 3.0).abs().total_cmp(&(b - 3.0).abs()));
    let mut near: Vec<f64> = near[..sparse.eigenvalues.len()].to_vec();
    near.sort_by(f64::total_cmp);
    for (s, d) in sparse.eigenvalues.iter().zip(&near) {
        assert!((s - d).abs() / d <= 1e-8, "{s} vs {d}");
    }
    // without deflation the kernel directions are simply far from the shift
    let mut o = EigenOptions::new(3.0, 5, 1e-9);
    o.block = 6;
    let plain = eig_shift_invert_with(&sa.matrix, &sm.matrix, &o).unwrap();
    for (s, d) in plain.eigenvalues.iter().zip(&near) {
        assert!((s - d).abs() / d <= 1e-8, "{s} vs {d}");
    }
}

#[test]
fn poisson_energy_identity() {
    for name in [ElementName::S, ElementName::Lagrange] {
        for mode in [BcMode::DiagOne, BcMode::Eliminate] {
            let spec = name.resolve(2, 3).unwrap();
            let cfg = RunConfig {
                bc_mode: mode,
                ..RunConfig::single()
            };
            let f = |x: &[f64]| 1.0 + x[0] * x[1];
            let (_, x, sys) = poisson_level(2, &spec, 6, &f, &|_| 0.0, &cfg).unwrap();
            let xr = sys.restrict(&x);
            let ax = sys.matrix.mul_vec(&xr);
            let xax: f64 = xr.iter().zip(&ax).map(|(a, b)| a * b).sum();
            let xb: f64 = xr.iter().zip(&sys.rhs).map(|(a, b)| a * b).sum();
            assert!(((xax - xb) / xb).abs() <= 1e-10, "{name} {mode:?}");
        }
    }
}
