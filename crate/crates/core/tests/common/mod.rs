#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use serendip::assemble::{assemble_bilinear, assembly_points, assemble_load, l2_error, BilinearForm, PushForward, SparseSystem};
use serendip::mesh::{global_numbering, BoxMesh};
use serendip::poly::{form_components, gauss_rule, integer, PolyForm, Polynomial};
use serendip::refelem::{build_element, coboundary_fit, reference_gram, tabulate, Family};
use serendip::solve::solve_spd;

pub const FAMILIES: [Family; 2] = [Family::TrimmedSerendipity, Family::TensorProduct];

/// Largest jump of the trace of any global basis function across the
/// interface of a two-cell mesh, over every split direction.
pub fn conformity_jump(family: Family, n: usize, k: usize, r: usize) -> f64 {
    let e = build_element(family, n, k, r).unwrap();
    let comps = form_components(n, k);
    let mut worst = 0.0f64;
    for axis in 0..n {
        let mut div = vec![1; n];
        div[axis] = 2;
        let mesh = BoxMesh::new(n, &div).unwrap();
        let map = global_numbering(&mesh, &e).unwrap();
        let scales = PushForward::new(&mesh).component_scales(k);
        // facet points in the reference coordinates of each cell
        let q = gauss_rule(n - 1, r + 2);
        let facet = |s: f64| -> Vec<Vec<f64>> {
            q.points
                .iter()
                .map(|p| {
                    let mut x = p[..n - 1].to_vec();
                    x.insert(axis, s);
                    x
                })
                .collect()
        };
        let (p0, p1) = (facet(1.0), facet(-1.0));
        for (a, b) in p0.iter().zip(&p1) {
            let (xa, xb) = (mesh.map_point(0, a), mesh.map_point(1, b));
            assert!((0..n).all(|i| (xa[i] - xb[i]).abs() < 1e-14));
        }
        let (t0, t1) = (tabulate(&e, &p0, 0), tabulate(&e, &p1, 0));
        let tangential: Vec<usize> = (0..comps.len()).filter(|&c| !comps[c].contains(&axis)).collect();
        let trace = |cell: usize, t: &serendip::refelem::Tabulation, g: usize, p: usize| -> Vec<f64> {
            let dofs = map.cell_dofs(cell);
            match dofs.iter().position(|&d| d == g) {
                Some(i) => {
                    let s = map.cell_signs(cell)[i] as f64;
                    tangential.iter().map(|&c| s * scales[c] * t.get(0, p, i, c)).collect()
                }
                None => vec![0.0; tangential.len()],
            }
        };
        for g in 0..map.total {
            for p in 0..p0.len() {
                let (u, v) = (trace(0, &t0, g, p), trace(1, &t1, g, p));
                for (x, y) in u.iter().zip(&v) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
    }
    worst
}

/// Random polynomial of total degree at most `deg` in `n` variables with
/// integer coefficients in `[-3, 3]`.
pub fn random_polynomial(rng: &mut StdRng, n: usize, deg: usize) -> Polynomial {
    let mut p = Polynomial::zero(n);
    let mut exps = [0u8; 3];
    let total = (deg + 1).pow(n as u32);
    for flat in 0..total {
        let mut rem = flat;
        let mut d = 0;
        for e in exps.iter_mut().take(n) {
            *e = (rem % (deg + 1)) as u8;
            d += *e as usize;
            rem /= deg + 1;
        }
        if d <= deg {
            let c: i64 = rng.random_range(-3..=3);
            if c != 0 {
                p.add_term(exps, integer(c));
            }
        }
    }
    p
}

pub fn random_form(rng: &mut StdRng, n: usize, k: usize, deg: usize) -> PolyForm {
    let comps = (0..form_components(n, k).len()).map(|_| random_polynomial(rng, n, deg)).collect();
    PolyForm::new(n, k, comps).unwrap()
}

/// `‖Π_h p - p‖` for a random `p ∈ P_{r-1}Λ^k` on a `2^n` mesh of the unit box.
pub fn reproduction_error(family: Family, n: usize, k: usize, r: usize, seed: u64) -> f64 {
    let mut rng = StdRng::seed_from_u64(seed);
    let p = random_form(&mut rng, n, k, r - 1).to_float();
    let e = build_element(family, n, k, r).unwrap();
    let mesh = BoxMesh::uniform(n, 2).unwrap();
    let map = global_numbering(&mesh, &e).unwrap();
    let f = |x: &[f64]| p.iter().map(|c| c.eval(x)).collect::<Vec<f64>>();
    let m = assemble_bilinear(&mesh, &map, &map, BilinearForm::Mass).unwrap();
    let b = assemble_load(&mesh, &map, &f);
    let x = solve_spd(&SparseSystem::unconstrained(m, b), 1e-14).unwrap();
    l2_error(&mesh, &map, &x, &f).unwrap()
}

pub fn coboundary_residual(family: Family, n: usize, k: usize, r: usize) -> f64 {
    let a = build_element(family, n, k, r).unwrap();
    let b = build_element(family, n, k + 1, r).unwrap();
    coboundary_fit(&a, &b).unwrap().residual
}

/// `d(dω)` vanishes exactly for random forms; returns the number of failures.
pub fn dd_failures(trials: usize, seed: u64) -> usize {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut bad = 0;
    for t in 0..trials {
        let n = 2 + t % 2;
        let k = rng.random_range(0..n - 1);
        let deg = rng.random_range(0..6);
        let w = random_form(&mut rng, n, k, deg);
        let dd = w.exterior_derivative().unwrap().exterior_derivative().unwrap();
        if !dd.is_zero() {
            bad += 1;
        }
    }
    bad
}

pub fn smallest_gram_eigenvalue(family: Family, n: usize, k: usize, r: usize) -> f64 {
    let e = build_element(family, n, k, r).unwrap();
    let g: DMatrix<f64> = reference_gram(&e, assembly_points(&e));
    g.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}
