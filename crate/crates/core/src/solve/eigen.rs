//! Generalized symmetric eigenproblems `A x = λ M x`.
//!
//! The sparse path runs a block Krylov method on `(A - σM)⁻¹ M` in the
//! `M`-inner product with Rayleigh–Ritz extraction on `(A, M)`. An optional
//! subspace (the discrete gradients for Maxwell problems) is projected out
//! `M`-orthogonally at every step.

use faer::Mat;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};

use super::direct::{norm, Factorization};
use crate::assemble::CsrMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct EigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `M`-normalized eigenvectors, one per eigenvalue.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `‖A x - λ M x‖ / (|λ| ‖M x‖)`; the absolute residual when `λ = 0`.
    pub residuals: Vec<f64>,
    /// Block expansion steps performed.
    pub iterations: usize,
    /// Shifted solves performed (right-hand sides).
    pub solves: usize,
}

#[derive(Clone, Debug)]
pub struct EigenOptions {
    pub target: f64,
    pub nev: usize,
    pub tol: f64,
    /// Block size; should be at least the largest expected multiplicity.
    pub block: usize,
    /// Basis size that triggers a restart.
    pub max_basis: usize,
    pub max_iterations: usize,
    /// Columns spanning a subspace to exclude (e.g. a discrete gradient).
    pub deflation: Option<CsrMatrix>,
    pub seed: u64,
}

impl EigenOptions {
    pub fn new(target: f64, nev: usize, tol: f64) -> Self {
        let block = nev.clamp(4, 8);
        Self {
            target,
            nev,
            tol,
            block,
            max_basis: (6 * nev).max(nev + 6 * block).max(48),
            max_iterations: 400,
            deflation: None,
            seed: 7,
        }
    }
}

struct Deflation {
    g: CsrMatrix,
    gt: CsrMatrix,
    gram: Factorization,
}

impl Deflation {
    fn new(g: CsrMatrix, m: &CsrMatrix) -> Result<Self> {
        let gt = g.transpose();
        let gram = gt.matmul(&m.matmul(&g));
        let gram = Factorization::cholesky(&gram)?;
        Ok(Self { g, gt, gram })
    }

    /// `x ← x - G (GᵀMG)⁻¹ Gᵀ M x`.
    fn apply(&self, x: &mut [f64], mx: &[f64]) {
        let c = self.gram.solve(&self.gt.mul_vec(mx));
        let gc = self.g.mul_vec(&c);
        x.iter_mut().zip(gc).for_each(|(xi, v)| *xi -= v);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Basis {
    v: Vec<Vec<f64>>,
    mv: Vec<Vec<f64>>,
}

impl Basis {
    /// `M`-orthonormalizes `x` against the basis (two passes) and appends it if
    /// it is not numerically dependent.
    fn push(&mut self, m: &CsrMatrix, mut x: Vec<f64>) -> bool {
        let mut mx = m.mul_vec(&x);
        let n0 = dot(&x, &mx).max(0.0).sqrt();
        if n0 == 0.0 {
            return false;
        }
        for _ in 0..2 {
            for (v, mv) in self.v.iter().zip(&self.mv) {
                let c = dot(mv, &x);
                x.iter_mut().zip(v).for_each(|(xi, vi)| *xi -= c * vi);
            }
            mx = m.mul_vec(&x);
        }
        let n1 = dot(&x, &mx).max(0.0).sqrt();
        if n1 <= 1e-10 * n0 {
            return false;
        }
        x.iter_mut().for_each(|xi| *xi /= n1);
        mx.iter_mut().for_each(|xi| *xi /= n1);
        self.v.push(x);
        self.mv.push(mx);
        true
    }
}

struct Ritz {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    residuals: Vec<f64>,
}

/// Rayleigh–Ritz on the basis; returns the `count` pairs nearest the target.
fn rayleigh_ritz(a: &CsrMatrix, basis: &Basis, target: f64, count: usize) -> Ritz {
    let k = basis.v.len();
    let av: Vec<Vec<f64>> = basis.v.iter().map(|v| a.mul_vec(v)).collect();
    let mut h = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..=i {
            let s = 0.5 * (dot(&basis.v[i], &av[j]) + dot(&basis.v[j], &av[i]));
            h[(i, j)] = s;
            h[(j, i)] = s;
        }
    }
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| {
        (eig.eigenvalues[x] - target)
            .abs()
            .total_cmp(&(eig.eigenvalues[y] - target).abs())
    });
    order.truncate(count.min(k));
    let n = basis.v[0].len();
    let mut out = Ritz {
        values: Vec::new(),
        vectors: Vec::new(),
        residuals: Vec::new(),
    };
    for &c in &order {
        let lam = eig.eigenvalues[c];
        let mut x = vec![0.0; n];
        let mut ax = vec![0.0; n];
        let mut mx = vec![0.0; n];
        for j in 0..k {
            let y = eig.eigenvectors[(j, c)];
            for i in 0..n {
                x[i] += y * basis.v[j][i];
                ax[i] += y * av[j][i];
                mx[i] += y * basis.mv[j][i];
            }
        }
        let r: Vec<f64> = ax.iter().zip(&mx).map(|(p, q)| p - lam * q).collect();
        let scale = if lam.abs() > 0.0 { lam.abs() * norm(&mx) } else { 1.0 };
        out.values.push(lam);
        out.vectors.push(x);
        out.residuals.push(norm(&r) / scale);
    }
    out
}

/// Eigenpairs of `A x = λ M x` nearest `target`.
pub fn eig_shift_invert(a: &CsrMatrix, m: &CsrMatrix, target: f64, nev: usize, tol: f64) -> Result<EigenResult> {
    eig_shift_invert_with(a, m, &EigenOptions::new(target, nev, tol))
}

pub fn eig_shift_invert_with(a: &CsrMatrix, m: &CsrMatrix, opts: &EigenOptions) -> Result<EigenResult> {
    let n = a.nrows;
    if m.nrows != n || a.ncols != n || m.ncols != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.nrows,
        });
    }
    let deflated = opts.deflation.as_ref().map_or(0, |g| g.ncols);
    if opts.nev == 0 || opts.nev + deflated > n {
        return Err(Error::InvalidInput(format!(
            "cannot compute {} eigenpairs of a problem of size {n}",
            opts.nev
        )));
    }
    let shifted = a.add_scaled(m, -opts.target);
    let fact = Factorization::lu(&shifted).map_err(|e| Error::BadShift {
        shift: opts.target,
        detail: e.to_string(),
    })?;
    let defl = match &opts.deflation {
        Some(g) => Some(Deflation::new(g.clone(), m)?),
        None => None,
    };
    let project = |x: &mut Vec<f64>| {
        if let Some(d) = &defl {
            let mx = m.mul_vec(x);
            d.apply(x, &mx);
        }
    };
    let probe = fact.solve(&vec![1.0; n]);
    if probe.iter().any(|v| !v.is_finite()) {
        return Err(Error::BadShift {
            shift: opts.target,
            detail: "shifted matrix is numerically singular".to_string(),
        });
    }
    let solves = std::cell::Cell::new(0usize);
    let op = |block: &[Vec<f64>]| -> Vec<Vec<f64>> {
        let p = block.len();
        let mut rhs = Mat::<f64>::zeros(n, p);
        for (j, x) in block.iter().enumerate() {
            let mx = m.mul_vec(x);
            for i in 0..n {
                rhs[(i, j)] = mx[i];
            }
        }
        fact.solve_mat(&mut rhs);
        solves.set(solves.get() + p);
        (0..p)
            .map(|j| {
                let mut y: Vec<f64> = (0..n).map(|i| rhs[(i, j)]).collect();
                project(&mut y);
                y
            })
            .collect()
    };

    let mut rng = rand::rngs::StdRng::seed_from_u64(opts.seed);
    let p = opts.block.min(n);
    let mut basis = Basis {
        v: Vec::new(),
        mv: Vec::new(),
    };
    let start: Vec<Vec<f64>> = (0..p)
        .map(|_| (0..n).map(|_| rng.random::<f64>() - 0.5).collect())
        .collect();
    // one application filters out the far spectrum and applies the deflation
    let mut block: Vec<Vec<f64>> = Vec::new();
    for x in op(&start) {
        if basis.push(m, x) {
            block.push(basis.v.last().unwrap().clone());
        }
    }
    let keep = (opts.nev + p).min(opts.max_basis / 2);
    for it in 1..=opts.max_iterations {
        let next = op(&block);
        block.clear();
        for x in next {
            if basis.v.len() >= n - deflated {
                break;
            }
            if basis.push(m, x) {
                block.push(basis.v.last().unwrap().clone());
            }
        }
        let exhausted = block.is_empty();
        if basis.v.len() >= opts.nev {
            let ritz = rayleigh_ritz(a, &basis, opts.target, opts.nev);
            let done = ritz.values.len() == opts.nev && ritz.residuals.iter().all(|&r| r <= opts.tol);
            if done || exhausted {
                if !done {
                    return Err(Error::NoConvergence(format!(
                        "Krylov space exhausted after {it} steps; worst residual {:.3e}",
                        ritz.residuals.iter().cloned().fold(0.0, f64::max)
                    )));
                }
                return Ok(finish(ritz, it, solves.get()));
            }
            if basis.v.len() + p > opts.max_basis {
                // thick restart on the nearest Ritz vectors
                let wide = rayleigh_ritz(a, &basis, opts.target, keep);
                basis = Basis {
                    v: Vec::new(),
                    mv: Vec::new(),
                };
                for x in wide.vectors.iter().cloned() {
                    let mut x = x;
                    project(&mut x);
                    basis.push(m, x);
                }
                let unconverged: Vec<Vec<f64>> = wide
                    .vectors
                    .iter()
                    .zip(&wide.residuals)
                    .filter(|(_, &r)| r > opts.tol)
                    .map(|(v, _)| v.clone())
                    .take(p)
                    .collect();
                block = if unconverged.is_empty() {
                    basis.v[basis.v.len().saturating_sub(p)..].to_vec()
                } else {
                    unconverged
                };
            }
        } else if exhausted {
            return Err(Error::NoConvergence("Krylov space exhausted before reaching nev".into()));
        }
    }
    Err(Error::NoConvergence(format!(
        "no convergence to tolerance {:.1e} in {} block steps",
        opts.tol, opts.max_iterations
    )))
}

fn finish(ritz: Ritz, iterations: usize, solves: usize) -> EigenResult {
    let mut idx: Vec<usize> = (0..ritz.values.len()).collect();
    idx.sort_by(|&a, &b| ritz.values[a].total_cmp(&ritz.values[b]));
    EigenResult {
        eigenvalues: idx.iter().map(|&i| ritz.values[i]).collect(),
        eigenvectors: idx.iter().map(|&i| ritz.vectors[i].clone()).collect(),
        residuals: idx.iter().map(|&i| ritz.residuals[i]).collect(),
        iterations,
        solves,
    }
}

/// All eigenpairs of `A x = λ M x` via a dense Cholesky reduction; eigenvalues
/// ascending, eigenvectors `M`-orthonormal in the columns.
pub fn eig_dense(a: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let chol = m.clone().cholesky().ok_or_else(|| {
        Error::Factorization("mass matrix is not positive definite".to_string())
    })?;
    let l = chol.l();
    let linv_a = l
        .solve_lower_triangular(a)
        .ok_or_else(|| Error::Factorization("singular Cholesky factor".to_string()))?;
    let c = l
        .solve_lower_triangular(&linv_a.transpose())
        .ok_or_else(|| Error::Factorization("singular Cholesky factor".to_string()))?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let vals: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let lt = l.transpose();
    let mut vecs = DMatrix::zeros(a.nrows(), idx.len());
    for (col, &i) in idx.iter().enumerate() {
        let y = eig.eigenvectors.column(i).into_owned();
        let x = lt
            .solve_upper_triangular(&y)
            .ok_or_else(|| Error::Factorization("singular Cholesky factor".to_string()))?;
        vecs.set_column(col, &x);
    }
    Ok((vals, vecs))
}
