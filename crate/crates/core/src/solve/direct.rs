use faer::prelude::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};

use crate::assemble::CsrMatrix;
use crate::error::{Error, Result};

enum Kind {
    Cholesky(faer::sparse::linalg::solvers::Llt<usize, f64>),
    Lu(faer::sparse::linalg::solvers::Lu<usize, f64>),
}

/// A sparse direct factorization backed by `faer`, run single-threaded.
pub struct Factorization {
    kind: Kind,
    n: usize,
}

fn to_faer(a: &CsrMatrix, lower_only: bool) -> Result<SparseColMat<usize, f64>> {
    let t: Vec<Triplet<usize, usize, f64>> = a
        .triplets()
        .filter(|&(i, j, _)| !lower_only || i >= j)
        .map(|(i, j, v)| Triplet::new(i, j, v))
        .collect();
    SparseColMat::try_new_from_triplets(a.nrows, a.ncols, &t)
        .map_err(|e| Error::Factorization(format!("matrix conversion failed: {e:?}")))
}

impl Factorization {
    /// Sparse Cholesky of a symmetric positive definite matrix.
    pub fn cholesky(a: &CsrMatrix) -> Result<Self> {
        faer::set_global_parallelism(faer::Par::Seq);
        let m = to_faer(a, true)?;
        let llt = m
            .sp_cholesky(Side::Lower)
            .map_err(|e| Error::Factorization(format!("Cholesky: {e:?} (matrix not positive definite?)")))?;
        Ok(Self {
            kind: Kind::Cholesky(llt),
            n: a.nrows,
        })
    }

    /// Sparse LU with partial pivoting.
    pub fn lu(a: &CsrMatrix) -> Result<Self> {
        faer::set_global_parallelism(faer::Par::Seq);
        let m = to_faer(a, false)?;
        let lu = m
            .sp_lu()
            .map_err(|e| Error::Factorization(format!("LU: {e:?} (matrix singular?)")))?;
        Ok(Self {
            kind: Kind::Lu(lu),
            n: a.nrows,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves in place for every column of `rhs`.
    pub fn solve_mat(&self, rhs: &mut Mat<f64>) {
        match &self.kind {
            Kind::Cholesky(f) => f.solve_in_place(rhs.as_mut()),
            Kind::Lu(f) => f.solve_in_place(rhs.as_mut()),
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut m = Mat::from_fn(self.n, 1, |i, _| b[i]);
        self.solve_mat(&mut m);
        (0..self.n).map(|i| m[(i, 0)]).collect()
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn residual(a: &CsrMatrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    let ax = a.mul_vec(x);
    b.iter().zip(ax).map(|(bi, ai)| bi - ai).collect()
}

/// Solves with iterative refinement until `‖b - Ax‖ ≤ tol ‖b‖`.
pub fn solve_refined(f: &Factorization, a: &CsrMatrix, b: &[f64], tol: f64) -> Result<Vec<f64>> {
    let bn = norm(b);
    if bn == 0.0 {
        return Ok(vec![0.0; b.len()]);
    }
    let mut x = f.solve(b);
    let mut rel = f64::INFINITY;
    for _ in 0..6 {
        let r = residual(a, &x, b);
        rel = norm(&r) / bn;
        if rel <= tol {
            return Ok(x);
        }
        let dx = f.solve(&r);
        x.iter_mut().zip(dx).for_each(|(xi, d)| *xi += d);
    }
    let r = residual(a, &x, b);
    let final_rel = norm(&r) / bn;
    if final_rel <= tol {
        return Ok(x);
    }
    Err(Error::NoConvergence(format!(
        "iterative refinement stalled at relative residual {:.3e} (previous {:.3e}, tolerance {tol:.1e})",
        final_rel, rel
    )))
}
