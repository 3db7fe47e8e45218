//! Linear and eigenvalue solvers.

mod direct;
mod eigen;
mod iterative;

pub use direct::{solve_refined, Factorization};
pub use eigen::{eig_dense, eig_shift_invert, eig_shift_invert_with, EigenOptions, EigenResult};
pub use iterative::conjugate_gradient;

use crate::assemble::SparseSystem;
use crate::error::Result;

pub const DEFAULT_LINEAR_TOL: f64 = 1e-12;
pub const DEFAULT_EIGEN_TOL: f64 = 1e-7;

/// Solves a symmetric positive definite system; returns the solution in the
/// full numbering. Sparse Cholesky with iterative refinement, falling back to
/// preconditioned conjugate gradients when the factorization fails.
pub fn solve_spd(sys: &SparseSystem, tol: f64) -> Result<Vec<f64>> {
    let x = match Factorization::cholesky(&sys.matrix) {
        Ok(f) => solve_refined(&f, &sys.matrix, &sys.rhs, tol)?,
        Err(chol_err) => {
            let n = sys.matrix.nrows;
            conjugate_gradient(&sys.matrix, &sys.rhs, tol, 10 * n + 100)
                .map_err(|e| crate::Error::NoConvergence(format!("{chol_err}; fallback: {e}")))?
                .0
        }
    };
    Ok(sys.expand(&x))
}

/// Solves a saddle-point system by sparse LU; returns `(first block, second block)`
/// with the first block of length `n_first`.
pub fn solve_saddle(sys: &SparseSystem, n_first: usize, tol: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let f = Factorization::lu(&sys.matrix)?;
    let mut x = sys.expand(&solve_refined(&f, &sys.matrix, &sys.rhs, tol)?);
    let second = x.split_off(n_first);
    Ok((x, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemble::{CsrMatrix, SparseSystem};

    #[test]
    fn identity_system() {
        let sys = SparseSystem::unconstrained(CsrMatrix::identity(3), vec![1.0, 0.0, 0.0]);
        assert_eq!(solve_spd(&sys, 1e-12).unwrap(), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn tridiagonal_by_hand() {
        // 4 interior nodes of -u'' = 1 on (0,1), h = 1/5, scaled by h²: [2 -1; -1 2 ...] u = h²
        let mut t = Vec::new();
        for i in 0..4 {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
                t.push((i - 1, i, -1.0));
            }
        }
        let h2 = 1.0 / 25.0;
        let sys = SparseSystem::unconstrained(CsrMatrix::from_triplets(4, 4, t), vec![h2; 4]);
        let x = solve_spd(&sys, 1e-14).unwrap();
        // exact nodal values x(1-x)/2
        for (i, xi) in x.iter().enumerate() {
            let p = (i + 1) as f64 / 5.0;
            assert!((xi - p * (1.0 - p) / 2.0).abs() < 1e-14);
        }
    }
}
