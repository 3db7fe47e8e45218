use nalgebra::DMatrix;

use super::element::Element;
use super::tabulate::{tabulate, tabulate_derivative};
use crate::error::{Error, Result};
use crate::poly::gauss_rule;

/// Least-squares representation of `d` between two elements of one complex.
#[derive(Clone, Debug)]
pub struct CoboundaryFit {
    /// `d φ_i ≈ Σ_j matrix[(i, j)] ψ_j`.
    pub matrix: DMatrix<f64>,
    /// Largest reference `L²` norm of `d φ_i - Σ_j D_ij ψ_j`.
    pub residual: f64,
}

/// Gram matrix of `e` on the reference cell with `m` Gauss points per axis.
pub fn reference_gram(e: &Element, m: usize) -> DMatrix<f64> {
    let q = gauss_rule(e.n, m);
    let pts: Vec<Vec<f64>> = q.points.iter().map(|p| p[..e.n].to_vec()).collect();
    let t = tabulate(e, &pts, 0);
    let nb = e.dim();
    let mut g = DMatrix::zeros(nb, nb);
    for (p, w) in q.weights.iter().enumerate() {
        for i in 0..nb {
            let a = t.components(0, p, i);
            for j in 0..=i {
                let b = t.components(0, p, j);
                let v: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                g[(i, j)] += w * v;
            }
        }
    }
    g.fill_upper_triangle_with_lower_triangle();
    g
}

pub fn coboundary_fit(e_k: &Element, e_k1: &Element) -> Result<CoboundaryFit> {
    if e_k.k + 1 != e_k1.k {
        return Err(Error::DegreeMismatch {
            expected: e_k.k + 1,
            found: e_k1.k,
        });
    }
    if e_k.n != e_k1.n {
        return Err(Error::DimensionMismatch {
            expected: e_k.n,
            found: e_k1.n,
        });
    }
    if e_k.family != e_k1.family || e_k.r != e_k1.r {
        return Err(Error::InvalidInput(format!(
            "{} and {} do not belong to one complex",
            e_k.label(),
            e_k1.label()
        )));
    }
    let n = e_k.n;
    let m = (e_k.r + 2).max(e_k.max_variable_degree().max(e_k1.max_variable_degree()) + 1);
    let q = gauss_rule(n, m);
    let pts: Vec<Vec<f64>> = q.points.iter().map(|p| p[..n].to_vec()).collect();
    let psi = tabulate(e_k1, &pts, 0);
    let dphi = tabulate_derivative(e_k, &pts);
    let (na, nb) = (e_k.dim(), e_k1.dim());

    let mut gram = DMatrix::<f64>::zeros(nb, nb);
    let mut rhs = DMatrix::<f64>::zeros(nb, na);
    for (p, w) in q.weights.iter().enumerate() {
        for j in 0..nb {
            let a = psi.components(0, p, j);
            for l in 0..nb {
                let b = psi.components(0, p, l);
                gram[(j, l)] += w * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
            }
            for i in 0..na {
                let b = dphi.components(0, p, i);
                rhs[(j, i)] += w * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
            }
        }
    }
    let chol = gram.cholesky().ok_or(Error::SingularGram)?;
    let coeffs = chol.solve(&rhs); // nb × na
    let matrix = coeffs.transpose();

    let mut residual: f64 = 0.0;
    for i in 0..na {
        let mut sq = 0.0;
        for (p, w) in q.weights.iter().enumerate() {
            let target = dphi.components(0, p, i);
            for (c, t) in target.iter().enumerate() {
                let fit: f64 = (0..nb).map(|j| matrix[(i, j)] * psi.get(0, p, j, c)).sum();
                sq += w * (t - fit).powi(2);
            }
        }
        residual = residual.max(sq.sqrt());
    }
    Ok(CoboundaryFit { matrix, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refelem::{build_element, Family};

    #[test]
    fn trimmed_gradient_is_exact() {
        let e0 = build_element(Family::TrimmedSerendipity, 3, 0, 2).unwrap();
        let e1 = build_element(Family::TrimmedSerendipity, 3, 1, 2).unwrap();
        let fit = coboundary_fit(&e0, &e1).unwrap();
        assert!(fit.residual < 1e-10, "{}", fit.residual);
    }

    #[test]
    fn constant_combination_has_zero_derivative() {
        // lowest-order vertex functions sum to one
        let e0 = build_element(Family::TrimmedSerendipity, 3, 0, 1).unwrap();
        let e1 = build_element(Family::TrimmedSerendipity, 3, 1, 1).unwrap();
        let fit = coboundary_fit(&e0, &e1).unwrap();
        for j in 0..e1.dim() {
            let s: f64 = (0..e0.dim()).map(|i| fit.matrix[(i, j)]).sum();
            assert!(s.abs() < 1e-12);
        }
    }

    #[test]
    fn mismatched_degrees_error() {
        let e0 = build_element(Family::TrimmedSerendipity, 2, 0, 1).unwrap();
        assert!(matches!(coboundary_fit(&e0, &e0), Err(Error::DegreeMismatch { .. })));
    }
}
