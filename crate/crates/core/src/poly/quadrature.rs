use std::f64::consts::PI;

use super::legendre::legendre_with_derivative;
use super::MAX_DIM;

/// Tensor-product quadrature rule on `[-1,1]^n`.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub n: usize,
    /// Coordinates past `n` are zero.
    pub points: Vec<[f64; MAX_DIM]>,
    pub weights: Vec<f64>,
    /// Points per axis.
    pub m: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(&p[..self.n]))
            .sum()
    }
}

/// Gauss–Legendre nodes and weights on `[-1,1]` with `m` points, ascending.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1, "a quadrature rule needs at least one point");
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(m, t);
            let dt = p / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(m, t);
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[m - 1 - i] = t;
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    if m % 2 == 1 {
        x[m / 2] = 0.0;
    }
    (x, w)
}

/// Tensor Gauss–Legendre rule with `m` points per axis on `[-1,1]^n`.
///
/// The last axis varies fastest.
pub fn gauss_rule(n: usize, m: usize) -> QuadratureRule {
    assert!(n <= MAX_DIM);
    let (x, w) = gauss_legendre(m);
    let total = m.pow(n as u32);
    let mut points = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    for flat in 0..total {
        let mut p = [0.0; MAX_DIM];
        let mut wt = 1.0;
        let mut rem = flat;
        for axis in (0..n).rev() {
            let i = rem % m;
            rem /= m;
            p[axis] = x[i];
            wt *= w[i];
        }
        points.push(p);
        weights.push(wt);
    }
    QuadratureRule {
        n,
        points,
        weights,
        m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_and_two_point() {
        let r = gauss_rule(1, 1);
        assert_eq!(r.points[0][0], 0.0);
        assert_eq!(r.weights[0], 2.0);
        let r = gauss_rule(1, 2);
        let s = 1.0 / 3f64.sqrt();
        assert!((r.points[0][0] + s).abs() < 1e-15);
        assert!((r.points[1][0] - s).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15 && (r.weights[1] - 1.0).abs() < 1e-15);
        let x2 = r.integrate(|p| p[0] * p[0]);
        assert!((x2 - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_measure() {
        for n in 1..=3 {
            for m in 1..8 {
                let r = gauss_rule(n, m);
                let s: f64 = r.weights.iter().sum();
                assert!((s - 2f64.powi(n as i32)).abs() < 1e-13);
                assert!(r.weights.iter().all(|&w| w > 0.0));
            }
        }
    }
}
