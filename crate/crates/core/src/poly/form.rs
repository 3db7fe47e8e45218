use std::fmt;

use num_traits::{One, Zero};

use super::{FloatPolynomial, Polynomial, Rational};
use crate::error::{Error, Result};

/// Index tuples of the basic `k`-forms `dx_σ` in `n` dimensions, in component order.
///
/// 1-forms are `dx, dy, dz`; 2-forms in 3D are `dy∧dz, dx∧dz, dx∧dy` (component
/// `i` omits axis `i`); every other case is lexicographic. Empty for `k > n`.
pub fn form_components(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    combinations(n, k, 0, &mut cur, &mut out);
    if n == 3 && k == 2 {
        out.reverse();
    }
    out
}

fn combinations(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        combinations(n, k, i + 1, cur, out);
        cur.pop();
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn component_index(n: usize, k: usize, sigma: &[usize]) -> usize {
    form_components(n, k)
        .iter()
        .position(|s| s == sigma)
        .expect("component tuple must be sorted and in range")
}

/// A differential `k`-form on `[-1,1]^n` with exact polynomial coefficients,
/// one per basic form in [`form_components`] order.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyForm {
    n: usize,
    k: usize,
    components: Vec<Polynomial>,
}

impl PolyForm {
    pub fn zero(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            components: vec![Polynomial::zero(n); binomial(n, k)],
        }
    }

    pub fn new(n: usize, k: usize, components: Vec<Polynomial>) -> Result<Self> {
        if components.len() != binomial(n, k) {
            return Err(Error::DimensionMismatch {
                expected: binomial(n, k),
                found: components.len(),
            });
        }
        if let Some(c) = components.iter().find(|c| c.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.n(),
            });
        }
        Ok(Self { n, k, components })
    }

    /// A scalar (0-form).
    pub fn scalar(p: Polynomial) -> Self {
        Self {
            n: p.n(),
            k: 0,
            components: vec![p],
        }
    }

    /// `p dx_σ` with `σ` sorted ascending.
    pub fn basic(n: usize, sigma: &[usize], p: Polynomial) -> Self {
        let k = sigma.len();
        let mut f = Self::zero(n, k);
        f.components[component_index(n, k, sigma)] = p;
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            n: self.n,
            k: self.k,
            components: self.components.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn add(&self, other: &PolyForm) -> Self {
        debug_assert_eq!((self.n, self.k), (other.n, other.k));
        Self {
            n: self.n,
            k: self.k,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &PolyForm) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn add_scaled(&mut self, other: &PolyForm, s: &Rational) {
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            *a = &*a + &b.scale(s);
        }
    }

    /// Multiplies every coefficient by a polynomial.
    pub fn mul_polynomial(&self, p: &Polynomial) -> Self {
        Self {
            n: self.n,
            k: self.k,
            components: self.components.iter().map(|c| c * p).collect(),
        }
    }

    /// Exterior derivative, a `(k+1)`-form.
    pub fn exterior_derivative(&self) -> Result<PolyForm> {
        if self.k >= self.n {
            return Err(Error::TopDegreeForm);
        }
        let sigmas = form_components(self.n, self.k);
        let mut out = PolyForm::zero(self.n, self.k + 1);
        for (sigma, coeff) in sigmas.iter().zip(&self.components) {
            if coeff.is_zero() {
                continue;
            }
            for axis in 0..self.n {
                if sigma.contains(&axis) {
                    continue;
                }
                let dp = coeff.derivative(axis);
                if dp.is_zero() {
                    continue;
                }
                // dx_axis ∧ dx_σ, moved into sorted position
                let before = sigma.iter().filter(|&&s| s < axis).count();
                let mut tau = sigma.clone();
                tau.insert(before, axis);
                let idx = component_index(self.n, self.k + 1, &tau);
                let term = if before % 2 == 0 { dp } else { -&dp };
                out.components[idx] = &out.components[idx] + &term;
            }
        }
        Ok(out)
    }

    /// Koszul operator (contraction with the position vector), a `(k-1)`-form.
    pub fn koszul(&self) -> Result<PolyForm> {
        if self.k == 0 {
            return Err(Error::KoszulOfZeroForm);
        }
        let sigmas = form_components(self.n, self.k);
        let mut out = PolyForm::zero(self.n, self.k - 1);
        for (sigma, coeff) in sigmas.iter().zip(&self.components) {
            if coeff.is_zero() {
                continue;
            }
            for (j, &axis) in sigma.iter().enumerate() {
                let mut tau = sigma.clone();
                tau.remove(j);
                let idx = component_index(self.n, self.k - 1, &tau);
                let term = coeff.mul_variable(axis);
                let term = if j % 2 == 0 { term } else { -&term };
                out.components[idx] = &out.components[idx] + &term;
            }
        }
        Ok(out)
    }

    /// Pullback under the reflection `x_axis -> -x_axis`.
    pub fn reflect(&self, axis: usize) -> Self {
        let sigmas = form_components(self.n, self.k);
        Self {
            n: self.n,
            k: self.k,
            components: sigmas
                .iter()
                .zip(&self.components)
                .map(|(sigma, c)| {
                    let r = c.reflect(axis);
                    if sigma.contains(&axis) {
                        -&r
                    } else {
                        r
                    }
                })
                .collect(),
        }
    }

    /// Trace onto the affine subspace where each listed axis is fixed to the
    /// given value. The result lives on the remaining axes in ascending order.
    pub fn trace(&self, fixed: &[(usize, Rational)]) -> PolyForm {
        let mut free: Vec<usize> = (0..self.n).collect();
        free.retain(|a| !fixed.iter().any(|(f, _)| f == a));
        let m = free.len();
        let sigmas = form_components(self.n, self.k);
        let mut out = PolyForm::zero(m, self.k);
        for (sigma, coeff) in sigmas.iter().zip(&self.components) {
            if sigma.iter().any(|s| !free.contains(s)) || coeff.is_zero() {
                continue;
            }
            // restrict fixed axes in descending order so indices stay valid
            let mut fixed_sorted: Vec<&(usize, Rational)> = fixed.iter().collect();
            fixed_sorted.sort_by(|a, b| b.0.cmp(&a.0));
            let mut p = coeff.clone();
            for (axis, value) in fixed_sorted {
                p = p.restrict(*axis, value);
            }
            let tau: Vec<usize> = sigma
                .iter()
                .map(|s| free.iter().position(|f| f == s).unwrap())
                .collect();
            let idx = component_index(m, self.k, &tau);
            out.components[idx] = &out.components[idx] + &p;
        }
        out
    }

    /// Highest exponent of any variable in any component.
    pub fn max_variable_degree(&self) -> usize {
        self.components
            .iter()
            .flat_map(|c| (0..self.n).map(move |a| c.degree_in(a)))
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    /// Exact `L²` inner product over `[-1,1]^n` (Euclidean on components).
    pub fn inner_reference(&self, other: &PolyForm) -> Rational {
        self.components
            .iter()
            .zip(&other.components)
            .fold(Rational::zero(), |acc, (a, b)| acc + (a * b).integrate_reference())
    }

    pub fn to_float(&self) -> Vec<FloatPolynomial> {
        self.components.iter().map(Polynomial::to_float).collect()
    }
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const D: [&str; 3] = ["dx", "dy", "dz"];
        let sigmas = form_components(self.n, self.k);
        let mut first = true;
        for (sigma, c) in sigmas.iter().zip(&self.components) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let basis: Vec<&str> = sigma.iter().map(|&s| D[s]).collect();
            if basis.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c}){}", basis.join("∧"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn component_orderings() {
        assert_eq!(form_components(3, 1), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(form_components(3, 2), vec![vec![1, 2], vec![0, 2], vec![0, 1]]);
        assert_eq!(form_components(2, 1), vec![vec![0], vec![1]]);
        assert_eq!(form_components(2, 2), vec![vec![0, 1]]);
        assert_eq!(form_components(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn gradient_of_xy() {
        let xy = &Polynomial::variable(2, 0) * &Polynomial::variable(2, 1);
        let d = PolyForm::scalar(xy).exterior_derivative().unwrap();
        assert_eq!(d.component(0), &Polynomial::variable(2, 1));
        assert_eq!(d.component(1), &Polynomial::variable(2, 0));
    }

    #[test]
    fn derivative_of_edge_function() {
        // d[(y+1)(z+1) dx] = -(z+1) dx∧dy - (y+1) dx∧dz
        let p = &Polynomial::affine(3, 1, 1) * &Polynomial::affine(3, 2, 1);
        let f = PolyForm::basic(3, &[0], p);
        let d = f.exterior_derivative().unwrap();
        assert!(d.component(0).is_zero());
        assert_eq!(d.component(1), &-&Polynomial::affine(3, 1, 1));
        assert_eq!(d.component(2), &-&Polynomial::affine(3, 2, 1));
    }

    #[test]
    fn constant_has_zero_derivative_and_top_form_errors() {
        let c = PolyForm::scalar(Polynomial::constant(3, int(7)));
        assert!(c.exterior_derivative().unwrap().is_zero());
        let top = PolyForm::basic(2, &[0, 1], Polynomial::one(2));
        assert!(matches!(top.exterior_derivative(), Err(Error::TopDegreeForm)));
    }

    #[test]
    fn koszul_of_volume_form() {
        // κ(dx∧dy) = x dy - y dx
        let f = PolyForm::basic(2, &[0, 1], Polynomial::one(2));
        let k = f.koszul().unwrap();
        assert_eq!(k.component(0), &-&Polynomial::variable(2, 1));
        assert_eq!(k.component(1), &Polynomial::variable(2, 0));
    }

    #[test]
    fn trace_of_two_form_on_face() {
        // y^j z^k (x+1) dy∧dz restricted to x = 1 is 2 y^j z^k dy∧dz
        let p = &Polynomial::monomial(3, [0, 2, 1], int(1)) * &Polynomial::affine(3, 0, 1);
        let f = PolyForm::basic(3, &[1, 2], p);
        let t = f.trace(&[(0, int(1))]);
        assert_eq!(t.n(), 2);
        assert_eq!(t.component(0), &Polynomial::monomial(2, [2, 1, 0], int(2)));
        assert!(f.trace(&[(0, int(-1))]).is_zero());
        // tangential trace on y = 1 drops dy∧dz
        assert!(f.trace(&[(1, int(1))]).is_zero());
    }

    #[test]
    fn reflection_flips_normal_components() {
        let f = PolyForm::basic(2, &[0], Polynomial::variable(2, 0));
        let r = f.reflect(0);
        // x dx -> (-x)(-dx) = x dx
        assert_eq!(r, f);
        let g = PolyForm::basic(2, &[1], Polynomial::variable(2, 0));
        assert_eq!(g.reflect(0).component(1), &-&Polynomial::variable(2, 0));
    }
}
