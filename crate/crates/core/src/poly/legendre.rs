use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use super::{Polynomial1D, Rational};

/// Value of the degree-`j` Legendre polynomial at `x` by the three-term recurrence.
pub fn legendre(j: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if j == 0 {
        return p0;
    }
    for i in 1..j {
        let fi = i as f64;
        let p2 = ((2.0 * fi + 1.0) * x * p1 - fi * p0) / (fi + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Value and derivative of the degree-`j` Legendre polynomial.
pub fn legendre_with_derivative(j: usize, x: f64) -> (f64, f64) {
    if j == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    let (mut d0, mut d1) = (0.0, 1.0);
    for i in 1..j {
        let fi = i as f64;
        let p2 = ((2.0 * fi + 1.0) * x * p1 - fi * p0) / (fi + 1.0);
        let d2 = ((2.0 * fi + 1.0) * (p1 + x * d1) - fi * d0) / (fi + 1.0);
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
    }
    (p1, d1)
}

fn table() -> &'static Mutex<Vec<Polynomial1D>> {
    static TABLE: OnceLock<Mutex<Vec<Polynomial1D>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Polynomial1D::one(), Polynomial1D::x()]))
}

/// Degree-`j` Legendre polynomial with exact coefficients.
pub fn legendre_exact(j: usize) -> Polynomial1D {
    let mut t = table().lock().expect("legendre table poisoned");
    while t.len() <= j {
        let i = t.len() - 1;
        let x = Polynomial1D::x();
        let a = Rational::new((2 * i + 1).into(), (i + 1).into());
        let b = Rational::new(i.into(), (i + 1).into());
        let next = &(&x * &t[i]).scale(&a) - &t[i - 1].scale(&b);
        t.push(next);
    }
    t[j].clone()
}

/// Coefficients `c` with `x^m = Σ_j c[j] P_j(x)`.
pub fn monomial_in_legendre(m: usize) -> Vec<Rational> {
    static CACHE: OnceLock<Mutex<Vec<Vec<Rational>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    if let Some(c) = cache.lock().expect("cache poisoned").get(m) {
        return c.clone();
    }
    let legs: Vec<Polynomial1D> = (0..=m).map(legendre_exact).collect();
    let mut guard = cache.lock().expect("cache poisoned");
    while guard.len() <= m {
        let d = guard.len();
        // back-substitute from the leading Legendre coefficient downwards
        let mut rem = vec![Rational::zero(); d + 1];
        rem[d] = Rational::one();
        let mut out = vec![Rational::zero(); d + 1];
        for j in (0..=d).rev() {
            let lead = &legs[j].coeffs()[j];
            let c = &rem[j] / lead;
            for (i, pc) in legs[j].coeffs().iter().enumerate() {
                rem[i] -= &c * pc;
            }
            out[j] = c;
        }
        guard.push(out);
    }
    guard[m].clone()
}
