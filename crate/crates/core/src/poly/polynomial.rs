use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Rational, MAX_DIM};

/// Exponent tuple of a monomial. Entries past the polynomial's dimension are zero.
pub type Exponents = [u8; MAX_DIM];

/// Univariate polynomial with exact rational coefficients in the monomial basis.
///
/// Trailing zero coefficients are never stored, so `degree` is the index of the
/// last coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial1D {
    coeffs: Vec<Rational>,
}

impl Polynomial1D {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_coeffs(vec![Rational::one()])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_exact(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(i.into()))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Embeds the polynomial as a function of variable `axis` in `n` dimensions.
    pub fn in_variable(&self, n: usize, axis: usize) -> Polynomial {
        let mut p = Polynomial::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut e = [0u8; MAX_DIM];
            e[axis] = i as u8;
            p.add_term(e, c.clone());
        }
        p
    }
}

impl Add for &Polynomial1D {
    type Output = Polynomial1D;
    fn add(self, rhs: &Polynomial1D) -> Polynomial1D {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        let coeffs = (0..len)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
            .collect();
        Polynomial1D::from_coeffs(coeffs)
    }
}

impl Sub for &Polynomial1D {
    type Output = Polynomial1D;
    fn sub(self, rhs: &Polynomial1D) -> Polynomial1D {
        self + &rhs.scale(&-Rational::one())
    }
}

impl Mul for &Polynomial1D {
    type Output = Polynomial1D;
    fn mul(self, rhs: &Polynomial1D) -> Polynomial1D {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial1D::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial1D::from_coeffs(coeffs)
    }
}

/// Multivariate polynomial in `n ≤ 3` variables with exact rational
/// coefficients in the monomial tensor basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "at most {MAX_DIM} variables are supported");
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::monomial(n, [0; MAX_DIM], c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn variable(n: usize, axis: usize) -> Self {
        let mut e = [0; MAX_DIM];
        e[axis] = 1;
        Self::monomial(n, e, Rational::one())
    }

    pub fn monomial(n: usize, exps: Exponents, c: Rational) -> Self {
        let mut p = Self::zero(n);
        debug_assert!(exps[n..].iter().all(|&e| e == 0));
        p.add_term(exps, c);
        p
    }

    /// `1 + s·x_axis` for a sign `s`.
    pub fn affine(n: usize, axis: usize, sign: i64) -> Self {
        &Self::one(n) + &Self::variable(n, axis).scale(&Rational::from_integer(sign.into()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &Exponents) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exps: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
    }

    /// Highest exponent of `axis` over all terms (0 for the zero polynomial).
    pub fn degree_in(&self, axis: usize) -> usize {
        self.terms.keys().map(|e| e[axis] as usize).max().unwrap_or(0)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    pub fn derivative(&self, axis: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[axis] > 0 {
                let mut f = *e;
                f[axis] -= 1;
                out.add_term(f, c * Rational::from_integer(e[axis].into()));
            }
        }
        out
    }

    /// Multiplies by the coordinate `x_axis`.
    pub fn mul_variable(&self, axis: usize) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = *e;
                    f[axis] += 1;
                    (f, c.clone())
                })
                .collect(),
        }
    }

    /// Pullback under the reflection `x_axis -> -x_axis`.
    pub fn reflect(&self, axis: usize) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, if e[axis] % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Substitutes `x_axis = value` and removes the variable, returning a
    /// polynomial in `n - 1` variables (remaining axes keep their order).
    pub fn restrict(&self, axis: usize, value: &Rational) -> Self {
        let mut out = Self::zero(self.n - 1);
        for (e, c) in &self.terms {
            let mut f = [0u8; MAX_DIM];
            let mut j = 0;
            for (i, &ei) in e.iter().enumerate().take(self.n) {
                if i != axis {
                    f[j] = ei;
                    j += 1;
                }
            }
            out.add_term(f, c * pow(value, e[axis] as u32));
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = c.to_f64().unwrap_or(f64::NAN);
                for (xi, &ei) in x.iter().zip(e.iter()).take(self.n) {
                    v *= xi.powi(ei as i32);
                }
                v
            })
            .sum()
    }

    pub fn eval_exact(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (xi, &ei) in x.iter().zip(e.iter()).take(self.n) {
                v *= pow(xi, ei as u32);
            }
            acc += v;
        }
        acc
    }

    /// Exact integral over the reference cube `[-1,1]^n`.
    pub fn integrate_reference(&self) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            if e[..self.n].iter().any(|&ei| ei % 2 == 1) {
                continue;
            }
            let mut v = c.clone();
            for &ei in &e[..self.n] {
                v *= Rational::new(2.into(), (ei as i64 + 1).into());
            }
            acc += v;
        }
        acc
    }

    /// Floating-point copy for fast repeated evaluation.
    pub fn to_float(&self) -> FloatPolynomial {
        FloatPolynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.to_f64().unwrap_or(f64::NAN)))
                .collect(),
        }
    }
}

fn pow(x: &Rational, e: u32) -> Rational {
    let mut v = Rational::one();
    for _ in 0..e {
        v *= x;
    }
    v
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = Polynomial::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = [0u8; MAX_DIM];
                for i in 0..MAX_DIM {
                    e[i] = ea[i] + eb[i];
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const VARS: [&str; MAX_DIM] = ["x", "y", "z"];
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let mag = c.abs();
            let is_const = e.iter().all(|&x| x == 0);
            if !mag.is_one() || is_const {
                write!(f, "{mag}")?;
            }
            let mut first = mag.is_one();
            for (i, &ei) in e.iter().enumerate().take(self.n) {
                if ei == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if ei == 1 {
                    write!(f, "{}", VARS[i])?;
                } else {
                    write!(f, "{}^{}", VARS[i], ei)?;
                }
            }
        }
        Ok(())
    }
}

/// Floating-point evaluation copy of a [`Polynomial`].
#[derive(Clone, Debug)]
pub struct FloatPolynomial {
    n: usize,
    terms: Vec<(Exponents, f64)>,
}

impl FloatPolynomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut v = *c;
            for i in 0..self.n {
                v *= x[i].powi(e[i] as i32);
            }
            acc += v;
        }
        acc
    }

    /// Evaluation with precomputed power tables `powers[axis][exponent]`.
    pub fn eval_with_powers(&self, powers: &[Vec<f64>]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut v = *c;
            for (i, table) in powers.iter().enumerate().take(self.n) {
                v *= table[e[i] as usize];
            }
            acc += v;
        }
        acc
    }

    pub fn max_exponent(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|(e, _)| e.iter().copied())
            .max()
            .unwrap_or(0) as usize
    }
}
