//! Spanning sets for the polynomial form spaces on `[-1,1]^n`.
//!
//! The serendipity space `S_r Λ^k` is `P_r Λ^k + J_r Λ^k + d J_{r+1} Λ^{k-1}` with
//! `J_r Λ^k = Σ_{l≥1} κ H_{r+l-1,l} Λ^{k+1}`, where `H_{d,l}` holds homogeneous
//! monomial forms of degree `d` and linear degree at least `l`. The trimmed
//! space is `S⁻_r Λ^k = S_{r-1} Λ^k + κ S_{r-1} Λ^{k+1}`.

use std::cmp::Ordering;

use num_traits::One;

use crate::poly::{form_components, Echelon, Exponents, PolyForm, Polynomial, Rational, SparseVec, MAX_DIM};

/// Coordinate of a form in a tensor basis: component index and per-axis degrees.
///
/// Ordered by total degree descending, then component, then exponents descending,
/// so echelon pivots prefer high-degree terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoeffKey {
    pub comp: u8,
    pub exps: Exponents,
}

impl CoeffKey {
    fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }
}

impl Ord for CoeffKey {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then(self.comp.cmp(&other.comp))
            .then(other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for CoeffKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn to_sparse(f: &PolyForm) -> SparseVec<CoeffKey> {
    SparseVec::from_entries(f.components().iter().enumerate().flat_map(|(c, p)| {
        p.terms().map(move |(e, v)| {
            (
                CoeffKey {
                    comp: c as u8,
                    exps: *e,
                },
                v.clone(),
            )
        })
    }))
}

pub fn from_sparse(n: usize, k: usize, v: &SparseVec<CoeffKey>) -> PolyForm {
    let mut comps = vec![Polynomial::zero(n); form_components(n, k).len()];
    for (key, c) in v.entries() {
        comps[key.comp as usize].add_term(key.exps, c.clone());
    }
    PolyForm::new(n, k, comps).expect("component count matches")
}

/// Reduced echelon basis of the span of `forms`.
pub fn span_basis(n: usize, k: usize, forms: impl IntoIterator<Item = PolyForm>) -> Vec<PolyForm> {
    let mut ech: Echelon<CoeffKey, CoeffKey> = Echelon::new();
    for f in forms {
        ech.insert(to_sparse(&f), SparseVec::new());
    }
    ech.rows().into_iter().map(|(r, _)| from_sparse(n, k, r)).collect()
}

/// Exponent tuples in `n` variables with total degree exactly `d`.
pub fn monomials_of_degree(n: usize, d: usize) -> Vec<Exponents> {
    let mut out = Vec::new();
    let mut cur = [0u8; MAX_DIM];
    fill(n, 0, d, &mut cur, &mut out);
    out
}

fn fill(n: usize, axis: usize, remaining: usize, cur: &mut Exponents, out: &mut Vec<Exponents>) {
    if axis + 1 == n {
        cur[axis] = remaining as u8;
        out.push(*cur);
        cur[axis] = 0;
        return;
    }
    if n == 0 {
        if remaining == 0 {
            out.push(*cur);
        }
        return;
    }
    for e in 0..=remaining {
        cur[axis] = e as u8;
        fill(n, axis + 1, remaining - e, cur, out);
    }
    cur[axis] = 0;
}

fn monomial_form(n: usize, sigma: &[usize], e: Exponents) -> PolyForm {
    PolyForm::basic(n, sigma, Polynomial::monomial(n, e, Rational::one()))
}

/// Number of variables outside `σ` that enter the monomial linearly.
pub fn linear_degree(e: &Exponents, sigma: &[usize], n: usize) -> usize {
    (0..n).filter(|i| !sigma.contains(i) && e[*i] == 1).count()
}

/// Monomial spanning set of `P_r Λ^k`.
pub fn full_polynomial(n: usize, k: usize, r: usize) -> Vec<PolyForm> {
    let mut out = Vec::new();
    for sigma in form_components(n, k) {
        for d in 0..=r {
            for e in monomials_of_degree(n, d) {
                out.push(monomial_form(n, &sigma, e));
            }
        }
    }
    out
}

/// `H_{d,l} Λ^k`: homogeneous degree `d`, linear degree at least `l`.
fn homogeneous_linear(n: usize, k: usize, d: usize, l: usize) -> Vec<PolyForm> {
    let mut out = Vec::new();
    for sigma in form_components(n, k) {
        for e in monomials_of_degree(n, d) {
            if linear_degree(&e, &sigma, n) >= l {
                out.push(monomial_form(n, &sigma, e));
            }
        }
    }
    out
}

/// Spanning set of `J_r Λ^k`.
fn j_space(n: usize, k: usize, r: usize) -> Vec<PolyForm> {
    if k >= n {
        return Vec::new();
    }
    let mut out = Vec::new();
    for l in 1..=n {
        if r + l == 0 {
            continue;
        }
        for m in homogeneous_linear(n, k + 1, r + l - 1, l) {
            out.push(m.koszul().expect("k+1 ≥ 1"));
        }
    }
    out
}

/// Spanning set of the serendipity space `S_r Λ^k` (valid for `r ≥ 0`).
pub fn serendipity(n: usize, k: usize, r: usize) -> Vec<PolyForm> {
    let mut out = full_polynomial(n, k, r);
    out.extend(j_space(n, k, r));
    if k >= 1 {
        for f in j_space(n, k - 1, r + 1) {
            out.push(f.exterior_derivative().expect("k-1 < n"));
        }
    }
    out
}

/// Spanning set of the trimmed serendipity space `S⁻_r Λ^k`, `r ≥ 1`.
pub fn trimmed_serendipity(n: usize, k: usize, r: usize) -> Vec<PolyForm> {
    assert!(r >= 1);
    let mut out = serendipity(n, k, r - 1);
    if k < n {
        for f in serendipity(n, k + 1, r - 1) {
            out.push(f.koszul().expect("k+1 ≥ 1"));
        }
    }
    out
}

/// Monomial spanning set of the tensor-product space `Q⁻_r Λ^k`: the `dx_σ`
/// coefficient has degree at most `r-1` in the variables of `σ` and at most `r`
/// in the others.
pub fn tensor_product(n: usize, k: usize, r: usize) -> Vec<PolyForm> {
    assert!(r >= 1);
    let mut out = Vec::new();
    for sigma in form_components(n, k) {
        let bounds: Vec<usize> = (0..n).map(|i| if sigma.contains(&i) { r - 1 } else { r }).collect();
        let total: usize = bounds.iter().map(|b| b + 1).product();
        for flat in 0..total {
            let mut e = [0u8; MAX_DIM];
            let mut rem = flat;
            for i in 0..n {
                e[i] = (rem % (bounds[i] + 1)) as u8;
                rem /= bounds[i] + 1;
            }
            out.push(monomial_form(n, &sigma, e));
        }
    }
    out
}

/// Superlinear degree: total degree ignoring variables that appear linearly.
pub fn superlinear_degree(e: &Exponents) -> usize {
    e.iter().filter(|&&x| x >= 2).map(|&x| x as usize).sum()
}
