//! Tensor-product family `Q⁻_r Λ^k` built from 1D factors.
//!
//! On each axis a 0-form factor is a vertex function `(1 ± x)/2` or a bubble
//! `(1 - x²) P_j(x)`, `j < r - 1`; a 1-form factor is `P_j(x) dx`, `j < r`. An
//! axis is fixed for the entity iff it carries a vertex factor.

use super::topology::{CellTopology, Entity};
use crate::poly::{form_components, legendre_exact, rational, PolyForm, Polynomial, Polynomial1D};

fn vertex_factor(sign: i8) -> Polynomial1D {
    Polynomial1D::from_coeffs(vec![rational(1, 2), rational(sign as i64, 2)])
}

fn bubble_factor(j: usize) -> Polynomial1D {
    &Polynomial1D::from_integers(&[1, 0, -1]) * &legendre_exact(j)
}

fn entity_functions(n: usize, k: usize, r: usize, e: &Entity) -> Vec<PolyForm> {
    let mut out = Vec::new();
    for sigma in form_components(n, k) {
        if !sigma.iter().all(|a| e.free.contains(a)) {
            continue;
        }
        // per free axis: number of admissible factor indices
        let ranges: Vec<usize> = e
            .free
            .iter()
            .map(|a| if sigma.contains(a) { r } else { r.saturating_sub(1) })
            .collect();
        let total: usize = ranges.iter().product();
        for flat in 0..total {
            let mut rem = flat;
            let mut idx = vec![0; e.free.len()];
            // last free axis fastest
            for (slot, &len) in idx.iter_mut().zip(&ranges).rev() {
                *slot = rem % len;
                rem /= len;
            }
            let mut p = Polynomial::one(n);
            for &(a, s) in &e.fixed {
                p = &p * &vertex_factor(s).in_variable(n, a);
            }
            for (&a, &j) in e.free.iter().zip(&idx) {
                let factor = if sigma.contains(&a) {
                    legendre_exact(j)
                } else {
                    bubble_factor(j)
                };
                p = &p * &factor.in_variable(n, a);
            }
            out.push(PolyForm::basic(n, &sigma, p));
        }
    }
    out
}

/// Per-entity basis in topology order.
pub fn tensor_basis(n: usize, k: usize, r: usize, topo: &CellTopology) -> Vec<Vec<PolyForm>> {
    debug_assert!(r >= 1);
    topo.iter().map(|e| entity_functions(n, k, r, e)).collect()
}
