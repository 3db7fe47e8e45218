//! Geometric decomposition of a reflection-symmetric form space on the cube.
//!
//! For each entity `E` the associated functions are those whose traces vanish
//! on every facet not containing `E`, taken modulo the ones whose trace on `E`
//! itself vanishes. Representatives are picked so their traces on `E` are
//! reduced-echelon combinations of Legendre products, then reduced against the
//! kernel. Entities of one type are related by reflections of the fixed axes.

use num_traits::{One, Zero};

use super::spaces::{from_sparse, to_sparse, CoeffKey};
use super::topology::{CellTopology, Entity};
use crate::error::{Error, Result};
use crate::poly::{monomial_in_legendre, Echelon, PolyForm, Rational, SparseVec, MAX_DIM};

/// Coordinates of a form in the tensor Legendre basis.
pub fn legendre_coords(f: &PolyForm) -> SparseVec<CoeffKey> {
    let n = f.n();
    let mut entries = Vec::new();
    for (c, p) in f.components().iter().enumerate() {
        for (e, v) in p.terms() {
            let mut partial: Vec<([u8; MAX_DIM], Rational)> = vec![([0; MAX_DIM], v.clone())];
            for axis in 0..n {
                let coeffs = monomial_in_legendre(e[axis] as usize);
                let mut next = Vec::with_capacity(partial.len() * coeffs.len());
                for (exps, val) in &partial {
                    for (j, cj) in coeffs.iter().enumerate() {
                        if cj.is_zero() {
                            continue;
                        }
                        let mut ex = *exps;
                        ex[axis] = j as u8;
                        next.push((ex, val * cj));
                    }
                }
                partial = next;
            }
            for (exps, val) in partial {
                entries.push((CoeffKey { comp: c as u8, exps }, val));
            }
        }
    }
    SparseVec::from_entries(entries)
}

fn fixed_values(fixed: &[(usize, i8)]) -> Vec<(usize, Rational)> {
    fixed
        .iter()
        .map(|&(a, s)| (a, Rational::from_integer((s as i64).into())))
        .collect()
}

fn combine(basis: &[PolyForm], coeffs: &SparseVec<usize>, n: usize, k: usize) -> PolyForm {
    let mut out = PolyForm::zero(n, k);
    for (i, c) in coeffs.entries() {
        out.add_scaled(&basis[*i], c);
    }
    out
}

/// Functions associated to the canonical entity of the given type
/// (all fixed coordinates `+1`), in representative order.
fn canonical_entity_functions(basis: &[PolyForm], n: usize, k: usize, entity: &Entity) -> Vec<PolyForm> {
    let facets = entity.opposite_facets(n);

    // W_E: vanishing trace on all facets not containing E.
    let mut ech: Echelon<(u8, CoeffKey), usize> = Echelon::new();
    let mut w = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        let mut entries = Vec::new();
        for (fi, &(axis, s)) in facets.iter().enumerate() {
            let tr = b.trace(&fixed_values(&[(axis, s)]));
            for (key, v) in to_sparse(&tr).entries() {
                entries.push(((fi as u8, *key), v.clone()));
            }
        }
        if let Some(kernel) = ech.insert(SparseVec::from_entries(entries), SparseVec::unit(i)) {
            w.push(combine(basis, &kernel, n, k));
        }
    }

    // split W_E by trace on E
    let on_e = fixed_values(&entity.fixed);
    let mut tr_ech: Echelon<CoeffKey, CoeffKey> = Echelon::new();
    let mut kernel: Echelon<CoeffKey, CoeffKey> = Echelon::new();
    for f in &w {
        let tr = legendre_coords(&f.trace(&on_e));
        if let Some(z) = tr_ech.insert(tr, to_sparse(f)) {
            if !z.is_zero() {
                kernel.insert(z, SparseVec::new());
            }
        }
    }

    let scale = if k == 0 {
        Rational::one()
    } else {
        Rational::from_integer((1i64 << entity.fixed.len()).into())
    };
    let mut reps: Vec<(CoeffKey, PolyForm)> = tr_ech
        .into_rows()
        .into_iter()
        .map(|(tr, mut payload)| {
            let pivot = tr.leading().expect("echelon rows are nonzero").0;
            let mut dummy = SparseVec::<CoeffKey>::new();
            kernel.reduce(&mut payload, &mut dummy);
            payload.scale(&scale);
            (pivot, from_sparse(n, k, &payload))
        })
        .collect();
    // Legendre index ascending: total degree, then component, then exponents
    reps.sort_by(|(a, _), (b, _)| {
        let da: u32 = a.exps.iter().map(|&e| e as u32).sum();
        let db: u32 = b.exps.iter().map(|&e| e as u32).sum();
        da.cmp(&db).then(a.comp.cmp(&b.comp)).then(a.exps.cmp(&b.exps))
    });
    reps.into_iter().map(|(_, f)| f).collect()
}

/// Entity-associated basis of the space spanned by `basis`, listed per entity
/// in topology order.
pub fn decompose(basis: &[PolyForm], n: usize, k: usize, topo: &CellTopology) -> Result<Vec<Vec<PolyForm>>> {
    let mut out = Vec::with_capacity(topo.len());
    for d in 0..=n {
        let mut cache: Vec<(Vec<usize>, Vec<PolyForm>)> = Vec::new();
        for e in &topo.entities[d] {
            if !cache.iter().any(|(free, _)| *free == e.free) {
                let canonical = Entity {
                    dim: e.dim,
                    fixed: e.fixed.iter().map(|&(a, _)| (a, 1)).collect(),
                    free: e.free.clone(),
                    vertices: Vec::new(),
                };
                cache.push((e.free.clone(), canonical_entity_functions(basis, n, k, &canonical)));
            }
            let (_, funcs) = cache.iter().find(|(free, _)| *free == e.free).unwrap();
            let reflected = funcs
                .iter()
                .map(|f| {
                    e.fixed
                        .iter()
                        .filter(|&&(_, s)| s < 0)
                        .fold(f.clone(), |g, &(a, _)| g.reflect(a))
                })
                .collect::<Vec<_>>();
            out.push(reflected);
        }
    }
    let total: usize = out.iter().map(Vec::len).sum();
    if total != basis.len() {
        return Err(Error::UnsupportedElement(format!(
            "space of dimension {} admits no geometric decomposition ({} functions associated)",
            basis.len(),
            total
        )));
    }
    Ok(out)
}
