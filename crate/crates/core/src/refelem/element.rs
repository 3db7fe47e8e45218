use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use super::decompose::decompose;
use super::spaces::{span_basis, tensor_product, trimmed_serendipity};
use super::tensor::tensor_basis;
use super::topology::{CellTopology, Entity};
use crate::error::{Error, Result};
use crate::poly::PolyForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    TrimmedSerendipity,
    TensorProduct,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::TrimmedSerendipity => write!(f, "S⁻"),
            Family::TensorProduct => write!(f, "Q⁻"),
        }
    }
}

/// A reference element on `[-1,1]^n` with an entity-associated basis.
#[derive(Debug)]
pub struct Element {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub topology: CellTopology,
    basis: Vec<PolyForm>,
    d_basis: Vec<PolyForm>,
    /// Basis index range of each entity, in topology order.
    ranges: Vec<Range<usize>>,
}

impl Element {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[PolyForm] {
        &self.basis
    }

    /// Exterior derivatives of the basis; empty for top-degree forms.
    pub fn d_basis(&self) -> &[PolyForm] {
        &self.d_basis
    }

    /// Basis index range of entity `index` of dimension `dim`.
    pub fn entity_range(&self, dim: usize, index: usize) -> Range<usize> {
        let offset: usize = (0..dim).map(|d| self.topology.count(d)).sum();
        self.ranges[offset + index].clone()
    }

    /// Ranges for all entities in topology order.
    pub fn ranges(&self) -> &[Range<usize>] {
        &self.ranges
    }

    /// The entity a basis function is associated to.
    pub fn entity_of(&self, b: usize) -> &Entity {
        let pos = self.ranges.iter().position(|r| r.contains(&b)).expect("basis index in range");
        self.topology.iter().nth(pos).unwrap()
    }

    /// Number of basis functions per entity, indexed by entity dimension.
    pub fn entity_dof_counts(&self) -> Vec<usize> {
        (0..=self.n)
            .map(|d| self.entity_range(d, 0).len())
            .collect()
    }

    /// Polynomial degree bound per variable over the basis and its derivatives.
    pub fn max_variable_degree(&self) -> usize {
        self.basis.iter().map(PolyForm::max_variable_degree).max().unwrap_or(0)
    }

    /// A short identifier, e.g. `S⁻_2Λ^1(3D)`.
    pub fn label(&self) -> String {
        format!("{}_{}Λ^{}({}D)", self.family, self.r, self.k, self.n)
    }
}

type Key = (Family, usize, usize, usize);

fn cache() -> &'static Mutex<HashMap<Key, Arc<Element>>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Element>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

const MAX_ORDER: usize = 12;

/// Builds (or fetches from a process-wide cache) the reference element.
pub fn build_element(family: Family, n: usize, k: usize, r: usize) -> Result<Arc<Element>> {
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedElement(format!("dimension {n} (only 2 and 3 are supported)")));
    }
    if k > n {
        return Err(Error::UnsupportedElement(format!("{k}-forms in {n}D")));
    }
    if r == 0 || r > MAX_ORDER {
        return Err(Error::UnsupportedElement(format!("order {r} (expected 1..={MAX_ORDER})")));
    }
    let key = (family, n, k, r);
    if let Some(e) = cache().lock().expect("element cache poisoned").get(&key) {
        return Ok(e.clone());
    }
    let e = Arc::new(construct(family, n, k, r)?);
    cache()
        .lock()
        .expect("element cache poisoned")
        .entry(key)
        .or_insert(e.clone());
    Ok(e)
}

fn construct(family: Family, n: usize, k: usize, r: usize) -> Result<Element> {
    let topology = CellTopology::new(n);
    let per_entity = match family {
        Family::TrimmedSerendipity => {
            let basis = span_basis(n, k, trimmed_serendipity(n, k, r));
            decompose(&basis, n, k, &topology)?
        }
        Family::TensorProduct => {
            let per_entity = tensor_basis(n, k, r, &topology);
            let expected = span_basis(n, k, tensor_product(n, k, r)).len();
            let found: usize = per_entity.iter().map(Vec::len).sum();
            if expected != found {
                return Err(Error::UnsupportedElement(format!(
                    "tensor construction produced {found} functions for a space of dimension {expected}"
                )));
            }
            per_entity
        }
    };
    let mut ranges = Vec::with_capacity(per_entity.len());
    let mut basis = Vec::new();
    for funcs in per_entity {
        let start = basis.len();
        basis.extend(funcs);
        ranges.push(start..basis.len());
    }
    let d_basis = if k < n {
        basis
            .iter()
            .map(|b| b.exterior_derivative())
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let e = Element {
        family,
        n,
        k,
        r,
        topology,
        basis,
        d_basis,
        ranges,
    };
    // per-entity counts must not depend on the entity within a dimension
    for d in 0..=n {
        let c = e.entity_range(d, 0).len();
        if (0..e.topology.count(d)).any(|i| e.entity_range(d, i).len() != c) {
            return Err(Error::UnsupportedElement(format!(
                "{}: entities of dimension {d} carry unequal counts",
                e.label()
            )));
        }
    }
    Ok(e)
}

/// Element names accepted on the command line.
pub const ELEMENT_NAMES: &[&str] = &[
    "S",
    "SminusCurl",
    "SminusDiv",
    "DPC",
    "Lagrange",
    "RTCE",
    "RTCF",
    "NCE",
    "NCF",
    "DQ",
];

/// A named element family as used on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementName {
    S,
    SminusCurl,
    SminusDiv,
    Dpc,
    Lagrange,
    Rtce,
    Rtcf,
    Nce,
    Ncf,
    Dq,
}

/// How a 1-form in 2D is read as a vector field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Proxy {
    /// `a dx + b dy ↔ (a, b)`.
    Curl,
    /// `a dx + b dy ↔ (b, -a)`.
    Div,
}

impl FromStr for ElementName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "S" => ElementName::S,
            "SminusCurl" => ElementName::SminusCurl,
            "SminusDiv" => ElementName::SminusDiv,
            "DPC" => ElementName::Dpc,
            "Lagrange" => ElementName::Lagrange,
            "RTCE" => ElementName::Rtce,
            "RTCF" => ElementName::Rtcf,
            "NCE" => ElementName::Nce,
            "NCF" => ElementName::Ncf,
            "DQ" => ElementName::Dq,
            _ => return Err(Error::UnknownElement { name: s.to_string() }),
        })
    }
}

impl fmt::Display for ElementName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [
            ElementName::S,
            ElementName::SminusCurl,
            ElementName::SminusDiv,
            ElementName::Dpc,
            ElementName::Lagrange,
            ElementName::Rtce,
            ElementName::Rtcf,
            ElementName::Nce,
            ElementName::Ncf,
            ElementName::Dq,
        ]
        .iter()
        .position(|e| e == self)
        .unwrap();
        f.write_str(ELEMENT_NAMES[i])
    }
}

/// Resolved parameters of a named element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElementSpec {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    /// Order in the `S⁻_r` / `Q⁻_r` indexing.
    pub r: usize,
    pub proxy: Proxy,
}

impl ElementName {
    /// Maps a named element of the given order to its form space. `DPC` and
    /// `DQ` of order `q` are the top-degree spaces with `r = q + 1`.
    pub fn resolve(self, n: usize, order: usize) -> Result<ElementSpec> {
        use ElementName::*;
        let (family, k, proxy) = match self {
            S => (Family::TrimmedSerendipity, 0, Proxy::Curl),
            SminusCurl => (Family::TrimmedSerendipity, 1, Proxy::Curl),
            SminusDiv => (Family::TrimmedSerendipity, n - 1, Proxy::Div),
            Dpc => (Family::TrimmedSerendipity, n, Proxy::Curl),
            Lagrange => (Family::TensorProduct, 0, Proxy::Curl),
            Rtce | Rtcf if n != 2 => {
                return Err(Error::UnsupportedElement(format!("{self} is a 2D element")));
            }
            Nce | Ncf if n != 3 => {
                return Err(Error::UnsupportedElement(format!("{self} is a 3D element")));
            }
            Rtce | Nce => (Family::TensorProduct, 1, Proxy::Curl),
            Rtcf | Ncf => (Family::TensorProduct, n - 1, Proxy::Div),
            Dq => (Family::TensorProduct, n, Proxy::Curl),
        };
        let r = if k == n { order + 1 } else { order };
        if r == 0 {
            return Err(Error::UnsupportedElement(format!("{self} of order {order}")));
        }
        let proxy = if n == 3 { Proxy::Curl } else { proxy };
        Ok(ElementSpec {
            family,
            n,
            k,
            r,
            proxy,
        })
    }
}

impl ElementSpec {
    pub fn build(&self) -> Result<Arc<Element>> {
        build_element(self.family, self.n, self.k, self.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trimmed_dims_in_3d() {
        let totals = [[8, 12, 6, 1], [20, 36, 21, 4], [32, 66, 45, 10]];
        for (ri, row) in totals.iter().enumerate() {
            for (k, &t) in row.iter().enumerate() {
                let e = build_element(Family::TrimmedSerendipity, 3, k, ri + 1).unwrap();
                assert_eq!(e.dim(), t);
            }
        }
    }

    #[test]
    fn entity_counts_second_order() {
        let e = build_element(Family::TrimmedSerendipity, 3, 1, 2).unwrap();
        assert_eq!(e.entity_dof_counts(), vec![0, 2, 2, 0]);
        let e = build_element(Family::TrimmedSerendipity, 3, 2, 2).unwrap();
        assert_eq!(e.entity_dof_counts(), vec![0, 0, 3, 3]);
        let e = build_element(Family::TensorProduct, 3, 1, 2).unwrap();
        assert_eq!(e.dim(), 54);
    }

    #[test]
    fn names_resolve() {
        let s = "DPC".parse::<ElementName>().unwrap().resolve(2, 1).unwrap();
        assert_eq!((s.k, s.r), (2, 2));
        assert!("NCE".parse::<ElementName>().unwrap().resolve(2, 1).is_err());
        let err = "Foo".parse::<ElementName>().unwrap_err().to_string();
        assert!(err.contains("SminusCurl"));
    }
}
