//! Exact sparse row reduction over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::Rational;

/// Sparse rational vector with entries sorted by key; zeros are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVec<K> {
    entries: Vec<(K, Rational)>,
}

impl<K: Ord + Clone> Default for SparseVec<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> SparseVec<K> {
    pub fn new() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    pub fn from_map(map: BTreeMap<K, Rational>) -> Self {
        Self {
            entries: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Accumulates possibly repeated keys.
    pub fn from_entries(entries: impl IntoIterator<Item = (K, Rational)>) -> Self {
        let mut map: BTreeMap<K, Rational> = BTreeMap::new();
        for (k, c) in entries {
            *map.entry(k).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(map)
    }

    pub fn unit(key: K) -> Self {
        Self {
            entries: vec![(key, Rational::one())],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(K, Rational)] {
        &self.entries
    }

    pub fn leading(&self) -> Option<&(K, Rational)> {
        self.entries.first()
    }

    pub fn get(&self, key: &K) -> Option<&Rational> {
        self.entries
            .binary_search_by(|(k, _)| k.cmp(key))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn scale(&mut self, s: &Rational) {
        if s.is_zero() {
            self.entries.clear();
            return;
        }
        for (_, c) in &mut self.entries {
            *c *= s;
        }
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: &Rational, other: &SparseVec<K>) {
        if s.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ka, _)), Some((kb, _))) => {
                    if ka < kb {
                        out.push(a.next().unwrap());
                    } else if kb < ka {
                        let (k, c) = b.next().unwrap();
                        out.push((k.clone(), s * c));
                    } else {
                        let (k, ca) = a.next().unwrap();
                        let (_, cb) = b.next().unwrap();
                        let v = ca + s * cb;
                        if !v.is_zero() {
                            out.push((k, v));
                        }
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (k, c) = b.next().unwrap();
                    out.push((k.clone(), s * c));
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }
}

/// Incremental reduced row-echelon form of rows `(key part | payload)`.
///
/// Pivots are chosen on the key part in ascending key order; the payload
/// undergoes the same row operations, so a row whose key part reduces to zero
/// exposes a payload combination in the kernel of the key map.
#[derive(Clone, Debug)]
pub struct Echelon<K, P> {
    rows: Vec<(SparseVec<K>, SparseVec<P>)>,
    pivots: BTreeMap<K, usize>,
}

impl<K: Ord + Clone, P: Ord + Clone> Default for Echelon<K, P> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone, P: Ord + Clone> Echelon<K, P> {
    pub fn new() -> Self {
        Self {
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces a key vector against the current pivots.
    pub fn reduce(&self, key: &mut SparseVec<K>, payload: &mut SparseVec<P>) {
        let hits: Vec<(usize, Rational)> = key
            .entries()
            .iter()
            .filter_map(|(k, c)| self.pivots.get(k).map(|&i| (i, c.clone())))
            .collect();
        for (i, c) in hits {
            let neg = -c;
            key.axpy(&neg, &self.rows[i].0);
            payload.axpy(&neg, &self.rows[i].1);
        }
    }

    /// Inserts a row. Returns the reduced payload if the key part is dependent
    /// on the rows already present.
    pub fn insert(&mut self, mut key: SparseVec<K>, mut payload: SparseVec<P>) -> Option<SparseVec<P>> {
        self.reduce(&mut key, &mut payload);
        let (lead, lead_coeff) = match key.leading() {
            None => return Some(payload),
            Some((k, c)) => (k.clone(), c.clone()),
        };
        let inv = Rational::one() / lead_coeff;
        key.scale(&inv);
        payload.scale(&inv);
        for (rk, rp) in &mut self.rows {
            if let Some(c) = rk.get(&lead).cloned() {
                let neg = -c;
                rk.axpy(&neg, &key);
                rp.axpy(&neg, &payload);
            }
        }
        self.pivots.insert(lead, self.rows.len());
        self.rows.push((key, payload));
        None
    }

    /// Rows in ascending pivot order.
    pub fn rows(&self) -> Vec<&(SparseVec<K>, SparseVec<P>)> {
        self.pivots.values().map(|&i| &self.rows[i]).collect()
    }

    pub fn into_rows(self) -> Vec<(SparseVec<K>, SparseVec<P>)> {
        let order: Vec<usize> = self.pivots.values().copied().collect();
        let mut slots: Vec<Option<(SparseVec<K>, SparseVec<P>)>> = self.rows.into_iter().map(Some).collect();
        order.into_iter().map(|i| slots[i].take().unwrap()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn sv(e: &[(u32, i64)]) -> SparseVec<u32> {
        SparseVec::from_entries(e.iter().map(|&(k, v)| (k, q(v))))
    }

    #[test]
    fn axpy_cancels() {
        let mut a = sv(&[(0, 1), (2, 3)]);
        a.axpy(&q(-3), &sv(&[(2, 1), (5, 1)]));
        assert_eq!(a, sv(&[(0, 1), (5, -3)]));
    }

    #[test]
    fn kernel_detection() {
        let mut e: Echelon<u32, u32> = Echelon::new();
        assert!(e.insert(sv(&[(0, 1), (1, 1)]), SparseVec::unit(0)).is_none());
        assert!(e.insert(sv(&[(1, 1)]), SparseVec::unit(1)).is_none());
        // (2, 3) = 2·row0 + 1·row1
        let k = e.insert(sv(&[(0, 2), (1, 3)]), SparseVec::unit(2)).unwrap();
        assert_eq!(k, sv(&[(0, -2), (1, -1), (2, 1)]));
        // fully reduced
        let rows = e.rows();
        assert_eq!(rows[0].0, sv(&[(0, 1)]));
        assert_eq!(rows[1].0, sv(&[(1, 1)]));
    }
}
