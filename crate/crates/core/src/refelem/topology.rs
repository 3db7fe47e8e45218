/// A sub-entity of the reference cube `[-1,1]^n`: the intersection of the
/// hyperplanes `x_j = s_j` over its fixed axes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entity {
    pub dim: usize,
    /// `(axis, sign)` with sign `±1`, ascending by axis.
    pub fixed: Vec<(usize, i8)>,
    /// Free axes, ascending.
    pub free: Vec<usize>,
    /// Cube vertices lying on the entity; vertex `v` has `x_i = +1` iff bit `i` is set.
    pub vertices: Vec<usize>,
}

impl Entity {
    pub fn contains_vertex(&self, v: usize) -> bool {
        self.fixed
            .iter()
            .all(|&(a, s)| ((v >> a) & 1 == 1) == (s > 0))
    }

    /// Whether `other` is a sub-entity of `self` (or equal).
    pub fn contains(&self, other: &Entity) -> bool {
        self.fixed.iter().all(|f| other.fixed.contains(f))
    }

    /// Facets of the cube that do not contain this entity.
    pub fn opposite_facets(&self, n: usize) -> Vec<(usize, i8)> {
        let mut out = Vec::new();
        for axis in 0..n {
            match self.fixed.iter().find(|(a, _)| *a == axis) {
                Some(&(_, s)) => out.push((axis, -s)),
                None => {
                    out.push((axis, -1));
                    out.push((axis, 1));
                }
            }
        }
        out
    }
}

/// Sub-entities of the reference `n`-cube ordered by dimension.
///
/// Within a dimension: edges are grouped by direction, higher entities by their
/// first fixed axis set (faces by normal axis); inside a group the sign pattern
/// of the fixed axes counts upward in binary with `-1` as 0.
#[derive(Clone, Debug)]
pub struct CellTopology {
    pub n: usize,
    pub entities: Vec<Vec<Entity>>,
}

impl CellTopology {
    pub fn new(n: usize) -> Self {
        let mut entities = Vec::with_capacity(n + 1);
        for d in 0..=n {
            let mut groups: Vec<Vec<usize>> = subsets(n, d);
            if d != 1 {
                // order by fixed-axis set
                groups.sort_by_key(|free| complement(n, free));
            }
            let mut list = Vec::new();
            for free in groups {
                let fixed_axes = complement(n, &free);
                for mask in 0..(1usize << fixed_axes.len()) {
                    let fixed: Vec<(usize, i8)> = fixed_axes
                        .iter()
                        .enumerate()
                        .map(|(b, &a)| (a, if (mask >> b) & 1 == 1 { 1 } else { -1 }))
                        .collect();
                    let mut e = Entity {
                        dim: d,
                        fixed,
                        free: free.clone(),
                        vertices: Vec::new(),
                    };
                    e.vertices = (0..1usize << n).filter(|&v| e.contains_vertex(v)).collect();
                    list.push(e);
                }
            }
            entities.push(list);
        }
        Self { n, entities }
    }

    pub fn count(&self, dim: usize) -> usize {
        self.entities[dim].len()
    }

    /// Entities in global topology order.
    pub fn iter(&self) -> impl Iterator<Item = &Entity> {
        self.entities.iter().flatten()
    }

    /// Total number of sub-entities.
    pub fn len(&self) -> usize {
        self.entities.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn subsets(n: usize, d: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .filter(|m| m.count_ones() as usize == d)
        .map(|m| (0..n).filter(|i| (m >> i) & 1 == 1).collect())
        .collect()
}

fn complement(n: usize, set: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !set.contains(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_counts() {
        let t = CellTopology::new(3);
        assert_eq!((0..=3).map(|d| t.count(d)).collect::<Vec<_>>(), vec![8, 12, 6, 1]);
        let t = CellTopology::new(2);
        assert_eq!((0..=2).map(|d| t.count(d)).collect::<Vec<_>>(), vec![4, 4, 1]);
    }

    #[test]
    fn ordering() {
        let t = CellTopology::new(3);
        assert_eq!(t.entities[1][0].free, vec![0]);
        assert_eq!(t.entities[1][0].fixed, vec![(1, -1), (2, -1)]);
        assert_eq!(t.entities[1][1].fixed, vec![(1, 1), (2, -1)]);
        assert_eq!(t.entities[1][4].free, vec![1]);
        assert_eq!(t.entities[2][0].fixed, vec![(0, -1)]);
        assert_eq!(t.entities[2][1].fixed, vec![(0, 1)]);
        assert_eq!(t.entities[2][2].fixed, vec![(1, -1)]);
        assert_eq!(t.entities[0][5].fixed, vec![(0, 1), (1, -1), (2, 1)]);
    }

    #[test]
    fn vertex_sets() {
        let t = CellTopology::new(3);
        for d in 0..=3 {
            for e in &t.entities[d] {
                assert_eq!(e.vertices.len(), 1 << d);
                assert!(e.vertices.iter().all(|&v| v < 8));
            }
        }
        assert_eq!(t.entities[3][0].vertices.len(), 8);
    }
}
