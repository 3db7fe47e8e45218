//! Structured box meshes of `[0,1]^n` and global DOF numbering.
//!
//! Every cell is a translate of the others and uses the same local frame, so
//! each global entity is oriented by ascending coordinate along its free axes
//! and seen identically from all adjacent cells. Local signs are therefore all
//! `+1`; they are still stored so that assembly code stays frame-agnostic.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::MAX_DIM;
use crate::refelem::{CellTopology, Element};

/// Entities of one shape: a fixed set of free axes.
#[derive(Clone, Debug)]
struct EntityType {
    free: Vec<usize>,
    /// Extent per axis: `N_i` along free axes, `N_i + 1` along fixed ones.
    extent: [usize; MAX_DIM],
    offset: usize,
    count: usize,
}

#[derive(Clone, Debug)]
pub struct BoxMesh {
    pub n: usize,
    pub divisions: [usize; MAX_DIM],
    pub h: [f64; MAX_DIM],
    topology: CellTopology,
    /// Grouped by dimension, in reference-topology group order.
    types: Vec<EntityType>,
    dim_offsets: Vec<usize>,
}

impl BoxMesh {
    pub fn new(n: usize, divisions: &[usize]) -> Result<Self> {
        if !(2..=3).contains(&n) {
            return Err(Error::InvalidMesh(format!("dimension {n} is not supported")));
        }
        if divisions.len() != n || divisions.contains(&0) {
            return Err(Error::InvalidMesh(format!(
                "need {n} positive division counts, got {divisions:?}"
            )));
        }
        let mut div = [1; MAX_DIM];
        let mut h = [1.0; MAX_DIM];
        for i in 0..n {
            div[i] = divisions[i];
            h[i] = 1.0 / divisions[i] as f64;
        }
        let topology = CellTopology::new(n);
        let mut types: Vec<EntityType> = Vec::new();
        let mut dim_offsets = Vec::with_capacity(n + 2);
        let mut offset = 0;
        for d in 0..=n {
            dim_offsets.push(offset);
            for e in &topology.entities[d] {
                if types.iter().any(|t| t.free == e.free) {
                    continue;
                }
                let mut extent = [1; MAX_DIM];
                for i in 0..n {
                    extent[i] = if e.free.contains(&i) { div[i] } else { div[i] + 1 };
                }
                let count = extent[..n].iter().product();
                types.push(EntityType {
                    free: e.free.clone(),
                    extent,
                    offset,
                    count,
                });
                offset += count;
            }
        }
        dim_offsets.push(offset);
        Ok(Self {
            n,
            divisions: div,
            h,
            topology,
            types,
            dim_offsets,
        })
    }

    /// Uniform mesh with `divisions` cells per axis.
    pub fn uniform(n: usize, divisions: usize) -> Result<Self> {
        Self::new(n, &vec![divisions; n])
    }

    pub fn topology(&self) -> &CellTopology {
        &self.topology
    }

    pub fn num_cells(&self) -> usize {
        self.divisions[..self.n].iter().product()
    }

    /// Number of global entities of dimension `d`.
    pub fn entity_count(&self, d: usize) -> usize {
        self.dim_offsets[d + 1] - self.dim_offsets[d]
    }

    pub fn total_entities(&self) -> usize {
        self.dim_offsets[self.n + 1]
    }

    /// Entities of dimension `d` whose free axes are exactly `free`.
    pub fn entity_count_by_axes(&self, free: &[usize]) -> usize {
        self.types.iter().find(|t| t.free == free).map_or(0, |t| t.count)
    }

    /// Multi-index of a cell; axis 0 varies fastest.
    pub fn cell_index(&self, cell: usize) -> [usize; MAX_DIM] {
        let mut idx = [0; MAX_DIM];
        let mut rem = cell;
        for (i, slot) in idx.iter_mut().enumerate().take(self.n) {
            *slot = rem % self.divisions[i];
            rem /= self.divisions[i];
        }
        idx
    }

    /// Lower corner of a cell.
    pub fn cell_origin(&self, cell: usize) -> [f64; MAX_DIM] {
        let idx = self.cell_index(cell);
        let mut x = [0.0; MAX_DIM];
        for i in 0..self.n {
            x[i] = idx[i] as f64 * self.h[i];
        }
        x
    }

    /// Physical point of reference coordinates `xi` in `cell`.
    pub fn map_point(&self, cell: usize, xi: &[f64]) -> [f64; MAX_DIM] {
        let mut x = self.cell_origin(cell);
        for i in 0..self.n {
            x[i] += 0.5 * (xi[i] + 1.0) * self.h[i];
        }
        x
    }

    fn type_of(&self, free: &[usize]) -> &EntityType {
        self.types.iter().find(|t| t.free == free).expect("entity type exists")
    }

    fn linear(&self, t: &EntityType, pos: &[usize; MAX_DIM]) -> usize {
        let mut idx = 0;
        for i in (0..self.n).rev() {
            idx = idx * t.extent[i] + pos[i];
        }
        t.offset + idx
    }

    /// Global entity indices of a cell's sub-entities, in reference-topology order.
    pub fn cell_entities(&self, cell: usize) -> Vec<usize> {
        let c = self.cell_index(cell);
        self.topology
            .iter()
            .map(|e| {
                let mut pos = c;
                for &(a, s) in &e.fixed {
                    if s > 0 {
                        pos[a] += 1;
                    }
                }
                self.linear(self.type_of(&e.free), &pos)
            })
            .collect()
    }

    /// Dimension and lattice position of a global entity.
    pub fn entity_position(&self, global: usize) -> (usize, Vec<usize>, [usize; MAX_DIM]) {
        let t = self
            .types
            .iter()
            .find(|t| global >= t.offset && global < t.offset + t.count)
            .expect("entity index in range");
        let mut rem = global - t.offset;
        let mut pos = [0; MAX_DIM];
        for i in 0..self.n {
            pos[i] = rem % t.extent[i];
            rem /= t.extent[i];
        }
        (t.free.len(), t.free.clone(), pos)
    }

    /// Whether a global entity lies on `∂[0,1]^n`.
    pub fn is_boundary_entity(&self, global: usize) -> bool {
        let (_, free, pos) = self.entity_position(global);
        (0..self.n).any(|i| !free.contains(&i) && (pos[i] == 0 || pos[i] == self.divisions[i]))
    }
}

/// Entity-major global numbering of an element's basis on a mesh.
#[derive(Clone, Debug)]
pub struct GlobalDofMap {
    pub element: Arc<Element>,
    pub total: usize,
    /// Local basis size.
    pub local: usize,
    dofs: Vec<usize>,
    signs: Vec<i8>,
    /// First DOF of each global entity, plus a final sentinel.
    entity_offsets: Vec<usize>,
}

impl GlobalDofMap {
    pub fn cell_dofs(&self, cell: usize) -> &[usize] {
        &self.dofs[cell * self.local..(cell + 1) * self.local]
    }

    pub fn cell_signs(&self, cell: usize) -> &[i8] {
        &self.signs[cell * self.local..(cell + 1) * self.local]
    }

    pub fn num_cells(&self) -> usize {
        self.dofs.len() / self.local.max(1)
    }

    /// Global DOFs attached to a global entity.
    pub fn entity_dofs(&self, global_entity: usize) -> std::ops::Range<usize> {
        self.entity_offsets[global_entity]..self.entity_offsets[global_entity + 1]
    }
}

pub fn global_numbering(mesh: &BoxMesh, element: &Arc<Element>) -> Result<GlobalDofMap> {
    if mesh.n != element.n {
        return Err(Error::DimensionMismatch {
            expected: mesh.n,
            found: element.n,
        });
    }
    let counts = element.entity_dof_counts();
    let mut entity_offsets = Vec::with_capacity(mesh.total_entities() + 1);
    let mut total = 0;
    for d in 0..=mesh.n {
        for _ in 0..mesh.entity_count(d) {
            entity_offsets.push(total);
            total += counts[d];
        }
    }
    entity_offsets.push(total);

    let local = element.dim();
    let ncells = mesh.num_cells();
    let mut dofs = Vec::with_capacity(ncells * local);
    for c in 0..ncells {
        let ents = mesh.cell_entities(c);
        for (range, &g) in element.ranges().iter().zip(&ents) {
            let start = entity_offsets[g];
            dofs.extend((0..range.len()).map(|i| start + i));
        }
    }
    Ok(GlobalDofMap {
        element: element.clone(),
        total,
        local,
        signs: vec![1; dofs.len()],
        dofs,
        entity_offsets,
    })
}

/// Which trace a boundary condition constrains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceKind {
    /// Values of a 0-form.
    Full,
    /// Tangential components of a 1-form.
    Tangential,
    /// Normal component of an `(n-1)`-form.
    Normal,
}

/// Sorted global indices of the DOFs attached to boundary entities.
pub fn boundary_dofs(mesh: &BoxMesh, map: &GlobalDofMap, kind: TraceKind) -> Result<Vec<usize>> {
    let (n, k) = (mesh.n, map.element.k);
    let ok = match kind {
        TraceKind::Full => k == 0,
        TraceKind::Tangential => k == 1 && k < n,
        TraceKind::Normal => k + 1 == n,
    };
    if !ok {
        let name = match kind {
            TraceKind::Full => "full-trace",
            TraceKind::Tangential => "tangential-trace",
            TraceKind::Normal => "normal-trace",
        };
        return Err(Error::InapplicableTrace { kind: name, n, k });
    }
    let mut out = Vec::new();
    for g in 0..mesh.total_entities() {
        let r = map.entity_dofs(g);
        if !r.is_empty() && mesh.is_boundary_entity(g) {
            out.extend(r);
        }
    }
    Ok(out)
}

/// The trace kind natural to a form degree, if any.
pub fn natural_trace(n: usize, k: usize) -> Option<TraceKind> {
    match k {
        0 => Some(TraceKind::Full),
        1 if n > 1 => Some(TraceKind::Tangential),
        _ if k + 1 == n => Some(TraceKind::Normal),
        _ => None,
    }
}
