//! Cell complexes produced by iterated subdivision.
//!
//! A `LevelComplex` is one level of a tower: a closed oriented surface
//! (sphere towers) or a disk (single-tile towers), stored as indexed cell
//! lists. Every cell knows its parent one level down and, on sphere towers,
//! its image cell under the subdivision map.

use serde::Serialize;

use crate::model::{EdgeTypeId, TileTypeId, VertexTypeId};

/// Identifies a cell in a tower. `level` counts subdivision rounds; level −1
/// has a single 2-cell, the undivided base surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellId {
    pub level: i32,
    pub dim: u8,
    pub index: usize,
}

/// The one level −1 cell; every level-0 cell has it as parent.
pub const ROOT: CellId = CellId {
    level: -1,
    dim: 2,
    index: 0,
};

impl CellId {
    pub fn new(level: i32, dim: u8, index: usize) -> CellId {
        CellId { level, dim, index }
    }
}

impl std::fmt::Display for CellId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.dim {
            0 => 'v',
            1 => 'e',
            _ => 'f',
        };
        write!(f, "{}{}@{}", kind, self.index, self.level)
    }
}

/// What a tower subdivides: the whole sphere, or the model disk of one tile
/// type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexKind {
    Sphere,
    Disk(TileTypeId),
}

/// `vtype` is the level-0 vertex type this vertex maps onto under the
/// n-fold subdivision map. `image` points one level down and is `None` at
/// level 0 and everywhere on disk towers.
#[derive(Debug, Clone)]
pub struct VertexCell {
    pub vtype: VertexTypeId,
    pub parent: CellId,
    pub image: Option<usize>,
    pub birth: i32,
}

/// Canonical direction: the n-fold subdivision map traverses the level-0
/// edge type forward. `tail`/`head` index vertices of the same level.
#[derive(Debug, Clone)]
pub struct EdgeCell {
    pub etype: EdgeTypeId,
    pub tail: usize,
    pub head: usize,
    pub parent: CellId,
    pub image: Option<usize>,
    pub birth: i32,
}

/// `boundary[i]` realizes slot `i` of the face's tile type: the edge index
/// and whether its canonical direction agrees with the counterclockwise
/// traversal. The flag always equals the model slot's sign.
#[derive(Debug, Clone)]
pub struct FaceCell {
    pub ftype: TileTypeId,
    pub boundary: Vec<(usize, bool)>,
    pub parent: CellId,
    pub image: Option<usize>,
    pub birth: i32,
}

#[derive(Debug, Clone)]
pub struct LevelComplex {
    pub level: i32,
    pub vertices: Vec<VertexCell>,
    pub edges: Vec<EdgeCell>,
    pub faces: Vec<FaceCell>,
}

impl LevelComplex {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.vertices.len(), self.edges.len(), self.faces.len())
    }

    pub fn cell_count(&self) -> usize {
        self.vertices.len() + self.edges.len() + self.faces.len()
    }

    pub fn euler(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Number of edge ends at `v`; a loop edge counts twice.
    pub fn vertex_valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.tail == v) as usize + (e.head == v) as usize)
            .sum()
    }

    /// Corner vertex of face `f` at boundary position `i`: the head of the
    /// counterclockwise-directed slot-`i` edge.
    pub fn face_corner(&self, f: usize, i: usize) -> usize {
        let (el, ccw_fwd) = self.faces[f].boundary[i];
        let e = &self.edges[el];
        if ccw_fwd {
            e.head
        } else {
            e.tail
        }
    }

    /// All corner vertices of face `f` in slot order.
    pub fn face_corners(&self, f: usize) -> Vec<usize> {
        (0..self.faces[f].boundary.len())
            .map(|i| self.face_corner(f, i))
            .collect()
    }

    /// Per edge, the (face, slot) pairs whose boundary uses it.
    pub fn edge_faces(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.edges.len()];
        for (fi, face) in self.faces.iter().enumerate() {
            for (slot, &(el, _)) in face.boundary.iter().enumerate() {
                out[el].push((fi, slot));
            }
        }
        out
    }

    pub fn vertex_id(&self, index: usize) -> CellId {
        CellId::new(self.level, 0, index)
    }

    pub fn edge_id(&self, index: usize) -> CellId {
        CellId::new(self.level, 1, index)
    }

    pub fn face_id(&self, index: usize) -> CellId {
        CellId::new(self.level, 2, index)
    }
}
