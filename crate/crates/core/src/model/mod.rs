//! Declarative description of a finite subdivision rule and its validation.

mod parse;
mod serialize;
mod validate;

pub use parse::{parse_fsr, ParseError};
pub use serialize::serialize_fsr;
pub use validate::{validate_fsr, CompiledScheme, Rule, SubedgeRef, ValidationReport};

use serde::{Deserialize, Serialize};

pub type VertexTypeId = usize;
pub type EdgeTypeId = usize;
pub type TileTypeId = usize;

/// Advisory weight tag on a vertex type. Analyzers recompute the real thing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightHint {
    None,
    Finite,
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexType {
    pub name: String,
    pub hint: WeightHint,
}

/// An edge type with a sign: `forward` means the edge traversed tail to head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrientedEdge {
    pub edge: EdgeTypeId,
    pub forward: bool,
}

/// How one edge type subdivides: an alternating list of directed images and
/// interior vertex types, `images.len() == points.len() + 1`.
///
/// Entry `q` of `images` is the level-0 edge the q-th subedge maps onto, read
/// in the direction of the subdivided edge itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeWord {
    pub images: Vec<OrientedEdge>,
    pub points: Vec<VertexTypeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeType {
    pub name: String,
    pub tail: VertexTypeId,
    pub head: VertexTypeId,
    pub word: EdgeWord,
}

/// One boundary position of a tile type: the directed edge along the
/// counterclockwise traversal and the corner vertex at its end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub edge: OrientedEdge,
    pub corner: VertexTypeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileType {
    pub name: String,
    pub slots: Vec<Slot>,
}

impl TileType {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Corner vertex type at position `i`: the head of slot `i`'s directed
    /// edge, equal to the tail of slot `i+1`'s.
    pub fn corner(&self, i: usize) -> VertexTypeId {
        self.slots[i].corner
    }
}

/// A 0-cell of a subdivision scheme, named relative to the model disk.
/// Boundary point indices are 1-based and count along the edge type's own
/// direction, not the slot traversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LocalVertex {
    Corner(usize),
    BoundaryPoint { slot: usize, index: usize },
    Interior(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeInterior {
    pub name: String,
    pub image: VertexTypeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeEdge {
    pub name: String,
    pub tail: LocalVertex,
    pub head: LocalVertex,
    pub image: OrientedEdge,
}

/// A directed reference to a scheme edge inside a face boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedLocal {
    pub edge: usize,
    pub forward: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeFace {
    pub name: String,
    /// Counterclockwise boundary chain.
    pub sides: Vec<DirectedLocal>,
    pub image: TileTypeId,
    /// Side `j` realizes slot `(j + rot) mod n` of the image type.
    pub rot: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionScheme {
    pub tile: TileTypeId,
    pub interiors: Vec<SchemeInterior>,
    pub edges: Vec<SchemeEdge>,
    pub faces: Vec<SchemeFace>,
}

/// One side of an edge type in the sphere complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSide {
    pub tile: TileTypeId,
    pub slot: usize,
}

/// Declared sphere gluing: the two sides of each edge type, in declaration
/// order. Validation checks they carry opposite signs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereGluing {
    pub sides: Vec<[EdgeSide; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FsrSpec {
    pub name: String,
    pub vertices: Vec<VertexType>,
    pub edges: Vec<EdgeType>,
    pub tiles: Vec<TileType>,
    /// One scheme per tile type, indexed by tile.
    pub schemes: Vec<SubdivisionScheme>,
    pub gluing: SphereGluing,
}

impl FsrSpec {
    pub fn vertex_name(&self, v: VertexTypeId) -> &str {
        &self.vertices[v].name
    }

    pub fn edge_name(&self, e: EdgeTypeId) -> &str {
        &self.edges[e].name
    }

    pub fn tile_name(&self, t: TileTypeId) -> &str {
        &self.tiles[t].name
    }

    /// Maximum boundary length over tile types.
    pub fn max_tile_len(&self) -> usize {
        self.tiles.iter().map(|t| t.len()).max().unwrap_or(0)
    }

    pub fn describe_oriented(&self, oe: OrientedEdge) -> String {
        format!(
            "{}{}",
            if oe.forward { '+' } else { '-' },
            self.edge_name(oe.edge)
        )
    }
}
