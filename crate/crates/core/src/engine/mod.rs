//! Iterated subdivision: explicit level complexes with parent and image
//! labels, censuses, local degrees and the returning-tile computation.

mod census;
mod complex;
mod dynamics;
mod subdivide;

pub use census::{census, Census};
pub use complex::{CellId, ComplexKind, EdgeCell, FaceCell, LevelComplex, VertexCell, ROOT};
pub use dynamics::{
    find_returning_tile, growth_constants, local_degree, local_degrees, DegreeError,
    GrowthConstants, ReturningTile,
};
pub use subdivide::{
    subdivide_sphere, subdivide_tile, BudgetExceeded, CellBudget, ChildIndex, Tower,
};
