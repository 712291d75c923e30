//! Combinatorial engine for finite subdivision rules whose subdivision map
//! is an orientation-preserving branched covering of the sphere.
//!
//! A rule is described by a finite set of tile types (model polygons), edge
//! types with subdivision words, one subdivision scheme per tile type, and a
//! gluing of the tile boundaries into a sphere complex. Everything downstream
//! is exact: complexes are built level by level by pasting schemes, and the
//! expansion properties are decided by cycle detection in finite digraphs.

pub mod analyze;
pub mod engine;
pub mod fixtures;
pub mod gen;
pub mod graphs;
pub mod model;
pub mod probes;
pub mod render;
pub mod report;

pub use model::{parse_fsr, serialize_fsr, validate_fsr, FsrSpec, Rule, ValidationReport};
