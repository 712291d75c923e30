//! Deciders for the combinatorial expansion properties.
//!
//! Each property reduces to cycle detection in a finite digraph whose
//! nodes are tile types paired with boundary cells. A cycle means the
//! offending configuration reproduces itself forever; acyclicity gives
//! a level after which the configuration has died out everywhere.

mod classify;
mod crosscheck;
mod esub;
mod separation;

pub use classify::{check_bounded_valence, classify_properties, ValenceOrbitGraph, ValenceReport};
pub use crosscheck::{crosscheck_at_bound, CrosscheckEntry, CrosscheckOutcome, CrosscheckReport};
pub use esub::check_esub;
pub use separation::{
    build_separation_graph, check_separation, verify_arcs, SepArc, SepNode, SeparationGraph,
};

use crate::model::{EdgeTypeId, FsrSpec, VertexTypeId};
use serde::Serialize;

/// The properties the analyzer can decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Property {
    Esub,
    Esep,
    VEsep,
    Vsep,
    M0comb,
    CombExp,
    BoundedValence,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Esub => "Esub",
            Property::Esep => "Esep",
            Property::VEsep => "VEsep",
            Property::Vsep => "Vsep",
            Property::M0comb => "M0comb",
            Property::CombExp => "CombExp",
            Property::BoundedValence => "BoundedValence",
        }
    }

    pub fn parse(s: &str) -> Option<Property> {
        let all = [
            Property::Esub,
            Property::Esep,
            Property::VEsep,
            Property::Vsep,
            Property::M0comb,
            Property::CombExp,
            Property::BoundedValence,
        ];
        all.into_iter().find(|p| p.name().eq_ignore_ascii_case(s))
    }
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Which pair of boundary cells a separation graph tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SeparationKind {
    /// disjoint closed boundary edges
    EE,
    /// distinct corners
    VV,
    /// a corner and a closed boundary edge not containing it
    VE,
}

impl SeparationKind {
    pub fn property(self) -> Property {
        match self {
            SeparationKind::EE => Property::Esep,
            SeparationKind::VV => Property::Vsep,
            SeparationKind::VE => Property::VEsep,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SeparationKind::EE => "EE",
            SeparationKind::VV => "VV",
            SeparationKind::VE => "VE",
        }
    }
}

/// How to read "disjoint" for boundary cells of a tile type.
///
/// `ModelDisk` compares positions around the model polygon, which is the
/// reading the level-bound theorem is proved for. `Glued` compares the
/// images in the glued sphere complex, so corners of equal vertex type
/// collide even when their positions differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum DisjointnessMode {
    #[default]
    ModelDisk,
    Glued,
}

impl DisjointnessMode {
    pub fn parse(s: &str) -> Option<DisjointnessMode> {
        match s {
            "model" | "model-disk" => Some(DisjointnessMode::ModelDisk),
            "glued" => Some(DisjointnessMode::Glued),
            _ => None,
        }
    }
}

/// Upper bound on separation-graph nodes: tile types times squared
/// maximum boundary length.
pub fn node_bound(spec: &FsrSpec) -> usize {
    spec.tiles.len() * spec.max_tile_len() * spec.max_tile_len()
}

/// Evidence attached to a failing verdict.
#[derive(Debug, Clone, Serialize)]
pub enum Witness {
    /// Cycle in a separation graph; the forbidden pair reproduces itself.
    SeparationCycle {
        kind: SeparationKind,
        nodes: Vec<SepNode>,
    },
    /// Cycle of edge types each of whose words is a single entry.
    EdgeCycle { edges: Vec<EdgeTypeId> },
    /// Vertices whose valence grows without bound under subdivision.
    IdealVertices { vertices: Vec<VertexTypeId> },
}

/// Outcome of deciding one property.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyVerdict {
    pub property: Property,
    pub holds: bool,
    /// present exactly when holds is false
    pub witness: Option<Witness>,
    /// when holds: the first level at which the defining condition is met
    /// (absent for BoundedValence, which is not a per-level condition)
    pub certified_level: Option<u32>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn property_names_round_trip() {
        for name in [
            "Esub",
            "Esep",
            "VEsep",
            "Vsep",
            "M0comb",
            "CombExp",
            "BoundedValence",
        ] {
            let p = Property::parse(name).unwrap();
            assert_eq!(p.name(), name);
        }
        assert_eq!(Property::parse("esub"), Some(Property::Esub));
        assert_eq!(Property::parse("nope"), None);
    }

    #[test]
    fn node_bound_matches_fixture_dimensions() {
        let rule = crate::fixtures::load_fixture("pillow2").unwrap();
        assert_eq!(node_bound(&rule.spec), 32);
        let rule = crate::fixtures::load_fixture("barycentric").unwrap();
        assert_eq!(node_bound(&rule.spec), 18);
    }
}
