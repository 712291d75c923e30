//! Full property classification and the valence orbit graph.

use super::esub::check_esub;
use super::separation::check_separation;
use super::{DisjointnessMode, Property, PropertyVerdict, SeparationKind, Witness};
use crate::engine::{local_degrees, DegreeError};
use crate::model::{Rule, VertexTypeId};
use serde::Serialize;

/// All six per-level properties, in a fixed order:
/// Esub, Esep, VEsep, Vsep, then the conjunctions M0comb and CombExp.
pub fn classify_properties(rule: &Rule, mode: DisjointnessMode) -> Vec<PropertyVerdict> {
    let esub = check_esub(rule);
    let esep = check_separation(rule, SeparationKind::EE, mode);
    let vesep = check_separation(rule, SeparationKind::VE, mode);
    let vsep = check_separation(rule, SeparationKind::VV, mode);
    let m0comb = conjunction(Property::M0comb, &[&esub, &esep]);
    let combexp = conjunction(Property::CombExp, &[&esep, &vesep, &vsep]);
    // corollaries of the level-bound theorem; cheap to keep hot
    debug_assert!(!vsep.holds || esub.holds);
    debug_assert!(!combexp.holds || m0comb.holds);
    vec![esub, esep, vesep, vsep, m0comb, combexp]
}

fn conjunction(property: Property, parts: &[&PropertyVerdict]) -> PropertyVerdict {
    let holds = parts.iter().all(|p| p.holds);
    if holds {
        let certified = parts.iter().filter_map(|p| p.certified_level).max();
        PropertyVerdict {
            property,
            holds: true,
            witness: None,
            certified_level: certified,
        }
    } else {
        let first_bad = parts.iter().find(|p| !p.holds).unwrap();
        PropertyVerdict {
            property,
            holds: false,
            witness: first_bad.witness.clone(),
            certified_level: None,
        }
    }
}

/// Functional graph on level-0 vertex types: the successor is the vertex
/// map, the weight is the local degree. Valence along an orbit multiplies
/// by the weights, so a cycle with weight product above one blows up.
#[derive(Debug, Clone, Serialize)]
pub struct ValenceOrbitGraph {
    pub successor: Vec<VertexTypeId>,
    pub weight: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValenceReport {
    pub verdict: PropertyVerdict,
    /// vertices whose orbit reaches a cycle with weight product > 1
    pub ideal: Vec<VertexTypeId>,
    pub graph: ValenceOrbitGraph,
}

pub fn check_bounded_valence(rule: &Rule) -> Result<ValenceReport, DegreeError> {
    let weight = local_degrees(rule)?;
    let successor = rule.vertex_map.clone();
    let nv = successor.len();
    let mut ideal = Vec::new();
    for v in 0..nv {
        // nv steps land inside the orbit's cycle
        let mut at = v;
        for _ in 0..nv {
            at = successor[at];
        }
        let start = at;
        let mut product: u128 = weight[start] as u128;
        let mut u = successor[start];
        while u != start {
            product = product.saturating_mul(weight[u] as u128);
            u = successor[u];
        }
        if product > 1 {
            ideal.push(v);
        }
    }
    let holds = ideal.is_empty();
    let verdict = PropertyVerdict {
        property: Property::BoundedValence,
        holds,
        witness: if holds {
            None
        } else {
            Some(Witness::IdealVertices {
                vertices: ideal.clone(),
            })
        },
        certified_level: None,
    };
    Ok(ValenceReport {
        verdict,
        ideal,
        graph: ValenceOrbitGraph { successor, weight },
    })
}
