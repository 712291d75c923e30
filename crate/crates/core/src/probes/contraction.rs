//! One-sided mean-contraction report.
//!
//! CERTIFIED rests on a sufficient condition (edge and vertex separation
//! both hold). WITNESS only collects candidate obstructions: a
//! non-winding port cycle at every level up to n_max. Anything else is
//! UNKNOWN; the report never claims more than the computation proves.

use super::portwalk::{find_non_winding, port_walk_graph, PortCycle};
use super::ProbeStatus;
use crate::analyze::{check_separation, DisjointnessMode, PropertyVerdict, SeparationKind};
use crate::engine::CellBudget;
use crate::model::Rule;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    pub n_max: u32,
    pub status: ProbeStatus,
    pub edge_separation: PropertyVerdict,
    pub vertex_separation: PropertyVerdict,
    /// one non-winding cycle per level, when status is Witness
    pub cycles: Vec<(u32, PortCycle)>,
    pub note: Option<String>,
}

pub fn contraction_report(
    rule: &Rule,
    n_max: u32,
    mode: DisjointnessMode,
    budget: &CellBudget,
) -> ContractionReport {
    assert!(n_max >= 1);
    let esep = check_separation(rule, SeparationKind::EE, mode);
    let vsep = check_separation(rule, SeparationKind::VV, mode);
    if esep.holds && vsep.holds {
        return ContractionReport {
            n_max,
            status: ProbeStatus::Certified,
            edge_separation: esep,
            vertex_separation: vsep,
            cycles: Vec::new(),
            note: None,
        };
    }
    let mut cycles = Vec::new();
    for n in 1..=n_max {
        let graph = match port_walk_graph(rule, n, budget) {
            Ok(g) => g,
            Err(e) => {
                return ContractionReport {
                    n_max,
                    status: ProbeStatus::Unknown,
                    edge_separation: esep,
                    vertex_separation: vsep,
                    cycles: Vec::new(),
                    note: Some(format!("level {} not built: {}", n, e)),
                };
            }
        };
        match find_non_winding(rule, &graph) {
            Some(c) => cycles.push((n, c)),
            None => {
                return ContractionReport {
                    n_max,
                    status: ProbeStatus::Unknown,
                    edge_separation: esep,
                    vertex_separation: vsep,
                    cycles: Vec::new(),
                    note: Some(format!("no non-winding closed walk at level {}", n)),
                };
            }
        }
    }
    ContractionReport {
        n_max,
        status: ProbeStatus::Witness,
        edge_separation: esep,
        vertex_separation: vsep,
        cycles,
        note: None,
    }
}
