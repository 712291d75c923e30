//! Brute-force agreement check for the graph-based verdicts.
//!
//! False verdicts are replayed: the witness cycle of length c promises a
//! concrete violating configuration in the c-fold subdivision, and we go
//! find it cell by cell. True verdicts are confirmed by scanning the
//! certified level of every tile type for a counterexample.

use super::esub::check_esub;
use super::separation::{check_separation, pair_allowed};
use super::{DisjointnessMode, Property, PropertyVerdict, SeparationKind, Witness};
use crate::engine::{subdivide_sphere, subdivide_tile, CellBudget, Tower};
use crate::model::{EdgeTypeId, Rule, TileTypeId};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckReport {
    pub property: Property,
    pub mode: DisjointnessMode,
    pub n_max: u32,
    /// the kl² bound on separation-graph nodes, reported even when the
    /// scan stops earlier
    pub node_bound: usize,
    pub entries: Vec<CrosscheckEntry>,
    pub agreed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckEntry {
    pub property: Property,
    pub verdict: PropertyVerdict,
    pub outcome: CrosscheckOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub enum CrosscheckOutcome {
    /// a tile at `level` contains cells of both tracked boundary cells
    ViolationReplayed {
        level: u32,
        tile: TileTypeId,
        face: usize,
    },
    /// the edge still has a single subedge at `level`
    EdgeNeverSplit {
        level: u32,
        edge: EdgeTypeId,
    },
    /// no counterexample anywhere at the certified level
    ConfirmedUpTo {
        level: u32,
    },
    /// the check wanted a deeper level than n_max or the cell budget allows
    Capped {
        wanted: u32,
        reason: String,
    },
    /// the brute force contradicts the verdict
    Disagreement {
        level: u32,
        detail: String,
    },
    NotApplicable,
}

fn components(property: Property) -> Vec<Property> {
    match property {
        Property::M0comb => vec![Property::Esub, Property::Esep],
        Property::CombExp => vec![Property::Esep, Property::VEsep, Property::Vsep],
        other => vec![other],
    }
}

fn kind_of(property: Property) -> Option<SeparationKind> {
    match property {
        Property::Esep => Some(SeparationKind::EE),
        Property::VEsep => Some(SeparationKind::VE),
        Property::Vsep => Some(SeparationKind::VV),
        _ => None,
    }
}

/// Base slots and base corners met by one face of a subdivided disk,
/// found by chasing parents down to the level-0 cells.
fn face_base_cells(tower: &Tower, level: u32, face: usize) -> (Vec<usize>, Vec<usize>) {
    let cx = tower.level(level);
    let n = cx.faces[face].boundary.len();
    let mut slots = Vec::new();
    let mut corners = Vec::new();
    for p in 0..n {
        let (el, _) = cx.faces[face].boundary[p];
        let anc = tower.level0_ancestor(cx.edge_id(el));
        if anc.dim == 1 && !slots.contains(&anc.index) {
            slots.push(anc.index);
        }
        let v = cx.face_corner(face, p);
        let anc = tower.level0_ancestor(cx.vertex_id(v));
        if anc.dim == 0 && !corners.contains(&anc.index) {
            corners.push(anc.index);
        }
    }
    (slots, corners)
}

/// A face index together with the boundary-cell pair it realizes.
type FacePair = (usize, (usize, usize));

/// First face of the n-fold subdivision of tile t that realizes a
/// forbidden pair: the given one, or any mode-disjoint pair when `want`
/// is None. Returns the face index and the pair.
fn scan_disk(
    rule: &Rule,
    t: TileTypeId,
    n: u32,
    kind: SeparationKind,
    mode: DisjointnessMode,
    want: Option<(usize, usize)>,
    budget: &CellBudget,
) -> Result<Option<FacePair>, String> {
    let tower = subdivide_tile(rule, t, n, budget).map_err(|e| e.to_string())?;
    let cx = tower.level(n);
    for face in 0..cx.faces.len() {
        let (slots, corners) = face_base_cells(&tower, n, face);
        let (xs, ys): (&[usize], &[usize]) = match kind {
            SeparationKind::EE => (&slots, &slots),
            SeparationKind::VV => (&corners, &corners),
            SeparationKind::VE => (&corners, &slots),
        };
        for &x in xs {
            for &y in ys {
                let hit = match want {
                    Some((a1, a2)) => x == a1 && y == a2,
                    None => pair_allowed(rule, t, x, y, kind, mode),
                };
                if hit {
                    return Ok(Some((face, (x, y))));
                }
            }
        }
    }
    Ok(None)
}

/// Number of level-n edges descending from each base edge type of the
/// subdivided sphere.
fn edge_descendant_counts(rule: &Rule, tower: &Tower, n: u32) -> Vec<u64> {
    let mut counts = vec![0u64; rule.spec.edges.len()];
    let cx = tower.level(n);
    for el in 0..cx.edges.len() {
        let anc = tower.level0_ancestor(cx.edge_id(el));
        if anc.dim == 1 {
            counts[anc.index] += 1;
        }
    }
    counts
}

fn check_separation_entry(
    rule: &Rule,
    property: Property,
    n_max: u32,
    mode: DisjointnessMode,
    budget: &CellBudget,
) -> CrosscheckEntry {
    let kind = kind_of(property).unwrap();
    let verdict = check_separation(rule, kind, mode);
    let outcome = if let Some(Witness::SeparationCycle { nodes, .. }) = &verdict.witness {
        let c = nodes.len() as u32;
        let first = nodes[0];
        if c > n_max {
            CrosscheckOutcome::Capped {
                wanted: c,
                reason: format!("witness cycle length {c} exceeds n_max {n_max}"),
            }
        } else {
            match scan_disk(
                rule,
                first.tile,
                c,
                kind,
                mode,
                Some((first.a1, first.a2)),
                budget,
            ) {
                Err(reason) => CrosscheckOutcome::Capped { wanted: c, reason },
                Ok(Some((face, _))) => CrosscheckOutcome::ViolationReplayed {
                    level: c,
                    tile: first.tile,
                    face,
                },
                Ok(None) => CrosscheckOutcome::Disagreement {
                    level: c,
                    detail: format!(
                        "no face of the {c}-fold subdivision of tile {} realizes the pair ({}, {})",
                        first.tile, first.a1, first.a2
                    ),
                },
            }
        }
    } else {
        let wanted = verdict.certified_level.unwrap();
        if wanted > n_max {
            CrosscheckOutcome::Capped {
                wanted,
                reason: format!("certified level {wanted} exceeds n_max {n_max}"),
            }
        } else {
            let mut bad = None;
            for t in 0..rule.spec.tiles.len() {
                match scan_disk(rule, t, wanted, kind, mode, None, budget) {
                    Err(reason) => {
                        bad = Some(CrosscheckOutcome::Capped { wanted, reason });
                        break;
                    }
                    Ok(Some((face, pair))) => {
                        bad = Some(CrosscheckOutcome::Disagreement {
                            level: wanted,
                            detail: format!(
                                "face {face} of the {wanted}-fold subdivision of tile {t} \
                                 still realizes the pair ({}, {})",
                                pair.0, pair.1
                            ),
                        });
                        break;
                    }
                    Ok(None) => {}
                }
            }
            bad.unwrap_or(CrosscheckOutcome::ConfirmedUpTo { level: wanted })
        }
    };
    CrosscheckEntry {
        property,
        verdict,
        outcome,
    }
}

fn check_esub_entry(rule: &Rule, n_max: u32, budget: &CellBudget) -> CrosscheckEntry {
    let verdict = check_esub(rule);
    let outcome = if let Some(Witness::EdgeCycle { edges }) = &verdict.witness {
        let c = edges.len() as u32;
        let e = edges[0];
        if c > n_max {
            CrosscheckOutcome::Capped {
                wanted: c,
                reason: format!("witness cycle length {c} exceeds n_max {n_max}"),
            }
        } else {
            match subdivide_sphere(rule, c, budget) {
                Err(err) => CrosscheckOutcome::Capped {
                    wanted: c,
                    reason: err.to_string(),
                },
                Ok(tower) => {
                    let counts = edge_descendant_counts(rule, &tower, c);
                    if counts[e] == 1 {
                        CrosscheckOutcome::EdgeNeverSplit { level: c, edge: e }
                    } else {
                        CrosscheckOutcome::Disagreement {
                            level: c,
                            detail: format!(
                                "edge {} has {} subedges at level {c}, expected 1",
                                rule.spec.edges[e].name, counts[e]
                            ),
                        }
                    }
                }
            }
        }
    } else {
        let wanted = verdict.certified_level.unwrap();
        if wanted > n_max {
            CrosscheckOutcome::Capped {
                wanted,
                reason: format!("certified level {wanted} exceeds n_max {n_max}"),
            }
        } else {
            match subdivide_sphere(rule, wanted, budget) {
                Err(err) => CrosscheckOutcome::Capped {
                    wanted,
                    reason: err.to_string(),
                },
                Ok(tower) => {
                    let counts = edge_descendant_counts(rule, &tower, wanted);
                    match counts.iter().position(|&c| c < 2) {
                        Some(e) => CrosscheckOutcome::Disagreement {
                            level: wanted,
                            detail: format!(
                                "edge {} still has {} subedge(s) at level {wanted}",
                                rule.spec.edges[e].name, counts[e]
                            ),
                        },
                        None => CrosscheckOutcome::ConfirmedUpTo { level: wanted },
                    }
                }
            }
        }
    };
    CrosscheckEntry {
        property: Property::Esub,
        verdict,
        outcome,
    }
}

pub fn crosscheck_at_bound(
    rule: &Rule,
    property: Property,
    n_max: u32,
    mode: DisjointnessMode,
) -> CrosscheckReport {
    let budget = CellBudget::default();
    let mut entries = Vec::new();
    for part in components(property) {
        let entry = match part {
            Property::Esub => check_esub_entry(rule, n_max, &budget),
            Property::Esep | Property::VEsep | Property::Vsep => {
                check_separation_entry(rule, part, n_max, mode, &budget)
            }
            other => CrosscheckEntry {
                property: other,
                verdict: PropertyVerdict {
                    property: other,
                    holds: true,
                    witness: None,
                    certified_level: None,
                },
                outcome: CrosscheckOutcome::NotApplicable,
            },
        };
        entries.push(entry);
    }
    let agreed = entries
        .iter()
        .all(|e| !matches!(e.outcome, CrosscheckOutcome::Disagreement { .. }));
    CrosscheckReport {
        property,
        mode,
        n_max,
        node_bound: super::node_bound(&rule.spec),
        entries,
        agreed,
    }
}
