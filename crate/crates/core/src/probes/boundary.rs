//! Persistent-pair scan on the sphere tower.
//!
//! A level-L tile meets a base cell when one of its vertices or edges
//! sits over it. Pairs of disjoint base cells met by one tile persist
//! as obstructions to Gromov-hyperbolic behavior of the history graph,
//! so the report lists them together with the ideal vertices.

use super::ProbeError;
use crate::analyze::check_bounded_valence;
use crate::engine::{CellBudget, LevelComplex, Tower};
use crate::model::Rule;
use serde::Serialize;

/// a base cell: dimension 0 or 1 plus its index in the base complex
pub type BaseCell = (u8, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PersistentPair {
    pub a: BaseCell,
    pub b: BaseCell,
    /// level-`depth` face that meets both
    pub witness_face: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryReport {
    pub depth: u32,
    pub pairs: Vec<PersistentPair>,
    pub ideal_vertices: Vec<usize>,
}

fn met_cells(tower: &Tower, level: u32, face: usize) -> Vec<BaseCell> {
    let cx = tower.level(level);
    let mut met = Vec::new();
    for v in cx.face_corners(face) {
        let anc = tower.level0_ancestor(cx.vertex_id(v));
        if anc.dim <= 1 {
            met.push((anc.dim, anc.index));
        }
    }
    for &(el, _) in &cx.faces[face].boundary {
        let anc = tower.level0_ancestor(cx.edge_id(el));
        if anc.dim == 1 {
            met.push((1, anc.index));
        }
    }
    met.sort_unstable();
    met.dedup();
    met
}

fn disjoint(base: &LevelComplex, a: BaseCell, b: BaseCell) -> bool {
    match (a, b) {
        ((0, u), (0, v)) => u != v,
        ((0, v), (1, e)) | ((1, e), (0, v)) => {
            let edge = &base.edges[e];
            v != edge.tail && v != edge.head
        }
        ((1, e1), (1, e2)) => {
            if e1 == e2 {
                return false;
            }
            let (x, y) = (&base.edges[e1], &base.edges[e2]);
            x.tail != y.tail && x.tail != y.head && x.head != y.tail && x.head != y.head
        }
        _ => unreachable!(),
    }
}

pub fn boundary_pair_report(
    rule: &Rule,
    depth: u32,
    budget: &CellBudget,
) -> Result<BoundaryReport, ProbeError> {
    let mut tower = Tower::sphere(rule);
    tower.grow_to(depth, budget)?;
    let base = tower.level(0);
    let mut pairs: Vec<PersistentPair> = Vec::new();
    for face in 0..tower.level(depth).faces.len() {
        let met = met_cells(&tower, depth, face);
        for i in 0..met.len() {
            for j in i + 1..met.len() {
                if !disjoint(base, met[i], met[j]) {
                    continue;
                }
                let (a, b) = (met[i], met[j]);
                if !pairs.iter().any(|p| p.a == a && p.b == b) {
                    pairs.push(PersistentPair {
                        a,
                        b,
                        witness_face: face,
                    });
                }
            }
        }
    }
    pairs.sort_unstable_by_key(|p| (p.a, p.b));
    let valence = check_bounded_valence(rule)?;
    Ok(BoundaryReport {
        depth,
        pairs,
        ideal_vertices: valence.ideal,
    })
}
