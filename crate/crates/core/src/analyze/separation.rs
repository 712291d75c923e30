//! Separation graphs: one node per tile type and forbidden boundary
//! pair, one arc per subtile that carries the pair into the next level.

use super::{DisjointnessMode, PropertyVerdict, SeparationKind, Witness};
use crate::engine::{subdivide_tile, CellBudget};
use crate::model::{LocalVertex, Rule, TileTypeId};
use serde::Serialize;
use std::collections::VecDeque;

/// A node (t, a1, a2). For EE both entries are slot positions, for VV
/// both are corner positions, for VE a1 is a corner and a2 a slot.
/// Pairs are ordered, so (t, x, y) and (t, y, x) are distinct nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SepNode {
    pub tile: TileTypeId,
    pub a1: usize,
    pub a2: usize,
}

/// An arc, witnessed by the scheme face (of the source tile's scheme)
/// whose subtile contains cells of both tracked boundary cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SepArc {
    pub from: usize,
    pub to: usize,
    pub face: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationGraph {
    pub kind: SeparationKind,
    pub mode: DisjointnessMode,
    pub nodes: Vec<SepNode>,
    /// outgoing arcs per node, in scheme-face then position order
    pub arcs: Vec<Vec<SepArc>>,
}

impl SeparationGraph {
    pub fn arc_count(&self) -> usize {
        self.arcs.iter().map(|a| a.len()).sum()
    }
}

pub(crate) fn slots_disjoint(
    rule: &Rule,
    t: TileTypeId,
    j: usize,
    jp: usize,
    mode: DisjointnessMode,
) -> bool {
    match mode {
        DisjointnessMode::ModelDisk => {
            let n = rule.spec.tiles[t].len();
            jp != j && jp != (j + 1) % n && jp != (j + n - 1) % n
        }
        DisjointnessMode::Glued => {
            let e = rule.spec.tiles[t].slots[j].edge.edge;
            let ep = rule.spec.tiles[t].slots[jp].edge.edge;
            e != ep && {
                let a = &rule.spec.edges[e];
                let b = &rule.spec.edges[ep];
                a.tail != b.tail && a.tail != b.head && a.head != b.tail && a.head != b.head
            }
        }
    }
}

pub(crate) fn corners_disjoint(
    rule: &Rule,
    t: TileTypeId,
    i: usize,
    ip: usize,
    mode: DisjointnessMode,
) -> bool {
    match mode {
        DisjointnessMode::ModelDisk => i != ip,
        DisjointnessMode::Glued => rule.spec.tiles[t].corner(i) != rule.spec.tiles[t].corner(ip),
    }
}

pub(crate) fn corner_slot_disjoint(
    rule: &Rule,
    t: TileTypeId,
    u: usize,
    j: usize,
    mode: DisjointnessMode,
) -> bool {
    match mode {
        DisjointnessMode::ModelDisk => {
            let n = rule.spec.tiles[t].len();
            u != j && u != (j + n - 1) % n
        }
        DisjointnessMode::Glued => {
            let w = rule.spec.tiles[t].corner(u);
            let e = &rule.spec.edges[rule.spec.tiles[t].slots[j].edge.edge];
            w != e.tail && w != e.head
        }
    }
}

pub(crate) fn pair_allowed(
    rule: &Rule,
    t: TileTypeId,
    a1: usize,
    a2: usize,
    kind: SeparationKind,
    mode: DisjointnessMode,
) -> bool {
    match kind {
        SeparationKind::EE => slots_disjoint(rule, t, a1, a2, mode),
        SeparationKind::VV => corners_disjoint(rule, t, a1, a2, mode),
        SeparationKind::VE => corner_slot_disjoint(rule, t, a1, a2, mode),
    }
}

/// Per subtile: which base slot each subtile slot lies in, and which
/// base corner each subtile corner coincides with, if any.
struct SubtileCells {
    image: TileTypeId,
    slot_in: Vec<Option<usize>>,
    corner_at: Vec<Option<usize>>,
}

fn subtile_cells(rule: &Rule, t: TileTypeId) -> Vec<SubtileCells> {
    let scheme = rule.scheme(t);
    let compiled = &rule.schemes[t];
    scheme
        .faces
        .iter()
        .map(|g| {
            let m = g.sides.len();
            let mut slot_in = vec![None; m];
            let mut corner_at = vec![None; m];
            for (j, side) in g.sides.iter().enumerate() {
                let p = (j + g.rot) % m;
                slot_in[p] = compiled.role[side.edge].map(|r| r.slot);
                let se = &scheme.edges[side.edge];
                let end = if side.forward { se.head } else { se.tail };
                if let LocalVertex::Corner(i) = end {
                    corner_at[p] = Some(i);
                }
            }
            SubtileCells {
                image: g.image,
                slot_in,
                corner_at,
            }
        })
        .collect()
}

pub fn build_separation_graph(
    rule: &Rule,
    kind: SeparationKind,
    mode: DisjointnessMode,
) -> SeparationGraph {
    let spec = &rule.spec;
    let mut nodes = Vec::new();
    // index of (t, a1, a2) in nodes; max_tile_len strides keep it dense
    let l = spec.max_tile_len();
    let mut index = vec![usize::MAX; spec.tiles.len() * l * l];
    for (t, tile) in spec.tiles.iter().enumerate() {
        let n = tile.len();
        for a1 in 0..n {
            for a2 in 0..n {
                if pair_allowed(rule, t, a1, a2, kind, mode) {
                    index[(t * l + a1) * l + a2] = nodes.len();
                    nodes.push(SepNode { tile: t, a1, a2 });
                }
            }
        }
    }

    let per_tile: Vec<Vec<SubtileCells>> = (0..spec.tiles.len())
        .map(|t| subtile_cells(rule, t))
        .collect();

    let mut arcs: Vec<Vec<SepArc>> = vec![Vec::new(); nodes.len()];
    for (from, node) in nodes.iter().enumerate() {
        for (gi, sub) in per_tile[node.tile].iter().enumerate() {
            let m = sub.slot_in.len();
            let hits = |want: usize, table: &[Option<usize>]| -> Vec<usize> {
                (0..m).filter(|&p| table[p] == Some(want)).collect()
            };
            let (c1, c2) = match kind {
                SeparationKind::EE => (hits(node.a1, &sub.slot_in), hits(node.a2, &sub.slot_in)),
                SeparationKind::VV => {
                    (hits(node.a1, &sub.corner_at), hits(node.a2, &sub.corner_at))
                }
                SeparationKind::VE => (hits(node.a1, &sub.corner_at), hits(node.a2, &sub.slot_in)),
            };
            for &p1 in &c1 {
                for &p2 in &c2 {
                    if pair_allowed(rule, sub.image, p1, p2, kind, mode) {
                        let to = index[(sub.image * l + p1) * l + p2];
                        debug_assert_ne!(to, usize::MAX);
                        arcs[from].push(SepArc { from, to, face: gi });
                    }
                }
            }
        }
    }

    SeparationGraph {
        kind,
        mode,
        nodes,
        arcs,
    }
}

/// Shortest directed cycle as a node-index list, starting at the first
/// node (in enumeration order) that attains the minimum length.
pub(crate) fn shortest_cycle(arcs: &[Vec<SepArc>]) -> Option<Vec<usize>> {
    let n = arcs.len();
    let mut best: Option<Vec<usize>> = None;
    for s in 0..n {
        if let Some(cyc) = bfs_cycle_through(arcs, s) {
            let better = best.as_ref().is_none_or(|b| cyc.len() < b.len());
            if better {
                best = Some(cyc);
            }
        }
    }
    best
}

fn bfs_cycle_through(arcs: &[Vec<SepArc>], s: usize) -> Option<Vec<usize>> {
    let n = arcs.len();
    let mut back = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut queue = VecDeque::new();
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        for arc in &arcs[u] {
            if arc.to == s {
                // close the cycle: walk the tree path s .. u, then the arc
                let mut path = vec![u];
                let mut at = u;
                while at != s {
                    at = back[at];
                    path.push(at);
                }
                path.reverse();
                return Some(path);
            }
            if !seen[arc.to] {
                seen[arc.to] = true;
                back[arc.to] = u;
                queue.push_back(arc.to);
            }
        }
    }
    None
}

/// Longest path in arc count; caller guarantees acyclicity.
pub(crate) fn longest_path(arcs: &[Vec<SepArc>]) -> u32 {
    let n = arcs.len();
    let mut indeg = vec![0usize; n];
    for out in arcs {
        for a in out {
            indeg[a.to] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut dist = vec![0u32; n];
    let mut popped = 0;
    let mut best = 0;
    while let Some(u) = queue.pop_front() {
        popped += 1;
        best = best.max(dist[u]);
        for a in &arcs[u] {
            if dist[u] + 1 > dist[a.to] {
                dist[a.to] = dist[u] + 1;
            }
            indeg[a.to] -= 1;
            if indeg[a.to] == 0 {
                queue.push_back(a.to);
            }
        }
    }
    debug_assert_eq!(popped, n, "longest_path called on a cyclic graph");
    best
}

pub fn separation_verdict(graph: &SeparationGraph) -> PropertyVerdict {
    let property = graph.kind.property();
    match shortest_cycle(&graph.arcs) {
        Some(cycle) => PropertyVerdict {
            property,
            holds: false,
            witness: Some(Witness::SeparationCycle {
                kind: graph.kind,
                nodes: cycle.iter().map(|&i| graph.nodes[i]).collect(),
            }),
            certified_level: None,
        },
        None => PropertyVerdict {
            property,
            holds: true,
            witness: None,
            certified_level: Some(longest_path(&graph.arcs) + 1),
        },
    }
}

pub fn check_separation(
    rule: &Rule,
    kind: SeparationKind,
    mode: DisjointnessMode,
) -> PropertyVerdict {
    separation_verdict(&build_separation_graph(rule, kind, mode))
}

/// Confirms every arc on the level-1 complex: the witness face of
/// R(t) really has cells lying in the claimed boundary cells of t.
pub fn verify_arcs(rule: &Rule, graph: &SeparationGraph) -> Result<(), String> {
    let mut towers = Vec::new();
    for t in 0..rule.spec.tiles.len() {
        let budget = CellBudget::default();
        towers.push(subdivide_tile(rule, t, 1, &budget).map_err(|e| e.to_string())?);
    }
    for out in &graph.arcs {
        for arc in out {
            let from = graph.nodes[arc.from];
            let to = graph.nodes[arc.to];
            let tower = &towers[from.tile];
            let cx = tower.level(1);
            let face = &cx.faces[arc.face];
            if face.ftype != to.tile {
                return Err(format!(
                    "arc {}->{} face {} has type {} but target claims {}",
                    arc.from, arc.to, arc.face, face.ftype, to.tile
                ));
            }
            let edge_in = |p: usize, base_slot: usize| -> Result<(), String> {
                let el = cx.faces[arc.face].boundary[p].0;
                let anc = tower.level0_ancestor(cx.edge_id(el));
                if anc.dim != 1 || anc.index != base_slot {
                    return Err(format!(
                        "arc {}->{}: subtile slot {} not inside base slot {}",
                        arc.from, arc.to, p, base_slot
                    ));
                }
                Ok(())
            };
            let corner_on = |p: usize, base_corner: usize| -> Result<(), String> {
                let v = cx.face_corner(arc.face, p);
                let anc = tower.level0_ancestor(cx.vertex_id(v));
                if anc.dim != 0 || anc.index != base_corner {
                    return Err(format!(
                        "arc {}->{}: subtile corner {} is not base corner {}",
                        arc.from, arc.to, p, base_corner
                    ));
                }
                Ok(())
            };
            match graph.kind {
                SeparationKind::EE => {
                    edge_in(to.a1, from.a1)?;
                    edge_in(to.a2, from.a2)?;
                }
                SeparationKind::VV => {
                    corner_on(to.a1, from.a1)?;
                    corner_on(to.a2, from.a2)?;
                }
                SeparationKind::VE => {
                    corner_on(to.a1, from.a1)?;
                    edge_in(to.a2, from.a2)?;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::node_bound;
    use crate::fixtures::load_fixture;

    fn graph(name: &str, kind: SeparationKind) -> SeparationGraph {
        let rule = load_fixture(name).unwrap();
        build_separation_graph(&rule, kind, DisjointnessMode::ModelDisk)
    }

    #[test]
    fn node_counts_match_hand_enumeration() {
        assert_eq!(graph("pillow2", SeparationKind::EE).nodes.len(), 8);
        assert_eq!(graph("pillow2", SeparationKind::VV).nodes.len(), 24);
        assert_eq!(graph("pillow2", SeparationKind::VE).nodes.len(), 16);
        assert_eq!(graph("barycentric", SeparationKind::EE).nodes.len(), 0);
        assert_eq!(graph("barycentric", SeparationKind::VV).nodes.len(), 12);
        assert_eq!(graph("barycentric", SeparationKind::VE).nodes.len(), 6);
        assert_eq!(graph("triangles3", SeparationKind::VV).nodes.len(), 12);
        assert_eq!(graph("triangles3", SeparationKind::VE).nodes.len(), 6);
    }

    #[test]
    fn node_counts_stay_under_bound() {
        for name in crate::fixtures::fixture_names() {
            let rule = load_fixture(name).unwrap();
            for kind in [SeparationKind::EE, SeparationKind::VV, SeparationKind::VE] {
                let g = build_separation_graph(&rule, kind, DisjointnessMode::ModelDisk);
                assert!(g.nodes.len() <= node_bound(&rule.spec), "{name} {kind:?}");
            }
        }
    }

    #[test]
    fn pillow2_graphs_have_no_arcs() {
        for kind in [SeparationKind::EE, SeparationKind::VV, SeparationKind::VE] {
            let g = graph("pillow2", kind);
            assert_eq!(g.arc_count(), 0, "{kind:?}");
            let v = separation_verdict(&g);
            assert!(v.holds);
            assert_eq!(v.certified_level, Some(1));
        }
    }

    #[test]
    fn columns2_ee_shortest_cycle_is_the_first_self_loop() {
        let g = graph("columns2", SeparationKind::EE);
        assert_eq!(g.nodes.len(), 8);
        let v = separation_verdict(&g);
        assert!(!v.holds);
        match v.witness.unwrap() {
            Witness::SeparationCycle { kind, nodes } => {
                assert_eq!(kind, SeparationKind::EE);
                assert_eq!(
                    nodes,
                    vec![SepNode {
                        tile: 0,
                        a1: 0,
                        a2: 2
                    }]
                );
            }
            other => panic!("wrong witness {other:?}"),
        }
    }

    #[test]
    fn columns2_vv_and_ve_cycles_are_frozen() {
        let g = graph("columns2", SeparationKind::VV);
        let v = separation_verdict(&g);
        match v.witness.unwrap() {
            Witness::SeparationCycle { nodes, .. } => {
                assert_eq!(
                    nodes,
                    vec![SepNode {
                        tile: 0,
                        a1: 2,
                        a2: 3
                    }]
                );
            }
            other => panic!("wrong witness {other:?}"),
        }
        let g = graph("columns2", SeparationKind::VE);
        let v = separation_verdict(&g);
        match v.witness.unwrap() {
            Witness::SeparationCycle { nodes, .. } => {
                assert_eq!(
                    nodes,
                    vec![SepNode {
                        tile: 0,
                        a1: 2,
                        a2: 0
                    }]
                );
            }
            other => panic!("wrong witness {other:?}"),
        }
    }

    #[test]
    fn triangles3_vv_three_cycle_is_frozen() {
        let g = graph("triangles3", SeparationKind::VV);
        let v = separation_verdict(&g);
        assert!(!v.holds);
        match v.witness.unwrap() {
            Witness::SeparationCycle { nodes, .. } => {
                assert_eq!(
                    nodes,
                    vec![
                        SepNode {
                            tile: 0,
                            a1: 0,
                            a2: 1
                        },
                        SepNode {
                            tile: 0,
                            a1: 2,
                            a2: 0
                        },
                        SepNode {
                            tile: 0,
                            a1: 1,
                            a2: 2
                        },
                    ]
                );
            }
            other => panic!("wrong witness {other:?}"),
        }
    }

    #[test]
    fn triangles3_ve_is_a_dag_certified_at_three() {
        let g = graph("triangles3", SeparationKind::VE);
        let v = separation_verdict(&g);
        assert!(v.holds);
        assert_eq!(v.certified_level, Some(3));
    }

    #[test]
    fn triangles3_ee_is_vacuous() {
        let g = graph("triangles3", SeparationKind::EE);
        assert!(g.nodes.is_empty());
        let v = separation_verdict(&g);
        assert!(v.holds);
        assert_eq!(v.certified_level, Some(1));
    }

    #[test]
    fn every_arc_is_realized_on_the_level_one_complex() {
        for name in crate::fixtures::fixture_names() {
            let rule = load_fixture(name).unwrap();
            for kind in [SeparationKind::EE, SeparationKind::VV, SeparationKind::VE] {
                for mode in [DisjointnessMode::ModelDisk, DisjointnessMode::Glued] {
                    let g = build_separation_graph(&rule, kind, mode);
                    verify_arcs(&rule, &g).unwrap();
                }
            }
        }
    }

    #[test]
    fn glued_mode_never_admits_more_nodes() {
        for name in crate::fixtures::fixture_names() {
            let rule = load_fixture(name).unwrap();
            for kind in [SeparationKind::EE, SeparationKind::VV, SeparationKind::VE] {
                let model = build_separation_graph(&rule, kind, DisjointnessMode::ModelDisk);
                let glued = build_separation_graph(&rule, kind, DisjointnessMode::Glued);
                assert!(glued.nodes.len() <= model.nodes.len(), "{name} {kind:?}");
            }
        }
    }
}
