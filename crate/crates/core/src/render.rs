//! DOT and SVG emitters.
//!
//! Graphs go to DOT. Disk complexes go to SVG through a Tutte layout:
//! the boundary cycle is pinned to a regular polygon and every interior
//! vertex is relaxed to the average of its neighbors, which embeds a
//! disk complex without edge crossings. All output is deterministic
//! for fixed options.

use crate::analyze::{SepNode, SeparationGraph, SeparationKind};
use crate::engine::{subdivide_tile, BudgetExceeded, CellBudget, LevelComplex};
use crate::graphs::SubdivisionGraph;
use crate::model::{Rule, TileTypeId};
use crate::probes::{PortCycle, PortWalkGraph};
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Dot,
    Svg,
    Json,
}

impl RenderFormat {
    pub fn parse(s: &str) -> Option<RenderFormat> {
        match s {
            "dot" => Some(RenderFormat::Dot),
            "svg" => Some(RenderFormat::Svg),
            "json" => Some(RenderFormat::Json),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Layout {
    #[default]
    Tutte,
    Radial,
}

impl Layout {
    pub fn parse(s: &str) -> Option<Layout> {
        match s {
            "tutte" => Some(Layout::Tutte),
            "radial" => Some(Layout::Radial),
            _ => None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

fn pair_label(kind: SeparationKind, n: &SepNode, rule: &Rule) -> String {
    let member = |first: bool, a: usize| {
        let corner = match kind {
            SeparationKind::EE => false,
            SeparationKind::VV => true,
            SeparationKind::VE => first,
        };
        if corner {
            format!("corner {a}")
        } else {
            format!("slot {a}")
        }
    };
    format!(
        "({}, {}, {})",
        rule.spec.tile_name(n.tile),
        member(true, n.a1),
        member(false, n.a2)
    )
}

/// Separation graph as DOT; arcs along `highlight` (a node cycle, in
/// order) are drawn red.
pub fn separation_dot(rule: &Rule, g: &SeparationGraph, highlight: &[SepNode]) -> String {
    let hot: Vec<usize> = highlight
        .iter()
        .filter_map(|h| g.nodes.iter().position(|n| n == h))
        .collect();
    let hot_arc = |from: usize, to: usize| {
        hot.iter()
            .enumerate()
            .any(|(i, &u)| u == from && hot[(i + 1) % hot.len()] == to)
    };
    let mut out = String::new();
    writeln!(out, "digraph {} {{", g.kind.name().to_lowercase()).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for (i, n) in g.nodes.iter().enumerate() {
        writeln!(out, "  n{i} [label=\"{}\"];", pair_label(g.kind, n, rule)).unwrap();
    }
    for arcs in &g.arcs {
        for a in arcs {
            let face = &rule.spec.schemes[g.nodes[a.from].tile].faces[a.face].name;
            let style = if !hot.is_empty() && hot_arc(a.from, a.to) {
                " color=red penwidth=2"
            } else {
                ""
            };
            writeln!(out, "  n{} -> n{} [label=\"{face}\"{style}];", a.from, a.to).unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

/// Level-structured tile graph as undirected DOT: horizontal adjacency
/// solid, containment between consecutive levels dashed.
pub fn subdivision_graph_dot(g: &SubdivisionGraph) -> String {
    let mut out = String::new();
    writeln!(out, "graph gamma {{").unwrap();
    for m in 0..=g.top_level() {
        for f in 0..g.faces_at(m) {
            writeln!(out, "  l{m}f{f} [label=\"{m}:{f}\"];").unwrap();
        }
    }
    for m in 0..=g.top_level() {
        for f in 0..g.faces_at(m) {
            for &h in &g.horizontal[m as usize][f] {
                if f < h {
                    writeln!(out, "  l{m}f{f} -- l{m}f{h};").unwrap();
                }
            }
        }
    }
    for m in 1..=g.top_level() {
        for f in 0..g.faces_at(m) {
            let p = g.tower.level(m).faces[f].parent.index;
            writeln!(out, "  l{}f{p} -- l{m}f{f} [style=dashed];", m - 1).unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

/// Port walk graph as DOT; arcs along `highlight.nodes` are drawn red.
pub fn port_graph_dot(rule: &Rule, g: &PortWalkGraph, highlight: Option<&PortCycle>) -> String {
    let hot_arc = |from: usize, to: usize| {
        highlight.is_some_and(|c| {
            c.nodes
                .iter()
                .enumerate()
                .any(|(i, &u)| u == from && c.nodes[(i + 1) % c.nodes.len()] == to)
        })
    };
    let mut out = String::new();
    writeln!(out, "digraph ports {{").unwrap();
    for (i, n) in g.nodes.iter().enumerate() {
        writeln!(
            out,
            "  n{i} [label=\"f{} s{} over {}\"];",
            n.face,
            n.slot,
            rule.spec.edge_name(n.base_edge)
        )
        .unwrap();
    }
    for arcs in &g.arcs {
        for a in arcs {
            let style = if hot_arc(a.from, a.to) {
                " [color=red penwidth=2]"
            } else {
                ""
            };
            writeln!(out, "  n{} -> n{}{style};", a.from, a.to).unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

/// Boundary vertices of a disk complex in cyclic order.
fn boundary_cycle(cx: &LevelComplex) -> Vec<usize> {
    let incidences = cx.edge_faces();
    let rim: Vec<usize> = (0..cx.edges.len())
        .filter(|&e| incidences[e].len() == 1)
        .collect();
    let mut at_vertex: Vec<Vec<usize>> = vec![Vec::new(); cx.vertices.len()];
    for &e in &rim {
        at_vertex[cx.edges[e].tail].push(e);
        at_vertex[cx.edges[e].head].push(e);
    }
    let first = rim[0];
    let start = cx.edges[first].tail;
    let mut cycle = vec![start];
    let mut prev = first;
    let mut v = cx.edges[first].head;
    while v != start {
        cycle.push(v);
        let &next = at_vertex[v].iter().find(|&&e| e != prev).unwrap();
        v = if cx.edges[next].tail == v {
            cx.edges[next].head
        } else {
            cx.edges[next].tail
        };
        prev = next;
    }
    cycle
}

const SWEEPS: usize = 10_000;
const TOLERANCE: f64 = 1e-9;

fn layout_positions(cx: &LevelComplex, layout: Layout) -> Vec<(f64, f64)> {
    let cycle = boundary_cycle(cx);
    let k = cycle.len() as f64;
    let mut pos = vec![(0.0f64, 0.0f64); cx.vertices.len()];
    let mut pinned = vec![false; cx.vertices.len()];
    for (i, &v) in cycle.iter().enumerate() {
        let angle = std::f64::consts::TAU * i as f64 / k;
        pos[v] = (angle.cos(), angle.sin());
        pinned[v] = true;
    }
    let mut adjacent: Vec<Vec<usize>> = vec![Vec::new(); cx.vertices.len()];
    for e in &cx.edges {
        adjacent[e.tail].push(e.head);
        adjacent[e.head].push(e.tail);
    }
    for _ in 0..SWEEPS {
        let mut shift = 0.0f64;
        for v in 0..pos.len() {
            if pinned[v] || adjacent[v].is_empty() {
                continue;
            }
            let (mut x, mut y) = (0.0, 0.0);
            for &u in &adjacent[v] {
                x += pos[u].0;
                y += pos[u].1;
            }
            let d = adjacent[v].len() as f64;
            let next = (x / d, y / d);
            shift = shift.max((next.0 - pos[v].0).abs().max((next.1 - pos[v].1).abs()));
            pos[v] = next;
        }
        if shift < TOLERANCE {
            break;
        }
    }
    if layout == Layout::Radial {
        // keep each vertex's angle, set its radius by hop distance from
        // the rim
        let mut depth = vec![u32::MAX; cx.vertices.len()];
        let mut queue = std::collections::VecDeque::new();
        for &v in &cycle {
            depth[v] = 0;
            queue.push_back(v);
        }
        while let Some(u) = queue.pop_front() {
            for &w in &adjacent[u] {
                if depth[w] == u32::MAX {
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        let deepest = depth
            .iter()
            .copied()
            .filter(|&d| d != u32::MAX)
            .max()
            .unwrap_or(0);
        for v in 0..pos.len() {
            if pinned[v] || depth[v] == u32::MAX {
                continue;
            }
            let angle = pos[v].1.atan2(pos[v].0);
            let r = 1.0 - depth[v] as f64 / (deepest as f64 + 1.0);
            pos[v] = (r * angle.cos(), r * angle.sin());
        }
    }
    pos
}

fn svg_document(rule: &Rule, cx: &LevelComplex, pos: &[(f64, f64)]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.1 -1.1 2.2 2.2\" width=\"640\" height=\"640\">"
    )
    .unwrap();
    for (fi, f) in cx.faces.iter().enumerate() {
        let corners = cx.face_corners(fi);
        let points: Vec<String> = corners
            .iter()
            .map(|&v| format!("{:.6},{:.6}", pos[v].0, pos[v].1))
            .collect();
        let hue = (f.ftype * 137) % 360;
        writeln!(
            out,
            "  <polygon points=\"{}\" fill=\"hsl({hue},60%,88%)\"><title>{}</title></polygon>",
            points.join(" "),
            rule.spec.tile_name(f.ftype)
        )
        .unwrap();
    }
    for e in &cx.edges {
        writeln!(
            out,
            "  <line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\" stroke=\"#333\" stroke-width=\"0.008\"/>",
            pos[e.tail].0, pos[e.tail].1, pos[e.head].0, pos[e.head].1
        )
        .unwrap();
    }
    for p in pos {
        writeln!(
            out,
            "  <circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"0.015\" fill=\"#222\"/>",
            p.0, p.1
        )
        .unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}

/// SVG of one tile type's level-`level` subdivision.
pub fn disk_svg(
    rule: &Rule,
    t: TileTypeId,
    level: u32,
    layout: Layout,
    budget: &CellBudget,
) -> Result<String, RenderError> {
    let tower = subdivide_tile(rule, t, level, budget)?;
    let cx = tower.level(level);
    let pos = layout_positions(cx, layout);
    Ok(svg_document(rule, cx, &pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::{build_separation_graph, check_separation, DisjointnessMode, Witness};
    use crate::fixtures::load_fixture;
    use crate::graphs::{build_subdivision_graph, Flavor};
    use crate::probes::{find_non_winding, port_walk_graph};

    fn orient(p: (f64, f64), q: (f64, f64), r: (f64, f64)) -> f64 {
        (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0)
    }

    fn strictly_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
        let d1 = orient(a, b, c);
        let d2 = orient(a, b, d);
        let d3 = orient(c, d, a);
        let d4 = orient(c, d, b);
        d1 * d2 < -1e-12 && d3 * d4 < -1e-12
    }

    #[test]
    fn pillow2_quarters_embed_without_crossings() {
        let rule = load_fixture("pillow2").unwrap();
        let tower = subdivide_tile(&rule, 0, 1, &CellBudget::default()).unwrap();
        let cx = tower.level(1);
        assert_eq!(cx.faces.len(), 4);
        let pos = layout_positions(cx, Layout::Tutte);
        for i in 0..cx.edges.len() {
            for j in i + 1..cx.edges.len() {
                let (a, b) = (&cx.edges[i], &cx.edges[j]);
                if a.tail == b.tail || a.tail == b.head || a.head == b.tail || a.head == b.head {
                    continue;
                }
                assert!(
                    !strictly_cross(pos[a.tail], pos[a.head], pos[b.tail], pos[b.head]),
                    "edges {i} and {j} cross"
                );
            }
        }
        let svg = disk_svg(&rule, 0, 1, Layout::Tutte, &CellBudget::default()).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 4);
    }

    #[test]
    fn rendering_is_deterministic() {
        let rule = load_fixture("barycentric").unwrap();
        let budget = CellBudget::default();
        let a = disk_svg(&rule, 0, 2, Layout::Radial, &budget).unwrap();
        let b = disk_svg(&rule, 0, 2, Layout::Radial, &budget).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn witness_cycle_is_highlighted_in_dot() {
        let rule = load_fixture("columns2").unwrap();
        let g = build_separation_graph(
            &rule,
            crate::analyze::SeparationKind::EE,
            DisjointnessMode::ModelDisk,
        );
        let verdict = check_separation(
            &rule,
            crate::analyze::SeparationKind::EE,
            DisjointnessMode::ModelDisk,
        );
        let nodes = match verdict.witness.unwrap() {
            Witness::SeparationCycle { nodes, .. } => nodes,
            _ => unreachable!(),
        };
        let dot = separation_dot(&rule, &g, &nodes);
        assert!(dot.contains("color=red"));
        assert!(dot.contains("digraph ee"));
    }

    #[test]
    fn empty_graph_is_a_valid_document() {
        let rule = load_fixture("barycentric").unwrap();
        let g = build_separation_graph(
            &rule,
            crate::analyze::SeparationKind::EE,
            DisjointnessMode::ModelDisk,
        );
        assert!(g.nodes.is_empty());
        let dot = separation_dot(&rule, &g, &[]);
        assert!(dot.starts_with("digraph"));
        assert!(dot.trim_end().ends_with('}'));
    }

    #[test]
    fn graph_and_port_dot_emit() {
        let rule = load_fixture("columns2").unwrap();
        let budget = CellBudget::default();
        let g = build_subdivision_graph(&rule, 2, Flavor::Fat, &budget).unwrap();
        let dot = subdivision_graph_dot(&g);
        assert!(dot.contains("style=dashed"));
        let pg = port_walk_graph(&rule, 1, &budget).unwrap();
        let cycle = find_non_winding(&rule, &pg);
        let dot = port_graph_dot(&rule, &pg, cycle.as_ref());
        assert!(dot.contains("color=red"));
    }
}
