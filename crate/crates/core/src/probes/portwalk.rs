//! Walks through level-n tiles along the level-0 skeleton.
//!
//! A port is a tile entered through a boundary edge that lies inside a
//! level-0 edge. An arc leaves through a different model slot whose edge
//! also lies in the skeleton, crossing into the neighbor on the far
//! side. A cycle winds when every crossed level-0 edge touches one
//! common level-0 vertex; non-winding cycles are the interesting ones.

use crate::engine::{subdivide_sphere, BudgetExceeded, CellBudget, Tower};
use crate::model::Rule;
use serde::Serialize;
use std::collections::VecDeque;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PortNode {
    /// level-n face
    pub face: usize,
    /// entry slot of that face
    pub slot: usize,
    /// the level-n edge at the entry slot
    pub edge: usize,
    /// the level-0 edge carrying it
    pub base_edge: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PortArc {
    pub from: usize,
    pub to: usize,
    /// exit slot of the source face; the crossed edge is the target's
    pub exit_slot: usize,
}

/// A closed walk, recorded by its node sequence. The arc out of
/// nodes[i] crosses the entry edge of nodes[(i+1) % len], so the
/// crossed level-0 edges are the targets' base edges.
#[derive(Debug, Clone, Serialize)]
pub struct PortCycle {
    pub nodes: Vec<usize>,
    pub crossed_base: Vec<usize>,
    pub winding: bool,
    pub simple: bool,
}

#[derive(Debug, Clone)]
pub struct PortWalkGraph {
    pub level: u32,
    pub nodes: Vec<PortNode>,
    pub arcs: Vec<Vec<PortArc>>,
    /// shortest cycle through each start node, deduplicated
    pub cycles: Vec<PortCycle>,
    tower: Tower,
}

fn winding(rule: &Rule, crossed: &[usize]) -> bool {
    debug_assert!(!crossed.is_empty());
    let ends = |e: usize| [rule.spec.edges[e].tail, rule.spec.edges[e].head];
    let mut common: Vec<usize> = ends(crossed[0]).to_vec();
    for &e in &crossed[1..] {
        let here = ends(e);
        common.retain(|v| here.contains(v));
        if common.is_empty() {
            return false;
        }
    }
    true
}

fn classify(rule: &Rule, nodes: &[PortNode], cycle: Vec<usize>) -> PortCycle {
    let len = cycle.len();
    let crossed_base: Vec<usize> = (0..len)
        .map(|i| nodes[cycle[(i + 1) % len]].base_edge)
        .collect();
    let mut sorted = cycle.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let simple = sorted.len() == len;
    PortCycle {
        winding: winding(rule, &crossed_base),
        crossed_base,
        nodes: cycle,
        simple,
    }
}

fn bfs_cycle_through(arcs: &[Vec<PortArc>], s: usize) -> Option<Vec<usize>> {
    let n = arcs.len();
    let mut back = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut queue = VecDeque::new();
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        for arc in &arcs[u] {
            if arc.to == s {
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

pub fn port_walk_graph(
    rule: &Rule,
    n: u32,
    budget: &CellBudget,
) -> Result<PortWalkGraph, BudgetExceeded> {
    let tower = subdivide_sphere(rule, n, budget)?;
    let cx = tower.level(n);

    let mut nodes = Vec::new();
    let mut index = vec![usize::MAX; cx.faces.iter().map(|f| f.boundary.len()).sum()];
    let mut offsets = Vec::with_capacity(cx.faces.len());
    let mut off = 0;
    for f in 0..cx.faces.len() {
        offsets.push(off);
        for (j, &(el, _)) in cx.faces[f].boundary.iter().enumerate() {
            let anc = tower.level0_ancestor(cx.edge_id(el));
            if anc.dim == 1 {
                index[off + j] = nodes.len();
                nodes.push(PortNode {
                    face: f,
                    slot: j,
                    edge: el,
                    base_edge: anc.index,
                });
            }
        }
        off += cx.faces[f].boundary.len();
    }

    let edge_faces = cx.edge_faces();
    let mut arcs: Vec<Vec<PortArc>> = vec![Vec::new(); nodes.len()];
    for (from, node) in nodes.iter().enumerate() {
        let f = node.face;
        for j_out in 0..cx.faces[f].boundary.len() {
            if j_out == node.slot || index[offsets[f] + j_out] == usize::MAX {
                continue;
            }
            let el_out = cx.faces[f].boundary[j_out].0;
            let sides = &edge_faces[el_out];
            debug_assert_eq!(sides.len(), 2, "sphere edges border two face sides");
            let (tf, ts) = if sides[0] == (f, j_out) {
                sides[1]
            } else {
                debug_assert_eq!(sides[1], (f, j_out));
                sides[0]
            };
            let to = index[offsets[tf] + ts];
            debug_assert_ne!(to, usize::MAX, "crossed edge is in the skeleton");
            arcs[from].push(PortArc {
                from,
                to,
                exit_slot: j_out,
            });
        }
    }

    // shortest cycle through each start, deduplicated by rotation
    let mut cycles: Vec<PortCycle> = Vec::new();
    let mut seen_keys: Vec<Vec<usize>> = Vec::new();
    for s in 0..nodes.len() {
        if let Some(cycle) = bfs_cycle_through(&arcs, s) {
            let mut key = cycle.clone();
            let rot = key
                .iter()
                .enumerate()
                .min_by_key(|&(_, &v)| v)
                .map(|(i, _)| i)
                .unwrap();
            key.rotate_left(rot);
            if !seen_keys.contains(&key) {
                seen_keys.push(key);
                cycles.push(classify(rule, &nodes, cycle));
            }
        }
    }

    Ok(PortWalkGraph {
        level: n,
        nodes,
        arcs,
        cycles,
        tower,
    })
}

impl PortWalkGraph {
    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.iter().map(|a| a.len()).sum()
    }

    /// Every consecutive pair really is an arc, and the crossed edges
    /// are the entry edges of the targets.
    pub fn replay(&self, cycle: &PortCycle) -> Result<(), String> {
        let len = cycle.nodes.len();
        if len == 0 {
            return Err("empty cycle".into());
        }
        for i in 0..len {
            let x = cycle.nodes[i];
            let y = cycle.nodes[(i + 1) % len];
            if !self.arcs[x].iter().any(|a| a.to == y) {
                return Err(format!("no arc {x} -> {y}"));
            }
            if self.nodes[y].base_edge != cycle.crossed_base[i] {
                return Err(format!("crossed edge mismatch at step {i}"));
            }
        }
        Ok(())
    }
}

/// Strongly connected components by Kosaraju's method, iterative.
fn sccs(arcs: &[Vec<PortArc>]) -> Vec<usize> {
    let n = arcs.len();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        // post-order via explicit stack
        let mut stack = vec![(s, 0usize)];
        seen[s] = true;
        while let Some(&mut (u, ref mut i)) = stack.last_mut() {
            if *i < arcs[u].len() {
                let v = arcs[u][*i].to;
                *i += 1;
                if !seen[v] {
                    seen[v] = true;
                    stack.push((v, 0));
                }
            } else {
                order.push(u);
                stack.pop();
            }
        }
    }
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    for out in arcs {
        for a in out {
            rev[a.to].push(a.from);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut c = 0;
    for &s in order.iter().rev() {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = c;
        while let Some(u) = stack.pop() {
            for &v in &rev[u] {
                if comp[v] == usize::MAX {
                    comp[v] = c;
                    stack.push(v);
                }
            }
        }
        c += 1;
    }
    comp
}

fn path_within(
    arcs: &[Vec<PortArc>],
    comp: &[usize],
    c: usize,
    from: usize,
    to: usize,
) -> Option<Vec<usize>> {
    // node sequence after `from` up to and including `to`, inside component c
    if from == to {
        return Some(Vec::new());
    }
    let n = arcs.len();
    let mut back = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::new();
    queue.push_back(from);
    while let Some(u) = queue.pop_front() {
        for a in &arcs[u] {
            if comp[a.to] == c && !seen[a.to] {
                seen[a.to] = true;
                back[a.to] = u;
                queue.push_back(a.to);
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let mut path = vec![to];
    let mut at = to;
    while back[at] != from {
        at = back[at];
        path.push(at);
    }
    path.reverse();
    Some(path)
}

/// A non-winding closed walk, if one exists at this level.
///
/// The enumerated shortest cycles are tried first. Completeness comes
/// from the fallback: a non-winding closed walk exists if and only if
/// some strongly connected component crosses either two level-0 edges
/// with no shared endpoint or three forming a triangle, and such a walk
/// can be stitched from the component's arcs.
pub fn find_non_winding(rule: &Rule, graph: &PortWalkGraph) -> Option<PortCycle> {
    if let Some(c) = graph.cycles.iter().find(|c| !c.winding) {
        return Some(c.clone());
    }

    let comp = sccs(&graph.arcs);
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    // arcs internal to each component, keyed by crossed base edge
    let mut by_comp: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); ncomp];
    for out in &graph.arcs {
        for a in out {
            if comp[a.from] == comp[a.to] {
                let base = graph.nodes[a.to].base_edge;
                let list = &mut by_comp[comp[a.from]];
                if !list.iter().any(|&(b, _, _)| b == base) {
                    list.push((base, a.from, a.to));
                }
            }
        }
    }
    let ends = |e: usize| [rule.spec.edges[e].tail, rule.spec.edges[e].head];
    let disjoint = |a: usize, b: usize| {
        let (x, y) = (ends(a), ends(b));
        !x.iter().any(|v| y.contains(v))
    };
    for (c, list) in by_comp.iter().enumerate() {
        let mut picks: Option<Vec<(usize, usize, usize)>> = None;
        'outer: for i in 0..list.len() {
            for j in i + 1..list.len() {
                if disjoint(list[i].0, list[j].0) {
                    picks = Some(vec![list[i], list[j]]);
                    break 'outer;
                }
                for k in j + 1..list.len() {
                    if !winding(rule, &[list[i].0, list[j].0, list[k].0]) {
                        picks = Some(vec![list[i], list[j], list[k]]);
                        break 'outer;
                    }
                }
            }
        }
        let picks = match picks {
            Some(p) => p,
            None => continue,
        };
        // stitch the picked arcs into one closed walk: each arc, then a
        // path inside the component to the next arc's source
        let m = picks.len();
        let mut walk_arcs: Vec<(usize, usize)> = Vec::new();
        let mut ok = true;
        for i in 0..m {
            let (_, from, to) = picks[i];
            walk_arcs.push((from, to));
            let next_from = picks[(i + 1) % m].1;
            match path_within(&graph.arcs, &comp, c, to, next_from) {
                None => {
                    ok = false;
                    break;
                }
                Some(seg) => {
                    let mut prev = to;
                    for x in seg {
                        walk_arcs.push((prev, x));
                        prev = x;
                    }
                }
            }
        }
        if !ok {
            continue;
        }
        let nodes: Vec<usize> = walk_arcs.iter().map(|&(f, _)| f).collect();
        let cycle = classify(rule, &graph.nodes, nodes);
        debug_assert!(!cycle.winding);
        debug_assert!(graph.replay(&cycle).is_ok());
        return Some(cycle);
    }
    None
}
