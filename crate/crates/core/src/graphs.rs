//! The leveled graph of tiles: one vertex per tile per level, vertical
//! edges to parents, and horizontal edges between tiles of one level
//! that touch. Distances are measured inside a single level.

use crate::engine::{subdivide_sphere, BudgetExceeded, CellBudget, LevelComplex, Tower};
use crate::model::Rule;
use serde::Serialize;
use std::collections::VecDeque;

/// Which contacts count as horizontal edges: sharing an edge (fat) or
/// sharing any cell at all (skinny).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Flavor {
    Fat,
    Skinny,
}

impl Flavor {
    pub fn parse(s: &str) -> Option<Flavor> {
        match s {
            "fat" => Some(Flavor::Fat),
            "skinny" => Some(Flavor::Skinny),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Fat => "fat",
            Flavor::Skinny => "skinny",
        }
    }
}

/// Levels -1..=L over the sphere. Level -1 is a single root vertex over
/// all level-0 tiles; parents of deeper tiles are stored in the tower.
/// Horizontal adjacency is simple: repeated contacts collapse to one edge.
#[derive(Debug, Clone)]
pub struct SubdivisionGraph {
    pub flavor: Flavor,
    pub tower: Tower,
    /// horizontal[m][f] = faces adjacent to face f within level m, sorted
    pub horizontal: Vec<Vec<Vec<usize>>>,
}

fn level_adjacency(cx: &LevelComplex, flavor: Flavor) -> Vec<Vec<usize>> {
    let nf = cx.faces.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nf];
    let link = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
        if a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    };
    match flavor {
        Flavor::Fat => {
            for bucket in cx.edge_faces() {
                for i in 0..bucket.len() {
                    for j in i + 1..bucket.len() {
                        link(bucket[i].0, bucket[j].0, &mut adj);
                    }
                }
            }
        }
        Flavor::Skinny => {
            let mut at_vertex: Vec<Vec<usize>> = vec![Vec::new(); cx.vertices.len()];
            for f in 0..nf {
                for v in cx.face_corners(f) {
                    if at_vertex[v].last() != Some(&f) {
                        at_vertex[v].push(f);
                    }
                }
            }
            for bucket in &at_vertex {
                for i in 0..bucket.len() {
                    for j in i + 1..bucket.len() {
                        link(bucket[i], bucket[j], &mut adj);
                    }
                }
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

pub fn build_subdivision_graph(
    rule: &Rule,
    l: u32,
    flavor: Flavor,
    budget: &CellBudget,
) -> Result<SubdivisionGraph, BudgetExceeded> {
    let tower = subdivide_sphere(rule, l, budget)?;
    let horizontal = (0..=l)
        .map(|m| level_adjacency(tower.level(m), flavor))
        .collect();
    Ok(SubdivisionGraph {
        flavor,
        tower,
        horizontal,
    })
}

impl SubdivisionGraph {
    pub fn top_level(&self) -> u32 {
        self.tower.top_level()
    }

    pub fn faces_at(&self, m: u32) -> usize {
        self.tower.level(m).faces.len()
    }

    pub fn horizontal_edge_count(&self, m: u32) -> usize {
        self.horizontal[m as usize]
            .iter()
            .map(|l| l.len())
            .sum::<usize>()
            / 2
    }

    /// BFS distance within level m; None encodes infinity.
    pub fn level_distance(&self, m: u32, u: usize, v: usize) -> Option<u32> {
        self.distances_from(m, u)[v]
    }

    /// One BFS sweep: distances from u to every face of level m.
    pub fn distances_from(&self, m: u32, u: usize) -> Vec<Option<u32>> {
        let adj = &self.horizontal[m as usize];
        let mut dist = vec![None; adj.len()];
        dist[u] = Some(0);
        let mut queue = VecDeque::new();
        queue.push_back(u);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &y in &adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// The level-m tile containing the level-n tile u (iterated parent).
    pub fn project_vertex(&self, m: u32, n: u32, u: usize) -> usize {
        debug_assert!(m <= n);
        let mut at = u;
        for level in (m + 1..=n).rev() {
            at = self.tower.level(level).faces[at].parent.index;
        }
        at
    }

    /// Level-(m+steps) descendants of the level-m face u.
    pub fn descendants(&self, m: u32, u: usize, steps: u32) -> Vec<usize> {
        let mut cur = vec![u];
        for level in m..m + steps {
            let child = &self.tower.steps[level as usize].face_children;
            cur = cur.iter().flat_map(|&f| child[f].iter().copied()).collect();
        }
        cur
    }
}
