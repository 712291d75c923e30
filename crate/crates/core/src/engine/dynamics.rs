//! Local degrees at base vertices and the returning-tile computation.

use serde::Serialize;

use super::complex::CellId;
use super::subdivide::{subdivide_sphere, CellBudget};
use crate::model::{Rule, TileTypeId, VertexTypeId};

#[derive(Debug, Clone, thiserror::Error)]
#[error(
    "vertex `{vertex}`: level-1 valence {val1} is not a multiple of the image \
     vertex valence {val0}, so the map branches non-integrally"
)]
pub struct DegreeError {
    pub vertex: String,
    pub val1: usize,
    pub val0: usize,
}

/// Local degree of the subdivision map at every base vertex:
/// d_v = val_1(v) / val_0(f(v)).
pub fn local_degrees(rule: &Rule) -> Result<Vec<usize>, DegreeError> {
    let tower = subdivide_sphere(rule, 1, &CellBudget::default())
        .expect("a single level fits any sane budget");
    let base = tower.level(0);
    let one = tower.level(1);
    let mut out = Vec::with_capacity(rule.spec.vertices.len());
    for v in 0..rule.spec.vertices.len() {
        let copy = tower.steps[0].vertex_copy[v];
        let val1 = one.vertex_valence(copy);
        let val0 = base.vertex_valence(rule.vertex_map[v]);
        if val0 == 0 || !val1.is_multiple_of(val0) {
            return Err(DegreeError {
                vertex: rule.spec.vertex_name(v).to_string(),
                val1,
                val0,
            });
        }
        out.push(val1 / val0);
    }
    Ok(out)
}

pub fn local_degree(rule: &Rule, v: VertexTypeId) -> Result<usize, DegreeError> {
    Ok(local_degrees(rule)?[v])
}

/// A level-n tile the n-fold subdivision map sends onto the base tile
/// containing it.
#[derive(Debug, Clone, Serialize)]
pub struct ReturningTile {
    pub n: u32,
    /// Tile types around the child-of cycle, starting at the witness's
    /// base tile.
    pub cycle: Vec<TileTypeId>,
    /// The level-n face index, wrapped as a cell id.
    pub witness: CellId,
}

/// The tile-type digraph has an arc t -> t' when subdividing t produces a
/// child of type t'. Every node has out-degree >= 1, so a cycle exists;
/// this returns a shortest one and descends it to a concrete witness face.
pub fn find_returning_tile(rule: &Rule) -> ReturningTile {
    let spec = &rule.spec;
    let tiles = spec.tiles.len();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); tiles];
    for (t, sch) in spec.schemes.iter().enumerate() {
        let mut seen = vec![false; tiles];
        for g in &sch.faces {
            if !seen[g.image] {
                seen[g.image] = true;
                succ[t].push(g.image);
            }
        }
    }

    // shortest cycle through each start, smallest start wins ties
    let mut best: Option<Vec<usize>> = None;
    for start in 0..tiles {
        let mut dist = vec![usize::MAX; tiles];
        let mut back = vec![usize::MAX; tiles];
        let mut queue = std::collections::VecDeque::new();
        for &s in &succ[start] {
            if dist[s] == usize::MAX {
                dist[s] = 1;
                back[s] = start;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            if u == start {
                break;
            }
            for &s in &succ[u] {
                if dist[s] == usize::MAX {
                    dist[s] = dist[u] + 1;
                    back[s] = u;
                    queue.push_back(s);
                }
            }
        }
        if dist[start] == usize::MAX {
            continue;
        }
        if best.as_ref().is_none_or(|b| dist[start] < b.len()) {
            let mut cycle = vec![start];
            let mut at = back[start];
            while at != start {
                cycle.push(at);
                at = back[at];
            }
            cycle.reverse();
            // reversal leaves the start in front: [start, ..arc order..]
            cycle.rotate_right(1);
            debug_assert_eq!(cycle[0], start);
            best = Some(cycle);
        }
    }
    let cycle = best.expect("every tile has children, so the digraph has a cycle");
    let n = cycle.len() as u32;

    // descend the cycle from the base face of the starting type, always
    // taking the first scheme face with the right image
    let mut witness_index = cycle[0];
    let mut types: Vec<TileTypeId> = (0..tiles).collect();
    for m in 0..n as usize {
        let want = cycle[(m + 1) % n as usize];
        let mut next_types = Vec::with_capacity(types.len() * 2);
        let mut next_witness = usize::MAX;
        for (fi, &t) in types.iter().enumerate() {
            if fi == witness_index {
                for (gi, g) in spec.schemes[t].faces.iter().enumerate() {
                    if g.image == want {
                        next_witness = next_types.len() + gi;
                        break;
                    }
                }
            }
            next_types.extend(spec.schemes[t].faces.iter().map(|g| g.image));
        }
        debug_assert_ne!(next_witness, usize::MAX);
        witness_index = next_witness;
        types = next_types;
    }

    ReturningTile {
        n,
        cycle,
        witness: CellId::new(n as i32, 2, witness_index),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthConstants {
    /// Number of base tiles.
    pub a: usize,
    /// True when some level-1 tile maps onto the base tile containing it.
    pub b_zero_possible: bool,
    pub returning: ReturningTile,
}

pub fn growth_constants(rule: &Rule) -> GrowthConstants {
    let returning = find_returning_tile(rule);
    GrowthConstants {
        a: rule.spec.tiles.len(),
        b_zero_possible: returning.n == 1,
        returning,
    }
}
