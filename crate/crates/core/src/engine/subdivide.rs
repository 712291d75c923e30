//! One subdivision step and the towers built from it.
//!
//! A step splits every edge along its type's word and pastes every face's
//! scheme. Shared edges need no reconciliation: both incident faces resolve
//! a boundary subedge to the same cell because edge subdivision is keyed by
//! the edge type alone.

use super::complex::{CellId, ComplexKind, EdgeCell, FaceCell, LevelComplex, VertexCell, ROOT};
use crate::model::{LocalVertex, Rule, TileTypeId};

/// Children of every level-n cell, indexed the way the scheme names them.
/// Subedges and word points are ordered along the parent edge's canonical
/// direction.
#[derive(Debug, Clone)]
pub struct ChildIndex {
    pub vertex_copy: Vec<usize>,
    /// edge_points[e][i] = vertex at word point i+1 of edge e.
    pub edge_points: Vec<Vec<usize>>,
    /// edge_subedges[e][p] = edge over word position p of edge e.
    pub edge_subedges: Vec<Vec<usize>>,
    /// face_interiors[f][i] = vertex for interior i of the face's scheme.
    pub face_interiors: Vec<Vec<usize>>,
    /// face_edges[f][s] = edge realizing scheme edge s inside face f;
    /// boundary scheme edges resolve to the shared subedge.
    pub face_edges: Vec<Vec<usize>>,
    /// face_children[f][g] = face for scheme face g.
    pub face_children: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy)]
pub struct CellBudget {
    /// Cap on cells summed over all levels of one tower.
    pub max_cells: u64,
}

impl Default for CellBudget {
    fn default() -> Self {
        CellBudget {
            max_cells: 5_000_000,
        }
    }
}

impl CellBudget {
    pub fn new(max_cells: u64) -> CellBudget {
        CellBudget { max_cells }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error(
    "cell budget exceeded: the tower reached level {level_reached} and the \
     next level projects to {projected} cells in total"
)]
pub struct BudgetExceeded {
    pub level_reached: u32,
    pub projected: u64,
}

/// Cells the next level will hold, computed from type data alone.
fn project_next(rule: &Rule, cx: &LevelComplex) -> u64 {
    let spec = &rule.spec;
    let mut v = cx.vertices.len() as u64;
    let mut e = 0u64;
    let mut f = 0u64;
    for edge in &cx.edges {
        let k = spec.edges[edge.etype].word.images.len() as u64;
        v += k - 1;
        e += k;
    }
    for face in &cx.faces {
        let sch = &spec.schemes[face.ftype];
        v += sch.interiors.len() as u64;
        e += rule.schemes[face.ftype]
            .role
            .iter()
            .filter(|r| r.is_none())
            .count() as u64;
        f += sch.faces.len() as u64;
    }
    v + e + f
}

/// A scheme that does nothing: one child face congruent to the model disk.
/// Children of such faces keep their parent's birth level.
fn scheme_is_trivial(rule: &Rule, t: TileTypeId) -> bool {
    let sch = &rule.spec.schemes[t];
    sch.faces.len() == 1
        && sch.interiors.is_empty()
        && sch.edges.len() == rule.spec.tiles[t].len()
        && rule.schemes[t].role.iter().all(Option::is_some)
}

/// Subdivide one level. `prev` is the step below, used to thread image
/// pointers; pass `None` for disk towers and for the sphere base step,
/// where images come straight from the type tables.
fn subdivide_step(
    rule: &Rule,
    kind: ComplexKind,
    cx: &LevelComplex,
    prev: Option<&ChildIndex>,
) -> (LevelComplex, ChildIndex) {
    let spec = &rule.spec;
    let new_level = cx.level + 1;
    let sphere = matches!(kind, ComplexKind::Sphere);
    debug_assert!(prev.is_some() || cx.level == 0 || !sphere);

    let mut vertices: Vec<VertexCell> = Vec::new();
    let mut edges: Vec<EdgeCell> = Vec::new();
    let mut faces: Vec<FaceCell> = Vec::new();

    let vertex_copy: Vec<usize> = cx
        .vertices
        .iter()
        .enumerate()
        .map(|(vi, v)| {
            let image = if !sphere {
                None
            } else if let Some(ps) = prev {
                Some(ps.vertex_copy[v.image.unwrap()])
            } else {
                Some(rule.vertex_map[v.vtype])
            };
            vertices.push(VertexCell {
                vtype: rule.vertex_map[v.vtype],
                parent: cx.vertex_id(vi),
                image,
                birth: v.birth,
            });
            vertices.len() - 1
        })
        .collect();

    let mut edge_points: Vec<Vec<usize>> = Vec::with_capacity(cx.edges.len());
    let mut edge_subedges: Vec<Vec<usize>> = Vec::with_capacity(cx.edges.len());
    for (ei, e) in cx.edges.iter().enumerate() {
        let word = &spec.edges[e.etype].word;
        let k = word.images.len();
        let mut pts = Vec::with_capacity(k - 1);
        for i in 0..k - 1 {
            let image = if !sphere {
                None
            } else if let Some(ps) = prev {
                Some(ps.edge_points[e.image.unwrap()][i])
            } else {
                Some(word.points[i])
            };
            vertices.push(VertexCell {
                vtype: word.points[i],
                parent: cx.edge_id(ei),
                image,
                birth: new_level,
            });
            pts.push(vertices.len() - 1);
        }
        let mut chain = Vec::with_capacity(k + 1);
        chain.push(vertex_copy[e.tail]);
        chain.extend_from_slice(&pts);
        chain.push(vertex_copy[e.head]);
        let mut subs = Vec::with_capacity(k);
        for (p, &oe) in word.images.iter().enumerate() {
            let (tail, head) = if oe.forward {
                (chain[p], chain[p + 1])
            } else {
                (chain[p + 1], chain[p])
            };
            let image = if !sphere {
                None
            } else if let Some(ps) = prev {
                Some(ps.edge_subedges[e.image.unwrap()][p])
            } else {
                Some(oe.edge)
            };
            edges.push(EdgeCell {
                etype: oe.edge,
                tail,
                head,
                parent: cx.edge_id(ei),
                image,
                birth: if k == 1 { e.birth } else { new_level },
            });
            subs.push(edges.len() - 1);
        }
        edge_points.push(pts);
        edge_subedges.push(subs);
    }

    let mut face_interiors: Vec<Vec<usize>> = Vec::with_capacity(cx.faces.len());
    let mut face_edges: Vec<Vec<usize>> = Vec::with_capacity(cx.faces.len());
    let mut face_children: Vec<Vec<usize>> = Vec::with_capacity(cx.faces.len());
    for (fi, face) in cx.faces.iter().enumerate() {
        let t = face.ftype;
        let sch = &spec.schemes[t];
        let compiled = &rule.schemes[t];
        let trivial = scheme_is_trivial(rule, t);

        let ivs: Vec<usize> = sch
            .interiors
            .iter()
            .enumerate()
            .map(|(i, iv)| {
                let image = if !sphere {
                    None
                } else if let Some(ps) = prev {
                    Some(ps.face_interiors[face.image.unwrap()][i])
                } else {
                    Some(iv.image)
                };
                vertices.push(VertexCell {
                    vtype: iv.image,
                    parent: cx.face_id(fi),
                    image,
                    birth: new_level,
                });
                vertices.len() - 1
            })
            .collect();

        let resolve = |lv: LocalVertex| -> usize {
            match lv {
                LocalVertex::Corner(i) => {
                    let (el, ccw_fwd) = face.boundary[i];
                    let old = if ccw_fwd {
                        cx.edges[el].head
                    } else {
                        cx.edges[el].tail
                    };
                    vertex_copy[old]
                }
                LocalVertex::BoundaryPoint { slot, index } => {
                    let (el, _) = face.boundary[slot];
                    edge_points[el][index - 1]
                }
                LocalVertex::Interior(i) => ivs[i],
            }
        };

        let mut sedges: Vec<usize> = Vec::with_capacity(sch.edges.len());
        for (si, se) in sch.edges.iter().enumerate() {
            let idx = match compiled.role[si] {
                None => {
                    let (a, b) = (resolve(se.tail), resolve(se.head));
                    let (tail, head) = if se.image.forward { (a, b) } else { (b, a) };
                    let image = if !sphere {
                        None
                    } else if let Some(ps) = prev {
                        Some(ps.face_edges[face.image.unwrap()][si])
                    } else {
                        Some(se.image.edge)
                    };
                    edges.push(EdgeCell {
                        etype: se.image.edge,
                        tail,
                        head,
                        parent: cx.face_id(fi),
                        image,
                        birth: new_level,
                    });
                    edges.len() - 1
                }
                Some(r) => {
                    let (el, ccw_fwd) = face.boundary[r.slot];
                    let k = edge_subedges[el].len();
                    let cpos = if ccw_fwd { r.pos } else { k - 1 - r.pos };
                    let idx = edge_subedges[el][cpos];
                    #[cfg(debug_assertions)]
                    {
                        // both incident faces must name the shared subedge
                        // with the same endpoints and type
                        let cell = &edges[idx];
                        let (a, b) = (resolve(se.tail), resolve(se.head));
                        assert_eq!(cell.etype, se.image.edge);
                        if se.image.forward {
                            assert_eq!((cell.tail, cell.head), (a, b));
                        } else {
                            assert_eq!((cell.tail, cell.head), (b, a));
                        }
                    }
                    idx
                }
            };
            sedges.push(idx);
        }

        let kids: Vec<usize> = sch
            .faces
            .iter()
            .enumerate()
            .map(|(gi, g)| {
                let m = g.sides.len();
                let mut boundary = vec![(usize::MAX, false); m];
                for (j, side) in g.sides.iter().enumerate() {
                    let target = (j + g.rot) % m;
                    let flag = side.forward == sch.edges[side.edge].image.forward;
                    debug_assert_eq!(flag, spec.tiles[g.image].slots[target].edge.forward);
                    boundary[target] = (sedges[side.edge], flag);
                }
                let image = if !sphere {
                    None
                } else if let Some(ps) = prev {
                    Some(ps.face_children[face.image.unwrap()][gi])
                } else {
                    Some(g.image)
                };
                faces.push(FaceCell {
                    ftype: g.image,
                    boundary,
                    parent: cx.face_id(fi),
                    image,
                    birth: if trivial { face.birth } else { new_level },
                });
                faces.len() - 1
            })
            .collect();

        face_interiors.push(ivs);
        face_edges.push(sedges);
        face_children.push(kids);
    }

    (
        LevelComplex {
            level: new_level,
            vertices,
            edges,
            faces,
        },
        ChildIndex {
            vertex_copy,
            edge_points,
            edge_subedges,
            face_interiors,
            face_edges,
            face_children,
        },
    )
}

fn base_sphere(rule: &Rule) -> LevelComplex {
    let spec = &rule.spec;
    let vertices = (0..spec.vertices.len())
        .map(|w| VertexCell {
            vtype: w,
            parent: ROOT,
            image: None,
            birth: 0,
        })
        .collect();
    let edges = spec
        .edges
        .iter()
        .enumerate()
        .map(|(ei, e)| EdgeCell {
            etype: ei,
            tail: e.tail,
            head: e.head,
            parent: ROOT,
            image: None,
            birth: 0,
        })
        .collect();
    let faces = spec
        .tiles
        .iter()
        .enumerate()
        .map(|(t, tile)| FaceCell {
            ftype: t,
            boundary: tile
                .slots
                .iter()
                .map(|s| (s.edge.edge, s.edge.forward))
                .collect(),
            parent: ROOT,
            image: None,
            birth: 0,
        })
        .collect();
    LevelComplex {
        level: 0,
        vertices,
        edges,
        faces,
    }
}

fn base_disk(rule: &Rule, t: TileTypeId) -> LevelComplex {
    let tile = &rule.spec.tiles[t];
    let n = tile.len();
    let vertices = (0..n)
        .map(|i| VertexCell {
            vtype: tile.corner(i),
            parent: ROOT,
            image: None,
            birth: 0,
        })
        .collect();
    let edges = (0..n)
        .map(|i| {
            let prev = (i + n - 1) % n;
            let s = tile.slots[i].edge;
            let (tail, head) = if s.forward { (prev, i) } else { (i, prev) };
            EdgeCell {
                etype: s.edge,
                tail,
                head,
                parent: ROOT,
                image: None,
                birth: 0,
            }
        })
        .collect();
    let faces = vec![FaceCell {
        ftype: t,
        boundary: (0..n).map(|i| (i, tile.slots[i].edge.forward)).collect(),
        parent: ROOT,
        image: None,
        birth: 0,
    }];
    LevelComplex {
        level: 0,
        vertices,
        edges,
        faces,
    }
}

/// A memoized sequence of levels over one base surface.
#[derive(Debug, Clone)]
pub struct Tower {
    pub rule: Rule,
    pub kind: ComplexKind,
    /// levels[n] = the level-n complex.
    pub levels: Vec<LevelComplex>,
    /// steps[n] maps level-n cells to their level-(n+1) children.
    pub steps: Vec<ChildIndex>,
    cumulative: u64,
}

impl Tower {
    pub fn sphere(rule: &Rule) -> Tower {
        let base = base_sphere(rule);
        let cumulative = base.cell_count() as u64;
        Tower {
            rule: rule.clone(),
            kind: ComplexKind::Sphere,
            levels: vec![base],
            steps: Vec::new(),
            cumulative,
        }
    }

    pub fn disk(rule: &Rule, t: TileTypeId) -> Tower {
        let base = base_disk(rule, t);
        let cumulative = base.cell_count() as u64;
        Tower {
            rule: rule.clone(),
            kind: ComplexKind::Disk(t),
            levels: vec![base],
            steps: Vec::new(),
            cumulative,
        }
    }

    pub fn top_level(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }

    pub fn level(&self, n: u32) -> &LevelComplex {
        &self.levels[n as usize]
    }

    pub fn cells_so_far(&self) -> u64 {
        self.cumulative
    }

    pub fn grow_to(&mut self, n: u32, budget: &CellBudget) -> Result<(), BudgetExceeded> {
        while self.top_level() < n {
            let top = self.levels.last().unwrap();
            let projected = self.cumulative + project_next(&self.rule, top);
            if projected > budget.max_cells {
                return Err(BudgetExceeded {
                    level_reached: self.top_level(),
                    projected,
                });
            }
            let sphere = matches!(self.kind, ComplexKind::Sphere);
            let prev = if sphere && top.level >= 1 {
                self.steps.last()
            } else {
                None
            };
            let (next, step) = subdivide_step(&self.rule, self.kind, top, prev);
            self.cumulative = projected;
            self.levels.push(next);
            self.steps.push(step);
        }
        Ok(())
    }

    fn parent_of(&self, id: CellId) -> CellId {
        let cx = &self.levels[id.level as usize];
        match id.dim {
            0 => cx.vertices[id.index].parent,
            1 => cx.edges[id.index].parent,
            _ => cx.faces[id.index].parent,
        }
    }

    /// Walks parent pointers down to level 0. Parents never drop in
    /// dimension, so the result is the smallest base cell whose closure
    /// carries the given one.
    pub fn level0_ancestor(&self, mut id: CellId) -> CellId {
        while id.level > 0 {
            id = self.parent_of(id);
        }
        id
    }

    fn image_of(&self, id: CellId) -> CellId {
        let cx = &self.levels[id.level as usize];
        let idx = match id.dim {
            0 => cx.vertices[id.index].image,
            1 => cx.edges[id.index].image,
            _ => cx.faces[id.index].image,
        };
        CellId::new(
            id.level - 1,
            id.dim,
            idx.expect("image pointers exist on sphere towers"),
        )
    }

    /// Applies the subdivision map `steps` times by following image
    /// pointers. Sphere towers only.
    pub fn image_after(&self, mut id: CellId, steps: u32) -> CellId {
        for _ in 0..steps {
            id = self.image_of(id);
        }
        id
    }
}

/// Builds R^n of the base sphere, keeping every intermediate level.
pub fn subdivide_sphere(rule: &Rule, n: u32, budget: &CellBudget) -> Result<Tower, BudgetExceeded> {
    let mut tower = Tower::sphere(rule);
    tower.grow_to(n, budget)?;
    Ok(tower)
}

/// Builds R^n of one tile type's model disk, keeping every level.
pub fn subdivide_tile(
    rule: &Rule,
    t: TileTypeId,
    n: u32,
    budget: &CellBudget,
) -> Result<Tower, BudgetExceeded> {
    let mut tower = Tower::disk(rule, t);
    tower.grow_to(n, budget)?;
    Ok(tower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load_fixture;

    fn sphere_levels(name: &str, n: u32) -> Tower {
        let rule = load_fixture(name).unwrap();
        subdivide_sphere(&rule, n, &CellBudget::default()).unwrap()
    }

    #[test]
    fn pillow2_level_one_counts() {
        let tower = sphere_levels("pillow2", 1);
        assert_eq!(tower.level(0).counts(), (4, 4, 2));
        assert_eq!(tower.level(1).counts(), (10, 16, 8));
        assert_eq!(tower.level(1).euler(), 2);
    }

    #[test]
    fn pillow2_level_two_face_count() {
        let tower = sphere_levels("pillow2", 2);
        assert_eq!(tower.level(2).faces.len(), 32);
        assert_eq!(tower.level(2).euler(), 2);
    }

    #[test]
    fn sphere_euler_stays_two() {
        for name in ["pillow2", "columns2", "barycentric", "triangles3"] {
            let tower = sphere_levels(name, 3);
            for n in 0..=3 {
                assert_eq!(tower.level(n).euler(), 2, "{name} level {n}");
            }
        }
    }

    #[test]
    fn disk_euler_stays_one() {
        for name in ["pillow2", "columns2", "barycentric", "triangles3"] {
            let rule = load_fixture(name).unwrap();
            for t in 0..rule.spec.tiles.len() {
                let tower = subdivide_tile(&rule, t, 3, &CellBudget::default()).unwrap();
                for n in 0..=3 {
                    assert_eq!(tower.level(n).euler(), 1, "{name} tile {t} level {n}");
                }
            }
        }
    }

    #[test]
    fn columns2_disk_level_one_counts() {
        let rule = load_fixture("columns2").unwrap();
        let tower = subdivide_tile(&rule, 0, 1, &CellBudget::default()).unwrap();
        assert_eq!(tower.level(1).counts(), (6, 7, 2));
    }

    #[test]
    fn pillow2_disk_level_one_counts() {
        let rule = load_fixture("pillow2").unwrap();
        let tower = subdivide_tile(&rule, 0, 1, &CellBudget::default()).unwrap();
        assert_eq!(tower.level(1).counts(), (9, 12, 4));
    }

    #[test]
    fn barycentric_face_counts_multiply_by_six() {
        let tower = sphere_levels("barycentric", 3);
        for n in 0..=3u32 {
            assert_eq!(tower.level(n).faces.len(), 2 * 6usize.pow(n));
        }
    }

    #[test]
    fn image_pointers_preserve_types_and_boundaries() {
        for name in ["pillow2", "columns2", "barycentric", "triangles3"] {
            let tower = sphere_levels(name, 3);
            for n in 1..=3usize {
                let cx = tower.level(n as u32);
                let below = tower.level(n as u32 - 1);
                for v in &cx.vertices {
                    assert_eq!(v.vtype, below.vertices[v.image.unwrap()].vtype);
                }
                for e in &cx.edges {
                    let im = &below.edges[e.image.unwrap()];
                    assert_eq!(e.etype, im.etype);
                    assert_eq!(cx.vertices[e.tail].image.unwrap(), im.tail);
                    assert_eq!(cx.vertices[e.head].image.unwrap(), im.head);
                }
                for f in &cx.faces {
                    let im = &below.faces[f.image.unwrap()];
                    assert_eq!(f.ftype, im.ftype);
                    assert_eq!(f.boundary.len(), im.boundary.len());
                    for (slot, &(el, flag)) in f.boundary.iter().enumerate() {
                        let (iel, iflag) = im.boundary[slot];
                        assert_eq!(cx.edges[el].image.unwrap(), iel, "{name} level {n}");
                        assert_eq!(flag, iflag);
                    }
                }
            }
        }
    }

    #[test]
    fn parents_tile_exactly() {
        let tower = sphere_levels("triangles3", 3);
        for n in 1..=3usize {
            let cx = tower.level(n as u32);
            let below = tower.level(n as u32 - 1);
            let mut children = vec![0usize; below.faces.len()];
            for f in &cx.faces {
                assert_eq!(f.parent.level, n as i32 - 1);
                assert_eq!(f.parent.dim, 2);
                children[f.parent.index] += 1;
            }
            for (fi, &c) in children.iter().enumerate() {
                let t = below.faces[fi].ftype;
                assert_eq!(c, tower.rule.spec.schemes[t].faces.len());
            }
        }
    }

    #[test]
    fn tiny_budget_reports_projection() {
        let rule = load_fixture("barycentric").unwrap();
        let err = subdivide_sphere(&rule, 4, &CellBudget::new(100)).unwrap_err();
        assert_eq!(err.level_reached, 1);
        assert!(err.projected > 100);
        let err = subdivide_sphere(&rule, 4, &CellBudget::new(40)).unwrap_err();
        assert_eq!(err.level_reached, 0);
    }

    #[test]
    fn deterministic_rebuild() {
        let a = sphere_levels("columns2", 3);
        let b = sphere_levels("columns2", 3);
        for n in 0..=3 {
            let (ca, cb) = (a.level(n), b.level(n));
            assert_eq!(ca.counts(), cb.counts());
            for (x, y) in ca.edges.iter().zip(&cb.edges) {
                assert_eq!((x.etype, x.tail, x.head), (y.etype, y.tail, y.head));
            }
            for (x, y) in ca.faces.iter().zip(&cb.faces) {
                assert_eq!(x.boundary, y.boundary);
            }
        }
    }

    #[test]
    fn birth_levels_track_first_appearance() {
        let tower = sphere_levels("columns2", 2);
        let cx = tower.level(2);
        // edge types b and d never split, so their copies keep birth 0
        for e in &cx.edges {
            let name = tower.rule.spec.edge_name(e.etype);
            if name == "d" {
                assert!(e.birth <= 1, "copies of never-splitting edges stay old");
            }
        }
        let old_edges = cx.edges.iter().filter(|e| e.birth == 0).count();
        assert!(old_edges > 0);
        // every vertex copy keeps its birth level
        let v0 = tower.steps[0].vertex_copy[0];
        let v0 = tower.steps[1].vertex_copy[v0];
        assert_eq!(cx.vertices[v0].birth, 0);
    }
}
