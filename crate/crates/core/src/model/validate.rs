//! Semantic validation and compilation.
//!
//! `validate_fsr` checks everything the text format cannot express:
//! edge words chain correctly, tiles are coherent polygons, each scheme is a
//! genuine subdivided disk whose boundary realizes the subdivided slot words,
//! face images are rotation compatible, and the gluing closes up into a
//! sphere. `Rule::compile` reruns the same analysis and keeps the derived
//! tables the engine needs: the vertex map, normalized edge sides, and per
//! scheme the ccw boundary chains with each scheme edge classified as a
//! boundary subedge or an interior edge.

use super::*;
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub check: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.findings.is_empty()
    }

    fn add(&mut self, check: &str, message: String) {
        self.findings.push(Finding {
            check: check.into(),
            message,
        });
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.findings.is_empty() {
            writeln!(f, "valid")
        } else {
            for finding in &self.findings {
                writeln!(f, "[{}] {}", finding.check, finding.message)?;
            }
            Ok(())
        }
    }
}

/// Which boundary subedge of the model disk a scheme edge realizes.
/// `slot` indexes the tile boundary, `pos` counts subedges ccw within the
/// slot (so against the edge word when the slot uses the edge backward).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubedgeRef {
    pub slot: usize,
    pub pos: usize,
}

#[derive(Debug, Clone)]
pub struct CompiledScheme {
    pub tile: TileTypeId,
    /// boundary[slot][pos] = directed scheme edge traversing that subedge ccw.
    pub boundary: Vec<Vec<DirectedLocal>>,
    /// role[scheme edge] = Some if the edge lies on the model boundary.
    pub role: Vec<Option<SubedgeRef>>,
}

/// A validated rule plus the derived tables the engine works from.
#[derive(Debug, Clone)]
pub struct Rule {
    pub spec: FsrSpec,
    /// Image of each vertex type under the subdivision map, read off the
    /// endpoints of the edge words.
    pub vertex_map: Vec<VertexTypeId>,
    pub schemes: Vec<CompiledScheme>,
    /// Per edge type, its two sides normalized as [forward slot, backward slot].
    pub edge_sides: Vec<[EdgeSide; 2]>,
}

fn tail_of(spec: &FsrSpec, oe: OrientedEdge) -> VertexTypeId {
    let e = &spec.edges[oe.edge];
    if oe.forward {
        e.tail
    } else {
        e.head
    }
}

fn head_of(spec: &FsrSpec, oe: OrientedEdge) -> VertexTypeId {
    let e = &spec.edges[oe.edge];
    if oe.forward {
        e.head
    } else {
        e.tail
    }
}

fn reverse(oe: OrientedEdge) -> OrientedEdge {
    OrientedEdge {
        edge: oe.edge,
        forward: !oe.forward,
    }
}

fn check_words(spec: &FsrSpec, report: &mut ValidationReport) {
    for e in &spec.edges {
        for (i, p) in e.word.points.iter().enumerate() {
            let left = head_of(spec, e.word.images[i]);
            let right = tail_of(spec, e.word.images[i + 1]);
            if left != *p || right != *p {
                report.add(
                    "word-chain",
                    format!(
                        "edge `{}`: word position {} expects point `{}` between `{}` and `{}`, \
                         but the adjacent images meet at `{}` / `{}`",
                        e.name,
                        i + 1,
                        spec.vertices[*p].name,
                        spec.describe_oriented(e.word.images[i]),
                        spec.describe_oriented(e.word.images[i + 1]),
                        spec.vertices[left].name,
                        spec.vertices[right].name,
                    ),
                );
            }
        }
    }
}

fn derive_vertex_map(spec: &FsrSpec, report: &mut ValidationReport) -> Option<Vec<VertexTypeId>> {
    let mut map: Vec<Option<VertexTypeId>> = vec![None; spec.vertices.len()];
    let mut ok = true;
    let mut assign = |v: VertexTypeId,
                      img: VertexTypeId,
                      via: String,
                      report: &mut ValidationReport,
                      ok: &mut bool| {
        match map[v] {
            None => map[v] = Some(img),
            Some(prev) if prev == img => {}
            Some(prev) => {
                report.add(
                    "vertex-map",
                    format!(
                        "vertex `{}` maps to both `{}` and `{}` ({})",
                        spec.vertices[v].name,
                        spec.vertices[prev].name,
                        spec.vertices[img].name,
                        via
                    ),
                );
                *ok = false;
            }
        }
    };
    for e in &spec.edges {
        let first = e.word.images[0];
        let last = *e.word.images.last().unwrap();
        assign(
            e.tail,
            tail_of(spec, first),
            format!("tail of edge `{}`", e.name),
            report,
            &mut ok,
        );
        assign(
            e.head,
            head_of(spec, last),
            format!("head of edge `{}`", e.name),
            report,
            &mut ok,
        );
    }
    let mut out = Vec::with_capacity(map.len());
    for (v, img) in map.iter().enumerate() {
        match img {
            Some(img) => out.push(*img),
            None => {
                report.add(
                    "vertex-map",
                    format!(
                        "vertex `{}` is not an endpoint of any edge, so its image is undetermined",
                        spec.vertices[v].name
                    ),
                );
                ok = false;
            }
        }
    }
    if ok {
        Some(out)
    } else {
        None
    }
}

fn check_tiles(spec: &FsrSpec, report: &mut ValidationReport) {
    for t in &spec.tiles {
        let n = t.len();
        if n < 3 {
            report.add(
                "tile-sides",
                format!("tile `{}` has {} sides, need at least 3", t.name, n),
            );
            continue;
        }
        for i in 0..n {
            let here = head_of(spec, t.slots[i].edge);
            if here != t.slots[i].corner {
                report.add(
                    "tile-corners",
                    format!(
                        "tile `{}`: ccw head of slot {} edge `{}` is `{}`, but corner {} is `{}`",
                        t.name,
                        i,
                        spec.describe_oriented(t.slots[i].edge),
                        spec.vertices[here].name,
                        i,
                        spec.vertices[t.slots[i].corner].name
                    ),
                );
            }
            let next = t.slots[(i + 1) % n].edge;
            if tail_of(spec, next) != t.slots[i].corner {
                report.add(
                    "tile-corners",
                    format!(
                        "tile `{}`: slot {} edge `{}` does not start at corner {} (`{}`)",
                        t.name,
                        (i + 1) % n,
                        spec.describe_oriented(next),
                        i,
                        spec.vertices[t.slots[i].corner].name
                    ),
                );
            }
        }
    }
}

/// The ccw chain of local vertices along slot `j`, from the slot's starting
/// corner through its boundary points to its ending corner. Boundary point
/// indices follow the edge's own word order, so a backward slot lists them
/// in descending order.
fn slot_positions(spec: &FsrSpec, tile: &TileType, j: usize) -> Vec<LocalVertex> {
    let n = tile.len();
    let slot = tile.slots[j];
    let k = spec.edges[slot.edge.edge].word.images.len();
    let mut out = vec![LocalVertex::Corner((j + n - 1) % n)];
    if slot.edge.forward {
        for i in 1..k {
            out.push(LocalVertex::BoundaryPoint { slot: j, index: i });
        }
    } else {
        for i in (1..k).rev() {
            out.push(LocalVertex::BoundaryPoint { slot: j, index: i });
        }
    }
    out.push(LocalVertex::Corner(j));
    out
}

fn local_vertex_name(spec: &FsrSpec, scheme: &SubdivisionScheme, lv: LocalVertex) -> String {
    match lv {
        LocalVertex::Corner(i) => format!("corner {i}"),
        LocalVertex::BoundaryPoint { slot, index } => format!("bp {slot}.{index}"),
        LocalVertex::Interior(i) => {
            let _ = spec;
            format!("interior {}", scheme.interiors[i].name)
        }
    }
}

/// Image vertex type of a scheme's local vertex under the subdivision map.
fn local_vertex_image(
    spec: &FsrSpec,
    vertex_map: &[VertexTypeId],
    scheme: &SubdivisionScheme,
    lv: LocalVertex,
) -> VertexTypeId {
    let tile = &spec.tiles[scheme.tile];
    match lv {
        LocalVertex::Corner(i) => vertex_map[tile.corner(i)],
        LocalVertex::BoundaryPoint { slot, index } => {
            let e = tile.slots[slot].edge.edge;
            spec.edges[e].word.points[index - 1]
        }
        LocalVertex::Interior(i) => scheme.interiors[i].image,
    }
}

/// Directed image of a scheme edge traversed in the given local direction.
fn effective_image(scheme: &SubdivisionScheme, side: DirectedLocal) -> OrientedEdge {
    let img = scheme.edges[side.edge].image;
    if side.forward {
        img
    } else {
        reverse(img)
    }
}

/// Expected directed image of the ccw subedge at (slot j, position p).
fn expected_subedge_image(spec: &FsrSpec, tile: &TileType, j: usize, p: usize) -> OrientedEdge {
    let slot = tile.slots[j];
    let word = &spec.edges[slot.edge.edge].word;
    let k = word.images.len();
    if slot.edge.forward {
        word.images[p]
    } else {
        reverse(word.images[k - 1 - p])
    }
}

struct SchemeAnalysis {
    compiled: CompiledScheme,
    findings: Vec<Finding>,
}

fn analyze_scheme(
    spec: &FsrSpec,
    vertex_map: Option<&[VertexTypeId]>,
    scheme: &SubdivisionScheme,
) -> SchemeAnalysis {
    let mut report = ValidationReport::default();
    let tile = &spec.tiles[scheme.tile];
    let tname = &tile.name;
    let n = tile.len();

    // Face boundary walks must close up, and each side list must fit its
    // image tile with the declared rotation.
    let mut uses: Vec<Vec<(usize, bool)>> = vec![Vec::new(); scheme.edges.len()];
    for (fi, face) in scheme.faces.iter().enumerate() {
        if face.sides.is_empty() {
            report.add(
                "scheme-faces",
                format!("tile `{tname}`: face `{}` has no sides", face.name),
            );
            continue;
        }
        let m = face.sides.len();
        for (si, side) in face.sides.iter().enumerate() {
            uses[side.edge].push((fi, side.forward));
            let here = if side.forward {
                scheme.edges[side.edge].head
            } else {
                scheme.edges[side.edge].tail
            };
            let next = face.sides[(si + 1) % m];
            let next_tail = if next.forward {
                scheme.edges[next.edge].tail
            } else {
                scheme.edges[next.edge].head
            };
            if here != next_tail {
                report.add(
                    "scheme-faces",
                    format!(
                        "tile `{tname}`: face `{}` does not close: side {} ends at {} but side {} starts at {}",
                        face.name,
                        si,
                        local_vertex_name(spec, scheme, here),
                        (si + 1) % m,
                        local_vertex_name(spec, scheme, next_tail)
                    ),
                );
            }
        }
        let image_tile = &spec.tiles[face.image];
        if m != image_tile.len() {
            report.add(
                "scheme-image",
                format!(
                    "tile `{tname}`: face `{}` has {} sides but its image tile `{}` has {}",
                    face.name,
                    m,
                    image_tile.name,
                    image_tile.len()
                ),
            );
            continue;
        }
        if face.rot >= image_tile.len() {
            report.add(
                "scheme-image",
                format!(
                    "tile `{tname}`: face `{}` rotation {} out of range for `{}`",
                    face.name, face.rot, image_tile.name
                ),
            );
            continue;
        }
        for (si, side) in face.sides.iter().enumerate() {
            let slot = (si + face.rot) % m;
            let want = image_tile.slots[slot].edge;
            let got = effective_image(scheme, *side);
            if got != want {
                report.add(
                    "scheme-image",
                    format!(
                        "tile `{tname}`: face `{}` side {} maps to `{}` but slot {} of `{}` is `{}`",
                        face.name,
                        si,
                        spec.describe_oriented(got),
                        slot,
                        image_tile.name,
                        spec.describe_oriented(want)
                    ),
                );
            }
            if let Some(vm) = vertex_map {
                let start = if side.forward {
                    scheme.edges[side.edge].tail
                } else {
                    scheme.edges[side.edge].head
                };
                let got_v = local_vertex_image(spec, vm, scheme, start);
                let want_v = image_tile.corner((slot + m - 1) % m);
                if got_v != want_v {
                    report.add(
                        "scheme-image",
                        format!(
                            "tile `{tname}`: face `{}` side {} starts at {} with image `{}`, \
                             but the corner of `{}` before slot {} is `{}`",
                            face.name,
                            si,
                            local_vertex_name(spec, scheme, start),
                            spec.vertices[got_v].name,
                            image_tile.name,
                            slot,
                            spec.vertices[want_v].name
                        ),
                    );
                }
            }
        }
    }

    // Scheme edge images must respect endpoint types.
    if let Some(vm) = vertex_map {
        for e in &scheme.edges {
            let tail_img = local_vertex_image(spec, vm, scheme, e.tail);
            let head_img = local_vertex_image(spec, vm, scheme, e.head);
            if tail_img != tail_of(spec, e.image) || head_img != head_of(spec, e.image) {
                report.add(
                    "scheme-edge-image",
                    format!(
                        "tile `{tname}`: edge `{}` runs {} -> {} with endpoint images `{}` -> `{}`, \
                         which do not match its image `{}` ({} -> {})",
                        e.name,
                        local_vertex_name(spec, scheme, e.tail),
                        local_vertex_name(spec, scheme, e.head),
                        spec.vertices[tail_img].name,
                        spec.vertices[head_img].name,
                        spec.describe_oriented(e.image),
                        spec.vertices[tail_of(spec, e.image)].name,
                        spec.vertices[head_of(spec, e.image)].name
                    ),
                );
            }
        }
    }

    // Edge/face incidence counts: interior edges carry two face sides with
    // opposite directions, boundary edges exactly one.
    for (ei, u) in uses.iter().enumerate() {
        match u.len() {
            0 => report.add(
                "scheme-disk",
                format!(
                    "tile `{tname}`: edge `{}` borders no face",
                    scheme.edges[ei].name
                ),
            ),
            1 => {}
            2 => {
                if u[0].1 == u[1].1 {
                    report.add(
                        "scheme-disk",
                        format!(
                            "tile `{tname}`: edge `{}` is used twice in the same direction",
                            scheme.edges[ei].name
                        ),
                    );
                }
            }
            k => report.add(
                "scheme-disk",
                format!(
                    "tile `{tname}`: edge `{}` borders {} face sides, at most 2 allowed",
                    scheme.edges[ei].name, k
                ),
            ),
        }
    }

    // Recover the ccw boundary chain slot by slot. Each boundary subedge must
    // be realized by exactly one single-use scheme edge. The single face of a
    // boundary edge lies inside the disk, so that face's ccw traversal agrees
    // with the ccw boundary direction; this disambiguates direction.
    let mut boundary: Vec<Vec<DirectedLocal>> = Vec::with_capacity(n);
    let mut role: Vec<Option<SubedgeRef>> = vec![None; scheme.edges.len()];
    if n >= 3 {
        for j in 0..n {
            let positions = slot_positions(spec, tile, j);
            let mut chain = Vec::new();
            for p in 0..positions.len() - 1 {
                let (a, b) = (positions[p], positions[p + 1]);
                let mut found: Vec<DirectedLocal> = Vec::new();
                for (ei, e) in scheme.edges.iter().enumerate() {
                    if uses[ei].len() != 1 {
                        continue;
                    }
                    let dir = if e.tail == a && e.head == b {
                        true
                    } else if e.tail == b && e.head == a {
                        false
                    } else {
                        continue;
                    };
                    if uses[ei][0].1 == dir {
                        found.push(DirectedLocal {
                            edge: ei,
                            forward: dir,
                        });
                    }
                }
                match found.as_slice() {
                    [one] => {
                        if let Some(prev) = role[one.edge].replace(SubedgeRef { slot: j, pos: p }) {
                            report.add(
                                "scheme-boundary",
                                format!(
                                    "tile `{tname}`: edge `{}` realizes two boundary subedges \
                                     (slot {} pos {} and slot {} pos {})",
                                    scheme.edges[one.edge].name, prev.slot, prev.pos, j, p
                                ),
                            );
                        }
                        chain.push(*one);
                        let got = effective_image(scheme, *one);
                        let want = expected_subedge_image(spec, tile, j, p);
                        if got != want {
                            report.add(
                                "scheme-boundary",
                                format!(
                                    "tile `{tname}`: boundary subedge at slot {} pos {} maps to `{}`, \
                                     the slot word requires `{}`",
                                    j,
                                    p,
                                    spec.describe_oriented(got),
                                    spec.describe_oriented(want)
                                ),
                            );
                        }
                    }
                    [] => report.add(
                        "scheme-boundary",
                        format!(
                            "tile `{tname}`: no edge realizes the boundary subedge from {} to {} \
                             (slot {} pos {})",
                            local_vertex_name(spec, scheme, a),
                            local_vertex_name(spec, scheme, b),
                            j,
                            p
                        ),
                    ),
                    many => report.add(
                        "scheme-boundary",
                        format!(
                            "tile `{tname}`: {} edges realize the boundary subedge at slot {} pos {}",
                            many.len(),
                            j,
                            p
                        ),
                    ),
                }
            }
            boundary.push(chain);
        }
        for (ei, u) in uses.iter().enumerate() {
            if u.len() == 1 && role[ei].is_none() {
                report.add(
                    "scheme-boundary",
                    format!(
                        "tile `{tname}`: edge `{}` has a free side but lies on no boundary subedge",
                        scheme.edges[ei].name
                    ),
                );
            }
        }
    }

    // Euler characteristic and connectivity pin down the disk topology:
    // connected, one boundary circle, chi = 1.
    let bps: usize = tile
        .slots
        .iter()
        .map(|s| spec.edges[s.edge.edge].word.points.len())
        .sum();
    let v = n + bps + scheme.interiors.len();
    let chi = v as i64 - scheme.edges.len() as i64 + scheme.faces.len() as i64;
    if chi != 1 {
        report.add(
            "scheme-disk",
            format!(
                "tile `{tname}`: Euler characteristic is {chi} (V={v} E={} F={}), a disk needs 1",
                scheme.edges.len(),
                scheme.faces.len()
            ),
        );
    }
    let mut dsu = Dsu::new(v);
    let lv_index = |lv: LocalVertex| -> usize {
        match lv {
            LocalVertex::Corner(i) => i,
            LocalVertex::BoundaryPoint { slot, index } => {
                let mut off = n;
                for s in 0..slot {
                    off += spec.edges[tile.slots[s].edge.edge].word.points.len();
                }
                off + index - 1
            }
            LocalVertex::Interior(i) => n + bps + i,
        }
    };
    for e in &scheme.edges {
        dsu.union(lv_index(e.tail), lv_index(e.head));
    }
    if v > 0 {
        let root = dsu.find(0);
        if (1..v).any(|i| dsu.find(i) != root) {
            report.add(
                "scheme-disk",
                format!("tile `{tname}`: the subdivision complex is not connected"),
            );
        }
    }

    SchemeAnalysis {
        compiled: CompiledScheme {
            tile: scheme.tile,
            boundary,
            role,
        },
        findings: report.findings,
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

fn check_sphere(spec: &FsrSpec, report: &mut ValidationReport) -> Option<Vec<[EdgeSide; 2]>> {
    let mut ok = true;
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (e, sides) in spec.gluing.sides.iter().enumerate() {
        for side in sides {
            if let Some(prev) = seen.insert((side.tile, side.slot), e) {
                report.add(
                    "sphere-sides",
                    format!(
                        "slot {} of tile `{}` is glued by both edge `{}` and edge `{}`",
                        side.slot,
                        spec.tiles[side.tile].name,
                        spec.edges[prev].name,
                        spec.edges[e].name
                    ),
                );
                ok = false;
            }
            let slot = spec.tiles[side.tile].slots.get(side.slot);
            match slot {
                Some(s) if s.edge.edge == e => {}
                Some(s) => {
                    report.add(
                        "sphere-sides",
                        format!(
                            "edge `{}` lists slot {} of tile `{}`, but that slot carries edge `{}`",
                            spec.edges[e].name,
                            side.slot,
                            spec.tiles[side.tile].name,
                            spec.edges[s.edge.edge].name
                        ),
                    );
                    ok = false;
                }
                None => {
                    ok = false;
                }
            }
        }
    }
    let total_slots: usize = spec.tiles.iter().map(|t| t.len()).sum();
    if total_slots != 2 * spec.edges.len() {
        report.add(
            "sphere-sides",
            format!(
                "tiles have {} boundary slots in total but {} edges provide {} sides",
                total_slots,
                spec.edges.len(),
                2 * spec.edges.len()
            ),
        );
        ok = false;
    } else if seen.len() != total_slots {
        for (t, tile) in spec.tiles.iter().enumerate() {
            for j in 0..tile.len() {
                if !seen.contains_key(&(t, j)) {
                    report.add(
                        "sphere-sides",
                        format!(
                            "slot {} of tile `{}` is not glued to anything",
                            j, tile.name
                        ),
                    );
                }
            }
        }
        ok = false;
    }

    let mut normalized = Vec::with_capacity(spec.gluing.sides.len());
    for (e, sides) in spec.gluing.sides.iter().enumerate() {
        let sign = |side: &EdgeSide| -> Option<bool> {
            spec.tiles[side.tile]
                .slots
                .get(side.slot)
                .map(|s| s.edge.forward)
        };
        match (sign(&sides[0]), sign(&sides[1])) {
            (Some(a), Some(b)) if a != b => {
                normalized.push(if a {
                    [sides[0], sides[1]]
                } else {
                    [sides[1], sides[0]]
                });
            }
            (Some(a), Some(_)) => {
                report.add(
                    "sphere-sides",
                    format!(
                        "edge `{}` is glued to two slots with the same direction ({})",
                        spec.edges[e].name,
                        if a { "both forward" } else { "both backward" }
                    ),
                );
                ok = false;
            }
            _ => ok = false,
        }
    }
    if !ok {
        return None;
    }

    // Close up tile corners along the gluing and compare the resulting
    // vertex set with the declared one: same size, one class per type.
    let mut offset = Vec::with_capacity(spec.tiles.len());
    let mut total = 0usize;
    for t in &spec.tiles {
        offset.push(total);
        total += t.len();
    }
    let mut dsu = Dsu::new(total);
    for sides in &spec.gluing.sides {
        let corner_pair = |side: &EdgeSide| -> (usize, usize) {
            let nt = spec.tiles[side.tile].len();
            let fwd = spec.tiles[side.tile].slots[side.slot].edge.forward;
            let start = offset[side.tile] + (side.slot + nt - 1) % nt;
            let end = offset[side.tile] + side.slot;
            // (corner at the edge's tail, corner at its head)
            if fwd {
                (start, end)
            } else {
                (end, start)
            }
        };
        let (a_tail, a_head) = corner_pair(&sides[0]);
        let (b_tail, b_head) = corner_pair(&sides[1]);
        dsu.union(a_tail, b_tail);
        dsu.union(a_head, b_head);
    }
    let mut class_type: HashMap<usize, VertexTypeId> = HashMap::new();
    let mut consistent = true;
    for (t, tile) in spec.tiles.iter().enumerate() {
        for i in 0..tile.len() {
            let root = dsu.find(offset[t] + i);
            let ty = tile.corner(i);
            match class_type.get(&root) {
                None => {
                    class_type.insert(root, ty);
                }
                Some(prev) if *prev == ty => {}
                Some(prev) => {
                    report.add(
                        "sphere-vertices",
                        format!(
                            "corner {} of tile `{}` (type `{}`) is glued to a corner of type `{}`",
                            i, tile.name, spec.vertices[ty].name, spec.vertices[*prev].name
                        ),
                    );
                    consistent = false;
                }
            }
        }
    }
    if consistent {
        let mut per_type = vec![0usize; spec.vertices.len()];
        for ty in class_type.values() {
            per_type[*ty] += 1;
        }
        for (v, count) in per_type.iter().enumerate() {
            if *count != 1 {
                report.add(
                    "sphere-vertices",
                    format!(
                        "vertex type `{}` labels {} glued corner classes, expected exactly 1",
                        spec.vertices[v].name, count
                    ),
                );
                consistent = false;
            }
        }
        let chi = class_type.len() as i64 - spec.edges.len() as i64 + spec.tiles.len() as i64;
        if chi != 2 {
            report.add(
                "sphere-euler",
                format!(
                    "Euler characteristic is {chi} (V={} E={} F={}), a sphere needs 2",
                    class_type.len(),
                    spec.edges.len(),
                    spec.tiles.len()
                ),
            );
            consistent = false;
        }
    }
    if consistent {
        Some(normalized)
    } else {
        None
    }
}

pub fn validate_fsr(spec: &FsrSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    check_words(spec, &mut report);
    let vertex_map = derive_vertex_map(spec, &mut report);
    check_tiles(spec, &mut report);
    for scheme in &spec.schemes {
        let analysis = analyze_scheme(spec, vertex_map.as_deref(), scheme);
        report.findings.extend(analysis.findings);
    }
    check_sphere(spec, &mut report);
    report
}

impl Rule {
    /// Validates and compiles. On any finding the full report is returned.
    pub fn compile(spec: &FsrSpec) -> Result<Rule, ValidationReport> {
        let mut report = ValidationReport::default();
        check_words(spec, &mut report);
        let vertex_map = derive_vertex_map(spec, &mut report);
        check_tiles(spec, &mut report);
        let mut schemes = Vec::with_capacity(spec.schemes.len());
        for scheme in &spec.schemes {
            let analysis = analyze_scheme(spec, vertex_map.as_deref(), scheme);
            report.findings.extend(analysis.findings);
            schemes.push(analysis.compiled);
        }
        let edge_sides = check_sphere(spec, &mut report);
        if !report.is_valid() {
            return Err(report);
        }
        Ok(Rule {
            spec: spec.clone(),
            vertex_map: vertex_map.expect("vertex map exists when no findings"),
            schemes,
            edge_sides: edge_sides.expect("edge sides exist when no findings"),
        })
    }

    pub fn word(&self, e: EdgeTypeId) -> &EdgeWord {
        &self.spec.edges[e].word
    }

    pub fn scheme(&self, t: TileTypeId) -> &SubdivisionScheme {
        &self.spec.schemes[t]
    }

    pub fn tile_len(&self, t: TileTypeId) -> usize {
        self.spec.tiles[t].len()
    }

    /// Image vertex type of a local vertex of tile `t`'s scheme.
    pub fn local_vertex_image(&self, t: TileTypeId, lv: LocalVertex) -> VertexTypeId {
        local_vertex_image(&self.spec, &self.vertex_map, &self.spec.schemes[t], lv)
    }

    /// Vertex type of a local vertex as a cell of the subdivided tile
    /// (corners persist and keep their position type, boundary points take
    /// the word point type, interiors their declared image).
    pub fn local_vertex_type(&self, t: TileTypeId, lv: LocalVertex) -> VertexTypeId {
        // For new vertices the level-1 type equals the image under the map;
        // for persisting corners it is the image of the old type as well.
        self.local_vertex_image(t, lv)
    }
}

#[cfg(test)]
pub(crate) const ONETILE: &str = "\
fsr onetile
vertex x y z
edge a : x -> y subdivides [ +a ]
edge b : x -> z subdivides [ +b ]
tile T : [ +a y -a x +b z -b x ]
subdivision T {
  edge s0 : corner 3 -> corner 0 image +a
  edge s1 : corner 0 -> corner 1 image -a
  edge s2 : corner 1 -> corner 2 image +b
  edge s3 : corner 2 -> corner 3 image -b
  face t : [ +s0 +s1 +s2 +s3 ] image T rot 0
}
sphere {
  side a = (T, slot 0) , (T, slot 1)
  side b = (T, slot 2) , (T, slot 3)
}
";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_fsr;

    #[test]
    fn onetile_is_valid_and_compiles() {
        let spec = parse_fsr(ONETILE).unwrap();
        let report = validate_fsr(&spec);
        assert!(report.is_valid(), "{report}");
        let rule = Rule::compile(&spec).unwrap();
        assert_eq!(rule.vertex_map, vec![0, 1, 2]);
        assert_eq!(rule.schemes[0].boundary.len(), 4);
        assert!(rule.schemes[0].role.iter().all(|r| r.is_some()));
        // edge a: slot 0 of T is forward, slot 1 backward
        assert_eq!(rule.edge_sides[0][0].slot, 0);
        assert_eq!(rule.edge_sides[0][1].slot, 1);
    }

    #[test]
    fn broken_word_chain_is_reported() {
        let text = ONETILE.replace("[ +a ]", "[ +a y -b ]");
        let spec = parse_fsr(&text).unwrap();
        let report = validate_fsr(&spec);
        assert!(
            report.findings.iter().any(|f| f.check == "word-chain"),
            "{report}"
        );
    }

    #[test]
    fn wrong_corner_is_reported() {
        let text = ONETILE.replace(
            "tile T : [ +a y -a x +b z -b x ]",
            "tile T : [ +a z -a x +b z -b x ]",
        );
        let spec = parse_fsr(&text).unwrap();
        let report = validate_fsr(&spec);
        assert!(
            report.findings.iter().any(|f| f.check == "tile-corners"),
            "{report}"
        );
    }

    #[test]
    fn missing_subdivision_is_a_parse_error() {
        let text = ONETILE.replace(
            "tile T : [ +a y -a x +b z -b x ]",
            "tile T : [ +a y -a x +b z -b x ]\ntile S : [ +a y -a x +b z -b x ]",
        );
        let err = parse_fsr(&text).unwrap_err();
        assert!(err.msg.contains("no subdivision"), "{err}");
    }

    #[test]
    fn same_direction_gluing_is_reported() {
        let extra_tile = ONETILE
            .replace("tile T :", "tile S :")
            .lines()
            .filter(|l| l.starts_with("tile S"))
            .collect::<String>();
        let extra_scheme = "subdivision S {
  edge s0 : corner 3 -> corner 0 image +a
  edge s1 : corner 0 -> corner 1 image -a
  edge s2 : corner 1 -> corner 2 image +b
  edge s3 : corner 2 -> corner 3 image -b
  face t : [ +s0 +s1 +s2 +s3 ] image T rot 0
}";
        let text = ONETILE
            .replace(
                "subdivision T {",
                &format!("{extra_tile}\n{extra_scheme}\nsubdivision T {{"),
            )
            .replace(
                "side a = (T, slot 0) , (T, slot 1)",
                "side a = (T, slot 0) , (S, slot 0)",
            )
            .replace(
                "side b = (T, slot 2) , (T, slot 3)",
                "side b = (T, slot 2) , (S, slot 2)",
            );
        let spec = parse_fsr(&text).unwrap();
        let report = validate_fsr(&spec);
        assert!(
            report
                .findings
                .iter()
                .any(|f| f.message.contains("same direction")),
            "{report}"
        );
    }

    #[test]
    fn unglued_slot_is_reported() {
        let text = ONETILE.replace(
            "side b = (T, slot 2) , (T, slot 3)",
            "side b = (T, slot 2) , (T, slot 2)",
        );
        let spec = parse_fsr(&text).unwrap();
        let report = validate_fsr(&spec);
        assert!(
            report.findings.iter().any(|f| f.check == "sphere-sides"),
            "{report}"
        );
    }

    #[test]
    fn missing_boundary_subedge_is_reported() {
        let text = ONETILE.replace(
            "edge s1 : corner 0 -> corner 1 image -a",
            "edge s1 : corner 1 -> corner 0 image +a",
        );
        let spec = parse_fsr(&text).unwrap();
        let report = validate_fsr(&spec);
        assert!(!report.is_valid());
    }

    #[test]
    fn wrong_rotation_is_reported() {
        let text = ONETILE.replace("image T rot 0", "image T rot 1");
        let spec = parse_fsr(&text).unwrap();
        let report = validate_fsr(&spec);
        assert!(
            report.findings.iter().any(|f| f.check == "scheme-image"),
            "{report}"
        );
    }
}
