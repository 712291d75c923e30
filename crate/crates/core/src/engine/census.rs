//! Cell counts per level.

use serde::Serialize;

use super::complex::LevelComplex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub level: i32,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    /// faces_by_type[t] = number of faces whose type is tile t.
    pub faces_by_type: Vec<usize>,
}

pub fn census(cx: &LevelComplex) -> Census {
    let types = cx.faces.iter().map(|f| f.ftype + 1).max().unwrap_or(0);
    let mut faces_by_type = vec![0usize; types];
    for f in &cx.faces {
        faces_by_type[f.ftype] += 1;
    }
    Census {
        level: cx.level,
        vertices: cx.vertices.len(),
        edges: cx.edges.len(),
        faces: cx.faces.len(),
        faces_by_type,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::subdivide::{subdivide_sphere, CellBudget};
    use crate::fixtures::load_fixture;

    #[test]
    fn counts_add_up_per_child_table() {
        for name in ["pillow2", "columns2", "barycentric", "triangles3"] {
            let rule = load_fixture(name).unwrap();
            let tower = subdivide_sphere(&rule, 3, &CellBudget::default()).unwrap();
            for n in 0..3u32 {
                let here = census(tower.level(n));
                let next = census(tower.level(n + 1));
                let expected: usize = tower
                    .level(n)
                    .faces
                    .iter()
                    .map(|f| rule.spec.schemes[f.ftype].faces.len())
                    .sum();
                assert_eq!(next.faces, expected, "{name} level {n}");
                assert_eq!(here.faces_by_type.iter().sum::<usize>(), here.faces);
            }
        }
    }
}
