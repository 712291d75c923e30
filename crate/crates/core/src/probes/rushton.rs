//! Distance-growth probe on the fat graph.
//!
//! For every level m up to depth - n and every pair of level-m tiles at
//! finite distance at least M, every pair of level-(m+n) descendants
//! must be strictly farther apart. A pass is evidence up to the chosen
//! depth only; a violation is a concrete counterexample.

use super::ProbeStatus;
use crate::engine::{BudgetExceeded, CellBudget};
use crate::graphs::{build_subdivision_graph, Flavor, SubdivisionGraph};
use crate::model::Rule;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RushtonViolation {
    pub m: u32,
    /// level-m faces
    pub u: usize,
    pub v: usize,
    /// their level-(m+n) descendants that failed to separate
    pub u_lift: usize,
    pub v_lift: usize,
    pub delta_m: u32,
    pub delta_lift: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct RushtonReport {
    /// the distance threshold M
    pub threshold: u32,
    pub n: u32,
    pub depth: u32,
    pub status: ProbeStatus,
    pub pairs_checked: u64,
    pub lifts_checked: u64,
    pub violation: Option<RushtonViolation>,
}

fn all_pairs(graph: &SubdivisionGraph, m: u32) -> Vec<Vec<Option<u32>>> {
    (0..graph.faces_at(m))
        .map(|u| graph.distances_from(m, u))
        .collect()
}

pub fn rushton_probe(
    rule: &Rule,
    threshold: u32,
    n: u32,
    depth: u32,
    budget: &CellBudget,
) -> Result<RushtonReport, BudgetExceeded> {
    assert!(threshold >= 1 && n >= 1 && depth >= n);
    let graph = build_subdivision_graph(rule, depth, Flavor::Fat, budget)?;
    let mut dists: Vec<Option<Vec<Vec<Option<u32>>>>> = vec![None; depth as usize + 1];
    let mut pairs_checked = 0u64;
    let mut lifts_checked = 0u64;
    let mut violation = None;

    'levels: for m in 0..=depth - n {
        if dists[m as usize].is_none() {
            dists[m as usize] = Some(all_pairs(&graph, m));
        }
        if dists[(m + n) as usize].is_none() {
            dists[(m + n) as usize] = Some(all_pairs(&graph, m + n));
        }
        let low = dists[m as usize].as_ref().unwrap();
        let high = dists[(m + n) as usize].as_ref().unwrap();
        let count = graph.faces_at(m);
        let desc: Vec<Vec<usize>> = (0..count).map(|u| graph.descendants(m, u, n)).collect();
        for u in 0..count {
            for v in u + 1..count {
                let d = match low[u][v] {
                    Some(d) if d >= threshold => d,
                    _ => continue,
                };
                pairs_checked += 1;
                for &ul in &desc[u] {
                    for &vl in &desc[v] {
                        lifts_checked += 1;
                        if let Some(dl) = high[ul][vl] {
                            if dl <= d {
                                violation = Some(RushtonViolation {
                                    m,
                                    u,
                                    v,
                                    u_lift: ul,
                                    v_lift: vl,
                                    delta_m: d,
                                    delta_lift: dl,
                                });
                                break 'levels;
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(RushtonReport {
        threshold,
        n,
        depth,
        status: if violation.is_some() {
            ProbeStatus::Violation
        } else {
            ProbeStatus::PassAtDepth
        },
        pairs_checked,
        lifts_checked,
        violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load_fixture;

    fn probe(name: &str, threshold: u32, n: u32, depth: u32) -> RushtonReport {
        let rule = load_fixture(name).unwrap();
        rushton_probe(&rule, threshold, n, depth, &CellBudget::default()).unwrap()
    }

    #[test]
    fn pillow2_passes_at_modest_depth() {
        let r = probe("pillow2", 3, 1, 3);
        assert_eq!(r.status, ProbeStatus::PassAtDepth);
        assert!(r.violation.is_none());
    }

    #[test]
    fn columns2_passes_with_the_production_parameters() {
        let r = probe("columns2", 4, 2, 5);
        assert_eq!(r.status, ProbeStatus::PassAtDepth);
        assert!(r.pairs_checked > 0);
    }

    #[test]
    fn columns2_low_threshold_is_violated_and_replayable() {
        let rule = load_fixture("columns2").unwrap();
        let r = rushton_probe(&rule, 1, 1, 2, &CellBudget::default()).unwrap();
        assert_eq!(r.status, ProbeStatus::Violation);
        let v = r.violation.unwrap();
        let g = build_subdivision_graph(&rule, 2, Flavor::Fat, &CellBudget::default()).unwrap();
        let d = g.level_distance(v.m, v.u, v.v).unwrap();
        assert_eq!(d, v.delta_m);
        assert!(d >= 1);
        let dl = g.level_distance(v.m + 1, v.u_lift, v.v_lift).unwrap();
        assert_eq!(dl, v.delta_lift);
        assert!(dl <= d);
        assert!(g.descendants(v.m, v.u, 1).contains(&v.u_lift));
        assert!(g.descendants(v.m, v.v, 1).contains(&v.v_lift));
    }

    #[test]
    fn raising_the_threshold_never_breaks_a_pass() {
        for (name, t, n, depth) in [("columns2", 4u32, 2u32, 4u32), ("pillow2", 3, 1, 3)] {
            let base = probe(name, t, n, depth);
            assert_eq!(base.status, ProbeStatus::PassAtDepth);
            let higher = probe(name, t + 1, n, depth);
            assert_eq!(higher.status, ProbeStatus::PassAtDepth);
            assert!(higher.pairs_checked <= base.pairs_checked);
        }
    }

    #[test]
    fn huge_threshold_passes_vacuously() {
        let r = probe("pillow2", 100, 1, 2);
        assert_eq!(r.status, ProbeStatus::PassAtDepth);
        assert_eq!(r.pairs_checked, 0);
    }
}
