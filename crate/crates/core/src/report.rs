//! JSON report shapes for machine consumers. Every report carries a
//! `schema` tag, and cell or type ids are resolved to the rule's own
//! names so readers need no side tables.

use crate::analyze::{
    CrosscheckOutcome, CrosscheckReport, DisjointnessMode, PropertyVerdict, SeparationKind,
    ValenceReport, Witness,
};
use crate::engine::{census, Tower};
use crate::graphs::SubdivisionGraph;
use crate::model::{Rule, ValidationReport};
use crate::probes::{BoundaryReport, ContractionReport, RushtonReport};
use serde_json::{json, Value};

fn mode_name(mode: DisjointnessMode) -> &'static str {
    match mode {
        DisjointnessMode::ModelDisk => "model-disk",
        DisjointnessMode::Glued => "glued",
    }
}

/// "slot 0" / "corner 2" rendering of a separation pair member.
fn sep_member(kind: SeparationKind, first: bool, a: usize) -> String {
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
}

pub fn witness_json(rule: &Rule, w: &Witness) -> Value {
    let spec = &rule.spec;
    match w {
        Witness::SeparationCycle { kind, nodes } => json!({
            "kind": "separation-cycle",
            "graph": kind.name(),
            "nodes": nodes.iter().map(|n| json!({
                "tile": spec.tile_name(n.tile),
                "pair": [sep_member(*kind, true, n.a1), sep_member(*kind, false, n.a2)],
            })).collect::<Vec<_>>(),
        }),
        Witness::EdgeCycle { edges } => json!({
            "kind": "edge-cycle",
            "edges": edges.iter().map(|&e| spec.edge_name(e)).collect::<Vec<_>>(),
        }),
        Witness::IdealVertices { vertices } => json!({
            "kind": "ideal-vertices",
            "vertices": vertices.iter().map(|&v| spec.vertex_name(v)).collect::<Vec<_>>(),
        }),
    }
}

fn verdict_json(rule: &Rule, v: &PropertyVerdict) -> Value {
    json!({
        "property": v.property.name(),
        "holds": v.holds,
        "certified_level": v.certified_level,
        "witness": v.witness.as_ref().map(|w| witness_json(rule, w)),
    })
}

fn crosscheck_json(rule: &Rule, c: &CrosscheckReport) -> Value {
    let spec = &rule.spec;
    let outcome = |o: &CrosscheckOutcome| match o {
        CrosscheckOutcome::ViolationReplayed { level, tile, face } => json!({
            "kind": "violation-replayed",
            "level": level,
            "tile": spec.tile_name(*tile),
            "face": face,
        }),
        CrosscheckOutcome::EdgeNeverSplit { level, edge } => json!({
            "kind": "edge-never-split",
            "level": level,
            "edge": spec.edge_name(*edge),
        }),
        CrosscheckOutcome::ConfirmedUpTo { level } => json!({
            "kind": "confirmed-up-to",
            "level": level,
        }),
        CrosscheckOutcome::Capped { wanted, reason } => json!({
            "kind": "capped",
            "wanted": wanted,
            "reason": reason,
        }),
        CrosscheckOutcome::Disagreement { level, detail } => json!({
            "kind": "disagreement",
            "level": level,
            "detail": detail,
        }),
        CrosscheckOutcome::NotApplicable => json!({ "kind": "not-applicable" }),
    };
    json!({
        "property": c.property.name(),
        "mode": mode_name(c.mode),
        "n_max": c.n_max,
        "node_bound": c.node_bound,
        "agreed": c.agreed,
        "entries": c.entries.iter().map(|e| json!({
            "property": e.property.name(),
            "holds": e.verdict.holds,
            "outcome": outcome(&e.outcome),
        })).collect::<Vec<_>>(),
    })
}

pub fn validate_report(name: &str, report: &ValidationReport) -> Value {
    json!({
        "schema": "validate.v1",
        "rule": name,
        "valid": report.is_valid(),
        "findings": report.findings.iter().map(|f| json!({
            "check": f.check,
            "message": f.message,
        })).collect::<Vec<_>>(),
    })
}

/// One level of a tower with full cell tables.
pub fn complex_report(rule: &Rule, tower: &Tower, level: u32) -> Value {
    let spec = &rule.spec;
    let cx = tower.level(level);
    let c = census(cx);
    let surface = match tower.kind {
        crate::engine::ComplexKind::Sphere => json!({ "kind": "sphere" }),
        crate::engine::ComplexKind::Disk(t) => {
            json!({ "kind": "disk", "tile": spec.tile_name(t) })
        }
    };
    json!({
        "schema": "complex.v1",
        "rule": spec.name,
        "surface": surface,
        "level": level,
        "counts": { "vertices": c.vertices, "edges": c.edges, "faces": c.faces },
        "faces_by_type": c.faces_by_type.iter().enumerate()
            .map(|(t, k)| json!({ "tile": spec.tile_name(t), "count": k }))
            .collect::<Vec<_>>(),
        "euler": cx.euler(),
        "vertices": cx.vertices.iter().map(|v| json!({
            "type": spec.vertex_name(v.vtype),
            "parent": v.parent,
            "image": v.image,
        })).collect::<Vec<_>>(),
        "edges": cx.edges.iter().map(|e| json!({
            "type": spec.edge_name(e.etype),
            "tail": e.tail,
            "head": e.head,
            "parent": e.parent,
            "image": e.image,
        })).collect::<Vec<_>>(),
        "faces": cx.faces.iter().map(|f| json!({
            "type": spec.tile_name(f.ftype),
            "boundary": f.boundary.iter().map(|&(e, fwd)| json!({
                "edge": e,
                "forward": fwd,
            })).collect::<Vec<_>>(),
            "parent": f.parent,
            "image": f.image,
        })).collect::<Vec<_>>(),
    })
}

pub fn verdict_report(
    rule: &Rule,
    mode: DisjointnessMode,
    node_bound: usize,
    verdicts: &[PropertyVerdict],
    valence: &ValenceReport,
    crosschecks: &[CrosscheckReport],
) -> Value {
    let spec = &rule.spec;
    json!({
        "schema": "verdict.v1",
        "rule": spec.name,
        "mode": mode_name(mode),
        "node_bound": node_bound,
        "verdicts": verdicts.iter().map(|v| verdict_json(rule, v)).collect::<Vec<_>>(),
        "bounded_valence": {
            "holds": valence.verdict.holds,
            "ideal_vertices": valence.ideal.iter()
                .map(|&v| spec.vertex_name(v)).collect::<Vec<_>>(),
        },
        "crosschecks": crosschecks.iter().map(|c| crosscheck_json(rule, c)).collect::<Vec<_>>(),
    })
}

pub fn rushton_report_json(rule: &Rule, r: &RushtonReport) -> Value {
    json!({
        "schema": "probe.v1",
        "rule": rule.spec.name,
        "probe": "rushton",
        "status": r.status.name(),
        "detail": {
            "threshold": r.threshold,
            "n": r.n,
            "depth": r.depth,
            "pairs_checked": r.pairs_checked,
            "lifts_checked": r.lifts_checked,
            "violation": r.violation,
        },
    })
}

pub fn contraction_report_json(rule: &Rule, r: &ContractionReport) -> Value {
    let spec = &rule.spec;
    json!({
        "schema": "probe.v1",
        "rule": spec.name,
        "probe": "contraction",
        "status": r.status.name(),
        "detail": {
            "n_max": r.n_max,
            "edge_separation": verdict_json(rule, &r.edge_separation),
            "vertex_separation": verdict_json(rule, &r.vertex_separation),
            "cycles": r.cycles.iter().map(|(level, c)| json!({
                "level": level,
                "length": c.nodes.len(),
                "winding": c.winding,
                "simple": c.simple,
                "crossed_edges": c.crossed_base.iter()
                    .map(|&e| spec.edge_name(e)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "note": r.note,
        },
    })
}

pub fn boundary_report_json(rule: &Rule, r: &BoundaryReport) -> Value {
    let spec = &rule.spec;
    let cell = |c: (u8, usize)| {
        if c.0 == 0 {
            format!("vertex {}", spec.vertex_name(c.1))
        } else {
            format!("edge {}", spec.edge_name(c.1))
        }
    };
    json!({
        "schema": "probe.v1",
        "rule": spec.name,
        "probe": "boundary",
        "status": if r.pairs.is_empty() { "SEPARATED" } else { "PERSISTENT" },
        "detail": {
            "depth": r.depth,
            "pairs": r.pairs.iter().map(|p| json!({
                "a": cell(p.a),
                "b": cell(p.b),
                "witness_face": p.witness_face,
            })).collect::<Vec<_>>(),
            "ideal_vertices": r.ideal_vertices.iter()
                .map(|&v| spec.vertex_name(v)).collect::<Vec<_>>(),
        },
    })
}

pub fn graph_report(rule: &Rule, g: &SubdivisionGraph) -> Value {
    let levels: Vec<Value> = (0..=g.top_level())
        .map(|m| {
            json!({
                "level": m,
                "faces": g.faces_at(m),
                "horizontal_edges": g.horizontal_edge_count(m),
            })
        })
        .collect();
    json!({
        "schema": "graph.v1",
        "rule": rule.spec.name,
        "flavor": g.flavor.name(),
        "levels": levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::{
        check_bounded_valence, classify_properties, crosscheck_at_bound, node_bound, Property,
    };
    use crate::engine::CellBudget;
    use crate::fixtures::load_fixture;
    use crate::probes::{boundary_pair_report, contraction_report, rushton_probe};

    #[test]
    fn verdict_report_resolves_names() {
        let rule = load_fixture("columns2").unwrap();
        let verdicts = classify_properties(&rule, DisjointnessMode::ModelDisk);
        let valence = check_bounded_valence(&rule).unwrap();
        let bound = node_bound(&rule.spec);
        let cc = crosscheck_at_bound(&rule, Property::Esep, 4, DisjointnessMode::ModelDisk);
        let v = verdict_report(
            &rule,
            DisjointnessMode::ModelDisk,
            bound,
            &verdicts,
            &valence,
            &[cc],
        );
        assert_eq!(v["schema"], "verdict.v1");
        assert_eq!(v["rule"], "columns2");
        assert_eq!(v["node_bound"], 32);
        let esub = &v["verdicts"][0];
        assert_eq!(esub["property"], "Esub");
        assert_eq!(esub["holds"], false);
        assert_eq!(esub["witness"]["edges"][0], "d");
        let esep = &v["verdicts"][1];
        assert_eq!(esep["witness"]["kind"], "separation-cycle");
        assert_eq!(esep["witness"]["nodes"][0]["tile"], "P");
        assert_eq!(v["crosschecks"][0]["agreed"], true);
        assert_eq!(
            v["crosschecks"][0]["entries"][0]["outcome"]["kind"],
            "violation-replayed"
        );
    }

    #[test]
    fn complex_report_counts_match_engine() {
        let rule = load_fixture("pillow2").unwrap();
        let tower = crate::engine::subdivide_sphere(&rule, 2, &CellBudget::default()).unwrap();
        let v = complex_report(&rule, &tower, 2);
        assert_eq!(v["schema"], "complex.v1");
        assert_eq!(v["euler"], 2);
        assert_eq!(v["counts"]["faces"], 32);
        assert_eq!(v["faces"][0]["type"], "P");
        assert_eq!(v["surface"]["kind"], "sphere");
    }

    #[test]
    fn probe_reports_carry_status_and_names() {
        let rule = load_fixture("columns2").unwrap();
        let budget = CellBudget::default();
        let r = rushton_probe(&rule, 1, 1, 2, &budget).unwrap();
        let v = rushton_report_json(&rule, &r);
        assert_eq!(v["schema"], "probe.v1");
        assert_eq!(v["status"], "VIOLATION");
        let c = contraction_report(&rule, 2, DisjointnessMode::ModelDisk, &budget);
        let v = contraction_report_json(&rule, &c);
        assert_eq!(v["status"], "WITNESS");
        let crossed = v["detail"]["cycles"][0]["crossed_edges"]
            .as_array()
            .unwrap();
        assert_eq!(crossed.len(), 2);
        let b = boundary_pair_report(&rule, 3, &budget).unwrap();
        let v = boundary_report_json(&rule, &b);
        assert_eq!(v["status"], "PERSISTENT");
        assert!(v["detail"]["pairs"]
            .as_array()
            .unwrap()
            .iter()
            .any(|p| p["a"] == "edge a" && p["b"] == "edge c"));
    }
}
