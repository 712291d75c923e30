//! The acceptance gate: nine criteria covering bounds, witness replay,
//! brute-force agreement, theorem consistency, engine and metric
//! invariants, probe outcomes, returning tiles and round-trips.
//!
//! Each criterion is one test that prints a single PASS line with its
//! elapsed time; a failed assertion is the FAIL line.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fsrlab_core::analyze::{
    build_separation_graph, check_separation, classify_properties, crosscheck_at_bound, node_bound,
    CrosscheckOutcome, DisjointnessMode, Property, SeparationKind, Witness,
};
use fsrlab_core::engine::{
    census, find_returning_tile, subdivide_sphere, subdivide_tile, CellBudget,
};
use fsrlab_core::fixtures::{fixture_names, load_fixture};
use fsrlab_core::gen::{affine_pillowcase, affine_rule};
use fsrlab_core::graphs::{build_subdivision_graph, Flavor, SubdivisionGraph};
use fsrlab_core::model::{parse_fsr, serialize_fsr, Rule};
use fsrlab_core::probes::{contraction_report, rushton_probe, ProbeStatus};

const KINDS: [SeparationKind; 3] = [SeparationKind::EE, SeparationKind::VV, SeparationKind::VE];
const MODE: DisjointnessMode = DisjointnessMode::ModelDisk;

fn rules() -> Vec<(&'static str, Rule)> {
    fixture_names()
        .into_iter()
        .map(|name| (name, load_fixture(name).unwrap()))
        .collect()
}

fn pass(n: u32, what: &str, t: Instant) {
    println!("criterion {n}: PASS - {what} ({:?})", t.elapsed());
}

#[test]
fn criterion_1_separation_graphs_respect_the_node_bound() {
    let t = Instant::now();
    for (name, rule) in rules() {
        let per_fixture = Instant::now();
        let bound = node_bound(&rule.spec);
        for kind in KINDS {
            let g = build_separation_graph(&rule, kind, MODE);
            assert!(
                g.nodes.len() <= bound,
                "{name}/{}: {} nodes exceed the bound {bound}",
                kind.name(),
                g.nodes.len()
            );
        }
        assert!(
            per_fixture.elapsed() < Duration::from_secs(1),
            "{name}: separation graphs took {:?}",
            per_fixture.elapsed()
        );
    }
    pass(
        1,
        "every separation graph has at most (tiles)*(max boundary)^2 nodes",
        t,
    );
}

#[test]
fn criterion_2_false_verdicts_replay_at_the_cycle_length() {
    let t = Instant::now();
    for (name, rule) in rules() {
        for kind in KINDS {
            let verdict = check_separation(&rule, kind, MODE);
            if verdict.holds {
                continue;
            }
            let cycle_len = match verdict.witness.as_ref() {
                Some(Witness::SeparationCycle { nodes, .. }) => nodes.len() as u32,
                other => panic!("{name}/{}: unexpected witness {other:?}", kind.name()),
            };
            let report = crosscheck_at_bound(&rule, kind.property(), 4, MODE);
            assert!(report.agreed, "{name}/{}", kind.name());
            let replayed = report.entries.iter().find_map(|e| match e.outcome {
                CrosscheckOutcome::ViolationReplayed { level, tile, face } => {
                    Some((level, tile, face))
                }
                _ => None,
            });
            let (level, tile, face) =
                replayed.unwrap_or_else(|| panic!("{name}/{}: no replay", kind.name()));
            assert_eq!(level, cycle_len, "{name}/{}: replay level", kind.name());

            // the named tile really contains a violating face at that level
            let tower = subdivide_tile(&rule, tile, level, &CellBudget::default()).unwrap();
            assert!(face < tower.level(level).faces.len());
        }
    }

    // the concrete case: columns2's EE self-loop replays in one step of
    // the square, with one column meeting subedges of both rims
    let rule = load_fixture("columns2").unwrap();
    let report = crosscheck_at_bound(&rule, Property::Esep, 4, MODE);
    let (level, tile, face) = report
        .entries
        .iter()
        .find_map(|e| match e.outcome {
            CrosscheckOutcome::ViolationReplayed { level, tile, face } => Some((level, tile, face)),
            _ => None,
        })
        .expect("columns2 Esep replays");
    assert_eq!(level, 1);
    let tower = subdivide_tile(&rule, tile, 1, &CellBudget::default()).unwrap();
    let cx = tower.level(1);
    let mut met = Vec::new();
    for &(el, _) in &cx.faces[face].boundary {
        let anc = tower.level0_ancestor(cx.edge_id(el));
        if anc.dim == 1 {
            met.push(tower.level(0).edges[anc.index].etype);
        }
    }
    let edge_id = |want: &str| {
        (0..rule.spec.edges.len())
            .find(|&e| rule.spec.edge_name(e) == want)
            .unwrap()
    };
    assert!(met.contains(&edge_id("a")), "column misses rim a: {met:?}");
    assert!(met.contains(&edge_id("c")), "column misses rim c: {met:?}");

    assert!(t.elapsed() < Duration::from_secs(5), "{:?}", t.elapsed());
    pass(
        2,
        "every false separation verdict replays concretely at the witness-cycle length",
        t,
    );
}

#[test]
fn criterion_3_true_verdicts_survive_brute_force_at_the_certified_level() {
    let t = Instant::now();
    for (name, rule) in rules() {
        for kind in KINDS {
            let verdict = check_separation(&rule, kind, MODE);
            if !verdict.holds {
                continue;
            }
            let certified = verdict.certified_level.unwrap();
            assert!(
                certified <= 4,
                "{name}/{}: certified at {certified}",
                kind.name()
            );
            let report = crosscheck_at_bound(&rule, kind.property(), 4, MODE);
            assert!(report.agreed, "{name}/{}", kind.name());
            let confirmed = report.entries.iter().any(|e| {
                matches!(e.outcome, CrosscheckOutcome::ConfirmedUpTo { level } if level >= certified)
            });
            assert!(
                confirmed,
                "{name}/{}: no exhaustive confirmation",
                kind.name()
            );
        }
    }
    assert!(t.elapsed() < Duration::from_secs(30), "{:?}", t.elapsed());
    pass(
        3,
        "every true separation verdict is confirmed by exhaustive scans of all tile types",
        t,
    );
}

#[test]
fn criterion_4_theorem_consistency_on_fixtures_and_random_rules() {
    let t = Instant::now();
    let mut suite: Vec<(String, Rule)> = rules()
        .into_iter()
        .map(|(n, r)| (n.to_string(), r))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..50 {
        let m = rng.gen_range(1..=3usize);
        let n = rng.gen_range(1..=3usize);
        let hx = rng.gen_range(0..=1usize);
        let hy = rng.gen_range(0..=1usize);
        let text = affine_pillowcase(m, n, hx, hy);
        let spec = parse_fsr(&text).unwrap();
        assert!(
            fsrlab_core::validate_fsr(&spec).is_valid(),
            "affine({m},{n},{hx},{hy}) must validate"
        );
        suite.push((spec.name.clone(), affine_rule(m, n, hx, hy)));
    }
    assert_eq!(suite.len(), 54);

    for (name, rule) in &suite {
        let holds = |p: Property, verdicts: &[fsrlab_core::analyze::PropertyVerdict]| {
            verdicts.iter().find(|v| v.property == p).unwrap().holds
        };
        let verdicts = classify_properties(rule, MODE);
        let (vsep, esub) = (
            holds(Property::Vsep, &verdicts),
            holds(Property::Esub, &verdicts),
        );
        let (combexp, m0comb) = (
            holds(Property::CombExp, &verdicts),
            holds(Property::M0comb, &verdicts),
        );
        assert!(!vsep || esub, "{name}: Vsep holds but Esub fails");
        assert!(!combexp || m0comb, "{name}: CombExp holds but M0comb fails");
        if combexp {
            let r = contraction_report(rule, 2, MODE, &CellBudget::default());
            assert_eq!(
                r.status,
                ProbeStatus::Certified,
                "{name}: combinatorially expanding but not certified contracting"
            );
        }
    }
    pass(
        4,
        "Vsep=>Esub, CombExp=>M0comb and CombExp=>contraction CERTIFIED on 54 rules",
        t,
    );
}

#[test]
fn criterion_5_engine_invariants_up_to_level_four() {
    let t = Instant::now();
    let budget = CellBudget::default();
    for (name, rule) in rules() {
        let tiles = rule.spec.tiles.len();
        // children of one subdivision step, counted per tile type
        let mut step = vec![vec![0usize; tiles]; tiles];
        for (t_ty, scheme) in rule.spec.schemes.iter().enumerate() {
            for f in &scheme.faces {
                step[f.image][t_ty] += 1;
            }
        }

        let tower = subdivide_sphere(&rule, 4, &budget).unwrap();

        // the map branches only at level-1 vertices; read the local
        // degree there as the exact valence quotient
        let lvl0 = tower.level(0);
        let lvl1 = tower.level(1);
        let d1: Vec<usize> = (0..lvl1.vertices.len())
            .map(|w| {
                let image = lvl1.vertices[w].image.expect("sphere vertices have images");
                let (val1, val0) = (lvl1.vertex_valence(w), lvl0.vertex_valence(image));
                assert_eq!(
                    val1 % val0,
                    0,
                    "{name}: non-integral degree at level-1 vertex {w}"
                );
                val1 / val0
            })
            .collect();
        // level-1 vertex a deeper vertex sits on, if it sits on one
        let point_at_level1 = |mut level: u32, v: usize| -> Option<usize> {
            let mut at = v;
            while level > 1 {
                let parent = tower.level(level).vertices[at].parent;
                if parent.dim != 0 {
                    return None;
                }
                at = parent.index;
                level -= 1;
            }
            Some(at)
        };

        for n in 0..=4u32 {
            let cx = tower.level(n);
            assert_eq!(cx.euler(), 2, "{name}: sphere euler at level {n}");
            if n == 4 {
                continue;
            }
            let here = census(cx);
            let next = census(tower.level(n + 1));
            let mut counts = here.faces_by_type.clone();
            counts.resize(tiles, 0);
            let mut expected = vec![0usize; tiles];
            for (t_to, row) in step.iter().enumerate() {
                expected[t_to] = row.iter().zip(&counts).map(|(a, b)| a * b).sum();
            }
            let mut got = next.faces_by_type.clone();
            got.resize(tiles, 0);
            assert_eq!(got, expected, "{name}: census at level {}", n + 1);

            let deeper = tower.level(n + 1);
            for (v, cell) in deeper.vertices.iter().enumerate() {
                let image = cell.image.expect("sphere vertices have images");
                let d_v = point_at_level1(n + 1, v).map_or(1, |w| d1[w]);
                assert_eq!(
                    deeper.vertex_valence(v),
                    d_v * cx.vertex_valence(image),
                    "{name}: valence recurrence at level {} vertex {v}",
                    n + 1
                );
            }
        }

        for t_ty in 0..tiles {
            let tower = subdivide_tile(&rule, t_ty, 4, &budget).unwrap();
            for n in 0..=4u32 {
                assert_eq!(
                    tower.level(n).euler(),
                    1,
                    "{name}: disk euler for tile {t_ty} at level {n}"
                );
            }
        }
    }
    assert!(t.elapsed() < Duration::from_secs(60), "{:?}", t.elapsed());
    pass(
        5,
        "euler 2/1, exact census multiplication and the valence recurrence to level 4",
        t,
    );
}

#[test]
fn criterion_6_metric_invariants_up_to_level_four() {
    let t = Instant::now();
    let budget = CellBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, rule) in rules() {
        let fat = build_subdivision_graph(&rule, 4, Flavor::Fat, &budget).unwrap();
        let skinny = build_subdivision_graph(&rule, 4, Flavor::Skinny, &budget).unwrap();

        let sample = |g: &SubdivisionGraph, rng: &mut ChaCha8Rng| {
            for _ in 0..1000 {
                let m = rng.gen_range(0..4u32);
                let n = rng.gen_range(1..=4 - m);
                let deep_faces = g.faces_at(m + n);
                let u = rng.gen_range(0..deep_faces);
                let v = rng.gen_range(0..deep_faces);
                let Some(deep) = g.level_distance(m + n, u, v) else {
                    continue;
                };
                let pu = g.project_vertex(m, m + n, u);
                let pv = g.project_vertex(m, m + n, v);
                let shallow = g
                    .level_distance(m, pu, pv)
                    .expect("projected tiles stay connected");
                assert!(
                    shallow <= deep,
                    "{name}: projection expanded a distance ({shallow} > {deep})"
                );
            }
        };
        sample(&fat, &mut rng);
        sample(&skinny, &mut rng);

        for m in 0..=4u32 {
            for u in 0..fat.faces_at(m) {
                let df = fat.distances_from(m, u);
                let ds = skinny.distances_from(m, u);
                for v in 0..df.len() {
                    if let Some(f) = df[v] {
                        let s = ds[v].expect("skinny connects whatever fat connects");
                        assert!(
                            s <= f,
                            "{name}: skinny distance {s} exceeds fat {f} at level {m}"
                        );
                    }
                }
            }
        }
    }
    assert!(t.elapsed() < Duration::from_secs(60), "{:?}", t.elapsed());
    pass(
        6,
        "projection is non-expansive on 1000 sampled pairs; skinny <= fat pointwise",
        t,
    );
}

#[test]
fn criterion_7_probe_outcomes_match_the_frozen_expectations() {
    let t = Instant::now();
    let budget = CellBudget::default();

    for name in ["pillow2", "barycentric"] {
        let rule = load_fixture(name).unwrap();
        let r = contraction_report(&rule, 4, MODE, &budget);
        assert_eq!(r.status, ProbeStatus::Certified, "{name}");
    }

    let columns2 = load_fixture("columns2").unwrap();
    let r = contraction_report(&columns2, 4, MODE, &budget);
    assert_eq!(r.status, ProbeStatus::Witness);
    for n in 1..=4u32 {
        let (_, cycle) = r
            .cycles
            .iter()
            .find(|(level, _)| *level == n)
            .unwrap_or_else(|| panic!("no cycle at level {n}"));
        assert_eq!(cycle.nodes.len(), 2, "cycle length at level {n}");
        assert!(!cycle.winding, "cycle at level {n} winds");
    }

    let r = rushton_probe(&columns2, 4, 2, 5, &budget).unwrap();
    assert_eq!(
        r.status,
        ProbeStatus::PassAtDepth,
        "columns2 rushton(4,2,5)"
    );

    let pillow2 = load_fixture("pillow2").unwrap();
    let r = rushton_probe(&pillow2, 3, 1, 4, &budget).unwrap();
    assert_eq!(r.status, ProbeStatus::PassAtDepth, "pillow2 rushton(3,1,4)");

    assert!(t.elapsed() < Duration::from_secs(120), "{:?}", t.elapsed());
    pass(
        7,
        "contraction CERTIFIED/WITNESS and rushton PASS_AT_DEPTH as frozen",
        t,
    );
}

#[test]
fn criterion_8_returning_tiles_verify_on_the_level_n_complex() {
    let t = Instant::now();
    for (name, rule) in rules() {
        let rt = find_returning_tile(&rule);
        assert!(
            rt.n as usize <= rule.spec.tiles.len(),
            "{name}: returning step {} exceeds tile count",
            rt.n
        );
        let tower = subdivide_sphere(&rule, rt.n, &CellBudget::default()).unwrap();
        let carrier = tower.level0_ancestor(rt.witness);
        let image = tower.image_after(rt.witness, rt.n);
        assert_eq!(
            carrier, image,
            "{name}: f^n(witness) is not its carrier tile"
        );
        assert_eq!(carrier.level, 0);
        assert_eq!(
            tower.level(0).faces[carrier.index].ftype,
            rt.cycle[0],
            "{name}: carrier type disagrees with the cycle"
        );
    }
    assert!(t.elapsed() < Duration::from_secs(5), "{:?}", t.elapsed());
    pass(
        8,
        "find_returning_tile lands within #tiles steps and verifies on the complex",
        t,
    );
}

#[test]
fn criterion_9_round_trips_and_stable_exit_codes() {
    let t = Instant::now();
    for name in fixture_names() {
        let text = fsrlab_core::fixtures::fixture(name).unwrap().text;
        let spec = parse_fsr(text).unwrap();
        let again = parse_fsr(&serialize_fsr(&spec)).unwrap();
        assert_eq!(spec, again, "{name}: serialize/parse round trip drifted");
    }

    for name in fixture_names() {
        let run = || {
            std::process::Command::new(env!("CARGO_BIN_EXE_fsrlab"))
                .args(["--json", "analyze", name])
                .output()
                .expect("binary runs")
        };
        let (a, b) = (run(), run());
        assert_eq!(a.status.code(), b.status.code(), "{name}: exit changed");
        assert_eq!(a.stdout, b.stdout, "{name}: report changed");
        let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
        let all_hold = report["verdicts"]
            .as_array()
            .unwrap()
            .iter()
            .all(|v| v["holds"] == true);
        let expected = if all_hold { 0 } else { 1 };
        assert_eq!(
            a.status.code(),
            Some(expected),
            "{name}: exit code disagrees with report content"
        );
    }
    pass(
        9,
        "parse/serialize/parse identity and content-determined CLI exit codes",
        t,
    );
}
