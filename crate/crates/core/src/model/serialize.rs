//! Canonical text writer. Declaration order is preserved, so
//! parse -> serialize -> parse is the identity and a second serialize
//! reproduces the bytes exactly.

use super::*;
use std::fmt::Write;

fn signed(name: &str, forward: bool) -> String {
    format!("{}{}", if forward { '+' } else { '-' }, name)
}

fn local_vertex(spec: &FsrSpec, scheme: &SubdivisionScheme, v: LocalVertex) -> String {
    match v {
        LocalVertex::Corner(i) => format!("corner {i}"),
        LocalVertex::BoundaryPoint { slot, index } => format!("bp {slot}.{index}"),
        LocalVertex::Interior(i) => {
            let _ = spec;
            format!("interior {}", scheme.interiors[i].name)
        }
    }
}

pub fn serialize_fsr(spec: &FsrSpec) -> String {
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "fsr {}", spec.name).unwrap();
    writeln!(w).unwrap();
    for v in &spec.vertices {
        match v.hint {
            WeightHint::None => writeln!(w, "vertex {}", v.name).unwrap(),
            WeightHint::Finite => writeln!(w, "vertex {} (finite)", v.name).unwrap(),
            WeightHint::Infinite => writeln!(w, "vertex {} (infinite)", v.name).unwrap(),
        }
    }
    writeln!(w).unwrap();
    for e in &spec.edges {
        let mut word = signed(
            &spec.edges[e.word.images[0].edge].name,
            e.word.images[0].forward,
        );
        for (p, img) in e.word.points.iter().zip(e.word.images.iter().skip(1)) {
            word.push(' ');
            word.push_str(&spec.vertices[*p].name);
            word.push(' ');
            word.push_str(&signed(&spec.edges[img.edge].name, img.forward));
        }
        writeln!(
            w,
            "edge {} : {} -> {} subdivides [ {} ]",
            e.name, spec.vertices[e.tail].name, spec.vertices[e.head].name, word
        )
        .unwrap();
    }
    writeln!(w).unwrap();
    for t in &spec.tiles {
        let slots: Vec<String> = t
            .slots
            .iter()
            .map(|s| {
                format!(
                    "{} {}",
                    signed(&spec.edges[s.edge.edge].name, s.edge.forward),
                    spec.vertices[s.corner].name
                )
            })
            .collect();
        writeln!(w, "tile {} : [ {} ]", t.name, slots.join(" ")).unwrap();
    }
    for scheme in &spec.schemes {
        writeln!(w).unwrap();
        writeln!(w, "subdivision {} {{", spec.tiles[scheme.tile].name).unwrap();
        for i in &scheme.interiors {
            writeln!(w, "  interior {} : {}", i.name, spec.vertices[i.image].name).unwrap();
        }
        for e in &scheme.edges {
            writeln!(
                w,
                "  edge {} : {} -> {} image {}",
                e.name,
                local_vertex(spec, scheme, e.tail),
                local_vertex(spec, scheme, e.head),
                signed(&spec.edges[e.image.edge].name, e.image.forward)
            )
            .unwrap();
        }
        for f in &scheme.faces {
            let sides: Vec<String> = f
                .sides
                .iter()
                .map(|s| signed(&scheme.edges[s.edge].name, s.forward))
                .collect();
            writeln!(
                w,
                "  face {} : [ {} ] image {} rot {}",
                f.name,
                sides.join(" "),
                spec.tiles[f.image].name,
                f.rot
            )
            .unwrap();
        }
        writeln!(w, "}}").unwrap();
    }
    writeln!(w).unwrap();
    writeln!(w, "sphere {{").unwrap();
    for (e, sides) in spec.gluing.sides.iter().enumerate() {
        writeln!(
            w,
            "  side {} = ({}, slot {}) , ({}, slot {})",
            spec.edges[e].name,
            spec.tiles[sides[0].tile].name,
            sides[0].slot,
            spec.tiles[sides[1].tile].name,
            sides[1].slot
        )
        .unwrap();
    }
    writeln!(w, "}}").unwrap();
    out
}
