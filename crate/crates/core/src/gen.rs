//! Parametric rule generators.
//!
//! The affine family lives on the pillowcase: two unit squares P
//! (front) and Q (back) glued along four rims s, e, n, w. The plane
//! map (x, y) -> (m x + hx, n y + hy) commutes with the pillowcase
//! folding for any integers, so every choice with m, n >= 1 descends
//! to a subdivision map and yields a valid rule. Each square divides
//! into an m-by-n grid; parities of the translated grid coordinates
//! decide which tile a cell maps onto and whether it is rotated.

use crate::model::{parse_fsr, Rule};
use std::fmt::Write;

/// vertex type over an integer lattice point with parities (a, b)
fn vtx(a: usize, b: usize) -> &'static str {
    match (a % 2, b % 2) {
        (0, 0) => "sw",
        (1, 0) => "se",
        (1, 1) => "ne",
        _ => "nw",
    }
}

/// image of a rightward horizontal unit segment starting at (a, b)
fn himg(a: usize, b: usize) -> &'static str {
    match (a % 2, b % 2) {
        (0, 0) => "+s",
        (1, 0) => "-s",
        (0, 1) => "+n",
        _ => "-n",
    }
}

/// image of an upward vertical unit segment starting at (a, b)
fn vimg(a: usize, b: usize) -> &'static str {
    match (a % 2, b % 2) {
        (0, 0) => "+w",
        (1, 0) => "+e",
        (0, 1) => "-w",
        _ => "-e",
    }
}

/// image tile and rotation of a unit square with low corner at (a, b)
fn fimg(a: usize, b: usize) -> (&'static str, usize) {
    match (a % 2, b % 2) {
        (0, 0) => ("P", 0),
        (1, 0) => ("Q", 0),
        (1, 1) => ("P", 2),
        _ => ("Q", 2),
    }
}

/// Reference for grid vertex (i, j) of an m-by-n subdivided square.
/// Boundary point indices follow each slot's edge type in its own
/// forward direction. On P every rim edge runs with the grid; on Q the
/// pillow fold reverses the horizontal rims, so `flip_h` renumbers the
/// bottom and top boundary points right to left.
fn grid_ref(m: usize, n: usize, i: usize, j: usize, flip_h: bool) -> String {
    let hk = |i: usize| if flip_h { m - i } else { i };
    if j == 0 {
        if i == 0 {
            return "corner 3".into();
        }
        if i == m {
            return "corner 0".into();
        }
        return format!("bp 0.{}", hk(i));
    }
    if j == n {
        if i == m {
            return "corner 1".into();
        }
        if i == 0 {
            return "corner 2".into();
        }
        return format!("bp 2.{}", hk(i));
    }
    if i == m {
        return format!("bp 1.{j}");
    }
    if i == 0 {
        return format!("bp 3.{j}");
    }
    format!("interior v{i}x{j}")
}

/// Subdivision word of a rim: `count` unit segments with vertices
/// between them, images taken from `img` at successive parities.
fn rim_word(count: usize, at: impl Fn(usize) -> (usize, usize), horizontal: bool) -> String {
    let mut parts = Vec::new();
    for k in 0..count {
        let (a, b) = at(k);
        if k > 0 {
            parts.push(vtx(a, b).to_string());
        }
        parts.push(if horizontal { himg(a, b) } else { vimg(a, b) }.to_string());
    }
    parts.join(" ")
}

fn scheme(out: &mut String, tile: &str, m: usize, n: usize, hx: usize, hy: usize, flip_h: bool) {
    writeln!(out, "subdivision {tile} {{").unwrap();
    for j in 1..n {
        for i in 1..m {
            writeln!(out, "  interior v{i}x{j} : {}", vtx(i + hx, j + hy)).unwrap();
        }
    }
    for j in 0..=n {
        for i in 0..m {
            writeln!(
                out,
                "  edge h{i}x{j} : {} -> {} image {}",
                grid_ref(m, n, i, j, flip_h),
                grid_ref(m, n, i + 1, j, flip_h),
                himg(i + hx, j + hy)
            )
            .unwrap();
        }
    }
    for j in 0..n {
        for i in 0..=m {
            writeln!(
                out,
                "  edge u{i}x{j} : {} -> {} image {}",
                grid_ref(m, n, i, j, flip_h),
                grid_ref(m, n, i, j + 1, flip_h),
                vimg(i + hx, j + hy)
            )
            .unwrap();
        }
    }
    for j in 0..n {
        for i in 0..m {
            let (t, rot) = fimg(i + hx, j + hy);
            writeln!(
                out,
                "  face f{i}x{j} : [ +h{i}x{j} +u{}x{j} -h{i}x{} -u{i}x{j} ] image {t} rot {rot}",
                i + 1,
                j + 1
            )
            .unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
}

/// Emits the rule text for the pillowcase map (x, y) -> (mx + hx, ny + hy).
pub fn affine_pillowcase(m: usize, n: usize, hx: usize, hy: usize) -> String {
    assert!(m >= 1 && n >= 1);
    let mut out = String::new();
    writeln!(out, "fsr affine_{m}x{n}_{hx}_{hy}").unwrap();
    writeln!(out).unwrap();
    writeln!(out, "vertex sw se ne nw").unwrap();
    writeln!(out).unwrap();
    let s = rim_word(m, |k| (k + hx, hy), true);
    let e = rim_word(n, |k| (m + hx, k + hy), false);
    let nw = rim_word(m, |k| (k + hx, n + hy), true);
    let w = rim_word(n, |k| (hx, k + hy), false);
    writeln!(out, "edge s : sw -> se subdivides [ {s} ]").unwrap();
    writeln!(out, "edge e : se -> ne subdivides [ {e} ]").unwrap();
    writeln!(out, "edge n : nw -> ne subdivides [ {nw} ]").unwrap();
    writeln!(out, "edge w : sw -> nw subdivides [ {w} ]").unwrap();
    writeln!(out).unwrap();
    writeln!(out, "tile P : [ +s se +e ne -n nw -w sw ]").unwrap();
    writeln!(out, "tile Q : [ -s sw +w nw +n ne -e se ]").unwrap();
    writeln!(out).unwrap();
    scheme(&mut out, "P", m, n, hx, hy, false);
    writeln!(out).unwrap();
    // Q is the mirror square: its model coordinates embed shifted one
    // square over, which adds m to the horizontal translation.
    scheme(&mut out, "Q", m, n, hx + m, hy, true);
    writeln!(out).unwrap();
    writeln!(out, "sphere {{").unwrap();
    writeln!(out, "  side s = (P, slot 0) , (Q, slot 0)").unwrap();
    writeln!(out, "  side e = (P, slot 1) , (Q, slot 3)").unwrap();
    writeln!(out, "  side n = (P, slot 2) , (Q, slot 2)").unwrap();
    writeln!(out, "  side w = (P, slot 3) , (Q, slot 1)").unwrap();
    writeln!(out, "}}").unwrap();
    out
}

/// Parses and compiles an affine family member. The construction is
/// valid for every parameter choice, so failure here is a bug.
pub fn affine_rule(m: usize, n: usize, hx: usize, hy: usize) -> Rule {
    let text = affine_pillowcase(m, n, hx, hy);
    let spec = parse_fsr(&text).unwrap_or_else(|e| panic!("generated text does not parse: {e}"));
    Rule::compile(&spec).unwrap_or_else(|r| panic!("generated rule does not validate:\n{r}"))
}
