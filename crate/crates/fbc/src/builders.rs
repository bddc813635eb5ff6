//! Deterministic example configurations used by tests, the corpus and the CLI.
//!
//! Builders panic on invalid input; they only construct fixed, known-valid shapes.

use crate::config::{Fbc, RawFbc};

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Builds a configuration from names; `layers = None` gives singleton layers.
pub fn build(
    angles: &[&str],
    g: &[&[&str]],
    polygons: &[&[&str]],
    layers: Option<&[&[&str]]>,
    degree: &[(&str, i64)],
) -> Fbc {
    let raw = RawFbc {
        angles: strings(angles),
        g: g.iter().map(|c| strings(c)).collect(),
        polygons: polygons.iter().map(|c| strings(c)).collect(),
        layers: layers.map(|l| l.iter().map(|c| strings(c)).collect()),
        degree: degree.iter().map(|(a, d)| (a.to_string(), *d)).collect(),
    };
    match Fbc::from_raw(&raw) {
        Ok(cfg) => cfg,
        Err(errs) => panic!("builder produced an invalid configuration: {errs:?}"),
    }
}

/// A Brauer configuration from vertices (half-edges in cyclic order, f-degree) and polygons.
///
/// Angles are ordered vertex by vertex; `d(e) = m·|v|`.
pub fn brauer(vertices: &[(Vec<String>, usize)], polygons: &[Vec<String>]) -> Fbc {
    let raw = RawFbc {
        angles: vertices
            .iter()
            .flat_map(|(hs, _)| hs.iter().cloned())
            .collect(),
        g: vertices.iter().map(|(hs, _)| hs.clone()).collect(),
        polygons: polygons.to_vec(),
        layers: None,
        degree: vertices
            .iter()
            .map(|(hs, m)| (hs[0].clone(), (m * hs.len()) as i64))
            .collect(),
    };
    match Fbc::from_raw(&raw) {
        Ok(cfg) => cfg,
        Err(errs) => panic!("builder produced an invalid configuration: {errs:?}"),
    }
}

/// Two vertices of three angles each joined by three edges, `d ≡ 2`.
pub fn three_edges() -> Fbc {
    build(
        &["1", "2", "3", "1'", "2'", "3'"],
        &[&["1", "2", "3"], &["1'", "2'", "3'"]],
        &[&["1", "1'"], &["2", "2'"], &["3", "3'"]],
        None,
        &[("1", 2), ("1'", 2)],
    )
}

/// One edge `{x, y}` between two one-angle vertices, `d ≡ 2`.
pub fn one_edge() -> Fbc {
    build(
        &["x", "y"],
        &[],
        &[&["x", "y"]],
        None,
        &[("x", 2), ("y", 2)],
    )
}

/// As [`one_edge`] with the single layer `{x, y}`.
pub fn one_edge_layered() -> Fbc {
    build(
        &["x", "y"],
        &[],
        &[&["x", "y"]],
        Some(&[&["x", "y"]]),
        &[("x", 2), ("y", 2)],
    )
}

/// Single edge between one-angle vertices of f-degrees `m` and `n`.
pub fn single_edge(m: usize, n: usize) -> Fbc {
    brauer(
        &[(strings(&["x"]), m), (strings(&["y"]), n)],
        &[strings(&["x", "y"])],
    )
}

/// One vertex `{e, e'}` with a loop edge, f-degree `m` (so `d ≡ 2m`).
pub fn loop_bg(m: usize) -> Fbc {
    brauer(&[(strings(&["e", "e'"]), m)], &[strings(&["e", "e'"])])
}

/// A loop at a vertex of f-degree 1 with a pendant edge to a vertex of f-degree 2.
pub fn loop_pendant() -> Fbc {
    brauer(
        &[(strings(&["a", "a'", "p"]), 1), (strings(&["q"]), 2)],
        &[strings(&["a", "a'"]), strings(&["p", "q"])],
    )
}

/// One triangle on three distinct vertices of trivial f-degree.
pub fn triangle() -> Fbc {
    brauer(
        &[
            (strings(&["a"]), 1),
            (strings(&["b"]), 1),
            (strings(&["c"]), 1),
        ],
        &[strings(&["a", "b", "c"])],
    )
}

/// Brauer tree: a path of `n >= 1` edges whose first vertex has f-degree `m`.
///
/// Edge `i` has half-edges `l{i}` (left end) and `r{i}` (right end).
pub fn brauer_path(n: usize, m: usize) -> Fbc {
    assert!(n >= 1);
    let mut vertices = vec![(vec!["l1".to_string()], m)];
    for i in 1..n {
        vertices.push((vec![format!("r{i}"), format!("l{}", i + 1)], 1));
    }
    vertices.push((vec![format!("r{n}")], 1));
    let polygons: Vec<Vec<String>> = (1..=n)
        .map(|i| vec![format!("l{i}"), format!("r{i}")])
        .collect();
    brauer(&vertices, &polygons)
}

/// Brauer tree: a star of `n >= 1` edges whose centre has f-degree `m`.
///
/// Edge `i` has half-edges `c{i}` at the centre and `o{i}` at the leaf.
pub fn brauer_star(n: usize, m: usize) -> Fbc {
    assert!(n >= 1);
    let mut vertices = vec![((1..=n).map(|i| format!("c{i}")).collect(), m)];
    for i in 1..=n {
        vertices.push((vec![format!("o{i}")], 1));
    }
    let polygons: Vec<Vec<String>> = (1..=n)
        .map(|i| vec![format!("c{i}"), format!("o{i}")])
        .collect();
    brauer(&vertices, &polygons)
}

/// A Brauer configuration from per-angle labels, or `None` when the data is not a connected
/// Brauer configuration.
///
/// Angle `h{i}` lies on vertex `vertex_of[i]` and polygon `polygon_of[i]`; angles of a vertex
/// are in index order around it. Vertex labels index `f_degrees`; unused labels are skipped.
pub fn bc_from_labels(
    vertex_of: &[usize],
    polygon_of: &[usize],
    f_degrees: &[usize],
) -> Option<Fbc> {
    assert_eq!(vertex_of.len(), polygon_of.len());
    let name = |i: usize| format!("h{i}");
    let group = |labels: &[usize]| {
        let mut blocks: std::collections::BTreeMap<usize, Vec<String>> = Default::default();
        for (i, &l) in labels.iter().enumerate() {
            blocks.entry(l).or_default().push(name(i));
        }
        blocks
    };
    let vertices: Vec<(Vec<String>, usize)> = group(vertex_of)
        .into_iter()
        .map(|(v, hs)| (hs, *f_degrees.get(v).unwrap_or(&1)))
        .collect();
    let polygons: Vec<Vec<String>> = group(polygon_of).into_values().collect();
    if vertices.iter().any(|(_, m)| *m == 0) || polygons.iter().any(|p| p.len() < 2) {
        return None;
    }
    let raw = RawFbc {
        angles: (0..vertex_of.len()).map(name).collect(),
        g: vertices.iter().map(|(hs, _)| hs.clone()).collect(),
        polygons,
        layers: None,
        degree: vertices
            .iter()
            .map(|(hs, m)| (hs[0].clone(), (m * hs.len()) as i64))
            .collect(),
    };
    Fbc::from_raw(&raw).ok().filter(|c| c.is_connected())
}
