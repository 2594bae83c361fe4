//! Isomorphism of marked hypergraphs, decided through the canonical form of
//! their colored factor graphs.

use std::collections::BTreeMap;

use crate::canon::{canonical_form, Canonical, Certificate};
use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexMark {
    Original,
    Added,
}

/// Marks that an isomorphism must preserve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoMarking {
    pub vertices: Vec<VertexMark>,
    pub edges: Option<Vec<u32>>,
}

impl IsoMarking {
    pub fn all_original(g: &Hypergraph) -> Self {
        IsoMarking {
            vertices: vec![VertexMark::Original; g.vertex_count()],
            edges: None,
        }
    }
}

/// A vertex bijection and an edge bijection preserving incidence and marks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
}

fn marked_factor_canonical(g: &Hypergraph, marks: &IsoMarking) -> Canonical {
    assert_eq!(marks.vertices.len(), g.vertex_count(), "marking must cover all vertices");
    let nv = g.vertex_count();
    let mut colors: Vec<u64> = marks
        .vertices
        .iter()
        .map(|m| match m {
            VertexMark::Original => 0,
            VertexMark::Added => 1,
        })
        .collect();
    for k in 0..g.edge_count() {
        let em = marks.edges.as_ref().map_or(0, |e| e[k] as u64);
        colors.push(2 + em);
    }
    let mut links = Vec::with_capacity(g.incidence_count());
    for (k, e) in g.edge_indices().into_iter().enumerate() {
        for v in e {
            links.push((v, nv + k));
        }
    }
    canonical_form(&colors, &links)
}

/// Canonical key: equal keys iff the marked hypergraphs are isomorphic.
pub fn canonical_key(g: &Hypergraph, marks: &IsoMarking) -> Certificate {
    let mut key = vec![g.vertex_count() as u64, g.edge_count() as u64];
    key.extend(marked_factor_canonical(g, marks).certificate);
    key
}

/// Returns an isomorphism from `a` to `b` if one exists.
pub fn are_isomorphic(
    a: &Hypergraph,
    ma: &IsoMarking,
    b: &Hypergraph,
    mb: &IsoMarking,
) -> Option<Isomorphism> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    let ca = marked_factor_canonical(a, ma);
    let cb = marked_factor_canonical(b, mb);
    if ca.certificate != cb.certificate {
        return None;
    }
    let order_b = cb.order();
    let nv = a.vertex_count();
    let mut vertex_map = BTreeMap::new();
    let mut edge_map = BTreeMap::new();
    for (x, &p) in ca.position.iter().enumerate() {
        let y = order_b[p];
        if x < nv {
            vertex_map.insert(a.vertices()[x].clone(), b.vertices()[y].clone());
        } else {
            edge_map.insert(a.edges()[x - nv].id.clone(), b.edges()[y - nv].id.clone());
        }
    }
    Some(Isomorphism {
        vertex_map,
        edge_map,
    })
}

/// Unmarked convenience wrapper.
pub fn isomorphic(a: &Hypergraph, b: &Hypergraph) -> Option<Isomorphism> {
    are_isomorphic(a, &IsoMarking::all_original(a), b, &IsoMarking::all_original(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path2() -> Hypergraph {
        Hypergraph::from_edges(&[("p1", &["x", "y"]), ("p2", &["y", "z"])], &[]).unwrap()
    }

    fn check_iso(a: &Hypergraph, b: &Hypergraph, iso: &Isomorphism) {
        for e in a.edges() {
            let image = b.edge(&iso.edge_map[&e.id]).unwrap();
            let mut mapped: Vec<&String> = e.vertices.iter().map(|v| &iso.vertex_map[v]).collect();
            let mut target: Vec<&String> = image.vertices.iter().collect();
            mapped.sort();
            target.sort();
            assert_eq!(mapped, target);
        }
    }

    #[test]
    fn renamed_path_is_isomorphic() {
        let a = path2();
        let b = Hypergraph::from_edges(&[("q", &["m", "n"]), ("r", &["k", "m"])], &[]).unwrap();
        let iso = isomorphic(&a, &b).expect("isomorphic");
        check_iso(&a, &b, &iso);
        assert_eq!(iso.vertex_map["y"], "m");
    }

    #[test]
    fn edge_vs_path_not_isomorphic() {
        let e = Hypergraph::from_edges(&[("e", &["a", "b", "c"])], &[]).unwrap();
        assert!(isomorphic(&e, &path2()).is_none());
    }

    #[test]
    fn marks_are_respected() {
        let g = Hypergraph::from_edges(&[("e", &["a", "b"])], &[]).unwrap();
        let m1 = IsoMarking {
            vertices: vec![VertexMark::Original, VertexMark::Added],
            edges: None,
        };
        let m2 = IsoMarking {
            vertices: vec![VertexMark::Added, VertexMark::Original],
            edges: None,
        };
        let iso = are_isomorphic(&g, &m1, &g, &m2).unwrap();
        assert_eq!(iso.vertex_map["a"], "b");
        assert!(are_isomorphic(&g, &m1, &g, &IsoMarking::all_original(&g)).is_none());
    }

    #[test]
    fn parallel_edges_counted() {
        let two = Hypergraph::from_edges(&[("e1", &["a", "b"]), ("e2", &["a", "b"])], &["c"]).unwrap();
        let apart = Hypergraph::from_edges(&[("e1", &["a", "b"]), ("e2", &["b", "c"])], &[]).unwrap();
        assert!(isomorphic(&two, &apart).is_none());
        assert!(isomorphic(&two, &two).is_some());
    }
}
