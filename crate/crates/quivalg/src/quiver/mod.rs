//! Quivers, paths, path-algebra arithmetic, admissible ideals, and quotient
//! algebras `kQ/I` with radical filtrations.

mod ideal;
mod path;
mod quotient;

pub use ideal::{AdmissibleIdeal, BoundQuiver, IdealBlock};
pub use path::{Path, PathVector};
pub use quotient::QuotientAlgebra;

use std::collections::BTreeMap;

use crate::error::QuiverError;

/// A finite directed multigraph. Loops and parallel edges are allowed.
///
/// Vertices and edges are sorted by id at construction, so the index order of
/// edges *is* the lexicographic order of their ids. That makes path order
/// (length first, then edge-id sequence) a plain comparison of index
/// sequences, and keeps every derived basis deterministic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Quiver {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

impl Quiver {
    /// Builds a quiver from vertex ids and `(edge id, source id, target id)`
    /// triples, validating uniqueness and endpoint declarations.
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<(String, String, String)>,
    ) -> Result<Self, QuiverError> {
        let mut vs = vertices;
        vs.sort();
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(QuiverError::DuplicateVertex(w[0].clone()));
            }
        }
        let vertex_index: BTreeMap<&str, usize> =
            vs.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();

        let mut es = edges;
        es.sort_by(|a, b| a.0.cmp(&b.0));
        for w in es.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(QuiverError::DuplicateEdge(w[0].0.clone()));
            }
        }
        let mut resolved = Vec::with_capacity(es.len());
        for (id, src, tgt) in es {
            let s = *vertex_index.get(src.as_str()).ok_or_else(|| QuiverError::UnknownVertex {
                edge: id.clone(),
                vertex: src.clone(),
            })?;
            let t = *vertex_index.get(tgt.as_str()).ok_or_else(|| QuiverError::UnknownVertex {
                edge: id.clone(),
                vertex: tgt.clone(),
            })?;
            resolved.push(Edge { id, src: s, tgt: t });
        }

        let mut out_edges = vec![Vec::new(); vs.len()];
        let mut in_edges = vec![Vec::new(); vs.len()];
        for (i, e) in resolved.iter().enumerate() {
            out_edges[e.src].push(i);
            in_edges[e.tgt].push(i);
        }
        Ok(Quiver { vertices: vs, edges: resolved, out_edges, in_edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_str().cmp(id)).ok()
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    /// Edge indices leaving `v`, ascending (= edge-id order).
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    /// Edge indices entering `v`, ascending.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    /// Edges from `g` to `g'`, ascending.
    pub fn edges_between(&self, g: usize, h: usize) -> Vec<usize> {
        self.out_edges[g].iter().copied().filter(|&e| self.edges[e].tgt == h).collect()
    }

    /// Vertex-count adjacency matrix entry: number of edges `g -> h`.
    pub fn adjacency_count(&self, g: usize, h: usize) -> usize {
        self.edges_between(g, h).len()
    }

    /// All paths of length <= `max_len`, optionally filtered by endpoints,
    /// in (length, lexicographic-by-edge-id) order.
    pub fn enumerate_paths(
        &self,
        max_len: usize,
        source: Option<usize>,
        target: Option<usize>,
    ) -> Vec<Path> {
        let mut out = Vec::new();
        // trivial paths
        for v in 0..self.vertex_count() {
            if source.is_some_and(|s| s != v) || target.is_some_and(|t| t != v) {
                continue;
            }
            out.push(Path::trivial(v));
        }
        // composite paths, grown one length at a time so the global order is
        // (length, lex) without a final sort
        let mut frontier: Vec<Vec<usize>> = Vec::new();
        for len in 1..=max_len {
            let mut next = Vec::new();
            if len == 1 {
                for e in 0..self.edge_count() {
                    if source.is_some_and(|s| s != self.edges[e].src) {
                        continue;
                    }
                    next.push(vec![e]);
                }
            } else {
                for p in &frontier {
                    let end = self.edges[*p.last().unwrap()].tgt;
                    for &e in &self.out_edges[end] {
                        let mut q = p.clone();
                        q.push(e);
                        next.push(q);
                    }
                }
            }
            next.sort();
            for p in &next {
                if target.is_none_or(|t| self.edges[*p.last().unwrap()].tgt == t) {
                    out.push(Path::from_edge_indices(p.clone()));
                }
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        out
    }

    /// Checks that a path is structurally valid in this quiver.
    pub fn check_path(&self, p: &Path) -> Result<(), QuiverError> {
        match p {
            Path::Trivial(v) => {
                if *v >= self.vertex_count() {
                    return Err(QuiverError::EdgeOutOfRange(*v));
                }
            }
            Path::Edges(es) => {
                for &e in es {
                    if e >= self.edge_count() {
                        return Err(QuiverError::EdgeOutOfRange(e));
                    }
                }
                for (i, w) in es.windows(2).enumerate() {
                    if self.edges[w[0]].tgt != self.edges[w[1]].src {
                        return Err(QuiverError::BrokenPath(i));
                    }
                }
            }
        }
        Ok(())
    }

    /// Human-readable path rendering, e.g. `e(v)` or `a*b`.
    pub fn path_string(&self, p: &Path) -> String {
        match p {
            Path::Trivial(v) => format!("e({})", self.vertices[*v]),
            Path::Edges(es) => {
                es.iter().map(|&e| self.edges[e].id.clone()).collect::<Vec<_>>().join("*")
            }
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use fixtures::*;

    /// Independent brute-force path enumeration: depth-first over edge lists,
    /// used as the oracle for `enumerate_paths`.
    fn brute_force_paths(q: &Quiver, max_len: usize) -> Vec<Vec<usize>> {
        fn extend(q: &Quiver, cur: &mut Vec<usize>, max_len: usize, out: &mut Vec<Vec<usize>>) {
            if cur.len() == max_len {
                return;
            }
            let end = q.edge(*cur.last().unwrap()).tgt;
            for e in 0..q.edge_count() {
                if q.edge(e).src == end {
                    cur.push(e);
                    out.push(cur.clone());
                    extend(q, cur, max_len, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        for e in 0..q.edge_count() {
            let mut cur = vec![e];
            out.push(cur.clone());
            extend(q, &mut cur, max_len, &mut out);
        }
        out
    }

    fn check_against_oracle(q: &Quiver, max_len: usize) {
        let got = q.enumerate_paths(max_len, None, None);
        let mut expected: Vec<Path> = (0..q.vertex_count()).map(Path::trivial).collect();
        expected.extend(brute_force_paths(q, max_len).into_iter().map(Path::from_edge_indices));
        expected.sort();
        let mut sorted_got = got.clone();
        sorted_got.sort();
        assert_eq!(sorted_got, expected);
        // enumeration is already in canonical order
        assert_eq!(got, expected);
    }

    #[test]
    fn enumerate_a2() {
        let q = a2();
        let paths = q.enumerate_paths(2, None, None);
        assert_eq!(paths.len(), 3); // e1, e2, a
        check_against_oracle(&q, 2);
    }

    #[test]
    fn enumerate_loop() {
        let q = loop_quiver();
        let paths = q.enumerate_paths(2, None, None);
        assert_eq!(paths.len(), 3); // e_v, x, x^2
        check_against_oracle(&q, 2);
    }

    #[test]
    fn enumerate_kronecker() {
        let q = kronecker();
        let paths = q.enumerate_paths(1, None, None);
        assert_eq!(paths.len(), 4); // e1, e2, a, b
        check_against_oracle(&q, 3);
    }

    #[test]
    fn endpoint_filters() {
        let q = a2();
        let from1 = q.enumerate_paths(2, Some(0), None);
        assert_eq!(from1.len(), 2); // e1, a
        let to2 = q.enumerate_paths(2, None, Some(1));
        assert_eq!(to2.len(), 2); // e2, a
        let one_to_two = q.enumerate_paths(2, Some(0), Some(1));
        assert_eq!(one_to_two.len(), 1); // a
    }

    #[test]
    fn constructor_validation() {
        assert!(matches!(
            Quiver::new(vec!["v".into(), "v".into()], vec![]),
            Err(QuiverError::DuplicateVertex(_))
        ));
        assert!(matches!(
            Quiver::new(
                vec!["v".into()],
                vec![("x".into(), "v".into(), "w".into())]
            ),
            Err(QuiverError::UnknownVertex { .. })
        ));
    }
}
