//! Structural classification: wide edges, 3-comb witnesses, claw centers.
//!
//! An edge is *wide* when it intersects a matching of size three (three
//! pairwise-disjoint other edges). A hypergraph with at most `s` wide edges
//! sits in the class indexed by `s`; `s = 0` coincides with the intersection
//! graph being claw-free. `wide_edges` works on the hypergraph and
//! `claw_centers` works on the intersection graph alone, so the two sides of
//! the claimed equivalence stay independently computed.

use serde::Serialize;

use crate::hypergraph::{intersection_graph, Hypergraph, IntersectionGraph};

/// Classification output for one hypergraph.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct StructureReport {
    pub wide_edges: Vec<usize>,
    pub comb_witness: Option<[usize; 4]>,
    pub claw_centers: Vec<usize>,
    pub s: usize,
    pub linear: bool,
    pub max_degree: usize,
    pub n: u32,
    pub m: usize,
    pub k: usize,
}

/// Edge indices intersecting three pairwise-disjoint other edges.
pub fn wide_edges(h: &Hypergraph) -> Vec<usize> {
    let m = h.edge_count();
    let mut out = Vec::new();
    for e in 0..m {
        let hitters: Vec<usize> = (0..m)
            .filter(|&f| f != e && h.edges_intersect(e, f))
            .collect();
        if has_disjoint_triple(h, &hitters) {
            out.push(e);
        }
    }
    out
}

fn has_disjoint_triple(h: &Hypergraph, edges: &[usize]) -> bool {
    let t = edges.len();
    for i in 0..t {
        for j in i + 1..t {
            if h.edges_intersect(edges[i], edges[j]) {
                continue;
            }
            for l in j + 1..t {
                if !h.edges_intersect(edges[i], edges[l])
                    && !h.edges_intersect(edges[j], edges[l])
                {
                    return true;
                }
            }
        }
    }
    false
}

/// First 3-comb `(e1, e2, e3, e4)` in deterministic order: lexicographic on
/// `e4`, then on the triple. `{e1,e2,e3}` is a matching, `e4` meets all three.
pub fn find_three_comb(h: &Hypergraph) -> Option<[usize; 4]> {
    let m = h.edge_count();
    for e4 in 0..m {
        let hitters: Vec<usize> = (0..m)
            .filter(|&f| f != e4 && h.edges_intersect(e4, f))
            .collect();
        let t = hitters.len();
        for i in 0..t {
            for j in i + 1..t {
                if h.edges_intersect(hitters[i], hitters[j]) {
                    continue;
                }
                for l in j + 1..t {
                    if !h.edges_intersect(hitters[i], hitters[l])
                        && !h.edges_intersect(hitters[j], hitters[l])
                    {
                        return Some([hitters[i], hitters[j], hitters[l], e4]);
                    }
                }
            }
        }
    }
    None
}

/// Vertices of `l` with three pairwise-nonadjacent neighbors (centers of
/// induced claws).
pub fn claw_centers(l: &IntersectionGraph) -> Vec<usize> {
    let n = l.vertex_count();
    let mut out = Vec::new();
    for v in 0..n {
        let nbrs: Vec<usize> = l.neighbors(v).collect();
        let t = nbrs.len();
        'search: for i in 0..t {
            for j in i + 1..t {
                if l.adjacent(nbrs[i], nbrs[j]) {
                    continue;
                }
                for w in j + 1..t {
                    if !l.adjacent(nbrs[i], nbrs[w]) && !l.adjacent(nbrs[j], nbrs[w]) {
                        out.push(v);
                        break 'search;
                    }
                }
            }
        }
    }
    out
}

/// Full structural report; `s` is the number of wide edges.
pub fn classify(h: &Hypergraph) -> StructureReport {
    let wide = wide_edges(h);
    let witness = find_three_comb(h);
    let centers = claw_centers(&intersection_graph(h));
    StructureReport {
        s: wide.len(),
        comb_witness: witness,
        claw_centers: centers,
        linear: h.is_linear(),
        max_degree: h.max_degree(),
        n: h.vertex_count(),
        m: h.edge_count(),
        k: h.uniformity(),
        wide_edges: wide,
    }
}

/// Independent O(m^4) scan used to validate `wide_edges`: for each edge,
/// test all unordered triples of other edges directly.
pub fn wide_edges_bruteforce(h: &Hypergraph) -> Vec<usize> {
    let m = h.edge_count();
    let mut out = Vec::new();
    'edges: for e in 0..m {
        for a in 0..m {
            if a == e || !h.edges_intersect(e, a) {
                continue;
            }
            for b in a + 1..m {
                if b == e || !h.edges_intersect(e, b) || h.edges_intersect(a, b) {
                    continue;
                }
                for c in b + 1..m {
                    if c == e
                        || !h.edges_intersect(e, c)
                        || h.edges_intersect(a, c)
                        || h.edges_intersect(b, c)
                    {
                        continue;
                    }
                    out.push(e);
                    continue 'edges;
                }
            }
        }
    }
    out
}
