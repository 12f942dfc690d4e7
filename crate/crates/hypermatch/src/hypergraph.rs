//! Hypergraphs, matchings, and intersection graphs.
//!
//! A hypergraph is immutable after construction and stores its edges in
//! canonical order (lexicographic on the sorted vertex lists), so equal
//! hypergraphs serialize identically and edge indices are stable. Vertices
//! are the integers `1..=n`; matchings are sets of pairwise-disjoint edge
//! indices.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed header (expected \"n m k\"): {detail}")]
    Header { line: usize, detail: String },
    #[error("line {line}: edge has {got} vertices, expected {expected}")]
    EdgeArity {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: u32, n: u32 },
    #[error("line {line}: vertex {vertex} repeated within edge")]
    RepeatedVertex { line: usize, vertex: u32 },
    #[error("line {line}: duplicate edge")]
    DuplicateEdge { line: usize },
    #[error("header announces {expected} edges but file contains {got}")]
    EdgeCount { expected: usize, got: usize },
    #[error("line {line}: unparsable token {token:?}")]
    BadToken { line: usize, token: String },
    #[error("invalid JSON hypergraph: {0}")]
    Json(String),
    #[error("invalid hypergraph: {0}")]
    Invalid(#[from] ConstructError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("uniformity k must be at least 2, got {0}")]
    KTooSmall(usize),
    #[error("edge {0:?} has wrong arity (expected {1})")]
    Arity(Vec<u32>, usize),
    #[error("vertex {0} out of range 1..={1}")]
    VertexRange(u32, u32),
    #[error("vertex {0} repeated within an edge")]
    Repeated(u32),
    #[error("duplicate edge {0:?}")]
    Duplicate(Vec<u32>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("edge index {0} out of range (hypergraph has {1} edges)")]
    EdgeIndex(usize, usize),
    #[error("edges {0} and {1} intersect; a matching needs disjoint edges")]
    NotDisjoint(usize, usize),
    #[error("matchings have different host hypergraphs")]
    HostMismatch,
}

/// JSON mirror of the text format.
#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    n: u32,
    k: usize,
    edges: Vec<Vec<u32>>,
}

/// An immutable k-uniform hypergraph on vertices `1..=n`.
#[derive(Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: u32,
    k: usize,
    edges: Vec<Vec<u32>>,
    /// Per-edge vertex bitmask (bit `v-1` set for vertex `v`).
    masks: Vec<BitSet>,
}

impl Hypergraph {
    /// Builds the canonical hypergraph from an arbitrary edge list.
    ///
    /// Vertices within each edge may come in any order; edges are sorted
    /// internally and the edge list is sorted lexicographically. Duplicate
    /// edges (as sets) are rejected.
    pub fn new(
        n: u32,
        k: usize,
        edges: impl IntoIterator<Item = Vec<u32>>,
    ) -> Result<Self, ConstructError> {
        if k < 2 {
            return Err(ConstructError::KTooSmall(k));
        }
        let mut canon: Vec<Vec<u32>> = Vec::new();
        for mut e in edges {
            if e.len() != k {
                return Err(ConstructError::Arity(e, k));
            }
            e.sort_unstable();
            for w in e.windows(2) {
                if w[0] == w[1] {
                    return Err(ConstructError::Repeated(w[0]));
                }
            }
            for &v in &e {
                if v == 0 || v > n {
                    return Err(ConstructError::VertexRange(v, n));
                }
            }
            canon.push(e);
        }
        canon.sort_unstable();
        for w in canon.windows(2) {
            if w[0] == w[1] {
                return Err(ConstructError::Duplicate(w[0].clone()));
            }
        }
        let masks = canon
            .iter()
            .map(|e| BitSet::from_indices(n as usize, e.iter().map(|&v| v as usize - 1)))
            .collect();
        Ok(Hypergraph {
            n,
            k,
            edges: canon,
            masks,
        })
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn uniformity(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &[u32] {
        &self.edges[i]
    }

    /// Vertex bitmask of edge `i` (bit `v-1` per vertex `v`).
    pub fn edge_mask(&self, i: usize) -> &BitSet {
        &self.masks[i]
    }

    pub fn edges_intersect(&self, a: usize, b: usize) -> bool {
        self.masks[a].intersects(&self.masks[b])
    }

    /// Parses either the text format or its JSON mirror (autodetected).
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        if text.trim_start().starts_with('{') {
            let j: HypergraphJson =
                serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
            return Ok(Hypergraph::new(j.n, j.k, j.edges)?);
        }
        Self::parse_text(text)
    }

    fn parse_text(text: &str) -> Result<Self, ParseError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| ParseError::Header {
            line: 1,
            detail: "empty input".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(ParseError::Header {
                line: 1,
                detail: format!("{} fields, expected 3", fields.len()),
            });
        }
        let parse_num = |tok: &str, line: usize| -> Result<u64, ParseError> {
            tok.parse().map_err(|_| ParseError::BadToken {
                line,
                token: tok.to_string(),
            })
        };
        let n = parse_num(fields[0], 1)? as u32;
        let m = parse_num(fields[1], 1)? as usize;
        let k = parse_num(fields[2], 1)? as usize;
        if k < 2 {
            return Err(ParseError::Header {
                line: 1,
                detail: format!("k must be at least 2, got {k}"),
            });
        }

        let mut edges: Vec<(usize, Vec<u32>)> = Vec::with_capacity(m);
        for (idx, raw) in lines {
            let line = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let mut edge = Vec::with_capacity(k);
            for tok in raw.split_whitespace() {
                edge.push(parse_num(tok, line)? as u32);
            }
            if edge.len() != k {
                return Err(ParseError::EdgeArity {
                    line,
                    expected: k,
                    got: edge.len(),
                });
            }
            for &v in &edge {
                if v == 0 || v > n {
                    return Err(ParseError::VertexOutOfRange { line, vertex: v, n });
                }
            }
            let mut sorted = edge.clone();
            sorted.sort_unstable();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    return Err(ParseError::RepeatedVertex {
                        line,
                        vertex: w[0],
                    });
                }
            }
            if let Some((_, prev)) = edges.iter().find(|(_, p)| *p == sorted) {
                let _ = prev;
                return Err(ParseError::DuplicateEdge { line });
            }
            edges.push((line, sorted));
        }
        if edges.len() != m {
            return Err(ParseError::EdgeCount {
                expected: m,
                got: edges.len(),
            });
        }
        Ok(Hypergraph::new(n, k, edges.into_iter().map(|(_, e)| e))?)
    }

    /// Canonical text form: `"n m k\n"` then one line per edge with
    /// space-separated increasing vertex labels. Newline-terminated.
    pub fn serialize(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.edges.len(), self.k);
        for e in &self.edges {
            let labels: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            out.push_str(&labels.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let j = HypergraphJson {
            n: self.n,
            k: self.k,
            edges: self.edges.clone(),
        };
        serde_json::to_string(&j).expect("hypergraph JSON")
    }

    /// Maximum vertex degree Δ(H).
    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n as usize];
        for e in &self.edges {
            for &v in e {
                deg[v as usize - 1] += 1;
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// True when no two edges share more than one vertex.
    pub fn is_linear(&self) -> bool {
        let m = self.edges.len();
        for a in 0..m {
            for b in a + 1..m {
                let shared = self.edges[a]
                    .iter()
                    .filter(|v| self.edges[b].binary_search(v).is_ok())
                    .count();
                if shared > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// True when every vertex of `1..=n` has degree exactly `d`.
    ///
    /// Isolated vertices count: a single k-edge with n > k is not 1-regular.
    pub fn is_regular(&self, d: usize) -> bool {
        let mut deg = vec![0usize; self.n as usize];
        for e in &self.edges {
            for &v in e {
                deg[v as usize - 1] += 1;
            }
        }
        deg.into_iter().all(|x| x == d)
    }

    /// The sub-hypergraph on the canonical suffix `edges[from..]`, used by
    /// the self-reducibility stages. A suffix of a sorted edge list is
    /// already canonical, so local index `i` is global index `from + i`.
    pub fn suffix(&self, from: usize) -> Hypergraph {
        Hypergraph::new(self.n, self.k, self.edges[from..].iter().cloned())
            .expect("suffix of a valid hypergraph is valid")
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Graph on the edge indices of a hypergraph; two indices are adjacent
/// exactly when the host edges share a vertex.
#[derive(Debug, Clone)]
pub struct IntersectionGraph {
    adj: Vec<BitSet>,
}

impl IntersectionGraph {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.adj.len()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Builds a graph directly from an adjacency relation (test instances
    /// and synthetic graphs). Must be symmetric and irreflexive.
    pub fn from_adjacency(adj: Vec<BitSet>) -> Self {
        for (i, row) in adj.iter().enumerate() {
            debug_assert!(!row.contains(i));
            for j in row.iter() {
                debug_assert!(adj[j].contains(i));
            }
        }
        IntersectionGraph { adj }
    }
}

/// The intersection graph L(H).
pub fn intersection_graph(h: &Hypergraph) -> IntersectionGraph {
    let m = h.edge_count();
    let mut adj = vec![BitSet::new(m); m];
    for a in 0..m {
        for b in a + 1..m {
            if h.edges_intersect(a, b) {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
    }
    IntersectionGraph { adj }
}

/// A matching: pairwise vertex-disjoint edge indices of a shared host.
///
/// Values are cheap to clone (the host is behind an `Arc`) and compare by
/// host content plus member set.
#[derive(Debug, Clone)]
pub struct Matching {
    host: Arc<Hypergraph>,
    members: Vec<usize>,
    covered: BitSet,
}

impl PartialEq for Matching {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.same_host(other)
    }
}
impl Eq for Matching {}

impl Matching {
    pub fn empty(host: Arc<Hypergraph>) -> Self {
        let covered = BitSet::new(host.vertex_count() as usize);
        Matching {
            host,
            members: Vec::new(),
            covered,
        }
    }

    pub fn from_members(
        host: Arc<Hypergraph>,
        members: impl IntoIterator<Item = usize>,
    ) -> Result<Self, MatchingError> {
        let mut m = Matching::empty(host);
        for e in members {
            m.try_insert(e)?;
        }
        Ok(m)
    }

    fn try_insert(&mut self, e: usize) -> Result<(), MatchingError> {
        if e >= self.host.edge_count() {
            return Err(MatchingError::EdgeIndex(e, self.host.edge_count()));
        }
        let mask = self.host.edge_mask(e);
        if self.covered.intersects(mask) {
            let clash = self
                .members
                .iter()
                .copied()
                .find(|&f| self.host.edges_intersect(e, f))
                .unwrap();
            return Err(MatchingError::NotDisjoint(e, clash));
        }
        let pos = self.members.partition_point(|&f| f < e);
        self.members.insert(pos, e);
        self.covered.union_with(mask);
        Ok(())
    }

    pub fn host(&self) -> &Arc<Hypergraph> {
        &self.host
    }

    pub fn same_host(&self, other: &Matching) -> bool {
        Arc::ptr_eq(&self.host, &other.host) || *self.host == *other.host
    }

    /// Member edge indices in increasing order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    /// Bitmask of vertices covered by the matching.
    pub fn covered(&self) -> &BitSet {
        &self.covered
    }

    /// Edge `h` is addable when it is vertex-disjoint from every member.
    pub fn conflicts_with(&self, h: usize) -> bool {
        self.covered.intersects(self.host.edge_mask(h))
    }

    /// Member indices intersecting edge `h` (the chain's I_h when h ∉ M).
    pub fn intersecting_members(&self, h: usize) -> Vec<usize> {
        let mask = self.host.edge_mask(h);
        self.members
            .iter()
            .copied()
            .filter(|&f| self.host.edge_mask(f).intersects(mask))
            .collect()
    }

    /// The matching with edge `h` added; panics if illegal (callers check).
    pub fn with_edge(&self, h: usize) -> Matching {
        let mut m = self.clone();
        m.try_insert(h).expect("edge addition must be legal");
        m
    }

    /// The matching with member `h` removed.
    pub fn without_edge(&self, h: usize) -> Matching {
        let mut m = self.clone();
        let pos = m.members.binary_search(&h).expect("member to remove");
        m.members.remove(pos);
        m.covered = BitSet::new(m.host.vertex_count() as usize);
        for &e in &m.members {
            m.covered.union_with(m.host.edge_mask(e));
        }
        m
    }

    /// Member set as a bitset over edge indices.
    pub fn member_set(&self) -> BitSet {
        BitSet::from_indices(self.host.edge_count(), self.members.iter().copied())
    }
}

/// Symmetric difference (A∖B) ∪ (B∖A) as an edge-index set.
pub fn symmetric_difference(a: &Matching, b: &Matching) -> Result<BitSet, MatchingError> {
    if !a.same_host(b) {
        return Err(MatchingError::HostMismatch);
    }
    Ok(a.member_set().xor(&b.member_set()))
}
