//! Ordinary graphs: inputs for the reduction-style generators and the
//! independent counters used to cross-check them.
//!
//! Text format mirrors the hypergraph one: first line `"n m"`, then one
//! line `"u v"` per edge.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::rng::ChainRng;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error("graph is not {0}-regular")]
    NotRegular(usize),
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("requested {requested} edges but only {available} exist")]
    TooManyEdges { requested: u64, available: u64 },
    #[error("no {d}-regular graph on {n} vertices (n·d must be even, d < n)")]
    InfeasibleRegular { n: u32, d: usize },
}

/// A simple undirected graph on vertices `1..=n` with a canonical
/// (sorted, deduplicated) edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: u32,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    pub fn new(n: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, GraphError> {
        let mut canon: Vec<(u32, u32)> = Vec::new();
        for (a, b) in edges {
            if a == b || a == 0 || b == 0 || a > n || b > n {
                return Err(GraphError::Parse {
                    line: 0,
                    detail: format!("bad edge ({a}, {b}) for n = {n}"),
                });
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Graph { n, edges: canon })
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            detail: "empty input".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(GraphError::Parse {
                line: 1,
                detail: format!("{} header fields, expected 2", fields.len()),
            });
        }
        let parse = |tok: &str, line: usize| -> Result<u32, GraphError> {
            tok.parse().map_err(|_| GraphError::Parse {
                line,
                detail: format!("unparsable token {tok:?}"),
            })
        };
        let n = parse(fields[0], 1)?;
        let m = parse(fields[1], 1)? as usize;
        let mut edges = Vec::with_capacity(m);
        for (idx, raw) in lines {
            let line = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let toks: Vec<&str> = raw.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(GraphError::Parse {
                    line,
                    detail: format!("{} fields on edge line, expected 2", toks.len()),
                });
            }
            edges.push((parse(toks[0], line)?, parse(toks[1], line)?));
        }
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: 1,
                detail: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        Graph::new(n, edges)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (a, b) in &self.edges {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n as usize];
        for &(a, b) in &self.edges {
            deg[a as usize - 1] += 1;
            deg[b as usize - 1] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.degrees().into_iter().all(|x| x == d)
    }

    /// Two-coloring if one exists: vertex -> side (0 or 1).
    pub fn bipartition(&self) -> Result<Vec<u8>, GraphError> {
        let n = self.n as usize;
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a as usize - 1].push(b as usize - 1);
            adj[b as usize - 1].push(a as usize - 1);
        }
        let mut color = vec![u8::MAX; n];
        for start in 0..n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = vec![start];
            while let Some(v) = queue.pop() {
                for &w in &adj[v] {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        queue.push(w);
                    } else if color[w] == color[v] {
                        return Err(GraphError::NotBipartite);
                    }
                }
            }
        }
        Ok(color)
    }

    fn neighbor_masks(&self) -> Vec<u64> {
        assert!(self.n <= 63, "mask-based counters need n <= 63");
        let mut masks = vec![0u64; self.n as usize];
        for &(a, b) in &self.edges {
            masks[a as usize - 1] |= 1 << (b - 1);
            masks[b as usize - 1] |= 1 << (a - 1);
        }
        masks
    }

    /// Number of independent vertex sets (including the empty set), by
    /// branching on the lowest undecided vertex.
    pub fn independent_set_count(&self) -> BigUint {
        let masks = self.neighbor_masks();
        let all = if self.n == 0 {
            0
        } else {
            (1u64 << self.n) - 1
        };
        fn rec(avail: u64, masks: &[u64]) -> BigUint {
            if avail == 0 {
                return BigUint::one();
            }
            let v = avail.trailing_zeros() as usize;
            let without = rec(avail & !(1 << v), masks);
            let with = rec(avail & !(1 << v) & !masks[v], masks);
            without + with
        }
        rec(all, &masks)
    }

    /// Number of matchings (including the empty one), by branching on the
    /// first remaining edge.
    pub fn matching_count(&self) -> BigUint {
        fn rec(edges: &[(u32, u32)], blocked: u64) -> BigUint {
            match edges.split_first() {
                None => BigUint::one(),
                Some((&(a, b), rest)) => {
                    let skip = rec(rest, blocked);
                    let bits = (1u64 << (a - 1)) | (1 << (b - 1));
                    if blocked & bits != 0 {
                        skip
                    } else {
                        skip + rec(rest, blocked | bits)
                    }
                }
            }
        }
        assert!(self.n <= 63);
        if self.edges.is_empty() {
            return BigUint::zero() + 1u32;
        }
        rec(&self.edges, 0)
    }
}

/// Uniformly random set of `m` distinct edges between parts of sizes
/// `left` and `right` (left vertices are `1..=left`).
pub fn random_bipartite(left: u32, right: u32, m: u64, rng: &mut ChainRng) -> Result<Graph, GraphError> {
    let available = left as u64 * right as u64;
    if m > available {
        return Err(GraphError::TooManyEdges {
            requested: m,
            available,
        });
    }
    let mut chosen = std::collections::BTreeSet::new();
    while (chosen.len() as u64) < m {
        let u = rng.random_range(1..=left);
        let v = left + rng.random_range(1..=right);
        chosen.insert((u, v));
    }
    Graph::new(left + right, chosen)
}

/// Random `d`-regular simple graph via the pairing model with rejection.
pub fn random_regular(n: u32, d: usize, rng: &mut ChainRng) -> Result<Graph, GraphError> {
    if !(n as usize * d).is_multiple_of(2) || d >= n as usize || d == 0 {
        return Err(GraphError::InfeasibleRegular { n, d });
    }
    'attempt: loop {
        let mut stubs: Vec<u32> = (1..=n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        stubs.shuffle(rng);
        let mut edges = std::collections::BTreeSet::new();
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || !edges.insert((a.min(b), a.max(b))) {
                continue 'attempt;
            }
        }
        return Graph::new(n, edges);
    }
}
