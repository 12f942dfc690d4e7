//! Instance families: subdivided 3-graphs, rooted blow-ups, the two
//! graph-to-hypergraph reductions, and seeded random corpora.

use std::sync::Arc;

use thiserror::Error;

use crate::graphs::Graph;
use crate::hypergraph::{Hypergraph, Matching};
use crate::rng::{pair_rng, ChainRng};
use crate::chain::run_with_rng;
use rand::Rng;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("subdivision requires a 3-uniform input, got k = {0}")]
    NotThreeUniform(usize),
    #[error("part sizes must all be at least 1")]
    EmptyPart,
    #[error("uniformity k must be at least 2, got {0}")]
    KTooSmall(usize),
    #[error("no pair of parts can host a {k}-edge (strict mode)")]
    AllPairsInfeasible { k: usize },
    #[error("graph is not {0}-regular")]
    NotRegular(usize),
    #[error("regularity d must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("requested {requested} edges but only {available} distinct {k}-sets exist")]
    TooManyEdges {
        requested: u64,
        available: u64,
        k: usize,
    },
}

/// Subdivision of a 3-graph: each edge `{v1,v2,v3}` gains a private vertex
/// `x` and is replaced by the triples `{v1,v2,x}`, `{v1,v3,x}`, `{v2,v3,x}`
/// plus the original triple. With `triples_only` the original triple is
/// dropped, leaving just the three that use `x`.
pub fn subdivide(h3: &Hypergraph, triples_only: bool) -> Result<Hypergraph, GeneratorError> {
    if h3.uniformity() != 3 {
        return Err(GeneratorError::NotThreeUniform(h3.uniformity()));
    }
    let n = h3.vertex_count();
    let m = h3.edge_count() as u32;
    let mut edges = Vec::new();
    for (idx, e) in h3.edges().iter().enumerate() {
        let x = n + idx as u32 + 1;
        let (v1, v2, v3) = (e[0], e[1], e[2]);
        edges.push(vec![v1, v2, x]);
        edges.push(vec![v1, v3, x]);
        edges.push(vec![v2, v3, x]);
        if !triples_only {
            edges.push(vec![v1, v2, v3]);
        }
    }
    Ok(Hypergraph::new(n + m, 3, edges).expect("subdivision output is valid"))
}

/// Rooted blow-up: parts of the given sizes, one root per part (its first
/// vertex), and for every pair of parts all k-sets inside the union that
/// contain both roots. Pairs too small to host a k-edge contribute nothing;
/// their indices are returned alongside. With `strict` set, an instance
/// where *every* pair is infeasible is an error.
pub fn rooted_blowup(
    sizes: &[u32],
    k: usize,
    strict: bool,
) -> Result<(Hypergraph, Vec<(usize, usize)>), GeneratorError> {
    if sizes.contains(&0) {
        return Err(GeneratorError::EmptyPart);
    }
    if k < 2 {
        return Err(GeneratorError::KTooSmall(k));
    }
    let mut offsets = Vec::with_capacity(sizes.len());
    let mut total = 0u32;
    for &s in sizes {
        offsets.push(total);
        total += s;
    }
    let part = |i: usize| -> Vec<u32> {
        (offsets[i] + 1..=offsets[i] + sizes[i]).collect()
    };
    let mut edges = Vec::new();
    let mut skipped = Vec::new();
    for i in 0..sizes.len() {
        for j in i + 1..sizes.len() {
            let union: Vec<u32> = part(i).into_iter().chain(part(j)).collect();
            if union.len() < k {
                skipped.push((i, j));
                continue;
            }
            let root_i = offsets[i] + 1;
            let root_j = offsets[j] + 1;
            let rest: Vec<u32> = union
                .into_iter()
                .filter(|&v| v != root_i && v != root_j)
                .collect();
            for combo in combinations(&rest, k - 2) {
                let mut e = vec![root_i, root_j];
                e.extend(combo);
                edges.push(e);
            }
        }
    }
    if strict && sizes.len() >= 2 && edges.is_empty() {
        return Err(GeneratorError::AllPairsInfeasible { k });
    }
    Ok((
        Hypergraph::new(total, k, edges).expect("blow-up output is valid"),
        skipped,
    ))
}

fn combinations(items: &[u32], r: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(r);
    fn rec(items: &[u32], r: usize, start: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == r {
            out.push(current.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < r - current.len() {
                break;
            }
            current.push(items[i]);
            rec(items, r, i + 1, current, out);
            current.pop();
        }
    }
    rec(items, r, 0, &mut current, &mut out);
    out
}

/// Reduction from a (bipartite) graph: every graph edge becomes a k-edge
/// on its two endpoints plus `k - 2` fresh private vertices. Matchings of
/// the graph and of the output correspond one-to-one. The interesting
/// inputs are bipartite with maximum degree at most four; the construction
/// itself works for any graph, so a larger degree is reported, not fatal.
pub fn from_bipartite(g: &Graph, k: usize) -> Result<(Hypergraph, Vec<String>), GeneratorError> {
    if k < 2 {
        return Err(GeneratorError::KTooSmall(k));
    }
    let mut warnings = Vec::new();
    if g.bipartition().is_err() {
        warnings.push("input graph is not bipartite".to_string());
    }
    if g.max_degree() > 4 {
        warnings.push(format!(
            "input maximum degree {} exceeds 4",
            g.max_degree()
        ));
    }
    let n = g.vertex_count();
    let mut edges = Vec::with_capacity(g.edge_count());
    for (idx, &(u, v)) in g.edges().iter().enumerate() {
        let mut e = vec![u, v];
        let base = n + (idx as u32) * (k as u32 - 2);
        e.extend(base + 1..=base + (k as u32 - 2));
        edges.push(e);
    }
    let total = n + g.edge_count() as u32 * (k as u32 - 2);
    Ok((
        Hypergraph::new(total, k, edges).expect("reduction output is valid"),
        warnings,
    ))
}

/// Dual of a d-regular graph: hypergraph vertices are the graph's edge
/// indices (1-based), one hyperedge per graph vertex collecting its
/// incident edges. Output is d-uniform, 2-regular, and linear; its
/// matchings are exactly the independent sets of the input.
pub fn dual(g: &Graph, d: usize) -> Result<Hypergraph, GeneratorError> {
    if d < 2 {
        return Err(GeneratorError::DegreeTooSmall(d));
    }
    if !g.is_regular(d) {
        return Err(GeneratorError::NotRegular(d));
    }
    let mut edges = Vec::with_capacity(g.vertex_count() as usize);
    for v in 1..=g.vertex_count() {
        let incident: Vec<u32> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(i, _)| i as u32 + 1)
            .collect();
        edges.push(incident);
    }
    Ok(Hypergraph::new(g.edge_count() as u32, d, edges).expect("dual output is valid"))
}

/// Uniformly random k-graph with `m` distinct edges on `1..=n`.
pub fn random_kgraph(
    n: u32,
    m: u64,
    k: usize,
    rng: &mut ChainRng,
) -> Result<Hypergraph, GeneratorError> {
    if k < 2 {
        return Err(GeneratorError::KTooSmall(k));
    }
    let available = binomial(n as u64, k as u64);
    if m > available {
        return Err(GeneratorError::TooManyEdges {
            requested: m,
            available,
            k,
        });
    }
    let mut chosen: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
    while (chosen.len() as u64) < m {
        let mut edge = Vec::with_capacity(k);
        while edge.len() < k {
            let v = rng.random_range(1..=n);
            if !edge.contains(&v) {
                edge.push(v);
            }
        }
        edge.sort_unstable();
        chosen.insert(edge);
    }
    Ok(Hypergraph::new(n, k, chosen).expect("random edges are valid"))
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// A pair of matchings drawn by two independent chain runs of `steps`
/// steps each.
pub fn random_matching_pair(
    h: &Arc<Hypergraph>,
    seed: u64,
    steps: u64,
) -> (Matching, Matching) {
    let mut r0 = pair_rng(seed, 0);
    let mut r1 = pair_rng(seed, 1);
    let a = run_with_rng(h, steps, &mut r0, false).final_state;
    let b = run_with_rng(h, steps, &mut r1, false).final_state;
    (a, b)
}
