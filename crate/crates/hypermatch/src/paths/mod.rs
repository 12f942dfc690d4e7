//! Canonical paths between matchings and the machinery that certifies them:
//! symmetric-difference decomposition, the two path constructions (the
//! claw-free one and the Euler-tour one), the transition encoding, and the
//! exhaustive verifiers.

mod general;
mod s_zero;
mod verify;

pub use general::{canonical_path_general, euler_tour, skeleton, Skeleton, SkeletonEdge};
pub use s_zero::canonical_path_s0;
pub use verify::{
    cut_bound_check, verify_injectivity, Collision, CutBoundReport, PathsReport,
    PropertyViolation, VerifyError, VerifyOptions, DEFAULT_MAX_VERIFY_STATES,
};

use serde::Serialize;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::hypergraph::{Hypergraph, Matching, MatchingError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error("component {0} is neither a path nor a cycle; use the Euler-tour construction")]
    GeneralComponent(usize),
    #[error("the given step is not a transition of the canonical path")]
    NotOnPath,
}

/// Which canonical-path construction to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PathMode {
    /// Alternating path/cycle traversal (requires no wide edges).
    SZero,
    /// Euler tours over per-edge skeleton cycles (any instance).
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Path,
    Cycle,
    General,
}

/// One connected component of I⊕F under edge intersection.
#[derive(Debug, Clone)]
pub struct Component {
    /// Member edge indices, sorted.
    pub edges: Vec<usize>,
    pub kind: ComponentKind,
    /// Smallest vertex label covered by the component.
    pub min_vertex: u32,
    /// For paths: the edges in walk order endpoint-to-endpoint. For cycles:
    /// a cyclic walk starting at the smallest edge index. Empty for general
    /// components.
    pub walk: Vec<usize>,
}

/// Components of I⊕F ordered by increasing smallest vertex label.
#[derive(Debug, Clone)]
pub struct ComponentDecomposition {
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PathMove {
    Remove { edge: usize },
    Add { edge: usize },
    Swap { added: usize, removed: usize },
}

/// The canonical path γ(I, F): states M_0..M_t with the move and the venue
/// (component index) of every transition.
#[derive(Debug, Clone)]
pub struct CanonicalPath {
    pub states: Vec<Matching>,
    pub moves: Vec<PathMove>,
    pub venues: Vec<usize>,
}

impl CanonicalPath {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn initial(&self) -> &Matching {
        self.states.first().expect("a path has at least one state")
    }

    pub fn final_state(&self) -> &Matching {
        self.states.last().expect("a path has at least one state")
    }
}

pub(crate) fn apply_move(m: &Matching, mv: PathMove) -> Matching {
    match mv {
        PathMove::Remove { edge } => {
            debug_assert!(m.contains(edge));
            m.without_edge(edge)
        }
        PathMove::Add { edge } => {
            debug_assert!(!m.conflicts_with(edge));
            m.with_edge(edge)
        }
        PathMove::Swap { added, removed } => {
            debug_assert_eq!(m.intersecting_members(added), vec![removed]);
            m.without_edge(removed).with_edge(added)
        }
    }
}

/// Connected components of I⊕F, classified and ordered.
pub fn decompose(i: &Matching, f: &Matching) -> Result<ComponentDecomposition, MatchingError> {
    let sym = crate::hypergraph::symmetric_difference(i, f)?;
    let host = i.host();
    let edges: Vec<usize> = sym.to_vec();
    let index_of: std::collections::HashMap<usize, usize> =
        edges.iter().enumerate().map(|(pos, &e)| (e, pos)).collect();
    let t = edges.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); t];
    for a in 0..t {
        for b in a + 1..t {
            if host.edges_intersect(edges[a], edges[b]) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    let mut seen = vec![false; t];
    let mut components = Vec::new();
    for start in 0..t {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(build_component(host, &edges, &adj, comp, &index_of));
    }
    components.sort_by_key(|c: &Component| c.min_vertex);
    Ok(ComponentDecomposition { components })
}

fn build_component(
    host: &Hypergraph,
    edges: &[usize],
    adj: &[Vec<usize>],
    comp: Vec<usize>,
    _index_of: &std::collections::HashMap<usize, usize>,
) -> Component {
    let member_edges: Vec<usize> = comp.iter().map(|&pos| edges[pos]).collect();
    let min_vertex = member_edges
        .iter()
        .map(|&e| host.edge(e)[0])
        .min()
        .expect("components are nonempty");
    let inner_deg = |pos: usize| adj[pos].iter().filter(|w| comp.contains(w)).count();
    let max_deg = comp.iter().map(|&p| inner_deg(p)).max().unwrap_or(0);
    let kind = if max_deg >= 3 {
        ComponentKind::General
    } else if comp.iter().all(|&p| inner_deg(p) == 2) {
        ComponentKind::Cycle
    } else {
        ComponentKind::Path
    };
    let walk = match kind {
        ComponentKind::General => Vec::new(),
        ComponentKind::Path => {
            // Walk from the endpoint with the smaller edge index.
            let mut ends: Vec<usize> = comp
                .iter()
                .copied()
                .filter(|&p| inner_deg(p) <= 1)
                .collect();
            ends.sort_by_key(|&p| edges[p]);
            walk_from(edges, adj, &comp, ends[0], None)
        }
        ComponentKind::Cycle => {
            let start = *comp
                .iter()
                .min_by_key(|&&p| edges[p])
                .expect("cycle is nonempty");
            let next = adj[start]
                .iter()
                .copied()
                .filter(|w| comp.contains(w))
                .min_by_key(|&w| edges[w])
                .expect("cycle vertices have degree 2");
            walk_from(edges, adj, &comp, start, Some(next))
        }
    };
    Component {
        edges: member_edges,
        kind,
        min_vertex,
        walk,
    }
}

fn walk_from(
    edges: &[usize],
    adj: &[Vec<usize>],
    comp: &[usize],
    start: usize,
    forced_second: Option<usize>,
) -> Vec<usize> {
    let mut order = vec![start];
    let mut used = std::collections::HashSet::new();
    used.insert(start);
    let mut current = start;
    if let Some(second) = forced_second {
        order.push(second);
        used.insert(second);
        current = second;
    }
    loop {
        let next = adj[current]
            .iter()
            .copied()
            .find(|w| comp.contains(w) && !used.contains(w));
        match next {
            Some(w) => {
                order.push(w);
                used.insert(w);
                current = w;
            }
            None => break,
        }
    }
    debug_assert_eq!(order.len(), comp.len(), "walk must cover the component");
    order.into_iter().map(|p| edges[p]).collect()
}

/// Builds the canonical path in the requested mode.
pub fn canonical_path(i: &Matching, f: &Matching, mode: PathMode) -> Result<CanonicalPath, PathError> {
    match mode {
        PathMode::SZero => canonical_path_s0(i, f),
        PathMode::General => canonical_path_general(i, f),
    }
}

/// The encoding image (I⊕F)⊕(M∪M′) of one step, as an edge-index set.
pub fn eta_image(i: &Matching, f: &Matching, m: &Matching, m_next: &Matching) -> BitSet {
    let mut img = i.member_set();
    img.xor_with(&f.member_set());
    let union = m.member_set().union(&m_next.member_set());
    img.xor_with(&union);
    img
}

/// The encoding of a step that must lie on γ(I, F); errors otherwise.
pub fn eta(
    i: &Matching,
    f: &Matching,
    m: &Matching,
    m_next: &Matching,
    mode: PathMode,
) -> Result<BitSet, PathError> {
    let path = canonical_path(i, f, mode)?;
    let on_path = path
        .states
        .windows(2)
        .any(|w| w[0] == *m && w[1] == *m_next);
    if !on_path {
        return Err(PathError::NotOnPath);
    }
    Ok(eta_image(i, f, m, m_next))
}

/// Membership in the near-matching family: some nonempty set of at most
/// `s + 1` edges can be deleted from `edge_set` to leave a matching.
/// The empty set is never a member (there is no edge to delete).
pub fn in_near_matchings(h: &Hypergraph, edge_set: &BitSet, s: usize) -> bool {
    let edges = edge_set.to_vec();
    if edges.is_empty() {
        return false;
    }
    let cap = (s + 1).min(edges.len());
    let mut pick = Vec::new();
    try_deletions(h, &edges, 0, cap, &mut pick)
}

fn try_deletions(
    h: &Hypergraph,
    edges: &[usize],
    from: usize,
    cap: usize,
    pick: &mut Vec<usize>,
) -> bool {
    if !pick.is_empty() {
        let rest: Vec<usize> = edges
            .iter()
            .copied()
            .filter(|e| !pick.contains(e))
            .collect();
        if is_matching_set(h, &rest) {
            return true;
        }
    }
    if pick.len() == cap {
        return false;
    }
    for idx in from..edges.len() {
        pick.push(edges[idx]);
        if try_deletions(h, edges, idx + 1, cap, pick) {
            pick.pop();
            return true;
        }
        pick.pop();
    }
    false
}

pub(crate) fn is_matching_set(h: &Hypergraph, edges: &[usize]) -> bool {
    for (i, &a) in edges.iter().enumerate() {
        for &b in &edges[i + 1..] {
            if h.edges_intersect(a, b) {
                return false;
            }
        }
    }
    true
}

/// Exact size of the near-matching family with one deletable edge: the
/// number of distinct sets `M ∪ {e}` over matchings `M` and edges `e ∉ M`.
pub fn omega_zero_count(h: &Hypergraph, states: &[Matching]) -> usize {
    let mut seen = std::collections::HashSet::new();
    for m in states {
        for e in 0..h.edge_count() {
            if !m.contains(e) {
                let mut set = m.members().to_vec();
                let pos = set.partition_point(|&x| x < e);
                set.insert(pos, e);
                seen.insert(set);
            }
        }
    }
    seen.len()
}
