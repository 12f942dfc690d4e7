//! Canonical paths via Euler tours, usable on any instance.
//!
//! Each component of I⊕F is replaced by a skeleton multigraph: every
//! hyperedge contributes a graph cycle through its vertices in sorted
//! order, so skeleton degrees are 2 or 4 and an Eulerian circuit exists.
//! The circuit starts at the component's smallest vertex; the first edge
//! leaves along the I-side hyperedge toward its smaller neighbor (or along
//! the unique incident hyperedge at degree-2 starts), and later choices
//! always take the smallest-labeled unused neighbor. Walking the tour,
//! an I-edge is removed when first met and still present, and an F-edge is
//! installed by deleting its current conflicts in increasing-minimum order
//! and swapping in the edge against the last of them.

use std::collections::HashMap;

use super::{apply_move, decompose, CanonicalPath, Component, PathError, PathMove};
use crate::hypergraph::{Hypergraph, Matching};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkeletonEdge {
    pub a: u32,
    pub b: u32,
    /// Index of the hyperedge whose cycle produced this edge.
    pub hyperedge: usize,
}

/// Skeleton multigraph of one component: per hyperedge, the cycle
/// v(1)–v(2)–…–v(k)–v(1) over its sorted vertices.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub edges: Vec<SkeletonEdge>,
    /// Incident skeleton-edge indices per vertex label.
    incidence: HashMap<u32, Vec<usize>>,
}

impl Skeleton {
    pub fn degree(&self, v: u32) -> usize {
        self.incidence.get(&v).map_or(0, |l| l.len())
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        let mut vs: Vec<u32> = self.incidence.keys().copied().collect();
        vs.sort_unstable();
        vs.into_iter()
    }

    fn incident(&self, v: u32) -> &[usize] {
        self.incidence.get(&v).map_or(&[], |l| l.as_slice())
    }
}

/// Builds the skeleton of the hyperedges in `component_edges`.
pub fn skeleton(h: &Hypergraph, component_edges: &[usize]) -> Skeleton {
    let mut edges = Vec::new();
    let mut incidence: HashMap<u32, Vec<usize>> = HashMap::new();
    for &hid in component_edges {
        let verts = h.edge(hid);
        let k = verts.len();
        for i in 0..k {
            let a = verts[i];
            let b = verts[(i + 1) % k];
            let idx = edges.len();
            edges.push(SkeletonEdge { a, b, hyperedge: hid });
            incidence.entry(a).or_default().push(idx);
            incidence.entry(b).or_default().push(idx);
        }
    }
    Skeleton { edges, incidence }
}

/// A directed traversal step of the tour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TourStep {
    pub from: u32,
    pub to: u32,
    pub hyperedge: usize,
}

/// Deterministic Eulerian circuit of a component skeleton.
///
/// All skeleton degrees are even, so a circuit exists; the start vertex is
/// the smallest label, the first edge follows the direction rules above,
/// and every later choice is the unused edge with the smallest
/// (neighbor, hyperedge, construction index) key. Exhausted sub-circuits
/// are spliced in at the first tour position that still has unused edges.
pub fn euler_tour(s: &Skeleton, i: &Matching, f: &Matching) -> Vec<TourStep> {
    if s.edges.is_empty() {
        return Vec::new();
    }
    let v0 = s.vertices().next().expect("skeleton has vertices");
    let first = first_edge(s, i, f, v0);
    let mut used = vec![false; s.edges.len()];
    let mut tour = walk_greedy(s, v0, Some(first), &mut used);
    // Splice sub-circuits until every skeleton edge is used.
    while used.iter().any(|&u| !u) {
        let pos = tour
            .iter()
            .position(|st| s.incident(st.from).iter().any(|&e| !used[e]))
            .expect("skeleton is connected, so some tour vertex has unused edges");
        let sub = walk_greedy(s, tour[pos].from, None, &mut used);
        let tail = tour.split_off(pos);
        tour.extend(sub);
        tour.extend(tail);
    }
    tour
}

/// The pinned first edge out of the start vertex.
fn first_edge(s: &Skeleton, i: &Matching, _f: &Matching, v0: u32) -> usize {
    let incident = s.incident(v0);
    // Hyperedges at v0; at degree 4 there are two (one per side), at
    // degree 2 just one.
    let mut hyperedges: Vec<usize> = incident.iter().map(|&e| s.edges[e].hyperedge).collect();
    hyperedges.sort_unstable();
    hyperedges.dedup();
    let guide = if hyperedges.len() == 2 {
        // Leave along the I-side hyperedge.
        *hyperedges
            .iter()
            .find(|&&hid| i.contains(hid))
            .expect("a degree-4 vertex lies in one I-edge and one F-edge")
    } else {
        hyperedges[0]
    };
    *incident
        .iter()
        .filter(|&&e| s.edges[e].hyperedge == guide)
        .min_by_key(|&&e| other_end(&s.edges[e], v0))
        .expect("the guiding hyperedge is incident to v0")
}

fn other_end(e: &SkeletonEdge, from: u32) -> u32 {
    if e.a == from {
        e.b
    } else {
        e.a
    }
}

/// Greedy closed walk from `start`, marking edges used; with all degrees
/// even it can only get stuck back at `start`.
fn walk_greedy(
    s: &Skeleton,
    start: u32,
    forced_first: Option<usize>,
    used: &mut [bool],
) -> Vec<TourStep> {
    let mut steps = Vec::new();
    let mut current = start;
    let mut forced = forced_first;
    loop {
        let choice = match forced.take() {
            Some(e) => Some(e),
            None => s
                .incident(current)
                .iter()
                .copied()
                .filter(|&e| !used[e])
                .min_by_key(|&e| (other_end(&s.edges[e], current), s.edges[e].hyperedge, e)),
        };
        match choice {
            Some(e) => {
                used[e] = true;
                let to = other_end(&s.edges[e], current);
                steps.push(TourStep {
                    from: current,
                    to,
                    hyperedge: s.edges[e].hyperedge,
                });
                current = to;
            }
            None => {
                debug_assert_eq!(current, start, "even degrees close the walk");
                return steps;
            }
        }
    }
}

/// The Euler-tour canonical path. Works for any decomposition; on
/// path/cycle components it usually (but not always) reproduces the
/// alternating construction.
pub fn canonical_path_general(i: &Matching, f: &Matching) -> Result<CanonicalPath, PathError> {
    let decomposition = decompose(i, f)?;
    let mut states = vec![i.clone()];
    let mut moves = Vec::new();
    let mut venues = Vec::new();
    for (venue, comp) in decomposition.components.iter().enumerate() {
        trace_component(i, f, comp, venue, &mut states, &mut moves, &mut venues);
    }
    debug_assert_eq!(states.last().unwrap(), f, "canonical path must end at F");
    Ok(CanonicalPath {
        states,
        moves,
        venues,
    })
}

fn trace_component(
    i: &Matching,
    f: &Matching,
    comp: &Component,
    venue: usize,
    states: &mut Vec<Matching>,
    moves: &mut Vec<PathMove>,
    venues: &mut Vec<usize>,
) {
    let host = i.host();
    let skel = skeleton(host, &comp.edges);
    let tour = euler_tour(&skel, i, f);
    let mut push = |mv: PathMove, states: &mut Vec<Matching>| {
        let next = apply_move(states.last().unwrap(), mv);
        states.push(next);
        moves.push(mv);
        venues.push(venue);
    };
    for step in tour {
        let hid = step.hyperedge;
        let current = states.last().unwrap().clone();
        if i.contains(hid) {
            // I-side rule: remove if still present.
            if current.contains(hid) {
                push(PathMove::Remove { edge: hid }, states);
            }
        } else {
            debug_assert!(f.contains(hid));
            if current.contains(hid) {
                continue;
            }
            // F-side rule: clear the conflicts in increasing-minimum order,
            // swapping the edge in against the last one.
            let mut hitters = current.intersecting_members(hid);
            hitters.sort_by_key(|&e| host.edge(e)[0]);
            match hitters.split_last() {
                None => push(PathMove::Add { edge: hid }, states),
                Some((&last, rest)) => {
                    for &r in rest {
                        push(PathMove::Remove { edge: r }, states);
                    }
                    push(
                        PathMove::Swap {
                            added: hid,
                            removed: last,
                        },
                        states,
                    );
                }
            }
        }
    }
}
