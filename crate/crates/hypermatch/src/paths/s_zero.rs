//! Canonical paths for instances whose symmetric differences decompose into
//! alternating paths and cycles.
//!
//! Every component is traversed from a start edge and direction fixed by
//! vertex-label comparisons, so the path is a pure function of (I, F):
//!
//! * even path — starts at the F-endpoint; repeated swaps.
//! * odd path — oriented so the first inner junction has the smaller
//!   minimum vertex; endpoints in I start with a removal, endpoints in F
//!   end with an addition.
//! * cycle — starts at the I-edge containing the smallest I-covered vertex,
//!   oriented so the *second* junction beats the last one; removal first,
//!   swaps, one final addition.

use super::{apply_move, decompose, CanonicalPath, Component, ComponentKind, PathError, PathMove};
use crate::hypergraph::Matching;

pub fn canonical_path_s0(i: &Matching, f: &Matching) -> Result<CanonicalPath, PathError> {
    let decomposition = decompose(i, f)?;
    let mut states = vec![i.clone()];
    let mut moves = Vec::new();
    let mut venues = Vec::new();
    for (venue, comp) in decomposition.components.iter().enumerate() {
        if comp.kind == ComponentKind::General {
            return Err(PathError::GeneralComponent(venue));
        }
        let comp_moves = component_moves(i, f, comp);
        for mv in comp_moves {
            let next = apply_move(states.last().unwrap(), mv);
            states.push(next);
            moves.push(mv);
            venues.push(venue);
        }
    }
    debug_assert_eq!(states.last().unwrap(), f, "canonical path must end at F");
    Ok(CanonicalPath {
        states,
        moves,
        venues,
    })
}

fn component_moves(i: &Matching, f: &Matching, comp: &Component) -> Vec<PathMove> {
    match comp.kind {
        ComponentKind::Path => path_moves(i, f, &comp.walk),
        ComponentKind::Cycle => cycle_moves(i, f, &comp.walk),
        ComponentKind::General => unreachable!("caller rejects general components"),
    }
}

/// Minimum vertex shared by two edges of the host.
fn junction_min(m: &Matching, a: usize, b: usize) -> u32 {
    let h = m.host();
    let eb = h.edge(b);
    h.edge(a)
        .iter()
        .copied()
        .filter(|v| eb.binary_search(v).is_ok())
        .min()
        .expect("consecutive walk edges intersect")
}

fn path_moves(i: &Matching, _f: &Matching, walk: &[usize]) -> Vec<PathMove> {
    let s = walk.len();
    if s == 1 {
        let e = walk[0];
        return if i.contains(e) {
            vec![PathMove::Remove { edge: e }]
        } else {
            vec![PathMove::Add { edge: e }]
        };
    }
    let mut seq: Vec<usize> = walk.to_vec();
    if s.is_multiple_of(2) {
        // Even path: exactly one endpoint lies in F; start there.
        if i.contains(seq[0]) {
            seq.reverse();
        }
        debug_assert!(!i.contains(seq[0]) && i.contains(seq[s - 1]));
        (0..s)
            .step_by(2)
            .map(|j| PathMove::Swap {
                added: seq[j],
                removed: seq[j + 1],
            })
            .collect()
    } else {
        // Odd path: both endpoints on the same side; orient by junctions.
        let front = junction_min(i, seq[0], seq[1]);
        let back = junction_min(i, seq[s - 2], seq[s - 1]);
        debug_assert_ne!(front, back);
        if front > back {
            seq.reverse();
        }
        if i.contains(seq[0]) {
            let mut moves = vec![PathMove::Remove { edge: seq[0] }];
            moves.extend((1..s - 1).step_by(2).map(|j| PathMove::Swap {
                added: seq[j],
                removed: seq[j + 1],
            }));
            moves
        } else {
            let mut moves: Vec<PathMove> = (0..s - 2)
                .step_by(2)
                .map(|j| PathMove::Swap {
                    added: seq[j],
                    removed: seq[j + 1],
                })
                .collect();
            moves.push(PathMove::Add { edge: seq[s - 1] });
            moves
        }
    }
}

fn cycle_moves(i: &Matching, _f: &Matching, walk: &[usize]) -> Vec<PathMove> {
    let s = walk.len();
    let host = i.host();
    // Start edge: the I-edge containing the smallest vertex covered by I
    // within the component.
    let (start_pos, _) = walk
        .iter()
        .enumerate()
        .filter(|(_, &e)| i.contains(e))
        .map(|(pos, &e)| (pos, host.edge(e)[0]))
        .min_by_key(|&(_, min_v)| min_v)
        .expect("a cycle alternates, so it has an I-edge");
    // Two directions around the cycle from the start edge.
    let forward: Vec<usize> = (0..s).map(|o| walk[(start_pos + o) % s]).collect();
    let backward: Vec<usize> = (0..s).map(|o| walk[(start_pos + s - o) % s]).collect();
    let pick = |seq: &Vec<usize>| -> bool {
        junction_min(i, seq[1], seq[2]) > junction_min(i, seq[s - 2], seq[s - 1])
    };
    let seq = if pick(&forward) {
        forward
    } else {
        debug_assert!(pick(&backward), "exactly one direction satisfies the rule");
        backward
    };
    let mut moves = vec![PathMove::Remove { edge: seq[0] }];
    moves.extend((1..s - 2).step_by(2).map(|j| PathMove::Swap {
        added: seq[j],
        removed: seq[j + 1],
    }));
    moves.push(PathMove::Add { edge: seq[s - 1] });
    moves
}
