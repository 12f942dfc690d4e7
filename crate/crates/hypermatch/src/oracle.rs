//! Exact ground truth for small instances: matching counts and full
//! enumeration.
//!
//! Two independent algorithms cover the same quantity. `count_matchings`
//! recurses on "first surviving edge in / out" with memoization on the
//! surviving edge set; `enumerate_matchings` backtracks over increasing edge
//! indices and never consults the counter. Both are exponential by design
//! and guarded.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::hypergraph::{Hypergraph, Matching};

pub const DEFAULT_MAX_COUNT_EDGES: usize = 64;
pub const DEFAULT_MAX_ENUMERATION: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GuardError {
    #[error("instance too large: {size} {what} exceeds guard {limit}")]
    Exceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
}

/// Exact |Ω(H)|, the number of matchings including the empty one.
pub fn count_matchings(h: &Hypergraph) -> Result<BigUint, GuardError> {
    count_matchings_with_limit(h, DEFAULT_MAX_COUNT_EDGES)
}

pub fn count_matchings_with_limit(
    h: &Hypergraph,
    max_edges: usize,
) -> Result<BigUint, GuardError> {
    let m = h.edge_count();
    if m > max_edges {
        return Err(GuardError::Exceeded {
            what: "edges",
            size: m,
            limit: max_edges,
        });
    }
    // conflicts[e] = edges intersecting e, including e itself.
    let mut conflicts = Vec::with_capacity(m);
    for e in 0..m {
        let mut c = BitSet::new(m);
        c.insert(e);
        for f in 0..m {
            if f != e && h.edges_intersect(e, f) {
                c.insert(f);
            }
        }
        conflicts.push(c);
    }
    let mut surviving = BitSet::new(m);
    for e in 0..m {
        surviving.insert(e);
    }
    let mut memo: HashMap<BitSet, BigUint> = HashMap::new();
    Ok(count_rec(&surviving, &conflicts, &mut memo))
}

fn count_rec(
    surviving: &BitSet,
    conflicts: &[BitSet],
    memo: &mut HashMap<BitSet, BigUint>,
) -> BigUint {
    let pivot = match surviving.iter().next() {
        Some(e) => e,
        None => return BigUint::one(),
    };
    if let Some(v) = memo.get(surviving) {
        return v.clone();
    }
    // Matchings avoiding the pivot edge...
    let mut without = surviving.clone();
    without.remove(pivot);
    let skip = count_rec(&without, conflicts, memo);
    // ...plus those using it (drop everything the pivot touches).
    let mut used = surviving.clone();
    used.difference_with(&conflicts[pivot]);
    let take = count_rec(&used, conflicts, memo);
    let total = skip + take;
    memo.insert(surviving.clone(), total.clone());
    total
}

/// All matchings of `h`, ordered by size then lexicographic member list.
pub fn enumerate_matchings(h: &Arc<Hypergraph>) -> Result<Vec<Matching>, GuardError> {
    enumerate_matchings_with_limit(h, DEFAULT_MAX_ENUMERATION)
}

pub fn enumerate_matchings_with_limit(
    h: &Arc<Hypergraph>,
    max_states: usize,
) -> Result<Vec<Matching>, GuardError> {
    let m = h.edge_count();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut covered = BitSet::new(h.vertex_count() as usize);
    backtrack(h, 0, m, &mut stack, &mut covered, &mut out, max_states)?;
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out
        .into_iter()
        .map(|members| {
            Matching::from_members(h.clone(), members).expect("enumeration yields matchings")
        })
        .collect())
}

fn backtrack(
    h: &Hypergraph,
    from: usize,
    m: usize,
    stack: &mut Vec<usize>,
    covered: &mut BitSet,
    out: &mut Vec<Vec<usize>>,
    max_states: usize,
) -> Result<(), GuardError> {
    if out.len() >= max_states {
        return Err(GuardError::Exceeded {
            what: "matchings",
            size: out.len() + 1,
            limit: max_states,
        });
    }
    out.push(stack.clone());
    for e in from..m {
        let mask = h.edge_mask(e);
        if covered.intersects(mask) {
            continue;
        }
        stack.push(e);
        covered.union_with(mask);
        backtrack(h, e + 1, m, stack, covered, out, max_states)?;
        stack.pop();
        covered.difference_with(mask);
    }
    Ok(())
}
