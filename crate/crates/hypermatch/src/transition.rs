//! The explicit transition structure of the matching chain on enumerable
//! instances, with exact and floating probability views.
//!
//! Off-diagonal transition probabilities are all `1/(2m)`, so the graph
//! stores adjacency lists and derives probabilities on demand in any
//! [`Prob`] scalar. `distribution_after` and `tv_distance` are generic for
//! the same reason: exact rational runs certify stationarity, `f64` runs
//! trace long total-variation curves.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::hypergraph::{Hypergraph, Matching};
use crate::oracle::{enumerate_matchings_with_limit, GuardError};
use crate::scalar::Prob;

pub const DEFAULT_MAX_TRANSITION_STATES: usize = 5000;
pub const DEFAULT_MAX_CONDUCTANCE_STATES: usize = 22;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransitionError {
    #[error(transparent)]
    Guard(#[from] GuardError),
    #[error("state space has {0} states; need at least 2")]
    TooFewStates(usize),
    #[error("distribution lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("distribution does not sum to 1 within 1e-12")]
    NotNormalized,
}

/// All matchings of a hypergraph together with the chain's one-step
/// adjacency. State order is canonical (size, then lexicographic members).
pub struct TransitionGraph {
    states: Vec<Matching>,
    neighbors: Vec<Vec<usize>>,
    edge_count: usize,
    index: HashMap<Vec<usize>, usize>,
}

impl TransitionGraph {
    pub fn build(h: &Arc<Hypergraph>) -> Result<Self, TransitionError> {
        Self::build_with_limit(h, DEFAULT_MAX_TRANSITION_STATES)
    }

    pub fn build_with_limit(
        h: &Arc<Hypergraph>,
        max_states: usize,
    ) -> Result<Self, TransitionError> {
        let states = enumerate_matchings_with_limit(h, max_states)?;
        let index: HashMap<Vec<usize>, usize> = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members().to_vec(), i))
            .collect();
        let m = h.edge_count();
        let mut neighbors = Vec::with_capacity(states.len());
        for state in &states {
            let mut row = Vec::new();
            for edge in 0..m {
                let target = if state.contains(edge) {
                    state.without_edge(edge)
                } else {
                    let hit = state.intersecting_members(edge);
                    match hit.len() {
                        0 => state.with_edge(edge),
                        1 => state.without_edge(hit[0]).with_edge(edge),
                        _ => continue, // null move, stays in place
                    }
                };
                let j = index[target.members()];
                debug_assert!(!row.contains(&j), "two edges reach the same target");
                row.push(j);
            }
            row.sort_unstable();
            neighbors.push(row);
        }
        Ok(TransitionGraph {
            states,
            neighbors,
            edge_count: m,
            index,
        })
    }

    /// Wraps a hand-built adjacency (synthetic chains in tests and
    /// diagnostics). `edge_count` fixes the off-diagonal probability 1/(2m).
    pub fn from_parts(
        states: Vec<Matching>,
        neighbors: Vec<Vec<usize>>,
        edge_count: usize,
    ) -> Self {
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members().to_vec(), i))
            .collect();
        TransitionGraph {
            states,
            neighbors,
            edge_count,
            index,
        }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Matching] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &Matching {
        &self.states[i]
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn state_index(&self, m: &Matching) -> Option<usize> {
        self.index.get(m.members()).copied()
    }

    pub fn state_index_of_members(&self, members: &[usize]) -> Option<usize> {
        self.index.get(members).copied()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.neighbors[i].binary_search(&j).is_ok()
    }

    /// Transition probability in scalar `S`; off-diagonals are 0 or 1/(2m),
    /// the diagonal carries the lazy half plus all null moves. An edgeless
    /// instance has the single absorbing empty state.
    pub fn prob<S: Prob>(&self, i: usize, j: usize) -> S {
        let two_m = 2 * self.edge_count as u64;
        if two_m == 0 {
            return S::from_ratio(u64::from(i == j), 1);
        }
        if i == j {
            let deg = self.degree(i) as u64;
            S::from_ratio(two_m - deg, two_m)
        } else if self.adjacent(i, j) {
            S::from_ratio(1, two_m)
        } else {
            S::from_ratio(0, 1)
        }
    }

    pub fn row_sum<S: Prob>(&self, i: usize) -> S {
        let mut sum = self.prob::<S>(i, i);
        for &j in &self.neighbors[i] {
            sum = sum + self.prob::<S>(i, j);
        }
        sum
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.state_count())
            .all(|i| self.neighbors[i].iter().all(|&j| self.adjacent(j, i)))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.state_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.neighbors[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// Exact distribution after `t` steps from the point mass at `start`.
    pub fn distribution_after<S: Prob>(&self, t: u64, start: usize) -> Vec<S> {
        let n = self.state_count();
        let mut v: Vec<S> = (0..n).map(|_| S::from_ratio(0, 1)).collect();
        v[start] = S::from_ratio(1, 1);
        for _ in 0..t {
            v = self.step_distribution(&v);
        }
        v
    }

    /// One multiplication of a row distribution by the transition kernel.
    pub fn step_distribution<S: Prob>(&self, v: &[S]) -> Vec<S> {
        let n = self.state_count();
        let two_m = 2 * self.edge_count as u64;
        if two_m == 0 {
            return v.to_vec();
        }
        let off = S::from_ratio(1, two_m);
        let mut out: Vec<S> = (0..n)
            .map(|j| {
                let deg = self.degree(j) as u64;
                v[j].clone() * S::from_ratio(two_m - deg, two_m)
            })
            .collect();
        for (i, mass) in v.iter().enumerate() {
            for &j in &self.neighbors[i] {
                out[j] = out[j].clone() + mass.clone() * off.clone();
            }
        }
        out
    }

    pub fn uniform<S: Prob>(&self) -> Vec<S> {
        let n = self.state_count() as u64;
        (0..n).map(|_| S::from_ratio(1, n)).collect()
    }
}

/// Total variation distance `(1/2)·Σ|p_i − q_i|`.
///
/// Both arguments must be distributions (length match, sums within 1e-12
/// of one).
pub fn tv_distance<S: Prob>(p: &[S], q: &[S]) -> Result<S, TransitionError> {
    if p.len() != q.len() {
        return Err(TransitionError::LengthMismatch(p.len(), q.len()));
    }
    let tol = S::from_ratio(1, 1_000_000_000_000);
    for dist in [p, q] {
        let mut sum = S::from_ratio(0, 1);
        for x in dist {
            sum = sum + x.clone();
        }
        if (sum - S::from_ratio(1, 1)).abs() > tol {
            return Err(TransitionError::NotNormalized);
        }
    }
    let mut acc = S::from_ratio(0, 1);
    for (a, b) in p.iter().zip(q) {
        acc = acc + (a.clone() - b.clone()).abs();
    }
    Ok(acc / S::from_ratio(2, 1))
}

/// Exact conductance by subset enumeration.
#[derive(Debug, Clone)]
pub struct Conductance {
    pub phi: BigRational,
    pub phi_f64: f64,
    /// Lexicographically-first minimizing state set.
    pub min_cut: Vec<usize>,
}

/// Minimum over state sets `S` with `0 < |S| ≤ |Ω|/2` of the cut probability
/// mass divided by `|S|`. Enumeration is `2^|Ω|`, hence the small guard.
pub fn conductance_exact(
    t: &TransitionGraph,
    max_states: usize,
) -> Result<Conductance, TransitionError> {
    let n = t.state_count();
    if n < 2 {
        return Err(TransitionError::TooFewStates(n));
    }
    if n > max_states {
        return Err(GuardError::Exceeded {
            what: "states",
            size: n,
            limit: max_states,
        }
        .into());
    }
    let nbr_masks: Vec<u32> = (0..n)
        .map(|i| t.neighbors(i).iter().fold(0u32, |acc, &j| acc | 1 << j))
        .collect();
    let two_m = 2 * t.edge_count() as u64;
    let mut best: Option<(BigRational, Vec<usize>)> = None;
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if 2 * size > n {
            continue;
        }
        let mut cut_edges = 0u64;
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            cut_edges += (nbr_masks[i] & !mask).count_ones() as u64;
        }
        let phi = BigRational::new(cut_edges.into(), (two_m * size as u64).into());
        let better = match &best {
            None => true,
            Some((bp, bs)) => {
                phi < *bp || (phi == *bp && mask_to_vec(mask) < *bs)
            }
        };
        if better {
            best = Some((phi, mask_to_vec(mask)));
        }
    }
    let (phi, min_cut) = best.expect("n >= 2 yields at least one candidate");
    let phi_f64 = phi.to_f64_lossy();
    Ok(Conductance {
        phi,
        phi_f64,
        min_cut,
    })
}

fn mask_to_vec(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn graph(text: &str) -> (Arc<Hypergraph>, TransitionGraph) {
        let h = Arc::new(Hypergraph::parse(text).unwrap());
        let t = TransitionGraph::build(&h).unwrap();
        (h, t)
    }

    #[test]
    fn single_edge_kernel() {
        let (_, t) = graph("3 1 3\n1 2 3\n");
        assert_eq!(t.state_count(), 2);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(t.prob::<BigRational>(0, 1), half);
        assert_eq!(t.prob::<BigRational>(1, 0), half);
        assert_eq!(t.prob::<BigRational>(0, 0), half);
        assert_eq!(t.prob::<BigRational>(1, 1), half);
    }

    #[test]
    fn intersecting_pair_kernel() {
        // Two edges sharing a vertex: states {}, {0}, {1}; m = 2.
        let (_, t) = graph("5 2 3\n1 2 3\n3 4 5\n");
        assert_eq!(t.state_count(), 3);
        let quarter = BigRational::new(1.into(), 4.into());
        assert_eq!(t.prob::<BigRational>(0, 1), quarter);
        // Swap between the two singletons.
        assert_eq!(t.prob::<BigRational>(1, 2), quarter);
        assert_eq!(
            t.prob::<BigRational>(1, 1),
            BigRational::new(1.into(), 2.into())
        );
    }

    #[test]
    fn rows_sum_to_one_and_symmetric() {
        for text in [
            "3 1 3\n1 2 3\n",
            "6 2 3\n1 2 3\n4 5 6\n",
            "9 4 3\n1 2 3\n4 5 6\n7 8 9\n3 4 7\n",
            "4 3 2\n1 2\n2 3\n3 4\n",
        ] {
            let (_, t) = graph(text);
            assert!(t.is_symmetric());
            assert!(t.is_connected());
            for i in 0..t.state_count() {
                assert!(t.row_sum::<BigRational>(i).is_one());
                assert!(
                    t.prob::<BigRational>(i, i) >= BigRational::new(1.into(), 2.into()),
                    "lazy diagonal"
                );
            }
            // Uniform is exactly stationary.
            let u = t.uniform::<BigRational>();
            assert_eq!(t.step_distribution(&u), u);
        }
    }

    #[test]
    fn distribution_evolution() {
        let (_, t) = graph("3 1 3\n1 2 3\n");
        let start = t
            .state_index(&Matching::empty(t.state(0).host().clone()))
            .unwrap();
        let d0 = t.distribution_after::<BigRational>(0, start);
        assert!(d0[start].is_one());
        let d1 = t.distribution_after::<BigRational>(1, start);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(d1, vec![half.clone(), half]);
    }

    #[test]
    fn tv_distance_basics() {
        let p = vec![0.7, 0.3];
        let q = vec![0.5, 0.5];
        assert!((tv_distance(&p, &q).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
        // Point mass against uniform on N states: 1 - 1/N.
        let point = vec![1.0, 0.0, 0.0, 0.0];
        let unif = vec![0.25; 4];
        assert!((tv_distance(&point, &unif).unwrap() - 0.75).abs() < 1e-15);
        assert!(matches!(
            tv_distance(&p, &unif),
            Err(TransitionError::LengthMismatch(2, 4))
        ));
        assert!(matches!(
            tv_distance(&[0.5, 0.4], &[0.5, 0.5]),
            Err(TransitionError::NotNormalized)
        ));
    }

    /// Evolving the exact chain for the number of steps the conductance
    /// bound prescribes lands within 1e-6 of uniform.
    #[test]
    fn distribution_reaches_uniform_within_bound() {
        use crate::chain::mixing_bound;
        for text in [
            "5 2 3\n1 2 3\n3 4 5\n",
            "9 4 3\n1 2 3\n4 5 6\n7 8 9\n3 4 7\n",
            "4 3 2\n1 2\n2 3\n3 4\n",
        ] {
            let (_, t) = graph(text);
            let c = conductance_exact(&t, 22).unwrap();
            let steps = mixing_bound(c.phi_f64, t.state_count(), 1e-6).unwrap();
            let dist = t.distribution_after::<f64>(steps, 0);
            let tv = tv_distance(&dist, &t.uniform::<f64>()).unwrap();
            assert!(tv <= 1e-6, "{text}: tv {tv} after {steps} steps");
        }
    }

    #[test]
    fn conductance_two_states() {
        let (_, t) = graph("3 1 3\n1 2 3\n");
        let c = conductance_exact(&t, 22).unwrap();
        assert_eq!(c.phi, BigRational::new(1.into(), 2.into()));
        assert_eq!(c.min_cut, vec![0]);
    }

    #[test]
    fn conductance_disconnected_is_zero() {
        // Synthetic two-component chain.
        let h = Arc::new(Hypergraph::parse("6 2 3\n1 2 3\n4 5 6\n").unwrap());
        let states = enumerate_matchings_with_limit(&h, 100).unwrap();
        let t = TransitionGraph::from_parts(states, vec![vec![1], vec![0], vec![3], vec![2]], 2);
        let c = conductance_exact(&t, 22).unwrap();
        assert!(c.phi.is_zero());
        assert_eq!(c.min_cut, vec![0, 1]);
    }

    use crate::oracle::enumerate_matchings_with_limit;
}
