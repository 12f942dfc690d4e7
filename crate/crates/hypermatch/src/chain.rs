//! The lazy Metropolis chain on matchings, plus the analytic mixing-time
//! calculators.
//!
//! One step: flip the lazy coin; if active, draw an edge `h` uniformly from
//! all `m` edges and apply the unique applicable move — remove `h` if it is
//! a member, add it if it conflicts with nothing, swap it for its unique
//! conflicting member, or hold when it conflicts with two or more members.
//! The coin is flipped before the edge is drawn; the order is invisible in
//! the kernel but fixes traces.

use std::sync::Arc;

use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::hypergraph::{Hypergraph, Matching};
use crate::rng::{run_rng, ChainRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Remove,
    Add,
    Swap,
    Null,
    Lazy,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Remove => "remove",
            StepKind::Add => "add",
            StepKind::Swap => "swap",
            StepKind::Null => "null",
            StepKind::Lazy => "lazy",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub next: Matching,
    pub kind: StepKind,
    pub chosen_edge: Option<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct ChainParams {
    /// Number of steps to take (the chain starts at the empty matching).
    pub steps: u64,
    pub seed: u64,
    pub record_trace: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceStep {
    pub step: u64,
    pub kind: StepKind,
    pub chosen_edge: Option<usize>,
}

#[derive(Debug)]
pub struct RunResult {
    pub final_state: Matching,
    pub trace: Option<Vec<TraceStep>>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ChainError {
    #[error("hypergraph has no edges")]
    EmptyHypergraph,
    #[error("parameter {name} out of range: {value}")]
    ParamRange { name: &'static str, value: f64 },
    #[error("step bound overflows u64: about 1e{exp:.1}")]
    StepOverflow { exp: f64 },
}

/// Mutable chain state for long runs: the sorted member list plus its
/// covered-vertex mask, updated in place so a step never allocates.
#[derive(Debug, Clone)]
pub struct ChainState {
    members: Vec<usize>,
    covered: BitSet,
}

impl ChainState {
    pub fn empty(h: &Hypergraph) -> Self {
        ChainState {
            members: Vec::new(),
            covered: BitSet::new(h.vertex_count() as usize),
        }
    }

    pub fn of_matching(m: &Matching) -> Self {
        ChainState {
            members: m.members().to_vec(),
            covered: m.covered().clone(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Reuses allocations when resetting to a fixed state.
    pub fn clone_from_state(&mut self, other: &ChainState) {
        self.members.clear();
        self.members.extend_from_slice(&other.members);
        self.covered = other.covered.clone();
    }

    pub fn into_matching(self, host: Arc<Hypergraph>) -> Matching {
        Matching::from_members(host, self.members).expect("chain states are matchings")
    }

    fn remove(&mut self, h: &Hypergraph, edge: usize) {
        let pos = self.members.binary_search(&edge).expect("member to remove");
        self.members.remove(pos);
        // Members are disjoint, so the edge's vertices are exactly its own.
        self.covered.difference_with(h.edge_mask(edge));
    }

    fn insert(&mut self, h: &Hypergraph, edge: usize) {
        let pos = self.members.partition_point(|&f| f < edge);
        self.members.insert(pos, edge);
        self.covered.union_with(h.edge_mask(edge));
    }
}

/// One transition applied in place; returns the kind and the drawn edge.
pub fn step_in_place(
    h: &Hypergraph,
    state: &mut ChainState,
    rng: &mut ChainRng,
) -> (StepKind, Option<usize>) {
    if rng.random_bool(0.5) {
        return (StepKind::Lazy, None);
    }
    let edge_total = h.edge_count();
    if edge_total == 0 {
        // No edge to draw; the active branch cannot move.
        return (StepKind::Null, None);
    }
    let chosen = rng.random_range(0..edge_total);
    if state.members.binary_search(&chosen).is_ok() {
        state.remove(h, chosen);
        return (StepKind::Remove, Some(chosen));
    }
    let mask = h.edge_mask(chosen);
    if !state.covered.intersects(mask) {
        state.insert(h, chosen);
        return (StepKind::Add, Some(chosen));
    }
    let mut hit = None;
    for &f in &state.members {
        if h.edge_mask(f).intersects(mask) {
            if hit.is_some() {
                return (StepKind::Null, Some(chosen));
            }
            hit = Some(f);
        }
    }
    let victim = hit.expect("covered mask intersected, so some member conflicts");
    state.remove(h, victim);
    state.insert(h, chosen);
    (StepKind::Swap, Some(chosen))
}

/// One transition of the chain from state `m`.
pub fn step(m: &Matching, rng: &mut ChainRng) -> StepOutcome {
    debug_assert!(valid_matching(m));
    let mut state = ChainState::of_matching(m);
    let (kind, chosen_edge) = step_in_place(m.host(), &mut state, rng);
    StepOutcome {
        next: state.into_matching(m.host().clone()),
        kind,
        chosen_edge,
    }
}

fn valid_matching(m: &Matching) -> bool {
    let members = m.members();
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            if m.host().edges_intersect(a, b) {
                return false;
            }
        }
    }
    true
}

/// Runs the chain from the empty matching for `params.steps` steps.
pub fn run(h: &Arc<Hypergraph>, params: &ChainParams) -> RunResult {
    let mut rng = run_rng(params.seed);
    run_with_rng(h, params.steps, &mut rng, params.record_trace)
}

pub fn run_with_rng(
    h: &Arc<Hypergraph>,
    steps: u64,
    rng: &mut ChainRng,
    record_trace: bool,
) -> RunResult {
    let mut state = ChainState::empty(h);
    let mut trace = record_trace.then(Vec::new);
    for t in 0..steps {
        let (kind, chosen_edge) = step_in_place(h, &mut state, rng);
        if let Some(tr) = trace.as_mut() {
            tr.push(TraceStep {
                step: t,
                kind,
                chosen_edge,
            });
        }
    }
    RunResult {
        final_state: state.into_matching(h.clone()),
        trace,
    }
}

/// Minimum nonzero transition probability, `1/(2m)`.
pub fn p_min(h: &Hypergraph) -> Result<BigRational, ChainError> {
    let m = h.edge_count() as u64;
    if m == 0 {
        return Err(ChainError::EmptyHypergraph);
    }
    Ok(BigRational::new(1.into(), (2 * m).into()))
}

/// Total-variation bound `|Ω|²·(1 − Φ²/2)^t`. May exceed 1 at small `t`.
pub fn tv_bound(phi: f64, omega: usize, t: u64) -> Result<f64, ChainError> {
    check_phi_omega(phi, omega)?;
    let base = 1.0 - phi * phi / 2.0;
    Ok((omega as f64).powi(2) * base.powf(t as f64))
}

/// Steps sufficient for total variation at most `eps`:
/// `ceil((2/Φ²)·(2·ln|Ω| + ln(1/eps)))`.
pub fn mixing_bound(phi: f64, omega: usize, eps: f64) -> Result<u64, ChainError> {
    check_phi_omega(phi, omega)?;
    if !(0.0 < eps && eps < 1.0) {
        return Err(ChainError::ParamRange {
            name: "eps",
            value: eps,
        });
    }
    let raw = mixing_bound_raw(phi, (omega as f64).ln(), eps);
    if raw >= u64::MAX as f64 {
        return Err(ChainError::StepOverflow { exp: raw.log10() });
    }
    Ok(raw.ceil() as u64)
}

/// The same bound with `ln|Ω|` supplied directly, for state spaces whose
/// size only exists as a logarithm. Returns the unrounded value.
pub fn mixing_bound_raw(phi: f64, ln_omega: f64, eps: f64) -> f64 {
    (2.0 / (phi * phi)) * (2.0 * ln_omega + (1.0 / eps).ln())
}

fn check_phi_omega(phi: f64, omega: usize) -> Result<(), ChainError> {
    if !(0.0 < phi && phi <= 1.0) {
        return Err(ChainError::ParamRange {
            name: "phi",
            value: phi,
        });
    }
    if omega < 2 {
        return Err(ChainError::ParamRange {
            name: "omega",
            value: omega as f64,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::corpus_rng;
    use crate::transition::TransitionGraph;
    use rayon::prelude::*;

    fn host(text: &str) -> Arc<Hypergraph> {
        Arc::new(Hypergraph::parse(text).unwrap())
    }

    #[test]
    fn add_from_empty() {
        let h = host("3 1 3\n1 2 3\n");
        let empty = Matching::empty(h);
        let mut rng = run_rng(11);
        loop {
            let out = step(&empty, &mut rng);
            match out.kind {
                StepKind::Lazy => continue,
                StepKind::Add => {
                    assert_eq!(out.next.members(), &[0]);
                    break;
                }
                other => panic!("unexpected kind {other:?} from empty state"),
            }
        }
    }

    #[test]
    fn swap_on_intersecting_pair() {
        let h = host("5 2 3\n1 2 3\n3 4 5\n");
        let m = Matching::from_members(h, [0]).unwrap();
        let mut rng = run_rng(3);
        loop {
            let out = step(&m, &mut rng);
            if out.chosen_edge == Some(1) {
                assert_eq!(out.kind, StepKind::Swap);
                assert_eq!(out.next.members(), &[1]);
                break;
            }
        }
    }

    #[test]
    fn null_when_two_conflicts() {
        // Inside the comb: members {1,2,3} and {7,8,9}; edge {3,4,7} hits both.
        let h = host("9 4 3\n1 2 3\n4 5 6\n7 8 9\n3 4 7\n");
        let m = Matching::from_members(h, [0, 3]).unwrap();
        let mut rng = run_rng(5);
        loop {
            let out = step(&m, &mut rng);
            if out.chosen_edge == Some(1) {
                assert_eq!(out.kind, StepKind::Null);
                assert_eq!(out.next, m);
                break;
            }
        }
    }

    #[test]
    fn run_is_deterministic_and_handles_no_edges() {
        let empty = Arc::new(Hypergraph::new(4, 2, Vec::<Vec<u32>>::new()).unwrap());
        let params = ChainParams {
            steps: 50,
            seed: 9,
            record_trace: false,
        };
        assert!(run(&empty, &params).final_state.is_empty());

        let h = host("9 4 3\n1 2 3\n4 5 6\n7 8 9\n3 4 7\n");
        let params = ChainParams {
            steps: 1000,
            seed: 42,
            record_trace: true,
        };
        let a = run(&h, &params);
        let b = run(&h, &params);
        assert_eq!(a.final_state, b.final_state);
        let ta = a.trace.unwrap();
        let tb = b.trace.unwrap();
        assert_eq!(ta.len(), 1000);
        assert!(ta
            .iter()
            .zip(&tb)
            .all(|(x, y)| x.kind == y.kind && x.chosen_edge == y.chosen_edge));
    }

    /// Long-run occupation of the 1-edge chain: the stationary law is
    /// uniform on two states, so over many independent runs the final state
    /// is the single edge about half the time.
    #[test]
    fn single_edge_equidistribution() {
        let h = host("3 1 3\n1 2 3\n");
        let runs = 10_000u64;
        let hits: u64 = (0..runs)
            .into_par_iter()
            .map(|seed| {
                let params = ChainParams {
                    steps: 10_000,
                    seed,
                    record_trace: false,
                };
                u64::from(!run(&h, &params).final_state.is_empty())
            })
            .sum();
        let frac = hits as f64 / runs as f64;
        assert!((frac - 0.5).abs() < 0.02, "fraction {frac}");
    }

    /// Empirical one-step frequencies against the analytic kernel, every
    /// state of a 3-state instance.
    #[test]
    fn kernel_fidelity_smoke() {
        let h = host("5 2 3\n1 2 3\n3 4 5\n");
        let t = TransitionGraph::build(&h).unwrap();
        let trials = 200_000u64;
        for i in 0..t.state_count() {
            let state = t.state(i).clone();
            let mut rng = corpus_rng(2024, i as u64);
            let mut counts = vec![0u64; t.state_count()];
            let mut lazy = 0u64;
            for _ in 0..trials {
                let out = step(&state, &mut rng);
                if out.kind == StepKind::Lazy {
                    lazy += 1;
                }
                counts[t.state_index(&out.next).unwrap()] += 1;
            }
            let lazy_frac = lazy as f64 / trials as f64;
            let se_lazy = (0.25f64 / trials as f64).sqrt();
            assert!((lazy_frac - 0.5).abs() <= 3.0 * se_lazy, "lazy {lazy_frac}");
            for (j, &c) in counts.iter().enumerate() {
                let p: f64 = t.prob(i, j);
                let se = (p * (1.0 - p) / trials as f64).sqrt();
                let freq = c as f64 / trials as f64;
                assert!(
                    (freq - p).abs() <= 3.0 * se.max(1e-9),
                    "state {i}->{j}: empirical {freq}, analytic {p}"
                );
            }
        }
    }

    #[test]
    fn p_min_values() {
        let one = host("3 1 3\n1 2 3\n");
        assert_eq!(p_min(&one).unwrap(), BigRational::new(1.into(), 2.into()));
        let eight = host("8 8 2\n1 2\n1 3\n1 4\n1 5\n1 6\n1 7\n1 8\n2 3\n");
        assert_eq!(
            p_min(&eight).unwrap(),
            BigRational::new(1.into(), 16.into())
        );
        let none = Arc::new(Hypergraph::new(2, 2, Vec::<Vec<u32>>::new()).unwrap());
        assert_eq!(p_min(&none).unwrap_err(), ChainError::EmptyHypergraph);
    }

    /// Whenever 2m <= n^k (always, for edge sets without repeats), the
    /// minimum transition probability 1/(2m) is at least n^-k.
    #[test]
    fn p_min_beats_inverse_nk() {
        use crate::generators::random_kgraph;
        use crate::rng::corpus_rng;
        use num_bigint::BigUint;
        for seed in 0..50u64 {
            let mut rng = corpus_rng(77, seed);
            let k = [2usize, 3, 4][(seed % 3) as usize];
            let n = 4 + (seed % 10) as u32;
            let h = random_kgraph(n.max(k as u32), 1 + seed % 10, k, &mut rng)
                .or_else(|_| random_kgraph(n.max(k as u32), 1, k, &mut rng))
                .unwrap();
            let n_pow_k = BigUint::from(h.vertex_count()).pow(h.uniformity() as u32);
            let two_m = BigUint::from(2 * h.edge_count() as u64);
            if two_m <= n_pow_k {
                // 1/(2m) >= n^-k  <=>  n^k >= 2m.
                assert!(p_min(&h).unwrap() >= BigRational::new(1.into(), n_pow_k.into()));
            }
        }
    }

    #[test]
    fn bounds_formulas() {
        // Vacuous at t = 0: |Ω|² = 4.
        assert_eq!(tv_bound(1.0, 2, 0).unwrap(), 4.0);
        // Monotone decreasing for base < 1.
        let b1 = tv_bound(0.5, 2, 10).unwrap();
        let b2 = tv_bound(0.5, 2, 11).unwrap();
        assert!(b2 < b1);
        // ceil(200·(2·ln 16 + ln 100)) = 2031.
        assert_eq!(mixing_bound(0.1, 16, 0.01).unwrap(), 2031);
        assert!(matches!(
            mixing_bound(0.0, 16, 0.01),
            Err(ChainError::ParamRange { name: "phi", .. })
        ));
        assert!(matches!(
            tv_bound(0.5, 1, 3),
            Err(ChainError::ParamRange { name: "omega", .. })
        ));
        assert!(matches!(
            mixing_bound(0.5, 4, 1.5),
            Err(ChainError::ParamRange { name: "eps", .. })
        ));
    }
}
