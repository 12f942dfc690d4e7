//! Exhaustive verification of the canonical-path machinery on enumerable
//! instances: endpoint and legality properties, the interleaving invariants,
//! injectivity of the transition encoding, image membership, and the
//! path-counting bounds behind the conductance argument.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use super::{
    canonical_path, decompose, eta_image, in_near_matchings, omega_zero_count, PathError,
    PathMode,
};
use crate::bitset::BitSet;
use crate::hypergraph::Hypergraph;
use crate::structure::classify;
use crate::transition::{conductance_exact, TransitionError, TransitionGraph};

pub const DEFAULT_MAX_VERIFY_STATES: usize = 2000;

type RoutingMap = HashMap<(usize, usize), HashMap<Vec<usize>, (usize, usize)>>;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Transition(#[from] TransitionError),
    #[error(transparent)]
    Path(#[from] PathError),
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub mode: PathMode,
    pub max_states: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: PathMode::SZero,
            max_states: DEFAULT_MAX_VERIFY_STATES,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Collision {
    pub transition: (Vec<usize>, Vec<usize>),
    pub image: Vec<usize>,
    pub first_pair: (Vec<usize>, Vec<usize>),
    pub second_pair: (Vec<usize>, Vec<usize>),
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyViolation {
    pub pair: (Vec<usize>, Vec<usize>),
    pub property: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathsReport {
    pub mode: PathMode,
    pub n: u32,
    pub m: usize,
    pub k: usize,
    pub s: usize,
    pub omega: usize,
    pub pairs_checked: usize,
    /// Undirected edges of the transition graph.
    pub transitions_in_graph: usize,
    /// Directed transitions crossed by at least one canonical path.
    pub transitions_used: usize,
    /// Largest number of (I, F) pairs routed through a single directed
    /// transition.
    pub max_pi: usize,
    /// The same quantity under the name the cut argument gives it.
    pub measured_poly: usize,
    pub pi_bound: String,
    pub pi_bound_ok: bool,
    pub empty_images: usize,
    pub collisions: Vec<Collision>,
    pub property_violations: Vec<PropertyViolation>,
}

/// Constructs γ(I, F) for every ordered pair of matchings and checks
/// everything checkable: properties, legality against the transition graph,
/// encoding injectivity per directed transition, image membership, and the
/// size bound on the busiest transition.
pub fn verify_injectivity(
    h: &Arc<Hypergraph>,
    opts: &VerifyOptions,
) -> Result<PathsReport, VerifyError> {
    let tg = TransitionGraph::build_with_limit(h, opts.max_states)?;
    let omega = tg.state_count();
    let report_struct = classify(h);
    let member_s = match opts.mode {
        PathMode::SZero => 0,
        PathMode::General => report_struct.s,
    };

    let mut violations: Vec<PropertyViolation> = Vec::new();
    let mut collisions: Vec<Collision> = Vec::new();
    let mut empty_images = 0usize;
    // Directed transition -> encoding image -> first (I, F) that produced it.
    let mut routed: RoutingMap = HashMap::new();

    let pair_label = |a: usize, b: usize| -> (Vec<usize>, Vec<usize>) {
        (
            tg.state(a).members().to_vec(),
            tg.state(b).members().to_vec(),
        )
    };

    for i_idx in 0..omega {
        for f_idx in 0..omega {
            let i = tg.state(i_idx);
            let f = tg.state(f_idx);
            let path = match canonical_path(i, f, opts.mode) {
                Ok(p) => p,
                Err(e) => {
                    violations.push(PropertyViolation {
                        pair: pair_label(i_idx, f_idx),
                        property: "construction".into(),
                        detail: e.to_string(),
                    });
                    continue;
                }
            };
            let fail = |property: &str, detail: String, out: &mut Vec<PropertyViolation>| {
                out.push(PropertyViolation {
                    pair: pair_label(i_idx, f_idx),
                    property: property.into(),
                    detail,
                });
            };
            // (a) endpoints.
            if path.initial() != i || path.final_state() != f {
                fail("a", "endpoints differ from (I, F)".into(), &mut violations);
            }
            // (c) I∩F ⊆ M_j ⊆ I∪F.
            let i_set = i.member_set();
            let f_set = f.member_set();
            let mut meet = i_set.clone();
            let mut join = i_set.clone();
            {
                let mut tmp = meet.clone();
                tmp.difference_with(&f_set);
                meet.difference_with(&tmp);
            }
            join.union_with(&f_set);
            for (j, st) in path.states.iter().enumerate() {
                let set = st.member_set();
                let inside = meet.iter().all(|e| set.contains(e))
                    && set.iter().all(|e| join.contains(e));
                if !inside {
                    fail("c", format!("state {j} escapes I∩F ⊆ M ⊆ I∪F"), &mut violations);
                    break;
                }
            }
            // (d) processed components are F-aligned, unprocessed I-aligned.
            if opts.mode == PathMode::SZero {
                let decomposition = decompose(i, f).expect("same host");
                let comp_sets: Vec<BitSet> = decomposition
                    .components
                    .iter()
                    .map(|c| BitSet::from_indices(h.edge_count(), c.edges.iter().copied()))
                    .collect();
                'outer: for (j, &venue) in path.venues.iter().enumerate() {
                    let state_set = path.states[j].member_set();
                    for (r, cs) in comp_sets.iter().enumerate() {
                        let required: Vec<usize> = if r < venue {
                            f_set.iter().filter(|e| cs.contains(*e)).collect()
                        } else if r > venue {
                            i_set.iter().filter(|e| cs.contains(*e)).collect()
                        } else {
                            continue;
                        };
                        if required.iter().any(|&e| !state_set.contains(e)) {
                            fail(
                                "d",
                                format!("step {j} venue {venue}: component {r} misaligned"),
                                &mut violations,
                            );
                            break 'outer;
                        }
                    }
                }
            }
            // (b) every step is a transition-graph edge, plus the encoding.
            for w in path.states.windows(2) {
                let a = tg.state_index(&w[0]);
                let b = tg.state_index(&w[1]);
                let (a, b) = match (a, b) {
                    (Some(a), Some(b)) => (a, b),
                    _ => {
                        fail("b", "intermediate state is not a matching".into(), &mut violations);
                        continue;
                    }
                };
                if a == b || !tg.adjacent(a, b) {
                    fail("b", format!("({a}, {b}) is not a chain transition"), &mut violations);
                    continue;
                }
                let image = eta_image(i, f, &w[0], &w[1]);
                let image_vec = image.to_vec();
                if image_vec.is_empty() {
                    empty_images += 1;
                } else if !in_near_matchings(h, &image, member_s) {
                    fail(
                        "image-membership",
                        format!("image {image_vec:?} is not a near-matching (s = {member_s})"),
                        &mut violations,
                    );
                }
                let slot = routed.entry((a, b)).or_default();
                if let Some(&(pi, pf)) = slot.get(&image_vec) {
                    if (pi, pf) != (i_idx, f_idx) {
                        collisions.push(Collision {
                            transition: pair_label(a, b),
                            image: image_vec.clone(),
                            first_pair: pair_label(pi, pf),
                            second_pair: pair_label(i_idx, f_idx),
                        });
                    }
                } else {
                    slot.insert(image_vec, (i_idx, f_idx));
                }
            }
        }
    }

    let max_pi = routed.values().map(|m| m.len()).max().unwrap_or(0);
    // A collision means |Π| exceeds the distinct-image count; account for it.
    let max_pi = max_pi + usize::from(!collisions.is_empty());
    let (pi_bound, pi_bound_ok) = match opts.mode {
        PathMode::SZero => {
            let bound = omega_zero_count(h, tg.states());
            (bound.to_string(), max_pi <= bound)
        }
        PathMode::General => {
            let n = BigUint::from(h.vertex_count());
            let bound = n.pow(((report_struct.s + 1) * h.uniformity()) as u32)
                * BigUint::from(omega);
            (bound.to_string(), BigUint::from(max_pi) <= bound)
        }
    };

    let transitions_in_graph = (0..omega).map(|v| tg.degree(v)).sum::<usize>() / 2;
    Ok(PathsReport {
        mode: opts.mode,
        n: h.vertex_count(),
        m: h.edge_count(),
        k: h.uniformity(),
        s: report_struct.s,
        omega,
        pairs_checked: omega * omega,
        transitions_in_graph,
        transitions_used: routed.len(),
        max_pi,
        measured_poly: max_pi,
        pi_bound,
        pi_bound_ok,
        empty_images,
        collisions,
        property_violations: violations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CutBoundReport {
    pub omega: usize,
    pub phi: f64,
    pub phi_exact: String,
    pub p_min: String,
    pub mode: PathMode,
    /// Measured poly(n): the busiest directed transition's path count.
    pub measured_poly: usize,
    pub subsets_checked: u64,
    /// Subsets violating |cut(S)| ≥ |S|(|Ω|−|S|)/(poly·|Ω|).
    pub cut_bound_violations: u64,
    /// Whether Φ ≥ p_min / poly held.
    pub conductance_bound_ok: bool,
}

/// Verifies the two cut inequalities with the *measured* number of paths
/// per transition standing in for poly(n): the subset lower bound on cuts
/// over every set the conductance search visits, and the conductance lower
/// bound itself against the exact Φ.
pub fn cut_bound_check(
    h: &Arc<Hypergraph>,
    max_omega: usize,
) -> Result<CutBoundReport, VerifyError> {
    let tg = TransitionGraph::build_with_limit(h, max_omega)?;
    let omega = tg.state_count();
    let cond = conductance_exact(&tg, max_omega)?;
    let mode = if classify(h).s == 0 {
        PathMode::SZero
    } else {
        PathMode::General
    };
    let report = verify_injectivity(
        h,
        &VerifyOptions {
            mode,
            max_states: max_omega,
        },
    )?;
    let poly = report.max_pi.max(1) as u128;

    let nbr_masks: Vec<u32> = (0..omega)
        .map(|i| tg.neighbors(i).iter().fold(0u32, |acc, &j| acc | 1 << j))
        .collect();
    let mut subsets_checked = 0u64;
    let mut cut_bound_violations = 0u64;
    for mask in 1u32..(1 << omega) {
        let size = mask.count_ones() as u128;
        if 2 * size > omega as u128 {
            continue;
        }
        subsets_checked += 1;
        let mut cut_edges = 0u128;
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            cut_edges += (nbr_masks[i] & !mask).count_ones() as u128;
        }
        if cut_edges * poly * (omega as u128) < size * (omega as u128 - size) {
            cut_bound_violations += 1;
        }
    }

    let p_min = BigRational::new(1.into(), (2 * h.edge_count() as u64).into());
    let conductance_bound_ok =
        cond.phi.clone() * BigRational::from_integer((2 * h.edge_count() as u64 * poly as u64).into())
            >= BigRational::one();

    Ok(CutBoundReport {
        omega,
        phi: cond.phi_f64,
        phi_exact: cond.phi.to_string(),
        p_min: p_min.to_string(),
        mode,
        measured_poly: poly as usize,
        subsets_checked,
        cut_bound_violations,
        conductance_bound_ok,
    })
}
