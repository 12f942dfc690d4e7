//! Approximate counting by self-reducibility.
//!
//! With edges in canonical order, let H_i be the hypergraph after deleting
//! the first i edges. The ratio r_i = |Ω(H_i)| / |Ω(H_{i-1})| equals the
//! probability that a uniform matching of H_{i-1} omits its first edge, and
//! the telescoping product of the 1/r_i recovers |Ω(H)|. Each ratio is
//! estimated from independent chain runs; every true ratio is at least 1/2
//! (delete the edge from any matching containing it), which keeps the
//! estimator variance in check.
//!
//! Two step/sample schedules exist. The rigorous one combines the mixing
//! bound with the worst-case conductance floor and is astronomically large
//! for anything but single-edge instances; it is computed, reported, and
//! refused when it cannot run. The heuristic one is sized for desk-scale
//! validation against exact counts. The constants in both are derived in
//! `docs/sampling-constants.md`.

use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::chain::{mixing_bound_raw, run_with_rng};
use crate::hypergraph::Hypergraph;
use crate::rng::estimator_rng;
use crate::structure::classify;

/// Per-stage sample count: `ceil(74 · m · eps^-2 · ln(3m/delta))`.
const RIGOROUS_SAMPLE_FACTOR: f64 = 74.0;
const RIGOROUS_DELTA_FACTOR: f64 = 3.0;
/// Heuristic schedule constants.
const HEURISTIC_STEP_FACTOR: f64 = 20.0;
const HEURISTIC_SAMPLE_FACTOR: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Heuristic,
    Rigorous,
}

#[derive(Debug, Error, PartialEq)]
pub enum EstimatorError {
    #[error("parameter {name} must lie in (0, 1), got {value}")]
    Param { name: &'static str, value: f64 },
    #[error("edge index {0} out of range (hypergraph has {1} edges)")]
    EdgeIndex(usize, usize),
    #[error(
        "rigorous schedule needs about 1e{exp:.1} steps per sample \
         (phi lower bound {phi_lb:.3e}); refusing to run"
    )]
    ScheduleOverflow { exp: f64, phi_lb: f64 },
    #[error("stage {stage}: all samples contained the pivot edge; the ratio estimate is 0")]
    ZeroRatio { stage: usize },
}

/// Steps and samples for one estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSchedule {
    pub mode: Mode,
    pub stages: usize,
    pub samples_per_stage: u64,
    pub steps_per_sample: u64,
    /// Conductance lower bound behind the rigorous step count.
    pub phi_lower_bound: Option<f64>,
}

/// Schedule for the requested mode.
///
/// Rigorous: steps from the mixing bound at per-stage accuracy eps/(6m),
/// with ln|Ω| bounded by min(2^m, Σ_j C(m, j)) and the conductance floored
/// at p_min / (2 n^((s+1)k)); samples per the constants above. Heuristic:
/// steps ceil(20·m·(ln n + ln(1/eps))), samples ceil(40·eps^-2·ln(m/delta)).
pub fn sample_schedule(
    h: &Hypergraph,
    eps: f64,
    delta: f64,
    mode: Mode,
) -> Result<SampleSchedule, EstimatorError> {
    check_param("eps", eps)?;
    check_param("delta", delta)?;
    let m = h.edge_count();
    if m == 0 {
        return Ok(SampleSchedule {
            mode,
            stages: 0,
            samples_per_stage: 0,
            steps_per_sample: 0,
            phi_lower_bound: None,
        });
    }
    match mode {
        Mode::Heuristic => {
            let n = h.vertex_count() as f64;
            let steps = (HEURISTIC_STEP_FACTOR * m as f64 * (n.ln() + (1.0 / eps).ln()))
                .ceil()
                .max(1.0) as u64;
            let samples = (HEURISTIC_SAMPLE_FACTOR * eps.powi(-2) * (m as f64 / delta).ln())
                .ceil()
                .max(1.0) as u64;
            Ok(SampleSchedule {
                mode,
                stages: m,
                samples_per_stage: samples,
                steps_per_sample: steps,
                phi_lower_bound: None,
            })
        }
        Mode::Rigorous => {
            let s = classify(h).s;
            let ln_omega_upper = ln_state_space_upper(h);
            let n = h.vertex_count() as f64;
            // p_min / (2 n^((s+1)k)) in log space to survive the exponent.
            let ln_phi_lb =
                -( (4.0 * m as f64).ln() + ((s + 1) * h.uniformity()) as f64 * n.ln() );
            let phi_lb = ln_phi_lb.exp();
            let per_stage_eps = eps / (6.0 * m as f64);
            // t = (2/phi²)(2 ln|Ω| + ln(1/eps')); assembled in logs first to
            // detect overflow before it happens.
            let ln_t = (2.0f64).ln() - 2.0 * ln_phi_lb
                + (2.0 * ln_omega_upper + (1.0 / per_stage_eps).ln()).ln();
            if ln_t >= (u64::MAX as f64).ln() {
                return Err(EstimatorError::ScheduleOverflow {
                    exp: ln_t / std::f64::consts::LN_10,
                    phi_lb,
                });
            }
            let steps = mixing_bound_raw(phi_lb, ln_omega_upper, per_stage_eps)
                .ceil()
                .max(1.0) as u64;
            let samples = (RIGOROUS_SAMPLE_FACTOR
                * m as f64
                * eps.powi(-2)
                * (RIGOROUS_DELTA_FACTOR * m as f64 / delta).ln())
            .ceil()
            .max(1.0) as u64;
            Ok(SampleSchedule {
                mode,
                stages: m,
                samples_per_stage: samples,
                steps_per_sample: steps,
                phi_lower_bound: Some(phi_lb),
            })
        }
    }
}

/// ln of min(2^m, Σ_{j ≤ n/k} C(m, j)), an upper bound on |Ω|.
fn ln_state_space_upper(h: &Hypergraph) -> f64 {
    let m = h.edge_count();
    let max_size = (h.vertex_count() as usize) / h.uniformity();
    let mut sum = BigUint::zero();
    let mut binom = BigUint::one();
    for j in 0..=max_size.min(m) {
        if j > 0 {
            binom = binom * BigUint::from(m - j + 1) / BigUint::from(j);
        }
        sum += binom.clone();
    }
    let cap = BigUint::one() << m;
    let bound = sum.min(cap);
    ln_biguint(&bound)
}

fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap_or(1.0).ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap_or(1.0);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn check_param(name: &'static str, value: f64) -> Result<(), EstimatorError> {
    if !(0.0 < value && value < 1.0) {
        return Err(EstimatorError::Param { name, value });
    }
    Ok(())
}

/// Hit count for one stage: how many of `samples` chain runs on `h_prev`
/// produce a matching omitting `edge`. Samples use independent RNG streams
/// keyed by `(seed, stage, sample)` and may run in parallel.
pub fn ratio_estimate(
    h_prev: &Arc<Hypergraph>,
    edge: usize,
    samples: u64,
    steps: u64,
    seed: u64,
    stage: usize,
) -> Result<(u64, u64), EstimatorError> {
    if edge >= h_prev.edge_count() {
        return Err(EstimatorError::EdgeIndex(edge, h_prev.edge_count()));
    }
    let hits = (0..samples)
        .into_par_iter()
        .map(|sample| {
            let mut rng = estimator_rng(seed, stage, sample);
            let state = run_with_rng(h_prev, steps, &mut rng, false).final_state;
            u64::from(!state.contains(edge))
        })
        .sum();
    Ok((hits, samples))
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RatioStat {
    /// Canonical index of the removed edge in the original hypergraph.
    pub edge: usize,
    pub samples: u64,
    pub hits: u64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct EstimateResult {
    pub estimate: f64,
    /// The raw product of sample ratios, exactly.
    #[serde(serialize_with = "rational_as_string")]
    pub estimate_exact: BigRational,
    pub eps: f64,
    pub delta: f64,
    pub mode: Mode,
    pub seed: u64,
    pub steps_per_sample: u64,
    pub samples_per_stage: u64,
    pub ratios: Vec<RatioStat>,
}

fn rational_as_string<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Debug, Clone, Copy)]
pub struct EstimatorConfig {
    pub mode: Mode,
    pub seed: u64,
    pub steps_override: Option<u64>,
    pub samples_override: Option<u64>,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            mode: Mode::Heuristic,
            seed: 0,
            steps_override: None,
            samples_override: None,
        }
    }
}

/// The full estimator: one sampling stage per edge, exact rational product,
/// bit-reproducible for a fixed (hypergraph, eps, delta, config).
pub fn count_fpras(
    h: &Arc<Hypergraph>,
    eps: f64,
    delta: f64,
    config: &EstimatorConfig,
) -> Result<EstimateResult, EstimatorError> {
    check_param("eps", eps)?;
    check_param("delta", delta)?;
    let m = h.edge_count();
    let (steps, samples) = match (config.steps_override, config.samples_override) {
        (Some(t), Some(n)) => (t, n),
        (t, n) => {
            let schedule = sample_schedule(h, eps, delta, config.mode)?;
            (
                t.unwrap_or(schedule.steps_per_sample),
                n.unwrap_or(schedule.samples_per_stage),
            )
        }
    };
    let mut ratios = Vec::with_capacity(m);
    let mut product = BigRational::one();
    for stage in 0..m {
        let h_prev = Arc::new(h.suffix(stage));
        let (hits, n) = ratio_estimate(&h_prev, 0, samples, steps, config.seed, stage)?;
        if hits == 0 {
            return Err(EstimatorError::ZeroRatio { stage });
        }
        ratios.push(RatioStat {
            edge: stage,
            samples: n,
            hits,
            ratio: hits as f64 / n as f64,
        });
        product *= BigRational::new(n.into(), hits.into());
    }
    Ok(EstimateResult {
        estimate: product.to_f64().unwrap_or(f64::NAN),
        estimate_exact: product,
        eps,
        delta,
        mode: config.mode,
        seed: config.seed,
        steps_per_sample: if m == 0 { 0 } else { steps },
        samples_per_stage: if m == 0 { 0 } else { samples },
        ratios,
    })
}
