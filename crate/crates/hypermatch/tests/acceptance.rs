//! Acceptance suite: one test per release criterion, each printing a
//! `[PASS]` line with its measurements. Every randomized piece is seeded,
//! so the whole suite is deterministic.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rayon::prelude::*;

use hypermatch::chain::{mixing_bound, step_in_place, tv_bound, ChainState, StepKind};
use hypermatch::estimator::{count_fpras, EstimatorConfig};
use hypermatch::generators::{from_bipartite, random_kgraph, rooted_blowup, subdivide};
use hypermatch::graphs::{random_bipartite, random_regular, Graph};
use hypermatch::hypergraph::{intersection_graph, Hypergraph};
use hypermatch::oracle::{count_matchings, enumerate_matchings};
use hypermatch::paths::{verify_injectivity, PathMode, VerifyOptions};
use hypermatch::rng::corpus_rng;
use hypermatch::structure::{claw_centers, find_three_comb, wide_edges, wide_edges_bruteforce};
use hypermatch::transition::{conductance_exact, tv_distance, TransitionGraph};

const CORPUS_SEED: u64 = 20260809;
const CORPUS_SIZE: u64 = 500;

/// The shared randomized corpus: k cycles through {2, 3, 4}, n ≤ 15, m ≤ 12.
fn corpus() -> Vec<Arc<Hypergraph>> {
    (0..CORPUS_SIZE)
        .map(|i| {
            let mut rng = corpus_rng(CORPUS_SEED, i);
            let k = [2usize, 3, 4][(i % 3) as usize];
            let n = rng.random_range(k as u32..=15);
            let mut available = 1u64;
            for j in 0..k as u64 {
                available = available * (n as u64 - j) / (j + 1);
            }
            let m = rng.random_range(0..=available.min(12));
            Arc::new(random_kgraph(n, m, k, &mut rng).expect("feasible corpus instance"))
        })
        .collect()
}

#[test]
fn criterion_1_oracle_self_consistency() {
    let start = Instant::now();
    for (i, h) in corpus().iter().enumerate() {
        let count = count_matchings(h).expect("corpus fits the count guard");
        let states = enumerate_matchings(h).expect("corpus fits the enumeration guard");
        assert_eq!(
            count,
            BigUint::from(states.len()),
            "instance {i}: count vs enumeration"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("[PASS] criterion 1: 500 instances, count == enumeration, {elapsed:?}");
}

#[test]
fn criterion_2_chain_correctness() {
    let start = Instant::now();
    let corpus = corpus();
    let half = BigRational::new(1.into(), 2.into());

    // Exact tier: kernel structure and stationarity on every instance.
    let mut checked = 0usize;
    for (i, h) in corpus.iter().enumerate() {
        let tg = TransitionGraph::build_with_limit(h, 500).unwrap_or_else(|e| {
            panic!("instance {i} exceeded 500 states: {e}");
        });
        assert!(tg.is_symmetric(), "instance {i}: kernel not symmetric");
        let m = h.edge_count() as u64;
        for s in 0..tg.state_count() {
            assert!(tg.row_sum::<BigRational>(s).is_one(), "instance {i} row {s}");
            assert!(
                tg.prob::<BigRational>(s, s) >= half,
                "instance {i} diagonal {s}"
            );
            if m > 0 {
                let off = BigRational::new(1.into(), (2 * m).into());
                for &t in tg.neighbors(s) {
                    assert_eq!(tg.prob::<BigRational>(s, t), off, "instance {i}");
                }
            }
        }
        let uniform = tg.uniform::<BigRational>();
        assert_eq!(
            tg.step_distribution(&uniform),
            uniform,
            "instance {i}: uniform not exactly stationary"
        );
        checked += 1;
    }

    // Empirical tier: one-step frequencies from 10^6 draws per state on
    // every instance with at most 50 states. With ~10^4 (state, target)
    // comparisons, a per-comparison 3-sigma test is expected to flag about
    // 0.27% of them by chance alone, so the criterion is enforced as: the
    // 3-sigma violation rate stays at or below 0.5%, and no comparison
    // strays past 5 sigma.
    const TRIALS: u64 = 1_000_000;
    let small: Vec<(usize, Arc<Hypergraph>, Arc<TransitionGraph>)> = corpus
        .iter()
        .enumerate()
        .filter_map(|(i, h)| {
            let tg = TransitionGraph::build_with_limit(h, 50).ok()?;
            Some((i, h.clone(), Arc::new(tg)))
        })
        .collect();
    let jobs: Vec<(usize, Arc<Hypergraph>, Arc<TransitionGraph>, usize)> = small
        .iter()
        .flat_map(|(i, h, tg)| {
            (0..tg.state_count()).map(move |s| (*i, h.clone(), tg.clone(), s))
        })
        .collect();
    let results: Vec<(u64, u64, f64)> = jobs
        .par_iter()
        .map(|(i, h, tg, s)| {
            let mut rng = corpus_rng(CORPUS_SEED ^ 0xE3A1, ((*i as u64) << 16) | *s as u64);
            let origin = ChainState::of_matching(tg.state(*s));
            let mut scratch = origin.clone();
            let mut counts = vec![0u64; tg.state_count()];
            let mut lazy = 0u64;
            for _ in 0..TRIALS {
                scratch.clone_from_state(&origin);
                let (kind, _) = step_in_place(h, &mut scratch, &mut rng);
                if kind == StepKind::Lazy {
                    lazy += 1;
                }
                let target = tg
                    .state_index_of_members(scratch.members())
                    .expect("chain stays in the state space");
                counts[target] += 1;
            }
            let mut comparisons = 0u64;
            let mut violations = 0u64;
            let mut max_z = 0f64;
            let mut observe = |observed: u64, p: f64| {
                let se = (p * (1.0 - p) / TRIALS as f64).sqrt();
                let z = (observed as f64 / TRIALS as f64 - p).abs() / se;
                comparisons += 1;
                if z > 3.0 {
                    violations += 1;
                }
                if z > max_z {
                    max_z = z;
                }
            };
            observe(lazy, 0.5);
            for (t, &c) in counts.iter().enumerate() {
                let p: f64 = tg.prob(*s, t);
                if p == 0.0 {
                    assert_eq!(c, 0, "impossible transition observed");
                    continue;
                }
                observe(c, p);
            }
            (comparisons, violations, max_z)
        })
        .collect();
    let comparisons: u64 = results.iter().map(|r| r.0).sum();
    let violations: u64 = results.iter().map(|r| r.1).sum();
    let max_z = results.iter().map(|r| r.2).fold(0f64, f64::max);
    let rate = violations as f64 / comparisons as f64;
    assert!(
        rate <= 0.005,
        "3-sigma violation rate {rate:.4} over {comparisons} comparisons"
    );
    assert!(max_z <= 5.0, "worst z-score {max_z:.2}");

    let elapsed = start.elapsed();
    println!(
        "[PASS] criterion 2: {checked} exact kernels; empirical: {} states x 10^6 steps, \
         {comparisons} comparisons, 3-sigma rate {rate:.4}, max z {max_z:.2}, {elapsed:?}",
        jobs.len()
    );
}

#[test]
fn criterion_3_mixing_bound() {
    let start = Instant::now();
    let mut instances = 0usize;
    let mut worst_margin = f64::INFINITY;
    for (i, h) in corpus().iter().enumerate() {
        let Ok(tg) = TransitionGraph::build_with_limit(h, 20) else {
            continue;
        };
        let omega = tg.state_count();
        if omega < 2 {
            continue; // single-state chain: nothing to mix
        }
        let cond = conductance_exact(&tg, 22).expect("small state space");
        let phi = cond.phi_f64;
        assert!(phi > 0.0, "instance {i}: chain must be connected");
        let t_01 = mixing_bound(phi, omega, 0.1).unwrap();
        let t_001 = mixing_bound(phi, omega, 0.01).unwrap();
        assert!(t_01 <= t_001);

        let uniform: Vec<f64> = tg.uniform();
        let empty_index = 0usize;
        assert!(tg.state(empty_index).is_empty(), "canonical order starts at ∅");
        let mut dist = tg.distribution_after::<f64>(0, empty_index);
        for t in 1..=t_001 {
            dist = tg.step_distribution(&dist);
            let tv = tv_distance(&dist, &uniform).expect("distributions");
            let bound = tv_bound(phi, omega, t).unwrap();
            assert!(
                tv <= bound + 1e-9,
                "instance {i}: tv({t}) = {tv} exceeds bound {bound}"
            );
            if t == t_01 {
                assert!(tv <= 0.1, "instance {i}: tv at t_mix(0.1) is {tv}");
            }
            worst_margin = worst_margin.min(bound - tv);
        }
        let tv_final = tv_distance(&dist, &uniform).unwrap();
        assert!(tv_final <= 0.01, "instance {i}: tv at t_mix(0.01) is {tv_final}");
        instances += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!(
        "[PASS] criterion 3: {instances} instances, tv(t) under the bound pointwise \
         (worst margin {worst_margin:.3e}), {elapsed:?}"
    );
}

/// Fifty comb-free instances: structured families plus filtered random ones.
fn comb_free_corpus() -> Vec<Arc<Hypergraph>> {
    let mut out: Vec<Arc<Hypergraph>> = Vec::new();
    let single = Hypergraph::parse("3 1 3\n1 2 3\n").unwrap();
    out.push(Arc::new(subdivide(&single, true).unwrap()));
    let two_disjoint = Hypergraph::parse("6 2 3\n1 2 3\n4 5 6\n").unwrap();
    out.push(Arc::new(subdivide(&two_disjoint, true).unwrap()));
    let two_linear = Hypergraph::parse("5 2 3\n1 2 3\n3 4 5\n").unwrap();
    out.push(Arc::new(subdivide(&two_linear, true).unwrap()));
    out.push(Arc::new(rooted_blowup(&[2, 2], 3, false).unwrap().0));
    out.push(Arc::new(rooted_blowup(&[2, 2, 2], 3, false).unwrap().0));
    out.push(Arc::new(rooted_blowup(&[1, 2, 3], 3, false).unwrap().0));
    let p4 = Graph::parse("4 3\n1 2\n2 3\n3 4\n").unwrap();
    out.push(Arc::new(from_bipartite(&p4, 3).unwrap().0));
    let c4 = Graph::new(4, [(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
    out.push(Arc::new(from_bipartite(&c4, 3).unwrap().0));
    let mut attempt = 0u64;
    while out.len() < 50 {
        let mut rng = corpus_rng(CORPUS_SEED ^ 0xC4, attempt);
        attempt += 1;
        let n = rng.random_range(6u32..=12);
        let m = rng.random_range(0u64..=6);
        let h = random_kgraph(n, m, 3, &mut rng).unwrap();
        if wide_edges(&h).is_empty() {
            out.push(Arc::new(h));
        }
    }
    out
}

#[test]
fn criterion_4_canonical_paths_claw_free() {
    let start = Instant::now();
    let corpus = comb_free_corpus();
    assert_eq!(corpus.len(), 50);
    let (mut pairs, mut max_pi_seen, mut empties) = (0usize, 0usize, 0usize);
    for (i, h) in corpus.iter().enumerate() {
        assert!(h.edge_count() <= 6);
        let report = verify_injectivity(h, &VerifyOptions::default())
            .unwrap_or_else(|e| panic!("instance {i}: {e}"));
        assert!(
            report.property_violations.is_empty(),
            "instance {i}: {:?}",
            report.property_violations
        );
        assert!(report.collisions.is_empty(), "instance {i}: collisions");
        assert!(report.pi_bound_ok, "instance {i}: max_pi {} > {}", report.max_pi, report.pi_bound);
        pairs += report.pairs_checked;
        max_pi_seen = max_pi_seen.max(report.max_pi);
        empties += report.empty_images;
    }
    let elapsed = start.elapsed();
    println!(
        "[PASS] criterion 4: 50 claw-free instances, {pairs} ordered pairs, zero violations, \
         zero collisions, max |Pi| {max_pi_seen} within |Omega_0|, {empties} empty images \
         (reported separately), {elapsed:?}"
    );
}

/// Thirty instances carrying one or two wide edges.
fn wide_corpus() -> Vec<Arc<Hypergraph>> {
    let mut out: Vec<Arc<Hypergraph>> = Vec::new();
    out.push(Arc::new(
        Hypergraph::parse("9 4 3\n1 2 3\n4 5 6\n7 8 9\n3 4 7\n").unwrap(),
    ));
    let mut attempt = 0u64;
    while out.len() < 30 {
        let mut rng = corpus_rng(CORPUS_SEED ^ 0x5A, attempt);
        attempt += 1;
        assert!(attempt < 20_000, "wide-corpus search exhausted");
        let n = rng.random_range(7u32..=12);
        let m = rng.random_range(4u64..=6);
        let h = random_kgraph(n, m, 3, &mut rng).unwrap();
        let s = wide_edges(&h).len();
        if s == 1 || s == 2 {
            out.push(Arc::new(h));
        }
    }
    out
}

#[test]
fn criterion_5_canonical_paths_general() {
    let start = Instant::now();
    let corpus = wide_corpus();
    assert_eq!(corpus.len(), 30);
    let opts = VerifyOptions {
        mode: PathMode::General,
        max_states: 2000,
    };
    let mut pairs = 0usize;
    let mut s_counts = [0usize; 3];
    for (i, h) in corpus.iter().enumerate() {
        let report = verify_injectivity(h, &opts).unwrap_or_else(|e| panic!("instance {i}: {e}"));
        assert!(report.s == 1 || report.s == 2, "instance {i}: s = {}", report.s);
        s_counts[report.s] += 1;
        assert!(
            report.property_violations.is_empty(),
            "instance {i}: {:?}",
            report.property_violations
        );
        assert!(report.collisions.is_empty(), "instance {i}: collisions");
        assert!(
            report.pi_bound_ok,
            "instance {i}: max_pi {} > n^((s+1)k)|Omega| = {}",
            report.max_pi, report.pi_bound
        );
        pairs += report.pairs_checked;
    }
    let elapsed = start.elapsed();
    println!(
        "[PASS] criterion 5: 30 instances (s=1: {}, s=2: {}), {pairs} ordered pairs, \
         Euler-tour paths legal, eta injective, images in Omega_s, {elapsed:?}",
        s_counts[1], s_counts[2]
    );
}

#[test]
fn criterion_6_structural_equivalences() {
    let start = Instant::now();
    for (i, h) in corpus().iter().enumerate() {
        let wide = wide_edges(h);
        let centers = claw_centers(&intersection_graph(h));
        let brute = wide_edges_bruteforce(h);
        assert_eq!(wide, centers, "instance {i}: wide edges vs claw centers");
        assert_eq!(wide, brute, "instance {i}: wide edges vs O(m^4) scan");
        assert_eq!(
            find_three_comb(h).is_some(),
            !wide.is_empty(),
            "instance {i}: comb existence vs wide existence"
        );
    }
    let elapsed = start.elapsed();
    println!("[PASS] criterion 6: 500 instances, zero discrepancies, {elapsed:?}");
}

#[test]
fn criterion_7_fpras_statistical() {
    let start = Instant::now();
    let mut fixed: Vec<(&str, Arc<Hypergraph>)> = Vec::new();
    fixed.push((
        "3-edge path",
        Arc::new(Hypergraph::parse("7 3 3\n1 2 3\n3 4 5\n5 6 7\n").unwrap()),
    ));
    let single = Hypergraph::parse("3 1 3\n1 2 3\n").unwrap();
    fixed.push(("subdivided triple", Arc::new(subdivide(&single, false).unwrap())));
    fixed.push((
        "blowup [2,2,2]",
        Arc::new(rooted_blowup(&[2, 2, 2], 3, false).unwrap().0),
    ));
    let mut rng = corpus_rng(4242, 0);
    fixed.push(("random k=2", Arc::new(random_kgraph(14, 12, 2, &mut rng).unwrap())));
    let mut rng = corpus_rng(555, 2);
    fixed.push(("random k=2 large", Arc::new(random_kgraph(18, 14, 2, &mut rng).unwrap())));

    let eps = 0.2;
    for (name, h) in &fixed {
        let exact = count_matchings(h).unwrap().to_f64().unwrap();
        assert!((2.0..=1e4).contains(&exact), "{name}: count {exact}");
        let within: u32 = (0..50u64)
            .map(|seed| {
                let config = EstimatorConfig {
                    seed,
                    ..Default::default()
                };
                let r = count_fpras(h, eps, 0.1, &config).unwrap();
                u32::from((r.estimate - exact).abs() <= eps * exact)
            })
            .sum();
        assert!(
            within >= 42,
            "{name}: only {within}/50 runs within relative error {eps}"
        );
        println!("  {name}: exact {exact}, {within}/50 within 20%");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    println!("[PASS] criterion 7: 5 instances x 50 seeded runs, >=42 within eps, {elapsed:?}");
}

#[test]
fn criterion_8_generator_claims() {
    let start = Instant::now();

    // Subdivided corpus: no 3-combs, no wide edges.
    for i in 0..200u64 {
        let mut rng = corpus_rng(CORPUS_SEED ^ 0x5D1, i);
        let n = rng.random_range(3u32..=9);
        let mut available = (n as u64) * (n as u64 - 1) * (n as u64 - 2) / 6;
        available = available.min(4);
        let m = rng.random_range(0..=available);
        let h3 = random_kgraph(n, m, 3, &mut rng).unwrap();
        let h = subdivide(&h3, true).unwrap();
        assert!(find_three_comb(&h).is_none(), "subdivided instance {i}");
        assert!(wide_edges(&h).is_empty(), "subdivided instance {i}");
    }

    // Blow-up corpus: no 3-combs, no wide edges.
    for i in 0..200u64 {
        let mut rng = corpus_rng(CORPUS_SEED ^ 0xB10, i);
        let parts = rng.random_range(2usize..=5);
        let sizes: Vec<u32> = (0..parts).map(|_| rng.random_range(1u32..=3)).collect();
        let k = rng.random_range(2usize..=4);
        let (h, _) = rooted_blowup(&sizes, k, false).unwrap();
        assert!(find_three_comb(&h).is_none(), "blowup instance {i}");
        assert!(wide_edges(&h).is_empty(), "blowup instance {i}");
    }

    // Bipartite reduction: exact count preservation.
    for i in 0..100u64 {
        let mut rng = corpus_rng(CORPUS_SEED ^ 0xB1_9A, i);
        let left = rng.random_range(1u32..=5);
        let right = rng.random_range(1u32..=5);
        let m = rng.random_range(0u64..=(left as u64 * right as u64).min(12));
        let g = random_bipartite(left, right, m, &mut rng).unwrap();
        let k = rng.random_range(3usize..=4);
        // Degree warnings are fine: count preservation and comb-freeness
        // hold for any bipartite input.
        let (h, _warnings) = from_bipartite(&g, k).unwrap();
        assert_eq!(
            count_matchings(&h).unwrap(),
            g.matching_count(),
            "bipartite instance {i}"
        );
        assert!(find_three_comb(&h).is_none(), "bipartite instance {i}");
        assert!(h.is_linear(), "bipartite instance {i}");
    }

    // Duals of regular graphs: matchings = independent sets.
    let mut built = 0u64;
    let mut attempt = 0u64;
    while built < 100 {
        let mut rng = corpus_rng(CORPUS_SEED ^ 0xD0A1, attempt);
        attempt += 1;
        let d = rng.random_range(2usize..=4);
        let n = rng.random_range((d as u32 + 1)..=14);
        if !(n as usize * d).is_multiple_of(2) {
            continue;
        }
        let g = random_regular(n, d, &mut rng).unwrap();
        let h = hypermatch::generators::dual(&g, d).unwrap();
        assert!(h.is_regular(2));
        assert!(h.is_linear());
        assert_eq!(
            count_matchings(&h).unwrap(),
            g.independent_set_count(),
            "dual attempt {attempt}"
        );
        built += 1;
    }

    let elapsed = start.elapsed();
    println!(
        "[PASS] criterion 8: 200+200 comb-free corpora, 100 bipartite reductions, \
         100 regular duals, exact equality throughout, {elapsed:?}"
    );
}

#[test]
fn criterion_9_cli_reproducibility() {
    use std::process::Command;
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_hypermatch");
    let dir = tempfile::tempdir().unwrap();
    let comb = dir.path().join("comb.txt");
    std::fs::write(&comb, "9 4 3\n1 2 3\n4 5 6\n7 8 9\n3 4 7\n").unwrap();
    let comb = comb.to_str().unwrap();

    let invocations: Vec<Vec<&str>> = vec![
        vec!["analyze", comb],
        vec!["count", comb, "--exact"],
        vec![
            "count", comb, "--fpras", "--eps", "0.3", "--delta", "0.2", "--seed", "7",
        ],
        vec!["sample", comb, "--steps", "500", "--seed", "11", "--trace"],
        vec!["generate", "random", "-n", "10", "-m", "6", "-k", "3", "--seed", "5"],
        vec!["generate", "blowup", "--sizes", "2,2,2", "-k", "3"],
        vec!["paths", "verify", comb, "--general"],
        vec!["conductance", comb],
    ];
    for args in &invocations {
        let run = || {
            let out = Command::new(bin).args(args).output().expect("binary runs");
            assert!(
                out.status.success(),
                "{args:?}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            out.stdout
        };
        let first = run();
        let second = run();
        assert_eq!(first, second, "{args:?}: outputs differ between runs");
        assert!(!first.is_empty(), "{args:?}: no output");
    }
    let elapsed = start.elapsed();
    println!(
        "[PASS] criterion 9: {} CLI invocations byte-identical across two runs, {elapsed:?}",
        invocations.len()
    );
}
