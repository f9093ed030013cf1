use std::collections::BTreeSet;
use std::path::Path;

use statrs::distribution::{ChiSquared, ContinuousCDF};
use usflab_core::batch::{sample_batch, sample_batch_with, Execution};
use usflab_core::exact::enumerate_spanning_trees;
use usflab_core::format::parse_network;
use usflab_core::stats::{chi_square_gof, components, estimate_frequencies, EmpiricalDistribution};
use usflab_core::wilson::{wilson_deferred, wilson_ust};
use usflab_core::{AnyNetwork, ConfigKey, Network, RngHandle};

const SAMPLES: usize = 100_000;

fn load(name: &str) -> AnyNetwork {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.net"));
    parse_network(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const FIXTURES: [&str; 6] = [
    "triangle",
    "weighted_triangle",
    "k4",
    "parallel",
    "weighted_cycle4",
    "wired_grid_2x2",
];

fn keys(net: &Network, order: &[usize], root: usize, seed: u64) -> EmpiricalDistribution {
    sample_batch(SAMPLES, seed, |_, rng| {
        wilson_ust(net, root, order, rng).unwrap().key()
    })
    .into_iter()
    .collect()
}

/// Two-sample chi-square for equal sample sizes: sum of (a - b)^2 / (a + b)
/// over the cells seen in either sample.
fn two_sample_p(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> f64 {
    let cells: BTreeSet<&ConfigKey> = a.counts.keys().chain(b.counts.keys()).collect();
    if cells.len() < 2 {
        return 1.0;
    }
    let stat: f64 = cells
        .iter()
        .map(|k| {
            let (x, y) = (a.count(k) as f64, b.count(k) as f64);
            (x - y).powi(2) / (x + y)
        })
        .sum();
    ChiSquared::new((cells.len() - 1) as f64).unwrap().sf(stat)
}

#[test]
fn vertex_order_does_not_change_the_law() {
    for (i, name) in FIXTURES.iter().enumerate() {
        let net = load(name);
        let net = net.network();
        let n = net.vertex_count();
        let forward: Vec<usize> = (1..n).collect();
        let backward: Vec<usize> = (1..n).rev().collect();
        let a = keys(net, &forward, 0, 10 + i as u64);
        let b = keys(net, &backward, 0, 50 + i as u64);
        let p = two_sample_p(&a, &b);
        assert!(p > 1e-3, "{name}: p = {p}");
        // a different root as well
        let others: Vec<usize> = (0..n - 1).collect();
        let c = keys(net, &others, n - 1, 90 + i as u64);
        let p = two_sample_p(&a, &c);
        assert!(p > 1e-3, "{name} with root {}: p = {p}", n - 1);
    }
}

#[test]
fn deferred_wilson_matches_the_exact_law() {
    for (i, name) in FIXTURES.iter().enumerate() {
        let net = load(name);
        let net = net.network();
        let exact = enumerate_spanning_trees(net).unwrap();
        let deferred: Vec<usize> = (1..net.vertex_count()).rev().step_by(2).collect();
        let emp: EmpiricalDistribution = sample_batch(SAMPLES, 200 + i as u64, |_, rng| {
            wilson_deferred(net, 0, &deferred, rng).unwrap().key()
        })
        .into_iter()
        .collect();
        let r = chi_square_gof(&emp, &exact).unwrap();
        assert!(r.p_value > 1e-3, "{name}: p = {}", r.p_value);
    }
}

#[test]
fn batch_modes_agree_on_samples() {
    let net = load("k4");
    let net = net.network();
    let run = |mode| {
        sample_batch_with(mode, 200, 3, |_, rng| {
            wilson_ust(net, 0, &[1, 2, 3], rng).unwrap().key()
        })
    };
    assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
}

#[test]
fn symmetric_forest_frequencies() {
    // Unit 4-cycle with forest {01, 23}: from every vertex the next vertex
    // lies in either half with probability 1/2, independently of the past,
    // so the occupation fraction has variance exactly 1 / (4N).
    const STEPS: u64 = 1_000_000;
    let cycle = Network::from_unit_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let parts = components(&cycle, &[0, 2]);
    let mut rng = RngHandle::new(17);
    let est = estimate_frequencies(&cycle, &parts, 0, STEPS, &mut rng).unwrap();
    let freq = est.frequencies();
    let sigma = 0.5 / (STEPS as f64).sqrt();
    for f in &freq {
        assert!((f - 0.5).abs() <= 3.0 * sigma, "{freq:?}");
    }
    assert_eq!(est.counts.iter().sum::<u64>(), STEPS);

    let one = estimate_frequencies(&cycle, &parts, 0, 1, &mut RngHandle::new(5)).unwrap();
    assert_eq!(one.counts.iter().sum::<u64>(), 1);
}
