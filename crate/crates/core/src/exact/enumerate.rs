//! Brute-force spanning-tree enumeration and the exact distributions built
//! on it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::electrical::spanning_tree_count;
use crate::error::{Error, Result};
use crate::forest::{BoundaryForest, ConfigKey, SpanningTree};
use crate::network::{Network, OrientedEdge, Rational, UnionFind, WiredNetwork};
use crate::update::{direction, update_free, update_wired};

/// Enumeration refuses networks with more spanning trees than this.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

/// Every spanning tree of a network with its weight, the product of its
/// conductances. The probability of a tree is its weight over the total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactTreeDistribution {
    pub trees: Vec<(ConfigKey, Rational)>,
    pub total_weight: Rational,
}

impl ExactTreeDistribution {
    /// Collects weighted configurations, merging repeated keys.
    pub fn from_weights(weights: impl IntoIterator<Item = (ConfigKey, Rational)>) -> Self {
        let mut merged: BTreeMap<ConfigKey, Rational> = BTreeMap::new();
        for (mut key, w) in weights {
            key.sort_unstable();
            *merged.entry(key).or_insert_with(Rational::zero) += w;
        }
        merged.retain(|_, w| !w.is_zero());
        let total_weight = merged.values().sum();
        ExactTreeDistribution {
            trees: merged.into_iter().collect(),
            total_weight,
        }
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn probabilities(&self) -> BTreeMap<ConfigKey, Rational> {
        self.trees
            .iter()
            .map(|(k, w)| (k.clone(), w / &self.total_weight))
            .collect()
    }

    pub fn probability(&self, key: &[usize]) -> Rational {
        self.trees
            .iter()
            .find(|(k, _)| k.as_slice() == key)
            .map(|(_, w)| w / &self.total_weight)
            .unwrap_or_else(Rational::zero)
    }

    /// Probability of the set of configurations satisfying `event`.
    pub fn event_probability(&self, event: impl Fn(&[usize]) -> bool) -> Rational {
        let mass: Rational = self
            .trees
            .iter()
            .filter(|(k, _)| event(k))
            .map(|(_, w)| w.clone())
            .sum();
        mass / &self.total_weight
    }

    pub fn edge_marginal(&self, edge: usize) -> Rational {
        self.event_probability(|k| k.binary_search(&edge).is_ok())
    }

    /// Whether both describe the same probability law.
    pub fn same_law(&self, other: &Self) -> bool {
        self.probabilities() == other.probabilities()
    }
}

/// Union-find with undo, for backtracking.
struct UndoUnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<(usize, usize)>,
}

impl UndoUnionFind {
    fn new(n: usize) -> Self {
        UndoUnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            history: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.history.push((b, a));
        true
    }

    fn undo(&mut self) {
        let (b, a) = self.history.pop().expect("nothing to undo");
        self.parent[b] = b;
        self.size[a] -= self.size[b];
    }
}

struct Enumerator<'a> {
    network: &'a Network,
    chosen: Vec<usize>,
    dsu: UndoUnionFind,
    out: Vec<(ConfigKey, Rational)>,
}

impl Enumerator<'_> {
    /// Whether the chosen edges plus edges `from..` still connect everything.
    fn can_span(&self, from: usize) -> bool {
        let n = self.network.vertex_count();
        let mut dsu = UnionFind::new(n);
        let mut parts = n;
        let later = from..self.network.edge_count();
        for e in self.chosen.iter().copied().chain(later) {
            let edge = self.network.edge(e);
            if dsu.union(edge.u, edge.v) {
                parts -= 1;
            }
        }
        parts == 1
    }

    fn run(&mut self, i: usize) {
        let n = self.network.vertex_count();
        if self.chosen.len() + 1 == n {
            let weight = self
                .chosen
                .iter()
                .fold(Rational::one(), |acc, &e| acc * self.network.conductance(e));
            self.out.push((self.chosen.clone(), weight));
            return;
        }
        let m = self.network.edge_count();
        if i == m || m - i + self.chosen.len() + 1 < n {
            return;
        }
        let edge = self.network.edge(i);
        if self.dsu.union(edge.u, edge.v) {
            self.chosen.push(i);
            self.run(i + 1);
            self.chosen.pop();
            self.dsu.undo();
        }
        if self.can_span(i + 1) {
            self.run(i + 1);
        }
    }
}

/// All spanning trees, in lexicographic order of their sorted edge ids.
pub fn enumerate_spanning_trees(network: &Network) -> Result<ExactTreeDistribution> {
    let count = spanning_tree_count(network);
    if count > BigInt::from(ENUMERATION_LIMIT) {
        return Err(Error::TooManyTrees {
            count: count.to_string(),
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut en = Enumerator {
        network,
        chosen: Vec::new(),
        dsu: UndoUnionFind::new(network.vertex_count()),
        out: Vec::new(),
    };
    en.run(0);
    let total_weight = en.out.iter().map(|(_, w)| w.clone()).sum();
    Ok(ExactTreeDistribution {
        trees: en.out,
        total_weight,
    })
}

/// Law of the direction `D(T, e)` under the weighted UST, by enumeration:
/// for each oriented edge `d` with tail `e-`, the probability that the tree
/// path from `e-` to `e+` starts with `d`.
pub fn direction_distribution(
    network: &Network,
    e: OrientedEdge,
) -> Result<BTreeMap<OrientedEdge, Rational>> {
    if network.edge(e.edge).is_self_loop() {
        return Err(Error::SelfLoop { edge: e.edge });
    }
    let dist = enumerate_spanning_trees(network)?;
    let mut out: BTreeMap<OrientedEdge, Rational> = BTreeMap::new();
    for (key, w) in &dist.trees {
        let tree = SpanningTree::new(network, key)?;
        let d = direction(&tree, e)?;
        *out.entry(d).or_insert_with(Rational::zero) += w / &dist.total_weight;
    }
    Ok(out)
}

/// The weighted UST conditioned on containing `require` and avoiding
/// `forbid`.
pub fn exact_conditioned_distribution(
    network: &Network,
    require: &[usize],
    forbid: &[usize],
) -> Result<ExactTreeDistribution> {
    let dist = enumerate_spanning_trees(network)?;
    let kept = dist.trees.into_iter().filter(|(k, _)| {
        require.iter().all(|e| k.binary_search(e).is_ok())
            && forbid.iter().all(|e| k.binary_search(e).is_err())
    });
    let out = ExactTreeDistribution::from_weights(kept);
    if out.is_empty() {
        return Err(Error::NullConditioningEvent);
    }
    Ok(out)
}

/// `require` together with the weighted UST of the minor
/// `(G - forbid) / require`, lifted back to edge ids of `network`.
pub fn minor_tree_distribution(
    network: &Network,
    require: &[usize],
    forbid: &[usize],
) -> Result<ExactTreeDistribution> {
    let (minor, map) = match network.minor(forbid, require) {
        Ok(m) => m,
        Err(
            Error::DisconnectedNetwork
            | Error::CycleInContractSet
            | Error::OverlappingMinorSets { .. },
        ) => return Err(Error::NullConditioningEvent),
        Err(e) => return Err(e),
    };
    let fixed = require
        .iter()
        .fold(Rational::one(), |acc, &e| acc * network.conductance(e));
    let dist = enumerate_spanning_trees(&minor)?;
    let mut required = require.to_vec();
    required.sort_unstable();
    required.dedup();
    Ok(ExactTreeDistribution::from_weights(
        dist.trees.into_iter().map(|(key, w)| {
            let mut lifted = map.lift_edges(&key);
            lifted.extend_from_slice(&required);
            (lifted, w * &fixed)
        }),
    ))
}

/// Exact law of `U(T, E)` where `T` is the weighted UST and `E` an oriented
/// edge with tail `v` chosen with probability proportional to conductance.
pub fn exact_update_pushforward(network: &Network, v: usize) -> Result<ExactTreeDistribution> {
    if v >= network.vertex_count() {
        return Err(Error::InvalidVertex { vertex: v });
    }
    let dist = enumerate_spanning_trees(network)?;
    let cv = network.vertex_conductance(v);
    let mut weights = Vec::new();
    for (key, w) in &dist.trees {
        let tree = SpanningTree::new(network, key)?;
        for &oe in network.incident(v) {
            let out = update_free(&tree, oe);
            weights.push((out.result.key(), w * network.conductance(oe.edge) / &cv));
        }
    }
    Ok(ExactTreeDistribution::from_weights(weights))
}

/// The wired counterpart of [`exact_update_pushforward`]: the law of the
/// wired update at interior vertex `v` applied to the UST of the wired
/// network.
pub fn exact_wired_update_pushforward(
    wired: &WiredNetwork,
    v: usize,
) -> Result<ExactTreeDistribution> {
    if !wired.is_interior(v) {
        return Err(Error::InvalidVertex { vertex: v });
    }
    let network = wired.network();
    let dist = enumerate_spanning_trees(network)?;
    let cv = network.vertex_conductance(v);
    let mut weights = Vec::new();
    for (key, w) in &dist.trees {
        let forest = BoundaryForest::from_edges(wired, key)?;
        for &oe in network.incident(v) {
            let out = update_wired(&forest, oe)?;
            weights.push((out.result.key(), w * network.conductance(oe.edge) / &cv));
        }
    }
    Ok(ExactTreeDistribution::from_weights(weights))
}
