//! Conductance-weighted random walks and chronological loop-erasure.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use crate::error::{Error, Result};
use crate::network::{Network, OrientedEdge};

/// Per-vertex transition tables with exact integer weights.
///
/// The conductances at each vertex are scaled by the lcm of their
/// denominators, so an edge is chosen with probability exactly `c(e)/c(v)`
/// by drawing a uniform integer below the scaled total.
#[derive(Debug, Clone)]
pub struct WalkTable {
    rows: Vec<Row>,
}

#[derive(Debug, Clone)]
enum Row {
    Empty,
    Small {
        choices: Vec<OrientedEdge>,
        cumulative: Vec<u128>,
    },
    Big {
        choices: Vec<OrientedEdge>,
        cumulative: Vec<BigUint>,
    },
}

impl WalkTable {
    pub(crate) fn new(network: &Network) -> Self {
        let rows = (0..network.vertex_count())
            .map(|v| Row::build(network, v))
            .collect();
        WalkTable { rows }
    }

    fn sample<R: Rng + ?Sized>(&self, v: usize, rng: &mut R) -> Option<OrientedEdge> {
        match &self.rows[v] {
            Row::Empty => None,
            Row::Small {
                choices,
                cumulative,
            } => {
                let total = *cumulative.last().expect("nonempty row");
                let x = rng.random_range(0..total);
                let i = cumulative.partition_point(|&c| c <= x);
                Some(choices[i])
            }
            Row::Big {
                choices,
                cumulative,
            } => {
                let total = cumulative.last().expect("nonempty row");
                let x = uniform_below(total, rng);
                let i = cumulative.partition_point(|c| *c <= x);
                Some(choices[i])
            }
        }
    }
}

impl Row {
    fn build(network: &Network, v: usize) -> Row {
        let choices = network.incident(v).to_vec();
        if choices.is_empty() {
            return Row::Empty;
        }
        let lcm = choices.iter().fold(BigInt::one(), |acc, oe| {
            acc.lcm(network.conductance(oe.edge).denom())
        });
        let weights: Vec<BigUint> = choices
            .iter()
            .map(|oe| {
                let c = network.conductance(oe.edge);
                (c.numer() * (&lcm / c.denom()))
                    .to_biguint()
                    .expect("conductances are positive")
            })
            .collect();
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = BigUint::default();
        for w in weights {
            acc += w;
            cumulative.push(acc.clone());
        }
        let small: Option<Vec<u128>> = cumulative.iter().map(|c| c.to_u128()).collect();
        match small {
            Some(cumulative) => Row::Small {
                choices,
                cumulative,
            },
            None => Row::Big {
                choices,
                cumulative,
            },
        }
    }
}

/// Uniform integer in `[0, bound)` by rejection on random bits.
fn uniform_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let top_mask = match bits % 32 {
        0 => u32::MAX,
        r => (1u32 << r) - 1,
    };
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        if let Some(top) = digits.last_mut() {
            *top &= top_mask;
        }
        let x = BigUint::new(digits);
        if &x < bound {
            return x;
        }
    }
}

/// One step of the network random walk from `v`: an oriented edge with tail
/// `v`, chosen with probability `c(e)/c(v)`. Self-loops may be returned.
pub fn walk_step<R: Rng + ?Sized>(
    network: &Network,
    v: usize,
    rng: &mut R,
) -> Result<OrientedEdge> {
    if v >= network.vertex_count() {
        return Err(Error::InvalidVertex { vertex: v });
    }
    network
        .walk_table()
        .sample(v, rng)
        .ok_or(Error::IsolatedVertex { vertex: v })
}

/// A walk as a vertex sequence plus the oriented edges between consecutive
/// vertices (`steps[i]` goes from `vertices[i]` to `vertices[i + 1]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkPath {
    pub vertices: Vec<usize>,
    pub steps: Vec<OrientedEdge>,
}

impl WalkPath {
    pub fn start(v: usize) -> Self {
        WalkPath {
            vertices: vec![v],
            steps: Vec::new(),
        }
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().expect("walk paths are nonempty")
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, step: OrientedEdge, network: &Network) {
        debug_assert_eq!(step.tail(network), self.last());
        self.vertices.push(step.head(network));
        self.steps.push(step);
    }

    pub fn is_consistent(&self, network: &Network) -> bool {
        !self.vertices.is_empty()
            && self.vertices.len() == self.steps.len() + 1
            && self.steps.iter().enumerate().all(|(i, s)| {
                s.tail(network) == self.vertices[i] && s.head(network) == self.vertices[i + 1]
            })
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.vertices.iter().all(|v| seen.insert(*v))
    }
}

/// An `steps`-step random walk from `start`.
pub fn random_walk<R: Rng + ?Sized>(
    network: &Network,
    start: usize,
    steps: usize,
    rng: &mut R,
) -> Result<WalkPath> {
    let mut path = WalkPath::start(start);
    for _ in 0..steps {
        let step = walk_step(network, path.last(), rng)?;
        path.push(step, network);
    }
    Ok(path)
}

/// Chronological loop-erasure, computed incrementally: whenever the walk
/// revisits a vertex of the current erased path, the loop just closed is cut.
pub fn loop_erase(path: &WalkPath) -> WalkPath {
    let mut out = WalkPath::start(path.first());
    let mut position: HashMap<usize, usize> = HashMap::new();
    position.insert(path.first(), 0);
    for (i, &step) in path.steps.iter().enumerate() {
        let x = path.vertices[i + 1];
        match position.get(&x) {
            Some(&k) => {
                for v in out.vertices.drain(k + 1..) {
                    position.remove(&v);
                }
                out.steps.truncate(k);
            }
            None => {
                position.insert(x, out.vertices.len());
                out.vertices.push(x);
                out.steps.push(step);
            }
        }
    }
    out
}

/// Loop-erasure through the exit-time recursion: `t_0 = 0` and
/// `t_i = 1 + max{t >= t_{i-1} : path_t = path_{t_{i-1}}}`; the erased path
/// visits `path_{t_0}, path_{t_1}, ...` while `t_i` stays in range.
pub fn loop_erase_by_exit_times(path: &WalkPath) -> WalkPath {
    let n = path.vertices.len();
    let mut last_visit: HashMap<usize, usize> = HashMap::new();
    for (t, &v) in path.vertices.iter().enumerate() {
        last_visit.insert(v, t);
    }
    let mut out = WalkPath::start(path.first());
    let mut t = 0;
    loop {
        let next = 1 + last_visit[&path.vertices[t]];
        if next >= n {
            break;
        }
        out.vertices.push(path.vertices[next]);
        out.steps.push(path.steps[next - 1]);
        t = next;
    }
    out
}
