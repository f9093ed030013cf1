//! Matrix-tree totals, effective resistances and unit current flows, all in
//! exact rational arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::linalg;
use crate::error::{Error, Result};
use crate::network::{Network, OrientedEdge, Rational};

/// The Laplacian scaled by the lcm `D` of all conductance denominators, so
/// every entry is an integer. Self-loops contribute nothing.
fn scaled_laplacian(network: &Network) -> (Vec<Vec<BigInt>>, BigInt) {
    let n = network.vertex_count();
    let scale = network
        .edges()
        .iter()
        .fold(BigInt::one(), |acc, e| acc.lcm(e.conductance.denom()));
    let mut l = vec![vec![BigInt::zero(); n]; n];
    for e in network.edges() {
        if e.is_self_loop() {
            continue;
        }
        let c = e.conductance.numer() * (&scale / e.conductance.denom());
        l[e.u][e.u] += &c;
        l[e.v][e.v] += &c;
        l[e.u][e.v] -= &c;
        l[e.v][e.u] -= &c;
    }
    (l, scale)
}

fn without(matrix: &[Vec<BigInt>], drop: usize) -> Vec<Vec<BigInt>> {
    matrix
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != drop)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|&(j, _)| j != drop)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Sum over spanning trees of the product of conductances, as a cofactor of
/// the Laplacian.
pub fn tree_weight_total(network: &Network) -> Rational {
    let n = network.vertex_count();
    let (l, scale) = scaled_laplacian(network);
    let det = linalg::determinant(without(&l, 0));
    Rational::new(det, num_traits::pow(scale, n - 1))
}

/// Number of spanning trees, counting parallel edges separately.
pub fn spanning_tree_count(network: &Network) -> BigInt {
    let mut l = vec![vec![BigInt::zero(); network.vertex_count()]; network.vertex_count()];
    for e in network.edges() {
        if e.is_self_loop() {
            continue;
        }
        l[e.u][e.u] += 1;
        l[e.v][e.v] += 1;
        l[e.u][e.v] -= 1;
        l[e.v][e.u] -= 1;
    }
    linalg::determinant(without(&l, 0))
}

/// Potentials for a unit current from `source` to `sink`, grounded at
/// `sink` (`phi[sink] = 0`).
pub fn unit_potentials(network: &Network, source: usize, sink: usize) -> Result<Vec<Rational>> {
    let n = network.vertex_count();
    for v in [source, sink] {
        if v >= n {
            return Err(Error::InvalidVertex { vertex: v });
        }
    }
    if source == sink {
        return Err(Error::InvalidParameter("source and sink coincide".into()));
    }
    let (l, scale) = scaled_laplacian(network);
    let a = without(&l, sink);
    let b: Vec<BigInt> = (0..n)
        .filter(|&v| v != sink)
        .map(|v| {
            if v == source {
                scale.clone()
            } else {
                BigInt::zero()
            }
        })
        .collect();
    let reduced =
        linalg::solve(a, b).expect("grounded Laplacian of a connected network is invertible");
    let mut phi = Vec::with_capacity(n);
    let mut it = reduced.into_iter();
    for v in 0..n {
        phi.push(if v == sink {
            Rational::zero()
        } else {
            it.next().expect("one value per ungrounded vertex")
        });
    }
    Ok(phi)
}

/// Effective resistance between `u` and `v`.
pub fn effective_resistance(network: &Network, u: usize, v: usize) -> Result<Rational> {
    let phi = unit_potentials(network, u, v)?;
    Ok(phi[u].clone())
}

/// A unit current flow. `flow[d]` is the current along edge `d` in its
/// stored orientation (from `u` to `v`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurrentFlow {
    pub source: usize,
    pub sink: usize,
    pub flow: Vec<Rational>,
}

impl CurrentFlow {
    /// Current along an oriented edge, from its tail to its head.
    pub fn along(&self, oe: OrientedEdge) -> Rational {
        if oe.forward {
            self.flow[oe.edge].clone()
        } else {
            -self.flow[oe.edge].clone()
        }
    }

    /// Net current leaving `v`.
    pub fn net_out(&self, network: &Network, v: usize) -> Rational {
        network
            .incident(v)
            .iter()
            .filter(|oe| !network.edge(oe.edge).is_self_loop())
            .map(|&oe| self.along(oe))
            .sum()
    }
}

/// The unit current from the tail of `e` to its head.
pub fn unit_current_flow(network: &Network, e: OrientedEdge) -> Result<CurrentFlow> {
    if network.edge(e.edge).is_self_loop() {
        return Err(Error::SelfLoop { edge: e.edge });
    }
    let (source, sink) = (e.tail(network), e.head(network));
    let phi = unit_potentials(network, source, sink)?;
    let flow = network
        .edges()
        .iter()
        .map(|d| &d.conductance * (&phi[d.u] - &phi[d.v]))
        .collect();
    Ok(CurrentFlow { source, sink, flow })
}

/// Probability that edge `e` lies in the weighted UST: `c(e) R_eff(e-, e+)`.
pub fn ust_edge_marginal(network: &Network, e: usize) -> Result<Rational> {
    let edge = network.edge(e);
    if edge.is_self_loop() {
        return Err(Error::SelfLoop { edge: e });
    }
    Ok(&edge.conductance * effective_resistance(network, edge.u, edge.v)?)
}
