//! Weighted multigraphs with exact rational conductances, plus the minor
//! operations used by exhaustions: induced subnetworks, wired contractions
//! and general delete/contract minors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::walk::WalkTable;

/// Exact conductance / probability type used throughout the crate.
pub type Rational = num_rational::BigRational;

/// Integer-valued rational.
pub fn rational(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `num / den` as an exact rational. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub conductance: Rational,
}

impl Edge {
    pub fn new(u: usize, v: usize, conductance: Rational) -> Self {
        Edge { u, v, conductance }
    }

    pub fn is_self_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite to `x` (for a self-loop, `x` itself).
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// An edge id together with an orientation. `forward` runs from the stored
/// `u` endpoint to the stored `v` endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedEdge {
    pub edge: usize,
    pub forward: bool,
}

impl OrientedEdge {
    pub fn new(edge: usize, forward: bool) -> Self {
        OrientedEdge { edge, forward }
    }

    pub fn reversed(self) -> Self {
        OrientedEdge {
            edge: self.edge,
            forward: !self.forward,
        }
    }

    pub fn tail(self, network: &Network) -> usize {
        let e = network.edge(self.edge);
        if self.forward {
            e.u
        } else {
            e.v
        }
    }

    pub fn head(self, network: &Network) -> usize {
        let e = network.edge(self.edge);
        if self.forward {
            e.v
        } else {
            e.u
        }
    }
}

/// A finite connected multigraph with strictly positive rational conductances.
///
/// Edge ids are the dense indices `0..edge_count()` and never change. Parallel
/// edges and self-loops are allowed.
#[derive(Clone)]
pub struct Network {
    vertex_count: usize,
    edges: Vec<Edge>,
    incident: Vec<Vec<OrientedEdge>>,
    walk: OnceLock<WalkTable>,
}

impl fmt::Debug for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Network")
            .field("vertex_count", &self.vertex_count)
            .field("edges", &self.edges)
            .finish()
    }
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.edges == other.edges
    }
}

impl Eq for Network {}

impl Network {
    /// Validates and builds a network. Fails on out-of-range endpoints,
    /// non-positive conductances, or a disconnected multigraph.
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptyVertexSet);
        }
        for (id, e) in edges.iter().enumerate() {
            if e.u >= vertex_count || e.v >= vertex_count {
                return Err(Error::InvalidEdge {
                    edge: id,
                    reason: format!(
                        "endpoint out of range ({}, {}) for {} vertices",
                        e.u, e.v, vertex_count
                    ),
                });
            }
            if !e.conductance.is_positive() {
                return Err(Error::NonpositiveConductance { edge: id });
            }
        }
        let mut incident = vec![Vec::new(); vertex_count];
        for (id, e) in edges.iter().enumerate() {
            incident[e.u].push(OrientedEdge::new(id, true));
            if !e.is_self_loop() {
                incident[e.v].push(OrientedEdge::new(id, false));
            }
        }
        let network = Network {
            vertex_count,
            edges,
            incident,
            walk: OnceLock::new(),
        };
        if !network.is_connected() {
            return Err(Error::DisconnectedNetwork);
        }
        Ok(network)
    }

    /// Builds a network from `(u, v, conductance)` triples.
    pub fn from_triples(vertex_count: usize, edges: &[(usize, usize, Rational)]) -> Result<Self> {
        Network::new(
            vertex_count,
            edges
                .iter()
                .map(|(u, v, c)| Edge::new(*u, *v, c.clone()))
                .collect(),
        )
    }

    /// Builds a network with integer conductances.
    pub fn from_integer_edges(vertex_count: usize, edges: &[(usize, usize, i64)]) -> Result<Self> {
        Network::new(
            vertex_count,
            edges
                .iter()
                .map(|&(u, v, c)| Edge::new(u, v, rational(c)))
                .collect(),
        )
    }

    /// Builds a network with unit conductances.
    pub fn from_unit_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Network::new(
            vertex_count,
            edges
                .iter()
                .map(|&(u, v)| Edge::new(u, v, Rational::one()))
                .collect(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn conductance(&self, id: usize) -> &Rational {
        &self.edges[id].conductance
    }

    /// Oriented edges with tail `v`. A self-loop appears once.
    pub fn incident(&self, v: usize) -> &[OrientedEdge] {
        &self.incident[v]
    }

    /// `c(v)`: total conductance of the oriented edges with tail `v`.
    pub fn vertex_conductance(&self, v: usize) -> Rational {
        self.incident[v]
            .iter()
            .fold(Rational::zero(), |acc, oe| acc + self.conductance(oe.edge))
    }

    /// Sum of `c(v)` over all vertices.
    pub fn total_conductance(&self) -> Rational {
        (0..self.vertex_count)
            .map(|v| self.vertex_conductance(v))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Number of edge ends at `v` (a self-loop counts once, matching `incident`).
    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub(crate) fn walk_table(&self) -> &WalkTable {
        self.walk.get_or_init(|| WalkTable::new(self))
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for oe in &self.incident[x] {
                let y = self.edges[oe.edge].other(x);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.vertex_count
    }

    fn check_vertices(&self, vertices: &[usize]) -> Result<()> {
        match vertices.iter().find(|&&v| v >= self.vertex_count) {
            Some(&v) => Err(Error::InvalidVertex { vertex: v }),
            None => Ok(()),
        }
    }

    fn check_edges(&self, edges: &[usize]) -> Result<()> {
        match edges.iter().find(|&&e| e >= self.edges.len()) {
            Some(&e) => Err(Error::InvalidEdge {
                edge: e,
                reason: "edge id out of range".into(),
            }),
            None => Ok(()),
        }
    }

    /// Quotient by a class map (`rep[v]` = lowest original id of `v`'s class,
    /// or `None` to drop `v`). Quotient ids are dense, ordered by class key.
    fn quotient(
        &self,
        rep: &[Option<usize>],
        keep: impl Fn(usize, &Edge) -> bool,
    ) -> Result<(Network, VertexMergeMap)> {
        let mut dense: BTreeMap<usize, usize> = BTreeMap::new();
        for r in rep.iter().flatten() {
            dense.insert(*r, 0);
        }
        for (i, slot) in dense.values_mut().enumerate() {
            *slot = i;
        }
        let vertex: Vec<Option<usize>> = rep.iter().map(|r| r.map(|r| dense[&r])).collect();
        let mut edges = Vec::new();
        let mut edge_origin = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            if let (Some(a), Some(b)) = (vertex[e.u], vertex[e.v]) {
                if keep(id, e) {
                    edges.push(Edge::new(a, b, e.conductance.clone()));
                    edge_origin.push(id);
                }
            }
        }
        let network = Network::new(dense.len(), edges)?;
        Ok((
            network,
            VertexMergeMap {
                vertex,
                edge_origin,
            },
        ))
    }

    /// The subnetwork induced by `vertex_set`, relabelled densely in
    /// ascending order of original id.
    pub fn induced_subnetwork(&self, vertex_set: &[usize]) -> Result<(Network, VertexMergeMap)> {
        if vertex_set.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        self.check_vertices(vertex_set)?;
        let mut rep = vec![None; self.vertex_count];
        for &v in vertex_set {
            rep[v] = Some(v);
        }
        self.quotient(&rep, |_, _| true)
    }

    /// Identifies every vertex outside `vertex_set` into a single wired
    /// vertex and deletes the self-loops this creates. Parallel edges to the
    /// wired vertex are kept.
    pub fn wired_contraction(
        &self,
        vertex_set: &[usize],
    ) -> Result<(WiredNetwork, VertexMergeMap)> {
        if vertex_set.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        self.check_vertices(vertex_set)?;
        let mut inside = vec![false; self.vertex_count];
        for &v in vertex_set {
            inside[v] = true;
        }
        let exterior_key = match (0..self.vertex_count).find(|&v| !inside[v]) {
            Some(v) => v,
            None => return Err(Error::EmptyExterior),
        };
        let rep: Vec<Option<usize>> = (0..self.vertex_count)
            .map(|v| Some(if inside[v] { v } else { exterior_key }))
            .collect();
        let (network, map) = self.quotient(&rep, |_, e| inside[e.u] || inside[e.v])?;
        let wired_vertex = map.vertex[exterior_key].expect("exterior is mapped");
        Ok((WiredNetwork::new(network, wired_vertex)?, map))
    }

    /// The minor `(G - delete) / contract`. Self-loops created by the
    /// contraction are deleted; pre-existing self-loops are kept.
    pub fn minor(&self, delete: &[usize], contract: &[usize]) -> Result<(Network, VertexMergeMap)> {
        self.check_edges(delete)?;
        self.check_edges(contract)?;
        let mut deleted = vec![false; self.edges.len()];
        for &h in delete {
            deleted[h] = true;
        }
        let mut contracted = vec![false; self.edges.len()];
        let mut dsu = UnionFind::new(self.vertex_count);
        for &f in contract {
            if deleted[f] {
                return Err(Error::OverlappingMinorSets { edge: f });
            }
            if contracted[f] {
                continue;
            }
            contracted[f] = true;
            let e = &self.edges[f];
            if !dsu.union(e.u, e.v) {
                return Err(Error::CycleInContractSet);
            }
        }
        let mut lowest = vec![usize::MAX; self.vertex_count];
        for v in 0..self.vertex_count {
            let r = dsu.find(v);
            lowest[r] = lowest[r].min(v);
        }
        let rep: Vec<Option<usize>> = (0..self.vertex_count)
            .map(|v| Some(lowest[dsu.find(v)]))
            .collect();
        self.quotient(&rep, |id, e| {
            !deleted[id] && !contracted[id] && (e.is_self_loop() || rep[e.u] != rep[e.v])
        })
    }
}

/// Result of a contraction or restriction: where each original vertex went
/// (`None` if dropped) and, for each edge of the new network, the id of the
/// original edge it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMergeMap {
    pub vertex: Vec<Option<usize>>,
    pub edge_origin: Vec<usize>,
}

impl VertexMergeMap {
    pub fn image(&self, v: usize) -> Option<usize> {
        self.vertex[v]
    }

    /// Maps edge ids of the quotient back to original edge ids, sorted.
    pub fn lift_edges(&self, edges: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = edges.iter().map(|&e| self.edge_origin[e]).collect();
        out.sort_unstable();
        out
    }

    /// Maps an original edge id to its id in the quotient, if it survived.
    pub fn quotient_edge(&self, original: usize) -> Option<usize> {
        self.edge_origin.iter().position(|&o| o == original)
    }
}

/// A network with one distinguished vertex standing for the contracted
/// exterior of a finite truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiredNetwork {
    network: Network,
    wired_vertex: usize,
    interior: Vec<usize>,
}

impl WiredNetwork {
    pub fn new(network: Network, wired_vertex: usize) -> Result<Self> {
        if wired_vertex >= network.vertex_count() {
            return Err(Error::InvalidVertex {
                vertex: wired_vertex,
            });
        }
        if let Some(oe) = network
            .incident(wired_vertex)
            .iter()
            .find(|oe| network.edge(oe.edge).is_self_loop())
        {
            return Err(Error::InvalidEdge {
                edge: oe.edge,
                reason: "self-loop at the wired vertex".into(),
            });
        }
        let interior = (0..network.vertex_count())
            .filter(|&v| v != wired_vertex)
            .collect();
        Ok(WiredNetwork {
            network,
            wired_vertex,
            interior,
        })
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn wired_vertex(&self) -> usize {
        self.wired_vertex
    }

    /// Interior vertex ids in ascending order.
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn is_interior(&self, v: usize) -> bool {
        v != self.wired_vertex && v < self.network.vertex_count()
    }

    /// Interior vertices adjacent to the wired vertex in the network.
    pub fn boundary_vertices(&self) -> Vec<usize> {
        let mut marks = vec![false; self.network.vertex_count()];
        for oe in self.network.incident(self.wired_vertex) {
            marks[oe.head(&self.network)] = true;
        }
        (0..marks.len()).filter(|&v| marks[v]).collect()
    }
}

/// Either a free network or a wired truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyNetwork {
    Free(Network),
    Wired(WiredNetwork),
}

impl AnyNetwork {
    pub fn network(&self) -> &Network {
        match self {
            AnyNetwork::Free(n) => n,
            AnyNetwork::Wired(w) => w.network(),
        }
    }

    pub fn wired(&self) -> Option<&WiredNetwork> {
        match self {
            AnyNetwork::Free(_) => None,
            AnyNetwork::Wired(w) => Some(w),
        }
    }

    pub fn into_wired(self) -> Option<WiredNetwork> {
        match self {
            AnyNetwork::Free(_) => None,
            AnyNetwork::Wired(w) => Some(w),
        }
    }

    pub fn into_network(self) -> Network {
        match self {
            AnyNetwork::Free(n) => n,
            AnyNetwork::Wired(w) => w.network,
        }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Network {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Network::from_unit_edges(n, &edges).unwrap()
    }

    fn triangle() -> Network {
        Network::from_unit_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn k4() -> Network {
        Network::from_unit_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn endpoint_multiset(net: &Network) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = net
            .edges()
            .iter()
            .map(|e| (e.u.min(e.v), e.u.max(e.v)))
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn build_examples() {
        let t = triangle();
        assert_eq!(t.vertex_count(), 3);
        assert_eq!(t.edge_count(), 3);
        let p = Network::from_integer_edges(2, &[(0, 1, 1), (0, 1, 2)]).unwrap();
        assert_eq!(p.edge_count(), 2);
        assert_eq!(p.vertex_conductance(0), rational(3));
        assert_eq!(
            Network::from_unit_edges(4, &[(0, 1), (2, 3)]),
            Err(Error::DisconnectedNetwork)
        );
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(matches!(
            Network::from_unit_edges(2, &[(0, 2)]),
            Err(Error::InvalidEdge { edge: 0, .. })
        ));
        assert_eq!(
            Network::from_integer_edges(2, &[(0, 1, 0)]),
            Err(Error::NonpositiveConductance { edge: 0 })
        );
        assert_eq!(
            Network::from_integer_edges(2, &[(0, 1, -1)]),
            Err(Error::NonpositiveConductance { edge: 0 })
        );
    }

    #[test]
    fn self_loop_counts_once_toward_vertex_conductance() {
        let n = Network::from_unit_edges(2, &[(0, 0), (0, 1)]).unwrap();
        assert_eq!(n.incident(0).len(), 2);
        assert_eq!(n.vertex_conductance(0), rational(2));
        assert_eq!(n.vertex_conductance(1), rational(1));
    }

    #[test]
    fn oriented_edge_accessors() {
        let t = triangle();
        let oe = OrientedEdge::new(1, true);
        assert_eq!((oe.tail(&t), oe.head(&t)), (1, 2));
        assert_eq!(oe.reversed().reversed(), oe);
        assert_eq!(oe.tail(&t), oe.reversed().head(&t));
    }

    #[test]
    fn induced_examples() {
        let (sub, map) = path(4).induced_subnetwork(&[1, 2]).unwrap();
        assert_eq!(sub.vertex_count(), 2);
        assert_eq!(endpoint_multiset(&sub), vec![(0, 1)]);
        assert_eq!(map.edge_origin, vec![1]);
        assert_eq!(map.image(1), Some(0));
        assert_eq!(map.image(0), None);

        let (same, _) = triangle().induced_subnetwork(&[0, 1, 2]).unwrap();
        assert_eq!(same, triangle());

        assert_eq!(
            path(4).induced_subnetwork(&[0, 2]).unwrap_err(),
            Error::DisconnectedNetwork
        );
    }

    #[test]
    fn wired_path() {
        let (wg, map) = path(5).wired_contraction(&[1, 2, 3]).unwrap();
        let net = wg.network();
        assert_eq!(net.vertex_count(), 4);
        assert_eq!(wg.wired_vertex(), 0);
        assert_eq!(wg.interior(), &[1, 2, 3]);
        assert_eq!(map.image(4), Some(0));
        // edges 1-2, 2-3 plus the two boundary edges 0-1 and 3-4
        assert_eq!(endpoint_multiset(net), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn wired_triangle_keeps_parallel_edges() {
        let (wg, map) = triangle().wired_contraction(&[0]).unwrap();
        assert_eq!(wg.network().vertex_count(), 2);
        assert_eq!(wg.wired_vertex(), 1);
        assert_eq!(endpoint_multiset(wg.network()), vec![(0, 1), (0, 1)]);
        assert_eq!(map.edge_origin, vec![0, 2]);
    }

    #[test]
    fn wired_k4() {
        let (wg, _) = k4().wired_contraction(&[0, 1]).unwrap();
        assert_eq!(wg.wired_vertex(), 2);
        assert_eq!(
            endpoint_multiset(wg.network()),
            vec![(0, 1), (0, 2), (0, 2), (1, 2), (1, 2)]
        );
        assert!(wg
            .network()
            .incident(wg.wired_vertex())
            .iter()
            .all(|oe| !wg.network().edge(oe.edge).is_self_loop()));
    }

    #[test]
    fn wiring_everything_is_rejected() {
        assert_eq!(
            triangle().wired_contraction(&[0, 1, 2]).unwrap_err(),
            Error::EmptyExterior
        );
    }

    #[test]
    fn wired_edge_count_matches_direct_count() {
        let g = k4();
        for set in [vec![0], vec![1, 3], vec![0, 1, 2]] {
            let inside: Vec<bool> = (0..4).map(|v| set.contains(&v)).collect();
            let outside_edges = g
                .edges()
                .iter()
                .filter(|e| !inside[e.u] && !inside[e.v])
                .count();
            let (wg, _) = g.wired_contraction(&set).unwrap();
            assert_eq!(wg.network().edge_count(), g.edge_count() - outside_edges);
        }
    }

    #[test]
    fn minor_examples() {
        let t = triangle();
        let (deleted, _) = t.minor(&[0], &[]).unwrap();
        assert_eq!(deleted.vertex_count(), 3);
        assert_eq!(endpoint_multiset(&deleted), vec![(0, 2), (1, 2)]);

        let (contracted, map) = t.minor(&[], &[0]).unwrap();
        assert_eq!(contracted.vertex_count(), 2);
        assert_eq!(endpoint_multiset(&contracted), vec![(0, 1), (0, 1)]);
        assert_eq!(map.image(0), map.image(1));
        assert_eq!(map.edge_origin, vec![1, 2]);

        assert_eq!(
            t.minor(&[], &[0, 1, 2]).unwrap_err(),
            Error::CycleInContractSet
        );
        assert_eq!(
            t.minor(&[0], &[0]).unwrap_err(),
            Error::OverlappingMinorSets { edge: 0 }
        );
        assert_eq!(
            path(3).minor(&[0], &[]).unwrap_err(),
            Error::DisconnectedNetwork
        );
    }

    #[test]
    fn minor_identity() {
        let g =
            Network::from_integer_edges(3, &[(0, 1, 2), (1, 1, 1), (1, 2, 3), (0, 2, 1)]).unwrap();
        let (m, map) = g.minor(&[], &[]).unwrap();
        assert_eq!(m, g);
        assert_eq!(map.edge_origin, vec![0, 1, 2, 3]);
    }

    #[test]
    fn minor_composition_matches_single_minor() {
        // ((G - {0}) / {5}) then delete image of 3, contract image of 1
        let g = k4();
        let (m1, map1) = g.minor(&[0], &[5]).unwrap();
        let h2 = map1.quotient_edge(3).unwrap();
        let f2 = map1.quotient_edge(1).unwrap();
        let (m2, map2) = m1.minor(&[h2], &[f2]).unwrap();
        let (direct, direct_map) = g.minor(&[0, 3], &[5, 1]).unwrap();
        assert_eq!(m2.vertex_count(), direct.vertex_count());
        let composed: Vec<usize> = map2
            .edge_origin
            .iter()
            .map(|&e| map1.edge_origin[e])
            .collect();
        assert_eq!(composed, direct_map.edge_origin);
        assert_eq!(endpoint_multiset(&m2), endpoint_multiset(&direct));
    }
}
