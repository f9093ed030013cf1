//! Spanning trees of a finite network and boundary-attached forests of a
//! wired truncation.

use std::collections::VecDeque;

use num_traits::One;

use crate::error::{Error, Result};
use crate::network::{Network, OrientedEdge, Rational, UnionFind, WiredNetwork};

/// Sorted edge-id list, used as a canonical key for configurations.
pub type ConfigKey = Vec<usize>;

fn validate_spanning_tree(network: &Network, edges: &[usize]) -> Result<Vec<bool>> {
    let n = network.vertex_count();
    if edges.len() + 1 != n {
        return Err(Error::InvalidForest(format!(
            "expected {} edges, found {}",
            n - 1,
            edges.len()
        )));
    }
    let mut mark = vec![false; network.edge_count()];
    let mut dsu = UnionFind::new(n);
    for &e in edges {
        if e >= network.edge_count() {
            return Err(Error::InvalidForest(format!("edge {e} out of range")));
        }
        if std::mem::replace(&mut mark[e], true) {
            return Err(Error::InvalidForest(format!("edge {e} listed twice")));
        }
        let edge = network.edge(e);
        if !dsu.union(edge.u, edge.v) {
            return Err(Error::InvalidForest(format!("edge {e} closes a cycle")));
        }
    }
    Ok(mark)
}

/// Tree path between two vertices following only marked edges, as oriented
/// edges from `from` to `to`. Returns `None` if `to` is unreachable.
pub(crate) fn marked_path(
    network: &Network,
    marked: &[bool],
    from: usize,
    to: usize,
) -> Option<Vec<OrientedEdge>> {
    let mut via: Vec<Option<OrientedEdge>> = vec![None; network.vertex_count()];
    let mut seen = vec![false; network.vertex_count()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &oe in network.incident(x) {
            if !marked[oe.edge] {
                continue;
            }
            let y = oe.head(network);
            if !seen[y] {
                seen[y] = true;
                via[y] = Some(oe);
                queue.push_back(y);
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let mut path = Vec::new();
    let mut x = to;
    while x != from {
        let oe = via[x].expect("reached vertices have a predecessor");
        path.push(oe);
        x = oe.tail(network);
    }
    path.reverse();
    Some(path)
}

/// A spanning tree of a network, stored as an edge-membership mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree<'n> {
    network: &'n Network,
    in_tree: Vec<bool>,
}

impl<'n> SpanningTree<'n> {
    pub fn new(network: &'n Network, edges: &[usize]) -> Result<Self> {
        let in_tree = validate_spanning_tree(network, edges)?;
        Ok(SpanningTree { network, in_tree })
    }

    pub fn network(&self) -> &'n Network {
        self.network
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.in_tree[edge]
    }

    pub fn edges(&self) -> ConfigKey {
        (0..self.in_tree.len())
            .filter(|&e| self.in_tree[e])
            .collect()
    }

    pub fn key(&self) -> ConfigKey {
        self.edges()
    }

    /// Product of the conductances of the tree's edges.
    pub fn weight(&self) -> Rational {
        self.edges()
            .into_iter()
            .fold(Rational::one(), |acc, e| acc * self.network.conductance(e))
    }

    /// The unique simple path from `from` to `to` in the tree.
    pub fn path(&self, from: usize, to: usize) -> Vec<OrientedEdge> {
        marked_path(self.network, &self.in_tree, from, to).expect("spanning trees are connected")
    }

    pub fn is_valid(&self) -> bool {
        validate_spanning_tree(self.network, &self.edges()).is_ok()
    }

    pub(crate) fn swap_edges(&mut self, insert: usize, remove: usize) {
        debug_assert!(!self.in_tree[insert] && self.in_tree[remove]);
        self.in_tree[insert] = true;
        self.in_tree[remove] = false;
    }
}

/// A spanning tree of a wired network, viewed as a forest on the interior in
/// which every component hangs from the wired vertex. Each interior vertex
/// records its parent edge, oriented towards the wired vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryForest<'n> {
    wired: &'n WiredNetwork,
    in_forest: Vec<bool>,
    parent: Vec<Option<OrientedEdge>>,
}

impl<'n> BoundaryForest<'n> {
    /// Builds a forest from its edge set; parents are derived by a
    /// breadth-first search from the wired vertex in ascending edge order.
    pub fn from_edges(wired: &'n WiredNetwork, edges: &[usize]) -> Result<Self> {
        let in_forest = validate_spanning_tree(wired.network(), edges)?;
        let mut forest = BoundaryForest {
            wired,
            in_forest,
            parent: vec![None; wired.network().vertex_count()],
        };
        forest.orient_from(wired.wired_vertex());
        Ok(forest)
    }

    /// Builds a forest from explicit parent assignments, checking them.
    pub fn from_parts(
        wired: &'n WiredNetwork,
        edges: &[usize],
        parent: Vec<Option<OrientedEdge>>,
    ) -> Result<Self> {
        let in_forest = validate_spanning_tree(wired.network(), edges)?;
        let forest = BoundaryForest {
            wired,
            in_forest,
            parent,
        };
        forest.validate()?;
        Ok(forest)
    }

    pub fn wired(&self) -> &'n WiredNetwork {
        self.wired
    }

    pub fn network(&self) -> &'n Network {
        self.wired.network()
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.in_forest[edge]
    }

    pub fn edges(&self) -> ConfigKey {
        (0..self.in_forest.len())
            .filter(|&e| self.in_forest[e])
            .collect()
    }

    pub fn key(&self) -> ConfigKey {
        self.edges()
    }

    pub fn parent(&self, v: usize) -> Option<OrientedEdge> {
        self.parent[v]
    }

    pub fn parent_vertex(&self, v: usize) -> Option<usize> {
        self.parent[v].map(|oe| oe.head(self.network()))
    }

    /// Interior vertices whose parent is `v`, ascending.
    pub fn children(&self, v: usize) -> Vec<usize> {
        let net = self.network();
        let mut out: Vec<usize> = net
            .incident(v)
            .iter()
            .filter(|oe| self.in_forest[oe.edge])
            .map(|oe| oe.head(net))
            .filter(|&y| y != v && self.parent[y].map(|p| p.head(net)) == Some(v))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The parent chain from `v` up to and including the wired vertex.
    pub fn chain(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut x = v;
        while let Some(p) = self.parent_vertex(x) {
            out.push(p);
            x = p;
            if out.len() > self.parent.len() {
                break;
            }
        }
        out
    }

    /// The same edge set viewed as a spanning tree of the wired network.
    pub fn as_tree(&self) -> SpanningTree<'n> {
        SpanningTree {
            network: self.wired.network(),
            in_tree: self.in_forest.clone(),
        }
    }

    /// Checks every structural invariant: the edges form a spanning tree of
    /// the wired network, parent edges are forest edges with tail `v`, and
    /// every parent chain reaches the wired vertex without repeating.
    pub fn validate(&self) -> Result<()> {
        let net = self.network();
        validate_spanning_tree(net, &self.edges())?;
        let w = self.wired.wired_vertex();
        if self.parent[w].is_some() {
            return Err(Error::InvalidForest("wired vertex has a parent".into()));
        }
        for &v in self.wired.interior() {
            let p = self.parent[v]
                .ok_or_else(|| Error::InvalidForest(format!("vertex {v} has no parent")))?;
            if !self.in_forest[p.edge] || p.tail(net) != v {
                return Err(Error::InvalidForest(format!("bad parent edge at {v}")));
            }
            let chain = self.chain(v);
            if chain.len() > net.vertex_count() || *chain.last().unwrap() != w {
                return Err(Error::InvalidForest(format!(
                    "parent chain from {v} does not reach the wired vertex"
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn in_forest_mut(&mut self) -> &mut Vec<bool> {
        &mut self.in_forest
    }

    /// Derives parents for the whole forest by a breadth-first search from
    /// the wired vertex, visiting neighbours in ascending oriented-edge order.
    fn orient_from(&mut self, root: usize) {
        let net = self.wired.network();
        let mut seen = vec![false; net.vertex_count()];
        seen[root] = true;
        self.parent[root] = None;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for oe in self.sorted_forest_edges(x) {
                let y = oe.head(net);
                if !seen[y] {
                    seen[y] = true;
                    self.parent[y] = Some(oe.reversed());
                    queue.push_back(y);
                }
            }
        }
    }

    fn sorted_forest_edges(&self, x: usize) -> Vec<OrientedEdge> {
        let mut next: Vec<OrientedEdge> = self
            .network()
            .incident(x)
            .iter()
            .copied()
            .filter(|oe| self.in_forest[oe.edge])
            .collect();
        next.sort_unstable();
        next
    }

    /// Recomputes parents for the component of interior vertex `x` only:
    /// locate its unique forest edge to the wired vertex, then traverse the
    /// component from there in ascending oriented-edge order.
    pub(crate) fn reorient_component(&mut self, x: usize) {
        let net = self.wired.network();
        let w = self.wired.wired_vertex();
        let mut seen = vec![false; net.vertex_count()];
        seen[w] = true;
        seen[x] = true;
        let mut members = vec![x];
        let mut attachment = None;
        let mut i = 0;
        while i < members.len() {
            let y = members[i];
            i += 1;
            for oe in self.sorted_forest_edges(y) {
                let z = oe.head(net);
                if z == w {
                    attachment = attachment.or(Some(oe));
                } else if !seen[z] {
                    seen[z] = true;
                    members.push(z);
                }
            }
        }
        let attach = attachment.expect("every component hangs from the wired vertex");
        let start = attach.tail(net);
        self.parent[start] = Some(attach);
        let mut visited = vec![false; net.vertex_count()];
        visited[w] = true;
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(y) = queue.pop_front() {
            for oe in self.sorted_forest_edges(y) {
                let z = oe.head(net);
                if !visited[z] {
                    visited[z] = true;
                    self.parent[z] = Some(oe.reversed());
                    queue.push_back(z);
                }
            }
        }
    }
}

impl<'n> BoundaryForest<'n> {
    /// Assembles a forest produced by a sampler that already knows the
    /// parent of every interior vertex.
    pub(crate) fn from_sampled(
        wired: &'n WiredNetwork,
        in_forest: Vec<bool>,
        parent: Vec<Option<OrientedEdge>>,
    ) -> Self {
        let forest = BoundaryForest {
            wired,
            in_forest,
            parent,
        };
        debug_assert!(forest.validate().is_ok());
        forest
    }
}

impl<'n> SpanningTree<'n> {
    pub(crate) fn from_mask(network: &'n Network, in_tree: Vec<bool>) -> Self {
        let tree = SpanningTree { network, in_tree };
        debug_assert!(tree.is_valid());
        tree
    }
}
