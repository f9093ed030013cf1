use std::collections::VecDeque;

use crate::forest::BoundaryForest;
use crate::network::Network;

/// Connected components of a forest's edge set. Component ids are assigned
/// in increasing order of each component's smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    /// `None` for vertices left out (the wired vertex of a boundary forest).
    pub component_of: Vec<Option<usize>>,
    pub members: Vec<Vec<usize>>,
}

impl ComponentPartition {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn component(&self, v: usize) -> Option<usize> {
        self.component_of[v]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }
}

fn partition(network: &Network, edges: &[usize], skip: Option<usize>) -> ComponentPartition {
    let n = network.vertex_count();
    let mut in_forest = vec![false; network.edge_count()];
    for &e in edges {
        in_forest[e] = true;
    }
    let mut component_of = vec![None; n];
    let mut members = Vec::new();
    for s in 0..n {
        if component_of[s].is_some() || Some(s) == skip {
            continue;
        }
        let id = members.len();
        component_of[s] = Some(id);
        let mut list = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for oe in network.incident(x) {
                let y = oe.head(network);
                if in_forest[oe.edge] && component_of[y].is_none() && Some(y) != skip {
                    component_of[y] = Some(id);
                    list.push(y);
                    queue.push_back(y);
                }
            }
        }
        list.sort_unstable();
        members.push(list);
    }
    ComponentPartition {
        component_of,
        members,
    }
}

/// Components of the subgraph of `network` spanned by `edges` (every vertex
/// belongs to some component).
pub fn components(network: &Network, edges: &[usize]) -> ComponentPartition {
    partition(network, edges, None)
}

/// Components of a boundary forest with the wired vertex removed.
pub fn forest_components(f: &BoundaryForest<'_>) -> ComponentPartition {
    partition(f.network(), &f.edges(), Some(f.wired().wired_vertex()))
}
