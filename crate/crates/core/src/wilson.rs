//! Wilson's algorithm: spanning trees from loop-erased random walks, the
//! deferred-vertex variant, and samplers for free and wired truncations.

use rand::Rng;

use crate::error::{Error, Result};
use crate::forest::{BoundaryForest, SpanningTree};
use crate::network::{Network, OrientedEdge, WiredNetwork};
use crate::walk::walk_step;

/// Walks longer than this are reported as [`Error::StepCapExceeded`].
pub const STEP_CAP: u64 = 1_000_000_000;

/// Grows the tree from `root` by attaching loop-erased walks started from
/// each vertex of `order` in turn. Loops are erased as soon as they close.
/// Returns the parent edge of every non-root vertex, oriented towards `root`.
fn grow<R: Rng + ?Sized>(
    network: &Network,
    root: usize,
    order: &[usize],
    rng: &mut R,
) -> Result<Vec<Option<OrientedEdge>>> {
    const OFF_PATH: usize = usize::MAX;
    let n = network.vertex_count();
    let mut in_tree = vec![false; n];
    in_tree[root] = true;
    let mut parent: Vec<Option<OrientedEdge>> = vec![None; n];
    let mut on_path = vec![OFF_PATH; n];
    let mut vertices: Vec<usize> = Vec::new();
    let mut steps: Vec<OrientedEdge> = Vec::new();
    for &start in order {
        if in_tree[start] {
            continue;
        }
        vertices.clear();
        steps.clear();
        vertices.push(start);
        on_path[start] = 0;
        let mut taken: u64 = 0;
        loop {
            let x = *vertices.last().expect("path is nonempty");
            let step = walk_step(network, x, rng)?;
            taken += 1;
            if taken > STEP_CAP {
                return Err(Error::StepCapExceeded { cap: STEP_CAP });
            }
            let y = step.head(network);
            if in_tree[y] {
                steps.push(step);
                break;
            }
            match on_path[y] {
                OFF_PATH => {
                    on_path[y] = vertices.len();
                    vertices.push(y);
                    steps.push(step);
                }
                k => {
                    for v in vertices.drain(k + 1..) {
                        on_path[v] = OFF_PATH;
                    }
                    steps.truncate(k);
                }
            }
        }
        for (&v, &step) in vertices.iter().zip(&steps) {
            in_tree[v] = true;
            on_path[v] = OFF_PATH;
            parent[v] = Some(step);
        }
    }
    Ok(parent)
}

fn edge_mask(network: &Network, parent: &[Option<OrientedEdge>]) -> Vec<bool> {
    let mut mask = vec![false; network.edge_count()];
    for p in parent.iter().flatten() {
        mask[p.edge] = true;
    }
    mask
}

fn check_order(network: &Network, root: usize, order: &[usize]) -> Result<()> {
    let n = network.vertex_count();
    if root >= n {
        return Err(Error::InvalidVertex { vertex: root });
    }
    let mut seen = vec![false; n];
    seen[root] = true;
    for &v in order {
        if v >= n {
            return Err(Error::InvalidVertex { vertex: v });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidVertexOrder(format!(
                "vertex {v} repeated or equal to the root"
            )));
        }
    }
    if order.len() + 1 != n {
        return Err(Error::InvalidVertexOrder(format!(
            "order lists {} of the {} non-root vertices",
            order.len(),
            n - 1
        )));
    }
    Ok(())
}

/// A spanning tree with law proportional to the product of its
/// conductances. `vertex_order` must enumerate every vertex except `root`;
/// the law does not depend on it.
pub fn wilson_ust<'n, R: Rng + ?Sized>(
    network: &'n Network,
    root: usize,
    vertex_order: &[usize],
    rng: &mut R,
) -> Result<SpanningTree<'n>> {
    check_order(network, root, vertex_order)?;
    let parent = grow(network, root, vertex_order, rng)?;
    Ok(SpanningTree::from_mask(
        network,
        edge_mask(network, &parent),
    ))
}

/// Wilson's algorithm that first runs from every vertex outside `deferred`
/// (ascending id), then from the vertices of `deferred` in the given order.
pub fn wilson_deferred<'n, R: Rng + ?Sized>(
    network: &'n Network,
    root: usize,
    deferred: &[usize],
    rng: &mut R,
) -> Result<SpanningTree<'n>> {
    let n = network.vertex_count();
    let mut is_deferred = vec![false; n];
    for &w in deferred {
        if w >= n {
            return Err(Error::InvalidVertex { vertex: w });
        }
        if w == root {
            return Err(Error::InvalidVertexOrder(
                "deferred set contains the root".into(),
            ));
        }
        is_deferred[w] = true;
    }
    let mut order: Vec<usize> = (0..n).filter(|&v| v != root && !is_deferred[v]).collect();
    order.extend_from_slice(deferred);
    wilson_ust(network, root, &order, rng)
}

/// Weighted spanning tree of a free truncation, rooted at vertex 0.
pub fn sample_fusf_truncation<'n, R: Rng + ?Sized>(
    network: &'n Network,
    rng: &mut R,
) -> Result<SpanningTree<'n>> {
    let order: Vec<usize> = (1..network.vertex_count()).collect();
    wilson_ust(network, 0, &order, rng)
}

/// Weighted spanning tree of a wired truncation rooted at the wired vertex,
/// returned as a boundary forest with every parent pointing towards the
/// wired vertex.
pub fn sample_wusf_truncation<'n, R: Rng + ?Sized>(
    wired: &'n WiredNetwork,
    rng: &mut R,
) -> Result<BoundaryForest<'n>> {
    let network = wired.network();
    let parent = grow(network, wired.wired_vertex(), wired.interior(), rng)?;
    let mask = edge_mask(network, &parent);
    Ok(BoundaryForest::from_sampled(wired, mask, parent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngHandle;

    #[test]
    fn path_has_one_tree() {
        let path = Network::from_unit_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        for seed in 0..20 {
            let mut rng = RngHandle::new(seed);
            let t = wilson_ust(&path, 2, &[3, 0, 1], &mut rng).unwrap();
            assert_eq!(t.edges(), vec![0, 1, 2]);
            let d = wilson_deferred(&path, 0, &[1, 2, 3], &mut rng).unwrap();
            assert_eq!(d.edges(), vec![0, 1, 2]);
        }
    }

    #[test]
    fn rejects_bad_orders() {
        let tri = Network::from_unit_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let mut rng = RngHandle::new(0);
        assert!(matches!(
            wilson_ust(&tri, 0, &[1], &mut rng),
            Err(Error::InvalidVertexOrder(_))
        ));
        assert!(matches!(
            wilson_ust(&tri, 0, &[1, 1], &mut rng),
            Err(Error::InvalidVertexOrder(_))
        ));
        assert!(matches!(
            wilson_ust(&tri, 0, &[0, 1], &mut rng),
            Err(Error::InvalidVertexOrder(_))
        ));
        assert!(wilson_deferred(&tri, 0, &[0], &mut rng).is_err());
    }

    #[test]
    fn empty_deferred_set_matches_plain_wilson() {
        let k4 =
            Network::from_unit_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        for seed in 0..50 {
            let a = wilson_ust(&k4, 0, &[1, 2, 3], &mut RngHandle::new(seed)).unwrap();
            let b = wilson_deferred(&k4, 0, &[], &mut RngHandle::new(seed)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn samples_are_spanning_trees() {
        let net = Network::from_integer_edges(
            5,
            &[
                (0, 1, 1),
                (1, 2, 2),
                (2, 3, 3),
                (3, 4, 1),
                (4, 0, 5),
                (1, 3, 2),
                (2, 2, 1),
                (0, 1, 4),
            ],
        )
        .unwrap();
        let mut rng = RngHandle::new(9);
        for _ in 0..500 {
            let t = sample_fusf_truncation(&net, &mut rng).unwrap();
            assert_eq!(t.edges().len(), 4);
            assert!(t.is_valid());
        }
    }

    #[test]
    fn wired_samples_hang_from_the_boundary() {
        let grid = crate::generators::grid_box(2, 3, true).unwrap();
        let wired = grid.into_wired().unwrap();
        let mut rng = RngHandle::new(17);
        for _ in 0..1000 {
            let f = sample_wusf_truncation(&wired, &mut rng).unwrap();
            assert!(f.validate().is_ok());
            assert_eq!(f.edges().len(), wired.interior().len());
            for &v in wired.interior() {
                assert_eq!(*f.chain(v).last().unwrap(), wired.wired_vertex());
            }
        }
    }

    #[test]
    fn wired_path_example() {
        // path 0-1-2 wired at both ends: the single interior vertex attaches
        let path = Network::from_unit_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let (wired, _) = path.wired_contraction(&[1]).unwrap();
        let mut rng = RngHandle::new(1);
        let f = sample_wusf_truncation(&wired, &mut rng).unwrap();
        assert_eq!(f.edges().len(), 1);
        assert_eq!(
            f.parent_vertex(wired.interior()[0]),
            Some(wired.wired_vertex())
        );
    }
}
